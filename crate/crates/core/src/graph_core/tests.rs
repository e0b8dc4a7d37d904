use super::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// m_k oriented as h_1∧…∧h_k∧v∧h_0.
fn mk(k: usize) -> OrientedGraph {
    let g = BwGraph::corolla(k);
    let mut gens: Vec<Gen> = (0..k).map(Gen::H).collect();
    gens.push(Gen::V(0));
    gens.push(Gen::H(k));
    OrientedGraph::from_ordering(g, &gens)
}

/// l_n oriented as h_1∧…∧h_n∧w.
fn ln(n: usize) -> OrientedGraph {
    let g = BwGraph::white_corolla(n);
    let mut gens: Vec<Gen> = (0..n).map(Gen::H).collect();
    gens.push(Gen::V(0));
    OrientedGraph::from_ordering(g, &gens)
}

/// Permutation parity from the cycle decomposition.
fn parity_by_cycles(p: &[usize]) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1i8;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn random_relabel(og: &OrientedGraph, rng: &mut ChaCha8Rng) -> OrientedGraph {
    let mut vp: Vec<usize> = (0..og.graph.vertices.len()).collect();
    let mut hp: Vec<usize> = (0..og.graph.half_edges.len()).collect();
    vp.shuffle(rng);
    hp.shuffle(rng);
    og.relabel(&vp, &hp)
}

#[test]
fn permutation_sign_matches_cycle_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 0..9 {
        for _ in 0..30 {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            assert_eq!(permutation_sign(&p), parity_by_cycles(&p));
        }
    }
}

#[test]
fn orientation_reorderings() {
    let g = BwGraph::corolla(2);
    let a = OrientedGraph::from_ordering(g.clone(), &[Gen::H(0), Gen::H(1), Gen::V(0), Gen::H(2)]);
    let b = OrientedGraph::from_ordering(g.clone(), &[Gen::V(0), Gen::H(0), Gen::H(1), Gen::H(2)]);
    assert_eq!(a.sign, b.sign);
    let c = OrientedGraph::from_ordering(g, &[Gen::H(1), Gen::H(0), Gen::V(0), Gen::H(2)]);
    let (ca, cc) = (canonical_form(&a).unwrap(), canonical_form(&c).unwrap());
    assert_eq!(ca.graph, cc.graph);
    assert_eq!(ca.sign, -cc.sign);
}

#[test]
fn exceptional_and_corolla_boundary_cycles() {
    let e = BwGraph::exceptional(Some(Leaf::In(1)));
    assert_eq!(e.boundary_cycles().unwrap(), vec![vec![0]]);
    let m2 = BwGraph::corolla(2);
    let cyc = m2.boundary_cycles().unwrap();
    assert_eq!(cyc.len(), 1);
    assert_eq!(cyc[0].len(), 6);
}

#[test]
fn white_corolla_has_one_outer_boundary() {
    // The fattened l_3 is an annulus: the white circle plus one outer face
    // through all three leaves.
    let l3 = BwGraph::white_corolla(3);
    let cyc = l3.boundary_cycles().unwrap();
    assert_eq!(cyc.len(), 1);
    assert_eq!(cyc[0].len(), 6);
    assert_eq!(l3.surface_data().unwrap(), (2, 0));
    assert_eq!(l3.genus().unwrap(), 0);
}

#[test]
fn degrees() {
    assert_eq!(BwGraph::corolla(2).degree(), 0);
    assert_eq!(BwGraph::corolla(3).degree(), 1);
    for n in 1..8 {
        assert_eq!(BwGraph::white_corolla(n).degree(), n as i64 - 1);
    }
}

#[test]
fn validate_rejects_broken_involution() {
    let mut g = BwGraph::corolla(2);
    g.half_edges[0].partner = 1;
    assert!(matches!(g.validate(), Err(GraphError::Malformed(_))));
    assert!(g.boundary_cycles().is_err());
}

#[test]
fn dl3_has_six_terms() {
    let d = blowups(&ln(3));
    assert_eq!(d.len(), 6);
    let mut by_block = std::collections::BTreeMap::new();
    for (g, c) in &d {
        assert_eq!(c.abs(), 1);
        let black = g.vertices.iter().find(|v| v.color == Color::Black).unwrap();
        *by_block.entry(black.cyclic.len() - 1).or_insert(0) += 1;
        assert_eq!(g.degree(), 1);
    }
    assert_eq!(by_block.get(&2), Some(&3));
    assert_eq!(by_block.get(&3), Some(&3));
}

#[test]
fn blowup_counts_at_single_vertex() {
    for k in 3..8 {
        let d = blowups(&mk(k));
        assert_eq!(d.len(), k * (k - 1) / 2 - 1, "m_{}", k);
    }
    for n in 2..7 {
        assert_eq!(blowups(&ln(n)).len(), n * (n - 1));
    }
}

#[test]
fn d_squared_vanishes_on_corollas() {
    for k in 2..8 {
        let s: GraphSum = blowups(&mk(k));
        assert!(differential(&s).is_empty(), "m_{}", k);
    }
    for n in 1..7 {
        let s = blowups(&ln(n));
        assert!(differential(&s).is_empty(), "l_{}", n);
    }
}

#[test]
fn random_graphs_d_squared_and_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let g = random_bw_graph(&mut rng, 4);
        let d = blowups(&g);
        for h in d.keys() {
            assert_eq!(h.degree(), g.graph.degree() - 1);
            assert_eq!(
                h.boundary_cycles().unwrap().len(),
                g.graph.boundary_cycles().unwrap().len(),
                "face count changes under blow-up"
            );
        }
        assert!(differential(&d).is_empty(), "d^2 != 0 on {:?}", g);
    }
}

#[test]
fn canonical_form_is_label_invariant_and_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = random_bw_graph(&mut rng, 4);
        let c = canonical_form(&g);
        if let Some(c) = &c {
            assert_eq!(canonical_form(c).as_ref(), Some(c));
        }
        for _ in 0..100 {
            let r = random_relabel(&g, &mut rng);
            assert_eq!(canonical_form(&r), c);
        }
    }
}

#[test]
fn collapse_of_two_vertex_tree_is_m3() {
    // m_2∘(m_2+id): lower vertex 0 with inputs (e, l3) and root; upper
    // vertex 1 with inputs (l1, l2) and output e.
    let he = |s, p, leaf| HalfEdge { source: Some(s), partner: p, leaf };
    let g = BwGraph {
        vertices: vec![
            Vertex { color: Color::Black, label: None, start: None, cyclic: vec![0, 1, 2] },
            Vertex { color: Color::Black, label: None, start: None, cyclic: vec![3, 4, 5] },
        ],
        half_edges: vec![
            he(0, 5, None),
            he(0, 1, Some(Leaf::In(3))),
            he(0, 2, Some(Leaf::Out(1))),
            he(1, 3, Some(Leaf::In(1))),
            he(1, 4, Some(Leaf::In(2))),
            he(1, 0, None),
        ],
    };
    let c = collapse(&OrientedGraph::new(g, 1), 0).unwrap();
    let m3 = canonical_form(&OrientedGraph::new(BwGraph::corolla(3), 1)).unwrap();
    assert_eq!(canonical_form(&c).unwrap().graph, m3.graph);
}

#[test]
fn collapse_rejections() {
    let mut g = BwGraph::white_corolla(2);
    g.half_edges[0].partner = 1;
    g.half_edges[1].partner = 0;
    g.half_edges[0].leaf = None;
    g.half_edges[1].leaf = None;
    assert_eq!(collapse(&OrientedGraph::new(g, 1), 0), Err(GraphError::LoopEdge(0)));
    let ww = BwGraph::white_corolla(1).disjoint_union(&BwGraph::white_corolla(1));
    let mut ww = ww;
    ww.half_edges[0] = HalfEdge { source: Some(0), partner: 1, leaf: None };
    ww.half_edges[1] = HalfEdge { source: Some(1), partner: 0, leaf: None };
    ww.vertices[1].label = Some(2);
    assert_eq!(collapse(&OrientedGraph::new(ww, 1), 0), Err(GraphError::WhiteWhite(0)));
    assert_eq!(collapse(&mk(2), 0), Err(GraphError::NotAnEdge(0)));
}

#[test]
fn blowup_then_collapse_round_trip() {
    // Collapsing the new edge of a single blow-up recovers the graph with
    // its orientation, except for white splits whose block holds the start
    // away from its first slot: the start then lands on the block's first
    // half-edge, which is a different decorated graph.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for _ in 0..60 {
        let g = random_bw_graph(&mut rng, 4);
        let Some(cg) = canonical_form(&g) else { continue };
        let nh = g.graph.half_edges.len();
        for v in 0..g.graph.vertices.len() {
            for b in super::blowup::vertex_blowups(&g, v) {
                let vert = &g.graph.vertices[v];
                if let Some(s) = vert.start {
                    let block = &b.graph.vertices.last().unwrap().cyclic;
                    if block.contains(&s) && block[0] != s {
                        continue;
                    }
                }
                let c = collapse(&b, nh).unwrap();
                assert_eq!(canonical_form(&c).as_ref(), Some(&cg));
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let g = random_bw_graph(&mut rng, 3);
        let j = to_json(&g);
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(from_json(&back).unwrap(), g);
        assert!(to_dot(&g).starts_with("graph G {"));
    }
}

#[test]
fn orientation_reversing_automorphism_kills_graph() {
    // A 4-valent black vertex with unlabeled leaves has the rotation as an
    // automorphism, a 4-cycle on half-edges, hence odd.
    let mut g = BwGraph::corolla(3);
    for h in g.half_edges.iter_mut() {
        h.leaf = None;
    }
    assert!(canonical_form(&OrientedGraph::new(g.clone(), 1)).is_none());
    // A 5-valent one has an even rotation and survives.
    let mut g5 = BwGraph::corolla(4);
    for h in g5.half_edges.iter_mut() {
        h.leaf = None;
    }
    assert!(canonical_form(&OrientedGraph::new(g5, 1)).is_some());
    // Two identical components of odd size swap with an odd sign.
    let mut one = BwGraph::white_corolla(2);
    for h in one.half_edges.iter_mut() {
        h.leaf = None;
    }
    one.vertices[0].label = None;
    let two = one.disjoint_union(&one);
    assert!(canonical_form(&OrientedGraph::new(two, 1)).is_none());
}

proptest::proptest! {
    #[test]
    fn relabeling_preserves_canonical_form(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_bw_graph(&mut rng, 4);
        let r = random_relabel(&g, &mut rng);
        proptest::prop_assert_eq!(canonical_form(&g), canonical_form(&r));
        for h in blowups(&g).keys() {
            proptest::prop_assert_eq!(h.degree(), g.graph.degree() - 1);
        }
    }
}
