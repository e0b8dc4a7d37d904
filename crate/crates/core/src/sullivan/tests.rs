use super::*;
use crate::graph_core::{collapse, edges};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The other resolution of the 4-valent vertex obtained by collapsing the
/// black-black edge at `h`, negated: equal to the input in the quotient.
fn slide(og: &OrientedGraph, h: usize) -> OrientedGraph {
    let merged = collapse(og, h).unwrap();
    let four = (0..merged.graph.vertices.len())
        .find(|x| merged.graph.vertices[*x].color == Color::Black && merged.graph.vertices[*x].cyclic.len() == 4)
        .unwrap();
    let res = vertex_blowups(&merged, four);
    assert_eq!(res.len(), 2, "a 4-valent vertex has two resolutions");
    let me = crate::graph_core::canonical_form(og);
    let other = if crate::graph_core::canonical_form(&res[0]) == me { &res[1] } else { &res[0] };
    assert!(crate::graph_core::canonical_form(&res[0]) == me || crate::graph_core::canonical_form(&res[1]) == me);
    other.negate()
}

fn black_black_edges(g: &BwGraph) -> Vec<usize> {
    edges(g)
        .into_iter()
        .filter(|(a, b)| {
            let (va, vb) = (g.half_edges[*a].source.unwrap(), g.half_edges[*b].source.unwrap());
            va != vb && g.vertices[va].color == Color::Black && g.vertices[vb].color == Color::Black
        })
        .map(|(a, _)| a)
        .collect()
}

#[test]
fn l_n_is_one_circle_with_leaves() {
    for n in 1..=5 {
        let d = l_n(n).unwrap();
        assert_eq!(d.graph.vertices.len(), 1);
        assert_eq!(d.graph.leaves().len(), n);
        assert_eq!(degree(&d.graph), n as i64 - 1);
        let c = classical(&d);
        assert_eq!(c.circles[0], (1..=n as u32).map(Site::Leaf).collect::<Vec<_>>());
        assert!(c.chords.is_empty());
    }
    assert!(!is_cycle(&l_n(3).unwrap()).unwrap());
    let dl3 = sd_differential(&single(&l_n(3).unwrap())).unwrap();
    assert_eq!(dl3.len(), 3, "one term per adjacent pair of sites");
}

#[test]
fn resolutions_of_a_four_valent_vertex_cancel() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..300 {
        let og = { let c = 1 + rng.gen_range(0..2); random_representative(&mut rng, c, 8) };
        for h in black_black_edges(&og.graph) {
            let merged = collapse(&og, h).unwrap();
            let four = (0..merged.graph.vertices.len())
                .find(|x| merged.graph.vertices[*x].color == Color::Black && merged.graph.vertices[*x].cyclic.len() == 4)
                .unwrap();
            let res = vertex_blowups(&merged, four);
            assert_eq!(res.len(), 2);
            let sum = normalize(&[(res[0].clone(), 1), (res[1].clone(), 1)]).unwrap();
            assert!(sum.is_empty(), "resolutions of {:?} do not cancel: {:?}", merged, sum);
            checked += 1;
        }
    }
    assert!(checked > 20, "only {} four-valent vertices sampled", checked);
}

#[test]
fn normal_form_is_constant_along_slides() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let mut og = { let c = 1 + rng.gen_range(0..2); random_representative(&mut rng, c, 8) };
        let start = from_bw(&og).unwrap();
        for _ in 0..6 {
            let es = black_black_edges(&og.graph);
            if es.is_empty() {
                break;
            }
            og = slide(&og, es[rng.gen_range(0..es.len())]);
            assert_eq!(from_bw(&og).unwrap(), start);
        }
    }
}

#[test]
fn any_planar_tree_shape_gives_the_same_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in 1..=4 {
        for d in [mu_g(g).unwrap(), t_g(g).unwrap()] {
            for _ in 0..5 {
                let rep = expand_random(&d, &mut rng).unwrap();
                assert_eq!(from_bw(&rep).unwrap(), Some(d.clone()));
                assert_eq!(degree(&rep.graph), degree(&d.graph));
            }
        }
    }
}

#[test]
fn mu_and_t_are_cycles_of_degree_2g_plus_1() {
    for g in 1..=4 {
        for (name, rep) in [("mu", mu_g_representative(g).unwrap()), ("t", t_g_representative(g).unwrap())] {
            let r = face_report(&rep).unwrap();
            assert_eq!(r.degree, 2 * g as i64 + 1, "{}_{}", name, g);
            assert_eq!(r.faces, 2 * g + 2, "{}_{}", name, g);
            assert!(r.even && r.paired && r.cycle, "{}_{}: {:?}", name, g, r);
        }
        assert!(is_cycle(&mu_g(g).unwrap()).unwrap());
        assert!(is_cycle(&t_g(g).unwrap()).unwrap());
    }
}

#[test]
fn mu_and_t_leaves_and_surfaces() {
    for g in 1..=4usize {
        let mu = mu_g_representative(g).unwrap();
        let t = t_g_representative(g).unwrap();
        assert_eq!(mu.graph.leaves().len(), g + 1);
        assert_eq!(t.graph.leaves().len(), 1);
        // each leaf of mu_g bounds its own face; with the white circle, g+2 boundaries
        let (b, chi) = mu.graph.surface_data().unwrap();
        assert_eq!((b, mu.graph.genus().unwrap()), (g + 2, 0), "mu_{} chi {}", g, chi);
        let (b, _) = t.graph.surface_data().unwrap();
        assert_eq!((b, t.graph.genus().unwrap()), (2, g as i64), "t_{}", g);
    }
}

#[test]
fn mu_1_classical_picture() {
    let c = classical(&mu_g(1).unwrap());
    assert_eq!(c.circles.len(), 1);
    assert_eq!(c.circles[0].len(), 4);
    let leaves: Vec<u32> = c.circles[0].iter().filter_map(|s| if let Site::Leaf(l) = s { Some(*l) } else { None }).collect();
    assert_eq!(leaves, vec![1, 2]);
    assert_eq!(c.chords.len(), 1);
    assert_eq!(c.chords[0].len(), 2);
}

#[test]
fn rejects_non_trivalent_and_kills_black_cycles() {
    let merged = {
        let t = t_g_representative(2).unwrap();
        let h = black_black_edges(&t.graph)[0];
        collapse(&t, h).unwrap()
    };
    assert!(matches!(from_bw(&merged), Err(SullivanError::NotTrivalent(_, 4))));
    // a tadpole: a black vertex with a loop, joined to the white vertex
    let g = BwGraph {
        vertices: vec![
            Vertex { color: Color::White, label: Some(1), start: Some(0), cyclic: vec![0] },
            Vertex { color: Color::Black, label: None, start: None, cyclic: vec![1, 2, 3] },
        ],
        half_edges: vec![
            HalfEdge { source: Some(0), partner: 1, leaf: None },
            HalfEdge { source: Some(1), partner: 0, leaf: None },
            HalfEdge { source: Some(1), partner: 3, leaf: None },
            HalfEdge { source: Some(1), partner: 2, leaf: None },
        ],
    };
    assert_eq!(from_bw(&OrientedGraph::new(g, 1)).unwrap(), None);
}

#[test]
fn differential_squares_to_zero_on_random_diagrams() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nonzero = 0;
    for _ in 0..150 {
        let og = { let c = 1 + rng.gen_range(0..2); random_representative(&mut rng, c, 8) };
        let x = normalize(&[(og, 1)]).unwrap();
        let dx = sd_differential(&x).unwrap();
        if !dx.is_empty() {
            nonzero += 1;
        }
        assert!(sd_differential(&dx).unwrap().is_empty());
    }
    assert!(nonzero > 50);
}

#[test]
fn bad_genus() {
    assert_eq!(mu_g(0), Err(SullivanError::Genus(0)));
    assert_eq!(t_g(0), Err(SullivanError::Genus(0)));
}
