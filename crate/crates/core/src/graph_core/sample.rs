//! Seeded random black and white graphs for property suites.

use super::blowup::vertex_blowups;
use super::{BwGraph, Color, Gen, HalfEdge, Leaf, OrientedGraph, Vertex};
use rand::Rng;

/// Joins leaves `a` and `b` to a new trivalent black vertex carrying one new
/// leaf. The new vertex and its half-edges are appended to the orientation.
pub fn join_leaves(og: &OrientedGraph, a: usize, b: usize) -> OrientedGraph {
    let g = &og.graph;
    assert!(a != b && g.is_leaf(a) && g.is_leaf(b), "join needs two distinct leaves");
    let mut out = g.clone();
    let v = out.vertices.len();
    let nh = out.half_edges.len();
    let (x, y, z) = (nh, nh + 1, nh + 2);
    out.half_edges[a].partner = x;
    out.half_edges[a].leaf = None;
    out.half_edges[b].partner = y;
    out.half_edges[b].leaf = None;
    out.half_edges.push(HalfEdge { source: Some(v), partner: a, leaf: None });
    out.half_edges.push(HalfEdge { source: Some(v), partner: b, leaf: None });
    out.half_edges.push(HalfEdge { source: Some(v), partner: z, leaf: Some(Leaf::In(u32::MAX)) });
    out.vertices.push(Vertex { color: Color::Black, label: None, start: None, cyclic: vec![x, y, z] });
    let mut gens = og.graph.standard_order();
    gens.insert(og.graph.vertices.len(), Gen::V(v));
    gens.extend([Gen::H(x), Gen::H(y), Gen::H(z)]);
    let sign = og.sign * out.sign_of_ordering(&gens);
    OrientedGraph { graph: renumber_leaves(&out), sign }
}

/// Renumbers all leaves `In(1..)` in half-edge order.
pub fn renumber_leaves(g: &BwGraph) -> BwGraph {
    let mut out = g.clone();
    let mut next = 1;
    for h in 0..out.half_edges.len() {
        if out.half_edges[h].partner == h {
            out.half_edges[h].leaf = Some(Leaf::In(next));
            next += 1;
        }
    }
    out
}

fn white(n: usize, label: u32) -> BwGraph {
    let mut g = BwGraph::white_corolla(n);
    g.vertices[0].label = Some(label);
    g
}

/// A random oriented black and white graph of degree at most `max_degree`:
/// one or two white corollas, a few leaf joins through trivalent black
/// vertices, and a few random blow-up steps.
pub fn random_bw_graph<R: Rng>(rng: &mut R, max_degree: i64) -> OrientedGraph {
    loop {
        let mut g = white(rng.gen_range(1..=5), 1);
        if rng.gen_bool(0.35) {
            g = g.disjoint_union(&white(rng.gen_range(1..=4), 2));
        }
        let mut og = OrientedGraph::new(renumber_leaves(&g), if rng.gen_bool(0.5) { 1 } else { -1 });
        for _ in 0..rng.gen_range(0..=3) {
            let leaves = og.graph.leaves();
            if leaves.len() < 3 {
                break;
            }
            let a = leaves[rng.gen_range(0..leaves.len())];
            let b = leaves[rng.gen_range(0..leaves.len())];
            if a != b {
                og = join_leaves(&og, a, b);
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            let v = rng.gen_range(0..og.graph.vertices.len());
            let terms = vertex_blowups(&og, v);
            if !terms.is_empty() {
                og = terms[rng.gen_range(0..terms.len())].clone();
            }
        }
        if og.graph.degree() <= max_degree && og.graph.validate().is_ok() {
            return og;
        }
    }
}
