//! Edge collapse and its inverse, the blow-up differential.
//!
//! Orientation rule: if a graph is oriented as v1∧v2∧h1∧h2∧X, where h1 and
//! h2 are the half-edges of an edge e at v1 and v2, then G/e is oriented as
//! v∧X with v the merged vertex. Blow-ups carry the orientation obtained by
//! reading this rule backwards.

use super::{add_term, BwGraph, Color, Gen, GraphError, GraphSum, HalfEdge, OrientedGraph, Vertex};
use std::collections::BTreeSet;

/// Internal edges as pairs (h, partner) with h < partner.
pub fn edges(g: &BwGraph) -> Vec<(usize, usize)> {
    (0..g.half_edges.len())
        .filter_map(|h| {
            let p = g.half_edges[h].partner;
            (h < p).then_some((h, p))
        })
        .collect()
}

/// Collapses the edge containing half-edge `h`.
pub fn collapse(og: &OrientedGraph, h: usize) -> Result<OrientedGraph, GraphError> {
    let g = &og.graph;
    g.validate()?;
    let p = g.half_edges[h].partner;
    if p == h {
        return Err(GraphError::NotAnEdge(h));
    }
    let (va, vb) = (g.half_edges[h].source.unwrap(), g.half_edges[p].source.unwrap());
    if va == vb {
        return Err(GraphError::LoopEdge(h));
    }
    let (ca, cb) = (g.vertices[va].color, g.vertices[vb].color);
    if ca == Color::White && cb == Color::White {
        return Err(GraphError::WhiteWhite(h));
    }
    // v1 keeps its index and colour; a white end is always v1
    let (v1, v2, h1, h2) = if cb == Color::White { (vb, va, p, h) } else { (va, vb, h, p) };
    let after = |v: usize, x: usize| -> Vec<usize> {
        let cyc = &g.vertices[v].cyclic;
        let pos = cyc.iter().position(|y| *y == x).unwrap();
        (1..cyc.len()).map(|i| cyc[(pos + i) % cyc.len()]).collect()
    };
    let part1 = after(v1, h1);
    let part2 = after(v2, h2);
    let mut merged = part1.clone();
    merged.extend(part2.iter().copied());
    let mut start = g.vertices[v1].start;
    if start == Some(h1) {
        start = part2.first().copied().or(part1.first().copied());
    }
    // compact indices
    let vkeep: Vec<usize> = (0..g.vertices.len()).filter(|v| *v != v2).collect();
    let hkeep: Vec<usize> = (0..g.half_edges.len()).filter(|x| *x != h1 && *x != h2).collect();
    let mut vnew = vec![usize::MAX; g.vertices.len()];
    for (i, v) in vkeep.iter().enumerate() {
        vnew[*v] = i;
    }
    let mut hnew = vec![usize::MAX; g.half_edges.len()];
    for (i, x) in hkeep.iter().enumerate() {
        hnew[*x] = i;
    }
    let vertices: Vec<Vertex> = vkeep
        .iter()
        .map(|&v| {
            let old = &g.vertices[v];
            if v == v1 {
                Vertex {
                    color: old.color,
                    label: old.label,
                    start: start.map(|s| hnew[s]),
                    cyclic: merged.iter().map(|x| hnew[*x]).collect(),
                }
            } else {
                Vertex {
                    color: old.color,
                    label: old.label,
                    start: old.start.map(|s| hnew[s]),
                    cyclic: old.cyclic.iter().map(|x| hnew[*x]).collect(),
                }
            }
        })
        .collect();
    let half_edges: Vec<HalfEdge> = hkeep
        .iter()
        .map(|&x| {
            let old = &g.half_edges[x];
            let src = old.source.map(|s| if s == v2 { vnew[v1] } else { vnew[s] });
            HalfEdge { source: src, partner: hnew[old.partner], leaf: old.leaf }
        })
        .collect();
    let out = BwGraph { vertices, half_edges };
    let rest: Vec<Gen> = g
        .standard_order()
        .into_iter()
        .filter(|x| *x != Gen::V(v1) && *x != Gen::V(v2) && *x != Gen::H(h1) && *x != Gen::H(h2))
        .collect();
    let mut before = vec![Gen::V(v1), Gen::V(v2), Gen::H(h1), Gen::H(h2)];
    before.extend(rest.iter().copied());
    let sigma = g.sign_of_ordering(&before);
    let mut after_gens = vec![Gen::V(vnew[v1])];
    after_gens.extend(rest.iter().map(|x| match x {
        Gen::V(v) => Gen::V(vnew[*v]),
        Gen::H(y) => Gen::H(hnew[*y]),
    }));
    let sign = og.sign * sigma * out.sign_of_ordering(&after_gens);
    Ok(OrientedGraph { graph: out, sign })
}

/// Splits vertex `v`: `v` keeps `keep` (its cyclic order with the new
/// half-edge h1 inserted where the block was) and a new black vertex gets
/// `block` followed by h2. Returns the oriented blow-up.
fn split(og: &OrientedGraph, v: usize, keep_with_h1: Vec<Option<usize>>, block: &[usize], new_start: Option<Option<usize>>) -> OrientedGraph {
    let g = &og.graph;
    let nv = g.vertices.len();
    let nh = g.half_edges.len();
    let (v2, h1, h2) = (nv, nh, nh + 1);
    let mut out = g.clone();
    let cyc1: Vec<usize> = keep_with_h1.iter().map(|x| x.unwrap_or(h1)).collect();
    out.vertices[v].cyclic = cyc1;
    if let Some(s) = new_start {
        out.vertices[v].start = Some(s.unwrap_or(h1));
    }
    let mut cyc2 = block.to_vec();
    cyc2.push(h2);
    for &x in block {
        out.half_edges[x].source = Some(v2);
    }
    out.vertices.push(Vertex { color: Color::Black, label: None, start: None, cyclic: cyc2 });
    out.half_edges.push(HalfEdge { source: Some(v), partner: h2, leaf: None });
    out.half_edges.push(HalfEdge { source: Some(v2), partner: h1, leaf: None });
    let mut gens = vec![Gen::V(v), Gen::V(v2), Gen::H(h1), Gen::H(h2)];
    gens.extend(g.standard_order().into_iter().filter(|x| *x != Gen::V(v)));
    let move_front: i8 = if v % 2 == 0 { 1 } else { -1 };
    let sign = og.sign * move_front * out.sign_of_ordering(&gens);
    OrientedGraph { graph: out, sign }
}

/// All blow-ups of a single vertex as oriented graphs (not canonicalized).
pub(crate) fn vertex_blowups(og: &OrientedGraph, v: usize) -> Vec<OrientedGraph> {
    let g = &og.graph;
    let vert = &g.vertices[v];
    let k = vert.cyclic.len();
    let cyc = &vert.cyclic;
    let mut out = Vec::new();
    match vert.color {
        Color::Black => {
            let mut seen = BTreeSet::new();
            for b in 2..=k.saturating_sub(2) {
                for i in 0..k {
                    let block: Vec<usize> = (0..b).map(|j| cyc[(i + j) % k]).collect();
                    let key = if block.contains(&cyc[0]) {
                        let mut s = block.clone();
                        s.sort();
                        s
                    } else {
                        let mut s: Vec<usize> = cyc.iter().copied().filter(|x| !block.contains(x)).collect();
                        s.sort();
                        s
                    };
                    if !seen.insert(key) {
                        continue;
                    }
                    let mut keep: Vec<Option<usize>> = (b..k).map(|j| Some(cyc[(i + j) % k])).collect();
                    keep.push(None);
                    out.push(split(og, v, keep, &block, None));
                }
            }
        }
        Color::White => {
            let start = vert.start.expect("white vertex has a start");
            for b in 2..=k {
                for i in 0..k {
                    let block: Vec<usize> = (0..b).map(|j| cyc[(i + j) % k]).collect();
                    let mut keep: Vec<Option<usize>> = (b..k).map(|j| Some(cyc[(i + j) % k])).collect();
                    keep.push(None);
                    let new_start = if block.contains(&start) { Some(None) } else { Some(Some(start)) };
                    out.push(split(og, v, keep, &block, new_start));
                }
            }
        }
    }
    out
}

/// The blow-up differential: the signed sum of all blow-ups, canonicalized.
pub fn blowups(og: &OrientedGraph) -> GraphSum {
    let mut sum = GraphSum::new();
    for v in 0..og.graph.vertices.len() {
        for b in vertex_blowups(og, v) {
            add_term(&mut sum, &b, 1);
        }
    }
    sum
}
