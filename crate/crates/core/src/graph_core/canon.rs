//! Canonical labeling of decorated fat graphs.
//!
//! Each connected component is relabeled by a breadth-first traversal that
//! starts at a half-edge and walks vertices in their cyclic order. The
//! starting half-edge is taken from an automorphism-invariant anchor set
//! (minimal leaf label, else the start of the minimal white vertex, else all
//! half-edges) and the lexicographically smallest relabeled component wins.
//! Components are then sorted.

use super::{BwGraph, Color, HalfEdge, OrientedGraph, Vertex};

/// A canonical representative with its orientation sign.
pub type Canonical = OrientedGraph;

pub(crate) struct Relabel {
    pub(crate) graph: BwGraph,
    /// old vertex index -> new index within the component
    pub(crate) vmap: Vec<(usize, usize)>,
    /// old half-edge index -> new index within the component
    pub(crate) hmap: Vec<(usize, usize)>,
}

fn traverse(g: &BwGraph, start: usize) -> Relabel {
    let nv = g.vertices.len();
    let nh = g.half_edges.len();
    let mut vnew = vec![usize::MAX; nv];
    let mut hnew = vec![usize::MAX; nh];
    let mut vorder = Vec::new();
    let mut horder = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    while let Some(h) = queue.pop_front() {
        match g.half_edges[h].source {
            None => {
                if hnew[h] == usize::MAX {
                    hnew[h] = horder.len();
                    horder.push(h);
                }
            }
            Some(v) => {
                if vnew[v] != usize::MAX {
                    continue;
                }
                vnew[v] = vorder.len();
                vorder.push(v);
                let cyc = &g.vertices[v].cyclic;
                let pos = cyc.iter().position(|x| *x == h).expect("cyclic order");
                let k = cyc.len();
                let rotated: Vec<usize> = (0..k).map(|i| cyc[(pos + i) % k]).collect();
                for &x in &rotated {
                    if hnew[x] == usize::MAX {
                        hnew[x] = horder.len();
                        horder.push(x);
                    }
                }
                for &x in &rotated {
                    let p = g.half_edges[x].partner;
                    if p != x {
                        queue.push_back(p);
                    }
                }
            }
        }
    }
    let vertices = vorder
        .iter()
        .map(|&v| {
            let old = &g.vertices[v];
            let mut cyclic: Vec<usize> = old.cyclic.iter().map(|h| hnew[*h]).collect();
            let m = cyclic.iter().enumerate().min_by_key(|(_, x)| **x).map(|(i, _)| i).unwrap_or(0);
            cyclic.rotate_left(m);
            Vertex { color: old.color, label: old.label, start: old.start.map(|s| hnew[s]), cyclic }
        })
        .collect();
    let half_edges = horder
        .iter()
        .map(|&h| {
            let old = &g.half_edges[h];
            HalfEdge { source: old.source.map(|v| vnew[v]), partner: hnew[old.partner], leaf: old.leaf }
        })
        .collect();
    Relabel {
        graph: BwGraph { vertices, half_edges },
        vmap: vorder.iter().enumerate().map(|(n, o)| (*o, n)).collect(),
        hmap: horder.iter().enumerate().map(|(n, o)| (*o, n)).collect(),
    }
}

fn anchors(g: &BwGraph, hs: &[usize], vs: &[usize]) -> Vec<usize> {
    let min_leaf = hs.iter().filter_map(|h| g.half_edges[*h].leaf).min();
    if let Some(l) = min_leaf {
        return hs.iter().copied().filter(|h| g.half_edges[*h].leaf == Some(l)).collect();
    }
    let min_white = vs
        .iter()
        .filter(|v| g.vertices[**v].color == Color::White && g.vertices[**v].label.is_some())
        .map(|v| g.vertices[*v].label)
        .min();
    if let Some(l) = min_white {
        return vs
            .iter()
            .filter(|v| g.vertices[**v].color == Color::White && g.vertices[**v].label == l)
            .filter_map(|v| g.vertices[*v].start)
            .collect();
    }
    hs.to_vec()
}

/// For each connected component, its relabelings from every anchor.
pub(crate) fn component_labelings(g: &BwGraph) -> Vec<Vec<Relabel>> {
    g.components().into_iter().map(|(vs, hs)| anchors(g, &hs, &vs).into_iter().map(|a| traverse(g, a)).collect()).collect()
}

/// Sign of a relabeling restricted to the given pairs (old, new), read as a
/// permutation of the old indices in increasing order.
fn relabel_sign(pairs: &[(usize, usize)]) -> i8 {
    let mut sorted = pairs.to_vec();
    sorted.sort();
    let news: Vec<usize> = sorted.iter().map(|p| p.1).collect();
    super::permutation_sign(&news)
}

/// Canonical representative of an oriented graph, or `None` when the graph
/// has an orientation-reversing automorphism and so vanishes.
pub fn canonical_form(og: &OrientedGraph) -> Option<Canonical> {
    let g = &og.graph;
    let mut comps: Vec<Relabel> = Vec::new();
    for (vs, hs) in g.components() {
        let mut best: Option<Relabel> = None;
        let mut best_sign = 0i8;
        for a in anchors(g, &hs, &vs) {
            let r = traverse(g, a);
            let s = relabel_sign(&r.vmap) * relabel_sign(&r.hmap);
            match &best {
                Some(b) if r.graph > b.graph => {}
                Some(b) if r.graph == b.graph => {
                    if s != best_sign {
                        return None;
                    }
                }
                _ => {
                    best = Some(r);
                    best_sign = s;
                }
            }
        }
        comps.push(best.expect("component has a half-edge"));
    }
    comps.sort_by(|a, b| a.graph.cmp(&b.graph));
    for w in comps.windows(2) {
        if w[0].graph == w[1].graph {
            let size = w[0].graph.vertices.len() + w[0].graph.half_edges.len();
            if size % 2 == 1 {
                return None;
            }
        }
    }
    let mut out = BwGraph::default();
    let mut vfull = Vec::new();
    let mut hfull = Vec::new();
    for c in &comps {
        let vo = out.vertices.len();
        let ho = out.half_edges.len();
        for v in &c.graph.vertices {
            out.vertices.push(Vertex {
                color: v.color,
                label: v.label,
                start: v.start.map(|s| s + ho),
                cyclic: v.cyclic.iter().map(|h| h + ho).collect(),
            });
        }
        for h in &c.graph.half_edges {
            out.half_edges.push(HalfEdge {
                source: h.source.map(|v| v + vo),
                partner: h.partner + ho,
                leaf: h.leaf,
            });
        }
        vfull.extend(c.vmap.iter().map(|(o, n)| (*o, n + vo)));
        hfull.extend(c.hmap.iter().map(|(o, n)| (*o, n + ho)));
    }
    let sign = og.sign * relabel_sign(&vfull) * relabel_sign(&hfull);
    Some(OrientedGraph { graph: out, sign })
}
