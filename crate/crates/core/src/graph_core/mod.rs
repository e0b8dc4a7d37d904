//! Fat graphs with black and white vertices, orientations, boundary cycles,
//! canonical forms, blow-ups and collapses.
//!
//! A graph is stored as a list of vertices and a list of half-edges, both
//! indexed from zero. A half-edge whose partner is itself is a leaf. An
//! orientation is a sign relative to the standard generator ordering "all
//! vertices by index, then all half-edges by index".

mod blowup;
mod canon;
mod export;
mod sample;

pub use blowup::{blowups, collapse, edges};
pub(crate) use blowup::vertex_blowups;
pub(crate) use canon::{component_labelings, Relabel};
pub use canon::{canonical_form, Canonical};
pub use export::{from_json, to_dot, to_json, GraphJson};
pub use sample::{join_leaves, random_bw_graph, renumber_leaves};

use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

/// Label of a leaf. Forest morphisms use `In` for inputs and `Out` for
/// roots; the leaves of a black and white graph are `In` leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Leaf {
    In(u32),
    Out(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub color: Color,
    /// Label of a white vertex.
    pub label: Option<u32>,
    /// Start half-edge of a white vertex.
    pub start: Option<usize>,
    /// Incident half-edges in cyclic order.
    pub cyclic: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    /// `None` only for the single half-edge of the exceptional graph.
    pub source: Option<usize>,
    pub partner: usize,
    pub leaf: Option<Leaf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BwGraph {
    pub vertices: Vec<Vertex>,
    pub half_edges: Vec<HalfEdge>,
}

/// A generator of the orientation line: a vertex or a half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    V(usize),
    H(usize),
}

/// A graph together with an orientation sign relative to its standard
/// generator ordering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedGraph {
    pub graph: BwGraph,
    pub sign: i8,
}

/// Formal integer combination of canonical graphs.
pub type GraphSum = BTreeMap<BwGraph, i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("half-edge {0} is a leaf, not part of an edge")]
    NotAnEdge(usize),
    #[error("edge at half-edge {0} is a loop")]
    LoopEdge(usize),
    #[error("edge at half-edge {0} joins two white vertices")]
    WhiteWhite(usize),
}

/// Parity of a sequence of distinct integers: +1 for an even number of
/// inversions, -1 for odd.
pub fn permutation_sign<T: Ord>(seq: &[T]) -> i8 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Adds `coeff` times an oriented graph to a formal sum, canonicalizing first.
pub fn add_term(sum: &mut GraphSum, g: &OrientedGraph, coeff: i64) {
    if coeff == 0 {
        return;
    }
    if let Some(c) = canonical_form(g) {
        add_canonical(sum, c.graph, coeff.checked_mul(c.sign as i64).expect("coefficient overflow"));
    }
}

/// Adds `coeff` times an already canonical graph to a formal sum.
pub fn add_canonical(sum: &mut GraphSum, g: BwGraph, coeff: i64) {
    if coeff == 0 {
        return;
    }
    match sum.entry(g) {
        Entry::Vacant(e) => {
            e.insert(coeff);
        }
        Entry::Occupied(mut e) => {
            let v = e.get().checked_add(coeff).expect("coefficient overflow");
            if v == 0 {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

/// Sum of two formal combinations with multipliers.
pub fn combine(a: &GraphSum, ca: i64, b: &GraphSum, cb: i64) -> GraphSum {
    let mut out = GraphSum::new();
    for (g, c) in a {
        add_canonical(&mut out, g.clone(), c.checked_mul(ca).expect("coefficient overflow"));
    }
    for (g, c) in b {
        add_canonical(&mut out, g.clone(), c.checked_mul(cb).expect("coefficient overflow"));
    }
    out
}

impl BwGraph {
    /// The exceptional graph: one leaf and no vertex.
    pub fn exceptional(leaf: Option<Leaf>) -> BwGraph {
        BwGraph { vertices: vec![], half_edges: vec![HalfEdge { source: None, partner: 0, leaf }] }
    }

    /// One black vertex with `k` input leaves followed by a root leaf in its
    /// cyclic order; inputs are labeled `In(1..=k)` and the root `Out(1)`.
    pub fn corolla(k: usize) -> BwGraph {
        let mut half_edges: Vec<HalfEdge> = (1..=k)
            .enumerate()
            .map(|(i, l)| HalfEdge { source: Some(0), partner: i, leaf: Some(Leaf::In(l as u32)) })
            .collect();
        half_edges.push(HalfEdge { source: Some(0), partner: k, leaf: Some(Leaf::Out(1)) });
        BwGraph {
            vertices: vec![Vertex { color: Color::Black, label: None, start: None, cyclic: (0..=k).collect() }],
            half_edges,
        }
    }

    /// One white vertex labeled 1 with `n` leaves `In(1..=n)` in cyclic order,
    /// starting at the leaf labeled 1.
    pub fn white_corolla(n: usize) -> BwGraph {
        let half_edges = (0..n)
            .map(|i| HalfEdge { source: Some(0), partner: i, leaf: Some(Leaf::In(i as u32 + 1)) })
            .collect();
        BwGraph {
            vertices: vec![Vertex { color: Color::White, label: Some(1), start: Some(0), cyclic: (0..n).collect() }],
            half_edges,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.half_edges.len()
    }

    pub fn is_leaf(&self, h: usize) -> bool {
        self.half_edges[h].partner == h
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].cyclic.len()
    }

    /// Cyclic successor of `h` at its source vertex.
    pub fn next_at_vertex(&self, h: usize) -> usize {
        let v = self.half_edges[h].source.expect("half-edge without vertex");
        let cyc = &self.vertices[v].cyclic;
        let pos = cyc.iter().position(|x| *x == h).expect("cyclic order");
        cyc[(pos + 1) % cyc.len()]
    }

    /// Half-edges of a white vertex listed from its start half-edge.
    pub fn white_sequence(&self, v: usize) -> Vec<usize> {
        let vert = &self.vertices[v];
        let s = vert.start.expect("white vertex without start");
        let pos = vert.cyclic.iter().position(|x| *x == s).expect("start in cyclic order");
        let k = vert.cyclic.len();
        (0..k).map(|i| vert.cyclic[(pos + i) % k]).collect()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.half_edges.len()).filter(|h| self.is_leaf(*h)).collect()
    }

    pub fn leaf_with_label(&self, l: Leaf) -> Option<usize> {
        (0..self.half_edges.len()).find(|h| self.half_edges[*h].leaf == Some(l))
    }

    pub fn white_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|v| self.vertices[*v].color == Color::White).collect()
    }

    /// Checks structural invariants: involution, sources, cyclic orders,
    /// valences and start half-edges.
    pub fn validate(&self) -> Result<(), GraphError> {
        let nh = self.half_edges.len();
        let nv = self.vertices.len();
        let bad = |m: String| Err(GraphError::Malformed(m));
        for (h, he) in self.half_edges.iter().enumerate() {
            if he.partner >= nh {
                return bad(format!("partner of {} out of range", h));
            }
            if self.half_edges[he.partner].partner != h {
                return bad(format!("involution is not self-inverse at {}", h));
            }
            if he.leaf.is_some() && he.partner != h {
                return bad(format!("half-edge {} carries a leaf label but is not a leaf", h));
            }
            match he.source {
                None => {
                    if nv != 0 || nh != 1 || he.partner != h {
                        return bad(format!("half-edge {} has no source", h));
                    }
                }
                Some(v) => {
                    if v >= nv || !self.vertices[v].cyclic.contains(&h) {
                        return bad(format!("source of {} does not list it", h));
                    }
                }
            }
        }
        let mut seen = vec![false; nh];
        for (v, vert) in self.vertices.iter().enumerate() {
            for &h in &vert.cyclic {
                if h >= nh || self.half_edges[h].source != Some(v) || seen[h] {
                    return bad(format!("cyclic order at vertex {} is not a permutation of its half-edges", v));
                }
                seen[h] = true;
            }
            match vert.color {
                Color::Black => {
                    if vert.cyclic.len() < 3 {
                        return bad(format!("black vertex {} has valence {}", v, vert.cyclic.len()));
                    }
                    if vert.start.is_some() || vert.label.is_some() {
                        return bad(format!("black vertex {} carries white data", v));
                    }
                }
                Color::White => {
                    if vert.cyclic.is_empty() {
                        return bad(format!("white vertex {} has valence 0", v));
                    }
                    match vert.start {
                        Some(s) if vert.cyclic.contains(&s) => {}
                        _ => return bad(format!("start half-edge of white vertex {} is not incident", v)),
                    }
                }
            }
        }
        if nv > 0 && seen.iter().any(|s| !s) {
            return bad("a half-edge is missing from all cyclic orders".into());
        }
        Ok(())
    }

    /// Degree: sum over black vertices of (valence - 3) plus sum over white
    /// vertices of (valence - 1).
    pub fn degree(&self) -> i64 {
        self.vertices
            .iter()
            .map(|v| match v.color {
                Color::Black => v.cyclic.len() as i64 - 3,
                Color::White => v.cyclic.len() as i64 - 1,
            })
            .sum()
    }

    /// Orbits of the face permutation h -> next(i(h)). White vertices use
    /// their cyclic order like black ones; the circle inserted at a white
    /// vertex by fattening is not listed. Each leaf is listed twice in its
    /// cycle, once on each side.
    pub fn boundary_cycles(&self) -> Result<Vec<Vec<usize>>, GraphError> {
        self.validate()?;
        if self.vertices.is_empty() {
            return Ok(self.half_edges.iter().enumerate().map(|(h, _)| vec![h]).collect());
        }
        let nh = self.half_edges.len();
        let mut seen = vec![false; nh];
        let mut cycles = Vec::new();
        for h0 in 0..nh {
            if seen[h0] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut h = h0;
            while !seen[h] {
                seen[h] = true;
                cyc.push(h);
                if self.is_leaf(h) {
                    cyc.push(h);
                }
                h = self.next_at_vertex(self.half_edges[h].partner);
            }
            cycles.push(cyc);
        }
        Ok(cycles)
    }

    /// Number of internal edges.
    pub fn num_edges(&self) -> usize {
        (0..self.half_edges.len()).filter(|h| !self.is_leaf(*h)).count() / 2
    }

    /// Connected components as sorted lists of vertex and half-edge indices.
    pub fn components(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let nh = self.half_edges.len();
        let mut comp_of_h = vec![usize::MAX; nh];
        let mut out = Vec::new();
        for h0 in 0..nh {
            if comp_of_h[h0] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![h0];
            let mut vs = Vec::new();
            let mut hs = Vec::new();
            comp_of_h[h0] = id;
            while let Some(h) = stack.pop() {
                hs.push(h);
                let mut nbrs = vec![self.half_edges[h].partner];
                if let Some(v) = self.half_edges[h].source {
                    if !vs.contains(&v) {
                        vs.push(v);
                    }
                    nbrs.extend(self.vertices[v].cyclic.iter().copied());
                }
                for x in nbrs {
                    if comp_of_h[x] == usize::MAX {
                        comp_of_h[x] = id;
                        stack.push(x);
                    }
                }
            }
            vs.sort();
            hs.sort();
            out.push((vs, hs));
        }
        out
    }

    /// Number of boundary components of the fattened surface (faces plus
    /// one circle per white vertex) and its Euler characteristic. Each white
    /// vertex is thickened to an annulus, so it contributes 0 rather than 1.
    pub fn surface_data(&self) -> Result<(usize, i64), GraphError> {
        let faces = self.boundary_cycles()?.len();
        let w = self.white_vertices().len();
        let chi = self.vertices.len() as i64 - self.num_edges() as i64 - w as i64;
        Ok((faces + w, chi))
    }

    /// Genus of a connected graph's surface, from chi = 2 - 2g - b.
    pub fn genus(&self) -> Result<i64, GraphError> {
        let (b, chi) = self.surface_data()?;
        Ok((2 - chi - b as i64) / 2)
    }

    /// Disjoint union; indices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &BwGraph) -> BwGraph {
        let (vo, ho) = (self.vertices.len(), self.half_edges.len());
        let mut out = self.clone();
        out.vertices.extend(other.vertices.iter().map(|v| Vertex {
            color: v.color,
            label: v.label,
            start: v.start.map(|s| s + ho),
            cyclic: v.cyclic.iter().map(|h| h + ho).collect(),
        }));
        out.half_edges.extend(other.half_edges.iter().map(|h| HalfEdge {
            source: h.source.map(|v| v + vo),
            partner: h.partner + ho,
            leaf: h.leaf,
        }));
        out
    }

    /// Relabels vertices and half-edges: vertex `v` becomes `vperm[v]` and
    /// half-edge `h` becomes `hperm[h]`.
    pub fn relabel(&self, vperm: &[usize], hperm: &[usize]) -> BwGraph {
        let mut vertices = vec![None; self.vertices.len()];
        for (v, vert) in self.vertices.iter().enumerate() {
            vertices[vperm[v]] = Some(Vertex {
                color: vert.color,
                label: vert.label,
                start: vert.start.map(|s| hperm[s]),
                cyclic: vert.cyclic.iter().map(|h| hperm[*h]).collect(),
            });
        }
        let mut half_edges = vec![None; self.half_edges.len()];
        for (h, he) in self.half_edges.iter().enumerate() {
            half_edges[hperm[h]] =
                Some(HalfEdge { source: he.source.map(|v| vperm[v]), partner: hperm[he.partner], leaf: he.leaf });
        }
        BwGraph {
            vertices: vertices.into_iter().map(|v| v.expect("vertex permutation")).collect(),
            half_edges: half_edges.into_iter().map(|h| h.expect("half-edge permutation")).collect(),
        }
    }

    /// Standard generator ordering: vertices then half-edges.
    pub fn standard_order(&self) -> Vec<Gen> {
        (0..self.vertices.len()).map(Gen::V).chain((0..self.half_edges.len()).map(Gen::H)).collect()
    }

    /// Sign of the wedge of `gens` relative to the standard ordering. Each
    /// vertex and half-edge must appear exactly once.
    pub fn sign_of_ordering(&self, gens: &[Gen]) -> i8 {
        let nv = self.vertices.len();
        assert_eq!(gens.len(), nv + self.half_edges.len(), "ordering must list every generator once");
        let idx: Vec<usize> = gens
            .iter()
            .map(|g| match g {
                Gen::V(v) => *v,
                Gen::H(h) => nv + h,
            })
            .collect();
        let mut check = idx.clone();
        check.sort();
        check.dedup();
        assert_eq!(check.len(), idx.len(), "ordering repeats a generator");
        permutation_sign(&idx)
    }
}

impl OrientedGraph {
    pub fn new(graph: BwGraph, sign: i8) -> Self {
        OrientedGraph { graph, sign }
    }

    /// Orientation given by a wedge of generators.
    pub fn from_ordering(graph: BwGraph, gens: &[Gen]) -> Self {
        let sign = graph.sign_of_ordering(gens);
        OrientedGraph { graph, sign }
    }

    /// Disjoint union oriented as self∧other.
    pub fn disjoint_union(&self, other: &OrientedGraph) -> OrientedGraph {
        let graph = self.graph.disjoint_union(&other.graph);
        let (va, ha) = (self.graph.vertices.len(), self.graph.half_edges.len());
        let (vb, hb) = (other.graph.vertices.len(), other.graph.half_edges.len());
        let mut gens: Vec<Gen> = (0..va).map(Gen::V).chain((0..ha).map(Gen::H)).collect();
        gens.extend((va..va + vb).map(Gen::V).chain((ha..ha + hb).map(Gen::H)));
        let sign = self.sign * other.sign * graph.sign_of_ordering(&gens);
        OrientedGraph { graph, sign }
    }

    /// Relabeling that carries the orientation along.
    pub fn relabel(&self, vperm: &[usize], hperm: &[usize]) -> OrientedGraph {
        let graph = self.graph.relabel(vperm, hperm);
        let gens: Vec<Gen> = self
            .graph
            .standard_order()
            .into_iter()
            .map(|g| match g {
                Gen::V(v) => Gen::V(vperm[v]),
                Gen::H(h) => Gen::H(hperm[h]),
            })
            .collect();
        let sign = self.sign * graph.sign_of_ordering(&gens);
        OrientedGraph { graph, sign }
    }

    pub fn negate(&self) -> Self {
        OrientedGraph { graph: self.graph.clone(), sign: -self.sign }
    }

    pub fn degree(&self) -> i64 {
        self.graph.degree()
    }
}

/// Boundary of a formal sum: sum of blow-ups of its terms.
pub fn differential(sum: &GraphSum) -> GraphSum {
    let mut out = GraphSum::new();
    for (g, c) in sum {
        for (h, d) in blowups(&OrientedGraph::new(g.clone(), 1)) {
            add_canonical(&mut out, h, d.checked_mul(*c).expect("coefficient overflow"));
        }
    }
    out
}

#[cfg(test)]
mod tests;
