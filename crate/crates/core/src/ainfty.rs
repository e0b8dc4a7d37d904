//! Planar forests: morphisms of the A-infinity prop with an optional unit.
//!
//! A forest from `n` inputs to `m` outputs is a graph of black vertices
//! whose leaves are `In(1..=n)` and `Out(..)`, together with identity
//! strands (input i carried straight to output j) and unit outputs. Each
//! vertex lists its inputs left to right followed by its root half-edge.
//! The orientation of a forest is that of its graph; strands and units
//! contribute no generators. Composition `compose(f, g)` applies `f` first
//! and is oriented by juxtaposition f∧g.

use crate::graph_core::{
    self, add_term, canonical_form, BwGraph, Color, Gen, GraphSum, HalfEdge, Leaf, OrientedGraph, Vertex,
};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("arity mismatch: {0} outputs composed with {1} inputs")]
    Arity(u32, u32),
    #[error("m_k needs k >= 2, got {0}")]
    CorollaArity(usize),
    #[error("f_(n,k) needs 1 <= k < n, got n={0}, k={1}")]
    FnkRange(usize, usize),
}

/// A forest in canonical form. `graph` holds only the trees with vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Forest {
    #[serde(skip)]
    pub graph: BwGraph,
    pub strands: Vec<(u32, u32)>,
    pub units: Vec<u32>,
    pub n_in: u32,
    pub n_out: u32,
}

/// Formal integer combination of canonical forests.
pub type ForestSum = BTreeMap<Forest, i64>;

/// A forest before canonicalization, with an orientation sign relative to
/// the standard ordering of its graph.
#[derive(Clone, Debug)]
pub struct RawForest {
    pub graph: OrientedGraph,
    pub strands: Vec<(u32, u32)>,
    pub units: Vec<u32>,
    pub n_in: u32,
    pub n_out: u32,
}

impl RawForest {
    pub fn canonical(&self) -> Option<(Forest, i8)> {
        let c = canonical_form(&self.graph)?;
        let mut strands = self.strands.clone();
        strands.sort();
        let mut units = self.units.clone();
        units.sort();
        Some((Forest { graph: c.graph, strands, units, n_in: self.n_in, n_out: self.n_out }, c.sign))
    }
}

pub fn add_forest(sum: &mut ForestSum, f: &RawForest, coeff: i64) {
    if coeff == 0 {
        return;
    }
    if let Some((c, s)) = f.canonical() {
        let e = sum.entry(c.clone()).or_insert(0);
        *e = e.checked_add(coeff.checked_mul(s as i64).expect("overflow")).expect("overflow");
        if *e == 0 {
            sum.remove(&c);
        }
    }
}

pub fn scale_sum(a: &ForestSum, c: i64) -> ForestSum {
    let mut out = ForestSum::new();
    for (f, x) in a {
        if c != 0 {
            out.insert(f.clone(), x.checked_mul(c).expect("overflow"));
        }
    }
    out
}

pub fn add_sums(a: &ForestSum, b: &ForestSum) -> ForestSum {
    let mut out = a.clone();
    for (f, c) in b {
        let e = out.entry(f.clone()).or_insert(0);
        *e = e.checked_add(*c).expect("overflow");
        if *e == 0 {
            out.remove(f);
        }
    }
    out
}

impl Forest {
    pub fn raw(&self) -> RawForest {
        RawForest {
            graph: OrientedGraph::new(self.graph.clone(), 1),
            strands: self.strands.clone(),
            units: self.units.clone(),
            n_in: self.n_in,
            n_out: self.n_out,
        }
    }

    pub fn degree(&self) -> i64 {
        self.graph.degree()
    }

    /// Single-term sum.
    pub fn sum(self, coeff: i64) -> ForestSum {
        let mut s = ForestSum::new();
        if coeff != 0 {
            s.insert(self, coeff);
        }
        s
    }

    /// Root half-edge of every vertex.
    pub fn roots(&self) -> Vec<usize> {
        vertex_roots(&self.graph)
    }
}

/// For each vertex of a forest graph, its half-edge pointing to the root.
pub fn vertex_roots(g: &BwGraph) -> Vec<usize> {
    let mut root = vec![usize::MAX; g.vertices.len()];
    let mut stack: Vec<usize> = g
        .half_edges
        .iter()
        .enumerate()
        .filter(|(_, h)| matches!(h.leaf, Some(Leaf::Out(_))))
        .map(|(i, _)| i)
        .collect();
    while let Some(h) = stack.pop() {
        let v = g.half_edges[h].source.expect("forest half-edge has a vertex");
        if root[v] != usize::MAX {
            continue;
        }
        root[v] = h;
        for &x in &g.vertices[v].cyclic {
            if x != h && !g.is_leaf(x) {
                stack.push(g.half_edges[x].partner);
            }
        }
    }
    assert!(root.iter().all(|r| *r != usize::MAX), "every forest vertex reaches an output");
    root
}

/// Inputs of a vertex, left to right: its cyclic order read after the root.
pub fn vertex_inputs(g: &BwGraph, v: usize, root: usize) -> Vec<usize> {
    let cyc = &g.vertices[v].cyclic;
    let pos = cyc.iter().position(|x| *x == root).unwrap();
    (1..cyc.len()).map(|i| cyc[(pos + i) % cyc.len()]).collect()
}

/// m_k: one corolla oriented as h_1∧…∧h_k∧v∧h_0.
pub fn mk(k: usize) -> Result<ForestSum, ForestError> {
    if k < 2 {
        return Err(ForestError::CorollaArity(k));
    }
    Ok(raw_mk(k).canonical().map(|(f, s)| f.sum(s as i64)).unwrap_or_default())
}

fn raw_mk(k: usize) -> RawForest {
    let g = BwGraph::corolla(k);
    let mut gens: Vec<Gen> = (0..k).map(Gen::H).collect();
    gens.push(Gen::V(0));
    gens.push(Gen::H(k));
    RawForest { graph: OrientedGraph::from_ordering(g, &gens), strands: vec![], units: vec![], n_in: k as u32, n_out: 1 }
}

pub fn identity(n: u32) -> ForestSum {
    RawForest { graph: OrientedGraph::new(BwGraph::default(), 1), strands: (1..=n).map(|i| (i, i)).collect(), units: vec![], n_in: n, n_out: n }
        .canonical()
        .unwrap()
        .0
        .sum(1)
}

/// The unit, a forest with no input and one unit output.
pub fn unit() -> ForestSum {
    RawForest { graph: OrientedGraph::new(BwGraph::default(), 1), strands: vec![], units: vec![1], n_in: 0, n_out: 1 }
        .canonical()
        .unwrap()
        .0
        .sum(1)
}

fn shift_leaf(l: Leaf, di: u32, dout: u32) -> Leaf {
    match l {
        Leaf::In(i) => Leaf::In(i + di),
        Leaf::Out(j) => Leaf::Out(j + dout),
    }
}

/// Side-by-side juxtaposition f + g, oriented f∧g.
pub fn juxtapose_raw(f: &RawForest, g: &RawForest) -> RawForest {
    let mut gg = g.graph.clone();
    for h in gg.graph.half_edges.iter_mut() {
        h.leaf = h.leaf.map(|l| shift_leaf(l, f.n_in, f.n_out));
    }
    let graph = f.graph.disjoint_union(&gg);
    let mut strands = f.strands.clone();
    strands.extend(g.strands.iter().map(|(i, j)| (i + f.n_in, j + f.n_out)));
    let mut units = f.units.clone();
    units.extend(g.units.iter().map(|j| j + f.n_out));
    RawForest { graph, strands, units, n_in: f.n_in + g.n_in, n_out: f.n_out + g.n_out }
}

pub fn juxtapose(a: &ForestSum, b: &ForestSum) -> ForestSum {
    let mut out = ForestSum::new();
    for (f, x) in a {
        for (g, y) in b {
            add_forest(&mut out, &juxtapose_raw(&f.raw(), &g.raw()), x.checked_mul(*y).expect("overflow"));
        }
    }
    out
}

enum FSide {
    Root(usize),
    Strand(u32),
    Unit,
}

enum GSide {
    Leaf(usize),
    Strand(u32),
}

/// Composition of raw forests: `f` first, then `g`. Returns `None` when
/// the unit rewriting produces zero.
pub fn compose_raw(f: &RawForest, g: &RawForest) -> Result<Option<RawForest>, ForestError> {
    if f.n_out != g.n_in {
        return Err(ForestError::Arity(f.n_out, g.n_in));
    }
    let ho = f.graph.graph.half_edges.len();
    let og = f.graph.disjoint_union(&g.graph);
    let mut graph = og.graph;
    let sign = og.sign;
    let mut strands = Vec::new();
    let mut units = g.units.clone();
    let mut capped: Vec<usize> = Vec::new();
    for j in 1..=f.n_out {
        let fs = if let Some(h) = f.graph.graph.leaf_with_label(Leaf::Out(j)) {
            FSide::Root(h)
        } else if let Some((i, _)) = f.strands.iter().find(|(_, o)| *o == j) {
            FSide::Strand(*i)
        } else {
            assert!(f.units.contains(&j), "output {} of forest is unaccounted for", j);
            FSide::Unit
        };
        let gs = if let Some(h) = g.graph.graph.leaf_with_label(Leaf::In(j)) {
            GSide::Leaf(h + ho)
        } else {
            let (_, k) = g.strands.iter().find(|(i, _)| *i == j).expect("input of forest is unaccounted for");
            GSide::Strand(*k)
        };
        match (fs, gs) {
            (FSide::Root(h), GSide::Leaf(x)) => {
                graph.half_edges[h].partner = x;
                graph.half_edges[h].leaf = None;
                graph.half_edges[x].partner = h;
                graph.half_edges[x].leaf = None;
            }
            (FSide::Root(h), GSide::Strand(k)) => graph.half_edges[h].leaf = Some(Leaf::Out(k)),
            (FSide::Strand(i), GSide::Leaf(x)) => graph.half_edges[x].leaf = Some(Leaf::In(i)),
            (FSide::Strand(i), GSide::Strand(k)) => strands.push((i, k)),
            (FSide::Unit, GSide::Strand(k)) => units.push(k),
            (FSide::Unit, GSide::Leaf(x)) => {
                graph.half_edges[x].leaf = None;
                capped.push(x);
            }
        }
    }
    let mut cur = OrientedGraph::new(graph, sign);
    while let Some(x) = capped.pop() {
        match remove_unit_vertex(&cur, x, &mut capped, &mut strands, &mut units) {
            Some(next) => cur = next,
            None => return Ok(None),
        }
    }
    Ok(Some(RawForest { graph: cur, strands, units, n_in: f.n_in, n_out: g.n_out }))
}

/// Applies m_2∘(u+id) = id = m_2∘(id+u) at the vertex of the capped input
/// leaf `x`; returns `None` for a capped input at a vertex of valence > 3.
/// The block in_1∧in_2∧v∧out is removed from the orientation.
fn remove_unit_vertex(
    og: &OrientedGraph,
    x: usize,
    capped: &mut Vec<usize>,
    strands: &mut Vec<(u32, u32)>,
    units: &mut Vec<u32>,
) -> Option<OrientedGraph> {
    let g = &og.graph;
    let w = g.half_edges[x].source.unwrap();
    if g.valence(w) != 3 {
        return None;
    }
    let root = vertex_roots_partial(g, w);
    let ins = vertex_inputs(g, w, root);
    let y = if ins[0] == x { ins[1] } else { ins[0] };
    let mut gens = vec![Gen::H(ins[0]), Gen::H(ins[1]), Gen::V(w), Gen::H(root)];
    let rest: Vec<Gen> = g.standard_order().into_iter().filter(|q| !gens.contains(q)).collect();
    gens.extend(rest.iter().copied());
    let sigma = g.sign_of_ordering(&gens);
    let mut out = g.clone();
    let py = g.half_edges[y].partner;
    let pr = g.half_edges[root].partner;
    let y_leaf = g.is_leaf(y);
    let r_leaf = g.is_leaf(root);
    let y_capped = capped.contains(&y);
    if y_capped {
        capped.retain(|c| *c != y);
    }
    match (y_leaf, r_leaf) {
        (true, true) => {
            let k = match g.half_edges[root].leaf {
                Some(Leaf::Out(k)) => k,
                _ => unreachable!("root leaf is an output"),
            };
            if y_capped {
                units.push(k);
            } else if let Some(Leaf::In(i)) = g.half_edges[y].leaf {
                strands.push((i, k));
            }
        }
        (true, false) => {
            out.half_edges[pr].partner = pr;
            if y_capped {
                out.half_edges[pr].leaf = None;
                capped.push(pr);
            } else {
                out.half_edges[pr].leaf = g.half_edges[y].leaf;
            }
        }
        (false, true) => {
            out.half_edges[py].partner = py;
            out.half_edges[py].leaf = g.half_edges[root].leaf;
        }
        (false, false) => {
            out.half_edges[py].partner = pr;
            out.half_edges[pr].partner = py;
        }
    }
    // remove w, x, y, root and compact indices
    let dead: BTreeSet<usize> = [x, y, root].into_iter().collect();
    let vkeep: Vec<usize> = (0..g.vertices.len()).filter(|v| *v != w).collect();
    let hkeep: Vec<usize> = (0..g.half_edges.len()).filter(|h| !dead.contains(h)).collect();
    let mut vnew = vec![usize::MAX; g.vertices.len()];
    for (i, v) in vkeep.iter().enumerate() {
        vnew[*v] = i;
    }
    let mut hnew = vec![usize::MAX; g.half_edges.len()];
    for (i, h) in hkeep.iter().enumerate() {
        hnew[*h] = i;
    }
    for c in capped.iter_mut() {
        *c = hnew[*c];
    }
    let compact = BwGraph {
        vertices: vkeep
            .iter()
            .map(|v| {
                let o = &out.vertices[*v];
                Vertex { color: o.color, label: o.label, start: o.start.map(|s| hnew[s]), cyclic: o.cyclic.iter().map(|h| hnew[*h]).collect() }
            })
            .collect(),
        half_edges: hkeep
            .iter()
            .map(|h| {
                let o = &out.half_edges[*h];
                HalfEdge { source: o.source.map(|v| vnew[v]), partner: hnew[o.partner], leaf: o.leaf }
            })
            .collect(),
    };
    let rest_new: Vec<Gen> = rest
        .iter()
        .map(|q| match q {
            Gen::V(v) => Gen::V(vnew[*v]),
            Gen::H(h) => Gen::H(hnew[*h]),
        })
        .collect();
    let sign = og.sign * sigma * compact.sign_of_ordering(&rest_new);
    Some(OrientedGraph { graph: compact, sign })
}

/// Root half-edge of vertex `w`, found by walking towards an output leaf.
/// Works while some input leaves are capped (unlabeled).
fn vertex_roots_partial(g: &BwGraph, w: usize) -> usize {
    // the root of w is the unique incident half-edge whose side contains an
    // Out leaf
    for &h in &g.vertices[w].cyclic {
        if side_has_output(g, h) {
            return h;
        }
    }
    panic!("vertex without a path to an output");
}

fn side_has_output(g: &BwGraph, h: usize) -> bool {
    if g.is_leaf(h) {
        return matches!(g.half_edges[h].leaf, Some(Leaf::Out(_)));
    }
    let mut stack = vec![g.half_edges[h].partner];
    let mut seen = BTreeSet::new();
    while let Some(x) = stack.pop() {
        let v = g.half_edges[x].source.unwrap();
        if !seen.insert(v) {
            continue;
        }
        for &y in &g.vertices[v].cyclic {
            if y == x {
                continue;
            }
            if g.is_leaf(y) {
                if matches!(g.half_edges[y].leaf, Some(Leaf::Out(_))) {
                    return true;
                }
            } else {
                stack.push(g.half_edges[y].partner);
            }
        }
    }
    false
}

/// Bilinear composition: `f` first, then `g`.
pub fn compose(f: &ForestSum, g: &ForestSum) -> Result<ForestSum, ForestError> {
    let mut out = ForestSum::new();
    for (a, x) in f {
        for (b, y) in g {
            if let Some(r) = compose_raw(&a.raw(), &b.raw())? {
                add_forest(&mut out, &r, x.checked_mul(*y).expect("overflow"));
            }
        }
    }
    Ok(out)
}

/// Differential: blow-ups of the underlying graph.
pub fn differential(f: &ForestSum) -> ForestSum {
    let mut out = ForestSum::new();
    for (a, x) in f {
        for (g, y) in graph_core::blowups(&OrientedGraph::new(a.graph.clone(), 1)) {
            let e = out
                .entry(Forest { graph: g, strands: a.strands.clone(), units: a.units.clone(), n_in: a.n_in, n_out: a.n_out })
                .or_insert(0);
            *e += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// l_n oriented as h_1∧…∧h_n∧w.
pub fn ln(n: usize) -> OrientedGraph {
    assert!(n >= 1, "l_n needs n >= 1");
    let g = BwGraph::white_corolla(n);
    let mut gens: Vec<Gen> = (0..n).map(Gen::H).collect();
    gens.push(Gen::V(0));
    OrientedGraph::from_ordering(g, &gens)
}

/// Splits a graph made of one white vertex with trees attached into the
/// forest x and the white corolla l_k, so that the graph is x∧l_k glued.
/// Returns (raw forest, k) with the forest's sign chosen accordingly.
pub fn split_white(og: &OrientedGraph) -> (RawForest, usize) {
    let g = &og.graph;
    let ws = g.white_vertices();
    assert_eq!(ws.len(), 1, "exactly one white vertex");
    let w = ws[0];
    let slots = g.white_sequence(w);
    let k = slots.len();
    let n_in = g.leaves().len() as u32;
    // forest: every half-edge except the white slots, every vertex except w
    let fv: Vec<usize> = (0..g.vertices.len()).filter(|v| *v != w).collect();
    let fh: Vec<usize> = (0..g.half_edges.len()).filter(|h| g.half_edges[*h].source != Some(w)).collect();
    let mut vnew = vec![usize::MAX; g.vertices.len()];
    for (i, v) in fv.iter().enumerate() {
        vnew[*v] = i;
    }
    let mut hnew = vec![usize::MAX; g.half_edges.len()];
    for (i, h) in fh.iter().enumerate() {
        hnew[*h] = i;
    }
    let mut strands = Vec::new();
    let mut roots = BTreeMap::new();
    for (j, s) in slots.iter().enumerate() {
        let out = j as u32 + 1;
        if g.is_leaf(*s) {
            if let Some(Leaf::In(i)) = g.half_edges[*s].leaf {
                strands.push((i, out));
            }
        } else {
            roots.insert(g.half_edges[*s].partner, out);
        }
    }
    let graph = BwGraph {
        vertices: fv
            .iter()
            .map(|v| {
                let o = &g.vertices[*v];
                assert_eq!(o.color, Color::Black);
                Vertex { color: Color::Black, label: None, start: None, cyclic: o.cyclic.iter().map(|h| hnew[*h]).collect() }
            })
            .collect(),
        half_edges: fh
            .iter()
            .map(|h| {
                let o = &g.half_edges[*h];
                match roots.get(h) {
                    Some(out) => HalfEdge { source: o.source.map(|v| vnew[v]), partner: hnew[*h], leaf: Some(Leaf::Out(*out)) },
                    None => HalfEdge { source: o.source.map(|v| vnew[v]), partner: hnew[o.partner], leaf: o.leaf },
                }
            })
            .collect(),
    };
    let mut gens: Vec<Gen> = fv.iter().map(|v| Gen::V(*v)).chain(fh.iter().map(|h| Gen::H(*h))).collect();
    gens.extend(slots.iter().map(|s| Gen::H(*s)));
    gens.push(Gen::V(w));
    let sign = og.sign * g.sign_of_ordering(&gens);
    (RawForest { graph: OrientedGraph::new(graph, sign), strands, units: vec![], n_in, n_out: k as u32 }, k)
}

/// f_(n,k): the part of d(l_n) whose white vertex has valence k, as a
/// forest n -> k.
pub fn f_nk(n: usize, k: usize) -> Result<ForestSum, ForestError> {
    if k < 1 || k >= n {
        return Err(ForestError::FnkRange(n, k));
    }
    Ok(dl_by_valence(n).remove(&k).unwrap_or_default())
}

/// d(l_n) sorted by the valence of the white vertex.
pub fn dl_by_valence(n: usize) -> BTreeMap<usize, ForestSum> {
    let mut out: BTreeMap<usize, ForestSum> = BTreeMap::new();
    for (g, c) in graph_core::blowups(&ln(n)) {
        let (f, k) = split_white(&OrientedGraph::new(g, 1));
        add_forest(out.entry(k).or_default(), &f, c);
    }
    out
}

/// Compositions of n into m positive parts, in lexicographic order.
fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(m - 1) {
        for mut rest in compositions(n - first, m - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn juxtapose_all(parts: &[ForestSum]) -> ForestSum {
    let mut it = parts.iter();
    let first = it.next().expect("at least one part").clone();
    it.fold(first, |acc, p| juxtapose(&acc, p))
}

/// All planar trees with n inputs and every vertex of arity at least 2,
/// each as a single basis element (no units).
pub fn all_trees(n: usize) -> Vec<ForestSum> {
    if n == 1 {
        return vec![identity(1)];
    }
    let mut out = Vec::new();
    for k in 2..=n {
        let top = mk(k).expect("arity at least 2");
        for comp in compositions(n, k) {
            let mut acc: Vec<Vec<ForestSum>> = vec![vec![]];
            for part in &comp {
                let trees = all_trees(*part);
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        trees.iter().map(move |t| {
                            let mut v = prefix.clone();
                            v.push(t.clone());
                            v
                        })
                    })
                    .collect();
            }
            for parts in acc {
                let below = juxtapose_all(&parts);
                out.push(compose(&below, &top).expect("arities match"));
            }
        }
    }
    out
}

/// All planar forests n → m without units: juxtapositions of trees on
/// consecutive blocks of inputs.
pub fn all_forests(n: usize, m: usize) -> Vec<ForestSum> {
    let mut out = Vec::new();
    for comp in compositions(n, m) {
        let mut acc: Vec<Vec<ForestSum>> = vec![vec![]];
        for part in &comp {
            let trees = all_trees(*part);
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    trees.iter().map(move |t| {
                        let mut v = prefix.clone();
                        v.push(t.clone());
                        v
                    })
                })
                .collect();
        }
        out.extend(acc.iter().map(|parts| juxtapose_all(parts)));
    }
    out
}

/// Report of an identity check between two formal sums.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub passed: bool,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub detail: String,
}

/// Checks d(m_3) = m_2∘(m_2+id) − m_2∘(id+m_2).
pub fn verify_m3_identity() -> IdentityReport {
    let m2 = mk(2).unwrap();
    let lhs = differential(&mk(3).unwrap());
    let left = compose(&juxtapose(&m2, &identity(1)), &m2).unwrap();
    let right = compose(&juxtapose(&identity(1), &m2), &m2).unwrap();
    let rhs = add_sums(&left, &scale_sum(&right, -1));
    report_equal(&lhs, &rhs)
}

pub fn report_equal(lhs: &ForestSum, rhs: &ForestSum) -> IdentityReport {
    let diff = add_sums(lhs, &scale_sum(rhs, -1));
    IdentityReport {
        passed: diff.is_empty(),
        lhs_terms: lhs.len(),
        rhs_terms: rhs.len(),
        detail: if diff.is_empty() { "equal".into() } else { format!("{} differing terms", diff.len()) },
    }
}

/// The L differential applied to a sum of pairs x⊗l_k, stored as graphs:
/// composites of forests with white corollas.
pub fn glue_into_white(x: &ForestSum, k: usize) -> GraphSum {
    let mut out = GraphSum::new();
    for (f, c) in x {
        let raw = f.raw();
        add_term(&mut out, &glue_raw_into_white(&raw, k), *c);
    }
    out
}

/// Glues a forest n -> k into l_k, orientation x∧(h_1∧…∧h_k∧w).
pub fn glue_raw_into_white(f: &RawForest, k: usize) -> OrientedGraph {
    assert_eq!(f.n_out as usize, k);
    assert!(f.units.is_empty(), "units cannot be glued into a white vertex");
    let l = ln(k);
    let ho = f.graph.graph.half_edges.len();
    let mut og = f.graph.disjoint_union(&l);
    for j in 1..=k as u32 {
        let slot = ho + (j as usize - 1);
        if let Some(h) = f.graph.graph.leaf_with_label(Leaf::Out(j)) {
            og.graph.half_edges[h].partner = slot;
            og.graph.half_edges[h].leaf = None;
            og.graph.half_edges[slot].partner = h;
            og.graph.half_edges[slot].leaf = None;
        } else {
            let (i, _) = f.strands.iter().find(|(_, o)| *o == j).expect("output accounted for");
            og.graph.half_edges[slot].leaf = Some(Leaf::In(*i));
        }
    }
    og
}
