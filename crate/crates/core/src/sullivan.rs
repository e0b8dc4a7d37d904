//! Sullivan diagrams: black and white graphs with trivalent black vertices,
//! modulo the boundaries of graphs with a single 4-valent black vertex.
//!
//! Normal form. Every black tree is collapsed to one black corolla. A binary
//! tree whose root end is r, oriented by its composite orientation
//! ∧_v (in_1∧in_2∧v∧out), corresponds to the corolla oriented as
//! in_1∧…∧in_(k−1)∧c∧r, with the inputs read in cyclic order after r. The
//! root of each corolla is the end with the smallest index in the canonical
//! labeling of the collapsed graph, so canonical corollas list their cyclic
//! order starting at the root. Corollas are wedged in the order of their
//! canonical vertex index, followed by the remaining generators.
//!
//! Graphs whose black part contains a cycle are set to zero. They span a
//! subcomplex (blow-ups never remove a black cycle), so this is a quotient
//! of the Sullivan diagram complex.

use crate::graph_core::{
    component_labelings, vertex_blowups, BwGraph, Color, Gen, GraphError, HalfEdge, Leaf, OrientedGraph, Relabel,
    Vertex,
};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SullivanError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("black vertex {0} has valence {1}; representatives need trivalent black vertices")]
    NotTrivalent(usize, usize),
    #[error("mu_g and t_g need g >= 1, got {0}")]
    Genus(usize),
    #[error("the diagram is zero in the quotient")]
    Zero,
}

/// A normalized Sullivan diagram: a canonical collapsed graph and a sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SullivanDiagram {
    pub graph: BwGraph,
    pub sign: i8,
}

/// Formal integer combination of normalized diagrams (canonical graphs).
pub type SdSum = BTreeMap<BwGraph, i64>;

pub fn add_diagram(sum: &mut SdSum, d: &SullivanDiagram, coeff: i64) {
    if coeff == 0 {
        return;
    }
    let e = sum.entry(d.graph.clone()).or_insert(0);
    *e = e.checked_add(coeff * d.sign as i64).expect("coefficient overflow");
    if *e == 0 {
        sum.remove(&d.graph);
    }
}

/// A black tree of a representative.
#[derive(Clone, Debug)]
struct BlackTree {
    vertices: Vec<usize>,
    /// every half-edge whose source is a vertex of the tree
    half_edges: Vec<usize>,
    /// ends (leaves and half-edges joined to white vertices) in cyclic order
    ends: Vec<usize>,
}

fn is_black(g: &BwGraph, v: Option<usize>) -> bool {
    v.map(|v| g.vertices[v].color == Color::Black).unwrap_or(false)
}

/// A half-edge at a black vertex is an end unless its partner is also at a
/// black vertex.
fn is_end(g: &BwGraph, h: usize) -> bool {
    g.is_leaf(h) || !is_black(g, g.half_edges[g.half_edges[h].partner].source)
}

/// Ends met by walking around the tree after entering vertex `v` through `entry`.
fn walk(g: &BwGraph, v: usize, entry: usize, out: &mut Vec<usize>) {
    let cyc = &g.vertices[v].cyclic;
    let pos = cyc.iter().position(|x| *x == entry).expect("entry at vertex");
    for i in 1..cyc.len() {
        let x = cyc[(pos + i) % cyc.len()];
        if is_end(g, x) {
            out.push(x);
        } else {
            let p = g.half_edges[x].partner;
            walk(g, g.half_edges[p].source.expect("black partner"), p, out);
        }
    }
}

/// Black trees of `g`, or `None` if the black part has a cycle.
fn black_trees(g: &BwGraph) -> Option<Vec<BlackTree>> {
    let nv = g.vertices.len();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut black_edges = Vec::new();
    for (h, he) in g.half_edges.iter().enumerate() {
        let p = he.partner;
        if h < p && is_black(g, he.source) && is_black(g, g.half_edges[p].source) {
            black_edges.push((he.source.unwrap(), g.half_edges[p].source.unwrap()));
        }
    }
    for &(a, b) in &black_edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return None;
        }
        parent[ra] = rb;
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..nv {
        if g.vertices[v].color == Color::Black {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
    }
    let mut trees: Vec<BlackTree> = groups
        .into_values()
        .map(|vertices| {
            let half_edges: Vec<usize> = vertices.iter().flat_map(|v| g.vertices[*v].cyclic.iter().copied()).collect();
            let first_end = half_edges.iter().copied().find(|h| is_end(g, *h)).expect("a tree has an end");
            let mut ends = Vec::new();
            walk(g, g.half_edges[first_end].source.unwrap(), first_end, &mut ends);
            ends.push(first_end);
            BlackTree { vertices, half_edges, ends }
        })
        .collect();
    trees.sort_by_key(|t| t.vertices[0]);
    Some(trees)
}

/// Composite orientation of a tree rooted at the end `root`.
fn composite_orientation(g: &BwGraph, root: usize) -> Vec<Gen> {
    let mut gens = Vec::new();
    let mut stack = vec![root];
    while let Some(out) = stack.pop() {
        let v = g.half_edges[out].source.unwrap();
        let cyc = &g.vertices[v].cyclic;
        let pos = cyc.iter().position(|x| *x == out).unwrap();
        let ins = [cyc[(pos + 1) % 3], cyc[(pos + 2) % 3]];
        gens.extend([Gen::H(ins[0]), Gen::H(ins[1]), Gen::V(v), Gen::H(out)]);
        for x in ins {
            if !is_end(g, x) {
                stack.push(g.half_edges[x].partner);
            }
        }
    }
    gens
}

/// The collapsed graph together with index maps back to the representative.
struct Collapsed {
    graph: BwGraph,
    /// corolla vertex of each tree
    corolla: Vec<usize>,
    /// representative vertex -> collapsed vertex (whites only)
    vnew: Vec<Option<usize>>,
    /// representative half-edge -> collapsed half-edge (kept ones)
    hnew: Vec<Option<usize>>,
    /// collapsed half-edge -> representative half-edge
    hold: Vec<usize>,
}

fn collapse_trees(g: &BwGraph, trees: &[BlackTree]) -> Collapsed {
    let mut vnew = vec![None; g.vertices.len()];
    let mut next = 0;
    for v in 0..g.vertices.len() {
        if g.vertices[v].color == Color::White {
            vnew[v] = Some(next);
            next += 1;
        }
    }
    let corolla: Vec<usize> = (0..trees.len()).map(|i| next + i).collect();
    let mut tree_of = vec![usize::MAX; g.vertices.len()];
    for (i, t) in trees.iter().enumerate() {
        for v in &t.vertices {
            tree_of[*v] = i;
        }
    }
    let keep = |h: usize| -> bool {
        match g.half_edges[h].source {
            None => true,
            Some(v) => g.vertices[v].color == Color::White || is_end(g, h),
        }
    };
    let hold: Vec<usize> = (0..g.half_edges.len()).filter(|h| keep(*h)).collect();
    let mut hnew = vec![None; g.half_edges.len()];
    for (i, h) in hold.iter().enumerate() {
        hnew[*h] = Some(i);
    }
    let mut vertices: Vec<Vertex> = (0..g.vertices.len())
        .filter(|v| g.vertices[*v].color == Color::White)
        .map(|v| {
            let o = &g.vertices[v];
            Vertex {
                color: Color::White,
                label: o.label,
                start: o.start.map(|s| hnew[s].unwrap()),
                cyclic: o.cyclic.iter().map(|h| hnew[*h].unwrap()).collect(),
            }
        })
        .collect();
    for t in trees {
        vertices.push(Vertex {
            color: Color::Black,
            label: None,
            start: None,
            cyclic: t.ends.iter().map(|h| hnew[*h].unwrap()).collect(),
        });
    }
    let half_edges = hold
        .iter()
        .map(|&h| {
            let o = &g.half_edges[h];
            let source = o.source.map(|v| if g.vertices[v].color == Color::White { vnew[v].unwrap() } else { corolla[tree_of[v]] });
            HalfEdge { source, partner: hnew[o.partner].unwrap(), leaf: o.leaf }
        })
        .collect();
    Collapsed { graph: BwGraph { vertices, half_edges }, corolla, vnew, hnew, hold }
}

/// A global labeling of the collapsed graph: the canonical graph and the
/// maps from collapsed indices to canonical indices.
struct Labeling {
    graph: BwGraph,
    vc: Vec<usize>,
    hc: Vec<usize>,
}

fn assemble(choice: &[&Relabel], nv: usize, nh: usize) -> Labeling {
    let mut graph = BwGraph::default();
    let mut vc = vec![usize::MAX; nv];
    let mut hc = vec![usize::MAX; nh];
    for r in choice {
        let (vo, ho) = (graph.vertices.len(), graph.half_edges.len());
        for v in &r.graph.vertices {
            graph.vertices.push(Vertex {
                color: v.color,
                label: v.label,
                start: v.start.map(|s| s + ho),
                cyclic: v.cyclic.iter().map(|h| h + ho).collect(),
            });
        }
        for h in &r.graph.half_edges {
            graph.half_edges.push(HalfEdge { source: h.source.map(|v| v + vo), partner: h.partner + ho, leaf: h.leaf });
        }
        for (o, n) in &r.vmap {
            vc[*o] = n + vo;
        }
        for (o, n) in &r.hmap {
            hc[*o] = n + ho;
        }
    }
    Labeling { graph, vc, hc }
}

fn labeled_sign(og: &OrientedGraph, trees: &[BlackTree], col: &Collapsed, lab: &Labeling) -> i8 {
    let g = &og.graph;
    let mut order: Vec<usize> = (0..trees.len()).collect();
    order.sort_by_key(|t| lab.vc[col.corolla[*t]]);
    let mut in_tree = vec![false; g.vertices.len() + g.half_edges.len()];
    for t in trees {
        for v in &t.vertices {
            in_tree[*v] = true;
        }
        for h in &t.half_edges {
            in_tree[g.vertices.len() + h] = true;
        }
    }
    let rest: Vec<Gen> = g
        .standard_order()
        .into_iter()
        .filter(|x| match x {
            Gen::V(v) => !in_tree[*v],
            Gen::H(h) => !in_tree[g.vertices.len() + h],
        })
        .collect();
    let mut before = Vec::new();
    let mut after = Vec::new();
    for &t in &order {
        let c = lab.vc[col.corolla[t]];
        let cyc = &lab.graph.vertices[c].cyclic;
        let root_c = cyc[0];
        let root = col.hold[lab.hc.iter().position(|x| *x == root_c).expect("root in labeling")];
        before.extend(composite_orientation(g, root));
        after.extend(cyc[1..].iter().map(|h| Gen::H(*h)));
        after.push(Gen::V(c));
        after.push(Gen::H(root_c));
    }
    before.extend(rest.iter().copied());
    after.extend(rest.iter().map(|x| match x {
        Gen::V(v) => Gen::V(lab.vc[col.vnew[*v].unwrap()]),
        Gen::H(h) => Gen::H(lab.hc[col.hnew[*h].unwrap()]),
    }));
    og.sign * g.sign_of_ordering(&before) * lab.graph.sign_of_ordering(&after)
}

/// True when the black subgraph contains a cycle.
pub fn has_black_cycle(g: &BwGraph) -> bool {
    black_trees(g).is_none()
}

/// Normal form of a trivalent-black representative; `None` when the class
/// is zero (black cycle, or an automorphism reversing the orientation).
pub fn from_bw(og: &OrientedGraph) -> Result<Option<SullivanDiagram>, SullivanError> {
    let g = &og.graph;
    g.validate()?;
    for (v, vert) in g.vertices.iter().enumerate() {
        if vert.color == Color::Black && vert.cyclic.len() != 3 {
            return Err(SullivanError::NotTrivalent(v, vert.cyclic.len()));
        }
    }
    let Some(trees) = black_trees(g) else { return Ok(None) };
    let col = collapse_trees(g, &trees);
    let comps = component_labelings(&col.graph);
    // best relabeling per component, with all ties
    let mut best: Vec<(usize, Vec<usize>)> = Vec::new();
    for (ci, labs) in comps.iter().enumerate() {
        let min = labs.iter().map(|r| &r.graph).min().expect("component has an anchor");
        let ties: Vec<usize> = (0..labs.len()).filter(|i| &labs[*i].graph == min).collect();
        best.push((ci, ties));
    }
    best.sort_by(|a, b| comps[a.0][a.1[0]].graph.cmp(&comps[b.0][b.1[0]].graph));
    for w in best.windows(2) {
        let (a, b) = (&comps[w[0].0][w[0].1[0]].graph, &comps[w[1].0][w[1].1[0]].graph);
        if a == b && (a.vertices.len() + a.half_edges.len()) % 2 == 1 {
            return Ok(None);
        }
    }
    let (nv, nh) = (col.graph.vertices.len(), col.graph.half_edges.len());
    let pick = |alt: Option<(usize, usize)>| -> Labeling {
        let choice: Vec<&Relabel> = best
            .iter()
            .enumerate()
            .map(|(pos, (ci, ties))| match alt {
                Some((p, t)) if p == pos => &comps[*ci][t],
                _ => &comps[*ci][ties[0]],
            })
            .collect();
        assemble(&choice, nv, nh)
    };
    let lab = pick(None);
    let sign = labeled_sign(og, &trees, &col, &lab);
    for (pos, (_, ties)) in best.iter().enumerate() {
        for &t in &ties[1..] {
            if labeled_sign(og, &trees, &col, &pick(Some((pos, t)))) != sign {
                return Ok(None);
            }
        }
    }
    Ok(Some(SullivanDiagram { graph: lab.graph, sign }))
}

/// Normal form of a combination of representatives.
pub fn normalize(terms: &[(OrientedGraph, i64)]) -> Result<SdSum, SullivanError> {
    let mut out = SdSum::new();
    for (g, c) in terms {
        if let Some(d) = from_bw(g)? {
            add_diagram(&mut out, &d, *c);
        }
    }
    Ok(out)
}

/// Degree: the sum over white vertices of valence minus one.
pub fn degree(d: &BwGraph) -> i64 {
    d.vertices.iter().filter(|v| v.color == Color::White).map(|v| v.cyclic.len() as i64 - 1).sum()
}

/// Planar binary bracketing of a list of leaves.
#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn left_comb(n: usize) -> Shape {
        let mut s = Shape::Leaf;
        for _ in 1..n {
            s = Shape::Node(Box::new(s), Box::new(Shape::Leaf));
        }
        s
    }

    fn random<R: Rng>(rng: &mut R, n: usize) -> Shape {
        if n == 1 {
            return Shape::Leaf;
        }
        let k = rng.gen_range(1..n);
        Shape::Node(Box::new(Shape::random(rng, k)), Box::new(Shape::random(rng, n - k)))
    }
}

/// Replaces black vertex `c` (cyclic order root first, then inputs) by a
/// binary tree of the given shape whose top vertex keeps the index `c`.
fn expand_vertex(g: &BwGraph, c: usize, shape: &Shape) -> BwGraph {
    let cyc = g.vertices[c].cyclic.clone();
    let mut out = g.clone();
    let mut inputs = cyc[1..].iter().copied();
    fn build(out: &mut BwGraph, shape: &Shape, up: usize, v: usize, inputs: &mut dyn Iterator<Item = usize>) {
        let Shape::Node(l, r) = shape else { unreachable!("a vertex has two children") };
        let mut slots = Vec::with_capacity(3);
        for child in [l, r] {
            match child.as_ref() {
                Shape::Leaf => {
                    let h = inputs.next().expect("enough inputs");
                    out.half_edges[h].source = Some(v);
                    slots.push(h);
                }
                node => {
                    let u = out.vertices.len();
                    out.vertices.push(Vertex { color: Color::Black, label: None, start: None, cyclic: vec![] });
                    let (x, y) = (out.half_edges.len(), out.half_edges.len() + 1);
                    out.half_edges.push(HalfEdge { source: Some(v), partner: y, leaf: None });
                    out.half_edges.push(HalfEdge { source: Some(u), partner: x, leaf: None });
                    build(out, node, y, u, inputs);
                    slots.push(x);
                }
            }
        }
        slots.push(up);
        out.half_edges[up].source = Some(v);
        out.vertices[v].cyclic = slots;
    }
    build(&mut out, shape, cyc[0], c, &mut inputs);
    assert!(inputs.next().is_none(), "shape uses every input");
    out
}

fn expand_with(d: &SullivanDiagram, shape_for: &mut dyn FnMut(usize) -> Shape) -> Result<OrientedGraph, SullivanError> {
    let mut g = d.graph.clone();
    let corollas: Vec<usize> =
        (0..g.vertices.len()).filter(|v| g.vertices[*v].color == Color::Black && g.vertices[*v].cyclic.len() > 3).collect();
    for c in corollas {
        let k = g.vertices[c].cyclic.len();
        g = expand_vertex(&g, c, &shape_for(k - 1));
    }
    let probe = from_bw(&OrientedGraph::new(g.clone(), 1))?.ok_or(SullivanError::Zero)?;
    assert_eq!(probe.graph, d.graph, "expansion normalizes back to its diagram");
    Ok(OrientedGraph::new(g, probe.sign * d.sign))
}

/// Trivalent representative with left-combed trees.
pub fn expand(d: &SullivanDiagram) -> Result<OrientedGraph, SullivanError> {
    expand_with(d, &mut Shape::left_comb)
}

/// Trivalent representative with random planar trees.
pub fn expand_random<R: Rng>(d: &SullivanDiagram, rng: &mut R) -> Result<OrientedGraph, SullivanError> {
    expand_with(d, &mut |n| Shape::random(rng, n))
}

/// One face of the differential: adjacent half-edges `position` and
/// `position + 1` (cyclically, counted from the start) of a white vertex
/// are joined by a new trivalent black vertex.
#[derive(Clone, Debug)]
pub struct Face {
    pub white: usize,
    pub position: usize,
    pub representative: OrientedGraph,
    pub normal_form: Option<SullivanDiagram>,
}

/// Faces of a representative, in order of white vertex then position.
pub fn faces(og: &OrientedGraph) -> Result<Vec<Face>, SullivanError> {
    let g = &og.graph;
    let mut out = Vec::new();
    for w in g.white_vertices() {
        let seq = g.white_sequence(w);
        for b in vertex_blowups(og, w) {
            let new_v = b.graph.vertices.len() - 1;
            let cyc = &b.graph.vertices[new_v].cyclic;
            if cyc.len() != 3 {
                continue;
            }
            let position = seq.iter().position(|h| *h == cyc[0]).expect("block starts at a white half-edge");
            let normal_form = from_bw(&b)?;
            out.push(Face { white: w, position, representative: b, normal_form });
        }
    }
    out.sort_by_key(|f| (f.white, f.position));
    Ok(out)
}

/// Differential of a combination of normalized diagrams.
pub fn sd_differential(x: &SdSum) -> Result<SdSum, SullivanError> {
    let mut out = SdSum::new();
    for (g, c) in x {
        let rep = expand(&SullivanDiagram { graph: g.clone(), sign: 1 })?;
        for f in faces(&rep)? {
            if let Some(d) = f.normal_form {
                add_diagram(&mut out, &d, *c);
            }
        }
    }
    Ok(out)
}

pub fn single(d: &SullivanDiagram) -> SdSum {
    let mut s = SdSum::new();
    add_diagram(&mut s, d, 1);
    s
}

pub fn is_cycle(d: &SullivanDiagram) -> Result<bool, SullivanError> {
    Ok(sd_differential(&single(d))?.is_empty())
}

/// One end of a black tree or white-white chord in a construction: a
/// white half-edge or a leaf with a label.
#[derive(Clone, Copy, Debug)]
enum End {
    White(usize),
    Leaf(u32),
}

/// Attaches a left-combed tree whose ends, in cyclic order, are `ends`.
/// Two white ends make a chord.
fn attach_tree(g: &mut BwGraph, ends: &[End]) {
    if let [End::White(a), End::White(b)] = ends {
        g.half_edges[*a].partner = *b;
        g.half_edges[*a].leaf = None;
        g.half_edges[*b].partner = *a;
        g.half_edges[*b].leaf = None;
        return;
    }
    assert!(ends.len() >= 3, "a black tree needs three ends");
    // a corolla with cyclic order ends[k-1] (root) followed by the rest
    let c = g.vertices.len();
    let mut cyc = Vec::new();
    let order: Vec<End> = std::iter::once(ends[ends.len() - 1]).chain(ends[..ends.len() - 1].iter().copied()).collect();
    for e in order {
        let h = g.half_edges.len();
        match e {
            End::White(w) => {
                g.half_edges.push(HalfEdge { source: Some(c), partner: w, leaf: None });
                g.half_edges[w].partner = h;
                g.half_edges[w].leaf = None;
            }
            End::Leaf(l) => g.half_edges.push(HalfEdge { source: Some(c), partner: h, leaf: Some(Leaf::In(l)) }),
        }
        cyc.push(h);
    }
    g.vertices.push(Vertex { color: Color::Black, label: None, start: None, cyclic: cyc });
    let k = ends.len();
    *g = expand_vertex(g, c, &Shape::left_comb(k - 1));
}

/// White vertex labeled 1 with `n` half-edges s_0…s_(n−1), start s_0.
fn white_circle(n: usize) -> BwGraph {
    let mut g = BwGraph::white_corolla(n);
    for h in &mut g.half_edges {
        h.leaf = None;
    }
    g
}

/// Ends of a tree on the white half-edges `spokes`, listed against the
/// cyclic order of the white vertex so that the tree is planar outside it.
fn planar_ends(spokes: &[usize]) -> Vec<End> {
    spokes.iter().rev().map(|s| End::White(*s)).collect()
}

/// μ_g: a white vertex with 2g+2 half-edges, a tree on s_0, s_2, …, s_2g
/// and leaves 1, …, g+1 on s_1, s_3, …. Oriented by the standard ordering.
pub fn mu_g_representative(g: usize) -> Result<OrientedGraph, SullivanError> {
    if g < 1 {
        return Err(SullivanError::Genus(g));
    }
    let n = 2 * g + 2;
    let mut graph = white_circle(n);
    let odd: Vec<usize> = (0..n).step_by(2).collect();
    attach_tree(&mut graph, &planar_ends(&odd));
    for (i, s) in (1..n).step_by(2).enumerate() {
        graph.half_edges[s].partner = s;
        graph.half_edges[s].leaf = Some(Leaf::In(i as u32 + 1));
    }
    Ok(OrientedGraph::new(graph, 1))
}

/// t_g: μ_g with its leaves replaced by a second tree on s_1, s_3, …,
/// s_(2g+1) carrying one leaf, placed between the ends at s_1 and s_3
/// (for g = 1 the second tree is a single vertex on s_1, s_3 and the leaf).
pub fn t_g_representative(g: usize) -> Result<OrientedGraph, SullivanError> {
    if g < 1 {
        return Err(SullivanError::Genus(g));
    }
    let n = 2 * g + 2;
    let mut graph = white_circle(n);
    let odd: Vec<usize> = (0..n).step_by(2).collect();
    attach_tree(&mut graph, &planar_ends(&odd));
    let even: Vec<usize> = (1..n).step_by(2).collect();
    let mut ends = planar_ends(&even);
    // reversed order lists s_3 just before s_1; the leaf sits between them
    let pos = ends.len() - 1;
    ends.insert(pos, End::Leaf(1));
    attach_tree(&mut graph, &ends);
    Ok(OrientedGraph::new(graph, 1))
}

pub fn mu_g(g: usize) -> Result<SullivanDiagram, SullivanError> {
    from_bw(&mu_g_representative(g)?)?.ok_or(SullivanError::Zero)
}

pub fn t_g(g: usize) -> Result<SullivanDiagram, SullivanError> {
    from_bw(&t_g_representative(g)?)?.ok_or(SullivanError::Zero)
}

/// l_n as a Sullivan diagram.
pub fn l_n(n: usize) -> Result<SullivanDiagram, SullivanError> {
    from_bw(&crate::ainfty::ln(n))?.ok_or(SullivanError::Zero)
}

/// Report on the faces of a diagram before cancellation.
#[derive(Clone, Debug, Serialize)]
pub struct FaceReport {
    pub faces: usize,
    pub even: bool,
    /// every face 2i cancels against face 2i+1
    pub paired: bool,
    pub cycle: bool,
    pub degree: i64,
}

/// Checks that the faces of a one-circle representative cancel in the
/// pairs (2i, 2i+1).
pub fn face_report(og: &OrientedGraph) -> Result<FaceReport, SullivanError> {
    let fs = faces(og)?;
    let even = fs.len() % 2 == 0;
    let mut paired = even;
    if even {
        for pair in fs.chunks(2) {
            let mut s = SdSum::new();
            for f in pair {
                if let Some(d) = &f.normal_form {
                    add_diagram(&mut s, d, 1);
                }
            }
            if !s.is_empty() || pair[0].position % 2 != 0 || pair[1].position != pair[0].position + 1 {
                paired = false;
            }
        }
    }
    let mut total = SdSum::new();
    for f in &fs {
        if let Some(d) = &f.normal_form {
            add_diagram(&mut total, d, 1);
        }
    }
    Ok(FaceReport { faces: fs.len(), even, paired, cycle: total.is_empty(), degree: degree(&og.graph) })
}

/// Classical picture: circles with attachment points, and chords (black
/// trees or white-white edges) listing their ends in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalDiagram {
    /// per circle, its points from the start: a leaf label or a chord index
    pub circles: Vec<Vec<Site>>,
    pub chords: Vec<Vec<ChordEnd>>,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Site {
    Leaf(u32),
    Chord(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ChordEnd {
    Point { circle: usize, position: usize },
    Leaf(u32),
}

pub fn classical(d: &SullivanDiagram) -> ClassicalDiagram {
    let g = &d.graph;
    let whites = g.white_vertices();
    let seqs: Vec<Vec<usize>> = whites.iter().map(|w| g.white_sequence(*w)).collect();
    let locate = |h: usize| -> (usize, usize) {
        for (ci, s) in seqs.iter().enumerate() {
            if let Some(p) = s.iter().position(|x| *x == h) {
                return (ci, p);
            }
        }
        unreachable!("half-edge at a white vertex")
    };
    let label = |h: usize| match g.half_edges[h].leaf {
        Some(Leaf::In(l)) | Some(Leaf::Out(l)) => l,
        None => 0,
    };
    let mut chords: Vec<Vec<ChordEnd>> = Vec::new();
    let mut chord_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (v, vert) in g.vertices.iter().enumerate() {
        if vert.color == Color::Black {
            let id = chords.len();
            let ends = vert
                .cyclic
                .iter()
                .map(|h| {
                    if g.is_leaf(*h) {
                        ChordEnd::Leaf(label(*h))
                    } else {
                        let (circle, position) = locate(g.half_edges[*h].partner);
                        ChordEnd::Point { circle, position }
                    }
                })
                .collect();
            chords.push(ends);
            chord_of.insert(v, id);
        }
    }
    let mut circles = Vec::new();
    for s in &seqs {
        let mut sites = Vec::new();
        for &h in s {
            if g.is_leaf(h) {
                sites.push(Site::Leaf(label(h)));
                continue;
            }
            let p = g.half_edges[h].partner;
            let pv = g.half_edges[p].source.unwrap();
            if g.vertices[pv].color == Color::Black {
                sites.push(Site::Chord(chord_of[&pv]));
            } else {
                let key = usize::MAX - h.min(p);
                let id = *chord_of.entry(key).or_insert_with(|| {
                    let (c1, p1) = locate(h.min(p));
                    let (c2, p2) = locate(h.max(p));
                    chords.push(vec![ChordEnd::Point { circle: c1, position: p1 }, ChordEnd::Point { circle: c2, position: p2 }]);
                    chords.len() - 1
                });
                sites.push(Site::Chord(id));
            }
        }
        circles.push(sites);
    }
    ClassicalDiagram { circles, chords, sign: d.sign }
}

/// Joins two leaves into an edge; the orientation is unchanged.
pub fn close_leaves(og: &OrientedGraph, a: usize, b: usize) -> OrientedGraph {
    let mut g = og.graph.clone();
    assert!(a != b && g.is_leaf(a) && g.is_leaf(b), "closing needs two distinct leaves");
    g.half_edges[a].partner = b;
    g.half_edges[a].leaf = None;
    g.half_edges[b].partner = a;
    g.half_edges[b].leaf = None;
    OrientedGraph::new(crate::graph_core::renumber_leaves(&g), og.sign)
}

/// A random trivalent-black representative with `circles` white vertices
/// and at most `max_spokes` white half-edges in total.
pub fn random_representative<R: Rng>(rng: &mut R, circles: usize, max_spokes: usize) -> OrientedGraph {
    assert!(circles >= 1 && max_spokes >= circles);
    let mut g = BwGraph::default();
    let mut left = max_spokes;
    for c in 0..circles {
        let room = left - (circles - c - 1);
        let n = rng.gen_range(1..=room.min(5));
        left -= n;
        let mut w = BwGraph::white_corolla(n);
        w.vertices[0].label = Some(c as u32 + 1);
        g = g.disjoint_union(&w);
    }
    let mut og = OrientedGraph::new(crate::graph_core::renumber_leaves(&g), if rng.gen_bool(0.5) { 1 } else { -1 });
    for _ in 0..rng.gen_range(0..=4) {
        let leaves = og.graph.leaves();
        if leaves.len() < 2 {
            break;
        }
        let a = leaves[rng.gen_range(0..leaves.len())];
        let b = leaves[rng.gen_range(0..leaves.len())];
        if a == b {
            continue;
        }
        og = if rng.gen_bool(0.6) { crate::graph_core::join_leaves(&og, a, b) } else { close_leaves(&og, a, b) };
    }
    og
}

#[cfg(test)]
mod tests;
