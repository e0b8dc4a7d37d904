//! Action of Sullivan diagrams with one outgoing circle on Hochschild
//! chains of a symmetric Frobenius algebra, by a state sum.
//!
//! Every edge carries the copairing, every black vertex the trilinear form
//! ε(abc) read in its cyclic order, every leaf its input, and the white
//! vertex reads its half-edges from the start into the output word. Signs:
//! the copairings (edges by smaller half-edge) and then the inputs (by leaf
//! label) are permuted into the order "white word, then black vertices by
//! index, each in cyclic order" with the Koszul rule, and the forms are
//! applied from the left end of the black part. For algebras concentrated
//! in even degrees every such sign is +1.
//!
//! A representative contributes its state sum times the sign of its
//! orientation against the reference orientation of [`reference_sign`].

use crate::algebra::{add_to, koszul_sign, sgn, tensor_add, FrobeniusAlgebra, Tensor, Word};
use crate::chain_complex::ClassReport;
use crate::hochschild::{build_hochschild, HochschildError, HochschildSpec};
use crate::graph_core::{BwGraph, Color, Gen, Leaf, OrientedGraph};
use crate::sullivan::{self, expand, from_bw, SdSum, SullivanDiagram, SullivanError};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TqftError {
    #[error(transparent)]
    Sullivan(#[from] SullivanError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error("the action needs exactly one white vertex, found {0}")]
    WhiteCount(usize),
    #[error("leaf {0} has no input")]
    MissingInput(u32),
    #[error("input for leaf {0} has length {1}, the algebra has dimension {2}")]
    InputShape(u32, usize, usize),
    #[error("the algebra has no element with nonzero counit")]
    NoTopClass,
}

/// A diagram with one algebra element per leaf label.
#[derive(Clone, Debug)]
pub struct LabeledDiagram {
    pub diagram: SullivanDiagram,
    pub inputs: BTreeMap<u32, Vec<i64>>,
}

fn trilinear(alg: &FrobeniusAlgebra, a: usize, b: usize, c: usize) -> i64 {
    let ab = alg.mul_vec(&alg.basis_vec(a), &alg.basis_vec(b));
    let abc = alg.mul_vec(&ab, &alg.basis_vec(c));
    abc.iter().zip(&alg.counit).map(|(x, e)| x * e).sum()
}

/// State sum of an unoriented trivalent-black graph with one white vertex.
pub fn state_sum(alg: &FrobeniusAlgebra, g: &BwGraph, inputs: &BTreeMap<u32, Vec<i64>>) -> Result<Tensor, TqftError> {
    let whites = g.white_vertices();
    if whites.len() != 1 {
        return Err(TqftError::WhiteCount(whites.len()));
    }
    let word_half_edges = g.white_sequence(whites[0]);
    let blacks: Vec<usize> = (0..g.vertices.len()).filter(|v| g.vertices[*v].color == Color::Black).collect();
    for v in &blacks {
        if g.vertices[*v].cyclic.len() != 3 {
            return Err(SullivanError::NotTrivalent(*v, g.vertices[*v].cyclic.len()).into());
        }
    }
    let edges: Vec<(usize, usize)> = crate::graph_core::edges(g);
    let mut leaves: Vec<(u32, usize)> = g
        .leaves()
        .into_iter()
        .map(|h| match g.half_edges[h].leaf {
            Some(Leaf::In(l)) | Some(Leaf::Out(l)) => (l, h),
            None => (0, h),
        })
        .collect();
    leaves.sort();
    for (l, _) in &leaves {
        let v = inputs.get(l).ok_or(TqftError::MissingInput(*l))?;
        if v.len() != alg.dim() {
            return Err(TqftError::InputShape(*l, v.len(), alg.dim()));
        }
    }
    // source order of half-edges and target order
    let mut source: Vec<usize> = Vec::new();
    for (a, b) in &edges {
        source.push(*a);
        source.push(*b);
    }
    source.extend(leaves.iter().map(|(_, h)| *h));
    let mut target: Vec<usize> = word_half_edges.clone();
    for v in &blacks {
        target.extend(g.vertices[*v].cyclic.iter().copied());
    }
    let pos_in_source: BTreeMap<usize, usize> = source.iter().enumerate().map(|(i, h)| (*h, i)).collect();
    let perm: Vec<usize> = target.iter().map(|h| pos_in_source[h]).collect();
    let copairing: Vec<(usize, usize, i64)> = alg.copairing().into_iter().map(|(w, c)| (w[0], w[1], c)).collect();
    let form_degree = alg.counit_degree();

    let nh = g.half_edges.len();
    let mut label = vec![usize::MAX; nh];
    let mut out = Tensor::new();
    // enumerate edge states, then leaf states
    fn rec(
        i: usize,
        coeff: i64,
        label: &mut Vec<usize>,
        ctx: &Ctx,
        out: &mut Tensor,
    ) {
        if coeff == 0 {
            return;
        }
        if i < ctx.edges.len() {
            let (a, b) = ctx.edges[i];
            for &(x, y, c) in ctx.copairing {
                label[a] = x;
                label[b] = y;
                rec(i + 1, coeff * c, label, ctx, out);
            }
            return;
        }
        let j = i - ctx.edges.len();
        if j < ctx.leaves.len() {
            let (l, h) = ctx.leaves[j];
            for (x, c) in ctx.inputs[&l].iter().enumerate() {
                if *c != 0 {
                    label[h] = x;
                    rec(i + 1, coeff * c, label, ctx, out);
                }
            }
            return;
        }
        let alg = ctx.alg;
        let mut value = coeff;
        let degs: Vec<i64> = ctx.source.iter().map(|h| alg.degree[label[*h]]).collect();
        value *= koszul_sign(ctx.perm, &degs);
        let word: Word = ctx.word.iter().map(|h| label[*h]).collect();
        let mut left = alg.word_degree(&word);
        for v in ctx.blacks {
            let cyc = &ctx.graph.vertices[*v].cyclic;
            let (a, b, c) = (label[cyc[0]], label[cyc[1]], label[cyc[2]]);
            value *= trilinear(alg, a, b, c) * sgn(ctx.form_degree * left);
            if value == 0 {
                return;
            }
            left += alg.degree[a] + alg.degree[b] + alg.degree[c];
        }
        add_to(out, word, value);
    }
    struct Ctx<'a> {
        alg: &'a FrobeniusAlgebra,
        graph: &'a BwGraph,
        edges: &'a [(usize, usize)],
        leaves: &'a [(u32, usize)],
        inputs: &'a BTreeMap<u32, Vec<i64>>,
        copairing: &'a [(usize, usize, i64)],
        source: &'a [usize],
        perm: &'a [usize],
        word: &'a [usize],
        blacks: &'a [usize],
        form_degree: i64,
    }
    let ctx = Ctx {
        alg,
        graph: g,
        edges: &edges,
        leaves: &leaves,
        inputs,
        copairing: &copairing,
        source: &source,
        perm: &perm,
        word: &word_half_edges,
        blacks: &blacks,
        form_degree,
    };
    let _ = target;
    rec(0, 1, &mut label, &ctx, &mut out);
    Ok(out)
}

/// Sign of the orientation "half-edges of the white vertex from the start,
/// the white vertex, then each black vertex followed by its cyclic
/// half-edges" relative to the standard generator order. The white part
/// matches the orientation of l_n. Black blocks have even size, so their order and
/// rotation do not matter.
pub fn reference_sign(g: &BwGraph) -> i8 {
    let mut gens = Vec::new();
    for w in g.white_vertices() {
        gens.extend(g.white_sequence(w).into_iter().map(Gen::H));
        gens.push(Gen::V(w));
    }
    for (v, vx) in g.vertices.iter().enumerate() {
        if vx.color == Color::Black {
            gens.push(Gen::V(v));
            gens.extend(vx.cyclic.iter().map(|h| Gen::H(*h)));
        }
    }
    g.sign_of_ordering(&gens)
}

/// Value of an oriented trivalent representative: its orientation relative
/// to the reference orientation times the state sum. Representatives whose
/// normal form vanishes get 0.
pub fn evaluate_representative(
    alg: &FrobeniusAlgebra,
    og: &OrientedGraph,
    inputs: &BTreeMap<u32, Vec<i64>>,
) -> Result<Tensor, TqftError> {
    if from_bw(og)?.is_none() {
        return Ok(Tensor::new());
    }
    let s = state_sum(alg, &og.graph, inputs)?;
    let sign = og.sign as i64 * reference_sign(&og.graph) as i64;
    Ok(tensor_add(&Tensor::new(), &s, sign))
}

/// Value of a normalized diagram, computed on its left-combed representative.
pub fn evaluate(alg: &FrobeniusAlgebra, l: &LabeledDiagram) -> Result<Tensor, TqftError> {
    let rep = expand(&l.diagram)?;
    evaluate_representative(alg, &rep, &l.inputs)
}

/// Value of a combination of normalized diagrams sharing the same inputs.
pub fn evaluate_sum(alg: &FrobeniusAlgebra, x: &SdSum, inputs: &BTreeMap<u32, Vec<i64>>) -> Result<Tensor, TqftError> {
    let mut out = Tensor::new();
    for (g, c) in x {
        let v = evaluate(alg, &LabeledDiagram { diagram: SullivanDiagram { graph: g.clone(), sign: 1 }, inputs: inputs.clone() })?;
        out = tensor_add(&out, &v, *c);
    }
    Ok(out)
}

/// The basis element on which the counit is nonzero (x for the built-ins).
pub fn top_class(alg: &FrobeniusAlgebra) -> Result<usize, TqftError> {
    alg.counit.iter().position(|c| *c != 0).ok_or(TqftError::NoTopClass)
}

/// Drops words with the unit in a position other than the first.
pub fn reduce(alg: &FrobeniusAlgebra, t: &Tensor) -> Tensor {
    let mut out = t.clone();
    if let Some(u) = alg.unit_index {
        out.retain(|w, _| !w[1..].contains(&u));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionEntry {
    pub family: String,
    pub g: usize,
    pub degree: i64,
    /// reduced output as (word of basis names, coefficient)
    pub output: Vec<(String, i64)>,
    /// the output is ±1⊗x⊗…⊗x with 2g+1 copies of x
    pub expected_shape: bool,
    /// the coefficient of 1⊗x⊗…⊗x
    pub coefficient: i64,
    pub class: ClassReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionReport {
    pub algebra: String,
    pub g_max: usize,
    pub entries: Vec<ActionEntry>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.expected_shape && e.class.nonzero_over_z && e.class.nonzero_over_q)
    }
}

pub fn word_name(alg: &FrobeniusAlgebra, w: &Word) -> String {
    w.iter().map(|a| alg.basis[*a].as_str()).collect::<Vec<_>>().join("⊗")
}

/// Inputs assigning `x` to leaves 1..=n.
pub fn constant_inputs(alg: &FrobeniusAlgebra, x: usize, n: u32) -> BTreeMap<u32, Vec<i64>> {
    (1..=n).map(|l| (l, alg.basis_vec(x))).collect()
}

/// Evaluates t_g on x and μ_g on x⊗…⊗x for g = 1..=g_max and classifies
/// the outputs in the reduced Hochschild complex over Z and over Q.
pub fn homology_action_report(alg: &FrobeniusAlgebra, g_max: usize) -> Result<ActionReport, TqftError> {
    let x = top_class(alg)?;
    let u = alg.unit_index.ok_or(HochschildError::NoUnitElement)?;
    let cx = build_hochschild(&HochschildSpec::new(alg.clone(), 2 * g_max + 3, true))?;
    let mut entries = Vec::new();
    for g in 1..=g_max {
        for family in ["t", "mu"] {
            let (diagram, inputs) = if family == "t" {
                (sullivan::t_g(g)?, constant_inputs(alg, x, 1))
            } else {
                (sullivan::mu_g(g)?, constant_inputs(alg, x, g as u32 + 1))
            };
            let out = reduce(alg, &evaluate(alg, &LabeledDiagram { diagram, inputs })?);
            let mut target = vec![x; 2 * g + 2];
            target[0] = u;
            let coefficient = out.get(&target).copied().unwrap_or(0);
            let expected_shape = out.len() == 1 && coefficient.abs() == 1;
            let degree = cx.degree_of(&target);
            let combo: Vec<(Word, i64)> = out.iter().map(|(w, c)| (w.clone(), *c)).collect();
            let class = match cx.complex.vector(degree, &combo) {
                Ok(v) => cx.complex.class_of(degree, &v),
                Err(_) => ClassReport { is_cycle: false, nonzero_over_z: false, nonzero_over_q: false },
            };
            entries.push(ActionEntry {
                family: family.into(),
                g,
                degree,
                output: out.iter().map(|(w, c)| (word_name(alg, w), *c)).collect(),
                expected_shape,
                coefficient,
                class,
            });
        }
    }
    Ok(ActionReport { algebra: alg.name.clone(), g_max, entries })
}
