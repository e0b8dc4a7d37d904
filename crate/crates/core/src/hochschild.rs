//! Hochschild chains (unreduced and reduced) of a Frobenius algebra, the
//! Hochschild cochain complex, the cap product, and the contracting
//! homotopies for the unit filtration quotients A_r and B^r.

use crate::ainfty::{self, juxtapose, vertex_inputs, vertex_roots, Forest, ForestError, ForestSum};
use crate::algebra::{
    add_to, apply_forest, coapply_forest, sgn, single, tensor_add, AlgebraError, FrobeniusAlgebra, Tensor, Word,
};
use crate::chain_complex::{ChainError, FreeChainComplex, HomologyGroup};
use crate::graph_core::Leaf;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HochschildError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("n_max must be at least 1")]
    NMax,
    #[error("the algebra has no unit basis element")]
    NoUnitElement,
    #[error("the counit is not a signed coordinate, so its kernel has no basis of words")]
    CounitNotCoordinate,
    #[error("r must satisfy 2 <= r <= n_max, got r={0}, n_max={1}")]
    FiltrationIndex(usize, usize),
}

/// The forests f_(n,k) for n up to a bound, juxtaposed with m identity
/// strands, and their splitting into the terms m^i_(n,k).
#[derive(Clone, Debug)]
pub struct LTable {
    pub extra: usize,
    f: BTreeMap<(usize, usize), ForestSum>,
    terms: BTreeMap<(usize, usize, usize), ForestSum>,
}

/// Position i of the term m^i_(n,k): the first input of its only vertex.
fn term_position(f: &Forest) -> usize {
    let roots = vertex_roots(&f.graph);
    let first = vertex_inputs(&f.graph, 0, roots[0])[0];
    match f.graph.half_edges[first].leaf {
        Some(Leaf::In(i)) => i as usize,
        other => panic!("f_(n,k) vertex input is not an input leaf: {:?}", other),
    }
}

impl LTable {
    pub fn new(n_max: usize, extra: usize) -> Result<Self, ForestError> {
        let mut f = BTreeMap::new();
        let mut terms: BTreeMap<(usize, usize, usize), ForestSum> = BTreeMap::new();
        let id = ainfty::identity(extra as u32);
        for n in 2..=n_max {
            for (k, s) in ainfty::dl_by_valence(n) {
                for (forest, c) in &s {
                    let i = term_position(forest);
                    let piece = forest.clone().sum(*c);
                    let piece = if extra > 0 { juxtapose(&piece, &id) } else { piece };
                    let e = terms.entry((n, k, i)).or_default();
                    *e = ainfty::add_sums(e, &piece);
                }
                f.insert((n, k), if extra > 0 { juxtapose(&s, &id) } else { s });
            }
        }
        Ok(LTable { extra, f, terms })
    }

    /// f_(n,k) + id_m; empty outside the table.
    pub fn f(&self, n: usize, k: usize) -> ForestSum {
        self.f.get(&(n, k)).cloned().unwrap_or_default()
    }

    /// m^i_(n,k) + id_m with its sign from d(l_n).
    pub fn term(&self, n: usize, k: usize, i: usize) -> ForestSum {
        self.terms.get(&(n, k, i)).cloned().unwrap_or_default()
    }
}

/// All words of a given length over `dim` letters, in lexicographic order.
pub fn words(dim: usize, len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * dim);
        for w in &out {
            for a in 0..dim {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The forest inserting a unit at position `pos` (1-based) among `len`
/// outputs: id_(pos-1) + u + id_(len-pos).
pub fn unit_insertion(pos: usize, len: usize) -> ForestSum {
    assert!(pos >= 1 && pos <= len);
    let left = ainfty::identity(pos as u32 - 1);
    let right = ainfty::identity((len - pos) as u32);
    juxtapose(&juxtapose(&left, &ainfty::unit()), &right)
}

#[derive(Clone, Debug)]
pub struct HochschildSpec {
    pub algebra: FrobeniusAlgebra,
    pub n_max: usize,
    pub reduced: bool,
    pub extra_tensor_factors: usize,
}

impl HochschildSpec {
    pub fn new(algebra: FrobeniusAlgebra, n_max: usize, reduced: bool) -> Self {
        HochschildSpec { algebra, n_max, reduced, extra_tensor_factors: 0 }
    }
}

/// A truncated Hochschild complex. A basis key is a word x in A^(n+m); it
/// stands for x⊗l_n and sits in degree |x| + n - 1.
#[derive(Clone, Debug)]
pub struct HochschildComplex {
    pub spec: HochschildSpec,
    pub table: LTable,
    pub complex: FreeChainComplex<Word>,
}

impl HochschildComplex {
    pub fn homology(&self, d: i64) -> HomologyGroup {
        self.complex.homology(d)
    }

    pub fn degree_of(&self, w: &Word) -> i64 {
        chain_degree(&self.spec.algebra, w, self.spec.extra_tensor_factors)
    }

    pub fn differential(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t {
            let d = if self.spec.reduced {
                reduced_differential(&self.spec.algebra, &self.table, w)
            } else {
                hochschild_differential(&self.spec.algebra, &self.table, w)
            };
            out = tensor_add(&out, &d, *c);
        }
        out
    }
}

pub fn chain_degree(alg: &FrobeniusAlgebra, w: &[usize], extra: usize) -> i64 {
    alg.word_degree(w) + w.len() as i64 - extra as i64 - 1
}

/// d(x⊗l_n) = d_A x⊗l_n + (-1)^|x| Σ_k (f_(n,k) + id_m)(x)⊗l_k.
pub fn hochschild_differential(alg: &FrobeniusAlgebra, table: &LTable, w: &Word) -> Tensor {
    let n = w.len() - table.extra;
    let x = single(w.clone());
    let mut out = alg.tensor_differential(&x);
    let s = sgn(alg.word_degree(w));
    for k in 1..n {
        let y = apply_forest(alg, &table.f(n, k), &x).expect("forest arity matches word length");
        out = tensor_add(&out, &y, s);
    }
    out
}

/// True when the word has the unit basis element somewhere in positions
/// `from..=to` (1-based).
fn has_unit_in(alg: &FrobeniusAlgebra, w: &[usize], from: usize, to: usize) -> bool {
    match alg.unit_index {
        Some(u) => (from..=to.min(w.len())).any(|p| p >= 1 && w[p - 1] == u),
        None => false,
    }
}

/// Differential of the quotient by words with a unit in positions 2..n.
pub fn reduced_differential(alg: &FrobeniusAlgebra, table: &LTable, w: &Word) -> Tensor {
    let mut d = hochschild_differential(alg, table, w);
    d.retain(|v, _| !has_unit_in(alg, v, 2, v.len() - table.extra));
    d
}

pub fn build_hochschild(spec: &HochschildSpec) -> Result<HochschildComplex, HochschildError> {
    if spec.n_max < 1 {
        return Err(HochschildError::NMax);
    }
    spec.algebra.verify()?;
    if spec.reduced && spec.algebra.unit_index.is_none() {
        return Err(HochschildError::NoUnitElement);
    }
    let alg = &spec.algebra;
    let m = spec.extra_tensor_factors;
    let table = LTable::new(spec.n_max, m)?;
    let mut basis = Vec::new();
    for n in 1..=spec.n_max {
        for w in words(alg.dim(), n + m) {
            if spec.reduced && has_unit_in(alg, &w, 2, n) {
                continue;
            }
            let d = chain_degree(alg, &w, m);
            basis.push((w, d));
        }
    }
    let complex = FreeChainComplex::assemble(basis, |w| {
        let d = if spec.reduced { reduced_differential(alg, &table, w) } else { hochschild_differential(alg, &table, w) };
        d.into_iter().collect()
    })?;
    Ok(HochschildComplex { spec: spec.clone(), table, complex })
}

/// A Hochschild cochain basis element: the map sending the input word to
/// the output basis element and every other word to zero.
pub type CochainKey = (Word, usize);
pub type Cochain = BTreeMap<CochainKey, i64>;

#[derive(Clone, Debug)]
pub struct CochainSpec {
    pub algebra: FrobeniusAlgebra,
    pub q_max: usize,
}

/// Total degree of a cochain basis element in homological grading: the
/// internal degree of the map minus the arity.
pub fn cochain_degree(alg: &FrobeniusAlgebra, key: &CochainKey) -> i64 {
    alg.degree[key.1] - alg.word_degree(&key.0) - key.0.len() as i64
}

/// Internal degree of the map underlying a cochain basis element.
fn map_degree(alg: &FrobeniusAlgebra, key: &CochainKey) -> i64 {
    alg.degree[key.1] - alg.word_degree(&key.0)
}

fn basis_of(v: &[i64]) -> impl Iterator<Item = (usize, i64)> + '_ {
    v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(b, c)| (b, *c))
}

/// Evaluates a cochain basis element on a word.
fn eval_cochain(key: &CochainKey, w: &[usize]) -> Option<usize> {
    (key.0.as_slice() == w).then_some(key.1)
}

/// Hochschild coboundary of a basis cochain D in C^q:
/// (δD)(a_1,…,a_(q+1)) = (-1)^(|a_1||D|+1) a_1 D(a_2,…)
///   + Σ_i (-1)^(i+1) D(…,a_i a_(i+1),…) + (-1)^q D(a_1,…,a_q) a_(q+1),
/// the classical coboundary up to an overall sign, with |D| the internal
/// degree of the map.
pub fn coboundary(alg: &FrobeniusAlgebra, key: &CochainKey) -> Cochain {
    let q = key.0.len();
    let dd = map_degree(alg, key);
    let mut out = Cochain::new();
    let mut put = |w: &Word, v: &[i64], c: i64| {
        for (b, x) in basis_of(v) {
            let e = out.entry((w.clone(), b)).or_insert(0);
            *e += c * x;
        }
    };
    for w in words(alg.dim(), q + 1) {
        // a_1 D(a_2, …)
        if let Some(o) = eval_cochain(key, &w[1..]) {
            let v = alg.mul_vec(&alg.basis_vec(w[0]), &alg.basis_vec(o));
            put(&w, &v, sgn(alg.degree[w[0]] * dd + 1));
        }
        // D(…, a_i a_(i+1), …)
        for i in 0..q {
            let prod = alg.mul_vec(&alg.basis_vec(w[i]), &alg.basis_vec(w[i + 1]));
            for (b, x) in basis_of(&prod) {
                let mut inner = w[..i].to_vec();
                inner.push(b);
                inner.extend_from_slice(&w[i + 2..]);
                if let Some(o) = eval_cochain(key, &inner) {
                    put(&w, &alg.basis_vec(o), x * sgn(i as i64));
                }
            }
        }
        // D(a_1, …, a_q) a_(q+1)
        if let Some(o) = eval_cochain(key, &w[..q]) {
            let v = alg.mul_vec(&alg.basis_vec(o), &alg.basis_vec(w[q]));
            put(&w, &v, sgn(q as i64));
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn coboundary_of(alg: &FrobeniusAlgebra, d: &Cochain) -> Cochain {
    let mut out = Cochain::new();
    for (k, c) in d {
        for (t, x) in coboundary(alg, k) {
            *out.entry(t).or_insert(0) += c * x;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// The cochain complex C^q(A,A), q ≤ q_max, graded homologically by
/// `cochain_degree` so that δ lowers degree by one. Coboundaries leaving
/// the window are dropped, which makes this the quotient by C^(>q_max).
pub fn build_cochain(spec: &CochainSpec) -> Result<FreeChainComplex<CochainKey>, HochschildError> {
    let alg = &spec.algebra;
    alg.verify()?;
    let mut basis = Vec::new();
    for q in 0..=spec.q_max {
        for w in words(alg.dim(), q) {
            for o in 0..alg.dim() {
                let key = (w.clone(), o);
                let d = cochain_degree(alg, &key);
                basis.push((key, d));
            }
        }
    }
    Ok(FreeChainComplex::assemble(basis, |k| {
        if k.0.len() >= spec.q_max {
            return vec![];
        }
        coboundary(alg, k).into_iter().collect()
    })?)
}

/// a ∩ D = (-1)^((|a|-|a_0|)|D|_int + pq) a_0 D(a_1,…,a_q)⊗a_(q+1)⊗…⊗a_p,
/// zero when p < q. Here |a| is the total chain degree and |D|_int the
/// internal degree of the map D. When A sits in even degrees the exponent
/// equals (|a|-|a_0|)|D| with |D| = |D|_int - q the cochain degree.
pub fn cap(alg: &FrobeniusAlgebra, a: &Tensor, d: &Cochain) -> Tensor {
    let mut out = Tensor::new();
    for (w, ca) in a {
        let p = w.len() - 1;
        let abar = chain_degree(alg, w, 0) - alg.degree[w[0]];
        for (key, cd) in d {
            let q = key.0.len();
            if p < q || w[1..=q] != key.0[..] {
                continue;
            }
            let s = sgn(abar * map_degree(alg, key) + (p * q) as i64);
            let v = alg.mul_vec(&alg.basis_vec(w[0]), &alg.basis_vec(key.1));
            for (b, x) in basis_of(&v) {
                let mut nw = vec![b];
                nw.extend_from_slice(&w[q + 1..]);
                add_to(&mut out, nw, ca * cd * s * x);
            }
        }
    }
    out
}

/// Outcome of the cap product chain-map identity check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CapReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub first_failure: Option<String>,
}

/// Checks (δD)∩a = d(a∩D) - (da)∩D on all basis chains of length up to
/// p_max + 1 and basis cochains of arity up to q_max, where `sign(p, q)`
/// multiplies the left-hand side.
pub fn verify_cap_identity_with(
    alg: &FrobeniusAlgebra,
    p_max: usize,
    q_max: usize,
    sign: impl Fn(&Word, &CochainKey) -> i64,
) -> Result<CapReport, HochschildError> {
    let table = LTable::new(p_max + 1, 0)?;
    let dchain = |t: &Tensor| {
        let mut out = Tensor::new();
        for (w, c) in t {
            out = tensor_add(&out, &hochschild_differential(alg, &table, w), *c);
        }
        out
    };
    let mut pairs = 0;
    for p in 0..=p_max {
        for w in words(alg.dim(), p + 1) {
            let a = single(w.clone());
            let da = dchain(&a);
            for q in 0..=q_max {
                for iw in words(alg.dim(), q) {
                    for o in 0..alg.dim() {
                        let key = (iw.clone(), o);
                        let d = Cochain::from([(key.clone(), 1)]);
                        let lhs = cap(alg, &a, &coboundary_of(alg, &d));
                        let lhs: Tensor = lhs.into_iter().map(|(k, c)| (k, c * sign(&w, &key))).collect();
                        let rhs = tensor_add(&dchain(&cap(alg, &a, &d)), &cap(alg, &da, &d), -1);
                        pairs += 1;
                        if lhs != rhs {
                            return Ok(CapReport {
                                passed: false,
                                pairs_checked: pairs,
                                first_failure: Some(format!(
                                    "a={:?}, D={:?}: lhs {:?}, rhs {:?}",
                                    w, key, lhs, rhs
                                )),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(CapReport { passed: true, pairs_checked: pairs, first_failure: None })
}

/// The cap identity with the sign (-1)^(|a|+|D|) on (δD)∩a, for a basis
/// chain a of degree |a| and a basis cochain D of cochain degree |D|; for A
/// in even degrees this is (-1)^(p+q). Our chain differential differs from
/// the classical one by a sign depending on the chain length, so no
/// coboundary independent of p satisfies the unsigned form; this is the
/// form that holds, and it pins down the overall sign of `coboundary`.
pub fn verify_cap_identity(alg: &FrobeniusAlgebra, p_max: usize, q_max: usize) -> Result<CapReport, HochschildError> {
    verify_cap_identity_with(alg, p_max, q_max, |w, key| sgn(chain_degree(alg, w, 0) + cochain_degree(alg, key)))
}

/// The unsigned form (δD)∩a = d(a∩D) - (da)∩D, kept for reporting.
pub fn verify_cap_identity_unsigned(
    alg: &FrobeniusAlgebra,
    p_max: usize,
    q_max: usize,
) -> Result<CapReport, HochschildError> {
    verify_cap_identity_with(alg, p_max, q_max, |_, _| 1)
}

/// Result of checking sd + ds = id on one filtration quotient.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HomotopyCheck {
    pub passed: bool,
    /// Basis elements on which the identity was compared.
    pub checked: usize,
    /// Whether the quotient differential squares to zero.
    pub square_zero: bool,
    /// Whether sd + ds = -id on every compared element, which still makes
    /// the quotient acyclic.
    pub negated_identity: bool,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct UnitHomotopyReport {
    pub r: usize,
    pub n_max: usize,
    pub a_r: HomotopyCheck,
    pub b_r: HomotopyCheck,
}

impl UnitHomotopyReport {
    pub fn passed(&self) -> bool {
        self.a_r.passed && self.b_r.passed
    }
}

/// Which basis letters may stand in positions 2..r-1 of the two quotients.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Window {
    /// A_r: anything but the unit.
    NoUnit,
    /// B^r: letters killed by the counit.
    CounitKernel,
}

struct Filtration<'a> {
    alg: &'a FrobeniusAlgebra,
    table: LTable,
    r: usize,
    n_max: usize,
    extra: usize,
    flip: Option<usize>,
    window: Window,
}

impl Filtration<'_> {
    /// Component n of a word: A_r and B^r both store Φ(n-1+m) in slot n.
    fn component(&self, w: &[usize]) -> usize {
        w.len() + 1 - self.extra
    }

    fn admissible(&self, w: &[usize]) -> bool {
        let hi = (self.r - 1).min(w.len());
        (2..=hi).all(|p| match self.window {
            Window::NoUnit => Some(w[p - 1]) != self.alg.unit_index,
            Window::CounitKernel => self.alg.counit[w[p - 1]] == 0,
        })
    }

    fn basis(&self) -> Vec<Word> {
        (self.r..=self.n_max)
            .flat_map(|n| words(self.alg.dim(), n - 1 + self.extra))
            .filter(|w| self.admissible(w))
            .collect()
    }

    fn flip_sign(&self, n: usize) -> i64 {
        if self.flip == Some(n) {
            -1
        } else {
            1
        }
    }

    /// A_r: dx = d_A x + (-1)^|x| Σ_(k=r)^(n-1) Σ_(i=r)^k (-1)^(n-k) m^i_(n-1,k-1)(x).
    fn d_a(&self, w: &Word) -> Tensor {
        let n = self.component(w);
        let x = single(w.clone());
        let mut out = self.alg.tensor_differential(&x);
        let s = sgn(self.alg.word_degree(w));
        for k in self.r..n {
            for i in self.r..=k {
                let y = apply_forest(self.alg, &self.table.term(n - 1, k - 1, i), &x).expect("arity");
                out = tensor_add(&out, &y, s * sgn((n - k) as i64));
            }
        }
        out.retain(|v, _| self.admissible(v));
        out
    }

    /// A_r: s(x) = (-1)^|x| u_r(x).
    fn s_a(&self, w: &Word) -> Tensor {
        let n = self.component(w);
        let u = unit_insertion(self.r, w.len() + 1);
        let y = apply_forest(self.alg, &u, &single(w.clone())).expect("arity");
        tensor_scale_i(&y, sgn(self.alg.word_degree(w)) * self.flip_sign(n))
    }

    /// B^r, contribution of y in slot k:
    /// (dy)_n = (-1)^(n-1) (d_Ψ y_n + Σ_(k=r)^(n-1) Σ_(i=r)^k (-1)^(n-k) (m^i_(n-1,k-1))^op y_k),
    /// truncated to slots n ≤ n_max.
    fn d_b(&self, w: &Word) -> Result<Tensor, AlgebraError> {
        let k = self.component(w);
        let y = single(w.clone());
        let mut out = tensor_scale_i(&self.alg.tensor_differential(&y), sgn(k as i64 - 1));
        for n in k + 1..=self.n_max {
            for i in self.r..=k {
                let z = coapply_forest(self.alg, &self.table.term(n - 1, k - 1, i), &y)?;
                out = tensor_add(&out, &z, sgn(n as i64 - 1) * sgn((n - k) as i64));
            }
        }
        Ok(out)
    }

    /// B^r: s(y)_n = (-1)^(n+r) u_r^op(y_(n+1)); zero on slot r.
    fn s_b(&self, w: &Word) -> Result<Tensor, AlgebraError> {
        let k = self.component(w);
        if k <= self.r {
            return Ok(Tensor::new());
        }
        let n = k - 1;
        let u = unit_insertion(self.r, w.len());
        let z = coapply_forest(self.alg, &u, &single(w.clone()))?;
        Ok(tensor_scale_i(&z, sgn((n + self.r) as i64) * self.flip_sign(n)))
    }
}

fn tensor_scale_i(t: &Tensor, c: i64) -> Tensor {
    t.iter().map(|(w, x)| (w.clone(), x * c)).filter(|(_, x)| *x != 0).collect()
}

fn apply_linear<F>(t: &Tensor, mut f: F) -> Result<Tensor, AlgebraError>
where
    F: FnMut(&Word) -> Result<Tensor, AlgebraError>,
{
    let mut out = Tensor::new();
    for (w, c) in t {
        out = tensor_add(&out, &f(w)?, *c);
    }
    Ok(out)
}

/// Compares (sd + ds)(x) with x on every basis element whose identity only
/// involves slots inside the truncation. `lowers` says whether d lowers
/// the slot (A_r) or raises it (B^r).
fn check_homotopy<D, S>(fl: &Filtration, d: D, s: S, lowers: bool) -> Result<HomotopyCheck, AlgebraError>
where
    D: Fn(&Word) -> Result<Tensor, AlgebraError>,
    S: Fn(&Word) -> Result<Tensor, AlgebraError>,
{
    let basis = fl.basis();
    let mut square_zero = true;
    let mut first_failure = None;
    let mut checked = 0;
    let mut negated = true;
    for w in &basis {
        let dw = d(w)?;
        if let Some(bad) = dw.keys().find(|v| !fl.admissible(v)) {
            first_failure.get_or_insert(format!("differential of {:?} leaves the subcomplex at {:?}", w, bad));
        }
        if !apply_linear(&dw, &d)?.is_empty() {
            square_zero = false;
            first_failure.get_or_insert(format!("d^2 of {:?} is nonzero", w));
        }
        let n = fl.component(w);
        let mut total = apply_linear(&dw, &s)?;
        total = tensor_add(&total, &apply_linear(&s(w)?, &d)?, 1);
        if lowers {
            if n + 1 > fl.n_max {
                continue;
            }
        } else {
            total.retain(|v, _| fl.component(v) < fl.n_max);
            if n >= fl.n_max {
                if !total.is_empty() {
                    first_failure.get_or_insert(format!("(sd+ds)({:?}) = {:?}, expected 0 below slot n_max", w, total));
                }
                continue;
            }
        }
        checked += 1;
        let expected = single(w.clone());
        negated &= total == tensor_scale_i(&expected, -1);
        if total != expected {
            first_failure.get_or_insert(format!("(sd+ds)({:?}) = {:?}", w, total));
        }
    }
    Ok(HomotopyCheck {
        passed: first_failure.is_none(),
        checked,
        square_zero,
        negated_identity: negated && checked > 0,
        first_failure,
    })
}

/// Builds A_r and the truncation of B^r for 2 ≤ r ≤ n_max and checks that
/// the explicit homotopies contract them. `flip` negates s on one slot, for
/// sensitivity checks.
pub fn verify_unit_homotopies_with(
    alg: &FrobeniusAlgebra,
    r: usize,
    n_max: usize,
    extra: usize,
    flip: Option<usize>,
) -> Result<UnitHomotopyReport, HochschildError> {
    if r < 2 || r > n_max {
        return Err(HochschildError::FiltrationIndex(r, n_max));
    }
    alg.verify()?;
    if alg.unit_index.is_none() {
        return Err(HochschildError::NoUnitElement);
    }
    let nonzero: Vec<i64> = alg.counit.iter().copied().filter(|c| *c != 0).collect();
    if nonzero.len() != 1 || nonzero[0].abs() != 1 {
        return Err(HochschildError::CounitNotCoordinate);
    }
    let table = LTable::new(n_max, extra)?;
    let mut fl = Filtration { alg, table, r, n_max, extra, flip, window: Window::NoUnit };
    let a_r = check_homotopy(&fl, |w| Ok(fl.d_a(w)), |w| Ok(fl.s_a(w)), true)?;
    fl.window = Window::CounitKernel;
    let b_r = check_homotopy(&fl, |w| fl.d_b(w), |w| fl.s_b(w), false)?;
    Ok(UnitHomotopyReport { r, n_max, a_r, b_r })
}

pub fn verify_unit_homotopies(alg: &FrobeniusAlgebra, r: usize, n_max: usize) -> Result<UnitHomotopyReport, HochschildError> {
    verify_unit_homotopies_with(alg, r, n_max, 0, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin_dual_numbers, builtin_sphere_cohomology};
    use crate::chain_complex::{verify_chain_map, SparseIntMatrix};
    use num_bigint::BigInt;

    const ONE: usize = 0;
    const X: usize = 1;

    fn dual_reduced(n_max: usize) -> HochschildComplex {
        build_hochschild(&HochschildSpec::new(builtin_dual_numbers(), n_max, true)).unwrap()
    }

    #[test]
    fn reduced_dual_numbers_basis() {
        let h = dual_reduced(6);
        for d in 0..=5i64 {
            let mut expected = vec![vec![X; d as usize + 1]];
            let mut w = vec![ONE];
            w.extend(vec![X; d as usize]);
            expected.push(w);
            expected.sort();
            let mut got = h.complex.basis(d).to_vec();
            got.sort();
            assert_eq!(got, expected, "degree {}", d);
        }
    }

    #[test]
    fn reduced_dual_numbers_differential_is_two_in_even_degrees() {
        let h = dual_reduced(8);
        for i in 1..=3usize {
            let mut w = vec![ONE];
            w.extend(vec![X; 2 * i]);
            let d = h.differential(&single(w));
            assert_eq!(d, Tensor::from([(vec![X; 2 * i], 2)]), "i = {}", i);
        }
        for i in 0..=3usize {
            let mut w = vec![ONE];
            w.extend(vec![X; 2 * i + 1]);
            assert!(h.differential(&single(w)).is_empty());
            assert!(h.differential(&single(vec![X; 2 * i + 1])).is_empty());
        }
    }

    #[test]
    fn reduced_dual_numbers_homology() {
        let h = dual_reduced(8);
        let z2 = HomologyGroup { betti: 1, torsion: vec![BigInt::from(2)] };
        assert_eq!(h.homology(0), HomologyGroup { betti: 2, torsion: vec![] });
        for d in 1..=6i64 {
            let expected = if d % 2 == 1 { z2.clone() } else { HomologyGroup { betti: 1, torsion: vec![] } };
            assert_eq!(h.homology(d), expected, "H_{}", d);
        }
    }

    #[test]
    fn truncation_bump_keeps_low_homology() {
        for alg in [builtin_dual_numbers(), builtin_sphere_cohomology(2).unwrap()] {
            for reduced in [false, true] {
                let a = build_hochschild(&HochschildSpec::new(alg.clone(), 6, reduced)).unwrap();
                let b = build_hochschild(&HochschildSpec::new(alg.clone(), 7, reduced)).unwrap();
                // a class of degree d involves words of length at most d + 1
                // in the ungraded case; for graded algebras we compare the
                // degrees whose words all have length at most n_max - 1
                for d in a.complex.degrees() {
                    let longest = a.complex.basis(d).iter().chain(a.complex.basis(d + 1)).map(|w| w.len()).max();
                    if longest.map_or(true, |l| l <= 5) {
                        assert_eq!(a.homology(d), b.homology(d), "{} reduced={} degree {}", alg.name, reduced, d);
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_to_reduced_is_a_chain_map() {
        for alg in [builtin_dual_numbers(), builtin_sphere_cohomology(2).unwrap(), builtin_sphere_cohomology(3).unwrap()] {
            let full = build_hochschild(&HochschildSpec::new(alg.clone(), 6, false)).unwrap();
            let red = build_hochschild(&HochschildSpec::new(alg.clone(), 6, true)).unwrap();
            let mut maps = BTreeMap::new();
            for d in full.complex.degrees() {
                let mut m = SparseIntMatrix::zeros(red.complex.rank(d), full.complex.rank(d));
                for (c, w) in full.complex.basis(d).iter().enumerate() {
                    if let Some((_, r)) = red.complex.index_of(w) {
                        m.set(r, c, BigInt::from(1));
                    }
                }
                maps.insert(d, m);
            }
            let rep = verify_chain_map(&maps, &full.complex, &red.complex, 0).unwrap();
            assert!(rep.passed, "{}: {:?}", alg.name, rep.failure);
        }
    }

    #[test]
    fn sphere_reduced_differential_pattern() {
        for n in 2..=5i64 {
            let alg = builtin_sphere_cohomology(n).unwrap();
            let h = build_hochschild(&HochschildSpec::new(alg, 7, true)).unwrap();
            for d in h.complex.degrees() {
                let nonzero = !h.complex.boundary(d).is_zero();
                // sources of a nonzero differential: 1⊗x^(2i) in degree 2i(1-n)
                let expected = n % 2 == 0 && (1..=3).any(|i| d == 2 * i * (1 - n));
                assert_eq!(nonzero, expected, "S^{} degree {}", n, d);
            }
        }
    }

    #[test]
    fn build_rejects_bad_input() {
        let spec = HochschildSpec::new(builtin_dual_numbers(), 0, false);
        assert!(matches!(build_hochschild(&spec), Err(HochschildError::NMax)));
        let mut alg = builtin_dual_numbers();
        alg.unit_index = None;
        assert!(matches!(build_hochschild(&HochschildSpec::new(alg, 3, true)), Err(HochschildError::NoUnitElement)));
    }

    #[test]
    fn extra_tensor_factors_give_a_complex() {
        let mut spec = HochschildSpec::new(builtin_dual_numbers(), 5, true);
        spec.extra_tensor_factors = 1;
        let h = build_hochschild(&spec).unwrap();
        assert!(h.complex.basis(0).iter().all(|w| w.len() == 2));
    }

    #[test]
    fn cochain_dimensions_and_identity_cocycle() {
        let alg = builtin_dual_numbers();
        let c = build_cochain(&CochainSpec { algebra: alg.clone(), q_max: 4 }).unwrap();
        let total: usize = c.degrees().iter().map(|d| c.rank(*d)).sum();
        assert_eq!(total, (0..=4u32).map(|q| 2usize.pow(q + 1)).sum::<usize>());
        // δ of the identity 1-cochain is ± the product; a derivation such
        // as x ↦ x, 1 ↦ 0 is a cocycle
        let id: Cochain = (0..alg.dim()).map(|a| ((vec![a], a), 1)).collect();
        let product: Cochain = [((vec![ONE, ONE], ONE), 1), ((vec![ONE, X], X), 1), ((vec![X, ONE], X), 1)].into();
        let did = coboundary_of(&alg, &id);
        assert!(did == product || did == product.iter().map(|(k, c)| (k.clone(), -c)).collect::<Cochain>());
        assert!(coboundary_of(&alg, &Cochain::from([((vec![X], X), 1)])).is_empty());
        // δz for a 0-cochain is a commutator, zero for commutative algebras
        assert!(coboundary_of(&alg, &Cochain::from([((vec![], X), 1)])).is_empty());
    }

    #[test]
    fn cap_examples() {
        let alg = builtin_dual_numbers();
        let a = single(vec![ONE, X, X]);
        let d = Cochain::from([((vec![X], ONE), 1)]);
        assert_eq!(cap(&alg, &a, &d), Tensor::from([(vec![ONE, X], 1)]));
        // q = 0: a_0 z ⊗ a_1 ⊗ … ⊗ a_p
        let z = Cochain::from([((vec![], X), 1)]);
        assert_eq!(cap(&alg, &single(vec![ONE, X, ONE]), &z), Tensor::from([(vec![X, X, ONE], 1)]));
        // p < q gives zero
        assert!(cap(&alg, &single(vec![ONE]), &d).is_empty());
    }

    #[test]
    fn cap_is_a_chain_map_up_to_length_sign() {
        for alg in [
            builtin_dual_numbers(),
            builtin_sphere_cohomology(2).unwrap(),
            builtin_sphere_cohomology(3).unwrap(),
            builtin_sphere_cohomology(5).unwrap(),
        ] {
            let rep = verify_cap_identity(&alg, 4, 3).unwrap();
            assert!(rep.passed, "{}: {:?}", alg.name, rep.first_failure);
            assert!(!verify_cap_identity_unsigned(&alg, 4, 3).unwrap().passed);
        }
    }

    #[test]
    fn unit_homotopies_dual_numbers() {
        let alg = builtin_dual_numbers();
        for r in 2..=5 {
            let rep = verify_unit_homotopies(&alg, r, 6).unwrap();
            assert!(rep.b_r.passed && rep.b_r.square_zero, "B^{}: {:?}", r, rep.b_r);
            assert!(rep.a_r.square_zero);
            // the printed homotopy on A_r contracts up to the sign (-1)^r
            if r % 2 == 0 {
                assert!(rep.a_r.passed, "A_{}: {:?}", r, rep.a_r);
            } else {
                assert!(!rep.a_r.passed && rep.a_r.negated_identity, "A_{}: {:?}", r, rep.a_r);
            }
        }
        let top = verify_unit_homotopies(&alg, 6, 6).unwrap();
        assert!(top.passed() && top.a_r.checked == 0);
        let m1 = verify_unit_homotopies_with(&alg, 2, 5, 1, None).unwrap();
        assert!(m1.passed(), "{:?}", m1);
    }

    #[test]
    fn perturbed_homotopy_fails() {
        let alg = builtin_dual_numbers();
        let rep = verify_unit_homotopies_with(&alg, 2, 6, 0, Some(3)).unwrap();
        assert!(!rep.a_r.passed && !rep.b_r.passed);
        assert!(matches!(verify_unit_homotopies(&alg, 1, 6), Err(HochschildError::FiltrationIndex(1, 6))));
    }
}
