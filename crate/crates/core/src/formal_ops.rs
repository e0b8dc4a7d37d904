//! The truncated complex of formal operations Nat_End(A)(0/1 → 0/1) and
//! the embedding of Hochschild cochains by the cap product.
//!
//! An element is a family g = {g_j}, 1 ≤ j ≤ J, with g_j a linear map from
//! A^⊗j to the sum of A^⊗k, 1 ≤ k ≤ K. A basis map w ↦ u has internal
//! degree |u| − |w| and total degree |u| − |w| + len(u) − len(w). The
//! differential is
//!
//! d(g)_j = (−1)^(j−1) ( d_E(g_j) + Σ (−1)^|g_(j,k')| f_(k',k)∘g_(j,k')
//!                        − Σ_(j'<j) g_j'∘f_(j,j') ),
//!
//! with |g_(j,k')| the internal degree and the f's from the A∞ table
//! applied through the algebra. Components
//! with j > J are dropped (quotient) and k never increases (subcomplex).

use crate::algebra::{add_to, apply_forest, sgn, tensor_add, FrobeniusAlgebra, Tensor, Word};
use crate::hochschild::{
    chain_degree, coboundary_of, cochain_degree, verify_cap_identity, words, CapReport, Cochain, HochschildError, LTable,
};
use serde::Serialize;
use std::collections::BTreeMap;

/// A linear map given on basis words; words absent from the map go to 0.
pub type LinMap = BTreeMap<Word, Tensor>;

/// An element of the truncated complex: j ↦ g_j.
pub type NatElement = BTreeMap<usize, LinMap>;

#[derive(Clone, Debug)]
pub struct NatTruncation {
    pub algebra: FrobeniusAlgebra,
    pub j_max: usize,
    pub k_max: usize,
    table: LTable,
}

/// Sign applied to the j-th component of the differential.
pub type GlobalSign = fn(usize) -> i64;

fn standard_sign(j: usize) -> i64 {
    sgn(j as i64 - 1)
}

impl NatTruncation {
    pub fn new(algebra: FrobeniusAlgebra, j_max: usize, k_max: usize) -> Result<Self, HochschildError> {
        if j_max < 1 || k_max < 1 {
            return Err(HochschildError::NMax);
        }
        algebra.verify()?;
        let table = LTable::new(j_max.max(k_max).max(2), 0)?;
        Ok(NatTruncation { algebra, j_max, k_max, table })
    }

    /// Degree of the basis map w ↦ u in Hom(A^⊗j, A^⊗k), before the shift
    /// by k − j.
    pub fn internal_degree(&self, w: &[usize], u: &[usize]) -> i64 {
        let a = &self.algebra;
        a.word_degree(u) - a.word_degree(w)
    }

    /// Degree of the basis map w ↦ u in the shifted complex.
    pub fn total_degree(&self, w: &[usize], u: &[usize]) -> i64 {
        self.internal_degree(w, u) + u.len() as i64 - w.len() as i64
    }

    /// True when every component lies inside the truncation.
    pub fn contains(&self, g: &NatElement) -> bool {
        g.iter().all(|(j, m)| {
            *j >= 1 && *j <= self.j_max && m.iter().all(|(w, t)| w.len() == *j && t.keys().all(|u| !u.is_empty() && u.len() <= self.k_max))
        })
    }

    fn apply_f(&self, n: usize, k: usize, t: &Tensor) -> Tensor {
        apply_forest(&self.algebra, &self.table.f(n, k), t).expect("forest arity matches word length")
    }

    /// Applies a component to a tensor of words of one length.
    fn apply_map(m: &LinMap, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t {
            if let Some(v) = m.get(w) {
                out = tensor_add(&out, v, *c);
            }
        }
        out
    }

    /// d_E(g_j)(v) = (−1)^|v| (d(g(v)) − g(dv)) on basis words v.
    fn d_hom(&self, j: usize, m: &LinMap) -> LinMap {
        let a = &self.algebra;
        let mut out = LinMap::new();
        if a.has_zero_differential() {
            return out;
        }
        for v in words(a.dim(), j) {
            let gv = Self::apply_map(m, &Tensor::from([(v.clone(), 1)]));
            let dv = a.tensor_differential(&Tensor::from([(v.clone(), 1)]));
            let t = tensor_add(&a.tensor_differential(&gv), &Self::apply_map(m, &dv), -1);
            let t: Tensor = t.into_iter().map(|(u, c)| (u, c * sgn(a.word_degree(&v)))).collect();
            if !t.is_empty() {
                out.insert(v, t);
            }
        }
        out
    }

    pub fn differential(&self, g: &NatElement) -> NatElement {
        self.differential_with(g, standard_sign)
    }

    /// The differential with the global sign of the j-th component replaced.
    pub fn differential_with(&self, g: &NatElement, global: GlobalSign) -> NatElement {
        let mut out = NatElement::new();
        for j in 1..=self.j_max {
            let mut comp = LinMap::new();
            let mut put = |w: &Word, t: &Tensor, c: i64| {
                let e = comp.entry(w.clone()).or_default();
                *e = tensor_add(e, t, c);
            };
            if let Some(m) = g.get(&j) {
                for (w, t) in self.d_hom(j, m) {
                    put(&w, &t, 1);
                }
                for (w, t) in m {
                    for (u, c) in t {
                        let s = sgn(self.internal_degree(w, u));
                        for k in 1..u.len() {
                            let y = self.apply_f(u.len(), k, &Tensor::from([(u.clone(), *c)]));
                            put(w, &y, s);
                        }
                    }
                }
            }
            for jp in 1..j {
                let Some(m) = g.get(&jp) else { continue };
                for w in words(self.algebra.dim(), j) {
                    let fw = self.apply_f(j, jp, &Tensor::from([(w.clone(), 1)]));
                    let y = Self::apply_map(m, &fw);
                    put(&w, &y, -1);
                }
            }
            let s = global(j);
            comp.retain(|_, t| {
                t.retain(|_, c| *c != 0);
                !t.is_empty()
            });
            if !comp.is_empty() {
                for t in comp.values_mut() {
                    for c in t.values_mut() {
                        *c *= s;
                    }
                }
                out.insert(j, comp);
            }
        }
        out
    }
}

/// Adds `c·u` to the image of `w` in component j = len(w). Zero entries
/// may remain; `normalize` removes them.
pub fn add_entry(g: &mut NatElement, w: Word, u: Word, c: i64) {
    let t = g.entry(w.len()).or_default().entry(w).or_default();
    add_to(t, u, c);
}

/// Removes zero entries so that equal elements compare equal.
pub fn normalize(g: &NatElement) -> NatElement {
    let mut out = NatElement::new();
    for (j, m) in g {
        let mut mm = LinMap::new();
        for (w, t) in m {
            let t: Tensor = t.iter().filter(|(_, c)| **c != 0).map(|(u, c)| (u.clone(), *c)).collect();
            if !t.is_empty() {
                mm.insert(w.clone(), t);
            }
        }
        if !mm.is_empty() {
            out.insert(*j, mm);
        }
    }
    out
}

/// F(D)_j(a) = a ∩ D for a of length j, in components j = q+1, …, J:
/// a_0⊗…⊗a_p ↦ (−1)^((|a|−|a_0|)|D|_int + pq) a_0 D(a_1,…,a_q)⊗a_(q+1)⊗…⊗a_p
/// with |a| the chain degree, |D|_int the internal degree of D and p = j−1.
/// The output has length j − q.
pub fn embed_cochain(nat: &NatTruncation, d: &Cochain) -> NatElement {
    let alg = &nat.algebra;
    let mut g = NatElement::new();
    for (key, cd) in d {
        let q = key.0.len();
        let dint = alg.degree[key.1] - alg.word_degree(&key.0);
        for j in q + 1..=nat.j_max {
            if j - q > nat.k_max {
                continue;
            }
            // inputs a_0 ⊗ key.0 ⊗ tail
            for a0 in 0..alg.dim() {
                for tail in words(alg.dim(), j - q - 1) {
                    let mut w = vec![a0];
                    w.extend_from_slice(&key.0);
                    w.extend_from_slice(&tail);
                    let abar = chain_degree(alg, &w, 0) - alg.degree[a0];
                    let s = sgn(abar * dint + ((j - 1) * q) as i64);
                    let prod = alg.mul_vec(&alg.basis_vec(a0), &alg.basis_vec(key.1));
                    for (b, x) in prod.iter().enumerate() {
                        if *x != 0 {
                            let mut u = vec![b];
                            u.extend_from_slice(&tail);
                            add_entry(&mut g, w.clone(), u, cd * s * x);
                        }
                    }
                }
            }
        }
    }
    normalize(&g)
}

/// Applies an element to a chain: each word goes through the component of
/// its length.
pub fn apply_element(g: &NatElement, a: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in a {
        if let Some(t) = g.get(&w.len()).and_then(|m| m.get(w)) {
            out = tensor_add(&out, t, *c);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CapEmbeddingReport {
    pub algebra: String,
    pub q_max: usize,
    pub j_max: usize,
    pub k_max: usize,
    pub cochains_checked: usize,
    /// dD∩a = d(a∩D) − D∩da checked directly in the hochschild module
    pub cap_identity: CapReport,
    pub passed: bool,
    /// smallest failing (j, k, D) witness
    pub first_failure: Option<String>,
}

/// Differential of C^*(A,A) inside the formal operations:
/// dD = (−1)^|D| δD with δ the coboundary of the hochschild module and |D|
/// the cochain degree.
pub fn cochain_differential(alg: &FrobeniusAlgebra, d: &Cochain) -> Cochain {
    let mut out = Cochain::new();
    for (key, c) in d {
        let s = sgn(cochain_degree(alg, key));
        for (t, x) in coboundary_of(alg, &Cochain::from([(key.clone(), 1)])) {
            *out.entry(t).or_insert(0) += c * s * x;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Checks F(dD) = d(F(D)) componentwise for every basis cochain of arity at
/// most q_max.
pub fn verify_cap_embedding(alg: &FrobeniusAlgebra, q_max: usize, j_max: usize, k_max: usize) -> Result<CapEmbeddingReport, HochschildError> {
    verify_cap_embedding_with(alg, q_max, j_max, k_max, standard_sign)
}

pub fn verify_cap_embedding_with(
    alg: &FrobeniusAlgebra,
    q_max: usize,
    j_max: usize,
    k_max: usize,
    global: GlobalSign,
) -> Result<CapEmbeddingReport, HochschildError> {
    let nat = NatTruncation::new(alg.clone(), j_max, k_max)?;
    let mut checked = 0;
    let mut first_failure = None;
    'outer: for q in 0..=q_max.min(j_max.saturating_sub(1)) {
        for w in words(alg.dim(), q) {
            for o in 0..alg.dim() {
                let d = Cochain::from([((w.clone(), o), 1)]);
                let lhs = embed_cochain(&nat, &cochain_differential(alg, &d));
                let rhs = nat.differential_with(&embed_cochain(&nat, &d), global);
                checked += 1;
                if lhs != rhs {
                    let j = (1..=j_max).find(|j| lhs.get(j) != rhs.get(j)).unwrap_or(0);
                    first_failure = Some(format!(
                        "j={}, D=({:?} -> {}): F(dD)_j {:?}, d(F(D))_j {:?}",
                        j,
                        w,
                        o,
                        lhs.get(&j),
                        rhs.get(&j)
                    ));
                    break 'outer;
                }
            }
        }
    }
    let cap_identity = verify_cap_identity(alg, j_max - 1, q_max)?;
    Ok(CapEmbeddingReport {
        algebra: alg.name.clone(),
        q_max,
        j_max,
        k_max,
        cochains_checked: checked,
        passed: first_failure.is_none() && cap_identity.passed,
        cap_identity,
        first_failure,
    })
}
