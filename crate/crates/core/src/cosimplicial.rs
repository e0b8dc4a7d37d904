//! Truncated cosimplicial sets, the configuration cosimplicial sets
//! K(•+1, X) of points on an oriented 1-manifold, their alternating coface
//! complexes, the free semi-cosimplicial sets Inj(r), and the
//! classification of simplices as iterated cofaces.

use crate::chain_complex::{verify_homotopy, ChainError, FreeChainComplex, SparseIntMatrix, VerifyReport};
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CosimplicialError {
    #[error("cosimplicial identity {identity} fails at level {level} on {element}")]
    Identity { identity: &'static str, level: usize, element: String },
    #[error("map {map} sends {element} outside level {level}")]
    OutsideLevel { map: String, element: String, level: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("r = {0} exceeds q_max = {1}")]
    Range(usize, usize),
}

/// Levels X^0..X^q_max with coface and codegeneracy tables by index.
#[derive(Clone, Debug)]
pub struct TruncatedCosimplicialSet<T: Ord + Clone + Debug> {
    pub levels: Vec<Vec<T>>,
    /// coface[q][i][x]: index in level q+1 of d^i applied to element x of
    /// level q, for q < q_max and 0 ≤ i ≤ q+1.
    pub coface: Vec<Vec<Vec<usize>>>,
    /// codegeneracy[q][j][x]: index in level q-1 of s^j applied to element
    /// x of level q, for q ≥ 1 and 0 ≤ j ≤ q-1 (empty for q = 0).
    pub codegeneracy: Vec<Vec<Vec<usize>>>,
}

impl<T: Ord + Clone + Debug> TruncatedCosimplicialSet<T> {
    /// Tabulates the maps and checks all five cosimplicial identities on
    /// every level where both sides are defined.
    pub fn assemble<D, S>(levels: Vec<Vec<T>>, coface: D, codegeneracy: S) -> Result<Self, CosimplicialError>
    where
        D: Fn(usize, usize, &T) -> T,
        S: Fn(usize, usize, &T) -> T,
    {
        let q_max = levels.len() - 1;
        let index: Vec<BTreeMap<&T, usize>> =
            levels.iter().map(|l| l.iter().enumerate().map(|(i, x)| (x, i)).collect()).collect();
        let find = |map: String, level: usize, y: T| -> Result<usize, CosimplicialError> {
            index[level].get(&y).copied().ok_or(CosimplicialError::OutsideLevel {
                map,
                element: format!("{:?}", y),
                level,
            })
        };
        let mut cf = Vec::new();
        for q in 0..q_max {
            let mut per_i = Vec::new();
            for i in 0..=q + 1 {
                let row: Result<Vec<usize>, _> =
                    levels[q].iter().map(|x| find(format!("d^{}", i), q + 1, coface(q, i, x))).collect();
                per_i.push(row?);
            }
            cf.push(per_i);
        }
        let mut cd = vec![vec![]];
        for q in 1..=q_max {
            let mut per_j = Vec::new();
            for j in 0..q {
                let row: Result<Vec<usize>, _> =
                    levels[q].iter().map(|x| find(format!("s^{}", j), q - 1, codegeneracy(q, j, x))).collect();
                per_j.push(row?);
            }
            cd.push(per_j);
        }
        let set = TruncatedCosimplicialSet { levels, coface: cf, codegeneracy: cd };
        set.check_identities()?;
        Ok(set)
    }

    pub fn q_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn d(&self, q: usize, i: usize, x: usize) -> usize {
        self.coface[q][i][x]
    }

    pub fn s(&self, q: usize, j: usize, x: usize) -> usize {
        self.codegeneracy[q][j][x]
    }

    fn check_identities(&self) -> Result<(), CosimplicialError> {
        let qm = self.q_max();
        let fail = |identity, level: usize, x: usize| CosimplicialError::Identity {
            identity,
            level,
            element: format!("{:?}", self.levels[level][x]),
        };
        for q in 0..=qm {
            for x in 0..self.levels[q].len() {
                // d^j d^i = d^i d^(j-1), i < j
                if q + 2 <= qm {
                    for j in 1..=q + 2 {
                        for i in 0..j {
                            if self.d(q + 1, j, self.d(q, i, x)) != self.d(q + 1, i, self.d(q, j - 1, x)) {
                                return Err(fail("d^j d^i = d^i d^(j-1)", q, x));
                            }
                        }
                    }
                }
                if q + 1 <= qm {
                    for j in 0..=q {
                        // s^j d^j = 1 = s^j d^(j+1)
                        if self.s(q + 1, j, self.d(q, j, x)) != x || self.s(q + 1, j, self.d(q, j + 1, x)) != x {
                            return Err(fail("s^j d^j = 1 = s^j d^(j+1)", q, x));
                        }
                        // s^j d^i = d^i s^(j-1), i < j
                        for i in 0..j {
                            if self.s(q + 1, j, self.d(q, i, x)) != self.d(q - 1, i, self.s(q, j - 1, x)) {
                                return Err(fail("s^j d^i = d^i s^(j-1)", q, x));
                            }
                        }
                        // s^j d^i = d^(i-1) s^j, i > j+1
                        for i in j + 2..=q + 1 {
                            if self.s(q + 1, j, self.d(q, i, x)) != self.d(q - 1, i - 1, self.s(q, j, x)) {
                                return Err(fail("s^j d^i = d^(i-1) s^j", q, x));
                            }
                        }
                    }
                }
                // s^j s^i = s^i s^(j+1), i ≤ j
                if q >= 2 {
                    for j in 0..=q - 2 {
                        for i in 0..=j {
                            if self.s(q - 1, j, self.s(q, i, x)) != self.s(q - 1, i, self.s(q, j + 1, x)) {
                                return Err(fail("s^j s^i = s^i s^(j+1)", q, x));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Alternating coface complex: ZX^q in degree -q, d = Σ_i (-1)^i d^i, on
/// the elements accepted by `keep`. The coface out of the top level is
/// dropped, so only degrees -q with q < q_max carry honest homology.
pub fn cosimplicial_chain_complex<T, F>(
    t: &TruncatedCosimplicialSet<T>,
    keep: F,
) -> Result<FreeChainComplex<(usize, usize)>, CosimplicialError>
where
    T: Ord + Clone + Debug,
    F: Fn(&T) -> bool,
{
    let qm = t.q_max();
    let mut basis = Vec::new();
    for (q, level) in t.levels.iter().enumerate() {
        for (x, e) in level.iter().enumerate() {
            if keep(e) {
                basis.push(((q, x), -(q as i64)));
            }
        }
    }
    Ok(FreeChainComplex::assemble(basis, |&(q, x)| {
        if q >= qm {
            return vec![];
        }
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for i in 0..=q + 1 {
            *acc.entry((q + 1, t.d(q, i, x))).or_insert(0) += if i % 2 == 0 { 1 } else { -1 };
        }
        acc.into_iter().filter(|(_, c)| *c != 0).collect()
    })?)
}

/// An oriented 1-manifold without boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OneManifold {
    pub circles: usize,
    pub intervals: usize,
}

impl OneManifold {
    pub fn components(&self) -> usize {
        self.circles + self.intervals
    }
}

/// A component of K(q, X): for each component of X (circles first), the
/// labels of the points on it in order; a circle's list starts at its
/// smallest label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Config(pub Vec<Vec<usize>>);

impl Config {
    fn normalize(mut self, x: OneManifold) -> Self {
        for c in self.0.iter_mut().take(x.circles) {
            if let Some(p) = c.iter().enumerate().min_by_key(|(_, l)| **l).map(|(p, _)| p) {
                c.rotate_left(p);
            }
        }
        self
    }

    fn locate(&self, label: usize) -> (usize, usize) {
        for (ci, c) in self.0.iter().enumerate() {
            if let Some(p) = c.iter().position(|l| *l == label) {
                return (ci, p);
            }
        }
        panic!("label {} missing from {:?}", label, self)
    }

    pub fn num_points(&self) -> usize {
        self.0.iter().map(|c| c.len()).sum()
    }

    /// Every circle holds a point.
    pub fn is_complete(&self, x: OneManifold) -> bool {
        self.0.iter().take(x.circles).all(|c| !c.is_empty())
    }
}

/// K(q, X): all configurations of q labeled points 0..q-1.
pub fn configuration_components(q: usize, x: OneManifold) -> Vec<Config> {
    let mut out = vec![Config(vec![vec![]; x.components()])];
    for label in 0..q {
        let mut next = Vec::new();
        for c in &out {
            for ci in 0..x.components() {
                let len = c.0[ci].len();
                // a circle with k > 0 points has k gaps, an interval k + 1
                let gaps = if ci < x.circles { len.max(1) } else { len + 1 };
                for g in 0..gaps {
                    let mut n = c.clone();
                    n.0[ci].insert(if ci < x.circles { (g + 1).min(len) } else { g }, label);
                    next.push(n);
                }
            }
        }
        out = next;
    }
    let mut out: Vec<Config> = out.into_iter().map(|c| c.normalize(x)).collect();
    out.sort();
    out.dedup();
    out
}

/// d^i on K(q+1, X): for i ≤ q a copy of p_i just right of p_i, labeled
/// i+1; for i = q+1 a copy of p_0 just left of p_0, labeled q+1.
pub fn config_coface(x: OneManifold, q: usize, i: usize, c: &Config) -> Config {
    assert!(i <= q + 1);
    if i <= q {
        let shifted = Config(c.0.iter().map(|comp| comp.iter().map(|l| if *l > i { l + 1 } else { *l }).collect()).collect());
        let (ci, p) = shifted.locate(i);
        let mut out = shifted;
        out.0[ci].insert(p + 1, i + 1);
        out.normalize(x)
    } else {
        let (ci, p) = c.locate(0);
        let mut out = c.clone();
        out.0[ci].insert(p, q + 1);
        out.normalize(x)
    }
}

/// s^j on K(q+1, X): forget p_(j+1) and relabel in order.
pub fn config_codegeneracy(x: OneManifold, j: usize, c: &Config) -> Config {
    let gone = j + 1;
    Config(
        c.0.iter()
            .map(|comp| comp.iter().filter(|l| **l != gone).map(|l| if *l > gone { l - 1 } else { *l }).collect())
            .collect(),
    )
    .normalize(x)
}

/// The cosimplicial set K(•+1, X) truncated at q_max: level q is K(q+1, X).
pub fn configuration_cosimplicial(
    x: OneManifold,
    q_max: usize,
) -> Result<TruncatedCosimplicialSet<Config>, CosimplicialError> {
    let levels = (0..=q_max).map(|q| configuration_components(q + 1, x)).collect();
    TruncatedCosimplicialSet::assemble(levels, |q, i, c| config_coface(x, q, i, c), |_, j, c| config_codegeneracy(x, j, c))
}

/// Checks that the complete configurations split off: for x with
/// d_K(x) ≠ 0, d_K(x) lies in ZK_c exactly when x is complete.
pub fn complete_part_splits_off(x: OneManifold, t: &TruncatedCosimplicialSet<Config>) -> bool {
    let full = match cosimplicial_chain_complex(t, |_| true) {
        Ok(c) => c,
        Err(_) => return false,
    };
    for q in 0..t.q_max() {
        let b = full.boundary(-(q as i64));
        for (xi, e) in t.levels[q].iter().enumerate() {
            let col = b.column(xi);
            if col.is_empty() {
                continue;
            }
            let image_complete = col.iter().all(|(r, _)| t.levels[q + 1][*r].is_complete(x));
            if image_complete != e.is_complete(x) {
                return false;
            }
        }
    }
    true
}

/// The monotone injection [p] → [q] given by a coface word d^(i_1)…d^(i_k),
/// as the list of images; the rightmost coface acts first.
pub fn coface_word_map(p: usize, word: &[usize]) -> Vec<usize> {
    let mut m: Vec<usize> = (0..=p).collect();
    for &i in word.iter().rev() {
        for v in m.iter_mut() {
            if *v >= i {
                *v += 1;
            }
        }
    }
    m
}

/// Result of classifying a simplex x ∈ X^q as x = D(y) with y not a coface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub level: usize,
    pub y: usize,
    /// Coface word, outermost first.
    pub word: Vec<usize>,
    /// False exactly when y ∈ X^0 with d^0 y = d^1 y, where every
    /// injection gives the same simplex.
    pub unique: bool,
}

impl Classification {
    pub fn injection(&self, q: usize) -> Vec<usize> {
        let m = coface_word_map(self.level, &self.word);
        debug_assert!(m.last().map_or(true, |v| *v <= q));
        m
    }
}

/// Greedy descent: while x is a coface, step to a preimage.
pub fn classify_simplex<T: Ord + Clone + Debug>(t: &TruncatedCosimplicialSet<T>, q: usize, x: usize) -> Classification {
    let (mut level, mut cur) = (q, x);
    let mut word = Vec::new();
    'descend: while level > 0 {
        for i in 0..=level {
            if let Some(z) = (0..t.levels[level - 1].len()).find(|z| t.d(level - 1, i, *z) == cur) {
                word.push(i);
                level -= 1;
                cur = z;
                continue 'descend;
            }
        }
        break;
    }
    let unique = !(level == 0 && t.q_max() >= 1 && t.d(0, 0, cur) == t.d(0, 1, cur));
    Classification { level, y: cur, word, unique }
}

/// A basis element of Inj(r): a strictly increasing map [r] → [q].
pub type Injection = (usize, Vec<usize>);

fn injections(r: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, left: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=q {
            if q - v + 1 < left {
                break;
            }
            cur.push(v);
            rec(v + 1, left - 1, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r + 1, q, &mut Vec::new(), &mut out);
    out
}

/// The free semi-cosimplicial set Inj(r) truncated at q_max, with its
/// alternating coface complex and the contracting homotopy s: x ↦ (-1)^q x
/// viewed in [q-1] when q is not hit, 0 otherwise.
#[derive(Clone, Debug)]
pub struct InjComplex {
    pub r: usize,
    pub q_max: usize,
    pub complex: FreeChainComplex<Injection>,
    pub homotopy: BTreeMap<i64, SparseIntMatrix>,
}

/// `first_coface` is the lowest index in the alternating sum.
pub fn inj_complex_from(r: usize, q_max: usize, first_coface: usize) -> Result<InjComplex, CosimplicialError> {
    if r > q_max {
        return Err(CosimplicialError::Range(r, q_max));
    }
    let mut basis = Vec::new();
    for q in r..=q_max {
        for m in injections(r, q) {
            basis.push(((q, m), -(q as i64)));
        }
    }
    let complex = FreeChainComplex::assemble(basis, |(q, m)| {
        if *q >= q_max {
            return vec![];
        }
        let mut acc: BTreeMap<Injection, i64> = BTreeMap::new();
        for i in first_coface..=q + 1 {
            let img: Vec<usize> = m.iter().map(|v| if *v >= i { v + 1 } else { *v }).collect();
            *acc.entry((q + 1, img)).or_insert(0) += if i % 2 == 0 { 1 } else { -1 };
        }
        acc.into_iter().filter(|(_, c)| *c != 0).collect()
    })?;
    let mut homotopy = BTreeMap::new();
    for q in r + 1..=q_max {
        let deg = -(q as i64);
        let mut s = SparseIntMatrix::zeros(complex.rank(deg + 1), complex.rank(deg));
        for (c, (_, m)) in complex.basis(deg).iter().enumerate() {
            if !m.contains(&q) {
                let (_, row) = complex.index_of(&(q - 1, m.clone())).expect("target in basis");
                s.set(row, c, BigInt::from(if q % 2 == 0 { 1 } else { -1 }));
            }
        }
        homotopy.insert(deg, s);
    }
    Ok(InjComplex { r, q_max, complex, homotopy })
}

pub fn inj_complex(r: usize, q_max: usize) -> Result<InjComplex, CosimplicialError> {
    inj_complex_from(r, q_max, 0)
}

impl InjComplex {
    /// Degrees -q with r ≤ q < q_max, where d out of the degree exists.
    pub fn interior_degrees(&self) -> Vec<i64> {
        (self.r..self.q_max).map(|q| -(q as i64)).collect()
    }

    pub fn verify(&self) -> Result<VerifyReport, CosimplicialError> {
        let id: BTreeMap<i64, SparseIntMatrix> =
            self.complex.degrees().into_iter().map(|d| (d, SparseIntMatrix::identity(self.complex.rank(d)))).collect();
        Ok(verify_homotopy(&self.homotopy, &id, &BTreeMap::new(), &self.complex, &self.interior_degrees())?)
    }
}

/// All factorizations x = D(y) with y not a coface, found by trying every
/// non-coface y and every injection; D is written as a decreasing coface
/// word. Returns (level of y, y, image of the injection).
pub fn factorizations<T: Ord + Clone + Debug>(
    t: &TruncatedCosimplicialSet<T>,
    q: usize,
    x: usize,
) -> Vec<(usize, usize, Vec<usize>)> {
    let is_coface =
        |p: usize, y: usize| p > 0 && (0..=p).any(|i| (0..t.levels[p - 1].len()).any(|z| t.d(p - 1, i, z) == y));
    let mut out = Vec::new();
    for p in 0..=q {
        for y in 0..t.levels[p].len() {
            if is_coface(p, y) {
                continue;
            }
            for img in injections(p, q) {
                // the decreasing word omitting the values not in the image
                let word: Vec<usize> = (0..=q).rev().filter(|v| !img.contains(v)).collect();
                let mut cur = (p, y);
                for &i in word.iter().rev() {
                    cur = (cur.0 + 1, t.d(cur.0, i, cur.1));
                }
                if cur.1 == x {
                    out.push((p, y, img));
                }
            }
        }
    }
    out
}

/// Checks classify_simplex against the exhaustive factorizations on every
/// simplex of levels 0..=q_max: same y, the injection among the
/// factorizations, and exactly one factorization unless x is constant.
pub fn classification_agrees_with_brute_force<T: Ord + Clone + Debug>(t: &TruncatedCosimplicialSet<T>) -> Result<usize, String> {
    let mut checked = 0;
    for q in 0..=t.q_max() {
        for e in 0..t.levels[q].len() {
            let c = classify_simplex(t, q, e);
            let all = factorizations(t, q, e);
            let same_y = !all.is_empty() && all.iter().all(|(p, y, _)| *p == c.level && *y == c.y);
            let has_injection = all.iter().any(|(_, _, img)| *img == c.injection(q));
            let expected = if c.unique { 1 } else { q + 1 };
            if !same_y || !has_injection || all.len() != expected {
                return Err(format!("level {} simplex {}: {:?} vs {:?}", q, e, c, all));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> OneManifold {
        OneManifold { circles: 1, intervals: 0 }
    }
    fn interval() -> OneManifold {
        OneManifold { circles: 0, intervals: 1 }
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    /// |K(q, X)| by summing over label distributions: a component with k
    /// points contributes k! orders on an interval, (k-1)! on a circle.
    fn count_oracle(q: usize, x: OneManifold) -> usize {
        fn rec(q: usize, comps: &[bool], acc: usize) -> usize {
            match comps.split_first() {
                None => {
                    if q == 0 {
                        acc
                    } else {
                        0
                    }
                }
                Some((circle, rest)) => (0..=q)
                    .map(|k| {
                        let choose = factorial(q) / (factorial(k) * factorial(q - k));
                        let orders = if *circle { factorial(k.max(1) - 1) } else { factorial(k) };
                        rec(q - k, rest, acc * choose * orders)
                    })
                    .sum(),
            }
        }
        let comps: Vec<bool> = (0..x.components()).map(|c| c < x.circles).collect();
        rec(q, &comps, 1)
    }

    fn manifolds(max: usize) -> Vec<OneManifold> {
        let mut v = Vec::new();
        for c in 0..=max {
            for i in 0..=max - c {
                if c + i > 0 {
                    v.push(OneManifold { circles: c, intervals: i });
                }
            }
        }
        v
    }

    #[test]
    fn configuration_counts() {
        assert_eq!(configuration_components(3, circle()).len(), 2);
        assert_eq!(configuration_components(2, interval()).len(), 2);
        for x in manifolds(3) {
            assert_eq!(configuration_components(1, x).len(), x.components());
            for q in 0..=5 {
                assert_eq!(configuration_components(q, x).len(), count_oracle(q, x), "{:?} q={}", x, q);
            }
        }
    }

    #[test]
    fn cofaces_on_a_single_point() {
        let tc = configuration_cosimplicial(circle(), 2).unwrap();
        assert_eq!(tc.d(0, 0, 0), tc.d(0, 1, 0));
        let ti = configuration_cosimplicial(interval(), 2).unwrap();
        assert_ne!(ti.d(0, 0, 0), ti.d(0, 1, 0));
        for t in [&tc, &ti] {
            for x in 0..t.levels[1].len() {
                assert_eq!(t.s(2, 0, t.d(1, 0, x)), x);
            }
        }
    }

    #[test]
    fn all_identities_hold_up_to_three_components() {
        for x in manifolds(3) {
            configuration_cosimplicial(x, 4).unwrap();
        }
    }

    #[test]
    fn a_wrong_coface_is_caught() {
        let x = interval();
        let levels = (0..=3).map(|q| configuration_components(q + 1, x)).collect();
        let bad = TruncatedCosimplicialSet::assemble(
            levels,
            |q, i, c| config_coface(x, q, if i == q + 1 { 0 } else { i }, c),
            |_, j, c| config_codegeneracy(x, j, c),
        );
        assert!(matches!(bad, Err(CosimplicialError::Identity { .. })));
    }

    #[test]
    fn homology_concentrated_in_degree_zero() {
        let q_max = 5;
        for x in manifolds(3) {
            let t = configuration_cosimplicial(x, q_max).unwrap();
            assert!(complete_part_splits_off(x, &t), "{:?}", x);
            let kc = cosimplicial_chain_complex(&t, |c| c.is_complete(x)).unwrap();
            let fixed = (0..t.levels[0].len())
                .filter(|y| t.levels[0][*y].is_complete(x) && t.d(0, 0, *y) == t.d(0, 1, *y))
                .count();
            assert_eq!(kc.homology(0).betti, fixed, "{:?}", x);
            assert!(kc.homology(0).torsion.is_empty());
            for q in 1..q_max {
                let h = kc.homology(-(q as i64));
                assert!(h.betti == 0 && h.torsion.is_empty(), "{:?} H_-{} = {}", x, q, h);
            }
        }
    }

    #[test]
    fn circle_and_interval_examples() {
        let t = configuration_cosimplicial(circle(), 5).unwrap();
        let kc = cosimplicial_chain_complex(&t, |c| c.is_complete(circle())).unwrap();
        assert_eq!(kc.homology(0).betti, 1);
        let t = configuration_cosimplicial(interval(), 5).unwrap();
        let k = cosimplicial_chain_complex(&t, |_| true).unwrap();
        for q in 0..5 {
            assert_eq!(k.homology(-q).betti, 0);
        }
    }

    #[test]
    fn inj_homotopy_contracts_interior() {
        for r in 0..=2 {
            let c = inj_complex(r, 6).unwrap();
            let rep = c.verify().unwrap();
            assert!(rep.passed, "r={}: {:?}", r, rep.failure);
            for d in c.interior_degrees() {
                let h = c.complex.homology(d);
                assert!(h.betti == 0 && h.torsion.is_empty(), "r={} degree {}", r, d);
            }
        }
        let bottom = inj_complex(3, 3).unwrap();
        assert_eq!(bottom.complex.rank(-3), 1);
        // dropping d^0 gives another differential, contracted by the same s
        for r in 0..=2 {
            let c = inj_complex_from(r, 6, 1).unwrap();
            assert!(c.verify().unwrap().passed, "r={}", r);
        }
    }

    #[test]
    fn classification_matches_brute_force() {
        for x in manifolds(2) {
            let t = configuration_cosimplicial(x, 4).unwrap();
            for q in 0..=4 {
                for e in 0..t.levels[q].len() {
                    let c = classify_simplex(&t, q, e);
                    let all = factorizations(&t, q, e);
                    assert!(!all.is_empty());
                    assert!(all.iter().all(|(p, y, _)| *p == c.level && *y == c.y), "{:?} q={} x={}", x, q, e);
                    assert!(all.iter().any(|(_, _, img)| *img == c.injection(q)));
                    let expected = if c.unique { 1 } else { q + 1 };
                    assert_eq!(all.len(), expected, "{:?} q={} x={}", x, q, e);
                }
            }
        }
    }

    #[test]
    fn classes_partition_each_level() {
        for x in manifolds(2) {
            let t = configuration_cosimplicial(x, 4).unwrap();
            let mut free_per_level = vec![0usize; 5];
            let mut constant = 0;
            for p in 0..=4 {
                for e in 0..t.levels[p].len() {
                    let c = classify_simplex(&t, p, e);
                    if c.level == p {
                        if c.unique {
                            free_per_level[p] += 1;
                        } else {
                            constant += 1;
                        }
                    }
                }
            }
            for q in 0..=4usize {
                let binom = |n: usize, k: usize| factorial(n) / (factorial(k) * factorial(n - k));
                let expected: usize = (0..=q).map(|p| free_per_level[p] * binom(q + 1, p + 1)).sum::<usize>() + constant;
                assert_eq!(t.levels[q].len(), expected, "{:?} level {}", x, q);
            }
        }
    }
}
