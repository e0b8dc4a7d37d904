//! Graded symmetric Frobenius algebras given by structure constants, tensor
//! words, the Koszul sign rule, and the action of forests on tensors.
//!
//! Degrees are homological. For H*(S^n) the class x sits in degree -n.
//! Structure constants are integers: `product[a][b][c]` is the coefficient
//! of e_c in e_a e_b, `coproduct[a][b][c]` the coefficient of e_b ⊗ e_c in
//! ν(e_a), and `differential[a][b]` the coefficient of e_b in d(e_a).

use crate::ainfty::{vertex_inputs, vertex_roots, Forest, ForestSum};
use crate::graph_core::{Gen, Leaf};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub type Word = Vec<usize>;
/// Formal integer combination of basis words.
pub type Tensor = BTreeMap<Word, i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("algebra axiom fails: {0}")]
    Axiom(String),
    #[error("malformed algebra data: {0}")]
    Shape(String),
    #[error("sphere dimension must be at least 2, got {0}")]
    SphereDimension(i64),
    #[error("the dual forest action needs a coproduct of even degree, got {0}")]
    OddCoproduct(i64),
    #[error("arity mismatch: forest has {0} inputs, word has length {1}")]
    Arity(u32, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusAlgebra {
    pub name: String,
    pub basis: Vec<String>,
    pub degree: Vec<i64>,
    pub unit: Vec<i64>,
    pub product: Vec<Vec<Vec<i64>>>,
    pub counit: Vec<i64>,
    pub coproduct: Vec<Vec<Vec<i64>>>,
    pub differential: Vec<Vec<i64>>,
    /// Degree of the coproduct as a map.
    pub coproduct_degree: i64,
    /// Index of the basis element equal to the unit, if any.
    pub unit_index: Option<usize>,
}

/// Sign (−1)^k.
pub fn sgn(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign of reordering elements of the given degrees: the new
/// sequence is `degrees[perm[0]], degrees[perm[1]], ...`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> i64 {
    assert_eq!(perm.len(), degrees.len(), "permutation and degrees differ in length");
    let mut s = 1;
    for p in 0..perm.len() {
        for q in p + 1..perm.len() {
            if perm[p] > perm[q] {
                s *= sgn(degrees[perm[p]] * degrees[perm[q]]);
            }
        }
    }
    s
}

pub fn add_to(t: &mut Tensor, w: Word, c: i64) {
    if c == 0 {
        return;
    }
    let e = t.entry(w.clone()).or_insert(0);
    *e = e.checked_add(c).expect("coefficient overflow");
    if *e == 0 {
        t.remove(&w);
    }
}

pub fn tensor_add(a: &Tensor, b: &Tensor, cb: i64) -> Tensor {
    let mut out = a.clone();
    for (w, c) in b {
        add_to(&mut out, w.clone(), c.checked_mul(cb).expect("coefficient overflow"));
    }
    out
}

pub fn tensor_scale(a: &Tensor, c: i64) -> Tensor {
    tensor_add(&Tensor::new(), a, c)
}

pub fn single(w: Word) -> Tensor {
    let mut t = Tensor::new();
    t.insert(w, 1);
    t
}

impl FrobeniusAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|a| self.degree[*a]).sum()
    }

    pub fn counit_degree(&self) -> i64 {
        // ε is nonzero only on elements of one degree; ε lowers that to 0
        self.counit
            .iter()
            .enumerate()
            .find(|(_, c)| **c != 0)
            .map(|(a, _)| -self.degree[a])
            .unwrap_or(0)
    }

    /// Product of two combinations of basis elements.
    pub fn mul_vec(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.dim();
        let mut out = vec![0i64; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                for k in 0..n {
                    let c = self.product[i][j][k];
                    if c != 0 {
                        out[k] = out[k]
                            .checked_add(a[i].checked_mul(b[j]).and_then(|x| x.checked_mul(c)).expect("overflow"))
                            .expect("overflow");
                    }
                }
            }
        }
        out
    }

    pub fn basis_vec(&self, a: usize) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        v[a] = 1;
        v
    }

    pub fn pairing(&self, a: usize, b: usize) -> i64 {
        let ab = self.mul_vec(&self.basis_vec(a), &self.basis_vec(b));
        ab.iter().zip(&self.counit).map(|(x, y)| x * y).sum()
    }

    /// Copairing c = ν(1). `verify` checks that it satisfies the zig-zag
    /// identity Σ (−1)^{|c||e|} ε(e c_1) c_2 = e, where |c| = coproduct_degree.
    pub fn copairing(&self) -> Tensor {
        self.coproduct_of(&self.unit)
    }

    /// ν applied to a combination of basis elements.
    pub fn coproduct_of(&self, a: &[i64]) -> Tensor {
        let mut t = Tensor::new();
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for b in 0..self.dim() {
                for c in 0..self.dim() {
                    let k = self.coproduct[i][b][c];
                    if k != 0 {
                        add_to(&mut t, vec![b, c], ai * k);
                    }
                }
            }
        }
        t
    }

    /// Checks associativity, unit, graded symmetry and non-degeneracy of the
    /// pairing, homogeneity, and adjointness ν(a) = (−1)^{|c||a|} Σ a c_1 ⊗ c_2.
    pub fn verify(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let shape = |m: &str| Err(AlgebraError::Shape(m.to_string()));
        if self.degree.len() != n || self.unit.len() != n || self.counit.len() != n {
            return shape("vector lengths differ from the basis size");
        }
        if self.product.len() != n || self.product.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return shape("product tensor has the wrong shape");
        }
        if self.coproduct.len() != n || self.coproduct.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return shape("coproduct tensor has the wrong shape");
        }
        if self.differential.len() != n || self.differential.iter().any(|r| r.len() != n) {
            return shape("differential matrix has the wrong shape");
        }
        let fail = |m: String| Err(AlgebraError::Axiom(m));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.product[a][b][c] != 0 && self.degree[c] != self.degree[a] + self.degree[b] {
                        return fail(format!("product {}·{} is not homogeneous", self.basis[a], self.basis[b]));
                    }
                    if self.coproduct[a][b][c] != 0
                        && self.degree[b] + self.degree[c] != self.degree[a] + self.coproduct_degree
                    {
                        return fail(format!("coproduct of {} is not homogeneous", self.basis[a]));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ea, eb, ec) = (self.basis_vec(a), self.basis_vec(b), self.basis_vec(c));
                    let l = self.mul_vec(&self.mul_vec(&ea, &eb), &ec);
                    let r = self.mul_vec(&ea, &self.mul_vec(&eb, &ec));
                    if l != r {
                        return fail(format!("associativity at ({}, {}, {})", self.basis[a], self.basis[b], self.basis[c]));
                    }
                }
            }
            let ea = self.basis_vec(a);
            if self.mul_vec(&self.unit, &ea) != ea || self.mul_vec(&ea, &self.unit) != ea {
                return fail(format!("unit law at {}", self.basis[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let s = sgn(self.degree[a] * self.degree[b]);
                if self.pairing(a, b) != s * self.pairing(b, a) {
                    return fail(format!("pairing not graded symmetric at ({}, {})", self.basis[a], self.basis[b]));
                }
            }
        }
        let det = integer_det(&(0..n).map(|a| (0..n).map(|b| self.pairing(a, b)).collect()).collect::<Vec<_>>());
        if det.abs() != 1 {
            return fail(format!("pairing has determinant {}, not a unit", det));
        }
        let c = self.copairing();
        for a in 0..n {
            // zig-zag: Σ (−1)^{|c||a|} ε(a c_1) c_2 = a
            let mut back = vec![0i64; n];
            for (w, k) in &c {
                let s = sgn(self.coproduct_degree * self.degree[a]);
                let p = self.pairing(a, w[0]);
                back[w[1]] += s * k * p;
            }
            if back != self.basis_vec(a) {
                return fail(format!("zig-zag identity fails at {}", self.basis[a]));
            }
            // adjointness: ν(a) = (−1)^{|c||a|} Σ a c_1 ⊗ c_2
            let mut expect = Tensor::new();
            for (w, k) in &c {
                let s = sgn(self.coproduct_degree * self.degree[a]);
                let ac = self.mul_vec(&self.basis_vec(a), &self.basis_vec(w[0]));
                for (i, x) in ac.iter().enumerate() {
                    add_to(&mut expect, vec![i, w[1]], s * k * x);
                }
            }
            if expect != self.coproduct_of(&self.basis_vec(a)) {
                return fail(format!("coproduct is not adjoint to the product at {}", self.basis[a]));
            }
        }
        // differential: d² = 0 and derivation (zero for the built-ins)
        for a in 0..n {
            let mut dd = vec![0i64; n];
            for b in 0..n {
                for c in 0..n {
                    dd[c] += self.differential[a][b] * self.differential[b][c];
                }
            }
            if dd.iter().any(|x| *x != 0) {
                return fail("internal differential does not square to zero".into());
            }
        }
        if let Some(u) = self.unit_index {
            if self.basis_vec(u) != self.unit {
                return fail("unit_index does not point at the unit".into());
            }
        }
        Ok(())
    }

    /// Internal differential on tensors with the Koszul sign.
    pub fn tensor_differential(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t {
            let mut before = 0;
            for (i, a) in w.iter().enumerate() {
                for (b, k) in self.differential[*a].iter().enumerate() {
                    if *k != 0 {
                        let mut nw = w.clone();
                        nw[i] = b;
                        add_to(&mut out, nw, c * k * sgn(before));
                    }
                }
                before += self.degree[*a];
            }
        }
        out
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(|r| r.iter().all(|x| *x == 0))
    }
}

fn integer_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    for j in 0..n {
        let minor: Vec<Vec<i64>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
        total += sgn(j as i64) * m[0][j] * integer_det(&minor);
    }
    total
}

/// Z[x]/(x²) with ε(1) = 0, ε(x) = 1, ν(1) = 1⊗x + x⊗1, ν(x) = x⊗x.
pub fn builtin_dual_numbers() -> FrobeniusAlgebra {
    two_dim("dual_numbers", 0)
}

/// H*(S^n) in homological grading: x in degree −n, ν(1) = (−1)^n 1⊗x + x⊗1,
/// ν(x) = x⊗x.
pub fn builtin_sphere_cohomology(n: i64) -> Result<FrobeniusAlgebra, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::SphereDimension(n));
    }
    Ok(two_dim(&format!("sphere_{}", n), n))
}

fn two_dim(name: &str, n: i64) -> FrobeniusAlgebra {
    // basis 0 = 1, 1 = x
    let mut product = vec![vec![vec![0; 2]; 2]; 2];
    product[0][0][0] = 1;
    product[0][1][1] = 1;
    product[1][0][1] = 1;
    let mut coproduct = vec![vec![vec![0; 2]; 2]; 2];
    coproduct[0][0][1] = sgn(n);
    coproduct[0][1][0] = 1;
    coproduct[1][1][1] = 1;
    FrobeniusAlgebra {
        name: name.to_string(),
        basis: vec!["1".into(), "x".into()],
        degree: vec![0, -n],
        unit: vec![1, 0],
        product,
        counit: vec![0, 1],
        coproduct,
        differential: vec![vec![0, 0], vec![0, 0]],
        coproduct_degree: -n,
        unit_index: Some(0),
    }
}

/// Standard composite orientation of a binary forest: the wedge over its
/// vertices of in_1∧in_2∧v∧out. Returns the sign of the forest's
/// orientation relative to it, or `None` if some vertex is not trivalent.
pub fn binary_forest_sign(f: &Forest) -> Option<i64> {
    let g = &f.graph;
    if g.vertices.iter().any(|v| v.cyclic.len() != 3) {
        return None;
    }
    let roots = vertex_roots(g);
    let mut gens = Vec::new();
    for (v, r) in roots.iter().enumerate() {
        let ins = vertex_inputs(g, v, *r);
        gens.extend([Gen::H(ins[0]), Gen::H(ins[1]), Gen::V(v), Gen::H(*r)]);
    }
    Some(g.sign_of_ordering(&gens) as i64)
}

/// Input labels feeding each output, in output order; and the tree vertex
/// for each tree output.
fn output_inputs(f: &Forest) -> Vec<Vec<u32>> {
    let g = &f.graph;
    let roots = vertex_roots(g);
    let mut out = vec![Vec::new(); f.n_out as usize];
    for (i, o) in &f.strands {
        out[*o as usize - 1] = vec![*i];
    }
    for (h, he) in g.half_edges.iter().enumerate() {
        if let Some(Leaf::Out(j)) = he.leaf {
            let mut seq = Vec::new();
            collect_inputs(g, &roots, h, &mut seq);
            out[j as usize - 1] = seq;
        }
    }
    out
}

fn collect_inputs(g: &crate::graph_core::BwGraph, roots: &[usize], root_h: usize, seq: &mut Vec<u32>) {
    let v = g.half_edges[root_h].source.unwrap();
    for x in vertex_inputs(g, v, roots[v]) {
        if g.is_leaf(x) {
            if let Some(Leaf::In(i)) = g.half_edges[x].leaf {
                seq.push(i);
            }
        } else {
            collect_inputs(g, roots, g.half_edges[x].partner, seq);
        }
    }
}

fn eval_tree(alg: &FrobeniusAlgebra, g: &crate::graph_core::BwGraph, roots: &[usize], root_h: usize, w: &[usize]) -> Vec<i64> {
    let v = g.half_edges[root_h].source.unwrap();
    let ins = vertex_inputs(g, v, roots[v]);
    let val = |x: usize| -> Vec<i64> {
        if g.is_leaf(x) {
            match g.half_edges[x].leaf {
                Some(Leaf::In(i)) => alg.basis_vec(w[i as usize - 1]),
                _ => panic!("tree input leaf without an input label"),
            }
        } else {
            eval_tree(alg, g, roots, g.half_edges[x].partner, w)
        }
    };
    alg.mul_vec(&val(ins[0]), &val(ins[1]))
}

/// Evaluates a forest on a tensor: binary trees multiply, strands copy,
/// unit outputs insert the unit. Trees with a vertex of valence above 3
/// act as zero (the algebra is strict).
pub fn apply_forest(alg: &FrobeniusAlgebra, f: &ForestSum, t: &Tensor) -> Result<Tensor, AlgebraError> {
    let mut out = Tensor::new();
    for (forest, c) in f {
        let Some(sign) = binary_forest_sign(forest) else { continue };
        let groups = output_inputs(forest);
        let perm: Vec<usize> = groups.iter().flatten().map(|i| *i as usize - 1).collect();
        let roots = vertex_roots(&forest.graph);
        for (w, k) in t {
            if w.len() != forest.n_in as usize {
                return Err(AlgebraError::Arity(forest.n_in, w.len()));
            }
            let degs: Vec<i64> = w.iter().map(|a| alg.degree[*a]).collect();
            let ks = koszul_sign(&perm, &degs);
            // each output is a combination of basis elements
            let mut outs: Vec<Vec<i64>> = Vec::with_capacity(forest.n_out as usize);
            for j in 1..=forest.n_out {
                if let Some((i, _)) = forest.strands.iter().find(|(_, o)| *o == j) {
                    outs.push(alg.basis_vec(w[*i as usize - 1]));
                } else if forest.units.contains(&j) {
                    outs.push(alg.unit.clone());
                } else {
                    let h = forest.graph.leaf_with_label(Leaf::Out(j)).expect("tree output");
                    outs.push(eval_tree(alg, &forest.graph, &roots, h, w));
                }
            }
            let coeff = c * k * sign * ks;
            expand_product(&outs, coeff, &mut out);
        }
    }
    Ok(out)
}

fn expand_product(outs: &[Vec<i64>], coeff: i64, acc: &mut Tensor) {
    let mut partial: Vec<(Word, i64)> = vec![(vec![], coeff)];
    for o in outs {
        let mut next = Vec::new();
        for (w, c) in &partial {
            for (b, x) in o.iter().enumerate() {
                if *x != 0 {
                    let mut nw = w.clone();
                    nw.push(b);
                    next.push((nw, c.checked_mul(*x).expect("overflow")));
                }
            }
        }
        partial = next;
    }
    for (w, c) in partial {
        add_to(acc, w, c);
    }
}

/// Iterated coproduct along a tree: the root value is split by ν at every
/// vertex, left input first. Koszul sign (−1)^{|ν|·(degree before)} for
/// each application.
fn coeval_tree(alg: &FrobeniusAlgebra, g: &crate::graph_core::BwGraph, roots: &[usize], root_h: usize, y: usize) -> Tensor {
    // tensor over the inputs of the tree in planar order
    let v = g.half_edges[root_h].source.unwrap();
    let ins = vertex_inputs(g, v, roots[v]);
    let split = alg.coproduct_of(&alg.basis_vec(y));
    let mut out = Tensor::new();
    for (w, c) in split {
        // expand left factor then right factor
        let left = child_coeval(alg, g, roots, ins[0], w[0]);
        let right = child_coeval(alg, g, roots, ins[1], w[1]);
        for (lw, lc) in &left {
            let dl = alg.word_degree(lw);
            for (rw, rc) in &right {
                // the right expansion (degree |ν|·(leaves-1)) passes the left part
                let r_ops = (rw.len() as i64 - 1) * alg.coproduct_degree;
                let mut nw = lw.clone();
                nw.extend(rw.iter().copied());
                add_to(&mut out, nw, c * lc * rc * sgn(r_ops * dl));
            }
        }
    }
    out
}

fn child_coeval(alg: &FrobeniusAlgebra, g: &crate::graph_core::BwGraph, roots: &[usize], x: usize, y: usize) -> Tensor {
    if g.is_leaf(x) {
        single(vec![y])
    } else {
        coeval_tree(alg, g, roots, g.half_edges[x].partner, y)
    }
}

/// Dual action of a forest n -> m on a tensor of length m, by iterated
/// coproducts; a unit output acts by the counit. The result has length n.
/// Coproducts of odd degree anticommute with each other, so a trivalent
/// vertex block no longer determines the operator; they are rejected.
pub fn coapply_forest(alg: &FrobeniusAlgebra, f: &ForestSum, t: &Tensor) -> Result<Tensor, AlgebraError> {
    if alg.coproduct_degree % 2 != 0 {
        return Err(AlgebraError::OddCoproduct(alg.coproduct_degree));
    }
    let mut out = Tensor::new();
    let eps_deg = alg.counit_degree();
    for (forest, c) in f {
        let Some(sign) = binary_forest_sign(forest) else { continue };
        let groups = output_inputs(forest);
        let perm: Vec<usize> = groups.iter().flatten().map(|i| *i as usize - 1).collect();
        let roots = vertex_roots(&forest.graph);
        for (y, k) in t {
            if y.len() != forest.n_out as usize {
                return Err(AlgebraError::Arity(forest.n_out, y.len()));
            }
            // grouped result, output by output
            let mut partial: Vec<(Word, i64)> = vec![(vec![], c * k * sign)];
            let mut deg_before = 0i64;
            for j in 1..=forest.n_out {
                let yj = y[j as usize - 1];
                let piece: Tensor = if forest.strands.iter().any(|(_, o)| *o == j) {
                    single(vec![yj])
                } else if forest.units.contains(&j) {
                    let e = alg.counit[yj];
                    let mut t = Tensor::new();
                    if e != 0 {
                        t.insert(vec![], e * sgn(eps_deg * deg_before));
                    }
                    t
                } else {
                    let h = forest.graph.leaf_with_label(Leaf::Out(j)).expect("tree output");
                    let tree = coeval_tree(alg, &forest.graph, &roots, h, yj);
                    tree.into_iter()
                        .map(|(w, x)| {
                            let ops = (w.len() as i64 - 1) * alg.coproduct_degree;
                            (w, x * sgn(ops * deg_before))
                        })
                        .collect()
                };
                deg_before += alg.degree[yj];
                let mut next = Vec::new();
                for (w, x) in &partial {
                    for (pw, px) in &piece {
                        let mut nw = w.clone();
                        nw.extend(pw.iter().copied());
                        next.push((nw, x * px));
                    }
                }
                partial = next;
            }
            for (w, x) in partial {
                // w lists inputs in grouped order perm; move to input order
                let degs: Vec<i64> = w.iter().map(|a| alg.degree[*a]).collect();
                let mut inv = vec![0usize; perm.len()];
                for (p, i) in perm.iter().enumerate() {
                    inv[*i] = p;
                }
                let ks = koszul_sign(&inv, &degs);
                let mut nw = vec![0usize; w.len()];
                for (p, i) in perm.iter().enumerate() {
                    nw[*i] = w[p];
                }
                add_to(&mut out, nw, x * ks);
            }
        }
    }
    Ok(out)
}
