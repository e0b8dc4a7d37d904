//! Seeded, bounded verification suites and their report.
//!
//! `verify_all` runs every suite in a fixed order and collects named checks.
//! The report holds no timings or paths, so two runs with the same seed
//! and bounds serialize to identical bytes.

use crate::ainfty::{self, all_forests, verify_m3_identity};
use crate::algebra::{builtin_dual_numbers, builtin_sphere_cohomology, FrobeniusAlgebra};
use crate::cosimplicial::{
    classification_agrees_with_brute_force, complete_part_splits_off, configuration_cosimplicial, cosimplicial_chain_complex,
    inj_complex, OneManifold,
};
use crate::formal_ops::{add_entry, normalize, verify_cap_embedding, NatElement, NatTruncation};
use crate::graph_core::{blowups, canonical_form, differential, random_bw_graph, BwGraph, Gen, OrientedGraph};
use crate::hochschild::{build_hochschild, verify_unit_homotopies, HochschildSpec, HomotopyCheck};
use crate::sullivan::{self, face_report, random_representative, sd_differential};
use crate::tqft_action::homology_action_report;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Version tag of the sign conventions recorded in every report.
pub const CONVENTIONS_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Hochschild truncation length
    pub n_max: usize,
    /// cochain arity bound
    pub q_max: usize,
    /// formal operations: input length bound J
    pub j_max: usize,
    /// formal operations: output length bound K
    pub k_max: usize,
    /// genus bound for μ_g and t_g
    pub g_max: usize,
    /// cosimplicial level bound
    pub cosimplicial_q_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { n_max: 8, q_max: 3, j_max: 6, k_max: 6, g_max: 4, cosimplicial_q_max: 5 }
    }
}

impl Bounds {
    pub fn validate(&self) -> Result<(), String> {
        let named = [
            ("n_max", self.n_max),
            ("q_max", self.q_max),
            ("j_max", self.j_max),
            ("k_max", self.k_max),
            ("g_max", self.g_max),
            ("cosimplicial_q_max", self.cosimplicial_q_max),
        ];
        if let Some((name, _)) = named.iter().find(|(_, v)| *v == 0) {
            return Err(format!("bound {} must be positive", name));
        }
        if self.n_max < 4 {
            return Err("n_max must be at least 4".into());
        }
        if self.j_max <= self.q_max {
            return Err("j_max must exceed q_max".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub bounds: Bounds,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0, bounds: Bounds::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub bounds: Bounds,
    pub conventions: BTreeMap<String, String>,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl Report {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("strop verify-all v{} seed {}\n", self.version, self.seed);
        let b = &self.bounds;
        out += &format!(
            "bounds: n_max={} q_max={} J={} K={} g_max={} cosimplicial_q_max={}\n",
            b.n_max, b.q_max, b.j_max, b.k_max, b.g_max, b.cosimplicial_q_max
        );
        for (k, v) in &self.conventions {
            out += &format!("convention {}: {}\n", k, v);
        }
        for s in &self.suites {
            out += &format!("[{}] {}\n", if s.passed { "PASS" } else { "FAIL" }, s.name);
            for c in &s.checks {
                out += &format!("  {} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
        }
        out += &format!("overall: {}\n", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

pub fn conventions() -> BTreeMap<String, String> {
    [
        ("version", CONVENTIONS_VERSION),
        ("orientation", "det(V+H), standard order vertices then half-edges; m_k = h_1..h_k v h_0; l_n = h_1..h_n w"),
        ("cochain_sign", "dD = (-1)^|D| delta D; a cap D = (-1)^((|a|-|a_0|)|D|_int + pq) a_0 D(a_1..a_q) (x) a_(q+1)..a_p"),
        ("formal_ops_sign", "d(g)_j = (-1)^(j-1) (d_E g_j + sum (-1)^|g|_int f o g - sum g o f)"),
        ("tqft_reference", "white half-edges from the start, white vertex, black vertices each followed by their half-edges"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn suite(name: &str, checks: Vec<Check>) -> SuiteResult {
    SuiteResult { name: name.to_string(), passed: checks.iter().all(|c| c.passed), checks }
}

/// Sub-seed for one suite so that suites do not share a random stream.
fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

/// m_k as a graph, oriented h_1∧…∧h_k∧v∧h_0.
pub fn mk_graph(k: usize) -> OrientedGraph {
    let mut gens: Vec<Gen> = (0..k).map(Gen::H).collect();
    gens.push(Gen::V(0));
    gens.push(Gen::H(k));
    OrientedGraph::from_ordering(BwGraph::corolla(k), &gens)
}

fn random_relabel(og: &OrientedGraph, rng: &mut ChaCha8Rng) -> OrientedGraph {
    let mut vp: Vec<usize> = (0..og.graph.vertices.len()).collect();
    let mut hp: Vec<usize> = (0..og.graph.half_edges.len()).collect();
    vp.shuffle(rng);
    hp.shuffle(rng);
    og.relabel(&vp, &hp)
}

fn graph_core_suite(seed: u64) -> SuiteResult {
    let mut rng = rng_for(seed, 1);
    let mut checks = Vec::new();
    let mut bad = None;
    let mut nonzero = 0;
    for i in 0..50 {
        let g = random_bw_graph(&mut rng, 4);
        let d = blowups(&g);
        nonzero += usize::from(!d.is_empty());
        if bad.is_none() && !differential(&d).is_empty() {
            bad = Some(format!("sample {}: {:?}", i, g));
        }
    }
    checks.push(check(
        "d^2 = 0 on random BW graphs",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("50 samples of degree <= 4, {} with nonzero d", nonzero)),
    ));
    let mut bad = None;
    for i in 0..20 {
        let g = random_bw_graph(&mut rng, 4);
        let c = canonical_form(&g);
        let idempotent = c.as_ref().map_or(true, |c| canonical_form(c).as_ref() == Some(c));
        let invariant = (0..10).all(|_| canonical_form(&random_relabel(&g, &mut rng)) == c);
        if bad.is_none() && !(idempotent && invariant) {
            bad = Some(format!("sample {}: {:?}", i, g));
        }
    }
    checks.push(check(
        "canonical form invariant under relabeling",
        bad.is_none(),
        bad.unwrap_or_else(|| "20 graphs x 10 relabelings".into()),
    ));
    let corollas: Vec<(String, OrientedGraph)> = (2..=6)
        .map(|k| (format!("m_{}", k), mk_graph(k)))
        .chain((1..=6).map(|n| (format!("l_{}", n), ainfty::ln(n))))
        .collect();
    let failing: Vec<String> =
        corollas.iter().filter(|(_, g)| !differential(&blowups(g)).is_empty()).map(|(n, _)| n.clone()).collect();
    checks.push(check(
        "d^2 = 0 on m_k (k <= 6) and l_n (n <= 6)",
        failing.is_empty(),
        if failing.is_empty() { "11 corollas".to_string() } else { format!("failing: {}", failing.join(", ")) },
    ));
    suite("graph_core", checks)
}

fn ainfty_suite() -> SuiteResult {
    let m3 = verify_m3_identity();
    let mut checks = vec![check(
        "m_3 identity",
        m3.passed,
        format!("{} terms on each side; {}", m3.lhs_terms, m3.detail),
    )];
    let mut count = 0;
    let mut bad = None;
    for n in 1..=6 {
        for m in 1..=n {
            for f in all_forests(n, m) {
                count += 1;
                if bad.is_none() && !ainfty::differential(&ainfty::differential(&f)).is_empty() {
                    bad = Some(format!("forest {} -> {}: {:?}", n, m, f.keys().next()));
                }
            }
        }
    }
    checks.push(check("d^2 = 0 on A-infinity(n, m), n <= 6", bad.is_none(), bad.unwrap_or_else(|| format!("{} forests", count))));
    suite("ainfty", checks)
}

fn built_ins() -> Vec<FrobeniusAlgebra> {
    vec![builtin_dual_numbers(), builtin_sphere_cohomology(2).expect("n >= 2"), builtin_sphere_cohomology(3).expect("n >= 2")]
}

fn algebra_suite() -> SuiteResult {
    let checks = built_ins()
        .iter()
        .map(|a| {
            let r = a.verify();
            check(format!("Frobenius axioms for {}", a.name), r.is_ok(), r.err().map_or("ok".to_string(), |e| e.to_string()))
        })
        .collect();
    suite("algebra", checks)
}

fn hochschild_suite(b: &Bounds) -> SuiteResult {
    let mut checks = Vec::new();
    let dual = builtin_dual_numbers();
    match (
        build_hochschild(&HochschildSpec::new(dual.clone(), b.n_max, true)),
        build_hochschild(&HochschildSpec::new(dual.clone(), b.n_max + 1, true)),
    ) {
        (Ok(h), Ok(h2)) => {
            checks.push(check("d^2 = 0 on reduced C_*(dual_numbers)", true, format!("n_max = {}", b.n_max)));
            let top = b.n_max as i64 - 2;
            let mut table = Vec::new();
            let mut ok = h.homology(0).betti == 2 && h.homology(0).torsion.is_empty();
            let mut stable = true;
            for d in 0..=top {
                let g = h.homology(d);
                table.push(format!("H_{} = {}", d, g));
                if d > 0 {
                    let expected_torsion = if d % 2 == 1 { vec![2.into()] } else { vec![] };
                    ok &= g.betti == 1 && g.torsion == expected_torsion;
                }
                stable &= g == h2.homology(d);
            }
            checks.push(check("HH_* of Z[x]/(x^2), reduced", ok, table.join(", ")));
            checks.push(check(
                "low degrees stable under truncation bump",
                stable,
                format!("degrees 0..={} at n_max {} and {}", top, b.n_max, b.n_max + 1),
            ));
        }
        (Err(e), _) | (_, Err(e)) => checks.push(check("d^2 = 0 on reduced C_*(dual_numbers)", false, e.to_string())),
    }
    for alg in &built_ins()[1..] {
        for reduced in [false, true] {
            let r = build_hochschild(&HochschildSpec::new(alg.clone(), b.n_max, reduced));
            checks.push(check(
                format!("d^2 = 0 on {} C_*({})", if reduced { "reduced" } else { "unreduced" }, alg.name),
                r.is_ok(),
                r.err().map_or(format!("n_max = {}", b.n_max), |e| e.to_string()),
            ));
        }
    }
    suite("hochschild", checks)
}

/// A quotient is contracted when s is a homotopy from the identity or from
/// its negative to zero; the literal identity sd + ds = id is reported in
/// the detail.
fn contracting(c: &HomotopyCheck) -> bool {
    c.passed || (c.square_zero && c.negated_identity)
}

fn homotopy_detail(c: &HomotopyCheck) -> String {
    format!(
        "{} elements, literal sd+ds=id: {}, sd+ds=-id: {}{}",
        c.checked,
        c.passed,
        c.negated_identity,
        c.first_failure.as_ref().filter(|_| !c.passed).map_or(String::new(), |f| format!(", witness {}", f))
    )
}

fn unit_homotopy_suite() -> SuiteResult {
    let alg = builtin_dual_numbers();
    let mut checks = Vec::new();
    for r in 2..=4 {
        match verify_unit_homotopies(&alg, r, 6) {
            Ok(rep) => {
                checks.push(check(format!("A_{} contracted (n_max 6)", r), contracting(&rep.a_r), homotopy_detail(&rep.a_r)));
                checks.push(check(format!("B^{} contracted (n_max 6)", r), contracting(&rep.b_r), homotopy_detail(&rep.b_r)));
            }
            Err(e) => checks.push(check(format!("unit homotopies r = {}", r), false, e.to_string())),
        }
    }
    suite("unit_homotopies", checks)
}

fn manifolds(max: usize) -> Vec<OneManifold> {
    (0..=max)
        .flat_map(|c| (0..=max - c).map(move |i| OneManifold { circles: c, intervals: i }))
        .filter(|x| x.components() > 0)
        .collect()
}

fn cosimplicial_suite(b: &Bounds) -> SuiteResult {
    let mut checks = Vec::new();
    for r in 0..=2 {
        let res = inj_complex(r, 6).map_err(|e| e.to_string()).and_then(|c| {
            let rep = c.verify().map_err(|e| e.to_string())?;
            let acyclic = c.interior_degrees().into_iter().all(|d| {
                let h = c.complex.homology(d);
                h.betti == 0 && h.torsion.is_empty()
            });
            Ok((rep.passed && acyclic, rep.failure.unwrap_or_else(|| format!("homotopy and acyclicity in interior degrees, acyclic: {}", acyclic))))
        });
        let (ok, detail) = res.unwrap_or_else(|e| (false, e));
        checks.push(check(format!("Inj({}) contracted, q_max 6", r), ok, detail));
    }
    let q_max = b.cosimplicial_q_max;
    let mut bad = Vec::new();
    let mut count = 0;
    for x in manifolds(3) {
        count += 1;
        let t = match configuration_cosimplicial(x, q_max) {
            Ok(t) => t,
            Err(e) => {
                bad.push(format!("{:?}: {}", x, e));
                continue;
            }
        };
        if !complete_part_splits_off(x, &t) {
            bad.push(format!("{:?}: complete part does not split off", x));
        }
        match cosimplicial_chain_complex(&t, |c| c.is_complete(x)) {
            Ok(kc) => {
                let fixed =
                    (0..t.levels[0].len()).filter(|y| t.levels[0][*y].is_complete(x) && t.d(0, 0, *y) == t.d(0, 1, *y)).count();
                let h0 = kc.homology(0);
                if h0.betti != fixed || !h0.torsion.is_empty() {
                    bad.push(format!("{:?}: H_0 = {}, expected Z^{}", x, h0, fixed));
                }
                for q in 1..q_max {
                    let h = kc.homology(-(q as i64));
                    if h.betti != 0 || !h.torsion.is_empty() {
                        bad.push(format!("{:?}: H_-{} = {}", x, q, h));
                    }
                }
            }
            Err(e) => bad.push(format!("{:?}: {}", x, e)),
        }
    }
    checks.push(check(
        format!("K_c homology concentrated in degree 0, q_max {}", q_max),
        bad.is_empty(),
        if bad.is_empty() { format!("{} manifolds with <= 3 components, five identities checked on assembly", count) } else { bad.join("; ") },
    ));
    let mut bad = Vec::new();
    let mut simplices = 0;
    for x in manifolds(2) {
        match configuration_cosimplicial(x, 4) {
            Ok(t) => match classification_agrees_with_brute_force(&t) {
                Ok(n) => simplices += n,
                Err(e) => bad.push(format!("{:?}: {}", x, e)),
            },
            Err(e) => bad.push(format!("{:?}: {}", x, e)),
        }
    }
    checks.push(check(
        "classify_simplex agrees with brute force, q <= 4",
        bad.is_empty(),
        if bad.is_empty() { format!("{} simplices", simplices) } else { bad.join("; ") },
    ));
    suite("cosimplicial", checks)
}

fn sullivan_suite(seed: u64, b: &Bounds) -> SuiteResult {
    let mut checks = Vec::new();
    for g in 1..=b.g_max {
        for (name, rep) in [("mu", sullivan::mu_g_representative(g)), ("t", sullivan::t_g_representative(g))] {
            let res = rep.map_err(|e| e.to_string()).and_then(|og| face_report(&og).map_err(|e| e.to_string()));
            let (ok, detail) = match res {
                Ok(f) => (
                    f.degree == 2 * g as i64 + 1 && f.cycle && f.even && f.paired,
                    format!("degree {}, {} faces, paired {}, cycle {}", f.degree, f.faces, f.paired, f.cycle),
                ),
                Err(e) => (false, e),
            };
            checks.push(check(format!("{}_{} is a cycle of degree {}", name, g, 2 * g + 1), ok, detail));
        }
    }
    let mut rng = rng_for(seed, 2);
    let mut bad = None;
    let mut nonzero = 0;
    for i in 0..50 {
        let circles = rng.gen_range(1..=2);
        let og = random_representative(&mut rng, circles, 8);
        let res = sullivan::normalize(&[(og.clone(), 1)])
            .and_then(|x| sd_differential(&x))
            .and_then(|dx| Ok((dx.is_empty(), sd_differential(&dx)?.is_empty())));
        match res {
            Ok((zero, ok)) => {
                nonzero += usize::from(!zero);
                if !ok && bad.is_none() {
                    bad = Some(format!("sample {}: {:?}", i, og));
                }
            }
            Err(e) => {
                bad.get_or_insert(format!("sample {}: {}", i, e));
            }
        }
    }
    checks.push(check(
        "d^2 = 0 on random Sullivan diagrams",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("50 samples, <= 2 circles, <= 8 spokes, {} with nonzero d", nonzero)),
    ));
    suite("sullivan", checks)
}

fn tqft_suite(b: &Bounds) -> SuiteResult {
    let mut checks = Vec::new();
    for (i, alg) in built_ins().iter().enumerate() {
        let g_max = if i == 0 { b.g_max } else { b.g_max.min(3) };
        match homology_action_report(alg, g_max) {
            Ok(rep) => {
                for e in &rep.entries {
                    let ok = e.expected_shape && e.class.nonzero_over_z && e.class.nonzero_over_q;
                    let arg = if e.family == "t" { "x".to_string() } else { format!("x^(x){}", e.g + 1) };
                    checks.push(check(
                        format!("{}_{}({}) over {}", e.family, e.g, arg, alg.name),
                        ok,
                        format!(
                            "coefficient {} on 1(x)x^(x){}, nonzero over Z {}, over Q {}",
                            e.coefficient,
                            2 * e.g + 1,
                            e.class.nonzero_over_z,
                            e.class.nonzero_over_q
                        ),
                    ));
                }
            }
            Err(e) => checks.push(check(format!("action on {}", alg.name), false, e.to_string())),
        }
    }
    suite("tqft_action", checks)
}

fn random_nat_element(rng: &mut ChaCha8Rng, nat: &NatTruncation) -> NatElement {
    let dim = nat.algebra.dim();
    let mut g = NatElement::new();
    for j in 1..=nat.j_max {
        for _ in 0..rng.gen_range(0..4) {
            let w = (0..j).map(|_| rng.gen_range(0..dim)).collect();
            let k = rng.gen_range(1..=nat.k_max);
            let u = (0..k).map(|_| rng.gen_range(0..dim)).collect();
            add_entry(&mut g, w, u, rng.gen_range(-2..3));
        }
    }
    normalize(&g)
}

fn formal_ops_suite(seed: u64, b: &Bounds) -> SuiteResult {
    let mut checks = Vec::new();
    let mut rng = rng_for(seed, 3);
    for alg in [builtin_dual_numbers(), builtin_sphere_cohomology(3).expect("n >= 2")] {
        let name = alg.name.clone();
        let (ok, detail) = match NatTruncation::new(alg, 4, 4) {
            Ok(nat) => {
                let mut bad = None;
                for i in 0..20 {
                    let g = random_nat_element(&mut rng, &nat);
                    if !nat.differential(&nat.differential(&g)).is_empty() && bad.is_none() {
                        bad = Some(format!("sample {}", i));
                    }
                }
                (bad.is_none(), bad.unwrap_or_else(|| "20 random elements".into()))
            }
            Err(e) => (false, e.to_string()),
        };
        checks.push(check(format!("d^2 = 0 on Nat truncation J=K=4 for {}", name), ok, detail));
    }
    for alg in built_ins() {
        let (ok, detail) = match verify_cap_embedding(&alg, b.q_max, b.j_max, b.k_max) {
            Ok(r) => (
                r.passed,
                r.first_failure.clone().or(r.cap_identity.first_failure.clone()).unwrap_or_else(|| {
                    format!("{} cochains, cap identity on {} pairs", r.cochains_checked, r.cap_identity.pairs_checked)
                }),
            ),
            Err(e) => (false, e.to_string()),
        };
        checks.push(check(format!("F(dD) = d(F(D)) for {} (q_max {}, J {}, K {})", alg.name, b.q_max, b.j_max, b.k_max), ok, detail));
    }
    suite("formal_ops", checks)
}

/// Runs every suite in order. Fails fast only on invalid bounds.
pub fn verify_all(config: &RunConfig) -> Result<Report, String> {
    let b = &config.bounds;
    b.validate()?;
    let suites = vec![
        graph_core_suite(config.seed),
        ainfty_suite(),
        algebra_suite(),
        hochschild_suite(b),
        unit_homotopy_suite(),
        cosimplicial_suite(b),
        sullivan_suite(config.seed, b),
        tqft_suite(b),
        formal_ops_suite(config.seed, b),
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        bounds: *b,
        conventions: conventions(),
        suites,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_bounds_are_rejected() {
        let mut b = Bounds::default();
        b.g_max = 0;
        assert!(verify_all(&RunConfig { seed: 1, bounds: b }).is_err());
        let b = Bounds { j_max: 3, ..Bounds::default() };
        assert!(b.validate().is_err());
    }

    #[test]
    fn unit_homotopy_suite_reports_the_literal_identity() {
        let s = unit_homotopy_suite();
        assert!(s.passed);
        let a3 = s.checks.iter().find(|c| c.name.starts_with("A_3")).unwrap();
        assert!(a3.detail.contains("literal sd+ds=id: false"));
    }

    #[test]
    fn mk_graph_has_expected_shape() {
        let g = mk_graph(3);
        assert_eq!(g.graph.vertices.len(), 1);
        assert_eq!(g.graph.half_edges.len(), 4);
        assert_eq!(g.degree(), 1);
    }

    #[test]
    fn small_run_is_deterministic_per_seed() {
        let bounds = Bounds { n_max: 5, g_max: 1, j_max: 4, k_max: 4, q_max: 2, cosimplicial_q_max: 3 };
        let a = verify_all(&RunConfig { seed: 5, bounds }).unwrap();
        let b = verify_all(&RunConfig { seed: 5, bounds }).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.passed, "{}", a.to_text());
        assert!(a.to_text().contains("seed 5"));
    }
}
