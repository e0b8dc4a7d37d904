//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! The process exits nonzero when a criterion fails that is not listed in
//! `KNOWN_FAILURES`; a listed criterion still prints FAIL with its analysis.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use strop_core::ainfty::{self, all_forests, verify_m3_identity};
use strop_core::algebra::{builtin_dual_numbers, builtin_sphere_cohomology, FrobeniusAlgebra};
use strop_core::chain_complex::HomologyGroup;
use strop_core::cosimplicial::{
    classification_agrees_with_brute_force, complete_part_splits_off, configuration_cosimplicial, cosimplicial_chain_complex,
    inj_complex, OneManifold,
};
use strop_core::formal_ops::{add_entry, normalize, verify_cap_embedding, NatElement, NatTruncation};
use strop_core::graph_core::{blowups, differential, random_bw_graph};
use strop_core::hochschild::{build_hochschild, verify_cap_identity, verify_unit_homotopies, HochschildSpec};
use strop_core::report::{verify_all, RunConfig};
use strop_core::sullivan::{self, face_report, is_cycle, random_representative, sd_differential};
use strop_core::tqft_action::homology_action_report;

/// Criteria that fail for a reason recorded in the analysis below.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    9,
    "with s(x) = (-1)^|x| u_r(x) as written, sd+ds on A_r equals (-1)^r id, so A_3 gives -id; \
     the quotient is still contracted (by -s), and B^r satisfies the identity literally for r = 2..4",
)];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn built_ins() -> Vec<FrobeniusAlgebra> {
    vec![builtin_dual_numbers(), builtin_sphere_cohomology(2).unwrap(), builtin_sphere_cohomology(3).unwrap()]
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed < budget
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let r = verify_m3_identity();
    let el = t.elapsed();
    outcome(r.passed && within(el, Duration::from_secs(1)), format!("{} terms per side, {:?}", r.lhs_terms, el))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut fails = Vec::new();
    let mut forests = 0;
    for n in 1..=6 {
        for m in 1..=n {
            for f in all_forests(n, m) {
                forests += 1;
                if !ainfty::differential(&ainfty::differential(&f)).is_empty() {
                    fails.push(format!("forest {}->{}", n, m));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..50 {
        let g = random_bw_graph(&mut rng, 4);
        if !differential(&blowups(&g)).is_empty() {
            fails.push(format!("BW sample {}", i));
        }
    }
    for i in 0..50 {
        let circles = rng.gen_range(1..=2);
        let og = random_representative(&mut rng, circles, 8);
        let dx = sd_differential(&sullivan::normalize(&[(og, 1)]).unwrap()).unwrap();
        if !sd_differential(&dx).unwrap().is_empty() {
            fails.push(format!("SD sample {}", i));
        }
    }
    for alg in built_ins() {
        for reduced in [false, true] {
            if let Err(e) = build_hochschild(&HochschildSpec::new(alg.clone(), 8, reduced)) {
                fails.push(format!("C_*({}) reduced={}: {}", alg.name, reduced, e));
            }
        }
    }
    for alg in [builtin_dual_numbers(), builtin_sphere_cohomology(3).unwrap()] {
        let nat = NatTruncation::new(alg.clone(), 4, 4).unwrap();
        let dim = alg.dim();
        for i in 0..20 {
            let mut g = NatElement::new();
            for j in 1..=4 {
                for _ in 0..3 {
                    let w = (0..j).map(|_| rng.gen_range(0..dim)).collect();
                    let k = rng.gen_range(1..=4);
                    let u = (0..k).map(|_| rng.gen_range(0..dim)).collect();
                    add_entry(&mut g, w, u, rng.gen_range(-2..3));
                }
            }
            let g = normalize(&g);
            if !nat.differential(&nat.differential(&g)).is_empty() {
                fails.push(format!("Nat {} sample {}", alg.name, i));
            }
        }
    }
    let el = t.elapsed();
    outcome(
        fails.is_empty() && within(el, Duration::from_secs(30)),
        if fails.is_empty() { format!("{} forests, 50 BW, 50 SD, 6 Hochschild, 40 Nat, {:?}", forests, el) } else { fails.join("; ") },
    )
}

fn criterion_3() -> Outcome {
    let dual = builtin_dual_numbers();
    let h = build_hochschild(&HochschildSpec::new(dual.clone(), 8, true)).unwrap();
    let bumped = build_hochschild(&HochschildSpec::new(dual, 9, true)).unwrap();
    let z = |b| HomologyGroup { betti: b, torsion: vec![] };
    let z_z2 = HomologyGroup { betti: 1, torsion: vec![BigInt::from(2)] };
    let expected = [z(2), z_z2.clone(), z(1), z_z2.clone(), z(1), z_z2, z(1)];
    let mut ok = true;
    let mut table = Vec::new();
    for (d, e) in expected.iter().enumerate() {
        let got = h.homology(d as i64);
        ok &= got == *e && bumped.homology(d as i64) == got;
        table.push(format!("H_{}={}", d, got));
    }
    outcome(ok, table.join(" "))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for g in 1..=4 {
        for (name, rep, diag) in [
            ("mu", sullivan::mu_g_representative(g).unwrap(), sullivan::mu_g(g).unwrap()),
            ("t", sullivan::t_g_representative(g).unwrap(), sullivan::t_g(g).unwrap()),
        ] {
            let f = face_report(&rep).unwrap();
            let good = f.degree == 2 * g as i64 + 1 && f.even && f.paired && f.cycle && is_cycle(&diag).unwrap();
            ok &= good;
            notes.push(format!("{}_{}:{}faces", name, g, f.faces));
        }
    }
    let el = t.elapsed();
    outcome(ok && within(el, Duration::from_secs(10)), format!("{} {:?}", notes.join(" "), el))
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (i, alg) in built_ins().iter().enumerate() {
        let g_max = if i == 0 { 4 } else { 3 };
        let rep = homology_action_report(alg, g_max).unwrap();
        for e in rep.entries.iter().filter(|e| e.family == "t") {
            // over the dual numbers the value is exactly 1⊗x^(2g+1)
            let sign_ok = i > 0 || e.coefficient == 1;
            ok &= e.expected_shape && sign_ok && e.class.nonzero_over_z && e.class.nonzero_over_q;
        }
        notes.push(format!("{} g<={}", alg.name, g_max));
    }
    outcome(ok, notes.join(", "))
}

fn criterion_6() -> Outcome {
    let rep = homology_action_report(&builtin_dual_numbers(), 3).unwrap();
    let mu: Vec<_> = rep.entries.iter().filter(|e| e.family == "mu").collect();
    let ok = mu.len() == 3 && mu.iter().all(|e| e.class.is_cycle && e.class.nonzero_over_z && e.class.nonzero_over_q);
    outcome(ok, mu.iter().map(|e| format!("mu_{} in HH_{}", e.g, e.degree)).collect::<Vec<_>>().join(", "))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for alg in built_ins() {
        let cap = verify_cap_identity(&alg, 4, 3).unwrap();
        let prop = verify_cap_embedding(&alg, 3, 6, 6).unwrap();
        ok &= cap.passed && prop.passed;
        notes.push(format!("{}: {} pairs, {} cochains", alg.name, cap.pairs_checked, prop.cochains_checked));
        if let Some(f) = prop.first_failure.or(cap.first_failure) {
            notes.push(f);
        }
    }
    outcome(ok, notes.join("; "))
}

fn manifolds(max: usize) -> Vec<OneManifold> {
    (0..=max)
        .flat_map(|c| (0..=max - c).map(move |i| OneManifold { circles: c, intervals: i }))
        .filter(|x| x.components() > 0)
        .collect()
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut fails = Vec::new();
    for r in 0..=2 {
        let c = inj_complex(r, 6).unwrap();
        if !c.verify().unwrap().passed {
            fails.push(format!("Inj({}) homotopy", r));
        }
    }
    for x in manifolds(3) {
        // assembly checks the five cosimplicial identities
        let t5 = configuration_cosimplicial(x, 5).unwrap();
        let kc = cosimplicial_chain_complex(&t5, |c| c.is_complete(x)).unwrap();
        let fixed = (0..t5.levels[0].len()).filter(|y| t5.levels[0][*y].is_complete(x) && t5.d(0, 0, *y) == t5.d(0, 1, *y)).count();
        let h0 = kc.homology(0);
        let higher_zero = (1..5).all(|q| {
            let h = kc.homology(-q);
            h.betti == 0 && h.torsion.is_empty()
        });
        if h0.betti != fixed || !h0.torsion.is_empty() || !higher_zero || !complete_part_splits_off(x, &t5) {
            fails.push(format!("K_c of {:?}", x));
        }
    }
    for x in manifolds(2) {
        let t4 = configuration_cosimplicial(x, 4).unwrap();
        if let Err(e) = classification_agrees_with_brute_force(&t4) {
            fails.push(e);
        }
    }
    let el = t.elapsed();
    outcome(fails.is_empty() && within(el, Duration::from_secs(60)), if fails.is_empty() { format!("{:?}", el) } else { fails.join("; ") })
}

fn criterion_9() -> Outcome {
    let alg = builtin_dual_numbers();
    let mut ok = true;
    let mut notes = Vec::new();
    for r in 2..=4 {
        let rep = verify_unit_homotopies(&alg, r, 6).unwrap();
        ok &= rep.passed();
        notes.push(format!(
            "r={}: A_r {} ({} elts), B^r {} ({} elts)",
            r,
            if rep.a_r.passed { "id" } else if rep.a_r.negated_identity { "-id" } else { "fail" },
            rep.a_r.checked,
            if rep.b_r.passed { "id" } else if rep.b_r.negated_identity { "-id" } else { "fail" },
            rep.b_r.checked
        ));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_10() -> Outcome {
    let config = RunConfig { seed: 42, ..RunConfig::default() };
    let a = verify_all(&config).unwrap();
    let b = verify_all(&config).unwrap();
    let same = a.to_json() == b.to_json() && a.to_text() == b.to_text();
    outcome(same && a.passed, format!("{} bytes of JSON, report passed {}", a.to_json().len(), a.passed))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        let o = f();
        println!("criterion {}: {} ({})", n, if o.passed { "PASS" } else { "FAIL" }, o.detail);
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n);
        match (o.passed, known) {
            (false, Some((_, why))) => println!("  known failure: {}", why),
            (false, None) => unexpected.push(n),
            (true, Some(_)) => println!("  listed as a known failure but passed; update KNOWN_FAILURES"),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {:?}", unexpected);
        std::process::exit(1);
    }
}
