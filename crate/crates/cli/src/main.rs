//! `strop`: verification suites, homology tables, evaluation and export.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::process::ExitCode;
use strop_core::ainfty;
use strop_core::algebra::{builtin_dual_numbers, builtin_sphere_cohomology, FrobeniusAlgebra, Tensor, Word};
use strop_core::chain_complex::{ClassReport, FreeChainComplex, HomologyGroup};
use strop_core::cosimplicial::{configuration_cosimplicial, cosimplicial_chain_complex, inj_complex, OneManifold};
use strop_core::formal_ops::verify_cap_embedding;
use strop_core::graph_core::{from_json, to_dot, to_json, GraphJson, OrientedGraph};
use strop_core::hochschild::{build_hochschild, HochschildSpec};
use strop_core::report::{mk_graph, verify_all, Bounds, RunConfig};
use strop_core::sullivan::{self, classical, from_bw, SullivanDiagram};
use strop_core::tqft_action::{evaluate, reduce, word_name, LabeledDiagram};

#[derive(Parser, Debug)]
#[command(name = "strop", version, about = "Exact checks on fat graphs, Sullivan diagrams and Hochschild complexes")]
#[command(args_override_self = true)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text, env = "STROP_FORMAT")]
    format: Format,
    /// Seed for the randomized suites
    #[arg(long, global = true, default_value_t = 0, env = "STROP_SEED")]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Coeff {
    Z,
    Q,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every verification suite
    VerifyAll {
        #[arg(long, default_value_t = 8, env = "STROP_NMAX")]
        nmax: usize,
        #[arg(long, default_value_t = 3, env = "STROP_QMAX")]
        qmax: usize,
        #[arg(long = "J", default_value_t = 6, env = "STROP_J")]
        j: usize,
        #[arg(long = "K", default_value_t = 6, env = "STROP_K")]
        k: usize,
        #[arg(long, default_value_t = 4, env = "STROP_GMAX")]
        gmax: usize,
        #[arg(long, default_value_t = 5, env = "STROP_COSIMPLICIAL_QMAX")]
        cosimplicial_qmax: usize,
    },
    /// Homology table of a Hochschild complex
    Hochschild {
        /// dual, sphere:N, or a path to an algebra JSON file
        #[arg(long, default_value = "dual")]
        algebra: String,
        #[arg(long, default_value_t = 8, env = "STROP_NMAX")]
        nmax: usize,
        /// Use the full complex instead of the reduced one
        #[arg(long)]
        unreduced: bool,
        #[arg(long, value_enum, default_value_t = Coeff::Z)]
        coeff: Coeff,
    },
    /// Homology of the configuration complexes K and K_c, and the Inj check
    Cosimplicial {
        #[arg(long, default_value_t = 1)]
        circles: usize,
        #[arg(long, default_value_t = 0)]
        intervals: usize,
        #[arg(long, default_value_t = 5, env = "STROP_COSIMPLICIAL_QMAX")]
        qmax: usize,
    },
    /// Evaluate a diagram on algebra inputs
    Act {
        /// tg:G, mu:G or l:N
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value = "dual")]
        algebra: String,
        /// Basis name for every leaf, or a comma separated list, one per leaf
        #[arg(long, default_value = "x")]
        input: String,
    },
    /// Check F(dD) = d(F(D)) in the truncated formal operations
    Natcheck {
        #[arg(long, default_value = "dual")]
        algebra: String,
        #[arg(long, default_value_t = 3, env = "STROP_QMAX")]
        qmax: usize,
        #[arg(long = "J", default_value_t = 6, env = "STROP_J")]
        j: usize,
        #[arg(long = "K", default_value_t = 6, env = "STROP_K")]
        k: usize,
    },
    /// Emit a built-in graph: m:K, l:N, mu:G or tg:G
    Export {
        id: String,
        /// Emit DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Read a graph JSON file, validate it and emit it again
    Import { path: String },
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

fn load_algebra(src: &str) -> Result<FrobeniusAlgebra> {
    let alg = match src {
        "dual" | "dual_numbers" => builtin_dual_numbers(),
        s if s.starts_with("sphere:") => {
            let n: i64 = s[7..].parse().map_err(|_| usage(format!("bad sphere dimension in {}", s)))?;
            builtin_sphere_cohomology(n).map_err(|e| usage(e.to_string()))?
        }
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read algebra {}: {}", path, e)))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("invalid algebra JSON {}: {}", path, e)))?
        }
    };
    alg.verify().map_err(|e| usage(format!("algebra {} fails the Frobenius axioms: {}", alg.name, e)))?;
    Ok(alg)
}

fn parse_id(id: &str) -> Result<(&str, usize)> {
    let (kind, n) = id.split_once(':').ok_or_else(|| usage(format!("unknown object id {}", id)))?;
    let n: usize = n.parse().map_err(|_| usage(format!("bad index in {}", id)))?;
    Ok((kind, n))
}

/// The graph named by an id, and its Sullivan diagram when it has one.
fn builtin_graph(id: &str) -> Result<(OrientedGraph, Option<SullivanDiagram>)> {
    let (kind, n) = parse_id(id)?;
    let bad = |e: String| usage(format!("{}: {}", id, e));
    let og = match kind {
        "m" if n >= 2 => return Ok((mk_graph(n), None)),
        "l" if n >= 1 => ainfty::ln(n),
        "mu" => sullivan::mu_g_representative(n).map_err(|e| bad(e.to_string()))?,
        "tg" | "t" => sullivan::t_g_representative(n).map_err(|e| bad(e.to_string()))?,
        _ => bail!(usage(format!("unknown object id {}", id))),
    };
    let sd = from_bw(&og).map_err(|e| bad(e.to_string()))?;
    Ok((og, sd))
}

fn print(format: Format, value: &Value, text: String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json")),
        Format::Text => print!("{}", text),
    }
}

fn homology_text(h: &HomologyGroup, coeff: Coeff) -> String {
    match coeff {
        Coeff::Z => h.to_string(),
        Coeff::Q if h.betti == 0 => "0".into(),
        Coeff::Q if h.betti == 1 => "Q".into(),
        Coeff::Q => format!("Q^{}", h.betti),
    }
}

fn homology_table<K: Ord + Clone + std::fmt::Debug>(c: &FreeChainComplex<K>, coeff: Coeff) -> Vec<(i64, usize, String)> {
    c.degrees().into_iter().map(|d| (d, c.rank(d), homology_text(&c.homology(d), coeff))).collect()
}

fn run(cli: Cli) -> Result<bool> {
    let fmt = cli.format;
    match cli.command {
        Command::VerifyAll { nmax, qmax, j, k, gmax, cosimplicial_qmax } => {
            let bounds = Bounds { n_max: nmax, q_max: qmax, j_max: j, k_max: k, g_max: gmax, cosimplicial_q_max: cosimplicial_qmax };
            let report = verify_all(&RunConfig { seed: cli.seed, bounds }).map_err(usage)?;
            match fmt {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(report.passed)
        }
        Command::Hochschild { algebra, nmax, unreduced, coeff } => {
            if nmax == 0 {
                bail!(usage("nmax must be positive"));
            }
            let alg = load_algebra(&algebra)?;
            let cx = build_hochschild(&HochschildSpec::new(alg.clone(), nmax, !unreduced)).context("building the complex")?;
            let table = homology_table(&cx.complex, coeff);
            let value = json!({
                "algebra": alg.name, "n_max": nmax, "reduced": !unreduced,
                "coefficients": format!("{:?}", coeff),
                "homology": table.iter().map(|(d, r, h)| json!({"degree": d, "rank": r, "homology": h})).collect::<Vec<_>>(),
            });
            let mut text = format!("HH_*({}) {}, n_max {}, coefficients {:?}\n", alg.name, if unreduced { "unreduced" } else { "reduced" }, nmax, coeff);
            for (d, r, h) in &table {
                text += &format!("  H_{} = {}   (rank of chains {})\n", d, h, r);
            }
            print(fmt, &value, text);
            Ok(true)
        }
        Command::Cosimplicial { circles, intervals, qmax } => {
            let x = OneManifold { circles, intervals };
            if x.components() == 0 || qmax == 0 {
                bail!(usage("need at least one component and qmax > 0"));
            }
            let t = configuration_cosimplicial(x, qmax).context("building K(q+1, X)")?;
            let k = cosimplicial_chain_complex(&t, |_| true)?;
            let kc = cosimplicial_chain_complex(&t, |c| c.is_complete(x))?;
            let fixed =
                (0..t.levels[0].len()).filter(|y| t.levels[0][*y].is_complete(x) && t.d(0, 0, *y) == t.d(0, 1, *y)).count();
            let kc_ok = kc.homology(0).betti == fixed
                && kc.degrees().iter().all(|d| *d == 0 || *d == -(qmax as i64) || kc.homology(*d) == HomologyGroup { betti: 0, torsion: vec![] });
            let mut inj = Vec::new();
            for r in 0..=2 {
                let c = inj_complex(r, qmax.max(2))?;
                inj.push((r, c.verify()?.passed));
            }
            let passed = kc_ok && inj.iter().all(|(_, p)| *p);
            let tk = homology_table(&k, Coeff::Z);
            let tkc = homology_table(&kc, Coeff::Z);
            let value = json!({
                "manifold": {"circles": circles, "intervals": intervals}, "q_max": qmax,
                "K": tk.iter().map(|(d, r, h)| json!({"degree": d, "rank": r, "homology": h})).collect::<Vec<_>>(),
                "K_c": tkc.iter().map(|(d, r, h)| json!({"degree": d, "rank": r, "homology": h})).collect::<Vec<_>>(),
                "expected_rank_h0": fixed, "K_c_concentrated": kc_ok,
                "inj_homotopy": inj.iter().map(|(r, p)| json!({"r": r, "passed": p})).collect::<Vec<_>>(),
                "passed": passed,
            });
            let mut text = format!("X = {} circles + {} intervals, q_max {} (top degree is truncated)\n", circles, intervals, qmax);
            for (name, table) in [("K", &tk), ("K_c", &tkc)] {
                for (d, r, h) in table {
                    text += &format!("  {} H_{} = {}   (rank {})\n", name, d, h, r);
                }
            }
            text += &format!("  expected rank of K_c H_0: {}, concentrated: {}\n", fixed, kc_ok);
            for (r, p) in &inj {
                text += &format!("  Inj({}) homotopy: {}\n", r, if *p { "ok" } else { "FAIL" });
            }
            print(fmt, &value, text);
            Ok(passed)
        }
        Command::Act { diagram, algebra, input } => {
            let alg = load_algebra(&algebra)?;
            let (_, sd) = builtin_graph(&diagram)?;
            let Some(sd) = sd else { bail!(usage(format!("{} is not a Sullivan diagram", diagram))) };
            let leaves = sd.graph.leaves().len();
            let names: Vec<&str> = input.split(',').collect();
            let names = if names.len() == 1 { vec![names[0]; leaves] } else { names };
            if names.len() != leaves {
                bail!(usage(format!("{} has {} leaves, got {} inputs", diagram, leaves, names.len())));
            }
            let mut inputs = BTreeMap::new();
            for (i, n) in names.iter().enumerate() {
                let b = alg.basis.iter().position(|x| x == n).ok_or_else(|| usage(format!("unknown basis element {}", n)))?;
                inputs.insert(i as u32 + 1, alg.basis_vec(b));
            }
            let out = reduce(&alg, &evaluate(&alg, &LabeledDiagram { diagram: sd, inputs })?);
            let classes = classify(&alg, &out)?;
            let terms: Vec<(String, i64)> = out.iter().map(|(w, c)| (word_name(&alg, w), *c)).collect();
            let value = json!({
                "diagram": diagram, "algebra": alg.name, "inputs": names, "reduced_output": terms,
                "classes": classes.iter().map(|(d, c)| json!({"degree": d, "class": c})).collect::<Vec<_>>(),
            });
            let mut text = format!("{}({}) over {}\n", diagram, names.join(", "), alg.name);
            if terms.is_empty() {
                text += "  = 0\n";
            }
            for (w, c) in &terms {
                text += &format!("  {:+} {}\n", c, w);
            }
            for (d, c) in &classes {
                text += &format!(
                    "  degree {}: cycle {}, nonzero over Z {}, over Q {}\n",
                    d, c.is_cycle, c.nonzero_over_z, c.nonzero_over_q
                );
            }
            print(fmt, &value, text);
            Ok(true)
        }
        Command::Natcheck { algebra, qmax, j, k } => {
            let alg = load_algebra(&algebra)?;
            if j <= qmax || k == 0 {
                bail!(usage("need J > qmax and K > 0"));
            }
            let r = verify_cap_embedding(&alg, qmax, j, k)?;
            let value = serde_json::to_value(&r)?;
            let mut text = format!(
                "cap embedding for {} (q_max {}, J {}, K {}): {}\n  cochains checked {}, cap identity pairs {}\n",
                r.algebra,
                qmax,
                j,
                k,
                if r.passed { "PASS" } else { "FAIL" },
                r.cochains_checked,
                r.cap_identity.pairs_checked
            );
            if let Some(w) = r.first_failure.as_ref().or(r.cap_identity.first_failure.as_ref()) {
                text += &format!("  witness: {}\n", w);
            }
            print(fmt, &value, text);
            Ok(r.passed)
        }
        Command::Export { id, dot } => {
            let (og, sd) = builtin_graph(&id)?;
            if dot {
                print!("{}", to_dot(&og));
            } else {
                let mut value = json!({"id": id, "graph": to_json(&og)});
                if let Some(sd) = &sd {
                    value["classical"] = serde_json::to_value(classical(sd))?;
                }
                println!("{}", serde_json::to_string_pretty(&value)?);
            }
            Ok(true)
        }
        Command::Import { path } => {
            let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read {}: {}", path, e)))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON: {}", e)))?;
            let graph = v.get("graph").cloned().unwrap_or(v);
            let j: GraphJson = serde_json::from_value(graph).map_err(|e| usage(format!("not a graph: {}", e)))?;
            let og = from_json(&j).map_err(|e| usage(format!("invalid graph: {}", e)))?;
            println!("{}", serde_json::to_string_pretty(&json!({"graph": to_json(&og)}))?);
            Ok(true)
        }
    }
}

/// Classifies each homogeneous part of a reduced output in the reduced
/// Hochschild complex.
fn classify(alg: &FrobeniusAlgebra, out: &Tensor) -> Result<Vec<(i64, ClassReport)>> {
    let Some(longest) = out.keys().map(|w| w.len()).max() else { return Ok(vec![]) };
    let cx = build_hochschild(&HochschildSpec::new(alg.clone(), longest + 1, true))?;
    let mut parts: BTreeMap<i64, Vec<(Word, i64)>> = BTreeMap::new();
    for (w, c) in out {
        parts.entry(cx.degree_of(w)).or_default().push((w.clone(), *c));
    }
    let mut res = Vec::new();
    for (d, combo) in parts {
        let v = cx.complex.vector(d, &combo)?;
        res.push((d, cx.complex.class_of(d, &v)));
    }
    Ok(res)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("usage error: {}", e);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
