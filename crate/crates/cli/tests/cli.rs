use serde_json::Value;
use std::process::{Command, Output};

fn strop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strop")).args(args).env_remove("STROP_SEED").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_all_is_deterministic_and_passes() {
    let a = strop(&["verify-all", "--format", "json", "--seed", "42"]);
    let b = strop(&["verify-all", "--format", "json", "--seed", "42", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["bounds"]["g_max"], 4);
    assert!(v["conventions"]["orientation"].is_string());
    let tqft = v["suites"].as_array().unwrap().iter().find(|s| s["name"] == "tqft_action").unwrap();
    assert!(tqft["checks"].as_array().unwrap().iter().any(|c| c["name"].as_str().unwrap().starts_with("t_4(x)")));
}

#[test]
fn suites_run_in_the_documented_order() {
    let v = json(&strop(&["verify-all", "--format", "json", "--gmax", "2"]));
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        ["graph_core", "ainfty", "algebra", "hochschild", "unit_homotopies", "cosimplicial", "sullivan", "tqft_action", "formal_ops"]
    );
}

#[test]
fn environment_overrides_default_bounds() {
    let out = Command::new(env!("CARGO_BIN_EXE_strop"))
        .args(["verify-all", "--format", "json"])
        .env("STROP_GMAX", "2")
        .env("STROP_SEED", "7")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["bounds"]["g_max"], 2);
    assert_eq!(v["seed"], 7);
}

#[test]
fn export_mu_1_structure() {
    let v = json(&strop(&["export", "mu:1"]));
    let g = &v["graph"];
    let vertices = g["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 1);
    assert_eq!(vertices[0]["color"], "white");
    let hs = g["half_edges"].as_array().unwrap();
    assert_eq!(hs.len(), 4);
    // spokes 1 and 3 are joined, spokes 2 and 4 carry leaves 1 and 2
    assert_eq!(hs[0]["partner"], 2);
    assert_eq!(hs[2]["partner"], 0);
    assert_eq!(hs[1]["leaf_label"], 1);
    assert_eq!(hs[3]["leaf_label"], 2);
    let circle = v["classical"]["circles"][0].as_array().unwrap();
    assert_eq!(circle.len(), 4);
    assert_eq!(v["classical"]["chords"].as_array().unwrap().len(), 1);
}

#[test]
fn export_l_3_structure_and_dot() {
    let v = json(&strop(&["export", "l:3"]));
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 1);
    let leaves = v["graph"]["half_edges"].as_array().unwrap().iter().filter(|h| h["leaf_label"].is_number()).count();
    assert_eq!(leaves, 3);
    let dot = strop(&["export", "l:3", "--dot"]);
    assert_eq!(dot.status.code(), Some(0));
    assert!(String::from_utf8(dot.stdout).unwrap().contains("graph"));
}

#[test]
fn export_import_round_trip() {
    for id in ["m:3", "l:4", "mu:2", "tg:2"] {
        let out = strop(&["export", id]);
        let path = std::env::temp_dir().join(format!("strop-roundtrip-{}-{}.json", std::process::id(), id.replace(':', "-")));
        std::fs::write(&path, &out.stdout).unwrap();
        let back = strop(&["import", path.to_str().unwrap()]);
        std::fs::remove_file(&path).ok();
        assert_eq!(back.status.code(), Some(0), "{}", String::from_utf8_lossy(&back.stderr));
        assert_eq!(json(&back)["graph"], json(&out)["graph"], "{}", id);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(strop(&["export", "zz:1"]).status.code(), Some(2));
    assert_eq!(strop(&["export", "m:1"]).status.code(), Some(2));
    assert_eq!(strop(&["hochschild", "--algebra", "sphere:1"]).status.code(), Some(2));
    assert_eq!(strop(&["hochschild", "--algebra", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(strop(&["verify-all", "--nmax", "0"]).status.code(), Some(2));
    assert_eq!(strop(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(strop(&["natcheck", "--qmax", "2", "--J", "4", "--K", "4"]).status.code(), Some(0));
}

#[test]
fn hochschild_table_of_dual_numbers() {
    let out = strop(&["hochschild", "--nmax", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("H_0 = Z^2"), "{}", text);
    assert!(text.contains("H_1 = Z + Z/2"), "{}", text);
    let q = json(&strop(&["hochschild", "--nmax", "6", "--coeff", "q", "--format", "json"]));
    assert_eq!(q["homology"][1]["homology"], "Q");
}

#[test]
fn act_on_t_2() {
    let v = json(&strop(&["act", "--diagram", "tg:2", "--format", "json"]));
    assert_eq!(v["reduced_output"], serde_json::json!([["1⊗x⊗x⊗x⊗x⊗x", 1]]));
    assert_eq!(v["classes"][0]["degree"], 5);
    assert_eq!(v["classes"][0]["class"]["nonzero_over_z"], true);
    assert_eq!(strop(&["act", "--diagram", "mu:1", "--input", "x,x,x"]).status.code(), Some(2));
}

#[test]
fn cosimplicial_circle() {
    let v = json(&strop(&["cosimplicial", "--circles", "1", "--qmax", "4", "--format", "json"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["K_c_concentrated"], true);
}
