use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hepta::ansatz::default_vandermonde;
use hepta::numlab::system::to_matrices;
use hepta::numlab::ansatz_point;
use hepta::scalars::FieldConfig;
use serde_json::{json, Value};

fn hepta(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hepta"))
        .current_dir(dir)
        .args(args)
        .env_remove("HEPTA_THREADS")
        .output()
        .expect("spawn hepta")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn gen_params_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&hepta(d, &["gen-params", "--mode", "vandermonde", "--n", "7", "--field", "rational", "-o", "v.json"])), 0);
    let out = hepta(d, &["verify", "heptagon", "--params", "v.json", "-o", "rep.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = read_json(d.join("rep.json"));
    assert_eq!(rep["schema"], "hepta.verify/1");
    assert_eq!(rep["report"]["equal"], true);
    assert_eq!(rep["report"]["max_discrepancy"], "0");

    assert_eq!(code(&hepta(d, &["gen-params", "--mode", "random", "--n", "5", "--seed", "3", "-o", "r5.json"])), 0);
    assert_eq!(code(&hepta(d, &["verify", "pentagon", "--params", "r5.json"])), 0);
    // Wrong vertex count for the move is a usage error.
    assert_eq!(code(&hepta(d, &["verify", "pentagon", "--params", "v.json"])), 2);
}

#[test]
fn random_params_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["a.json", "b.json"] {
        assert_eq!(code(&hepta(d, &["gen-params", "--mode", "random", "--seed", "42", "-o", name])), 0);
    }
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&hepta(d, &["gen-params", "--mode", "random", "--field", "prime:6"])), 2);
    assert_eq!(code(&hepta(d, &["gen-params", "--mode", "random", "--n", "6"])), 2);
    assert_eq!(code(&hepta(d, &["gen-params"])), 2);
    assert_eq!(code(&hepta(d, &["edge-vectors", "--params", "missing.json"])), 2);
    assert_eq!(code(&hepta(d, &["solve-lm", "--runs", "0"])), 2);
    assert_eq!(code(&hepta(d, &["--threads", "0", "solve-lm", "--runs", "1"])), 2);
    std::fs::write(d.join("bad.json"), "{\"runs\": [").unwrap();
    let out = hepta(d, &["analyze", "bad.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));
}

#[test]
fn duplicated_triples_fail_with_vanishing_determinants() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let t: Vec<Vec<&str>> = vec![
        vec!["1", "2", "3"],
        vec!["1", "2", "3"],
        vec!["0", "1", "5"],
        vec!["2", "7", "1"],
        vec!["3", "1", "4"],
        vec!["5", "9", "2"],
        vec!["6", "5", "3"],
    ];
    let params = json!({ "field": { "kind": "rational" }, "n": 7, "mode": "explicit", "triples": t });
    std::fs::write(d.join("dup.json"), params.to_string()).unwrap();
    assert_eq!(code(&hepta(d, &["verify", "heptagon", "--params", "dup.json", "-o", "rep.json"])), 1);
    let rep = read_json(d.join("rep.json"));
    let zeros = rep["report"]["vanishing_determinants"].as_array().unwrap();
    assert!(zeros.iter().any(|z| z == "d123"));
}

#[test]
fn edge_vector_checks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    hepta(d, &["gen-params", "--mode", "vandermonde", "-o", "v.json"]);
    assert_eq!(code(&hepta(d, &["edge-vectors", "--params", "v.json", "--checks", "reconstruct", "-o", "ev.json"])), 0);
    let ev = read_json(d.join("ev.json"));
    assert_eq!(ev["results"].as_array().unwrap().len(), 7);
    assert_eq!(ev["edge_vectors"]["47"]["12"], "180");
    assert!(ev["edge_vectors"]["47"].get("14").is_none());
}

#[test]
fn solve_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = hepta(d, &["--threads", "2", "solve-lm", "--runs", "4", "--seed", "7", "-o", "s1.json"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("converged 4/4"));
    assert_eq!(code(&hepta(d, &["solve-lm", "--runs", "4", "--seed", "7", "-o", "s2.json"])), 0);
    assert_eq!(std::fs::read(d.join("s1.json")).unwrap(), std::fs::read(d.join("s2.json")).unwrap());

    assert_eq!(code(&hepta(d, &["analyze", "s1.json", "-o", "a.json"])), 0);
    let a = read_json(d.join("a.json"));
    assert_eq!(a["schema"], "hepta.analysis/1");
    assert_eq!(a["aggregate"]["runs_analyzed"], 4);
    assert_eq!(a["config"]["svd_tol"], 1e-8);

    // One iteration never converges: solve-lm fails and analyze has nothing to do.
    assert_eq!(code(&hepta(d, &["solve-lm", "--runs", "2", "--max-iter", "1", "-o", "none.json"])), 1);
    assert_eq!(code(&hepta(d, &["analyze", "none.json"])), 1);
}

#[test]
fn analyze_detects_structure_in_the_ansatz() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
    let ms = to_matrices(&ansatz_point(&ps).unwrap());
    let doc = json!({
        "schema": "hepta.solutions/1",
        "runs": [{ "seed": 0, "iterations": 0, "residual": 0.0, "converged": true, "matrices": ms }],
    });
    std::fs::write(d.join("ansatz.json"), doc.to_string()).unwrap();
    assert_eq!(code(&hepta(d, &["analyze", "ansatz.json", "-o", "a.json"])), 0);
    let a = read_json(d.join("a.json"));
    assert_eq!(a["aggregate"]["all_properties"], 1.0);
    assert_eq!(a["runs"][0]["global_rank"], 6);
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hepta"))
        .current_dir(dir.path())
        .args(["solve-lm", "--runs", "2", "-o", "s.json"])
        .env("HEPTA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let bad = Command::new(env!("CARGO_BIN_EXE_hepta"))
        .current_dir(dir.path())
        .args(["solve-lm", "--runs", "2"])
        .env("HEPTA_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}
