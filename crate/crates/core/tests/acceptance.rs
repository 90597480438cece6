//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion fails. Criteria run one after another so timings are not
//! skewed by sibling tests.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hepta::ansatz::{default_vandermonde, det3, generalized_vector, ParameterSet};
use hepta::combinatorics::{all_faces, FaceId, Move};
use hepta::edgevectors::{
    check_permitted, edge_vector, generalized_coloring, global_span_rank, local_span_rank, reconstruct_matrix,
    run_suite, walkthrough, Check,
};
use hepta::numlab::system::to_matrices;
use hepta::numlab::{
    aggregate, analyze, analyze_matrices, ansatz_point, jacobian, multistart, residual, AnalysisOptions, LmOptions,
    UNKNOWNS,
};
use hepta::relations::verify_relation;
use hepta::scalars::{FieldConfig, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIME: FieldConfig = FieldConfig::Prime { p: 10007 };

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn random_sets(field: FieldConfig, n: usize, count: u64, base: u64) -> Vec<ParameterSet> {
    (0..count)
        .map(|k| ParameterSet::random(field, n, base + 1000 * k).unwrap().0)
        .collect()
}

fn exact_relation(mv: Move, limit_s: f64) -> Outcome {
    let n = mv.n_vertices() as usize;
    let start = Instant::now();
    let mut sets = vec![default_vandermonde(FieldConfig::Rational, n).unwrap()];
    sets.extend(random_sets(FieldConfig::Rational, n, 100, 1));
    sets.extend(random_sets(PRIME, n, 100, 2));
    let mut failures = 0;
    for ps in &sets {
        let r = verify_relation(mv, ps).unwrap();
        if !(r.equal && r.max_discrepancy == "0") {
            failures += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        failures == 0 && within(t, limit_s),
        format!("{} sets, {failures} unequal, {:.2}s (limit {limit_s}s)", sets.len(), t.as_secs_f64()),
    )
}

fn c1() -> Outcome {
    exact_relation(Move::Heptagon, 5.0)
}

fn c2() -> Outcome {
    exact_relation(Move::Pentagon, 2.0)
}

/// The explicit A^(7) of the ansatz: rows 17, 27, 37; columns 57, 67, 47.
fn explicit_a7(ps: &ParameterSet) -> Vec<Vec<Scalar>> {
    let d = |i, j, k| det3(i, j, k, ps).unwrap();
    let rows = [(1, [2, 3]), (2, [1, 3]), (3, [1, 2])];
    rows.iter()
        .map(|&(i, [j, k])| {
            let den = &d(i, j, 7) * &d(i, k, 7);
            [5, 6, 4].iter().map(|&l| &(&d(j, l, 7) * &d(k, l, 7)) / &den).collect()
        })
        .collect()
}

fn c3() -> Outcome {
    let start = Instant::now();
    let mut sets = vec![default_vandermonde(FieldConfig::Rational, 7).unwrap()];
    sets.extend(random_sets(FieldConfig::Rational, 7, 10, 3));
    let expected = [(Check::Permitted, 21), (Check::Deps, 105), (Check::Ll, 21), (Check::Span, 8), (Check::Zvezda, 7), (Check::Reconstruct, 7)];
    let mut bad = Vec::new();
    for (k, ps) in sets.iter().enumerate() {
        let report = run_suite(ps, &Check::ALL).unwrap();
        for (check, total) in expected {
            if report.count(check) != (total, total) {
                bad.push(format!("set {k} {check:?} {:?}", report.count(check)));
            }
        }
        let g = global_span_rank(ps).unwrap();
        if (g.edge_rank, g.permitted_dim) != (6, 6) {
            bad.push(format!("set {k} global {}/{}", g.edge_rank, g.permitted_dim));
        }
        if reconstruct_matrix(7, ps).unwrap().entries.to_rows() != explicit_a7(ps) {
            bad.push(format!("set {k} explicit A7"));
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && within(t, 30.0),
        format!("{} sets x 169 checks + explicit A7, {:.2}s (limit 30s) {bad:?}", sets.len(), t.as_secs_f64()),
    )
}

fn c4() -> Outcome {
    let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
    let w = walkthrough(4, 7, &ps).unwrap();
    let e = edge_vector(4, 7, &ps).unwrap();
    let zeros_ok = all_faces(7).iter().all(|f| e.get(*f).is_zero() == f.meets(FaceId::pair(4, 7)));
    // Steps 1-3 of the left-hand side carry (u1 u2 0) -> (v1 v2 0),
    // (v1 u4 0) -> (w1 v4 0), (v2 v4 0) -> (w2 w4 0).
    let steps = &w.lhs.steps[..3];
    let third_zero = steps
        .iter()
        .all(|s| s.inputs[2].1.is_zero() && s.outputs[2].1.is_zero());
    let chained = steps[1].inputs[0].1 == steps[0].outputs[0].1
        && steps[2].inputs[0].1 == steps[0].outputs[1].1
        && steps[2].inputs[1].1 == steps[1].outputs[1].1;
    let not_all_zero = steps
        .iter()
        .flat_map(|s| s.inputs.iter().chain(&s.outputs))
        .any(|(_, v)| !v.is_zero());
    let pass = w.pass() && zeros_ok && third_zero && chained && not_all_zero;
    let u: Vec<String> = steps[0].inputs.iter().map(|(f, v)| format!("{f}={v}")).collect();
    outcome(
        pass,
        format!(
            "zero pattern {zeros_ok}, transport consistent {}, row layout {third_zero}, chained {chained}, u = [{}]",
            w.consistent,
            u.join(" ")
        ),
    )
}

fn c5() -> Outcome {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
        let x: Vec<f64> = (0..UNKNOWNS).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let j = jacobian(&x);
        let scale = j.amax().max(f64::MIN_POSITIVE);
        for col in 0..UNKNOWNS {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[col] += h;
            xm[col] -= h;
            let (rp, rm) = (residual(&xp), residual(&xm));
            for row in 0..rp.len() {
                let fd = (rp[row] - rm[row]) / (2.0 * h);
                worst = worst.max((j[(row, col)] - fd).abs() / scale);
            }
        }
    }
    outcome(worst < 1e-6, format!("10 points, max relative error {worst:.2e} (limit 1e-6)"))
}

fn c6() -> (Outcome, Vec<hepta::numlab::NumericRun>) {
    let start = Instant::now();
    let opts = LmOptions::default();
    let runs = multistart(7, 50, &opts).unwrap();
    let t = start.elapsed();
    let good = runs
        .iter()
        .filter(|r| r.residual < 1e-10 && r.iterations <= 1000)
        .count();
    let frac = good as f64 / runs.len() as f64;
    let o = outcome(
        frac >= 0.6 && within(t, 60.0),
        format!("{good}/50 below 1e-10 ({:.0}%, need 60%), {:.2}s (limit 60s)", 100.0 * frac, t.as_secs_f64()),
    );
    (o, runs)
}

fn c7() -> Outcome {
    let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
    let opts = AnalysisOptions::default();
    let r = analyze_matrices(&to_matrices(&ansatz_point(&ps).unwrap()), &opts).unwrap();
    let exact_global = global_span_rank(&ps).unwrap();
    let exact_local: Vec<usize> = (1..=7).map(|p| local_span_rank(p, &ps).unwrap().edge_rank).collect();
    let edges_ok = r.edges.len() == 21 && r.edges.iter().all(|e| e.nullity == 1);
    let quads_ok = r.vertex_dependences.len() == 105 && r.vertex_dependences.iter().all(|v| v.quadruple_rank == 3);
    let ranks_ok = r.global_rank == 6
        && r.global_rank == exact_global.edge_rank
        && r.permitted_dim == exact_global.permitted_dim
        && r.local_ranks == vec![3; 7]
        && r.local_ranks == exact_local;
    outcome(
        edges_ok && quads_ok && ranks_ok && r.properties.all(),
        format!(
            "nullities all 1: {edges_ok}, quadruple ranks all 3: {quads_ok}, global {} / permitted {}, local {:?}",
            r.global_rank, r.permitted_dim, r.local_ranks
        ),
    )
}

fn c8(runs: &[hepta::numlab::NumericRun]) -> Outcome {
    let opts = AnalysisOptions::default();
    let converged: Vec<_> = runs.iter().filter(|r| r.converged).collect();
    let reports: Result<Vec<_>, _> = converged.iter().map(|r| analyze(r, &opts)).collect();
    let Ok(reports) = reports else {
        return outcome(false, "analysis failed on a converged run");
    };
    let agg = aggregate(&reports);
    let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
    let mut ms = to_matrices(&ansatz_point(&ps).unwrap());
    ms[0][0][0] += 0.1;
    let control_fails = !analyze_matrices(&ms, &opts).unwrap().properties.all();
    outcome(
        reports.len() == converged.len() && !converged.is_empty() && control_fails,
        format!(
            "{} runs analyzed; (i) {:.2} (ii) {:.2} (iii) {:.2} (iv) {:.2} (v) {:.2}; all {:.2}, all among {} runs without zero entries {}; negative control fails: {control_fails}",
            agg.runs_analyzed,
            agg.edges_exist,
            agg.vertex_dependences,
            agg.dependences_cancel,
            agg.global_span,
            agg.local_span,
            agg.all_properties,
            agg.generic_runs,
            agg.all_properties_generic.map_or("n/a".into(), |f| format!("{f:.2}")),
        ),
    )
}

fn c9() -> Outcome {
    let mut mismatches = 0;
    let mut sets7 = vec![default_vandermonde(FieldConfig::Rational, 7).unwrap()];
    sets7.extend(random_sets(FieldConfig::Rational, 7, 3, 9));
    for ps in &sets7 {
        for e in all_faces(7) {
            let dd = edge_vector(e.lo(), e.hi(), ps).unwrap();
            for v in all_faces(7) {
                if generalized_vector(7, &[e.lo(), e.hi()], v, ps).unwrap() != *dd.get(v) {
                    mismatches += 1;
                }
            }
        }
    }
    let mut sets5 = vec![default_vandermonde(FieldConfig::Rational, 5).unwrap()];
    sets5.extend(random_sets(FieldConfig::Rational, 5, 10, 10));
    sets5.extend(random_sets(PRIME, 5, 10, 11));
    let mut not_permitted = 0;
    for ps in &sets5 {
        for i in 1..=5 {
            let c = generalized_coloring(&[i], ps).unwrap();
            if c.is_zero() || !check_permitted(&c, ps).unwrap().all_pass() {
                not_permitted += 1;
            }
        }
    }
    outcome(
        mismatches == 0 && not_permitted == 0,
        format!(
            "n=7: {mismatches} of {} components differ; n=5: {not_permitted} of {} vertex vectors not permitted",
            sets7.len() * 441,
            sets5.len() * 5
        ),
    )
}

fn pipeline(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let bin = env!("CARGO_BIN_EXE_hepta");
    let steps: [&[&str]; 6] = [
        &["gen-params", "--mode", "random", "--n", "7", "--seed", "42", "-o", "params.json"],
        &["verify", "heptagon", "--params", "params.json", "-o", "verify.json"],
        &["edge-vectors", "--params", "params.json", "--checks", "all", "-o", "edges.json"],
        &["solve-lm", "--runs", "12", "--seed", "7", "-o", "solutions.json"],
        &["analyze", "solutions.json", "-o", "analysis.json"],
        &["gen-params", "--mode", "random", "--n", "5", "--field", "prime:10007", "--seed", "1", "-o", "p5.json"],
    ];
    for args in steps {
        let status = Command::new(bin).current_dir(dir).args(args).output().unwrap().status;
        assert!(status.success(), "{args:?} -> {status}");
    }
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn c10() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = pipeline(a.path());
    let second = pipeline(b.path());
    let differing: Vec<&str> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.as_str())
        .collect();
    outcome(
        first.len() == 6 && first.len() == second.len() && differing.is_empty(),
        format!("{} artifacts compared, differing: {differing:?}", first.len()),
    )
}

#[test]
fn acceptance() {
    let mut results: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let mut timed = |n: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let t = start.elapsed();
        println!(
            "{} criterion {n:>2} {name}: {} [{:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.as_secs_f64()
        );
        results.push((n, name, o, t));
    };
    timed(1, "exact heptagon", &mut c1);
    timed(2, "exact pentagon", &mut c2);
    timed(3, "edge-vector suite", &mut c3);
    timed(4, "e_47 walkthrough", &mut c4);
    timed(5, "jacobian vs finite differences", &mut c5);
    let mut runs = Vec::new();
    timed(6, "LM multistart", &mut || {
        let (o, r) = c6();
        runs = r;
        o
    });
    timed(7, "numeric/exact oracle equivalence", &mut c7);
    timed(8, "structure of LM solutions", &mut || c8(&runs));
    timed(9, "generalized vector formula", &mut c9);
    timed(10, "deterministic artifacts", &mut c10);
    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
