//! Command-line front end. Every subcommand writes one JSON artifact carrying
//! a schema tag, the tool version, the effective configuration and a digest
//! of its input, so reruns with the same inputs are byte-identical.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for usage, IO and schema errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::ansatz::{default_vandermonde, ParameterSet, ParamsFile};
use crate::combinatorics::Move;
use crate::edgevectors::{all_edge_vectors, run_suite, Check};
use crate::error::{Error, Result};
use crate::numlab::{aggregate, analyze, multistart, AnalysisOptions, LmOptions, NumericRun};
use crate::relations::verify_relation;
use crate::scalars::FieldConfig;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hepta", version, about = "Determinant ansatz for heptagon and pentagon relations")]
pub struct Cli {
    /// Worker threads for parallel checks and multistart.
    #[arg(long, global = true, env = "HEPTA_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a parameter set.
    GenParams(GenParams),
    /// Check a heptagon or pentagon relation exactly.
    Verify(Verify),
    /// Run the exact edge-vector checks.
    EdgeVectors(EdgeVectors),
    /// Levenberg-Marquardt multistart on the heptagon system.
    SolveLm(SolveLm),
    /// Detect edge-vector structure in numerical solutions.
    Analyze(Analyze),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenMode {
    Vandermonde,
    Random,
}

#[derive(Debug, Args)]
pub struct GenParams {
    #[arg(long, value_enum)]
    pub mode: GenMode,
    #[arg(long, default_value_t = 7, value_parser = parse_n)]
    pub n: usize,
    #[arg(long, default_value = "rational")]
    pub field: FieldConfig,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MoveArg {
    Heptagon,
    Pentagon,
}

impl From<MoveArg> for Move {
    fn from(m: MoveArg) -> Move {
        match m {
            MoveArg::Heptagon => Move::Heptagon,
            MoveArg::Pentagon => Move::Pentagon,
        }
    }
}

#[derive(Debug, Args)]
pub struct Verify {
    #[arg(value_enum)]
    pub relation: MoveArg,
    #[arg(long)]
    pub params: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChecksArg {
    All,
    Permitted,
    Deps,
    Ll,
    Span,
    Zvezda,
    Reconstruct,
}

impl ChecksArg {
    fn checks(self) -> Vec<Check> {
        match self {
            ChecksArg::All => Check::ALL.to_vec(),
            ChecksArg::Permitted => vec![Check::Permitted],
            ChecksArg::Deps => vec![Check::Deps],
            ChecksArg::Ll => vec![Check::Ll],
            ChecksArg::Span => vec![Check::Span],
            ChecksArg::Zvezda => vec![Check::Zvezda],
            ChecksArg::Reconstruct => vec![Check::Reconstruct],
        }
    }
}

#[derive(Debug, Args)]
pub struct EdgeVectors {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub checks: ChecksArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveLm {
    #[arg(long, default_value_t = 50)]
    pub runs: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    #[arg(short, long, default_value = "solutions.json")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct Analyze {
    pub solutions: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub svd_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub ll_tol: f64,
    #[arg(short, long, default_value = "analysis.json")]
    pub output: PathBuf,
}

fn parse_n(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n @ (5 | 7)) => Ok(n),
        _ => Err(format!("n must be 5 or 7, got {s:?}")),
    }
}

/// Outcome of a subcommand that ran to completion.
pub enum Outcome {
    Pass,
    Fail,
}

/// Usage, IO and schema problems map to 2; everything else is mathematical.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_)
        | Error::Schema(_)
        | Error::ParseScalar { .. }
        | Error::InvalidField(_)
        | Error::UnsupportedSize(_)
        | Error::ParameterShape(_)
        | Error::Dimension(_)
        | Error::FieldMismatch(..) => 2,
        _ => 1,
    }
}

/// Parses `args` and runs the subcommand, returning the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli.command) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::GenParams(a) => gen_params(a),
        Command::Verify(a) => verify(a),
        Command::EdgeVectors(a) => edge_vectors(a),
        Command::SolveLm(a) => solve_lm(a),
        Command::Analyze(a) => analyze_cmd(a),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn envelope(kind: &str, config: Value, input_digest: String) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(format!("{TOOL}.{kind}/1")));
    m.insert("tool".into(), json!({ "name": TOOL, "version": VERSION }));
    m.insert("config".into(), config);
    m.insert("input_digest".into(), json!(input_digest));
    m
}

/// Pretty JSON with a trailing newline, via a temp file renamed into place.
/// Without a path the document goes to stdout.
pub fn write_artifact(path: Option<&Path>, doc: &Value) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(doc)?;
    bytes.push(b'\n');
    let Some(path) = path else {
        std::io::stdout().write_all(&bytes)?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

/// Reads a parameter file, either bare or wrapped in a `gen-params` artifact.
pub fn read_params(path: &Path) -> Result<(ParameterSet, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_slice(&bytes)?;
    let inner = match value.get("params") {
        Some(p) => p.clone(),
        None => value,
    };
    let file: ParamsFile = serde_json::from_value(inner)?;
    Ok((ParameterSet::from_file(&file)?, sha256_hex(&bytes)))
}

fn gen_params(a: &GenParams) -> Result<Outcome> {
    a.field.validate()?;
    let (params, seed_used) = match a.mode {
        GenMode::Vandermonde => (default_vandermonde(a.field, a.n)?, None),
        GenMode::Random => {
            let (ps, s) = ParameterSet::random(a.field, a.n, a.seed)?;
            (ps, Some(s))
        }
    };
    let config = json!({
        "mode": a.mode,
        "n": a.n,
        "field": a.field,
        "seed": a.seed,
        "seed_used": seed_used,
    });
    let mut doc = envelope("params", config, params.digest());
    doc.insert("params".into(), serde_json::to_value(params.to_file())?);
    write_artifact(a.output.as_deref(), &Value::Object(doc))?;
    Ok(Outcome::Pass)
}

fn verify(a: &Verify) -> Result<Outcome> {
    let (params, digest) = read_params(&a.params)?;
    let mv = Move::from(a.relation);
    let config = json!({ "move": mv, "field": params.field() });
    let mut doc = envelope("verify", config, digest);
    let outcome = match verify_relation(mv, &params) {
        Ok(report) => {
            eprintln!(
                "{mv}: {} (max discrepancy {})",
                if report.equal { "equal" } else { "NOT equal" },
                report.max_discrepancy
            );
            let equal = report.equal;
            doc.insert("report".into(), serde_json::to_value(report)?);
            if equal {
                Outcome::Pass
            } else {
                Outcome::Fail
            }
        }
        Err(Error::NonGenericParameters(zeros)) => {
            eprintln!("{mv}: parameters are not generic ({} vanishing determinants)", zeros.len());
            let labels: Vec<String> = zeros
                .iter()
                .map(|t| format!("d{}{}{}", t[0], t[1], t[2]))
                .collect();
            doc.insert("report".into(), json!({ "equal": false, "vanishing_determinants": labels }));
            Outcome::Fail
        }
        Err(e) => return Err(e),
    };
    write_artifact(a.output.as_deref(), &Value::Object(doc))?;
    Ok(outcome)
}

fn edge_vectors(a: &EdgeVectors) -> Result<Outcome> {
    let (params, digest) = read_params(&a.params)?;
    let checks = a.checks.checks();
    let report = run_suite(&params, &checks)?;
    for &c in &checks {
        let (ok, total) = report.count(c);
        eprintln!("{:<12}{ok}/{total}", serde_json::to_value(c)?.as_str().unwrap_or("?"));
    }
    let vectors: serde_json::Map<String, Value> = all_edge_vectors(&params)?
        .into_iter()
        .map(|(e, c)| Ok((e.to_string(), serde_json::to_value(c.support_map())?)))
        .collect::<Result<_>>()?;
    let config = json!({ "checks": checks, "field": params.field() });
    let mut doc = envelope("edge-vectors", config, digest);
    doc.insert("all_pass".into(), json!(report.all_pass()));
    doc.insert("results".into(), serde_json::to_value(&report.results)?);
    doc.insert("edge_vectors".into(), Value::Object(vectors));
    let pass = report.all_pass();
    write_artifact(a.output.as_deref(), &Value::Object(doc))?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

/// One run in `solutions.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionsFile {
    pub schema: String,
    pub runs: Vec<NumericRun>,
}

fn median(mut v: Vec<usize>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_unstable();
    let m = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) as f64 / 2.0
    } else {
        v[m] as f64
    })
}

fn solve_lm(a: &SolveLm) -> Result<Outcome> {
    if a.runs == 0 {
        return Err(Error::Schema("--runs must be at least 1".into()));
    }
    let opts = LmOptions {
        max_iter: a.max_iter,
        tol: a.tol,
        ..LmOptions::default()
    };
    let runs = multistart(a.seed, a.runs, &opts)?;
    let converged: Vec<&NumericRun> = runs.iter().filter(|r| r.converged).collect();
    let best = runs.iter().map(|r| r.residual).filter(|r| r.is_finite()).fold(f64::INFINITY, f64::min);
    let med = median(converged.iter().map(|r| r.iterations).collect());
    eprintln!(
        "converged {}/{}, median iterations {}, best residual {best:e}",
        converged.len(),
        runs.len(),
        med.map_or("n/a".into(), |m| m.to_string())
    );
    let config = json!({ "runs": a.runs, "seed": a.seed, "options": opts });
    let digest = sha256_hex(&serde_json::to_vec(&config)?);
    let mut doc = envelope("solutions", config, digest);
    doc.insert(
        "summary".into(),
        json!({ "converged": converged.len(), "median_iterations": med, "best_residual": best }),
    );
    doc.insert("runs".into(), serde_json::to_value(&runs)?);
    write_artifact(Some(&a.output), &Value::Object(doc))?;
    Ok(if converged.is_empty() { Outcome::Fail } else { Outcome::Pass })
}

pub fn read_solutions(path: &Path) -> Result<(Vec<NumericRun>, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let file: SolutionsFile = serde_json::from_slice(&bytes)?;
    if !file.schema.starts_with(&format!("{TOOL}.solutions/")) {
        return Err(Error::Schema(format!("unexpected schema {:?}", file.schema)));
    }
    Ok((file.runs, sha256_hex(&bytes)))
}

fn analyze_cmd(a: &Analyze) -> Result<Outcome> {
    let (runs, digest) = read_solutions(&a.solutions)?;
    let opts = AnalysisOptions {
        svd_tol: a.svd_tol,
        ll_tol: a.ll_tol,
    };
    let converged: Vec<&NumericRun> = runs.iter().filter(|r| r.converged).collect();
    if converged.is_empty() {
        return Err(Error::NotConverged {
            seed: runs.first().map_or(0, |r| r.seed),
        });
    }
    let reports = converged
        .par_iter()
        .map(|r| analyze(r, &opts))
        .collect::<Result<Vec<_>>>()?;
    let agg = aggregate(&reports);
    eprintln!(
        "analyzed {} runs: edges {:.2}, vertex deps {:.2}, cancellation {:.2}, global span {:.2}, local span {:.2}",
        agg.runs_analyzed, agg.edges_exist, agg.vertex_dependences, agg.dependences_cancel, agg.global_span, agg.local_span
    );
    eprintln!(
        "all properties: {:.2} overall, {} on the {} runs without zero entries",
        agg.all_properties,
        agg.all_properties_generic.map_or("n/a".into(), |f| format!("{f:.2}")),
        agg.generic_runs
    );
    let skipped: Vec<u64> = runs.iter().filter(|r| !r.converged).map(|r| r.seed).collect();
    let mut doc = envelope("analysis", serde_json::to_value(opts)?, digest);
    doc.insert("aggregate".into(), serde_json::to_value(&agg)?);
    doc.insert("skipped_seeds".into(), json!(skipped));
    doc.insert("runs".into(), serde_json::to_value(&reports)?);
    write_artifact(Some(&a.output), &Value::Object(doc))?;
    Ok(Outcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_must_be_five_or_seven() {
        assert!(parse_n("5").is_ok());
        assert!(parse_n("6").is_err());
    }

    #[test]
    fn bad_prime_is_usage_error() {
        assert_eq!(run(["hepta", "gen-params", "--mode", "random", "--field", "prime:6"]), 2);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3, 1, 2]), Some(2.0));
        assert_eq!(median(vec![4, 1, 2, 3]), Some(2.5));
        assert_eq!(median(vec![]), None);
    }

    #[test]
    fn error_classes() {
        assert_eq!(exit_code(&Error::Io("x".into())), 2);
        assert_eq!(exit_code(&Error::NonGenericParameters(vec![])), 1);
    }
}
