//! Command-line front end. Every command prints one JSON report:
//! `{command, inputs, result, status, message}`.
//!
//! Exit codes: 0 on success, 1 on a domain error (report still printed, the
//! message repeated on stderr), 2 on a usage error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bell::BellOperator;
use crate::bound::{classical_bound, classical_bound_constrained, classical_bound_parallel, reduce, BoundError, BoundResult};
use crate::catalog::{self, ghz_mermin_bound};
use crate::equivalence::inequalities_equivalent;
use crate::expdata::{fidelity, mermin_value, operator_value, witness, DataSet, ErrorMode};
use crate::feasibility::ks_feasible;
use crate::model::KsModel;
use crate::modelfile::{load_model, ModelFile};
use crate::pauli::QubitLabels;
use crate::state::{bell_value, spectral_max};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ksverify", version, about = "Kochen-Specker contextuality checks for Pauli-observable models")]
pub struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// Built-in model name or path to a model file.
    #[arg(long)]
    pub model: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a noncontextual ±1 assignment exists.
    VerifyKs(ModelArg),
    /// Exact classical bound of the model's Bell operator.
    Bound {
        #[command(flatten)]
        model: ModelArg,
        /// Worker threads for the enumeration.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        threads: u16,
    },
    /// Quantum value of the Bell operator.
    Qvalue {
        #[command(flatten)]
        model: ModelArg,
        /// Also report the largest eigenvalue.
        #[arg(long)]
        spectral: bool,
    },
    /// Remove identity-product terms and shift the bound.
    Reduce(ModelArg),
    /// Compare the reduced operators of two models.
    Equiv {
        /// Exactly two models.
        #[arg(long = "model", num_args = 1, required = true)]
        models: Vec<String>,
    },
    /// Evaluate measured statistics.
    Ingest {
        /// CSV or JSON data file.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "mermin-ghz3")]
        model: String,
        #[arg(long, default_value = "linear", value_parser = ["linear", "quadrature", "poisson"])]
        error_mode: String,
    },
    /// List built-in models.
    ListModels,
    /// Write a model in the model file format.
    ExportModel {
        #[command(flatten)]
        model: ModelArg,
        /// Output path; the JSON goes into the report when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyKs(_) => "verify-ks",
            Command::Bound { .. } => "bound",
            Command::Qvalue { .. } => "qvalue",
            Command::Reduce(_) => "reduce",
            Command::Equiv { .. } => "equiv",
            Command::Ingest { .. } => "ingest",
            Command::ListModels => "list-models",
            Command::ExportModel { .. } => "export-model",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
    pub message: String,
}

impl CommandReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => EXIT_OK,
            Status::Error => EXIT_DOMAIN,
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let out = if pretty { serde_json::to_string_pretty(self) } else { serde_json::to_string(self) };
        out.expect("reports always serialize")
    }
}

type CmdResult = Result<Value, String>;

/// A model resolved from `--model`, with the operator to analyze.
struct Loaded {
    model: KsModel,
    op: BellOperator,
    source: &'static str,
}

fn resolve(spec: &str) -> Result<Loaded, String> {
    match catalog::get(spec) {
        Ok(e) => Ok(Loaded { model: e.model, op: e.bell_operator, source: "builtin" }),
        Err(catalog::CatalogError::UnknownName(_)) => {
            let path = Path::new(spec);
            if !path.exists() {
                return Err(format!("{spec:?} is neither a built-in model nor an existing file"));
            }
            let text = std::fs::read_to_string(path).map_err(|e| format!("{spec}: {e}"))?;
            let model = load_model(&text).map_err(|e| format!("{spec}: {e}"))?;
            let op = model.bell_operator();
            Ok(Loaded { model, op, source: "file" })
        }
        Err(e) => Err(e.to_string()),
    }
}

fn model_inputs(spec: &str, loaded: Option<&Loaded>) -> Value {
    json!({ "model": spec, "source": loaded.map(|l| l.source) })
}

#[derive(Serialize)]
struct TermView {
    coefficient: f64,
    groups: Vec<String>,
    product: String,
}

#[derive(Serialize)]
struct OperatorView {
    text: String,
    terms: Vec<TermView>,
}

fn operator_view(op: &BellOperator, labels: &QubitLabels) -> OperatorView {
    OperatorView {
        text: op.describe(labels),
        terms: op
            .terms
            .iter()
            .map(|t| TermView {
                coefficient: t.coefficient,
                groups: t.groups.iter().map(ToString::to_string).collect(),
                product: t.product().map(|p| p.to_string()).unwrap_or_default(),
            })
            .collect(),
    }
}

fn maximizer_view(result: &BoundResult, labels: &QubitLabels) -> Value {
    Value::Array(
        result
            .maximizer
            .iter()
            .map(|s| json!({ "symbol": s.symbol, "observable": labels.describe(&s.word), "value": s.value }))
            .collect(),
    )
}

fn quantum_value(loaded: &Loaded, op: &BellOperator) -> Result<Option<f64>, String> {
    loaded.model.state().map(|s| bell_value(op, s)).transpose().map_err(|e| e.to_string())
}

fn verify_ks(loaded: &Loaded) -> CmdResult {
    let r = ks_feasible(&loaded.model);
    let labels = loaded.model.labels();
    let assignment = r.assignment.as_ref().map(|v| {
        v.iter()
            .enumerate()
            .map(|(i, &x)| json!({ "symbol": i, "observable": loaded.model.describe_symbol(i), "value": x }))
            .collect::<Vec<_>>()
    });
    let certificate_contexts = r
        .certificate
        .as_ref()
        .map(|rows| rows.iter().map(|&i| loaded.model.contexts()[i].label().to_string()).collect::<Vec<_>>());
    Ok(json!({
        "feasible": r.feasible,
        "certificate": r.certificate,
        "certificate_contexts": certificate_contexts,
        "assignment": assignment,
        "verified": r.verify(&loaded.model),
        "symbols": loaded.model.symbols().iter().map(|w| labels.describe(w)).collect::<Vec<_>>(),
    }))
}

fn bound(loaded: &Loaded, threads: usize) -> CmdResult {
    let r = classical_bound_parallel(&loaded.op, threads).map_err(|e| e.to_string())?;
    let quantum = quantum_value(loaded, &loaded.op)?;
    Ok(json!({
        "bound": r.bound,
        "maximizer": maximizer_view(&r, loaded.model.labels()),
        "evaluations": r.evaluations,
        "quantum_value": quantum,
        "violation": quantum.map(|q| q > r.bound + 1e-9),
    }))
}

fn qvalue(loaded: &Loaded, spectral: bool) -> CmdResult {
    let quantum = quantum_value(loaded, &loaded.op)?;
    let top = if spectral || quantum.is_none() {
        Some(spectral_max(&loaded.op).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok(json!({ "bell_value": quantum, "spectral_max": top, "operator": operator_view(&loaded.op, loaded.model.labels()) }))
}

fn reduce_cmd(loaded: &Loaded) -> CmdResult {
    let red = reduce(&loaded.model, &loaded.op).map_err(|e| e.to_string())?;
    let original = classical_bound(&loaded.op).map_err(|e| e.to_string())?.bound;
    // None when the removed identities admit no assignment at all
    let reduced_bound = match classical_bound_constrained(&red.reduced, &red.constraints) {
        Ok(r) => Some(r.bound),
        Err(BoundError::Infeasible) => None,
        Err(e) => return Err(e.to_string()),
    };
    Ok(json!({
        "reduced": operator_view(&red.reduced, loaded.model.labels()),
        "shift": red.shift,
        "removed": red.removed,
        "removed_contexts": red.removed.iter().map(|&i| loaded.model.contexts()[i].label()).collect::<Vec<_>>(),
        "original_bound": original,
        "adjusted_bound": red.adjusted_bound(original),
        "reduced_bound": reduced_bound,
        "identities_satisfiable": reduced_bound.is_some(),
        "quantum_value": quantum_value(loaded, &red.reduced)?,
    }))
}

fn equiv(a: &Loaded, b: &Loaded) -> CmdResult {
    let ra = reduce(&a.model, &a.op).map_err(|e| e.to_string())?;
    let rb = reduce(&b.model, &b.op).map_err(|e| e.to_string())?;
    let report = inequalities_equivalent(&ra.reduced, &rb.reduced);
    Ok(json!({
        "equivalent": report.equivalent,
        "matching": report.matching,
        "failures": report.failures,
        "left": operator_view(&ra.reduced, a.model.labels()),
        "right": operator_view(&rb.reduced, b.model.labels()),
    }))
}

fn ingest(path: &Path, loaded: &Loaded, mode: ErrorMode) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let data = DataSet::parse(&text, mode).map_err(|e| format!("{}: {e}", path.display()))?;
    if data.n != loaded.model.n() {
        return Err(format!("data has {} qubits, model has {}", data.n, loaded.model.n()));
    }
    let mermin = mermin_value(&data).map_err(|e| e.to_string())?;
    let mermin_bound = ghz_mermin_bound(data.n);

    let red = reduce(&loaded.model, &loaded.op).map_err(|e| e.to_string())?;
    let original = classical_bound(&loaded.op).map_err(|e| e.to_string())?.bound;
    let reduced_bound = red.adjusted_bound(original);
    let operator = operator_value(&red.reduced, &data).map_err(|e| e.to_string())?;

    let mut warnings = Vec::new();
    let fid = match fidelity(&data) {
        Ok(f) => Some(f),
        Err(e) => {
            warnings.push(format!("fidelity unavailable: {e}"));
            None
        }
    };
    for rec in &data.records {
        if let Ok(est) = crate::expdata::expectation_from_record(rec, mode) {
            if !est.missing_outcomes.is_empty() {
                warnings.push(format!("setting {} lacks outcomes {}", rec.setting, est.missing_outcomes.join(",")));
            }
        }
    }
    Ok(json!({
        "mermin": mermin.value,
        "sigma": mermin.sigma,
        "classical_bound": mermin_bound,
        "violation_sigma": mermin.sigmas_above(mermin_bound),
        "operator": {
            "text": red.reduced.describe(loaded.model.labels()),
            "value": operator.value,
            "sigma": operator.sigma,
            "bound": reduced_bound,
            "violation_sigma": operator.sigmas_above(reduced_bound),
        },
        "fidelity": fid,
        "witness": fid.as_ref().map(|f| witness(f.fidelity)),
        "error_mode": mode,
        "warnings": warnings,
    }))
}

fn list_models() -> CmdResult {
    let entries = catalog::list().map_err(|e| e.to_string())?;
    Ok(Value::Array(entries.iter().map(|e| serde_json::to_value(e.summary()).expect("summary serializes")).collect()))
}

fn export(loaded: &Loaded, out: Option<&Path>) -> CmdResult {
    let file = ModelFile::from_model(&loaded.model);
    match out {
        Some(path) => {
            std::fs::write(path, file.to_json(true) + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(json!({ "written": path.display().to_string() }))
        }
        None => Ok(serde_json::to_value(&file).expect("model file serializes")),
    }
}

/// Runs a parsed command.
pub fn execute(command: &Command) -> CommandReport {
    let mut inputs = Value::Null;
    let outcome = (|| -> CmdResult {
        match command {
            Command::VerifyKs(m) | Command::Reduce(m) => {
                let l = resolve(&m.model)?;
                inputs = model_inputs(&m.model, Some(&l));
                if matches!(command, Command::VerifyKs(_)) {
                    verify_ks(&l)
                } else {
                    reduce_cmd(&l)
                }
            }
            Command::Bound { model, threads } => {
                inputs = json!({ "model": model.model, "threads": threads });
                let l = resolve(&model.model)?;
                inputs["source"] = json!(l.source);
                bound(&l, usize::from(*threads))
            }
            Command::Qvalue { model, spectral } => {
                inputs = json!({ "model": model.model, "spectral": spectral });
                let l = resolve(&model.model)?;
                inputs["source"] = json!(l.source);
                qvalue(&l, *spectral)
            }
            Command::Equiv { models } => {
                inputs = json!({ "models": models });
                if models.len() != 2 {
                    return Err(format!("equiv needs exactly two --model arguments, got {}", models.len()));
                }
                let a = resolve(&models[0])?;
                let b = resolve(&models[1])?;
                inputs["sources"] = json!([a.source, b.source]);
                equiv(&a, &b)
            }
            Command::Ingest { data, model, error_mode } => {
                inputs = json!({ "data": data.display().to_string(), "model": model, "error_mode": error_mode });
                let mode: ErrorMode = error_mode.parse().map_err(|e: crate::expdata::DataError| e.to_string())?;
                let l = resolve(model)?;
                inputs["source"] = json!(l.source);
                ingest(data, &l, mode)
            }
            Command::ListModels => {
                inputs = json!({});
                list_models()
            }
            Command::ExportModel { model, out } => {
                inputs = json!({ "model": model.model, "out": out.as_ref().map(|p| p.display().to_string()) });
                let l = resolve(&model.model)?;
                inputs["source"] = json!(l.source);
                export(&l, out.as_deref())
            }
        }
    })();
    let (result, status, message) = match outcome {
        Ok(v) => (v, Status::Ok, String::new()),
        Err(m) => (Value::Null, Status::Error, m),
    };
    CommandReport { command: command.name().to_string(), inputs, result, status, message }
}

/// Parses `argv` (including the program name) and runs it. Usage errors
/// come back as clap errors so the caller can print help and exit with 2.
pub fn run<I, T>(argv: I) -> Result<(CommandReport, bool), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    Ok((execute(&cli.command), cli.pretty))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> Value {
        let (report, _) = run(std::iter::once("ksverify").chain(args.iter().copied())).unwrap();
        assert_eq!(report.status, Status::Ok, "{}", report.message);
        report.result
    }

    #[test]
    fn verify_ks_mermin() {
        let r = ok(&["verify-ks", "--model", "mermin-ghz3"]);
        assert_eq!(r["feasible"], json!(false));
        assert_eq!(r["certificate"], json!([0, 1, 2, 3]));
        assert_eq!(r["verified"], json!(true));
    }

    #[test]
    fn bound_square_b() {
        let r = ok(&["bound", "--model", "square-b", "--threads", "3"]);
        assert_eq!(r["bound"], json!(3.0));
        assert!((r["quantum_value"].as_f64().unwrap() - 5.0).abs() < 1e-9);
        assert_eq!(r["violation"], json!(true));
    }

    #[test]
    fn usage_errors() {
        assert!(run(["ksverify", "frobnicate"]).is_err());
        assert!(run(["ksverify", "bound"]).is_err());
        assert_eq!(run(["ksverify", "bound", "--model", "x", "--threads", "0"]).unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn domain_error_has_exit_one() {
        let (report, _) = run(["ksverify", "verify-ks", "--model", "/nonexistent/model.json"]).unwrap();
        assert_eq!(report.status, Status::Error);
        assert_eq!(report.exit_code(), EXIT_DOMAIN);
        assert!(report.message.contains("neither a built-in model"));
    }

    #[test]
    fn equiv_needs_two() {
        let (report, _) = run(["ksverify", "equiv", "--model", "square-b"]).unwrap();
        assert_eq!(report.status, Status::Error);
    }
}
