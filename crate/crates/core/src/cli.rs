//! Command-line front end.
//!
//! Verbs: `compute`, `verify`, `builtin` and `limits`. Every verb writes one
//! JSON document (or a text table with `--format text`) to stdout or `--out`.
//! Exit codes: 0 success, 1 input error, 2 constant function, 3 solver
//! non-convergence, 4 invalid witness.
//!
//! `ADVBOUND_MAX_S` overrides both the row cap for loading (default 65536)
//! and the `|S|` cap for solving (default 64).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::adversary::{
    self, compute_report_with, eval_minimax_with_tol, eval_spectral_with_tol, eval_strong_weighted_with_tol,
    eval_weighted_with_tol, limitation_bounds, limitation_scheme, AdversaryError, BoundReport, LimitationMode,
    ProbabilityScheme, SpectralWitness, WeightScheme,
};
use crate::function_model::{
    build_difference_matrices, builtin_with_limit, certificate_profile, load_function_with_limit, FunctionError,
    FunctionSpec, DEFAULT_MAX_ROWS,
};
use crate::sdp::{self, GsaSolution, GsaWitness, SdpError, SdpOptions, SmmSolution, SmmWitness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONSTANT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_INVALID_WITNESS: i32 = 4;

/// Environment variable capping `|S|`.
pub const MAX_S_VAR: &str = "ADVBOUND_MAX_S";

#[derive(Debug, Parser)]
#[command(name = "advbound", version, about = "Quantum adversary bounds of finite functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the adversary value and report every formulation.
    Compute(ComputeArgs),
    /// Check a witness against a function and evaluate the bound it certifies.
    Verify(VerifyArgs),
    /// Emit the table of a built-in function family as a function document.
    Builtin(BuiltinArgs),
    /// Certificate complexities and the limitation ceilings.
    Limits(LimitsArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Function document (JSON).
    pub function: Option<PathBuf>,
    /// Built-in family and its parameters, e.g. `--builtin or 3`.
    #[arg(long, num_args = 1.., value_name = "NAME PARAMS")]
    pub builtin: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub source: Source,
    /// Error probability for the query lower bound.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, default_value_t = sdp::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub attach_witnesses: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    Gamma,
    Weights,
    Probs,
    Smm,
    Gsa,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long, value_enum)]
    pub kind: WitnessKind,
    #[arg(long, default_value_t = sdp::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct BuiltinArgs {
    pub name: String,
    pub params: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub attach_witnesses: bool,
    #[command(flatten)]
    pub output: Output,
}

/// Caps on `|S|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeLimits {
    pub load_rows: usize,
    pub solve_size: usize,
}

impl Default for SizeLimits {
    fn default() -> Self {
        Self { load_rows: DEFAULT_MAX_ROWS, solve_size: sdp::DEFAULT_MAX_SIZE }
    }
}

impl SizeLimits {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(MAX_S_VAR) {
            Err(_) => Ok(Self::default()),
            Ok(raw) => raw
                .trim()
                .parse::<usize>()
                .map(|cap| Self { load_rows: cap, solve_size: cap })
                .map_err(|_| format!("{MAX_S_VAR}: expected a positive integer, got {raw:?}")),
        }
    }
}

/// Exit code, the emitted document (if any) and a diagnostic for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub code: i32,
    pub document: Option<String>,
    pub message: Option<String>,
}

impl CommandOutput {
    fn fail(code: i32, message: impl Into<String>) -> Self {
        Self { code, document: None, message: Some(message.into()) }
    }
}

/// Parses `args` (program name first), runs the command and writes to the
/// process streams. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let limits = match SizeLimits::from_env() {
        Ok(l) => l,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INPUT;
        }
    };
    let result = execute(&cli.command, limits);
    if let Some(doc) = &result.document {
        let target = match &cli.command {
            Command::Compute(a) => a.output.out.as_deref(),
            Command::Verify(a) => a.output.out.as_deref(),
            Command::Limits(a) => a.output.out.as_deref(),
            Command::Builtin(a) => a.out.as_deref(),
        };
        if let Err(e) = emit(doc, target, out) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    }
    if let Some(msg) = &result.message {
        let _ = writeln!(err, "{msg}");
    }
    result.code
}

fn emit(doc: &str, target: Option<&Path>, out: &mut dyn Write) -> std::io::Result<()> {
    match target {
        Some(path) => std::fs::write(path, doc),
        None => out.write_all(doc.as_bytes()),
    }
}

/// Runs one command without touching the process streams.
pub fn execute(command: &Command, limits: SizeLimits) -> CommandOutput {
    match command {
        Command::Compute(a) => run_compute(a, limits),
        Command::Verify(a) => run_verify(a, limits),
        Command::Builtin(a) => run_builtin(a, limits),
        Command::Limits(a) => run_limits(a, limits),
    }
}

fn load_source(source: &Source, limits: SizeLimits) -> Result<FunctionSpec, String> {
    if let Some(parts) = &source.builtin {
        let (name, rest) = parts.split_first().ok_or("--builtin: missing family name")?;
        let params = rest
            .iter()
            .map(|p| p.parse::<usize>().map_err(|_| format!("--builtin {name}: parameter {p:?} is not a non-negative integer")))
            .collect::<Result<Vec<_>, _>>()?;
        return builtin_with_limit(name, &params, limits.load_rows).map_err(|e| e.to_string());
    }
    let path = source.function.as_ref().ok_or("no function given")?;
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec = load_function_with_limit(&bytes, limits.load_rows).map_err(|e| format!("{}: {e}", path.display()))?;
    if spec.name().is_some() {
        Ok(spec)
    } else {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Ok(spec.with_name(stem))
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// JSON number rounded to 9 significant digits; non-finite values become
/// the strings `"inf"`, `"-inf"` and `"nan"`.
pub fn json_value(v: f64) -> Value {
    if v.is_finite() {
        let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
        json!(rounded)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// `v` with 6 significant digits.
pub fn text_value(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

fn to_document(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn function_header(spec: &FunctionSpec) -> Value {
    json!({
        "name": spec.name(),
        "n": spec.arity(),
        "g": spec.input_alphabet(),
        "h": spec.output_alphabet(),
        "size": spec.size(),
    })
}

fn mode_name(mode: LimitationMode) -> &'static str {
    match mode {
        LimitationMode::Partial => "partial",
        LimitationMode::BooleanPartial => "boolean_partial",
        LimitationMode::Total => "total",
    }
}

fn adversary_exit(e: &AdversaryError) -> i32 {
    match e {
        AdversaryError::ConstantFunction | AdversaryError::Sdp(SdpError::ConstantFunction) => EXIT_CONSTANT,
        AdversaryError::EpsOutOfRange(_)
        | AdversaryError::Function(_)
        | AdversaryError::NotTotal
        | AdversaryError::NotBoolean
        | AdversaryError::Sdp(SdpError::TooLarge { .. })
        | AdversaryError::Sdp(SdpError::Shape(_)) => EXIT_INPUT,
        _ => EXIT_NOT_CONVERGED,
    }
}

pub fn run_compute(args: &ComputeArgs, limits: SizeLimits) -> CommandOutput {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return CommandOutput::fail(EXIT_INPUT, format!("--tol: must be positive, got {}", args.tol));
    }
    if !(0.0..0.5).contains(&args.eps) {
        return CommandOutput::fail(EXIT_INPUT, format!("--eps: {} must lie in [0, 1/2)", args.eps));
    }
    let spec = match load_source(&args.source, limits) {
        Ok(s) => s,
        Err(msg) => return CommandOutput::fail(EXIT_INPUT, format!("error: {msg}")),
    };
    let opts = SdpOptions { tol: args.tol, max_size: limits.solve_size, ..SdpOptions::default() };
    let report = match compute_report_with(&spec, args.eps, &opts) {
        Ok(r) => r,
        Err(e) => return CommandOutput::fail(adversary_exit(&e), format!("error: {e}")),
    };
    let document = match args.output.format {
        Format::Json => to_document(&report_json(&spec, &report, args.tol, args.attach_witnesses)),
        Format::Text => report_text(&spec, &report),
    };
    if report.converged {
        CommandOutput { code: EXIT_OK, document: Some(document), message: None }
    } else {
        CommandOutput {
            code: EXIT_NOT_CONVERGED,
            document: Some(document),
            message: Some(format!("warning: solver stopped with duality gap {:e}", report.duality_gap)),
        }
    }
}

/// The report as a JSON document; witnesses keep full precision so they can
/// be fed back to `verify`.
pub fn report_json(spec: &FunctionSpec, report: &BoundReport, tol: f64, attach_witnesses: bool) -> Value {
    let mut values = Map::new();
    for (name, v) in report.values.as_array() {
        values.insert(name.to_string(), json_value(v));
    }
    let mut limits = Map::new();
    for l in &report.limits {
        limits.insert(l.label.to_string(), json_value(l.value));
    }
    let mut schemes = Map::new();
    for (mode, _, v) in &report.witnesses.limitation {
        schemes.insert(mode_name(*mode).to_string(), json_value(*v));
    }
    let mut doc = json!({
        "kind": "report",
        "function": function_header(spec),
        "values": values,
        "adv": { "lower": json_value(report.lower()), "upper": json_value(report.upper()) },
        "sandwich_residual": json_value(report.sandwich_residual),
        "eps": report.eps,
        "query_lower_bound": json_value(report.query_lower_bound),
        "certificates": profile_json(&report.profile),
        "limits": limits,
        "limitation_schemes": schemes,
        "solver": {
            "tol": tol,
            "duality_gap": json_value(report.duality_gap),
            "iterations": report.iterations,
            "converged": report.converged,
            "consistent": report.consistent,
        },
        "generated_at": timestamp(),
    });
    if attach_witnesses {
        let w = &report.witnesses;
        doc["witnesses"] = json!({
            "gamma": w.gamma,
            "weights": w.weights,
            "probs": w.probs,
            "smm": w.smm.witness(),
            "gsa": w.gsa.witness(),
        });
    }
    doc
}

fn profile_json(profile: &crate::function_model::CertificateProfile) -> Value {
    json!({
        "complexity": profile.complexity,
        "order": profile.order,
        "c0": profile.c0(),
        "c1": profile.c1(),
    })
}

fn report_text(spec: &FunctionSpec, report: &BoundReport) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    for (name, v) in report.values.as_array() {
        rows.push((name.to_string(), text_value(v)));
    }
    rows.push(("adv lower".into(), text_value(report.lower())));
    rows.push(("adv upper".into(), text_value(report.upper())));
    rows.push(("sandwich residual".into(), text_value(report.sandwich_residual)));
    for l in &report.limits {
        rows.push((l.label.to_string(), text_value(l.value)));
    }
    for (mode, _, v) in &report.witnesses.limitation {
        rows.push((format!("scheme {}", mode_name(*mode)), text_value(*v)));
    }
    rows.push((format!("query bound (eps {})", text_value(report.eps)), text_value(report.query_lower_bound)));
    rows.push(("duality gap".into(), text_value(report.duality_gap)));
    rows.push(("converged".into(), report.converged.to_string()));
    let mut s = format!(
        "function {} (n = {}, |S| = {})\n",
        spec.name().unwrap_or("unnamed"),
        spec.arity(),
        spec.size()
    );
    s.push_str(&table(&rows));
    s
}

fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let vwidth = rows.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "  {k:<width$}  {v:>vwidth$}");
    }
    s
}

fn verdict(kind: &str, valid: bool, violation: Option<String>, value: Option<f64>, certificate: &str) -> Value {
    json!({
        "kind": "verdict",
        "witness_kind": kind,
        "valid": valid,
        "violation": violation,
        "value": value.map(json_value),
        "certificate": certificate,
        "generated_at": timestamp(),
    })
}

fn read_witness<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

struct Verdict {
    valid: bool,
    violation: Option<String>,
    value: Option<f64>,
    extra: Option<(&'static str, f64)>,
}

fn invalid_or_input(e: AdversaryError) -> Result<Verdict, (i32, String)> {
    match e {
        AdversaryError::Invalid(msg) => Ok(Verdict { valid: false, violation: Some(msg), value: None, extra: None }),
        other => Err((adversary_exit(&other), format!("error: {other}"))),
    }
}

fn sdp_input(e: SdpError) -> (i32, String) {
    let code = match e {
        SdpError::ConstantFunction => EXIT_CONSTANT,
        SdpError::Shape(_) | SdpError::TooLarge { .. } => EXIT_INPUT,
        _ => EXIT_NOT_CONVERGED,
    };
    (code, format!("error: {e}"))
}

fn check_shape(rows: usize, cols: usize, want: (usize, usize), what: &str) -> Result<(), (i32, String)> {
    if (rows, cols) != want {
        return Err((EXIT_INPUT, format!("error: {what} is {rows}x{cols}, expected {}x{}", want.0, want.1)));
    }
    Ok(())
}

fn verify_kind(spec: &FunctionSpec, args: &VerifyArgs) -> Result<Verdict, (i32, String)> {
    let dm = build_difference_matrices(spec);
    let size = dm.size();
    let tol = args.tol;
    let input = |m: String| (EXIT_INPUT, format!("error: {m}"));
    match args.kind {
        WitnessKind::Gamma => {
            let w: SpectralWitness = read_witness(&args.witness).map_err(input)?;
            check_shape(w.gamma.rows(), w.gamma.cols(), (size, size), "gamma")?;
            match eval_spectral_with_tol(&w, &dm, tol) {
                Ok(v) => Ok(Verdict { valid: true, violation: None, value: Some(v), extra: None }),
                Err(e) => invalid_or_input(e),
            }
        }
        WitnessKind::Weights => {
            let w: WeightScheme = read_witness(&args.witness).map_err(input)?;
            check_shape(w.w.rows(), w.w.cols(), (size, size), "w")?;
            if w.wp.len() != dm.arity() {
                return Err(input(format!("expected {} matrices in wp, got {}", dm.arity(), w.wp.len())));
            }
            for m in &w.wp {
                check_shape(m.rows(), m.cols(), (size, size), "wp entry")?;
            }
            let wa = match eval_weighted_with_tol(&w, &dm, tol) {
                Ok(v) => v,
                Err(e) => return invalid_or_input(e),
            };
            let swa = eval_strong_weighted_with_tol(&w, &dm, tol).map_err(|e| (adversary_exit(&e), format!("error: {e}")))?;
            Ok(Verdict { valid: true, violation: None, value: Some(wa), extra: Some(("strong_value", swa)) })
        }
        WitnessKind::Probs => {
            let w: ProbabilityScheme = read_witness(&args.witness).map_err(input)?;
            check_shape(w.p.rows(), w.p.cols(), (size, dm.arity()), "p")?;
            match eval_minimax_with_tol(&w, &dm, tol) {
                Ok(v) => Ok(Verdict { valid: true, violation: None, value: Some(v), extra: None }),
                Err(e) => invalid_or_input(e),
            }
        }
        WitnessKind::Smm => {
            let w: SmmWitness = read_witness(&args.witness).map_err(input)?;
            let sol = SmmSolution::from_witness(&dm, w).map_err(sdp_input)?;
            let check = sdp::verify_smm(&dm, &sol, tol).map_err(sdp_input)?;
            Ok(Verdict {
                valid: check.accepted,
                violation: check.violation,
                value: check.accepted.then(|| 1.0 / sol.mu),
                extra: None,
            })
        }
        WitnessKind::Gsa => {
            let w: GsaWitness = read_witness(&args.witness).map_err(input)?;
            let sol = GsaSolution::from_witness(&dm, w).map_err(sdp_input)?;
            let check = sdp::verify_gsa(&dm, &sol, tol).map_err(sdp_input)?;
            Ok(Verdict {
                valid: check.accepted,
                violation: check.violation,
                value: check.accepted.then(|| 1.0 / check.trace),
                extra: None,
            })
        }
    }
}

pub fn run_verify(args: &VerifyArgs, limits: SizeLimits) -> CommandOutput {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return CommandOutput::fail(EXIT_INPUT, format!("--tol: must be positive, got {}", args.tol));
    }
    let spec = match load_source(&args.source, limits) {
        Ok(s) => s,
        Err(msg) => return CommandOutput::fail(EXIT_INPUT, format!("error: {msg}")),
    };
    if spec.is_constant() {
        return CommandOutput::fail(EXIT_CONSTANT, format!("error: {}", AdversaryError::ConstantFunction));
    }
    let verdict_data = match verify_kind(&spec, args) {
        Ok(v) => v,
        Err((code, msg)) => return CommandOutput::fail(code, msg),
    };
    let (kind, certificate) = match args.kind {
        WitnessKind::Gamma => ("gamma", "lower"),
        WitnessKind::Weights => ("weights", "lower"),
        WitnessKind::Probs => ("probs", "upper"),
        WitnessKind::Smm => ("smm", "upper"),
        WitnessKind::Gsa => ("gsa", "lower"),
    };
    let Verdict { valid, violation, value, extra } = verdict_data;
    let document = match args.output.format {
        Format::Json => {
            let mut doc = verdict(kind, valid, violation.clone(), value, certificate);
            if let Some((key, v)) = extra {
                doc[key] = json_value(v);
            }
            to_document(&doc)
        }
        Format::Text => {
            let mut rows = vec![
                ("witness".to_string(), kind.to_string()),
                ("valid".to_string(), valid.to_string()),
                ("certificate".to_string(), certificate.to_string()),
            ];
            if let Some(v) = value {
                rows.push(("value".into(), text_value(v)));
            }
            if let Some((key, v)) = extra {
                rows.push((key.replace('_', " "), text_value(v)));
            }
            if let Some(msg) = &violation {
                rows.push(("violated".into(), msg.clone()));
            }
            table(&rows)
        }
    };
    let code = if valid { EXIT_OK } else { EXIT_INVALID_WITNESS };
    let message = violation.map(|v| format!("invalid witness: {v}"));
    CommandOutput { code, document: Some(document), message }
}

pub fn run_builtin(args: &BuiltinArgs, limits: SizeLimits) -> CommandOutput {
    let spec = match builtin_with_limit(&args.name, &args.params, limits.load_rows) {
        Ok(s) => s,
        Err(e) => return CommandOutput::fail(EXIT_INPUT, format!("error: {e}")),
    };
    match spec.to_json() {
        Ok(mut doc) => {
            doc.push('\n');
            CommandOutput { code: EXIT_OK, document: Some(doc), message: None }
        }
        Err(e) => CommandOutput::fail(EXIT_INPUT, format!("error: {e}")),
    }
}

pub fn run_limits(args: &LimitsArgs, limits: SizeLimits) -> CommandOutput {
    let spec = match load_source(&args.source, limits) {
        Ok(s) => s,
        Err(msg) => return CommandOutput::fail(EXIT_INPUT, format!("error: {msg}")),
    };
    if spec.is_constant() {
        return CommandOutput::fail(EXIT_CONSTANT, format!("error: {}", AdversaryError::ConstantFunction));
    }
    match limits_document(&spec, args) {
        Ok(doc) => CommandOutput { code: EXIT_OK, document: Some(doc), message: None },
        Err(e) => CommandOutput::fail(adversary_exit(&e), format!("error: {e}")),
    }
}

fn limits_document(spec: &FunctionSpec, args: &LimitsArgs) -> Result<String, AdversaryError> {
    let profile = certificate_profile(spec).map_err(|e: FunctionError| AdversaryError::Function(e))?;
    let dm = build_difference_matrices(spec);
    let bounds = limitation_bounds(&profile, spec.arity(), spec.is_total(), spec.is_boolean_output());
    let mut modes = vec![LimitationMode::Partial];
    if spec.is_boolean_output() {
        modes.push(LimitationMode::BooleanPartial);
    }
    if spec.is_total() {
        modes.push(LimitationMode::Total);
    }
    let mut schemes = Vec::new();
    for mode in modes {
        let scheme = limitation_scheme(spec, &profile, mode)?;
        let value = adversary::eval_minimax(&scheme, &dm)?;
        schemes.push((mode, scheme, value));
    }
    Ok(match args.output.format {
        Format::Json => {
            let mut lim = Map::new();
            for l in &bounds {
                lim.insert(l.label.to_string(), json_value(l.value));
            }
            let mut sch = Map::new();
            for (mode, scheme, value) in &schemes {
                let mut entry = json!({ "value": json_value(*value) });
                if args.attach_witnesses {
                    entry["witness"] = json!(scheme);
                }
                sch.insert(mode_name(*mode).to_string(), entry);
            }
            let doc = json!({
                "kind": "limits",
                "function": function_header(spec),
                "certificates": profile_json(&profile),
                "limits": lim,
                "schemes": sch,
                "generated_at": timestamp(),
            });
            to_document(&doc)
        }
        Format::Text => {
            let mut rows: Vec<(String, String)> = profile
                .complexity
                .iter()
                .enumerate()
                .map(|(h, c)| (format!("C for letter {h}"), c.to_string()))
                .collect();
            rows.push(("C0".into(), profile.c0().to_string()));
            rows.push(("C1".into(), profile.c1().to_string()));
            for l in &bounds {
                rows.push((l.label.to_string(), text_value(l.value)));
            }
            for (mode, _, value) in &schemes {
                rows.push((format!("scheme {}", mode_name(*mode)), text_value(*value)));
            }
            table(&rows)
        }
    })
}
