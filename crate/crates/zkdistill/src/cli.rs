//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (or a failed cross-check),
//! 2 on a usage or configuration error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;
use zkdistill_core::codes::{dual_parameters, qrm, reed_muller, CodeError};
use zkdistill_core::distillation::{
    cisc_acceptance, cisc_output_error, CiscProtocol, DistillationStepModel, LevelRule,
};
use zkdistill_core::protosim::{build_distillation_circuit, build_zk_teleport};
use zkdistill_core::resources::{cisc_for_target, risc_count, sweep, CountMode, ErrorBudget, ResourceEstimate};
use zkdistill_core::transversality::certify_zk;

use crate::config::{CliConfig, ConfigError, OutputFormat};
use crate::formats::{parse_gate_list, write_gate_list, write_matrix, write_qasm};
use crate::mek::load_mek_model;
use crate::oracle::verify;
use crate::report::{rows_to_csv, EstimateRow, RationalFunctionJson, RationalJson};

#[derive(Debug, Parser)]
#[command(name = "zkdistill", version, about = "Z(pi/2^k) magic-state distillation: codes, polynomials, thresholds and resource counts")]
pub struct Cli {
    /// Output format [default: text, or from config/environment].
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// key=value configuration file (also ZKDISTILL_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// JSON file with MEK 10-to-2 step coefficients.
    #[arg(long, global = true)]
    pub mek_params: Option<PathBuf>,
    /// Bisection tolerance for thresholds.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Largest number of error sites enumerated exhaustively (at most 31).
    #[arg(long, global = true)]
    pub exhaustive_limit: Option<usize>,
    /// Worker threads for enumeration [default: one per core].
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reed-Muller code, its dual and the shortened quantum code.
    Code {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        /// Also print the generator matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Certify a transversal Z_k for QRM(r, m) with Ward's test.
    Certify {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        /// Use the unshortened code.
        #[arg(long)]
        unshortened: bool,
    },
    /// Output-error and acceptance polynomials of one distillation round.
    Poly {
        #[arg(long)]
        k: u32,
        /// Taylor coefficients up to this power of ε.
        #[arg(long)]
        series: Option<usize>,
        /// Evaluate at this input error.
        #[arg(long)]
        eps: Option<f64>,
        /// Include the full exact rational functions in JSON output.
        #[arg(long)]
        exact: bool,
    },
    /// Distillation threshold: fixed point of ε_out(ε) = ε.
    Threshold {
        #[arg(long)]
        k: u32,
    },
    /// Cross-check closed form, dual-sum fast path and circuit enumeration.
    Verify {
        #[arg(long)]
        k: u32,
    },
    /// Resource-state count for one target.
    Estimate {
        #[command(subcommand)]
        which: EstimateCommand,
    },
    /// RISC and CISC counts over a grid of targets.
    Sweep {
        /// Comma-separated rotation indices.
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        k: Vec<u32>,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        /// `from:to[:per_decade]` on a log grid, or a comma-separated list.
        #[arg(long, default_value = "1e-5:1e-30:4")]
        targets: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Export a circuit template, or re-emit a gate-list file.
    Circuit {
        #[arg(long, required_unless_present = "input")]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = Syntax::Gates)]
        syntax: Syntax,
        /// The Z_k teleportation gadget instead of the distillation round.
        #[arg(long)]
        teleport: bool,
        /// Gate-list file to parse and re-emit.
        #[arg(long, conflicts_with_all = ["k", "teleport"])]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EstimateCommand {
    /// Compile into T gates, distill T states.
    Risc {
        #[arg(long)]
        eps_target: f64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = DistillerArg::Qrm15)]
        distiller: DistillerArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Distill Z_k states directly.
    Cisc {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        eps_target: f64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = RuleArg::Composition)]
        level_rule: RuleArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 0.5)]
    pub c_qc: f64,
    #[arg(long, default_value_t = 0.5)]
    pub c_t: f64,
    #[arg(long, default_value_t = 0.5)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub c2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Exact,
}

impl From<ModeArg> for CountMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => CountMode::Paper,
            ModeArg::Exact => CountMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Composition,
    PaperFormula,
}

impl From<RuleArg> for LevelRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Composition => LevelRule::Composition,
            RuleArg::PaperFormula => LevelRule::PaperFormula,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistillerArg {
    Qrm15,
    Mek,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Syntax {
    Gates,
    Qasm,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// A rendered result; `failed` turns a successful run into exit code 1.
struct Output {
    json: Value,
    text: String,
    csv: Option<String>,
    failed: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Self { json, text, csv: None, failed: false }
    }

    fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => Ok(serde_json::to_string_pretty(&self.json).expect("JSON values serialize") + "\n"),
            OutputFormat::Text => Ok(self.text.clone()),
            OutputFormat::Csv => {
                self.csv.clone().ok_or_else(|| CliError::Usage("CSV output is only available for estimate and sweep".into()))
            }
        }
    }
}

fn show_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn budget(b: &BudgetArgs) -> Result<ErrorBudget, CliError> {
    ErrorBudget::new(b.c_qc, b.c_t, b.c1, b.c2).map_err(|e| CliError::Usage(e.to_string()))
}

fn code_params(r: u32, m: u32) -> Result<(usize, usize, usize), CodeError> {
    let c = reed_muller(r, m)?;
    Ok((c.n(), c.k(), c.distance()?))
}

fn cmd_code(r: u32, m: u32, matrix: bool) -> Result<Output, CliError> {
    let primal = reed_muller(r, m).map_err(domain)?;
    let (n, k, d) = code_params(r, m).map_err(domain)?;
    let mut text = format!("RM({r},{m}) [{n},{k},{d}]\n");
    let mut j = json!({"r": r, "m": m, "primal": {"n": n, "k": k, "d": d}});
    match dual_parameters(r, m) {
        Ok((dr, _)) => {
            let (dn, dk, dd) = code_params(dr, m).map_err(domain)?;
            text.push_str(&format!("dual RM({dr},{m}) [{dn},{dk},{dd}]\n"));
            j["dual"] = json!({"r": dr, "n": dn, "k": dk, "d": dd});
            match qrm(r, m, true) {
                Ok(q) => {
                    text.push_str(&format!("shortened QRM({r},{m}) [[{},{}]]\n", q.n(), q.k_logical()));
                    j["quantum"] = json!({"n": q.n(), "k": q.k_logical()});
                }
                Err(CodeError::EmptyXPart { .. }) => {
                    text.push_str(&format!("shortened QRM({r},{m}) ∅ (no X checks)\n"));
                    j["quantum"] = Value::Null;
                }
                Err(e) => return Err(domain(e)),
            }
        }
        Err(CodeError::NoDual { .. }) => {
            text.push_str("dual: none (r >= m)\n");
            j["dual"] = Value::Null;
        }
        Err(e) => return Err(domain(e)),
    }
    if matrix {
        let rows = write_matrix(primal.generator());
        j["generator"] = json!(rows.lines().collect::<Vec<_>>());
        text.push_str(&rows);
    }
    Ok(Output::new(j, text))
}

fn cmd_certify(r: u32, m: u32, k: u32, unshortened: bool) -> Result<Output, CliError> {
    let code = qrm(r, m, !unshortened).map_err(domain)?;
    let c = certify_zk(&code, k).map_err(domain)?;
    let witness = c.witness.as_ref().map(|w| json!({"j": w.j, "rows": w.rows, "weight": w.weight, "modulus": w.modulus}));
    let j = json!({"r": r, "m": m, "k": k, "n": code.n(), "passed": c.passed, "a": c.a, "x": c.x, "witness": witness});
    let mut text = format!(
        "QRM({r},{m}) n={} k={k}: passed={} a={} x={}\n",
        code.n(),
        c.passed,
        c.a,
        c.x.map_or("none".to_string(), |x| x.to_string())
    );
    if let Some(w) = &c.witness {
        text.push_str(&format!("witness: rows {:?} product weight {} not divisible by {}\n", w.rows, w.weight, w.modulus));
    }
    Ok(Output::new(j, text))
}

fn cmd_poly(k: u32, series: Option<usize>, eps: Option<f64>, exact: bool) -> Result<Output, CliError> {
    let e_out = cisc_output_error(k).map_err(domain)?;
    let leading = e_out.taylor_coefficient(3).map_err(domain)?;
    let mut j = json!({"k": k, "inputs": (1u64 << (k + 2)) - 1, "leading_order": 3, "leading_coefficient": RationalJson::from(&leading)});
    let mut text = format!("k={k} e_out = {} e^3 + O(e^4)\n", show_rational(&leading));
    if let Some(max) = series {
        let coeffs = e_out.series(max + 1).map_err(domain)?;
        let nonzero: BTreeMap<usize, &BigRational> = coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let shown: Vec<String> = nonzero.iter().map(|(i, c)| format!("{i}: {}", show_rational(c))).collect();
        text.push_str(&format!("series: {{{}}}\n", shown.join(", ")));
        j["series"] = nonzero.iter().map(|(i, c)| (i.to_string(), json!(RationalJson::from(*c)))).collect();
    }
    if let Some(e) = eps {
        let p = CiscProtocol::new(k).map_err(domain)?;
        let (o, a) = (p.output_error_at(e), p.acceptance_at(e));
        text.push_str(&format!("at eps={e:e}: e_out={o:e} acceptance={a} E[t]={}\n", 1.0 / a));
        j["evaluation"] = json!({"eps": e, "output_error": o, "acceptance": a, "expected_repetitions": 1.0 / a});
    }
    if exact {
        j["output_error"] = json!(RationalFunctionJson::from(&e_out));
        j["acceptance"] = json!(RationalFunctionJson::from(&cisc_acceptance(k).map_err(domain)?));
    }
    Ok(Output::new(j, text))
}

fn cmd_threshold(k: u32, cfg: &CliConfig) -> Result<Output, CliError> {
    let t = CiscProtocol::new(k).and_then(|p| p.threshold(cfg.bisection_tol)).map_err(domain)?;
    let j = json!({"k": k, "threshold": t, "percent": 100.0 * t, "tolerance": cfg.bisection_tol});
    Ok(Output::new(j, format!("{t:.4} ({:.2}%)\n", 100.0 * t)))
}

fn cmd_verify(k: u32, cfg: &CliConfig) -> Result<Output, CliError> {
    let r = verify(k, cfg.exhaustive_limit, cfg.parallel_degree).map_err(domain)?;
    let word = |b: bool| if b { "agree" } else { "DIFFER" };
    let enumeration = match r.enumeration_matches {
        Some(b) => word(b).to_string(),
        None => format!("skipped ({} sites > limit {})", r.sites, cfg.exhaustive_limit),
    };
    let text = format!("k={k} closed form vs fast path: {}; vs enumeration: {enumeration}\n", word(r.fast_path_matches));
    let j = json!({
        "k": k,
        "fast_path_matches": r.fast_path_matches,
        "enumeration_matches": r.enumeration_matches,
        "sites": r.sites,
        "agreed": r.agreed(),
    });
    Ok(Output { failed: !r.agreed(), ..Output::new(j, text) })
}

fn mek_distiller(cfg: &CliConfig) -> Result<DistillationStepModel, CliError> {
    let path = cfg
        .mek_params_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("the MEK distiller needs --mek-params or ZKDISTILL_MEK_PARAMS".into()))?;
    load_mek_model(path).map_err(domain)
}

fn estimate_text(e: &ResourceEstimate) -> String {
    let k = e.k.map_or("-".to_string(), |k| k.to_string());
    format!(
        "{} k={k} eps={:e} target={:e} levels={} states={:.6} distiller={} mode={}{}\n",
        e.architecture.as_str(),
        e.eps,
        e.eps_target,
        e.levels,
        e.expected_states,
        e.distiller_label,
        e.count_mode.as_str(),
        e.t_count.map_or(String::new(), |t| format!(" t_count={t}"))
    )
}

fn estimates_output(estimates: &[ResourceEstimate]) -> Result<Output, CliError> {
    let rows: Vec<EstimateRow> = estimates.iter().map(EstimateRow::from).collect();
    let csv = rows_to_csv(&rows).map_err(domain)?;
    let text = estimates.iter().map(estimate_text).collect();
    let with_t = |(row, e): (&EstimateRow, &ResourceEstimate)| {
        let mut v = json!(row);
        if let Some(t) = e.t_count {
            v["t_count"] = json!(t);
        }
        v
    };
    let mut items: Vec<_> = rows.iter().zip(estimates).map(with_t).collect();
    let json = if items.len() == 1 { items.remove(0) } else { json!(items) };
    Ok(Output { csv: Some(csv), ..Output::new(json, text) })
}

fn cmd_estimate(which: &EstimateCommand, cfg: &CliConfig) -> Result<Output, CliError> {
    let e = match which {
        EstimateCommand::Risc { eps_target, eps, distiller, mode, budget: b } => {
            let model = match distiller {
                DistillerArg::Qrm15 => DistillationStepModel::qrm15(),
                DistillerArg::Mek => mek_distiller(cfg)?,
            };
            risc_count(*eps_target, *eps, &budget(b)?, &model, (*mode).into()).map_err(domain)?
        }
        EstimateCommand::Cisc { k, eps_target, eps, mode, level_rule, budget: b } => {
            cisc_for_target(*k, *eps, *eps_target, &budget(b)?, (*mode).into(), (*level_rule).into()).map_err(domain)?
        }
    };
    estimates_output(&[e])
}

/// `from:to[:per_decade]` on a log grid, or a comma-separated list.
pub fn parse_targets(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("invalid target grid {spec:?}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() > 3 {
            return Err(bad());
        }
        let from: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let to: f64 = parts.get(1).ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let per: usize = parts.get(2).map_or(Ok(1), |p| p.trim().parse()).map_err(|_| bad())?;
        if !(from > 0.0 && to > 0.0) || per == 0 {
            return Err(bad());
        }
        let (a, b) = (from.log10(), to.log10());
        let steps = ((a - b).abs() * per as f64).round() as usize;
        let dir = if b < a { -1.0 } else { 1.0 };
        Ok((0..=steps).map(|i| 10f64.powf(a + dir * i as f64 / per as f64)).collect())
    } else {
        spec.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
    }
}

fn cmd_sweep(k: &[u32], eps: f64, targets: &str, mode: ModeArg, b: &BudgetArgs, cfg: &CliConfig) -> Result<Output, CliError> {
    let targets = parse_targets(targets)?;
    let mut distillers = vec![DistillationStepModel::qrm15()];
    if cfg.mek_params_path.is_some() {
        distillers.push(mek_distiller(cfg)?);
    }
    let rows = sweep(k, eps, &targets, &budget(b)?, &distillers, mode.into()).map_err(domain)?;
    estimates_output(&rows)
}

fn cmd_circuit(k: Option<u32>, syntax: Syntax, teleport: bool, input: Option<&Path>) -> Result<Output, CliError> {
    let circuit = match (input, k) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| domain(format!("reading {}: {e}", path.display())))?;
            parse_gate_list(&text).map_err(domain)?
        }
        (None, Some(k)) if teleport => build_zk_teleport(k).map_err(domain)?.circuit,
        (None, Some(k)) => build_distillation_circuit(k).map_err(domain)?.circuit,
        (None, None) => return Err(CliError::Usage("circuit needs --k or --input".into())),
    };
    let body = match syntax {
        Syntax::Gates => write_gate_list(&circuit),
        Syntax::Qasm => write_qasm(&circuit),
    };
    let j = json!({
        "qubits": circuit.qubit_count(),
        "ops": circuit.len(),
        "injections": circuit.injection_count(),
        "measurements": circuit.measurement_count(),
        "syntax": match syntax { Syntax::Gates => "gates", Syntax::Qasm => "qasm" },
        "body": body,
    });
    Ok(Output::new(j, body))
}

fn execute(cli: &Cli, cfg: &CliConfig) -> Result<Output, CliError> {
    match &cli.command {
        Command::Code { r, m, matrix } => cmd_code(*r, *m, *matrix),
        Command::Certify { r, m, k, unshortened } => cmd_certify(*r, *m, *k, *unshortened),
        Command::Poly { k, series, eps, exact } => cmd_poly(*k, *series, *eps, *exact),
        Command::Threshold { k } => cmd_threshold(*k, cfg),
        Command::Verify { k } => cmd_verify(*k, cfg),
        Command::Estimate { which } => cmd_estimate(which, cfg),
        Command::Sweep { k, eps, targets, mode, budget } => cmd_sweep(k, *eps, targets, *mode, budget, cfg),
        Command::Circuit { k, syntax, teleport, input } => cmd_circuit(*k, *syntax, *teleport, input.as_deref()),
    }
}

/// Flags over environment over config file over defaults.
pub fn resolve_config(cli: &Cli, env: impl Fn(&str) -> Option<String>) -> Result<CliConfig, CliError> {
    let mut cfg = CliConfig::load(cli.config.as_deref(), env)?;
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    if let Some(p) = &cli.mek_params {
        cfg.mek_params_path = Some(p.clone());
    }
    if let Some(t) = cli.tol {
        cfg.bisection_tol = t;
    }
    if let Some(l) = cli.exhaustive_limit {
        cfg.exhaustive_limit = l;
    }
    if let Some(t) = cli.threads {
        cfg.parallel_degree = Some(t.max(1));
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses `args`, runs the command and writes to `out`/`err`; returns the exit code.
pub fn run<I, T>(args: I, env: impl Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = resolve_config(&cli, env).and_then(|cfg| {
        let output = execute(&cli, &cfg)?;
        Ok((output.render(cfg.output_format)?, output.failed))
    });
    match result {
        Ok((text, failed)) => {
            let _ = out.write_all(text.as_bytes());
            i32::from(failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
