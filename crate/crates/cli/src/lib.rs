//! Driver for the `bloch-speed` command-line tool.
//!
//! Every command is a pure function of its [`RunConfig`] (plus the seed), and
//! all output is assembled in memory before it is written, so repeated runs
//! produce byte-identical files.

pub mod config;
pub mod table;

use std::io::Write;
use std::path::{Path, PathBuf};

use bloch_speed::basis::make_basis;
use bloch_speed::liouvillian::{bloch_generator, classify_phase, PhaseClassification, PhaseLabel, PhaseTolerances};
use bloch_speed::propagator::{sample_exact, uniform_grid};
use bloch_speed::speed::speed_sample;
use bloch_speed::unravel::ensemble_at_times;
use bloch_speed::verify::{run_property_suite, SuiteReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

pub use config::{Command, InitState, ModelSource, OutputFormat, RunConfig};
pub use table::SpeedTable;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid --{field}: {message}")]
    Config { field: &'static str, message: String },
    #[error("numerical failure: {0}")]
    Numerical(#[from] bloch_speed::Error),
    #[error("property suite failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn config(field: &'static str, message: impl Into<String>) -> Self {
        CliError::Config {
            field,
            message: message.into(),
        }
    }

    /// 2 for usage and configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) | CliError::VerificationFailed(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Builds the model, propagates with the matrix exponential on the uniform grid
/// and evaluates every speed at each sample.
pub fn run_simulate(cfg: &RunConfig) -> CliResult<SpeedTable> {
    let prep = cfg.prepare()?;
    let basis = make_basis(prep.model.n())?;
    let gen = bloch_generator(&prep.model, &basis)?;
    let times = uniform_grid(cfg.t_max, prep.dt).map_err(|e| CliError::config("dt", e.to_string()))?;
    let traj = sample_exact(&gen, &prep.init, &times)?;
    traj.check_positivity(&basis)?;
    let samples = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, r)| speed_sample(&prep.model, &basis, t, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpeedTable { samples })
}

pub fn run_classify(cfg: &RunConfig) -> CliResult<PhaseClassification> {
    let model = cfg.build_model()?;
    let basis = make_basis(model.n())?;
    Ok(classify_phase(&model, &basis, PhaseTolerances::default())?)
}

pub fn classification_json(c: &PhaseClassification) -> Value {
    let eigenvalues: Vec<[f64; 2]> = c.eigenvalues.sorted().iter().map(|z| [z.re, z.im]).collect();
    json!({
        "label": c.label.to_string(),
        "eigenvalues": eigenvalues,
        "coalescence_gap": finite_or_null(c.coalescence_gap),
        "max_imag": c.max_imag,
        "vector_condition": finite_or_null(c.eigenvalues.vector_condition),
        "unitary": c.unitary,
    })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub g: f64,
    pub gamma: f64,
    pub label: PhaseLabel,
    pub max_imag: f64,
    pub coalescence_gap: f64,
}

pub const SWEEP_HEADER: &str = "g,gamma,label,max_imag,coalescence_gap";

/// Default sweep axis: 11 points over [0.1, 2].
pub fn default_grid() -> Vec<f64> {
    config::linspace(0.1, 2.0, 11)
}

/// Phase label at every (g, γ) of the outer product, g varying slowest.
pub fn run_sweep(cfg: &RunConfig, g_grid: &[f64], gamma_grid: &[f64]) -> CliResult<Vec<SweepRow>> {
    if g_grid.is_empty() {
        return Err(CliError::config("g-grid", "grid is empty"));
    }
    if gamma_grid.is_empty() {
        return Err(CliError::config("gamma-grid", "grid is empty"));
    }
    if let ModelSource::File(_) = cfg.model {
        return Err(CliError::config("model", "sweep needs a builtin model"));
    }
    let points: Vec<(f64, f64)> = g_grid
        .iter()
        .flat_map(|&g| gamma_grid.iter().map(move |&gamma| (g, gamma)))
        .collect();
    // validate up front so the error names the grid rather than a worker
    for &(g, gamma) in &points {
        let point = RunConfig { g, gamma, ..cfg.clone() };
        point.params().map_err(|e| match e {
            CliError::Config { field: "g", message } => CliError::Config { field: "g-grid", message },
            CliError::Config { message, .. } => CliError::Config {
                field: "gamma-grid",
                message,
            },
            other => other,
        })?;
    }
    points
        .par_iter()
        .map(|&(g, gamma)| {
            let c = run_classify(&RunConfig { g, gamma, ..cfg.clone() })?;
            Ok(SweepRow {
                g,
                gamma,
                label: c.label,
                max_imag: c.max_imag,
                coalescence_gap: c.coalescence_gap,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            table::fmt_real(r.g),
            table::fmt_real(r.gamma),
            r.label,
            table::fmt_real(r.max_imag),
            table::fmt_real(r.coalescence_gap)
        ));
    }
    out
}

pub fn sweep_json(rows: &[SweepRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "g": r.g,
                    "gamma": r.gamma,
                    "label": r.label.to_string(),
                    "max_imag": r.max_imag,
                    "coalescence_gap": finite_or_null(r.coalescence_gap),
                })
            })
            .collect(),
    )
}

/// The three parameter sets: γ = g/2 (unbroken), γ = g (critical), γ = 2g (broken).
pub fn figure1_triples(g: f64) -> [(&'static str, f64, f64); 3] {
    [("unbroken", g, 0.5 * g), ("critical", g, g), ("broken", g, 2.0 * g)]
}

/// Default horizon for the figure: four periods π/√(g² − γ²) of the unbroken panel.
pub fn figure1_default_t_max(g: f64) -> f64 {
    let omega = (g * g - 0.25 * g * g).sqrt();
    4.0 * std::f64::consts::PI / omega
}

/// One speed table per phase; `cfg.gamma` is ignored and `cfg.dt` applies to all three when set.
pub fn run_figure1(cfg: &RunConfig) -> CliResult<Vec<(&'static str, SpeedTable)>> {
    if !matches!(&cfg.model, ModelSource::Builtin(name) if name == "pt") {
        return Err(CliError::config("model", "figure1 uses the pt model"));
    }
    figure1_triples(cfg.g)
        .iter()
        .map(|&(name, g, gamma)| Ok((name, run_simulate(&RunConfig { g, gamma, ..cfg.clone() })?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnravelRow {
    pub t: f64,
    pub mean: Vec<f64>,
    pub standard_error: Vec<f64>,
    pub exact: Vec<f64>,
}

pub const UNRAVEL_HEADER: &str = "t,component,mean,standard_error,exact";

/// Ensemble of jump trajectories reported at `samples` evenly spaced times after 0,
/// next to the deterministic solution.
pub fn run_unravel(cfg: &RunConfig, n_traj: usize, samples: usize) -> CliResult<Vec<UnravelRow>> {
    if samples == 0 {
        return Err(CliError::config("samples", "must be at least 1"));
    }
    if n_traj < bloch_speed::unravel::MIN_TRAJECTORIES {
        return Err(CliError::config(
            "n-traj",
            format!("must be at least {}", bloch_speed::unravel::MIN_TRAJECTORIES),
        ));
    }
    let prep = cfg.prepare()?;
    let n = prep.model.n();
    let basis = make_basis(n)?;
    let psi0 = cfg.initial_ket(n)?;
    let times: Vec<f64> = (0..=samples).map(|k| cfg.t_max * k as f64 / samples as f64).collect();
    let estimates = ensemble_at_times(&prep.model, &basis, &psi0, &times, prep.dt, n_traj, cfg.seed)
        .map_err(|e| match e {
            bloch_speed::Error::StepTooLarge { dt, bound } => {
                CliError::config("dt", format!("{dt} exceeds the jump-probability bound {bound}"))
            }
            other => other.into(),
        })?;
    let gen = bloch_generator(&prep.model, &basis)?;
    let exact = sample_exact(&gen, &prep.init, &times)?;
    Ok(estimates
        .into_iter()
        .zip(exact.states)
        .map(|(e, r)| UnravelRow {
            t: e.t,
            mean: e.mean_r,
            standard_error: e.standard_error,
            exact: r.r,
        })
        .collect())
}

fn component_name(j: usize, d: usize) -> String {
    if d == 3 {
        ["r_x", "r_y", "r_z"][j].to_string()
    } else {
        format!("r_{}", j + 1)
    }
}

pub fn unravel_csv(rows: &[UnravelRow]) -> String {
    let mut out = format!("{UNRAVEL_HEADER}\n");
    for r in rows {
        let d = r.mean.len();
        for j in 0..d {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                table::fmt_real(r.t),
                component_name(j, d),
                table::fmt_real(r.mean[j]),
                table::fmt_real(r.standard_error[j]),
                table::fmt_real(r.exact[j])
            ));
        }
    }
    out
}

pub fn unravel_json(rows: &[UnravelRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({ "t": r.t, "mean": r.mean, "standard_error": r.standard_error, "exact": r.exact }))
            .collect(),
    )
}

pub fn run_verify(seed: u64, cases: usize) -> CliResult<SuiteReport> {
    if cases == 0 {
        return Err(CliError::config("cases", "must be at least 1"));
    }
    Ok(run_property_suite(seed, cases, None)?)
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::config("out", format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::config("out", e.to_string()))
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Parser, Debug)]
#[command(name = "bloch-speed", version, about = "Evolution speeds of open quantum systems in the Bloch picture")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Speed table along the exact trajectory.
    Simulate(CommonArgs),
    /// Phase label and Liouvillian spectrum.
    Classify(CommonArgs),
    /// Phase labels over a (g, γ) grid.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated g values (default: 11 points over 0.1..2).
        #[arg(long = "g-grid", allow_hyphen_values = true)]
        g_grid: Option<String>,
        /// Comma-separated γ values (default: 11 points over 0.1..2).
        #[arg(long = "gamma-grid", allow_hyphen_values = true)]
        gamma_grid: Option<String>,
    },
    /// Quantum-jump ensemble compared with the deterministic solution.
    Unravel {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "n-traj", default_value_t = 1000)]
        n_traj: usize,
        /// Number of report times after t = 0.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Speed tables for the unbroken, critical and broken phases; --out names a directory.
    Figure1(CommonArgs),
    /// Randomized cross-checks of all invariants.
    Verify {
        #[arg(long, default_value_t = bloch_speed::verify::DEFAULT_CASES)]
        cases: usize,
        #[arg(long, default_value_t = bloch_speed::verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Builtin model: pt or dephasing.
    #[arg(long, default_value = "pt", conflicts_with = "model_file")]
    pub model: String,
    /// Model JSON file with fields n, H, L.
    #[arg(long = "model-file")]
    pub model_file: Option<PathBuf>,
    #[arg(long, default_value_t = config::DEFAULT_G, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long, default_value_t = config::DEFAULT_GAMMA, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long = "t-max", allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    /// Default: 1e-3 / max(g, γ).
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    /// up_z, down_z, plus_x, or comma-separated Bloch components.
    #[arg(long, default_value = "up_z", allow_hyphen_values = true)]
    pub init: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl CommonArgs {
    pub fn to_config(&self, command: Command) -> CliResult<RunConfig> {
        let model = match &self.model_file {
            Some(p) => ModelSource::File(p.clone()),
            None => ModelSource::Builtin(self.model.clone()),
        };
        let t_max = self.t_max.unwrap_or(match command {
            Command::Figure1 => figure1_default_t_max(self.g),
            _ => config::DEFAULT_T_MAX,
        });
        Ok(RunConfig {
            command,
            model,
            g: self.g,
            gamma: self.gamma,
            t_max,
            dt: self.dt,
            init: InitState::parse(&self.init)?,
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            },
            out: self.out.clone(),
            seed: self.seed,
        })
    }
}

fn render_table(t: &SpeedTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => t.to_csv(),
        OutputFormat::Json => json_text(&t.to_json_value()),
    }
}

/// Runs one parsed command line.
pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        CliCommand::Simulate(a) => {
            let cfg = a.to_config(Command::Simulate)?;
            let table = run_simulate(&cfg)?;
            emit(cfg.out.as_deref(), &render_table(&table, cfg.format))
        }
        CliCommand::Classify(a) => {
            let cfg = a.to_config(Command::Classify)?;
            let c = run_classify(&cfg)?;
            let text = match cfg.format {
                OutputFormat::Json => json_text(&classification_json(&c)),
                OutputFormat::Csv => format!(
                    "label,max_imag,coalescence_gap\n{},{},{}\n",
                    c.label,
                    table::fmt_real(c.max_imag),
                    table::fmt_real(c.coalescence_gap)
                ),
            };
            emit(cfg.out.as_deref(), &text)
        }
        CliCommand::Sweep { common, g_grid, gamma_grid } => {
            let cfg = common.to_config(Command::Sweep)?;
            let gs = match g_grid {
                Some(s) => config::parse_grid("g-grid", s)?,
                None => default_grid(),
            };
            let gammas = match gamma_grid {
                Some(s) => config::parse_grid("gamma-grid", s)?,
                None => default_grid(),
            };
            let rows = run_sweep(&cfg, &gs, &gammas)?;
            let text = match cfg.format {
                OutputFormat::Csv => sweep_csv(&rows),
                OutputFormat::Json => json_text(&sweep_json(&rows)),
            };
            emit(cfg.out.as_deref(), &text)
        }
        CliCommand::Unravel { common, n_traj, samples } => {
            let cfg = common.to_config(Command::Unravel)?;
            let rows = run_unravel(&cfg, *n_traj, *samples)?;
            let text = match cfg.format {
                OutputFormat::Csv => unravel_csv(&rows),
                OutputFormat::Json => json_text(&unravel_json(&rows)),
            };
            emit(cfg.out.as_deref(), &text)
        }
        CliCommand::Figure1(a) => {
            let cfg = a.to_config(Command::Figure1)?;
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("figure1"));
            let tables = run_figure1(&cfg)?;
            std::fs::create_dir_all(&dir).map_err(|e| CliError::config("out", format!("{}: {e}", dir.display())))?;
            for (name, t) in &tables {
                let path = dir.join(format!("figure1_{name}.{}", cfg.format.extension()));
                emit(Some(&path), &render_table(t, cfg.format))?;
            }
            Ok(())
        }
        CliCommand::Verify { cases, seed, out } => {
            let report = run_verify(*seed, *cases)?;
            emit(out.as_deref(), &json_text(&serde_json::to_value(&report).expect("serializable")))?;
            for c in &report.checks {
                let status = if c.failed == 0 { "PASS" } else { "FAIL" };
                eprintln!(
                    "{status} {} (passed {}, failed {}, skipped {})",
                    c.name, c.passed, c.failed, c.skipped
                );
            }
            if report.all_passed() {
                Ok(())
            } else {
                let failing: Vec<&str> = report.checks.iter().filter(|c| c.failed > 0).map(|c| c.name).collect();
                Err(CliError::VerificationFailed(failing.join(", ")))
            }
        }
    }
}
