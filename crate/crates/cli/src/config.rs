use std::path::PathBuf;

use bloch_speed::basis::{make_basis, BlochState};
use bloch_speed::liouvillian::{LindbladModel, ModelFile};
use bloch_speed::linalg::{eigh, C64};
use bloch_speed::models::{builtin_model, NamedState, TwoLevelParams, BUILTIN_MODELS};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Classify,
    Sweep,
    Unravel,
    Figure1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitState {
    Named(NamedState),
    Bloch(Vec<f64>),
}

impl InitState {
    /// "up_z", "down_z", "plus_x", or comma-separated Bloch components.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        if let Some(named) = NamedState::parse(s) {
            return Ok(InitState::Named(named));
        }
        let parts: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
        match parts {
            Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(InitState::Bloch(v)),
            _ => Err(CliError::config(
                "init",
                format!("'{s}' is neither up_z, down_z, plus_x nor a comma-separated vector"),
            )),
        }
    }
}

pub const DEFAULT_G: f64 = 1.0;
pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_T_MAX: f64 = 10.0;
/// dt = DT_FACTOR / max(g, γ) unless given.
pub const DT_FACTOR: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelSource,
    pub g: f64,
    pub gamma: f64,
    pub t_max: f64,
    /// None selects the default step for the model's rates.
    pub dt: Option<f64>,
    pub init: InitState,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Simulate,
            model: ModelSource::Builtin("pt".into()),
            g: DEFAULT_G,
            gamma: DEFAULT_GAMMA,
            t_max: DEFAULT_T_MAX,
            dt: None,
            init: InitState::Named(NamedState::UpZ),
            format: OutputFormat::Csv,
            out: None,
            seed: 0,
        }
    }
}

/// A validated model together with the initial state.
pub struct Prepared {
    pub model: LindbladModel,
    pub init: BlochState,
    pub dt: f64,
}

impl RunConfig {
    pub fn params(&self) -> Result<TwoLevelParams, CliError> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(CliError::config("g", format!("must be positive and finite, got {}", self.g)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(CliError::config(
                "gamma",
                format!("must be non-negative and finite, got {}", self.gamma),
            ));
        }
        TwoLevelParams::new(self.g, self.gamma).map_err(|e| CliError::config("g", e.to_string()))
    }

    pub fn build_model(&self) -> Result<LindbladModel, CliError> {
        match &self.model {
            ModelSource::Builtin(name) => {
                if !BUILTIN_MODELS.contains(&name.as_str()) {
                    return Err(CliError::config(
                        "model",
                        format!("unknown model '{name}' (expected one of {BUILTIN_MODELS:?})"),
                    ));
                }
                Ok(builtin_model(name, self.params()?)?)
            }
            ModelSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::config("model-file", format!("{}: {e}", path.display())))?;
                let file = ModelFile::from_json(&text)
                    .map_err(|e| CliError::config("model-file", format!("{}: {e}", path.display())))?;
                file.to_model()
                    .map_err(|e| CliError::config("model-file", format!("{}: {e}", path.display())))
            }
        }
    }

    /// Rate scale used for the default step: max(g, γ) for builtins, operator norms otherwise.
    pub fn rate_scale(&self, model: &LindbladModel) -> f64 {
        let scale = match self.model {
            ModelSource::Builtin(_) => self.g.max(self.gamma),
            ModelSource::File(_) => model
                .lindblads()
                .iter()
                .map(|l| l.max_norm().powi(2))
                .fold(model.hamiltonian().max_norm(), f64::max),
        };
        if scale > 0.0 {
            scale
        } else {
            1.0
        }
    }

    pub fn validate_times(&self, dt: f64) -> Result<(), CliError> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(CliError::config("t-max", format!("must be positive, got {}", self.t_max)));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(CliError::config("dt", format!("must be positive, got {dt}")));
        }
        if dt > self.t_max {
            return Err(CliError::config(
                "dt",
                format!("{dt} exceeds t-max {}", self.t_max),
            ));
        }
        Ok(())
    }

    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let model = self.build_model()?;
        let dt = self.dt.unwrap_or(DT_FACTOR / self.rate_scale(&model));
        self.validate_times(dt)?;
        let init = self.initial_state(model.n())?;
        Ok(Prepared { model, init, dt })
    }

    pub fn initial_state(&self, n: usize) -> Result<BlochState, CliError> {
        let basis = make_basis(n)?;
        let state = match &self.init {
            InitState::Named(s) => basis.embed(&bloch_speed::linalg::HermitianMatrix::projector(&s.ket(n)))?,
            InitState::Bloch(r) => BlochState::new(n, r.clone())
                .map_err(|e| CliError::config("init", e.to_string()))?,
        };
        let min = basis.reconstruct(&state)?.min_eigenvalue();
        if min < -1e-9 {
            return Err(CliError::config(
                "init",
                format!("Bloch vector lies outside the state space (density matrix eigenvalue {min:e})"),
            ));
        }
        Ok(state)
    }

    /// State vector for the initial condition; explicit Bloch vectors must be pure.
    pub fn initial_ket(&self, n: usize) -> Result<Vec<C64>, CliError> {
        if let InitState::Named(s) = &self.init {
            return Ok(s.ket(n));
        }
        let basis = make_basis(n)?;
        let rho = basis.reconstruct(&self.initial_state(n)?)?;
        let purity = rho.trace_product(&rho).re;
        if (purity - 1.0).abs() > 1e-9 {
            return Err(CliError::config(
                "init",
                format!("unravelling needs a pure initial state (purity {purity})"),
            ));
        }
        let (_, vectors) = eigh(&rho);
        Ok((0..n).map(|i| vectors[(i, n - 1)]).collect())
    }
}

/// Comma-separated reals; an empty string gives an empty list.
pub fn parse_grid(field: &'static str, s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::config(field, format!("'{p}' is not a number")))
        })
        .collect()
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}
