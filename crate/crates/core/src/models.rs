//! Built-in two-level models with closed-form trajectories.
//!
//! `dephasing`: H = ½g σz, L = √γ σz (commuting; pure decoherence).
//! `pt`: H = ½g σx, L = √γ σz, whose Liouvillian spectrum {0, −2γ, −γ ± √(γ² − g²)}
//! passes through an exceptional point at g = γ.

use crate::basis::BlochState;
use crate::error::{Error, Result};
use crate::liouvillian::LindbladModel;
use crate::linalg::{pauli_x, pauli_z, HermitianMatrix, C64};

/// Coupling g > 0 and rate γ ≥ 0, both in 1/time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelParams {
    pub g: f64,
    pub gamma: f64,
}

impl TwoLevelParams {
    pub fn new(g: f64, gamma: f64) -> Result<Self> {
        if !(g.is_finite() && gamma.is_finite()) {
            return Err(Error::NonFinite);
        }
        if g <= 0.0 {
            return Err(Error::InvalidParameter(format!("g must be positive, got {g}")));
        }
        if gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be non-negative, got {gamma}"
            )));
        }
        Ok(Self { g, gamma })
    }
}

fn two_level(h: crate::linalg::CMatrix, gamma: f64) -> LindbladModel {
    let h = HermitianMatrix::new(h).expect("scaled Pauli matrices are Hermitian");
    LindbladModel::new(h, vec![pauli_z().scale_real(gamma.sqrt())]).expect("2x2 operators")
}

pub fn dephasing_model(p: TwoLevelParams) -> LindbladModel {
    two_level(pauli_z().scale_real(0.5 * p.g), p.gamma)
}

pub fn pt_model(p: TwoLevelParams) -> LindbladModel {
    two_level(pauli_x().scale_real(0.5 * p.g), p.gamma)
}

/// Names accepted by [`builtin_model`].
pub const BUILTIN_MODELS: [&str; 2] = ["dephasing", "pt"];

pub fn builtin_model(name: &str, p: TwoLevelParams) -> Result<LindbladModel> {
    match name {
        "dephasing" => Ok(dephasing_model(p)),
        "pt" => Ok(pt_model(p)),
        other => Err(Error::InvalidParameter(format!(
            "unknown model '{other}' (expected one of {BUILTIN_MODELS:?})"
        ))),
    }
}

fn check_qubit(r0: &BlochState) -> Result<()> {
    if r0.n != 2 || r0.r.len() != 3 {
        return Err(Error::LengthMismatch {
            expected: 3,
            got: r0.r.len(),
        });
    }
    Ok(())
}

/// v²(t) = e^{−4γt}(4γ² + g²)[r_x(0)² + r_y(0)²] for the dephasing model.
pub fn dephasing_speed_closed_form(p: TwoLevelParams, r0: &BlochState, t: f64) -> Result<f64> {
    check_qubit(r0)?;
    let transverse = r0.r[0] * r0.r[0] + r0.r[1] * r0.r[1];
    Ok((-4.0 * p.gamma * t).exp() * (4.0 * p.gamma * p.gamma + p.g * p.g) * transverse)
}

/// Which analytic branch the PT closed form uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtBranch {
    /// g > γ: ω = √(g² − γ²) real.
    Oscillatory,
    /// |ω t| small, including the exceptional point: power series in ω²t².
    Series,
    /// g < γ: κ = √(γ² − g²), hyperbolic functions.
    Hyperbolic,
}

/// EP neighbourhood, relative to g, where the polynomial branch is forced.
pub const EP_WINDOW: f64 = 1e-8;

/// e^{−γt}cos(ωt) and e^{−γt}sin(ωt)/ω, continued analytically through ω² ≤ 0.
fn damped_kernels(p: TwoLevelParams, t: f64) -> (f64, f64, PtBranch) {
    let (g, gamma) = (p.g, p.gamma);
    let omega_sq = (g - gamma) * (g + gamma);
    let q = omega_sq * t * t;
    let decay = (-gamma * t).exp();
    if (g - gamma).abs() <= EP_WINDOW * g || q.abs() <= 1.0 {
        // cos ωt = Σ (−q)^k/(2k)!,  sin ωt/ω = t Σ (−q)^k/(2k+1)!
        let (mut c, mut s) = (0.0, 0.0);
        let mut term_c = 1.0;
        let mut term_s = 1.0;
        for k in 0..40 {
            c += term_c;
            s += term_s;
            let k = k as f64;
            term_c *= -q / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            term_s *= -q / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            if term_c.abs() < 1e-18 * c.abs() && term_s.abs() < 1e-18 * s.abs() {
                break;
            }
        }
        (decay * c, decay * s * t, PtBranch::Series)
    } else if omega_sq > 0.0 {
        let omega = omega_sq.sqrt();
        (
            decay * (omega * t).cos(),
            decay * (omega * t).sin() / omega,
            PtBranch::Oscillatory,
        )
    } else {
        let kappa = (-omega_sq).sqrt();
        // e^{(κ−γ)t} with κ − γ = −g²/(γ + κ), free of cancellation
        let slow = (-g * g / (gamma + kappa) * t).exp();
        let fast = (-(gamma + kappa) * t).exp();
        (0.5 * (slow + fast), 0.5 * (slow - fast) / kappa, PtBranch::Hyperbolic)
    }
}

/// Branch the closed form would use at (p, t).
pub fn pt_branch(p: TwoLevelParams, t: f64) -> PtBranch {
    damped_kernels(p, t).2
}

/// Closed-form PT-model trajectory from r0 (components ordered x, y, z).
pub fn pt_closed_form(p: TwoLevelParams, r0: &BlochState, t: f64) -> Result<BlochState> {
    check_qubit(r0)?;
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("negative time {t}")));
    }
    let (g, gamma) = (p.g, p.gamma);
    let (c, s) = {
        let (c, s, _) = damped_kernels(p, t);
        (c, s)
    };
    let [x0, y0, z0] = [r0.r[0], r0.r[1], r0.r[2]];
    let x = (-2.0 * gamma * t).exp() * x0;
    let y = (c - gamma * s) * y0 - g * s * z0;
    let z = g * s * y0 + (c + gamma * s) * z0;
    BlochState::new(2, vec![x, y, z])
}

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Named pure qubit states and their Bloch vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    UpZ,
    DownZ,
    PlusX,
}

impl NamedState {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "up_z" => Some(Self::UpZ),
            "down_z" => Some(Self::DownZ),
            "plus_x" => Some(Self::PlusX),
            _ => None,
        }
    }

    pub fn bloch(self) -> BlochState {
        let r = match self {
            Self::UpZ => vec![0.0, 0.0, S],
            Self::DownZ => vec![0.0, 0.0, -S],
            Self::PlusX => vec![S, 0.0, 0.0],
        };
        BlochState { n: 2, r }
    }

    /// State vector in dimension `n`: |0⟩, |n−1⟩, or (|0⟩ + |1⟩)/√2.
    pub fn ket(self, n: usize) -> Vec<C64> {
        let mut psi = vec![C64::new(0.0, 0.0); n];
        match self {
            Self::UpZ => psi[0] = C64::new(1.0, 0.0),
            Self::DownZ => psi[n - 1] = C64::new(1.0, 0.0),
            Self::PlusX => {
                psi[0] = C64::new(S, 0.0);
                psi[1] = C64::new(S, 0.0);
            }
        }
        psi
    }
}
