//! Time evolution of Bloch vectors.
//!
//! [`evolve_exact`] is the primary path: the generator is constant, so the
//! affine flow ṙ = Λr + b is one matrix exponential of the augmented
//! generator. [`evolve_rk4`] is a fixed-step Runge–Kutta integrator kept
//! deliberately independent of the exponential as a cross-check.

use crate::basis::{BlochState, OperatorBasis};
use crate::error::{Error, Result};
use crate::liouvillian::{bloch_generator, BlochGenerator, LindbladModel};
use crate::linalg::real_expm;

/// Minimum eigenvalue tolerated in a reconstructed density matrix.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Sampled Bloch trajectory on a uniform grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Fails with a diagnostic at the first sample whose density matrix has a
    /// negative eigenvalue beyond [`POSITIVITY_TOL`].
    pub fn check_positivity(&self, basis: &OperatorBasis) -> Result<()> {
        for (t, s) in self.times.iter().zip(&self.states) {
            let min = basis.reconstruct(s)?.min_eigenvalue();
            if min < -POSITIVITY_TOL {
                return Err(Error::PositivityViolation {
                    t: *t,
                    min_eigenvalue: min,
                });
            }
        }
        Ok(())
    }
}

/// Uniform grid 0, dt, 2dt, … up to t_max (inclusive when t_max is a multiple of dt).
pub fn uniform_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite() && t_max.is_finite() && dt <= t_max) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < dt <= t_max (dt = {dt}, t_max = {t_max})"
        )));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

/// r(t) for ṙ = Λr + b via exp of [[Λ, b], [0, 0]] applied to (r0, 1).
pub fn evolve_exact(gen: &BlochGenerator, r0: &BlochState, t: f64) -> Result<BlochState> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("negative time {t}")));
    }
    let d = gen.lambda.dim();
    if r0.r.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: r0.r.len(),
        });
    }
    if t == 0.0 {
        return Ok(r0.clone());
    }
    let prop = real_expm(&gen.augmented(), t)?;
    let mut aug = r0.r.clone();
    aug.push(1.0);
    let mut out = prop.mul_vec(&aug);
    out.truncate(d);
    BlochState::new(r0.n, out)
}

/// evolve_exact at each requested time (each one from r0, so errors do not accumulate).
pub fn sample_exact(gen: &BlochGenerator, r0: &BlochState, times: &[f64]) -> Result<Trajectory> {
    let states = times
        .iter()
        .map(|&t| evolve_exact(gen, r0, t))
        .collect::<Result<Vec<_>>>()?;
    check_increasing(times)?;
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

fn check_increasing(times: &[f64]) -> Result<()> {
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("sample times must increase strictly".into()));
    }
    Ok(())
}

/// Classical RK4 on ṙ = Λr + b with fixed step `dt`, sampled every step.
pub fn evolve_rk4(
    model: &LindbladModel,
    basis: &OperatorBasis,
    r0: &BlochState,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory> {
    let gen = bloch_generator(model, basis)?;
    rk4_with_generator(&gen, r0, t_max, dt)
}

/// RK4 stability guard: dt·‖Λ‖∞ must not exceed this.
pub const RK4_STABILITY: f64 = 0.5;

pub fn rk4_with_generator(
    gen: &BlochGenerator,
    r0: &BlochState,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory> {
    let times = uniform_grid(t_max, dt)?;
    let norm = gen.lambda.inf_norm();
    if dt * norm > RK4_STABILITY {
        return Err(Error::StepTooLarge {
            dt,
            bound: RK4_STABILITY / norm,
        });
    }
    let f = |r: &[f64]| gen.velocity(r);
    let axpy = |r: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        r.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };
    let mut states = Vec::with_capacity(times.len());
    let mut r = r0.r.clone();
    states.push(r0.clone());
    for _ in 1..times.len() {
        let k1 = f(&r);
        let k2 = f(&axpy(&r, &k1, 0.5 * dt));
        let k3 = f(&axpy(&r, &k2, 0.5 * dt));
        let k4 = f(&axpy(&r, &k3, dt));
        for i in 0..r.len() {
            r[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        states.push(BlochState::new(r0.n, r.clone())?);
    }
    Ok(Trajectory { times, states })
}
