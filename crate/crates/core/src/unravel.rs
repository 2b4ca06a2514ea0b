//! Quantum-jump unravelling of the Lindblad equation.
//!
//! Each trajectory is a pure state that drifts under the non-Hermitian
//! K = H − (i/2) Σ L†L and jumps to L_kψ/‖L_kψ‖ with probability dt⟨L_k†L_k⟩
//! per step. The ensemble mean of |ψ⟩⟨ψ| solves the master equation to first
//! order in dt.
//!
//! Trajectory `i` of an ensemble draws from ChaCha8 stream `i` of the ensemble
//! seed, so results do not depend on how rayon schedules the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::OperatorBasis;
use crate::error::{Error, Result};
use crate::liouvillian::LindbladModel;
use crate::linalg::{eigh, vec_norm, CMatrix, HermitianMatrix, C64, I};

/// Bound on dt · max_k λ_max(L_k†L_k).
pub const JUMP_STEP_BOUND: f64 = 0.1;
pub const NORM_TOL: f64 = 1e-10;
pub const MIN_TRAJECTORIES: usize = 100;

/// Precomputed single-step data for a model and step size.
#[derive(Clone, Debug)]
pub struct JumpPropagator {
    lindblads: Vec<CMatrix>,
    rates: Vec<CMatrix>,
    no_jump: CMatrix,
    dt: f64,
}

impl JumpPropagator {
    pub fn new(model: &LindbladModel, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let n = model.n();
        let rates: Vec<CMatrix> = model
            .lindblads()
            .iter()
            .map(|l| &l.adjoint() * l)
            .collect();
        let largest = rates
            .iter()
            .map(|r| {
                let (ev, _) = eigh(&HermitianMatrix::symmetrized(r));
                ev[ev.len() - 1]
            })
            .fold(0.0, f64::max);
        if dt * largest > JUMP_STEP_BOUND {
            return Err(Error::StepTooLarge {
                dt,
                bound: JUMP_STEP_BOUND / largest,
            });
        }
        let mut k = model.hamiltonian().matrix().clone();
        for r in &rates {
            k = &k - &r.scale(I * 0.5);
        }
        // I − i dt K − dt² K²/2
        let k2 = &k * &k;
        let no_jump = &(&CMatrix::identity(n) - &k.scale(I * dt)) - &k2.scale_real(0.5 * dt * dt);
        Ok(Self {
            lindblads: model.lindblads().to_vec(),
            rates,
            no_jump,
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One step from a unit vector; returns the new unit vector and whether a jump occurred.
    pub fn step<R: Rng + ?Sized>(&self, psi: &[C64], rng: &mut R) -> Result<(Vec<C64>, bool)> {
        let norm = vec_norm(psi);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let mut state = psi.to_vec();
        let mut scratch = vec![C64::new(0.0, 0.0); psi.len()];
        let jumped = self.advance(&mut state, &mut scratch, rng)?;
        Ok((state, jumped))
    }

    /// In-place step used by the ensemble loops; `psi` must already be normalized.
    fn advance<R: Rng + ?Sized>(&self, psi: &mut [C64], scratch: &mut [C64], rng: &mut R) -> Result<bool> {
        let u: f64 = rng.random();
        let mut cumulative = 0.0;
        for (l, r) in self.lindblads.iter().zip(&self.rates) {
            r.mul_vec_into(psi, scratch);
            cumulative += (self.dt * crate::linalg::inner(psi, scratch).re).max(0.0);
            if u < cumulative {
                l.mul_vec_into(psi, scratch);
                normalize_into(scratch, psi).ok_or(Error::ZeroNormJump)?;
                return Ok(true);
            }
        }
        self.no_jump.mul_vec_into(psi, scratch);
        normalize_into(scratch, psi).ok_or(Error::NonFinite)?;
        Ok(false)
    }
}

fn normalize_into(v: &[C64], out: &mut [C64]) -> Option<()> {
    let norm = vec_norm(v);
    if !(norm > f64::MIN_POSITIVE && norm.is_finite()) {
        return None;
    }
    for (o, x) in out.iter_mut().zip(v) {
        *o = x / norm;
    }
    Some(())
}

/// Single step, building the propagator on the fly.
pub fn jump_step<R: Rng + ?Sized>(
    model: &LindbladModel,
    psi: &[C64],
    dt: f64,
    rng: &mut R,
) -> Result<(Vec<C64>, bool)> {
    JumpPropagator::new(model, dt)?.step(psi, rng)
}

/// Random source for trajectory `stream` of an ensemble seeded with `seed`.
pub fn trajectory_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug)]
pub struct JumpTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    pub jump_times: Vec<f64>,
    pub rng_stream_id: u64,
}

fn check_initial(model: &LindbladModel, psi0: &[C64]) -> Result<()> {
    if psi0.len() != model.n() {
        return Err(Error::DimensionMismatch {
            expected: model.n(),
            got: psi0.len(),
        });
    }
    let norm = vec_norm(psi0);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

/// Full record of one trajectory on the grid 0, dt, …, t_max.
pub fn jump_trajectory(
    model: &LindbladModel,
    psi0: &[C64],
    t_max: f64,
    dt: f64,
    seed: u64,
    stream: u64,
) -> Result<JumpTrajectory> {
    check_initial(model, psi0)?;
    let prop = JumpPropagator::new(model, dt)?;
    let times = crate::propagator::uniform_grid(t_max, dt)?;
    let mut rng = trajectory_rng(seed, stream);
    let mut states = Vec::with_capacity(times.len());
    let mut jump_times = Vec::new();
    states.push(psi0.to_vec());
    for &t in &times[1..] {
        let (next, jumped) = prop.step(states.last().expect("nonempty"), &mut rng)?;
        if jumped {
            jump_times.push(t);
        }
        states.push(next);
    }
    Ok(JumpTrajectory {
        times,
        states,
        jump_times,
        rng_stream_id: stream,
    })
}

/// Ensemble average of |ψ(t)⟩⟨ψ(t)| with per-component standard errors.
#[derive(Clone, Debug)]
pub struct EnsembleEstimate {
    pub t: f64,
    pub mean_rho: HermitianMatrix,
    /// Bloch coordinates of `mean_rho`.
    pub mean_r: Vec<f64>,
    /// Standard error of each Bloch coordinate of the mean.
    pub standard_error: Vec<f64>,
    pub n_traj: usize,
    pub seed: u64,
}

/// States of one trajectory at each of `times`; segment lengths are split
/// into whole steps of at most `dt`.
fn run_to_times(
    psi0: &[C64],
    props: &[(JumpPropagator, usize)],
    seed: u64,
    stream: u64,
) -> Result<Vec<Vec<C64>>> {
    let mut rng = trajectory_rng(seed, stream);
    let mut psi = psi0.to_vec();
    let mut scratch = psi.clone();
    let mut out = Vec::with_capacity(props.len());
    for (prop, steps) in props {
        for _ in 0..*steps {
            prop.advance(&mut psi, &mut scratch, &mut rng)?;
        }
        out.push(psi.clone());
    }
    Ok(out)
}

/// Ensemble estimates at several increasing times from one set of trajectories.
pub fn ensemble_at_times(
    model: &LindbladModel,
    basis: &OperatorBasis,
    psi0: &[C64],
    times: &[f64],
    dt: f64,
    n_traj: usize,
    seed: u64,
) -> Result<Vec<EnsembleEstimate>> {
    check_initial(model, psi0)?;
    if n_traj < MIN_TRAJECTORIES {
        return Err(Error::InvalidParameter(format!(
            "n_traj must be at least {MIN_TRAJECTORIES}, got {n_traj}"
        )));
    }
    if basis.n() != model.n() {
        return Err(Error::DimensionMismatch {
            expected: model.n(),
            got: basis.n(),
        });
    }
    let mut props = Vec::with_capacity(times.len());
    let mut previous = 0.0;
    for &t in times {
        let span = t - previous;
        if !(span >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(
                "ensemble times must be finite, non-negative and non-decreasing".into(),
            ));
        }
        let steps = (span / dt - 1e-9).ceil().max(0.0) as usize;
        let seg_dt = if steps == 0 { dt } else { span / steps as f64 };
        props.push((JumpPropagator::new(model, seg_dt)?, steps));
        previous = t;
    }

    let runs: Vec<Vec<Vec<C64>>> = (0..n_traj as u64)
        .into_par_iter()
        .map(|i| run_to_times(psi0, &props, seed, i))
        .collect::<Result<_>>()?;

    // In-order reduction keeps the sums bit-identical across thread counts.
    let n = model.n();
    let d = basis.bloch_dim();
    let count = n_traj as f64;
    let mut estimates = Vec::with_capacity(times.len());
    for (ti, &t) in times.iter().enumerate() {
        let mut rho = CMatrix::zeros(n);
        let mut sum = vec![0.0; d];
        let mut sum_sq = vec![0.0; d];
        for run in &runs {
            let proj = CMatrix::outer(&run[ti], &run[ti]);
            let r = basis.coordinates(&proj);
            for j in 0..d {
                sum[j] += r[j];
                sum_sq[j] += r[j] * r[j];
            }
            rho = &rho + &proj;
        }
        let mean_r: Vec<f64> = sum.iter().map(|s| s / count).collect();
        let standard_error = sum_sq
            .iter()
            .zip(&mean_r)
            .map(|(sq, m)| {
                let var = ((sq - count * m * m) / (count - 1.0)).max(0.0);
                (var / count).sqrt()
            })
            .collect();
        estimates.push(EnsembleEstimate {
            t,
            mean_rho: HermitianMatrix::symmetrized(&rho.scale_real(1.0 / count)),
            mean_r,
            standard_error,
            n_traj,
            seed,
        });
    }
    Ok(estimates)
}

pub fn ensemble_mean(
    model: &LindbladModel,
    basis: &OperatorBasis,
    psi0: &[C64],
    t: f64,
    dt: f64,
    n_traj: usize,
    seed: u64,
) -> Result<EnsembleEstimate> {
    let mut v = ensemble_at_times(model, basis, psi0, &[t], dt, n_traj, seed)?;
    Ok(v.remove(0))
}
