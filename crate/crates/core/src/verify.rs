//! Randomized cross-checks between independent evaluation routes.
//!
//! Every case draws a random model and state from its own ChaCha8 stream, runs
//! each check, and the report is assembled in case order, so the outcome does
//! not depend on thread scheduling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{make_basis, OperatorBasis};
use crate::error::{Error, Result};
use crate::liouvillian::{bloch_generator, LindbladModel};
use crate::linalg::{eigh, spectrum, CMatrix, HermitianMatrix, C64};
use crate::metric::{hermitian_counterpart, MetricOperator};
use crate::models::{pt_closed_form, pt_model, TwoLevelParams};
use crate::propagator::{evolve_exact, rk4_with_generator};
use crate::speed::{radial_speed, radial_speed_identity_check, speed_decomposition, speed_squared, variance, wy_skew};
use crate::unravel::{ensemble_mean, trajectory_rng, JUMP_STEP_BOUND};

/// Parameters of a random Lindblad model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelGenerator {
    pub n: usize,
    /// Max-norm of H.
    pub hamiltonian_scale: f64,
    /// Max-norm of each L_k.
    pub lindblad_scale: f64,
    pub n_lindblads: usize,
    pub hermitian_lindblads: bool,
    pub seed: u64,
}

impl ModelGenerator {
    pub fn new(n: usize, n_lindblads: usize, hermitian_lindblads: bool, seed: u64) -> Self {
        Self {
            n,
            hamiltonian_scale: 1.0,
            lindblad_scale: 0.5,
            n_lindblads,
            hermitian_lindblads,
            seed,
        }
    }
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, |_, _| gaussian(rng))
}

fn rescaled(m: CMatrix, scale: f64) -> CMatrix {
    let norm = m.max_norm();
    if norm == 0.0 {
        m
    } else {
        m.scale_real(scale / norm)
    }
}

/// (A + A†)/2 for Gaussian A, rescaled to max-norm `scale`.
pub fn random_hermitian(n: usize, scale: f64, rng: &mut impl Rng) -> HermitianMatrix {
    let a = random_matrix(n, rng);
    let h = (&a + &a.adjoint()).scale_real(0.5);
    HermitianMatrix::symmetrized(&rescaled(h, scale))
}

pub fn random_model(gen: &ModelGenerator) -> Result<LindbladModel> {
    if gen.n < crate::basis::MIN_DIM || gen.n > crate::basis::MAX_DIM {
        return Err(Error::DimensionOutOfRange(gen.n));
    }
    let mut rng = trajectory_rng(gen.seed, 0);
    let h = random_hermitian(gen.n, gen.hamiltonian_scale, &mut rng);
    let lindblads = (0..gen.n_lindblads)
        .map(|_| {
            if gen.hermitian_lindblads {
                random_hermitian(gen.n, gen.lindblad_scale, &mut rng).into_inner()
            } else {
                rescaled(random_matrix(gen.n, &mut rng), gen.lindblad_scale)
            }
        })
        .collect();
    LindbladModel::new(h, lindblads)
}

/// Unit vector with Gaussian components.
pub fn random_pure_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = crate::linalg::vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// G G† / tr for a Gaussian n×rank matrix G (rank 1 gives a pure state).
pub fn random_density(n: usize, rank: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let mut rho = CMatrix::zeros(n);
    for _ in 0..rank.max(1) {
        let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        rho = &rho + &CMatrix::outer(&v, &v);
    }
    let tr = rho.trace().re;
    HermitianMatrix::symmetrized(&rho.scale_real(1.0 / tr))
}

/// Unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    eigh(&random_hermitian(n, 1.0, rng)).1
}

/// A pseudo-Hermitian instance with known spectrum.
#[derive(Clone, Debug)]
pub struct PseudoHermitianInstance {
    /// F = u h u⁻¹
    pub f: CMatrix,
    /// g = u²
    pub metric: MetricOperator,
    /// Ascending eigenvalues of the Hermitian h used to build F.
    pub spectrum: Vec<f64>,
}

/// F = u h u⁻¹ with h random Hermitian and u = W diag(d) W† random positive, so that
/// F† = g⁻¹ F g for g = u². `log10_cond` bounds log10 of cond(g).
pub fn random_pseudo_hermitian(n: usize, log10_cond: f64, rng: &mut impl Rng) -> Result<PseudoHermitianInstance> {
    let h = random_hermitian(n, 1.0, rng);
    let w = random_unitary(n, rng);
    let half = 0.5 * log10_cond;
    let mut d: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(0.0..=half))).collect();
    // pin the extremes so the condition number is actually reached
    d[0] = 1.0;
    if n > 1 {
        d[1] = 10f64.powf(half);
    }
    let u = &(&w * &CMatrix::diag_real(&d)) * &w.adjoint();
    let u_inv = &(&w * &CMatrix::diag_real(&d.iter().map(|x| 1.0 / x).collect::<Vec<_>>())) * &w.adjoint();
    let f = &(&u * h.matrix()) * &u_inv;
    let g = HermitianMatrix::symmetrized(&(&u * &u));
    let (spectrum, _) = eigh(&h);
    Ok(PseudoHermitianInstance {
        f,
        metric: MetricOperator::new(g)?,
        spectrum,
    })
}

/// Deliberate defects for testing the suite itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Fault {
    /// Shift Λ₀₁ by `delta` before the generator consistency check.
    CorruptLambda { delta: f64 },
}

pub const CHECKS: [&str; 11] = [
    "embed_round_trip",
    "generator_consistency",
    "normal_lindblad_drift",
    "spectrum_conjugation",
    "pythagorean_split",
    "decomposition_sum",
    "wy_sandwich",
    "radial_identity",
    "trajectory_triple",
    "unravelling_agreement",
    "pseudo_hermitian_spectrum",
];

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_CASES: usize = 1000;

/// Cases whose index is a multiple of this also run the Monte Carlo check.
pub const UNRAVEL_EVERY: usize = 50;
const UNRAVEL_TRAJ: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseConfig {
    pub case: usize,
    pub generator: ModelGenerator,
    pub state_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub config: CaseConfig,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Failing case with the smallest dimension (ties broken by case index).
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub n_cases: usize,
    pub checks: Vec<CheckSummary>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> Outcome {
    if (got - want).abs() <= tol && got.is_finite() {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{label}: got {got:e}, expected {want:e} (tol {tol:e})"))
    }
}

fn from_result(r: Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")))
}

fn case_config(seed: u64, case: usize) -> (CaseConfig, ChaCha8Rng) {
    let mut rng = trajectory_rng(seed, case as u64);
    let n = rng.random_range(2..=4);
    let n_lindblads = rng.random_range(1..=3);
    let hermitian = rng.random_bool(0.3);
    let model_seed = rng.random();
    let state_rank = if rng.random_bool(0.25) { 1 } else { rng.random_range(1..=n) };
    let mut generator = ModelGenerator::new(n, n_lindblads, hermitian, model_seed);
    generator.hamiltonian_scale = rng.random_range(0.2..2.0);
    generator.lindblad_scale = rng.random_range(0.1..1.0);
    (
        CaseConfig {
            case,
            generator,
            state_rank,
        },
        rng,
    )
}

fn run_case(seed: u64, case: usize, fault: Option<Fault>) -> (CaseConfig, Vec<Outcome>) {
    let (config, mut rng) = case_config(seed, case);
    let outcomes = match random_model(&config.generator).and_then(|m| Ok((make_basis(m.n())?, m))) {
        Ok((basis, model)) => {
            let rho = random_density(model.n(), config.state_rank, &mut rng);
            let mut out = vec![
                check_round_trip(&basis, &rho),
                from_result(check_consistency(&model, &basis, &rho, fault)),
                from_result(check_normal_drift(&model, &basis, config.generator.hermitian_lindblads)),
                from_result(check_conjugation(&model, &basis)),
                from_result(check_pythagoras(&model, &basis, &rho)),
                from_result(check_decomposition(&model, &basis, &rho)),
                from_result(check_wy(&model, &rho, config.state_rank == 1)),
                from_result(check_radial_identity(&model, &basis, &rho)),
                from_result(check_triple(&mut rng)),
            ];
            out.push(if case % UNRAVEL_EVERY == 0 {
                from_result(check_unravelling(&model, &basis, &mut rng))
            } else {
                Outcome::Skip
            });
            out.push(from_result(check_pseudo_hermitian(model.n(), &mut rng)));
            out
        }
        Err(e) => CHECKS
            .iter()
            .map(|_| Outcome::Fail(format!("model construction failed: {e}")))
            .collect(),
    };
    (config, outcomes)
}

fn check_round_trip(basis: &OperatorBasis, rho: &HermitianMatrix) -> Outcome {
    let back = basis.embed(rho).and_then(|s| basis.reconstruct(&s));
    match back {
        Ok(b) => within("max |ρ − reconstruct(embed(ρ))|", (b.matrix() - rho.matrix()).max_norm(), 0.0, 1e-12),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

/// Λr + b against the coordinates of Lρ computed on matrices.
fn check_consistency(
    model: &LindbladModel,
    basis: &OperatorBasis,
    rho: &HermitianMatrix,
    fault: Option<Fault>,
) -> Result<Outcome> {
    let mut gen = bloch_generator(model, basis)?;
    if let Some(Fault::CorruptLambda { delta }) = fault {
        gen = gen.with_corrupted_lambda(0, 1, delta);
    }
    let r = basis.embed(rho)?;
    let bloch = gen.velocity(&r.r);
    let operator = basis.coordinates(model.apply_liouvillian(rho)?.matrix());
    let err = bloch.iter().zip(&operator).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let scale = operator.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    Ok(within("max |Λr + b − coords(Lρ)|", err, 0.0, 1e-10 * scale))
}

fn check_normal_drift(model: &LindbladModel, basis: &OperatorBasis, hermitian: bool) -> Result<Outcome> {
    if !hermitian {
        return Ok(Outcome::Skip);
    }
    let gen = bloch_generator(model, basis)?;
    let b = gen.b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(within("max |b| for Hermitian L", b, 0.0, 1e-12))
}

fn check_conjugation(model: &LindbladModel, basis: &OperatorBasis) -> Result<Outcome> {
    let gen = bloch_generator(model, basis)?;
    let spec = spectrum(&gen.full)?;
    let scale = spec.scale().max(1.0);
    let mut worst = 0.0f64;
    for z in &spec.values {
        let nearest = spec
            .values
            .iter()
            .map(|w| (w - z.conj()).norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    // defective clusters spread as ε^{1/k}; the conjugate partner still matches to rounding
    if let Outcome::Fail(s) = within("max distance to conjugate", worst, 0.0, 1e-8 * scale) {
        return Ok(Outcome::Fail(s));
    }
    let sum: C64 = spec.values.iter().sum();
    Ok(within("Σλ − tr", sum.re, gen.full.trace(), 1e-9 * scale * spec.values.len() as f64))
}

/// v² = v_R² + v_T² with v_T taken from the Bloch velocity's component orthogonal to r.
fn check_pythagoras(model: &LindbladModel, basis: &OperatorBasis, rho: &HermitianMatrix) -> Result<Outcome> {
    let r = basis.embed(rho)?;
    let norm = r.radius_squared().sqrt();
    if norm < 1e-12 {
        return Ok(Outcome::Skip);
    }
    let v2 = speed_squared(model, rho, basis)?;
    let v_r = radial_speed(model, rho, basis)?;
    let gen = bloch_generator(model, basis)?;
    let rdot = gen.velocity(&r.r);
    let along: f64 = rdot.iter().zip(&r.r).map(|(a, b)| a * b).sum::<f64>() / norm;
    let v_t2: f64 = rdot
        .iter()
        .zip(&r.r)
        .map(|(a, b)| (a - along * b / norm).powi(2))
        .sum();
    Ok(within("v_R² + v_T²", v_r * v_r + v_t2, v2, 1e-9 * v2.max(1.0)))
}

fn check_decomposition(model: &LindbladModel, basis: &OperatorBasis, rho: &HermitianMatrix) -> Result<Outcome> {
    let d = speed_decomposition(model, rho)?;
    let v2 = speed_squared(model, rho, basis)?;
    Ok(within("unitary + cross + dissipator", d.total(), v2, 1e-10 * v2.max(1.0)))
}

fn check_wy(model: &LindbladModel, rho: &HermitianMatrix, pure: bool) -> Result<Outcome> {
    let h = model.hamiltonian();
    let skew = wy_skew(h, rho)?;
    let var = variance(h, rho);
    if skew < -1e-10 || skew > var + 1e-10 {
        return Ok(Outcome::Fail(format!("skew {skew:e} outside [0, variance {var:e}]")));
    }
    if pure {
        return Ok(within("skew at pure state", skew, var, 1e-10));
    }
    Ok(Outcome::Pass)
}

fn check_radial_identity(model: &LindbladModel, basis: &OperatorBasis, rho: &HermitianMatrix) -> Result<Outcome> {
    match radial_speed_identity_check(model, rho, basis) {
        Ok((v_r, identity)) => Ok(within("v_R vs |ΣS(L)|/|r|", v_r, identity, 1e-9 * v_r.max(1.0))),
        Err(Error::MaximallyMixed) => Ok(Outcome::Skip),
        Err(e) => Err(e),
    }
}

/// Closed form, matrix exponential and RK4 on one random PT-model draw.
fn check_triple(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = rng.random_range(0.1..5.0);
    let gamma = if rng.random_bool(0.1) { g } else { rng.random_range(0.1..5.0) };
    let p = TwoLevelParams::new(g, gamma)?;
    let basis = make_basis(2)?;
    let gen = bloch_generator(&pt_model(p), &basis)?;
    let rank = rng.random_range(1..=2);
    let r0 = basis.embed(&random_density(2, rank, rng))?;

    let mut worst = 0.0f64;
    for &t in &[0.0, 0.37, 1.0, 2.9, 6.4, 10.0] {
        let exact = evolve_exact(&gen, &r0, t)?;
        let closed = pt_closed_form(p, &r0, t)?;
        for (a, b) in exact.r.iter().zip(&closed.r) {
            worst = worst.max((a - b).abs());
        }
    }
    if let Outcome::Fail(s) = within("|closed − exact| on [0, 10]", worst, 0.0, 1e-9) {
        return Ok(Outcome::Fail(format!("g = {g}, γ = {gamma}: {s}")));
    }

    let t_max = 2.0;
    let dt = t_max / (1000.0 * g.max(gamma)).ceil();
    let traj = rk4_with_generator(&gen, &r0, t_max, dt)?;
    let closed = pt_closed_form(p, &r0, *traj.times.last().expect("grid nonempty"))?;
    let last = traj.states.last().expect("grid nonempty");
    let err = last.r.iter().zip(&closed.r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(match within("|RK4 − closed| at t = 2", err, 0.0, 1e-8) {
        Outcome::Fail(s) => Outcome::Fail(format!("g = {g}, γ = {gamma}: {s}")),
        o => o,
    })
}

/// Ensemble mean against evolve_exact at 5 standard errors.
fn check_unravelling(model: &LindbladModel, basis: &OperatorBasis, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let psi0 = random_pure_state(model.n(), rng);
    let max_rate = model
        .lindblads()
        .iter()
        .map(|l| (&l.adjoint() * l).inf_norm())
        .fold(0.0, f64::max);
    let dt = if max_rate > 0.0 { 1e-3f64.min(0.5 * JUMP_STEP_BOUND / max_rate) } else { 1e-3 };
    let t = 0.5;
    let est = ensemble_mean(model, basis, &psi0, t, dt, UNRAVEL_TRAJ, rng.random())?;
    let gen = bloch_generator(model, basis)?;
    let exact = evolve_exact(&gen, &basis.embed(&HermitianMatrix::projector(&psi0))?, t)?;
    for (j, ((m, se), e)) in est.mean_r.iter().zip(&est.standard_error).zip(&exact.r).enumerate() {
        if (m - e).abs() > 5.0 * se + 1e-9 {
            return Ok(Outcome::Fail(format!(
                "component {j}: ensemble {m:.6} ± {se:.2e} vs exact {e:.6}"
            )));
        }
    }
    Ok(Outcome::Pass)
}

fn check_pseudo_hermitian(n: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let inst = random_pseudo_hermitian(n, rng.random_range(0.0..=6.0), rng)?;
    let h = hermitian_counterpart(&inst.f, &inst.metric)?;
    let (ev, _) = eigh(&h);
    let err = ev.iter().zip(&inst.spectrum).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(within("spectrum(u⁻¹Fu) vs spectrum(F)", err, 0.0, 1e-9))
}

/// Runs every check on `n_cases` random instances derived from `seed`.
pub fn run_property_suite(seed: u64, n_cases: usize, fault: Option<Fault>) -> Result<SuiteReport> {
    if n_cases == 0 {
        return Err(Error::InvalidParameter("n_cases must be at least 1".into()));
    }
    let results: Vec<(CaseConfig, Vec<Outcome>)> = (0..n_cases)
        .into_par_iter()
        .map(|case| run_case(seed, case, fault))
        .collect();

    let mut checks: Vec<CheckSummary> = CHECKS
        .iter()
        .map(|&name| CheckSummary {
            name,
            passed: 0,
            failed: 0,
            skipped: 0,
            counterexample: None,
        })
        .collect();
    for (config, outcomes) in &results {
        for (summary, outcome) in checks.iter_mut().zip(outcomes) {
            match outcome {
                Outcome::Pass => summary.passed += 1,
                Outcome::Skip => summary.skipped += 1,
                Outcome::Fail(detail) => {
                    summary.failed += 1;
                    let smaller = summary
                        .counterexample
                        .as_ref()
                        .map_or(true, |c| config.generator.n < c.config.generator.n);
                    if smaller {
                        summary.counterexample = Some(Counterexample {
                            config: config.clone(),
                            detail: detail.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(SuiteReport { seed, n_cases, checks })
}
