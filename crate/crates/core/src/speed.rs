//! Evolution speeds and information measures.
//!
//! Trace functionals are evaluated in the operator picture; the Bloch picture
//! (Σ ṙ_j², Λr + b) is kept as an independent route for cross-checks.

use crate::basis::{BlochState, OperatorBasis};
use crate::error::{Error, Result};
use crate::liouvillian::{BlochGenerator, LindbladModel};
use crate::linalg::{hermitian_sqrt, inner, vec_norm, CMatrix, HermitianMatrix, C64, I};

/// Imaginary parts of quantities that are real in exact arithmetic.
const IMAG_TOL: f64 = 1e-12;
/// Agreement required between two evaluation routes, relative to max(1, value).
const ROUTE_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

fn real_checked(z: C64, scale: f64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * scale.max(1.0) {
        return Err(Error::ImaginaryResidue(z.im.abs()));
    }
    Ok(z.re)
}

fn routes_agree(first: f64, second: f64) -> Result<()> {
    if (first - second).abs() > ROUTE_TOL * first.abs().max(second.abs()).max(1.0) {
        return Err(Error::RouteMismatch { first, second });
    }
    Ok(())
}

fn check_dims(model: &LindbladModel, rho: &HermitianMatrix) -> Result<()> {
    if model.n() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.n(),
            got: rho.dim(),
        });
    }
    Ok(())
}

/// v² = tr[(Lρ)²], checked against Σ_j tr(σ_j Lρ)².
pub fn speed_squared(model: &LindbladModel, rho: &HermitianMatrix, basis: &OperatorBasis) -> Result<f64> {
    check_dims(model, rho)?;
    let lrho = model.apply_liouvillian(rho)?;
    let v2 = lrho.trace_product(&lrho).re;
    let coords: f64 = basis.coordinates(&lrho).iter().map(|x| x * x).sum();
    routes_agree(v2, coords)?;
    Ok(v2)
}

/// |Λr + b|²: the Bloch-picture speed, independent of the operator route.
pub fn speed_squared_bloch(gen: &BlochGenerator, r: &BlochState) -> f64 {
    gen.velocity(&r.r).iter().map(|x| x * x).sum()
}

/// The three contributions to v².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedDecomposition {
    /// 2[tr(H²ρ²) − tr(HρHρ)]
    pub unitary: f64,
    /// −2i tr(ρ[Dρ, H])
    pub cross: f64,
    /// tr[(Dρ)²]
    pub dissipator: f64,
}

impl SpeedDecomposition {
    pub fn total(&self) -> f64 {
        self.unitary + self.cross + self.dissipator
    }
}

pub fn speed_decomposition(model: &LindbladModel, rho: &HermitianMatrix) -> Result<SpeedDecomposition> {
    check_dims(model, rho)?;
    let h = model.hamiltonian().matrix();
    let r = rho.matrix();
    let rho2 = r * r;
    let h2 = h * h;
    let hr = h * r;
    let unitary = 2.0 * (h2.trace_product(&rho2) - hr.trace_product(&hr));
    let scale = h.max_norm().powi(2);
    let unitary = real_checked(unitary, scale)?;

    let d = model.apply_dissipator(rho)?;
    let cross = r.trace_product(&d.commutator(h)) * (-2.0 * I);
    let cross = real_checked(cross, d.max_norm() * h.max_norm())?;
    let dissipator = d.trace_product(&d).re;
    Ok(SpeedDecomposition {
        unitary,
        cross,
        dissipator,
    })
}

/// tr[(ρ − 1/n)²] = Σ r_j²
fn radius_squared(rho: &HermitianMatrix) -> f64 {
    let n = rho.dim();
    let shifted = rho.matrix() - &CMatrix::identity(n).scale_real(1.0 / n as f64);
    shifted.trace_product(&shifted).re
}

/// Radius below which a state is treated as the maximally mixed point.
const ORIGIN_RADIUS_SQ: f64 = 1e-28;

/// Signed purity-change rate r·ṙ/|r| = tr(ρ Lρ)/|r| (zero at the maximally mixed state).
pub fn radial_rate(model: &LindbladModel, rho: &HermitianMatrix) -> Result<f64> {
    check_dims(model, rho)?;
    let r2 = radius_squared(rho);
    if r2 <= ORIGIN_RADIUS_SQ {
        return Ok(0.0);
    }
    let lrho = model.apply_liouvillian(rho)?;
    Ok(rho.trace_product(&lrho).re / r2.sqrt())
}

/// v_R = |tr(ρ Lρ)| / √tr[(ρ − 1/n)²]; 0 at ρ = 1/n.
pub fn radial_speed(model: &LindbladModel, rho: &HermitianMatrix, basis: &OperatorBasis) -> Result<f64> {
    if basis.n() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.n(),
            got: rho.dim(),
        });
    }
    Ok(radial_rate(model, rho)?.abs())
}

/// S(X) = tr(X†Xρ²) − tr(XρX†ρ)
pub fn modified_skew(x: &CMatrix, rho: &HermitianMatrix) -> Result<f64> {
    if x.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: x.dim(),
        });
    }
    let r = rho.matrix();
    let xd = x.adjoint();
    let value = (&xd * x).trace_product(&(r * r)) - (&(x * r) * &xd).trace_product(r);
    real_checked(value, x.max_norm().powi(2))
}

/// (v_R, |Σ_k S(L_k)| / √tr[(ρ − 1/n)²]) for comparison.
pub fn radial_speed_identity_check(
    model: &LindbladModel,
    rho: &HermitianMatrix,
    basis: &OperatorBasis,
) -> Result<(f64, f64)> {
    let r2 = radius_squared(rho);
    if r2 <= ORIGIN_RADIUS_SQ {
        return Err(Error::MaximallyMixed);
    }
    let lhs = radial_speed(model, rho, basis)?;
    let total: f64 = model
        .lindblads()
        .iter()
        .map(|l| modified_skew(l, rho))
        .sum::<Result<f64>>()?;
    Ok((lhs, total.abs() / r2.sqrt()))
}

/// ⟨H²⟩ − ⟨H⟩² in state ρ.
pub fn variance(h: &HermitianMatrix, rho: &HermitianMatrix) -> f64 {
    let mean = h.trace_product(rho).re;
    (h.matrix() * h.matrix()).trace_product(rho).re - mean * mean
}

/// Wigner–Yanase skew information I = tr(H²ρ) − tr(H√ρH√ρ).
pub fn wy_skew(h: &HermitianMatrix, rho: &HermitianMatrix) -> Result<f64> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: h.dim(),
        });
    }
    let root = hermitian_sqrt(rho)?;
    let hs = h.matrix() * root.matrix();
    let value = (h.matrix() * h.matrix()).trace_product(rho) - hs.trace_product(&hs);
    real_checked(value, h.max_norm().powi(2))
}

/// Squared Hilbert–Schmidt speed of ξ = √ρ under the unitary flow: 2·I.
pub fn unitary_speed_sqrt_embedding(h: &HermitianMatrix, rho: &HermitianMatrix) -> Result<f64> {
    Ok(2.0 * wy_skew(h, rho)?)
}

fn check_state(h: &HermitianMatrix, psi: &[C64]) -> Result<()> {
    if psi.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: psi.len(),
        });
    }
    let norm = vec_norm(psi);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

/// −i(H − ⟨H⟩)ψ: the horizontal velocity, orthogonal to ψ.
pub fn sk_velocity(h: &HermitianMatrix, psi: &[C64]) -> Result<Vec<C64>> {
    check_state(h, psi)?;
    let hpsi = h.mul_vec(psi);
    let mean = inner(psi, &hpsi).re;
    Ok(hpsi
        .iter()
        .zip(psi)
        .map(|(a, b)| (a - b * mean) * (-I))
        .collect())
}

/// Ratio of the Fubini–Study speed² 4ΔH² to the Hilbert–Schmidt speed² tr[(−i[H, ρ])²] = 2ΔH²
/// of a pure state under unitary flow.
pub const FUBINI_STUDY_RATIO: f64 = 2.0;

/// Fubini–Study speed² 4ΔH², cross-checked against 4⟨v|v⟩ for v = ψ̇ − ⟨ψ|ψ̇⟩ψ.
pub fn aa_speed(h: &HermitianMatrix, psi: &[C64]) -> Result<f64> {
    check_state(h, psi)?;
    let hpsi = h.mul_vec(psi);
    let mean = inner(psi, &hpsi).re;
    let second = inner(&hpsi, &hpsi).re;
    let v2 = 4.0 * (second - mean * mean);

    let dot: Vec<C64> = hpsi.iter().map(|z| z * (-I)).collect();
    let overlap = inner(psi, &dot);
    let horizontal: Vec<C64> = dot.iter().zip(psi).map(|(d, p)| d - p * overlap).collect();
    let check = 4.0 * inner(&horizontal, &horizontal).re;
    if (v2 - check).abs() > 1e-12 * v2.abs().max(1.0) {
        return Err(Error::RouteMismatch {
            first: v2,
            second: check,
        });
    }
    Ok(v2)
}

/// |ṙ − (r̂·ṙ) r̂|, formed directly so it stays accurate when ṙ is nearly radial.
fn tangential_speed(r: &[f64], rdot: &[f64]) -> f64 {
    let r2: f64 = r.iter().map(|x| x * x).sum();
    if r2 <= ORIGIN_RADIUS_SQ {
        return rdot.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let k = r.iter().zip(rdot).map(|(a, b)| a * b).sum::<f64>() / r2;
    r.iter().zip(rdot).map(|(a, b)| (b - k * a).powi(2)).sum::<f64>().sqrt()
}

/// One point on a trajectory: speed, its radial/tangential split, and the three-term decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct SpeedSample {
    pub t: f64,
    pub v: f64,
    pub v_radial: f64,
    pub v_tangential: f64,
    /// r·ṙ/|r|; negative while purity decreases.
    pub radial_rate: f64,
    pub purity: f64,
    pub decomposition: SpeedDecomposition,
    pub r: Vec<f64>,
}

/// Evaluates every speed functional at one Bloch state.
pub fn speed_sample(
    model: &LindbladModel,
    basis: &OperatorBasis,
    t: f64,
    state: &BlochState,
) -> Result<SpeedSample> {
    let rho = basis.reconstruct(state)?;
    let v2 = speed_squared(model, &rho, basis)?;
    let rate = radial_rate(model, &rho)?;
    let decomposition = speed_decomposition(model, &rho)?;
    routes_agree(v2, decomposition.total())?;
    let v_radial = rate.abs();
    let v_tangential = tangential_speed(&state.r, &basis.coordinates(model.apply_liouvillian(&rho)?.matrix()));
    Ok(SpeedSample {
        t,
        v: v2.max(0.0).sqrt(),
        v_radial,
        v_tangential,
        radial_rate: rate,
        purity: rho.trace_product(&rho).re,
        decomposition,
        r: state.r.clone(),
    })
}
