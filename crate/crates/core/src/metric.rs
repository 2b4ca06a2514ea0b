//! Pseudo-Hermitian operators and their metrics.
//!
//! A matrix F is pseudo-Hermitian with respect to a positive metric g when
//! F† = g⁻¹ F g. Factoring g = u u† with u the principal square root, the
//! similarity h = u⁻¹ F u is Hermitian with the same spectrum. Only bounded,
//! finite-dimensional metrics are handled.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_sqrt, inner, CMatrix, HermitianMatrix, C64};

/// Smallest allowed ratio of min to max metric eigenvalue.
pub const METRIC_FLOOR: f64 = 1e-12;
pub const PSEUDO_HERMITIAN_TOL: f64 = 1e-10;
/// Hermiticity tolerance for the similarity-transformed operator, relative to its size.
pub const COUNTERPART_TOL: f64 = 1e-9;

/// Positive-definite Hermitian metric.
#[derive(Clone, Debug)]
pub struct MetricOperator {
    g: HermitianMatrix,
    inverse: CMatrix,
}

impl MetricOperator {
    pub fn new(g: HermitianMatrix) -> Result<Self> {
        let ev = g.eigenvalues();
        let (min, max) = (ev[0], ev[ev.len() - 1]);
        if !(max > 0.0 && min > METRIC_FLOOR * max) {
            return Err(Error::SingularMetric {
                min_eigenvalue: min,
                max_eigenvalue: max,
            });
        }
        let inverse = g.inverse()?;
        Ok(Self { g, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(HermitianMatrix::identity(n)).expect("identity is positive")
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// λ_max / λ_min.
    pub fn condition(&self) -> f64 {
        let ev = self.g.eigenvalues();
        ev[ev.len() - 1] / ev[0]
    }

    /// ⟨ψ, φ⟩_g = ⟨ψ|g|φ⟩.
    pub fn inner(&self, psi: &[C64], phi: &[C64]) -> C64 {
        inner(psi, &self.g.mul_vec(phi))
    }
}

fn check_dims(f: &CMatrix, g: &MetricOperator) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: f.dim(),
        });
    }
    Ok(())
}

/// ‖F† − g⁻¹Fg‖_max relative to ‖F‖_max.
pub fn pseudo_hermiticity_defect(f: &CMatrix, g: &MetricOperator) -> Result<f64> {
    check_dims(f, g)?;
    let transformed = &(&g.inverse * f) * g.g.matrix();
    let scale = f.max_norm();
    let diff = (&f.adjoint() - &transformed).max_norm();
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

pub fn is_pseudo_hermitian(f: &CMatrix, g: &MetricOperator, tol: f64) -> Result<bool> {
    Ok(pseudo_hermiticity_defect(f, g)? <= tol)
}

/// u with u u† = g; the principal (Hermitian positive) square root.
pub fn metric_factor(g: &MetricOperator) -> Result<HermitianMatrix> {
    let u = hermitian_sqrt(&g.g)?;
    if u.eigenvalues()[0] <= 0.0 {
        let ev = g.g.eigenvalues();
        return Err(Error::SingularMetric {
            min_eigenvalue: ev[0],
            max_eigenvalue: ev[ev.len() - 1],
        });
    }
    Ok(u)
}

/// h = u⁻¹ H u, Hermitian whenever H is pseudo-Hermitian with respect to g.
pub fn hermitian_counterpart(h: &CMatrix, g: &MetricOperator) -> Result<HermitianMatrix> {
    let defect = pseudo_hermiticity_defect(h, g)?;
    if defect > PSEUDO_HERMITIAN_TOL {
        return Err(Error::NotPseudoHermitian(defect));
    }
    let u = metric_factor(g)?;
    let out = &(&u.inverse()? * h) * u.matrix();
    let dev = out.hermitian_deviation();
    if dev > COUNTERPART_TOL * out.max_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotPseudoHermitian(dev));
    }
    Ok(HermitianMatrix::symmetrized(&out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Hermitian,
    PtSymmetric,
}

/// Real parameters of an n×n observable: n² if Hermitian, n(2n−1) if PT-symmetric.
pub fn param_count(n: usize, kind: OperatorKind) -> usize {
    match kind {
        OperatorKind::Hermitian => n * n,
        OperatorKind::PtSymmetric => n * (2 * n - 1),
    }
}
