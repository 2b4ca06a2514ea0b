//! Orthonormal Hermitian operator basis and the Bloch-vector embedding.
//!
//! The basis is the generalized Gell-Mann set scaled to unit Hilbert–Schmidt
//! norm, with σ₀ = 1/√n. Ordering after σ₀: symmetric off-diagonal elements,
//! antisymmetric off-diagonal elements, then diagonal elements, each in
//! row-major (h, k) order. For n = 2 this is (σx, σy, σz)/√2.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianMatrix, C64, I, ONE, ZERO};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

const TRACE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct OperatorBasis {
    n: usize,
    sigmas: Vec<HermitianMatrix>,
}

/// Real coordinates r_j = tr(ρ σ_j), j = 1..n²−1.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochState {
    pub n: usize,
    pub r: Vec<f64>,
}

impl BlochState {
    pub fn new(n: usize, r: Vec<f64>) -> Result<Self> {
        if r.len() != n * n - 1 {
            return Err(Error::LengthMismatch {
                expected: n * n - 1,
                got: r.len(),
            });
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, r })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            r: vec![0.0; n * n - 1],
        }
    }

    pub fn radius_squared(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum()
    }

    /// Squared radius of the sphere on which pure states lie: 1 − 1/n.
    pub fn max_radius_squared(n: usize) -> f64 {
        1.0 - 1.0 / n as f64
    }

    /// Inside or on the outer sphere, within 1e-10.
    pub fn is_within_sphere(&self) -> bool {
        self.radius_squared() <= Self::max_radius_squared(self.n) + 1e-10
    }
}

/// Generalized Gell-Mann basis for dimension `n` (2 ≤ n ≤ 8).
pub fn make_basis(n: usize) -> Result<OperatorBasis> {
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange(n));
    }
    let unit = |i: usize, j: usize| move |a: usize, b: usize| a == i && b == j;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut sigmas = Vec::with_capacity(n * n);
    sigmas.push(CMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt()));
    for h in 0..n {
        for k in h + 1..n {
            let (e_hk, e_kh) = (unit(h, k), unit(k, h));
            sigmas.push(CMatrix::from_fn(n, |a, b| {
                if e_hk(a, b) || e_kh(a, b) {
                    C64::new(s, 0.0)
                } else {
                    ZERO
                }
            }));
        }
    }
    for h in 0..n {
        for k in h + 1..n {
            let (e_hk, e_kh) = (unit(h, k), unit(k, h));
            sigmas.push(CMatrix::from_fn(n, |a, b| {
                if e_hk(a, b) {
                    -I * s
                } else if e_kh(a, b) {
                    I * s
                } else {
                    ZERO
                }
            }));
        }
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        sigmas.push(CMatrix::from_fn(n, |a, b| {
            if a != b {
                ZERO
            } else if a < l {
                ONE * norm
            } else if a == l {
                ONE * (-(l as f64) * norm)
            } else {
                ZERO
            }
        }));
    }
    let sigmas = sigmas
        .into_iter()
        .map(HermitianMatrix::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorBasis { n, sigmas })
}

impl OperatorBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of trace-free elements, n² − 1.
    pub fn bloch_dim(&self) -> usize {
        self.n * self.n - 1
    }

    /// All n² elements, σ₀ first.
    pub fn sigmas(&self) -> &[HermitianMatrix] {
        &self.sigmas
    }

    pub fn sigma(&self, j: usize) -> &HermitianMatrix {
        &self.sigmas[j]
    }

    /// Matrix of tr(σ_i† σ_j).
    pub fn gram(&self) -> Vec<Vec<C64>> {
        self.sigmas
            .iter()
            .map(|a| {
                self.sigmas
                    .iter()
                    .map(|b| a.adjoint().trace_product(b))
                    .collect()
            })
            .collect()
    }

    /// Coordinates tr(X σ_j) for j = 1..n²−1 of any operator X (real part).
    pub fn coordinates(&self, x: &CMatrix) -> Vec<f64> {
        self.sigmas[1..].iter().map(|s| x.trace_product(s).re).collect()
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got,
            });
        }
        Ok(())
    }

    /// r_j = tr(ρ σ_j) of a unit-trace Hermitian matrix.
    pub fn embed(&self, rho: &HermitianMatrix) -> Result<BlochState> {
        self.check_dim(rho.dim())?;
        let tr = rho.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::TraceViolation(tr.re));
        }
        Ok(BlochState {
            n: self.n,
            r: self.coordinates(rho),
        })
    }

    /// ρ = σ₀/√n + Σ r_j σ_j. Unit trace and Hermitian; positivity is not checked.
    pub fn reconstruct(&self, state: &BlochState) -> Result<HermitianMatrix> {
        self.check_dim(state.n)?;
        if state.r.len() != self.bloch_dim() {
            return Err(Error::LengthMismatch {
                expected: self.bloch_dim(),
                got: state.r.len(),
            });
        }
        let mut rho = CMatrix::identity(self.n).scale_real(1.0 / self.n as f64);
        for (rj, s) in state.r.iter().zip(&self.sigmas[1..]) {
            rho = &rho + &s.scale_real(*rj);
        }
        Ok(HermitianMatrix::symmetrized(&rho))
    }

    /// (tr ρ², Σ r_j²); the second equals the first minus 1/n.
    pub fn purity_radius(&self, rho: &HermitianMatrix) -> Result<(f64, f64)> {
        let state = self.embed(rho)?;
        let purity = rho.trace_product(rho).re;
        Ok((purity, state.radius_squared()))
    }
}
