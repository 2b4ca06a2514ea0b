//! The Lindblad generator in operator form and in Bloch coordinates, and
//! PT-phase classification from its spectrum.

use serde::{Deserialize, Serialize};

use crate::basis::{make_basis, OperatorBasis};
use crate::error::{Error, Result};
use crate::linalg::{spectrum, CMatrix, HermitianMatrix, RMatrix, Spectrum, C64, I, ZERO};

/// Imaginary parts of generator entries above this indicate a construction bug.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Hamiltonian plus Lindblad operators on an n-dimensional Hilbert space (ħ = 1).
#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: HermitianMatrix,
    lindblads: Vec<CMatrix>,
}

impl LindbladModel {
    pub fn new(hamiltonian: HermitianMatrix, lindblads: Vec<CMatrix>) -> Result<Self> {
        let n = hamiltonian.dim();
        for l in &lindblads {
            if l.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: l.dim(),
                });
            }
            if !l.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            hamiltonian,
            lindblads,
        })
    }

    pub fn n(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &HermitianMatrix {
        &self.hamiltonian
    }

    pub fn lindblads(&self) -> &[CMatrix] {
        &self.lindblads
    }

    pub fn is_unitary(&self) -> bool {
        self.lindblads.iter().all(|l| l.max_norm() == 0.0)
    }

    fn check(&self, rho: &CMatrix) -> Result<()> {
        if rho.dim() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: rho.dim(),
            });
        }
        Ok(())
    }

    /// Σ_k [L_k ρ L_k† − ½(L_k†L_k ρ + ρ L_k†L_k)]
    pub fn apply_dissipator(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check(rho)?;
        Ok(HermitianMatrix::symmetrized(&self.dissipator_raw(rho)))
    }

    fn dissipator_raw(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.n());
        for l in &self.lindblads {
            let ld = l.adjoint();
            let ldl = &ld * l;
            let jump = &(l * rho) * &ld;
            let anti = &(&ldl * rho) + &(rho * &ldl);
            out = &(&out + &jump) - &anti.scale_real(0.5);
        }
        out
    }

    /// −i[H, ρ] + Dρ
    pub fn apply_liouvillian(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check(rho)?;
        Ok(HermitianMatrix::symmetrized(&self.liouvillian_raw(rho)))
    }

    /// The generator applied to an arbitrary (not necessarily Hermitian) operator.
    pub fn liouvillian_raw(&self, x: &CMatrix) -> CMatrix {
        let unitary = self.hamiltonian.commutator(x).scale(-I);
        &unitary + &self.dissipator_raw(x)
    }

    /// Σ_k [L_k, L_k†]; zero when every Lindblad operator is normal.
    pub fn normality_defect(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.n());
        for l in &self.lindblads {
            out = &out + &l.commutator(&l.adjoint());
        }
        out
    }
}

/// ṙ = Λr + b, together with the full n²×n² generator in the basis {σ₀, σ_j}.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochGenerator {
    pub n: usize,
    pub lambda: RMatrix,
    pub b: Vec<f64>,
    pub full: RMatrix,
}

impl BlochGenerator {
    /// Λr + b
    pub fn velocity(&self, r: &[f64]) -> Vec<f64> {
        self.lambda
            .mul_vec(r)
            .into_iter()
            .zip(&self.b)
            .map(|(x, b)| x + b)
            .collect()
    }

    /// [[Λ, b], [0, 0]]: exponentiating this and acting on (r, 1) solves the affine flow.
    pub fn augmented(&self) -> RMatrix {
        let d = self.lambda.dim();
        RMatrix::from_fn(d + 1, |i, j| match (i < d, j < d) {
            (true, true) => self.lambda[(i, j)],
            (true, false) => self.b[i],
            _ => 0.0,
        })
    }

    /// Returns a copy with one Λ entry shifted (and `full` kept in sync). Fault-injection hook.
    pub fn with_corrupted_lambda(&self, i: usize, j: usize, delta: f64) -> Self {
        let mut g = self.clone();
        g.lambda[(i, j)] += delta;
        g.full[(i + 1, j + 1)] += delta;
        g
    }
}

fn real_part(z: C64, worst: &mut f64) -> f64 {
    *worst = worst.max(z.im.abs());
    z.re
}

/// Λ and b from their trace formulas, plus the full superoperator matrix.
pub fn bloch_generator(model: &LindbladModel, basis: &OperatorBasis) -> Result<BlochGenerator> {
    let n = model.n();
    if basis.n() != n {
        return Err(Error::DimensionMismatch {
            expected: basis.n(),
            got: n,
        });
    }
    let d = n * n - 1;
    let sig = basis.sigmas();
    let h = model.hamiltonian().matrix();
    let pieces: Vec<(CMatrix, CMatrix, CMatrix)> = model
        .lindblads()
        .iter()
        .map(|l| {
            let ld = l.adjoint();
            let ldl = &ld * l;
            (l.clone(), ld, ldl)
        })
        .collect();

    let mut worst: f64 = 0.0;
    let mut lambda = RMatrix::zeros(d);
    for i in 1..=d {
        for j in 1..=d {
            let (si, sj) = (sig[i].matrix(), sig[j].matrix());
            let mut acc = sj.commutator(si).trace_product(h) * (-I);
            for (l, ld, ldl) in &pieces {
                acc += (&(l * sj) * ld).trace_product(si);
                let sym = &(sj * si) + &(si * sj);
                acc -= ldl.trace_product(&sym) * 0.5;
            }
            lambda[(i - 1, j - 1)] = real_part(acc, &mut worst);
        }
    }

    let defect = model.normality_defect();
    let b: Vec<f64> = (1..=d)
        .map(|i| real_part(defect.trace_product(sig[i].matrix()) / n as f64, &mut worst))
        .collect();

    if worst > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(worst));
    }

    let sqrt_n = (n as f64).sqrt();
    let full = RMatrix::from_fn(d + 1, |row, col| match (row, col) {
        (0, _) => 0.0,
        (r, 0) => sqrt_n * b[r - 1],
        (r, c) => lambda[(r - 1, c - 1)],
    });

    Ok(BlochGenerator { n, lambda, b, full })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseLabel {
    Unbroken,
    ExceptionalPoint,
    Broken,
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PhaseLabel::Unbroken => "Unbroken",
            PhaseLabel::ExceptionalPoint => "ExceptionalPoint",
            PhaseLabel::Broken => "Broken",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct PhaseClassification {
    pub label: PhaseLabel,
    /// Eigenvalues of the full superoperator; members of a coalesced cluster are replaced by the cluster mean.
    pub eigenvalues: Spectrum,
    pub max_imag: f64,
    /// Minimum pairwise distance among the nonzero eigenvalues (+∞ if fewer than two).
    pub coalescence_gap: f64,
    /// No dissipation: the flow is unitary.
    pub unitary: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct PhaseTolerances {
    /// Relative to the spectral scale.
    pub tol_imag: f64,
    pub tol_cond: f64,
    /// Relative to the spectral scale.
    pub tol_gap: f64,
}

impl Default for PhaseTolerances {
    fn default() -> Self {
        Self {
            tol_imag: 1e-9,
            tol_cond: 1e8,
            tol_gap: 1e-7,
        }
    }
}

/// Classifies the PT phase from the spectrum of the full superoperator.
pub fn classify_phase(
    model: &LindbladModel,
    basis: &OperatorBasis,
    tol: PhaseTolerances,
) -> Result<PhaseClassification> {
    let gen = bloch_generator(model, basis)?;
    classify_generator(&gen, model.is_unitary(), tol)
}

/// Same as [`classify_phase`] with default tolerances and a freshly built basis.
pub fn classify_model(model: &LindbladModel) -> Result<PhaseClassification> {
    classify_phase(model, &make_basis(model.n())?, PhaseTolerances::default())
}

pub fn classify_generator(
    gen: &BlochGenerator,
    unitary: bool,
    tol: PhaseTolerances,
) -> Result<PhaseClassification> {
    let raw = spectrum(&gen.full)?;
    let scale = raw.scale().max(f64::MIN_POSITIVE);
    let gap_tol = tol.tol_gap * scale;
    let zero_tol = tol.tol_imag * scale;

    // coalesced clusters are represented by their mean, which stays accurate at a defective eigenvalue
    let mut values = raw.values.clone();
    for group in crate::linalg::spectrum_clusters(&raw.values, gap_tol) {
        if group.len() > 1 {
            let mean: C64 = group.iter().map(|&i| raw.values[i]).sum::<C64>() / group.len() as f64;
            for &i in &group {
                values[i] = mean;
            }
        }
    }
    let snapped = Spectrum {
        values,
        vector_condition: raw.vector_condition,
    };

    let nonzero: Vec<C64> = raw.values.iter().copied().filter(|z| z.norm() > zero_tol).collect();
    let mut gap = f64::INFINITY;
    for a in 0..nonzero.len() {
        for b in a + 1..nonzero.len() {
            gap = gap.min((nonzero[a] - nonzero[b]).norm());
        }
    }
    let coalesced = nonzero.len() >= 2 && gap <= gap_tol;
    let max_imag = snapped.max_imag();

    let label = if max_imag > zero_tol {
        PhaseLabel::Unbroken
    } else if raw.vector_condition > tol.tol_cond || coalesced {
        PhaseLabel::ExceptionalPoint
    } else {
        PhaseLabel::Broken
    };

    Ok(PhaseClassification {
        label,
        eigenvalues: snapped,
        max_imag,
        coalescence_gap: gap,
        unitary,
    })
}

/// On-disk model description: row-major complex matrices as [re, im] pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelFile {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "L", default)]
    pub l: Vec<Vec<Vec<[f64; 2]>>>,
}

fn matrix_from_pairs(n: usize, rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rows.len(),
        });
    }
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| C64::new(*re, *im)).collect())
        .collect();
    CMatrix::from_rows(&rows)
}

fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("model file: {e}")))
    }

    pub fn to_model(&self) -> Result<LindbladModel> {
        if self.n == 0 {
            return Err(Error::DimensionOutOfRange(0));
        }
        let h = HermitianMatrix::new(matrix_from_pairs(self.n, &self.h)?)?;
        let ls = self
            .l
            .iter()
            .map(|l| matrix_from_pairs(self.n, l))
            .collect::<Result<Vec<_>>>()?;
        LindbladModel::new(h, ls)
    }

    pub fn from_model(model: &LindbladModel) -> Self {
        Self {
            n: model.n(),
            h: matrix_to_pairs(model.hamiltonian()),
            l: model.lindblads().iter().map(matrix_to_pairs).collect(),
        }
    }
}

/// Zero operator helper used by tests and callers building models by hand.
pub fn zero_operator(n: usize) -> CMatrix {
    CMatrix::from_fn(n, |_, _| ZERO)
}
