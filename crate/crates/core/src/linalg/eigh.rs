use super::{CMatrix, HermitianMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues below this (in magnitude) are treated as exact zeros by
/// [`hermitian_sqrt`]; anything more negative is rejected.
pub const SQRT_CLAMP: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are
/// the matching eigenvectors.
pub fn eigh(h: &HermitianMatrix) -> (Vec<f64>, CMatrix) {
    jacobi(h.matrix())
}

pub(crate) fn jacobi(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.dim();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);
    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = D·R with D = diag(1, conj(phase)) on (p, q)
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = phase.conj() * (-s);
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Rebuilds U·diag(f(λ))·U† from an eigendecomposition.
pub(crate) fn spectral_map(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = values.len();
    let mapped: Vec<f64> = values.iter().map(|&x| f(x)).collect();
    CMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| vectors[(i, k)] * mapped[k] * vectors[(j, k)].conj())
            .sum()
    })
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn hermitian_sqrt(rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (values, vectors) = eigh(rho);
    let min = values[0];
    if min < -SQRT_CLAMP {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let root = spectral_map(&values, &vectors, |x| if x <= SQRT_CLAMP { 0.0 } else { x.sqrt() });
    Ok(HermitianMatrix::symmetrized(&root))
}
