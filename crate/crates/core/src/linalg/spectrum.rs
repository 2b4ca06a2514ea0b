//! Eigenvalues of small non-symmetric real matrices.
//!
//! Householder reduction to upper Hessenberg form followed by the Francis
//! double-shift QR iteration. Eigenvectors are only needed to report the
//! condition number of the eigenvector matrix, which is what downstream
//! exceptional-point detection keys on; they are recovered as numerical null
//! vectors of M − λI, one eigenvalue cluster at a time.

use super::eigh::jacobi;
use super::{CMatrix, RMatrix, C64};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 60;

/// Eigenvector condition above which a spectrum is treated as near-defective.
pub const EP_CONDITION: f64 = 1e8;

/// Clustering and null-space tolerance, relative to the spectral scale.
const CLUSTER_TOL: f64 = 1e-6;

/// Eigenvalues (with multiplicity) and the condition number of the eigenvector matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<C64>,
    /// ‖V‖₂‖V⁻¹‖₂ for unit-column eigenvectors V; +∞ when a cluster is defective.
    pub vector_condition: f64,
}

impl Spectrum {
    pub fn scale(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_ep_suspect(&self) -> bool {
        self.vector_condition > EP_CONDITION
    }

    /// Values sorted by (re, im) for stable comparisons.
    pub fn sorted(&self) -> Vec<C64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

/// All eigenvalues of a real square matrix.
pub fn spectrum(m: &RMatrix) -> Result<Spectrum> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    let values = hqr(&mut h)?;
    let vector_condition = eigenvector_condition(m, &values);
    Ok(Spectrum {
        values,
        vector_condition,
    })
}

fn hessenberg(a: &mut RMatrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[(k + 1, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vnorm);
        // A ← (I − 2vvᵀ) A
        for j in 0..n {
            let dot: f64 = v.iter().enumerate().map(|(i, vi)| vi * a[(k + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                a[(k + 1 + i, j)] -= 2.0 * vi * dot;
            }
        }
        // A ← A (I − 2vvᵀ)
        for i in 0..n {
            let dot: f64 = v.iter().enumerate().map(|(j, vj)| vj * a[(i, k + 1 + j)]).sum();
            for (j, vj) in v.iter().enumerate() {
                a[(i, k + 1 + j)] -= 2.0 * vj * dot;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
#[allow(clippy::many_single_char_names)]
fn hqr(a: &mut RMatrix) -> Result<Vec<C64>> {
    let n = a.dim();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z);
    let mut w;
    let mut s;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() + s == s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[(nu, nu)];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            y = a[(nu - 1, nu - 1)];
            w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nu - 1 {
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != 0.0 {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITERATIONS {
                return Err(Error::NoConvergence { iterations: its });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 0..=nu {
                    a[(i, i)] -= x;
                }
                s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nu - 2;
            loop {
                z = a[(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - r - s;
                r = a[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }
            let mut k = m;
            while k + 1 <= nu {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = 0.0;
                    if k + 1 != nu {
                        r = a[(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        p = a[(k, j)] + q * a[(k + 1, j)];
                        if k + 1 != nu {
                            p += r * a[(k + 2, j)];
                            a[(k + 2, j)] -= p * z;
                        }
                        a[(k + 1, j)] -= p * y;
                        a[(k, j)] -= p * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in l..=mmin {
                        p = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k + 1 != nu {
                            p += z * a[(i, k + 2)];
                            a[(i, k + 2)] -= p * r;
                        }
                        a[(i, k + 1)] -= p * q;
                        a[(i, k)] -= p;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| C64::new(re, im)).collect())
}

/// Groups eigenvalue indices whose mutual distance chains below `tol`.
pub fn clusters(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                if ri != rj {
                    label[rj.max(ri)] = rj.min(ri);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut label, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn eigenvector_condition(m: &RMatrix, values: &[C64]) -> f64 {
    let n = m.dim();
    let scale = values
        .iter()
        .map(|z| z.norm())
        .fold(m.max_norm(), f64::max)
        .max(f64::MIN_POSITIVE);
    let tol = CLUSTER_TOL * scale;
    let mc = m.to_complex();
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for group in clusters(values, tol) {
        let k = group.len();
        let mean: C64 = group.iter().map(|&i| values[i]).sum::<C64>() / k as f64;
        let shifted = CMatrix::from_fn(n, |i, j| {
            if i == j {
                mc[(i, j)] - mean
            } else {
                mc[(i, j)]
            }
        });
        let gram = &shifted.adjoint() * &shifted;
        let (w, u) = jacobi(&gram);
        if w[k - 1].max(0.0).sqrt() > tol {
            // geometric multiplicity below algebraic: defective
            return f64::INFINITY;
        }
        for c in 0..k {
            columns.push((0..n).map(|i| u[(i, c)]).collect());
        }
    }
    let v = CMatrix::from_fn(n, |i, j| columns[j][i]);
    let (s2, _) = jacobi(&(&v.adjoint() * &v));
    let (lo, hi) = (s2[0], s2[n - 1]);
    if lo <= hi * f64::EPSILON * f64::EPSILON {
        return f64::INFINITY;
    }
    (hi / lo).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Roots of a monic cubic via the companion matrix's characteristic
    /// polynomial evaluated directly: used only to check residuals.
    fn char_poly_residual(m: &RMatrix, lambda: C64) -> f64 {
        let n = m.dim();
        let shifted = CMatrix::from_fn(n, |i, j| {
            let x = C64::new(m[(i, j)], 0.0);
            if i == j {
                x - lambda
            } else {
                x
            }
        });
        determinant(&shifted).norm()
    }

    fn determinant(m: &CMatrix) -> C64 {
        let n = m.dim();
        if n == 1 {
            return m[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let minor = CMatrix::from_fn(n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })]);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                m[(0, j)] * determinant(&minor) * sign
            })
            .sum()
    }

    #[test]
    fn diagonal_spectrum_is_exact() {
        let s = spectrum(&RMatrix::diag(&[0.0, -2.0, -1.0])).unwrap();
        let mut re: Vec<f64> = s.values.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_eq!(re, vec![-2.0, -1.0, 0.0]);
        assert!((s.vector_condition - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let s = spectrum(&RMatrix::from_rows(&[&[0.0, -3.0], &[3.0, 0.0]])).unwrap();
        let v = s.sorted();
        assert!((v[0] - C64::new(0.0, -3.0)).norm() < 1e-14);
        assert!((v[1] - C64::new(0.0, 3.0)).norm() < 1e-14);
    }

    #[test]
    fn jordan_block_is_defective() {
        let s = spectrum(&RMatrix::from_rows(&[&[-1.0, 1.0], &[0.0, -1.0]])).unwrap();
        assert!(s.vector_condition.is_infinite());
        assert!(s.is_ep_suspect());
    }

    #[test]
    fn repeated_diagonalizable_eigenvalue_is_well_conditioned() {
        let s = spectrum(&RMatrix::from_rows(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, -2.0, -1.0],
            &[0.0, 0.0, 1.0, -2.0],
        ]))
        .unwrap();
        assert!(s.vector_condition < 10.0, "{}", s.vector_condition);
    }

    #[test]
    fn dense_matrix_residuals() {
        let m = RMatrix::from_rows(&[
            &[1.0, 2.0, -1.0, 0.5, 3.0],
            &[0.0, -1.0, 4.0, 1.0, 0.0],
            &[2.0, 1.0, 0.0, -2.0, 1.0],
            &[-1.0, 0.0, 1.0, 1.0, 2.0],
            &[0.5, 3.0, -1.0, 0.0, -2.0],
        ]);
        let s = spectrum(&m).unwrap();
        assert_eq!(s.values.len(), 5);
        for &l in &s.values {
            assert!(char_poly_residual(&m, l) < 1e-9, "residual at {l}");
        }
        let tr: C64 = s.values.iter().sum();
        assert!((tr.re - m.trace()).abs() < 1e-12 && tr.im.abs() < 1e-12);
    }

    #[test]
    fn cluster_grouping() {
        let v = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1e-9, 0.0)];
        let g = clusters(&v, 1e-6);
        assert_eq!(g, vec![vec![0, 2], vec![1]]);
    }
}
