use super::RMatrix;
use crate::error::{Error, Result};

// Degree-13 Padé coefficients and the 1-norm bound below which no scaling is needed.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// e^{M t} by scaling and squaring with a [13/13] Padé approximant.
pub fn real_expm(m: &RMatrix, t: f64) -> Result<RMatrix> {
    if !t.is_finite() || !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.dim();
    let a = m.scale(t);
    let norm = a.one_norm();
    if norm == 0.0 {
        return Ok(RMatrix::identity(n));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    if squarings > 1000 {
        return Err(Error::Overflow);
    }
    let a = a.scale(0.5f64.powi(squarings));

    let id = RMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;

    let lincomb = |terms: &[(f64, &RMatrix)]| {
        let mut out = RMatrix::zeros(n);
        for (c, m) in terms {
            out = &out + &m.scale(*c);
        }
        out
    };

    let u_inner = lincomb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u_tail = lincomb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)]);
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);
    let v_inner = lincomb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v_tail = lincomb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)]);
    let v = &(&a6 * &v_inner) + &v_tail;

    let mut r = (&v - &u).solve(&(&v + &u)).map_err(|_| Error::Overflow)?;
    for _ in 0..squarings {
        r = &r * &r;
        if !r.is_finite() {
            return Err(Error::Overflow);
        }
    }
    if !r.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(r)
}
