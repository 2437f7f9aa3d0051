#![allow(clippy::excessive_precision)]

use super::ScError;
use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Stopping rule for [`integrate`]: total error ≤ `max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol { abs: 1e-9, rel: 1e-12, max_intervals: 4000 }
    }
}

struct Piece {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

fn g7k15<F>(f: &F, lo: f64, hi: f64) -> Result<Piece, ScError>
where
    F: Fn(f64) -> Result<Complex64, ScError>,
{
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let center = f(mid)?;
    let mut kronrod = center * WGK[7];
    let mut gauss = center * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx)? + f(mid + dx)?;
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(ScError::NonFinite { z: Complex64::new(mid, 0.0), value });
    }
    Ok(Piece { lo, hi, value, error })
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a complex-valued function on
/// `[lo, hi]`, bisecting the interval with the largest error estimate first.
pub fn integrate<F>(f: F, lo: f64, hi: f64, tol: QuadTol) -> Result<Complex64, ScError>
where
    F: Fn(f64) -> Result<Complex64, ScError>,
{
    if lo == hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut pieces = vec![g7k15(&f, lo, hi)?];
    loop {
        let total: Complex64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        if error <= tol.abs.max(tol.rel * total.norm()) {
            return Ok(total);
        }
        if pieces.len() >= tol.max_intervals {
            return Err(ScError::NonConvergence { intervals: pieces.len(), error });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("at least one piece");
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            return Err(ScError::NonConvergence { intervals: pieces.len() + 1, error });
        }
        pieces.push(g7k15(&f, p.lo, mid)?);
        pieces.push(g7k15(&f, mid, p.hi)?);
    }
}
