use super::config::{Prevertex, StripConfig};
use super::ScError;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// `log sinh(u)` with the imaginary part placed in `(lo, lo + 2π]`.
///
/// Computed as `|Re u| + log(sinh(u)·e^{−|Re u|})` so that large real parts
/// neither overflow nor lose the phase.
fn log_sinh(u: Complex64, lo: f64) -> Complex64 {
    let (x, y) = (u.re, u.im);
    let e = (-2.0 * x.abs()).exp();
    let scaled = if x >= 0.0 {
        (Complex64::from_polar(1.0, y) - e * Complex64::from_polar(1.0, -y)) * 0.5
    } else {
        (e * Complex64::from_polar(1.0, y) - Complex64::from_polar(1.0, -y)) * 0.5
    };
    let mut arg = scaled.arg();
    while arg <= lo {
        arg += TAU;
    }
    while arg > lo + TAU {
        arg -= TAU;
    }
    Complex64::new(x.abs() + scaled.norm().ln(), arg)
}

/// Lower bound of the argument range for a prevertex's sinh factor.
///
/// On the strip `ζ − z_k` has imaginary part in `[0, 1]` for a lower
/// prevertex and in `[−1, 0]` for an upper one, so `sinh` stays in the closed
/// upper, respectively lower, half plane. These ranges keep the logarithm
/// continuous there, boundary included, and agree with the principal value at
/// every interior point.
fn arg_floor(pv: &Prevertex) -> f64 {
    if pv.is_lower() {
        -FRAC_PI_2
    } else {
        -1.5 * PI
    }
}

pub(crate) fn log_integrand(zeta: Complex64, cfg: &StripConfig, pvs: &[Prevertex]) -> Result<Complex64, ScError> {
    let alpha = super::config::ratio_f64(cfg.alpha_minus - cfg.alpha_plus);
    let mut acc = zeta * (FRAC_PI_2 * alpha);
    for pv in pvs {
        if pv.beta == 0.0 {
            continue;
        }
        let d = zeta - pv.z;
        if d == Complex64::new(0.0, 0.0) {
            if pv.beta < 0.0 {
                return Err(ScError::Pole { index: pv.index, z: pv.z });
            }
            return Ok(Complex64::new(f64::NEG_INFINITY, 0.0));
        }
        acc += pv.beta * log_sinh(d * FRAC_PI_2, arg_floor(pv));
    }
    Ok(acc)
}

pub(crate) fn eval(zeta: Complex64, cfg: &StripConfig, pvs: &[Prevertex]) -> Result<Complex64, ScError> {
    let l = log_integrand(zeta, cfg, pvs)?;
    if l.re == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(l.exp())
}

/// `exp(π/2 (α₋ − α₊) ζ) · Π sinh(π/2 (ζ − z_k))^{α_k − 1}` at a point of the
/// closed strip.
pub fn sc_integrand(zeta: Complex64, cfg: &StripConfig) -> Result<Complex64, ScError> {
    if !(0.0..=1.0).contains(&zeta.im) {
        return Err(ScError::OutsideStrip(zeta));
    }
    eval(zeta, cfg, &cfg.prevertices())
}
