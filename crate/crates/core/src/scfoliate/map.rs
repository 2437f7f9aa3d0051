use super::config::{validate_config, Prevertex, StripConfig};
use super::integrand::log_integrand;
use super::quad::{integrate, QuadTol};
use super::ScError;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Minimum distance a path keeps from prevertices other than its endpoint.
pub const DELTA: f64 = 1e-3;
/// Successive end-limit values closer than this count as converged.
pub const END_TOL: f64 = 1e-7;
const MAX_DOUBLINGS: u32 = 12;

/// Which admissible integration path to use from `z0` to `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Vertical to `Im = ½`, horizontal, then vertical to `z`.
    #[default]
    Primary,
    /// Vertical to `Im = ¾`, horizontal past `Re z`, then a slanted leg to `z`.
    Alternate,
}

/// A validated config with its singular prevertices, ready for integration.
pub(crate) struct Mapper<'a> {
    cfg: &'a StripConfig,
    all: Vec<Prevertex>,
    singular: Vec<Prevertex>,
    tol: QuadTol,
}

impl<'a> Mapper<'a> {
    pub(crate) fn new(cfg: &'a StripConfig) -> Result<Self, ScError> {
        let findings = validate_config(cfg);
        if !findings.is_empty() {
            return Err(ScError::InvalidConfig(findings));
        }
        let all = cfg.prevertices();
        let singular = all.iter().filter(|p| p.beta != 0.0).copied().collect();
        Ok(Mapper { cfg, all, singular, tol: QuadTol::default() })
    }

    fn at_prevertex(&self, z: Complex64) -> Option<&Prevertex> {
        self.singular.iter().find(|p| p.z == z)
    }

    fn near_prevertex(&self, z: Complex64) -> Option<&Prevertex> {
        self.singular
            .iter()
            .filter(|p| p.z != z && (p.z - z).norm() < DELTA)
            .min_by(|a, b| (a.z - z).norm().total_cmp(&(b.z - z).norm()))
    }

    fn integrand(&self, zeta: Complex64) -> Result<Complex64, ScError> {
        let l = log_integrand(zeta, self.cfg, &self.all)?;
        Ok(l.exp())
    }

    /// `∫ f` on the straight segment from `p` to `q`.
    pub(crate) fn segment(&self, p: Complex64, q: Complex64) -> Result<Complex64, ScError> {
        if p == q {
            return Ok(Complex64::new(0.0, 0.0));
        }
        match (self.at_prevertex(p), self.at_prevertex(q)) {
            (None, None) => {
                let d = q - p;
                let v = integrate(|t| self.integrand(p + d * t), 0.0, 1.0, self.tol)?;
                Ok(v * d)
            }
            (Some(pv), None) => self.leg_from(pv, q),
            (None, Some(pv)) => Ok(-self.leg_from(pv, p)?),
            (Some(a), Some(b)) => {
                let mid = (p + q) * 0.5;
                Ok(self.leg_from(a, mid)? - self.leg_from(b, mid)?)
            }
        }
    }

    /// `∫ f` from the prevertex to `q` with `s = v^{1/α}` along the segment,
    /// which turns the `s^{α−1}` endpoint behaviour into a bounded integrand.
    fn leg_from(&self, pv: &Prevertex, q: Complex64) -> Result<Complex64, ScError> {
        let d = q - pv.z;
        let len = d.norm();
        let dir = d / len;
        let alpha = 1.0 + pv.beta;
        let inv = 1.0 / alpha;
        let top = len.powf(alpha);
        let f = |v: f64| -> Result<Complex64, ScError> {
            let s = v.powf(inv);
            let zeta = pv.z + dir * s;
            if zeta == pv.z {
                return Err(ScError::Pole { index: pv.index, z: pv.z });
            }
            let l = log_integrand(zeta, self.cfg, &self.all)?;
            Ok((l + (inv.ln() + (inv - 1.0) * v.ln())).exp())
        };
        Ok(integrate(f, 0.0, top, self.tol)? * dir)
    }

    pub(crate) fn path(&self, z: Complex64, route: Route) -> Vec<Complex64> {
        let z0 = self.cfg.z0;
        let (level, shift) = match route {
            Route::Primary => (0.5, 0.0),
            Route::Alternate => (0.75, 0.37),
        };
        let (target, tail) = match self.near_prevertex(z) {
            Some(pv) => (pv.z, Some(z)),
            None => (z, None),
        };
        let mut pts = vec![
            z0,
            Complex64::new(z0.re, level),
            Complex64::new(target.re + shift, level),
            target,
        ];
        pts.extend(tail);
        pts.dedup();
        pts
    }

    pub(crate) fn integral(&self, z: Complex64, route: Route) -> Result<Complex64, ScError> {
        if !(z.re.is_finite() && (0.0..=1.0).contains(&z.im)) {
            return Err(ScError::OutsideStrip(z));
        }
        let pts = self.path(z, route);
        pts.windows(2).map(|w| self.segment(w[0], w[1])).sum()
    }

    pub(crate) fn map(&self, z: Complex64, route: Route) -> Result<Complex64, ScError> {
        Ok(self.cfg.a + self.cfg.c * self.integral(z, route)?)
    }

    /// Image of the segment increment from `p` to `q`, scaled by `C`.
    pub(crate) fn step(&self, p: Complex64, q: Complex64) -> Result<Complex64, ScError> {
        Ok(self.cfg.c * self.segment(p, q)?)
    }
}

/// `f(z) = A + C ∫_{z0}^{z} sc_integrand` along the primary route.
pub fn sc_map(z: Complex64, cfg: &StripConfig) -> Result<Complex64, ScError> {
    Mapper::new(cfg)?.map(z, Route::Primary)
}

/// [`sc_map`] along a chosen route; all routes agree up to quadrature error.
pub fn sc_map_via(z: Complex64, cfg: &StripConfig, route: Route) -> Result<Complex64, ScError> {
    Mapper::new(cfg)?.map(z, route)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VertexImage {
    Finite { re: f64, im: f64 },
    /// The end limit did not settle; `last` is the final sample.
    NonConvergent { re: f64, im: f64 },
}

impl VertexImage {
    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            VertexImage::Finite { re, im } => Some(Complex64::new(re, im)),
            VertexImage::NonConvergent { .. } => None,
        }
    }
}

/// A polygon vertex in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonVertex {
    pub label: String,
    #[serde(serialize_with = "ser_ratio")]
    pub alpha: Rational64,
    /// `None` for the two strip ends.
    #[serde(skip)]
    pub prevertex: Option<Complex64>,
    pub image: VertexImage,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}


fn end_limit(m: &Mapper<'_>, sign: f64) -> Result<VertexImage, ScError> {
    let at = |x: f64| Complex64::new(sign * x, 0.5);
    let mut x = 1.0;
    let mut value = m.map(at(x), Route::Primary)?;
    for _ in 0..MAX_DOUBLINGS {
        let next = value + m.step(at(x), at(2.0 * x))?;
        x *= 2.0;
        let settled = (next - value).norm() < END_TOL;
        value = next;
        if settled {
            return Ok(VertexImage::Finite { re: value.re, im: value.im });
        }
    }
    Ok(VertexImage::NonConvergent { re: value.re, im: value.im })
}

/// Images of all vertices: the `−∞` end, lower prevertices left to right, the
/// `+∞` end, then upper prevertices right to left.
pub fn polygon_vertices(cfg: &StripConfig) -> Result<Vec<PolygonVertex>, ScError> {
    let m = Mapper::new(cfg)?;
    let finite = |pv: &Prevertex, label: String| -> Result<PolygonVertex, ScError> {
        let v = m.map(pv.z, Route::Primary)?;
        Ok(PolygonVertex { label, alpha: pv.alpha, prevertex: Some(pv.z), image: VertexImage::Finite { re: v.re, im: v.im } })
    };
    let nl = cfg.lower.len();
    let mut out = vec![PolygonVertex {
        label: "end_minus".into(),
        alpha: cfg.alpha_minus,
        prevertex: None,
        image: end_limit(&m, -1.0)?,
    }];
    for (i, pv) in m.all[..nl].iter().enumerate() {
        out.push(finite(pv, format!("lower_{i}"))?);
    }
    out.push(PolygonVertex {
        label: "end_plus".into(),
        alpha: cfg.alpha_plus,
        prevertex: None,
        image: end_limit(&m, 1.0)?,
    });
    for (i, pv) in m.all[nl..].iter().enumerate() {
        out.push(finite(pv, format!("upper_{i}"))?);
    }
    Ok(out)
}

/// Interior angles in radians, each in `(0, 2π]`, or `None` if some vertex
/// image is not finite.
pub fn interior_angles(vertices: &[PolygonVertex]) -> Option<Vec<f64>> {
    let pts: Vec<Complex64> = vertices.iter().map(|v| v.image.finite()).collect::<Option<_>>()?;
    let n = pts.len();
    Some(
        (0..n)
            .map(|i| {
                let v = pts[i];
                let prev = pts[(i + n - 1) % n];
                let next = pts[(i + 1) % n];
                let a = ((prev - v) / (next - v)).arg();
                if a <= 0.0 {
                    a + TAU
                } else {
                    a
                }
            })
            .collect(),
    )
}
