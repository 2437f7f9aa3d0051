//! Curvature contractions: Ricci and scalar curvature via the co-inner
//! product, the Einstein tensor, the Einstein density built from Levi-Civita
//! symbols, the Hodge double dual, and the densitized field equation.
//!
//! Ricci contracts the first and last slots of `R_abcd` with `g⁺`, which makes
//! `Ric = g` on the unit sphere and `Ric = 0` on vacuum solutions. At degenerate
//! points the same formula is used as an extended convention.

use crate::dsl::{parse_expression, Expr, MetricSpec};
use crate::geometry::{CurvatureValue, Geometry, GeometryError};
use crate::tensor::{cometric, signature_of, CoMetric, MetricValue, Point, Signature};
use nalgebra::DMatrix;
use thiserror::Error;

/// Ratio of the contraction `g_kl ε^{akst} ε^{blpq} R_stpq` to `det g · G^{ab}`.
pub const DENSITY_FACTOR: f64 = 4.0;

/// Ratio of `g^{st} (*R*)_{asbt}` to `G_ab`.
pub const HODGE_FACTOR: f64 = -4.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EinsteinError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("metric is degenerate here (signature {0}); the Einstein tensor is not defined")]
    Degenerate(Signature),
    #[error("this operation needs a 4-dimensional metric, got dimension {0}")]
    Dimension(usize),
    #[error("metric is not Lorentzian here: -det g = {0:.3e}")]
    NonLorentzian(f64),
    #[error("source tensor is {got}x{got}, expected {want}x{want}")]
    SourceShape { got: usize, want: usize },
}

/// The Ricci tensor at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciValue {
    pub matrix: DMatrix<f64>,
    pub point: Point,
    /// Set at degenerate points, where the co-contraction extends the classical definition.
    pub extended: bool,
}

/// `G^{ab} det g` from the Levi-Civita formula, and its lowered form.
///
/// Both carry the factor [`DENSITY_FACTOR`] relative to `det g · G`.
#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinDensityValue {
    pub upper: DMatrix<f64>,
    pub lower: DMatrix<f64>,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HodgeDualValue {
    /// `(*R*)_abcd` with all indices down, `[a][b][c][d]` order.
    pub star_r_star: Vec<f64>,
    /// `g^{st} (*R*)_asbt`.
    pub einstein_candidate: DMatrix<f64>,
    /// Least-squares ratio of the candidate to [`einstein_at`], when the latter is not zero.
    pub ratio: Option<f64>,
    /// Largest deviation of the candidate from `ratio · G`.
    pub ratio_residual: Option<f64>,
}

/// The Levi-Civita symbol: the sign of the permutation, zero on repeated indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviCivita {
    dim: usize,
    table: Vec<i8>,
}

impl LeviCivita {
    pub fn new(dim: usize) -> Self {
        let len = dim.pow(dim as u32);
        let mut idx = vec![0usize; dim];
        let table = (0..len)
            .map(|mut i| {
                for slot in idx.iter_mut().rev() {
                    *slot = i % dim;
                    i /= dim;
                }
                permutation_sign(&idx)
            })
            .collect();
        LeviCivita { dim, table }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, idx: &[usize]) -> i8 {
        let flat = idx.iter().fold(0, |acc, &i| acc * self.dim + i);
        self.table[flat]
    }

    pub fn entries(&self) -> &[i8] {
        &self.table
    }
}

fn permutation_sign(idx: &[usize]) -> i8 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            match idx[i].cmp(&idx[j]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

struct PointData {
    g: MetricValue,
    gp: CoMetric,
    riemann: CurvatureValue,
}

fn point_data(geo: &Geometry, p: &Point, tol: f64) -> Result<PointData, EinsteinError> {
    let riemann = geo.riemann_at(p, tol)?;
    let g = geo.metric_at(p)?;
    let gp = cometric(&g, tol);
    Ok(PointData { g, gp, riemann })
}

fn ricci_from(r: &CurvatureValue, gp: &CoMetric) -> DMatrix<f64> {
    let n = r.dim;
    DMatrix::from_fn(n, n, |b, c| {
        let mut acc = 0.0;
        for a in 0..n {
            for d in 0..n {
                let w = gp.matrix[(a, d)];
                if w != 0.0 {
                    acc += w * r.get(a, b, c, d);
                }
            }
        }
        acc
    })
}

fn trace_with(m: &DMatrix<f64>, gp: &CoMetric) -> f64 {
    gp.matrix.component_mul(m).sum()
}

pub fn ricci_at(geo: &Geometry, p: &Point, tol: f64) -> Result<RicciValue, EinsteinError> {
    let d = point_data(geo, p, tol)?;
    Ok(RicciValue { matrix: ricci_from(&d.riemann, &d.gp), point: p.clone(), extended: d.riemann.degenerate })
}

pub fn scalar_at(geo: &Geometry, p: &Point, tol: f64) -> Result<f64, EinsteinError> {
    let d = point_data(geo, p, tol)?;
    Ok(trace_with(&ricci_from(&d.riemann, &d.gp), &d.gp))
}

/// `G = Ric − ½ s g`, only where the metric is non-degenerate.
pub fn einstein_at(geo: &Geometry, p: &Point, tol: f64) -> Result<DMatrix<f64>, EinsteinError> {
    let d = point_data(geo, p, tol)?;
    einstein_from(&d, tol)
}

fn einstein_from(d: &PointData, tol: f64) -> Result<DMatrix<f64>, EinsteinError> {
    let sig = signature_of(&d.g, tol);
    if sig.is_degenerate() {
        return Err(EinsteinError::Degenerate(sig));
    }
    let ric = ricci_from(&d.riemann, &d.gp);
    let s = trace_with(&ric, &d.gp);
    Ok(&ric - d.g.matrix() * (0.5 * s))
}

fn require_4d(geo: &Geometry) -> Result<(), EinsteinError> {
    if geo.dim() != 4 {
        return Err(EinsteinError::Dimension(geo.dim()));
    }
    Ok(())
}

/// `g_kl ε^{akst} ε^{blpq} R_stpq` evaluated literally, plus the lowered
/// version `g_ak g_bl (·)^{kl}`. Finite wherever `R_abcd` is.
pub fn einstein_density_at(geo: &Geometry, p: &Point, tol: f64) -> Result<EinsteinDensityValue, EinsteinError> {
    require_4d(geo)?;
    let d = point_data(geo, p, tol)?;
    let upper = levi_civita_density(&d.riemann, d.g.matrix());
    let lower = d.g.matrix() * &upper * d.g.matrix();
    Ok(EinsteinDensityValue { upper, lower, point: p.clone() })
}

fn levi_civita_density(r: &CurvatureValue, g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = 4;
    let eps = LeviCivita::new(n);
    // m[a][k][p][q] = ε^{akst} R_stpq
    let mut m = vec![0.0; n * n * n * n];
    for a in 0..n {
        for k in 0..n {
            for s in 0..n {
                for t in 0..n {
                    let e = eps.get(&[a, k, s, t]);
                    if e == 0 {
                        continue;
                    }
                    for pp in 0..n {
                        for q in 0..n {
                            m[((a * n + k) * n + pp) * n + q] += f64::from(e) * r.get(s, t, pp, q);
                        }
                    }
                }
            }
        }
    }
    DMatrix::from_fn(n, n, |a, b| {
        let mut acc = 0.0;
        for k in 0..n {
            for l in 0..n {
                let gkl = g[(k, l)];
                if gkl == 0.0 {
                    continue;
                }
                for pp in 0..n {
                    for q in 0..n {
                        let e = eps.get(&[b, l, pp, q]);
                        if e != 0 {
                            acc += gkl * f64::from(e) * m[((a * n + k) * n + pp) * n + q];
                        }
                    }
                }
            }
        }
        acc
    })
}

/// `(*R*)_abcd = ε_ab^{st} ε_cd^{pq} R_stpq` with `ε_abcd = ε̂_abcd √(−det g)`,
/// and the trace `g^{st}(*R*)_asbt` compared against [`einstein_at`].
pub fn hodge_double_dual_at(geo: &Geometry, p: &Point, tol: f64) -> Result<HodgeDualValue, EinsteinError> {
    require_4d(geo)?;
    let d = point_data(geo, p, tol)?;
    let einstein = einstein_from(&d, tol)?;
    let det = d.g.det();
    if -det <= 0.0 {
        return Err(EinsteinError::NonLorentzian(-det));
    }
    let n = 4;
    let vol = (-det).sqrt();
    let eps = LeviCivita::new(n);
    let gi = &d.gp.matrix;
    // Raise the last two slots: e[a][b][s][t] = ε_ab^{st}
    let mut e = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let v = f64::from(eps.get(&[a, b, x, y])) * vol;
                    if v == 0.0 {
                        continue;
                    }
                    for s in 0..n {
                        for t in 0..n {
                            e[((a * n + b) * n + s) * n + t] += gi[(s, x)] * gi[(t, y)] * v;
                        }
                    }
                }
            }
        }
    }
    let idx = |a: usize, b: usize, c: usize, dd: usize| ((a * n + b) * n + c) * n + dd;
    // h[a][b][p][q] = ε_ab^{st} R_stpq
    let mut h = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for s in 0..n {
                for t in 0..n {
                    let w = e[idx(a, b, s, t)];
                    if w == 0.0 {
                        continue;
                    }
                    for pp in 0..n {
                        for q in 0..n {
                            h[idx(a, b, pp, q)] += w * d.riemann.get(s, t, pp, q);
                        }
                    }
                }
            }
        }
    }
    let mut star = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for dd in 0..n {
                    let mut acc = 0.0;
                    for pp in 0..n {
                        for q in 0..n {
                            acc += e[idx(c, dd, pp, q)] * h[idx(a, b, pp, q)];
                        }
                    }
                    star[idx(a, b, c, dd)] = acc;
                }
            }
        }
    }
    let candidate = DMatrix::from_fn(n, n, |a, b| {
        let mut acc = 0.0;
        for s in 0..n {
            for t in 0..n {
                acc += gi[(s, t)] * star[idx(a, s, b, t)];
            }
        }
        acc
    });
    let norm2 = einstein.norm_squared();
    let (ratio, ratio_residual) = if norm2 > 0.0 {
        let ratio = candidate.dot(&einstein) / norm2;
        (Some(ratio), Some((&candidate - &einstein * ratio).amax()))
    } else {
        (None, None)
    };
    Ok(HodgeDualValue { star_r_star: star, einstein_candidate: candidate, ratio, ratio_residual })
}

/// `G_ab det g + Λ g_ab det g − κ T_ab det g`, with `G_ab det g` taken from the
/// lowered Levi-Civita density divided by [`DENSITY_FACTOR`].
pub fn densitized_residual(
    geo: &Geometry,
    p: &Point,
    lambda: f64,
    source: &DMatrix<f64>,
    kappa: f64,
    tol: f64,
) -> Result<DMatrix<f64>, EinsteinError> {
    if source.nrows() != geo.dim() || source.ncols() != geo.dim() {
        return Err(EinsteinError::SourceShape { got: source.nrows(), want: geo.dim() });
    }
    let density = einstein_density_at(geo, p, tol)?;
    let g = geo.metric_at(p)?;
    let det = g.det();
    Ok(density.lower / DENSITY_FACTOR + g.matrix() * (lambda * det) - source * (kappa * det))
}

/// Boyer–Lindquist Kerr–Newman with every component multiplied by `ΣΔ` and
/// the quotients cancelled by hand, so no component has a denominator.
///
/// With `Σ = r² + a² cos²θ` and `Δ = r² − 2mr + a² + e²`:
/// `tt = −(Δ − a² sin²θ)Δ`, `tφ = −a sin²θ (r² + a² − Δ)Δ`, `rr = Σ²`,
/// `θθ = Σ²Δ`, `φφ = ((r² + a²)² − Δ a² sin²θ) sin²θ Δ`.
pub fn kerr_newman_regularize(m: f64, a: f64, e: f64) -> MetricSpec {
    let sigma = "(r^2 + a^2*cos(theta)^2)";
    let delta = "(r^2 - 2*m*r + a^2 + e^2)";
    let s2 = "sin(theta)^2";
    let tt = format!("-({delta} - a^2*{s2})*{delta}");
    let tphi = format!("-a*{s2}*(r^2 + a^2 - {delta})*{delta}");
    let rr = format!("{sigma}^2");
    let thth = format!("{sigma}^2*{delta}");
    let phph = format!("((r^2 + a^2)^2 - {delta}*a^2*{s2})*{s2}*{delta}");
    let z = "0".to_string();
    let rows = [
        [&tt, &z, &z, &tphi],
        [&z, &rr, &z, &z],
        [&z, &z, &thth, &z],
        [&tphi, &z, &z, &phph],
    ];
    let components: Vec<Expr> =
        rows.iter().flatten().map(|s| parse_expression(s).expect("fixed Kerr-Newman expression parses")).collect();
    MetricSpec::new(
        ["t", "r", "theta", "phi"].map(String::from).to_vec(),
        vec![("m".into(), m), ("a".into(), a), ("e".into(), e)],
        components,
    )
    .expect("fixed Kerr-Newman spec is valid")
}
