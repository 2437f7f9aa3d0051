//! Sampled semi-regularity test along a path that approaches a degenerate
//! point. This is a necessary-condition check: it looks for co-contracted
//! Koszul products (and, for diagonal metrics, the ratios `∂_a α_b² / α_c`)
//! that blow up as the path closes in on the limit.

use super::{eval_at, Geometry, GeometryError};
use crate::dsl::{differentiate, MetricSpec};
use crate::tensor::{cometric, Point};
use serde::Serialize;

pub const MIN_PATH_LEN: usize = 8;

/// Number of trailing samples inspected by the convergence test.
const TAIL: usize = 5;

/// Successive differences shrinking at least this fast count as convergence.
const CONTRACTION: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converged,
    Diverged,
}

impl Verdict {
    pub fn is_converged(self) -> bool {
        self == Verdict::Converged
    }
}

/// Values of `⟨⟨Γ_ab·, Γ_cd·⟩⟩` along the path, with `pair = [a, b, c, d]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSeries {
    pub pair: [usize; 4],
    pub values: Vec<f64>,
    pub verdict: Verdict,
}

/// Values of `∂_a α_b² / α_c` along the path, where `α_b² = |g_bb|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSeries {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub values: Vec<f64>,
    pub bounded: bool,
}

/// The diagonal criterion under both quantifier readings over `c ∈ {a, b}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalCriterion {
    /// Only `(a, b)` with `∂_a g_bb` not identically zero appear.
    pub ratios: Vec<RatioSeries>,
    pub for_all_c: bool,
    pub for_some_c: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiregularReport {
    pub path: Vec<Point>,
    pub products: Vec<ProductSeries>,
    /// True when every product series converged.
    pub converged: bool,
    pub diagonal: Option<DiagonalCriterion>,
}

impl SemiregularReport {
    pub fn diverged(&self) -> impl Iterator<Item = &ProductSeries> {
        self.products.iter().filter(|s| !s.verdict.is_converged())
    }
}

/// Points equal to `limit` except that coordinate `coord` is shifted by `2^-k` for each `k` in `ks`.
pub fn geometric_path(limit: &Point, coord: usize, ks: std::ops::RangeInclusive<i32>) -> Vec<Point> {
    ks.map(|k| {
        let mut p = limit.clone();
        p.0[coord] += 2f64.powi(-k);
        p
    })
    .collect()
}

/// Cauchy test on the last samples: converged when successive differences are
/// below `tol` (scaled by the magnitude) or shrink geometrically.
fn verdict(values: &[f64], tol: f64) -> Verdict {
    let tail = &values[values.len().saturating_sub(TAIL)..];
    if tail.iter().any(|v| !v.is_finite()) {
        return Verdict::Diverged;
    }
    let scale = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diffs: Vec<f64> = tail.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if diffs.iter().all(|d| *d <= tol * (1.0 + scale)) {
        return Verdict::Converged;
    }
    if diffs.windows(2).all(|w| w[1] <= CONTRACTION * w[0]) {
        return Verdict::Converged;
    }
    Verdict::Diverged
}

impl Geometry {
    pub fn check_semiregular(&self, path: &[Point], tol: f64) -> Result<SemiregularReport, GeometryError> {
        if path.len() < MIN_PATH_LEN {
            return Err(GeometryError::PathTooShort { len: path.len(), min: MIN_PATH_LEN });
        }
        let n = self.dim();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let mut series: Vec<Vec<f64>> = Vec::new();
        for (index, p) in path.iter().enumerate() {
            let g = self.metric_at(p)?;
            // Path points are non-degenerate, so invert at full precision.
            let gp = cometric(&g, 0.0);
            if gp.rank < n {
                return Err(GeometryError::DegeneratePathPoint { index });
            }
            let products = self.koszul_products(&self.christoffel_at(p)?, &gp);
            let mut k = 0;
            for (i, &(a, b)) in pairs.iter().enumerate() {
                for &(c, d) in &pairs[i..] {
                    if index == 0 {
                        series.push(Vec::with_capacity(path.len()));
                    }
                    series[k].push(products[(a * n + b, c * n + d)]);
                    k += 1;
                }
            }
        }
        let mut products = Vec::with_capacity(series.len());
        let mut values = series.into_iter();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[i..] {
                let values = values.next().unwrap_or_default();
                let verdict = verdict(&values, tol);
                products.push(ProductSeries { pair: [a, b, c, d], values, verdict });
            }
        }
        let converged = products.iter().all(|s| s.verdict.is_converged());
        let diagonal = if self.spec().is_diagonal() { Some(self.diagonal_criterion(path, tol)?) } else { None };
        Ok(SemiregularReport { path: path.to_vec(), products, converged, diagonal })
    }

    fn diagonal_criterion(&self, path: &[Point], tol: f64) -> Result<DiagonalCriterion, GeometryError> {
        let spec = self.spec();
        let n = spec.dim();
        let mut ratios = Vec::new();
        let mut for_some_c = true;
        for a in 0..n {
            for b in 0..n {
                let numerator = differentiate(spec.component(b, b), &spec.coords()[a]);
                if numerator.is_zero() {
                    continue;
                }
                let cs: &[usize] = if a == b { &[a] } else { &[a, b] };
                let mut any_bounded = false;
                for &c in cs {
                    let mut values = Vec::with_capacity(path.len());
                    for p in path {
                        let gbb = eval_at(spec, spec.component(b, b), p, || format!("g[{b}][{b}]"))?;
                        let d = eval_at(spec, &numerator, p, || format!("d{a} g[{b}][{b}]"))?;
                        let gcc = eval_at(spec, spec.component(c, c), p, || format!("g[{c}][{c}]"))?;
                        // ∂_a |g_bb| = sign(g_bb) ∂_a g_bb away from zeros of g_bb
                        values.push(gbb.signum() * d / gcc.abs().sqrt());
                    }
                    let bounded = verdict(&values, tol).is_converged();
                    any_bounded |= bounded;
                    ratios.push(RatioSeries { a, b, c, values, bounded });
                }
                for_some_c &= any_bounded;
            }
        }
        let for_all_c = ratios.iter().all(|r| r.bounded);
        Ok(DiagonalCriterion { ratios, for_all_c, for_some_c })
    }
}

pub fn check_semiregular(spec: &MetricSpec, path: &[Point], tol: f64) -> Result<SemiregularReport, GeometryError> {
    Geometry::new(spec.clone()).check_semiregular(path, tol)
}
