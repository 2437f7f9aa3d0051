use super::config::StripConfig;
use super::map::{polygon_vertices, Mapper, Route};
use super::ScError;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub const MIN_LEAVES: usize = 2;
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolylineKind {
    Leaf,
    Boundary,
    Vertex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub kind: PolylineKind,
    pub label: String,
    /// `Im z` of the preimage; `None` for vertex markers.
    pub level: Option<f64>,
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Complex64>,
}

fn ser_points<S: serde::Serializer>(pts: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(pts.iter().map(|z| [z.re, z.im]))
}

/// Leaves ordered by level, then boundary pieces, then vertex markers.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PolylineSet {
    pub polylines: Vec<Polyline>,
}

impl PolylineSet {
    pub fn leaves(&self) -> impl Iterator<Item = &Polyline> {
        self.of_kind(PolylineKind::Leaf)
    }

    pub fn of_kind(&self, kind: PolylineKind) -> impl Iterator<Item = &Polyline> {
        self.polylines.iter().filter(move |p| p.kind == kind)
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.polylines.iter().flat_map(|p| p.points.iter().copied())
    }
}

struct Job {
    kind: PolylineKind,
    label: String,
    level: f64,
    xs: Vec<f64>,
}

fn trace(m: &Mapper<'_>, job: &Job) -> Result<Polyline, ScError> {
    let at = |x: f64| Complex64::new(x, job.level);
    let mut value = m.map(at(job.xs[0]), Route::Primary)?;
    let mut points = Vec::with_capacity(job.xs.len());
    points.push(value);
    for w in job.xs.windows(2) {
        value += m.step(at(w[0]), at(w[1]))?;
        points.push(value);
    }
    if let Some(bad) = points.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(ScError::NonFinite { z: at(job.xs[bad]), value: points[bad] });
    }
    Ok(Polyline { kind: job.kind, label: job.label.clone(), level: Some(job.level), points })
}

/// Splits the sample grid at the breakpoints inside it.
fn boundary_jobs(edge: &str, level: f64, grid: &[f64], breaks: &[f64]) -> Vec<Job> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    let mut knots: Vec<f64> = grid.iter().copied().chain(inner.iter().copied()).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut jobs = Vec::new();
    let mut current = Vec::new();
    for x in knots {
        current.push(x);
        if inner.contains(&x) {
            jobs.push(std::mem::replace(&mut current, vec![x]));
        }
    }
    jobs.push(current);
    jobs.into_iter()
        .filter(|xs| xs.len() >= 2)
        .enumerate()
        .map(|(i, xs)| Job { kind: PolylineKind::Boundary, label: format!("{edge}:{i}"), level, xs })
        .collect()
}

/// Images of the horizontal lines `Im z = j/(leaves+1)`, `j = 1..=leaves`,
/// sampled at `samples` evenly spaced `x` in `x_range`, together with the
/// boundary images split at prevertices and the polygon vertex markers.
pub fn foliation(
    cfg: &StripConfig,
    leaves: usize,
    x_range: (f64, f64),
    samples: usize,
) -> Result<PolylineSet, ScError> {
    if leaves < MIN_LEAVES {
        return Err(ScError::Constraint(format!("need at least {MIN_LEAVES} leaves, got {leaves}")));
    }
    if samples < MIN_SAMPLES {
        return Err(ScError::Constraint(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let (lo, hi) = x_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(ScError::Constraint(format!("x range [{lo}, {hi}] must be finite and increasing")));
    }
    let m = Mapper::new(cfg)?;
    let grid: Vec<f64> = (0..samples).map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64).collect();
    let mut jobs: Vec<Job> = (1..=leaves)
        .map(|j| {
            let c = j as f64 / (leaves + 1) as f64;
            Job { kind: PolylineKind::Leaf, label: format!("leaf:{c}"), level: c, xs: grid.clone() }
        })
        .collect();
    jobs.extend(boundary_jobs("lower", 0.0, &grid, &cfg.lower));
    jobs.extend(boundary_jobs("upper", 1.0, &grid, &cfg.upper));
    let mut polylines: Vec<Polyline> = jobs.par_iter().map(|job| trace(&m, job)).collect::<Result<_, _>>()?;
    for v in polygon_vertices(cfg)? {
        if let Some(z) = v.image.finite() {
            polylines.push(Polyline {
                kind: PolylineKind::Vertex,
                label: format!("vertex:{}", v.label),
                level: None,
                points: vec![z],
            });
        }
    }
    Ok(PolylineSet { polylines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scfoliate::preset;

    #[test]
    fn trivial_leaves_are_horizontal() {
        let ps = foliation(&StripConfig::trivial(), 3, (-2.0, 2.0), 16).unwrap();
        let leaves: Vec<&Polyline> = ps.leaves().collect();
        assert_eq!(leaves.len(), 3);
        for (leaf, c) in leaves.iter().zip([0.25, 0.5, 0.75]) {
            assert_eq!(leaf.label, format!("leaf:{c}"));
            for (i, z) in leaf.points.iter().enumerate() {
                let x = -2.0 + 4.0 * i as f64 / 15.0;
                assert!((z - Complex64::new(x, c)).norm() < 1e-10, "{z}");
            }
        }
        assert_eq!(ps.of_kind(PolylineKind::Boundary).count(), 2);
        assert_eq!(ps.of_kind(PolylineKind::Vertex).count(), 0);
    }

    #[test]
    fn boundary_pieces_split_at_prevertices() {
        let ps = foliation(&preset("hexagon", 1.0, 0.5).unwrap(), 2, (-4.0, 4.0), 16).unwrap();
        let labels: Vec<&str> = ps.of_kind(PolylineKind::Boundary).map(|p| p.label.as_str()).collect();
        assert_eq!(labels, ["lower:0", "lower:1", "lower:2", "upper:0", "upper:1", "upper:2"]);
        assert_eq!(ps.of_kind(PolylineKind::Vertex).count(), 6);
    }

    #[test]
    fn preconditions() {
        let cfg = StripConfig::trivial();
        assert!(matches!(foliation(&cfg, 1, (-1.0, 1.0), 16), Err(ScError::Constraint(_))));
        assert!(matches!(foliation(&cfg, 2, (-1.0, 1.0), 15), Err(ScError::Constraint(_))));
        assert!(matches!(foliation(&cfg, 2, (1.0, -1.0), 16), Err(ScError::Constraint(_))));
    }
}
