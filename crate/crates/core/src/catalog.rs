//! Built-in metrics with their parameter schemas.
//!
//! Singular loci are informational strings. Nothing stops a caller from
//! evaluating there; the expressions report their own domain errors.

use crate::dsl::{parse_expression, Expr, MetricError, MetricSpec};
use crate::einstein::kerr_newman_regularize;
use crate::tensor::Signature;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown metric `{0}` (see `metric list`)")]
    UnknownName(String),
    #[error("metric `{metric}` has no parameter `{param}`")]
    UnknownParam { metric: String, param: String },
    #[error("parameter {param} = {value} is outside {range}")]
    OutOfRange { param: String, value: f64, range: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSchema {
    pub name: &'static str,
    pub default: f64,
    pub min: f64,
    /// Whether `min` itself is excluded.
    pub min_exclusive: bool,
}

impl ParamSchema {
    const fn positive(name: &'static str, default: f64) -> Self {
        ParamSchema { name, default, min: 0.0, min_exclusive: true }
    }

    const fn nonnegative(name: &'static str, default: f64) -> Self {
        ParamSchema { name, default, min: 0.0, min_exclusive: false }
    }

    pub fn admits(&self, v: f64) -> bool {
        v.is_finite() && if self.min_exclusive { v > self.min } else { v >= self.min }
    }

    pub fn range(&self) -> String {
        format!("{}{}, inf)", if self.min_exclusive { "(" } else { "[" }, self.min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Minkowski,
    Sphere2,
    Schwarzschild,
    ReissnerNordstrom,
    KerrNewman,
    KerrNewmanRegularized,
    DiagSemiregular,
    DiagNonregular,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub coords: &'static [&'static str],
    pub params: &'static [ParamSchema],
    pub singular_loci: &'static [&'static str],
    /// Signature at generic points of the sampling box.
    pub signature: Signature,
    #[serde(skip)]
    family: Family,
}

const SPACETIME: &[&str] = &["t", "r", "theta", "phi"];
const CARTESIAN: &[&str] = &["t", "x", "y", "z"];
const LORENTZIAN: Signature = Signature { zero: 0, plus: 3, minus: 1 };
const M: ParamSchema = ParamSchema::positive("m", 1.0);

static ENTRIES: [CatalogEntry; 8] = [
    CatalogEntry {
        name: "minkowski",
        description: "flat spacetime, -dt^2 + dx^2 + dy^2 + dz^2",
        coords: CARTESIAN,
        params: &[],
        singular_loci: &[],
        signature: LORENTZIAN,
        family: Family::Minkowski,
    },
    CatalogEntry {
        name: "sphere2",
        description: "unit 2-sphere, dtheta^2 + sin(theta)^2 dphi^2",
        coords: &["theta", "phi"],
        params: &[],
        singular_loci: &["theta = 0, pi (coordinate poles)"],
        signature: Signature { zero: 0, plus: 2, minus: 0 },
        family: Family::Sphere2,
    },
    CatalogEntry {
        name: "schwarzschild",
        description: "Schwarzschild in Schwarzschild coordinates",
        coords: SPACETIME,
        params: &[M],
        singular_loci: &["r = 0", "r = 2m (horizon)", "theta = 0, pi"],
        signature: LORENTZIAN,
        family: Family::Schwarzschild,
    },
    CatalogEntry {
        name: "reissner_nordstrom",
        description: "charged non-rotating black hole",
        coords: SPACETIME,
        params: &[M, ParamSchema::nonnegative("e", 0.5)],
        singular_loci: &["r = 0", "r^2 - 2mr + e^2 = 0 (horizons)", "theta = 0, pi"],
        signature: LORENTZIAN,
        family: Family::ReissnerNordstrom,
    },
    CatalogEntry {
        name: "kerr_newman",
        description: "charged rotating black hole in Boyer-Lindquist coordinates",
        coords: SPACETIME,
        params: &[M, ParamSchema::nonnegative("a", 0.5), ParamSchema::nonnegative("e", 0.3)],
        singular_loci: &["Sigma = r^2 + a^2 cos(theta)^2 = 0", "Delta = r^2 - 2mr + a^2 + e^2 = 0", "theta = 0, pi"],
        signature: LORENTZIAN,
        family: Family::KerrNewman,
    },
    CatalogEntry {
        name: "kerr_newman_regularized",
        description: "Kerr-Newman multiplied by Sigma*Delta, polynomial in r, cos(theta), sin(theta)",
        coords: SPACETIME,
        params: &[M, ParamSchema::nonnegative("a", 0.5), ParamSchema::nonnegative("e", 0.3)],
        singular_loci: &["degenerate where Sigma*Delta = 0 or sin(theta) = 0"],
        signature: LORENTZIAN,
        family: Family::KerrNewmanRegularized,
    },
    CatalogEntry {
        name: "diag_semiregular",
        description: "-dt^2 + t^4 dx^2 + dy^2 + dz^2, degenerate and semi-regular at t = 0",
        coords: CARTESIAN,
        params: &[],
        singular_loci: &["t = 0 (degenerate)"],
        signature: LORENTZIAN,
        family: Family::DiagSemiregular,
    },
    CatalogEntry {
        name: "diag_nonregular",
        description: "-dt^2 + t dx^2 + dy^2 + dz^2, degenerate at t = 0 but not radical-stationary",
        coords: CARTESIAN,
        params: &[],
        singular_loci: &["t = 0 (degenerate)", "t < 0 (signature (0,2,2))"],
        signature: LORENTZIAN,
        family: Family::DiagNonregular,
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn entry(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn get_metric(name: &str, params: &[(&str, f64)]) -> Result<MetricSpec, CatalogError> {
    entry(name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?.build(params)
}

fn diagonal(coords: &[&str], params: Vec<(String, f64)>, diag: &[&str]) -> Result<MetricSpec, MetricError> {
    let n = diag.len();
    let mut components = vec![Expr::ZERO; n * n];
    for (i, src) in diag.iter().enumerate() {
        components[i * n + i] = parse_expression(src).expect("catalog expression parses");
    }
    MetricSpec::new(coords.iter().map(|s| s.to_string()).collect(), params, components)
}

impl CatalogEntry {
    /// Defaults overridden by `overrides`, validated against the schema.
    pub fn resolve_params(&self, overrides: &[(&str, f64)]) -> Result<Vec<(String, f64)>, CatalogError> {
        for (name, _) in overrides {
            if !self.params.iter().any(|p| p.name == *name) {
                return Err(CatalogError::UnknownParam { metric: self.name.into(), param: name.to_string() });
            }
        }
        self.params
            .iter()
            .map(|schema| {
                let value = overrides.iter().rev().find(|(n, _)| *n == schema.name).map_or(schema.default, |(_, v)| *v);
                if !schema.admits(value) {
                    return Err(CatalogError::OutOfRange { param: schema.name.into(), value, range: schema.range() });
                }
                Ok((schema.name.to_string(), value))
            })
            .collect()
    }

    pub fn build(&self, overrides: &[(&str, f64)]) -> Result<MetricSpec, CatalogError> {
        let params = self.resolve_params(overrides)?;
        let p = |name: &str| params.iter().find(|(n, _)| n == name).map_or(0.0, |(_, v)| *v);
        let spec = match self.family {
            Family::Minkowski => diagonal(self.coords, params, &["-1", "1", "1", "1"])?,
            Family::Sphere2 => diagonal(self.coords, params, &["1", "sin(theta)^2"])?,
            Family::Schwarzschild => diagonal(
                self.coords,
                params,
                &["-(1 - 2*m/r)", "1/(1 - 2*m/r)", "r^2", "r^2*sin(theta)^2"],
            )?,
            Family::ReissnerNordstrom => diagonal(
                self.coords,
                params,
                &["-(1 - 2*m/r + e^2/r^2)", "1/(1 - 2*m/r + e^2/r^2)", "r^2", "r^2*sin(theta)^2"],
            )?,
            Family::KerrNewman => kerr_newman(params)?,
            Family::KerrNewmanRegularized => kerr_newman_regularize(p("m"), p("a"), p("e")),
            Family::DiagSemiregular => diagonal(self.coords, params, &["-1", "t^4", "1", "1"])?,
            Family::DiagNonregular => diagonal(self.coords, params, &["-1", "t", "1", "1"])?,
        };
        Ok(spec)
    }

    /// Coordinate box of generic points away from every listed singular locus.
    pub fn sample_box(&self, overrides: &[(&str, f64)]) -> Result<Vec<(f64, f64)>, CatalogError> {
        let params = self.resolve_params(overrides)?;
        let p = |name: &str| params.iter().find(|(n, _)| n == name).map_or(0.0, |(_, v)| *v);
        let angles = [(0.3, 2.8), (0.0, std::f64::consts::TAU)];
        let outer = |rh: f64| [(-5.0, 5.0), (rh + 0.5, rh + 8.0), angles[0], angles[1]].to_vec();
        Ok(match self.family {
            Family::Minkowski => vec![(-5.0, 5.0); 4],
            Family::Sphere2 => angles.to_vec(),
            Family::Schwarzschild => outer(2.0 * p("m")),
            Family::ReissnerNordstrom => outer(outer_horizon(p("m"), p("e"), 0.0)),
            Family::KerrNewman | Family::KerrNewmanRegularized => outer(outer_horizon(p("m"), p("e"), p("a"))),
            Family::DiagSemiregular | Family::DiagNonregular => vec![(0.2, 2.0), (-5.0, 5.0), (-5.0, 5.0), (-5.0, 5.0)],
        })
    }
}

/// Largest root of `r² − 2mr + a² + e² = 0`, or 0 when there is none.
pub fn outer_horizon(m: f64, e: f64, a: f64) -> f64 {
    let disc = m * m - a * a - e * e;
    if disc >= 0.0 {
        m + disc.sqrt()
    } else {
        0.0
    }
}

fn kerr_newman(params: Vec<(String, f64)>) -> Result<MetricSpec, MetricError> {
    let sigma = "(r^2 + a^2*cos(theta)^2)";
    let delta = "(r^2 - 2*m*r + a^2 + e^2)";
    let s2 = "sin(theta)^2";
    let tt = format!("-({delta} - a^2*{s2})/{sigma}");
    let tphi = format!("-a*{s2}*(r^2 + a^2 - {delta})/{sigma}");
    let rr = format!("{sigma}/{delta}");
    let thth = sigma.to_string();
    let phph = format!("((r^2 + a^2)^2 - {delta}*a^2*{s2})*{s2}/{sigma}");
    let z = "0".to_string();
    let rows = [[&tt, &z, &z, &tphi], [&z, &rr, &z, &z], [&z, &z, &thth, &z], [&tphi, &z, &z, &phph]];
    let components = rows.iter().flatten().map(|s| parse_expression(s).expect("catalog expression parses")).collect();
    MetricSpec::new(SPACETIME.iter().map(|s| s.to_string()).collect(), params, components)
}
