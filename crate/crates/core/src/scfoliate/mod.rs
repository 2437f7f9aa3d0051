//! Schwarz–Christoffel maps from the strip `0 ≤ Im z ≤ 1` onto polygons, and
//! the foliations of Penrose–Carter diagrams by images of horizontal lines.

mod config;
mod foliation;
mod integrand;
mod map;
mod quad;
mod render;

pub use config::{
    listing_angles, preset, validate_config, Finding, Prevertex, StripConfig, DEFAULT_A, DEFAULT_B, DEFAULT_Z0,
    PRESETS,
};
pub use foliation::{foliation, Polyline, PolylineKind, PolylineSet, MIN_LEAVES, MIN_SAMPLES};
pub use integrand::sc_integrand;
pub use map::{
    interior_angles, polygon_vertices, sc_map, sc_map_via, PolygonVertex, Route, VertexImage, DELTA, END_TOL,
};
pub use quad::{integrate, QuadTol};
pub use render::{render, Format};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScError {
    #[error("integrand has a pole at prevertex {index} ({z})")]
    Pole { index: usize, z: Complex64 },
    #[error("point {0} is outside the closed strip")]
    OutsideStrip(Complex64),
    #[error("quadrature did not converge after {intervals} subdivisions (error estimate {error:e})")]
    NonConvergence { intervals: usize, error: f64 },
    #[error("invalid strip config: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidConfig(Vec<Finding>),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("{0}")]
    Constraint(String),
    #[error("non-finite value {value} at {z}")]
    NonFinite { z: Complex64, value: Complex64 },
}
