//! Geometry of metrics that may become degenerate, with the tools to check
//! it on concrete spacetimes.
//!
//! - [`dsl`]: symbolic metric components and the metric-file format
//! - [`tensor`]: pointwise linear algebra (signature, radical, co-inner product)
//! - [`geometry`]: Koszul form, Christoffel symbols of the first kind, curvature
//! - [`einstein`]: Ricci and Einstein tensors, Einstein density, densitized equation
//! - [`catalog`]: built-in metrics
//! - [`scfoliate`]: Schwarz–Christoffel strip maps and foliation figures

pub mod dsl;
pub mod tensor;
pub mod geometry;
pub mod einstein;
pub mod catalog;
pub mod scfoliate;
