//! Koszul form, Christoffel symbols of the first kind, covariant derivatives
//! of radical-annihilator 1-forms, and the all-covariant Riemann tensor.
//!
//! Everything is computed in the coordinate basis of the chart. Derivatives
//! of the metric and of the Christoffel symbols are symbolic, so nothing is
//! differenced numerically across a degenerate locus.

mod curvature;
mod field;
mod semiregular;

pub use curvature::{
    check_radical_stationary, cov_derivative_oneform, lower_cov_derivative, riemann_at, CurvatureValue,
    OneFormDerivative, Stationarity,
};
pub use field::{koszul_expr, koszul_general, lie_derivative_metric, metric_pairing, VectorField};
pub use semiregular::{
    check_semiregular, geometric_path, DiagonalCriterion, ProductSeries, RatioSeries, SemiregularReport, Verdict,
    MIN_PATH_LEN,
};

use crate::dsl::{differentiate, simplify, EvalError, Expr, MetricSpec};
use crate::tensor::{eval_metric, MetricValue, Point, TensorError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("{what}: {source}")]
    Eval {
        what: String,
        #[source]
        source: EvalError,
    },
    #[error("not radical-stationary at this point: K(d{a}, d{b}, _) has radical component {residual:.3e}")]
    NotRadicalStationary { a: usize, b: usize, residual: f64 },
    #[error("vector field has {got} components, the chart has {want}")]
    FieldDimension { got: usize, want: usize },
    #[error("vector field component {index} uses undeclared name `{name}`")]
    UndeclaredName { index: usize, name: String },
    #[error("path has {len} points, at least {min} are needed")]
    PathTooShort { len: usize, min: usize },
    #[error("path point {index} is degenerate; path points must be strictly non-degenerate")]
    DegeneratePathPoint { index: usize },
}

pub(crate) fn eval_at(spec: &MetricSpec, e: &Expr, p: &Point, what: impl FnOnce() -> String) -> Result<f64, GeometryError> {
    spec.eval(e, p.as_slice()).map_err(|source| GeometryError::Eval { what: what(), source })
}

/// Γ_abc = ½(∂_a g_bc + ∂_b g_ca − ∂_c g_ab), the Koszul form on coordinate fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelFirst {
    dim: usize,
    symbols: Vec<Expr>,
}

impl ChristoffelFirst {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Expr {
        &self.symbols[(a * self.dim + b) * self.dim + c]
    }

    pub fn symbols(&self) -> &[Expr] {
        &self.symbols
    }

    /// All dim³ values at `p`, in `[a][b][c]` order.
    pub fn eval(&self, spec: &MetricSpec, p: &Point) -> Result<Vec<f64>, GeometryError> {
        p.check_dim(spec)?;
        let n = self.dim;
        let mut out = vec![0.0; n * n * n];
        for a in 0..n {
            for b in a..n {
                for c in 0..n {
                    let v = eval_at(spec, self.get(a, b, c), p, || format!("Christoffel symbol G[{a}][{b}][{c}]"))?;
                    out[(a * n + b) * n + c] = v;
                    out[(b * n + a) * n + c] = v;
                }
            }
        }
        Ok(out)
    }
}

pub fn christoffel_first(spec: &MetricSpec) -> ChristoffelFirst {
    let n = spec.dim();
    let coords = spec.coords();
    // dg[(c*n + a)*n + b] = ∂_c g_ab
    let mut dg = vec![Expr::ZERO; n * n * n];
    for c in 0..n {
        for a in 0..n {
            for b in a..n {
                let d = differentiate(spec.component(a, b), &coords[c]);
                dg[(c * n + b) * n + a] = d.clone();
                dg[(c * n + a) * n + b] = d;
            }
        }
    }
    let d = |c: usize, a: usize, b: usize| dg[(c * n + a) * n + b].clone();
    let mut symbols = vec![Expr::ZERO; n * n * n];
    for a in 0..n {
        for b in a..n {
            for c in 0..n {
                let g = simplify(&(Expr::num(0.5) * (d(a, b, c) + d(b, c, a) - d(c, a, b))));
                symbols[(b * n + a) * n + c] = g.clone();
                symbols[(a * n + b) * n + c] = g;
            }
        }
    }
    ChristoffelFirst { dim: n, symbols }
}

/// A metric together with its symbolic Christoffel symbols and their first
/// derivatives, built once and evaluated at many points.
#[derive(Debug, Clone)]
pub struct Geometry {
    spec: MetricSpec,
    christoffel: ChristoffelFirst,
    /// ∂_e Γ_abc at `[e][a][b][c]`.
    dchristoffel: Vec<Expr>,
}

impl Geometry {
    pub fn new(spec: MetricSpec) -> Self {
        let christoffel = christoffel_first(&spec);
        let n = spec.dim();
        let coords = spec.coords();
        let mut dchristoffel = vec![Expr::ZERO; n * n * n * n];
        for e in 0..n {
            for a in 0..n {
                for b in a..n {
                    for c in 0..n {
                        let d = differentiate(christoffel.get(a, b, c), &coords[e]);
                        dchristoffel[((e * n + b) * n + a) * n + c] = d.clone();
                        dchristoffel[((e * n + a) * n + b) * n + c] = d;
                    }
                }
            }
        }
        Geometry { spec, christoffel, dchristoffel }
    }

    pub fn spec(&self) -> &MetricSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn christoffel(&self) -> &ChristoffelFirst {
        &self.christoffel
    }

    pub fn metric_at(&self, p: &Point) -> Result<MetricValue, GeometryError> {
        Ok(eval_metric(&self.spec, p)?)
    }

    pub fn christoffel_at(&self, p: &Point) -> Result<Vec<f64>, GeometryError> {
        self.christoffel.eval(&self.spec, p)
    }

    /// ∂_e Γ_abc at `p`, in `[e][a][b][c]` order.
    pub fn dchristoffel_at(&self, p: &Point) -> Result<Vec<f64>, GeometryError> {
        p.check_dim(&self.spec)?;
        let n = self.dim();
        let mut out = vec![0.0; n * n * n * n];
        for e in 0..n {
            for a in 0..n {
                for b in a..n {
                    for c in 0..n {
                        let expr = &self.dchristoffel[((e * n + a) * n + b) * n + c];
                        let v = eval_at(&self.spec, expr, p, || {
                            format!("derivative d{e} of Christoffel symbol G[{a}][{b}][{c}]")
                        })?;
                        out[((e * n + a) * n + b) * n + c] = v;
                        out[((e * n + b) * n + a) * n + c] = v;
                    }
                }
            }
        }
        Ok(out)
    }
}
