//! Pointwise linear algebra on an evaluated metric: signature, radical,
//! radical-annihilator membership, and the co-inner product on annihilator
//! covectors.
//!
//! Every rank decision uses a threshold relative to the largest eigenvalue
//! magnitude, `tol * max|λ|`, so the answers do not depend on the overall
//! scale of the metric.

use crate::dsl::{EvalError, MetricSpec};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

/// Default relative eigenvalue threshold for rank decisions.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("point has {got} coordinates, the chart has {want}")]
    PointDimension { got: usize, want: usize },
    #[error("component g[{a}][{b}]: {source}")]
    Component {
        a: usize,
        b: usize,
        #[source]
        source: EvalError,
    },
    #[error("covector {which} is not a radical annihilator (residual {residual:.3e})")]
    AnnihilatorViolation { which: &'static str, residual: f64 },
}

/// Coordinates of a point in the chart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        Point(coords.into())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn check_dim(&self, spec: &MetricSpec) -> Result<(), TensorError> {
        if self.dim() != spec.dim() {
            return Err(TensorError::PointDimension { got: self.dim(), want: spec.dim() });
        }
        Ok(())
    }
}

impl From<&[f64]> for Point {
    fn from(v: &[f64]) -> Self {
        Point(v.to_vec())
    }
}

/// Lower-index components in the coordinate cobasis.
pub type Covector = DVector<f64>;
/// Upper-index components in the coordinate basis.
pub type Vector = DVector<f64>;

/// The metric matrix `g_ab` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue(DMatrix<f64>);

impl MetricValue {
    /// Symmetrizes `m` as `(m + mᵀ)/2`.
    pub fn new(m: DMatrix<f64>) -> Self {
        assert!(m.is_square(), "metric matrix must be square");
        let sym = (&m + m.transpose()) * 0.5;
        MetricValue(sym)
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        MetricValue(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// Eigendecomposition plus the rank threshold `tol * max|λ|`.
    fn eigen(&self, tol: f64) -> (SymmetricEigen<f64, nalgebra::Dyn>, f64) {
        let eig = SymmetricEigen::new(self.0.clone());
        let max = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        (eig, tol * max)
    }
}

/// Entrywise evaluation of the metric at `p`.
pub fn eval_metric(spec: &MetricSpec, p: &Point) -> Result<MetricValue, TensorError> {
    p.check_dim(spec)?;
    let n = spec.dim();
    let mut m = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = spec
                .eval(spec.component(a, b), p.as_slice())
                .map_err(|source| TensorError::Component { a, b, source })?;
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    Ok(MetricValue::new(m))
}

/// Counts of degenerate, positive, and negative directions, in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub zero: usize,
    pub plus: usize,
    pub minus: usize,
}

impl Signature {
    pub fn new(zero: usize, plus: usize, minus: usize) -> Self {
        Signature { zero, plus, minus }
    }

    pub fn is_degenerate(&self) -> bool {
        self.zero > 0
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.zero, self.plus, self.minus)
    }
}

pub fn signature_of(g: &MetricValue, tol: f64) -> Signature {
    let (eig, thr) = g.eigen(tol);
    let mut s = Signature::new(0, 0, 0);
    for &l in eig.eigenvalues.iter() {
        if l.abs() <= thr {
            s.zero += 1;
        } else if l > 0.0 {
            s.plus += 1;
        } else {
            s.minus += 1;
        }
    }
    s
}

/// Orthonormal basis of the numerical null space of `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalBasis {
    pub vectors: Vec<Vector>,
    pub tol: f64,
}

impl RadicalBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Euclidean projector onto the radical.
    pub fn projector(&self, dim: usize) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(dim, dim);
        for v in &self.vectors {
            p += v * v.transpose();
        }
        p
    }
}

pub fn radical_basis(g: &MetricValue, tol: f64) -> RadicalBasis {
    let (eig, thr) = g.eigen(tol);
    let vectors = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() <= thr)
        .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
        .collect();
    RadicalBasis { vectors, tol }
}

/// Moore–Penrose inverse of the metric, realizing the co-inner product on
/// radical-annihilator covectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CoMetric {
    pub matrix: DMatrix<f64>,
    pub rank: usize,
    pub tol: f64,
}

impl CoMetric {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn cometric(g: &MetricValue, tol: f64) -> CoMetric {
    let (eig, thr) = g.eigen(tol);
    let n = g.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut rank = 0;
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l.abs() > thr {
            let v = eig.eigenvectors.column(i);
            m += (v * v.transpose()) / l;
            rank += 1;
        }
    }
    let matrix = (&m + m.transpose()) * 0.5;
    CoMetric { matrix, rank, tol }
}

/// Least-squares residual `|g·x − ω|` with `x = g⁺ω`.
pub fn annihilator_residual(omega: &Covector, g: &MetricValue, tol: f64) -> f64 {
    let gp = cometric(g, tol);
    let x = &gp.matrix * omega;
    (g.matrix() * x - omega).norm()
}

/// True iff `ω` lies in the column space of `g` (equivalently, vanishes on the radical).
pub fn is_radical_annihilator(omega: &Covector, g: &MetricValue, tol: f64) -> bool {
    annihilator_residual(omega, g, tol) <= tol * (1.0 + omega.norm())
}

/// Co-contraction `ωᵀ g⁺ τ`.
pub fn cocontract(omega: &Covector, tau: &Covector, gplus: &CoMetric) -> f64 {
    omega.dot(&(&gplus.matrix * tau))
}

/// [`cocontract`] after checking both arguments against `g`.
pub fn cocontract_checked(
    omega: &Covector,
    tau: &Covector,
    gplus: &CoMetric,
    g: &MetricValue,
) -> Result<f64, TensorError> {
    for (which, w) in [("first", omega), ("second", tau)] {
        let residual = annihilator_residual(w, g, gplus.tol);
        if residual > gplus.tol * (1.0 + w.norm()) {
            return Err(TensorError::AnnihilatorViolation { which, residual });
        }
    }
    Ok(cocontract(omega, tau, gplus))
}
