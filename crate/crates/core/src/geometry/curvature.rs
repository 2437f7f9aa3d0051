use super::field::VectorField;
use super::{christoffel_first, eval_at, Geometry, GeometryError};
use crate::dsl::{Expr, MetricSpec};
use crate::tensor::{
    annihilator_residual, cocontract, cometric, eval_metric, signature_of, CoMetric, Covector, MetricValue, Point,
    TensorError,
};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Outcome of the radical-stationarity test at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stationarity {
    pub stationary: bool,
    pub degenerate: bool,
    /// Index pair whose covector `K(∂_a, ∂_b, _)` is farthest from the annihilator space.
    pub worst_pair: (usize, usize),
    pub worst_residual: f64,
}

/// The covariant Riemann tensor `R_abcd` at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureValue {
    pub dim: usize,
    pub components: Vec<f64>,
    pub point: Point,
    pub tol: f64,
    pub degenerate: bool,
}

impl CurvatureValue {
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.dim;
        self.components[((a * n + b) * n + c) * n + d]
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn max_over(&self, f: impl Fn(usize, usize, usize, usize) -> f64) -> f64 {
        let n = self.dim;
        let mut m = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        m = m.max(f(a, b, c, d).abs());
                    }
                }
            }
        }
        m
    }

    /// Largest violation of `R_abcd = −R_bacd` and of `R_abcd = −R_abdc`.
    pub fn antisymmetry_residuals(&self) -> (f64, f64) {
        (
            self.max_over(|a, b, c, d| self.get(a, b, c, d) + self.get(b, a, c, d)),
            self.max_over(|a, b, c, d| self.get(a, b, c, d) + self.get(a, b, d, c)),
        )
    }

    pub fn pair_symmetry_residual(&self) -> f64 {
        self.max_over(|a, b, c, d| self.get(a, b, c, d) - self.get(c, d, a, b))
    }

    pub fn bianchi_residual(&self) -> f64 {
        self.max_over(|a, b, c, d| self.get(a, b, c, d) + self.get(a, c, d, b) + self.get(a, d, b, c))
    }

    /// Entries with `|R_abcd| > threshold`, in index order.
    pub fn nonzero(&self, threshold: f64) -> Vec<([usize; 4], f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for (i, &v) in self.components.iter().enumerate() {
            if v.abs() > threshold {
                out.push(([i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n], v));
            }
        }
        out
    }
}

/// `∇_X ω` with the degeneracy flag at the evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct OneFormDerivative {
    pub value: Covector,
    /// Set when the metric is degenerate at the point; smoothness of the
    /// result is only guaranteed where the signature is locally constant.
    pub degenerate: bool,
}

fn rows_of(gam: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(n * n, n, gam)
}

impl Geometry {
    pub(crate) fn stationarity_with(&self, g: &MetricValue, gam: &[f64], tol: f64) -> Stationarity {
        let n = self.dim();
        let gp = cometric(g, tol);
        let mut worst = ((0, 0), 0.0f64, 0.0f64);
        let mut stationary = true;
        for a in 0..n {
            for b in a..n {
                let start = (a * n + b) * n;
                let omega = DVector::from_column_slice(&gam[start..start + n]);
                let r = (g.matrix() * (&gp.matrix * &omega) - &omega).norm();
                let limit = tol * (1.0 + omega.norm());
                if r > limit {
                    stationary = false;
                }
                if r / limit > worst.2 {
                    worst = ((a, b), r, r / limit);
                }
            }
        }
        Stationarity {
            stationary,
            degenerate: gp.rank < n,
            worst_pair: worst.0,
            worst_residual: worst.1,
        }
    }

    pub fn stationarity(&self, p: &Point, tol: f64) -> Result<Stationarity, GeometryError> {
        let g = self.metric_at(p)?;
        let gam = self.christoffel_at(p)?;
        Ok(self.stationarity_with(&g, &gam, tol))
    }

    /// Co-contractions `⟨⟨Γ_ab·, Γ_cd·⟩⟩` as an `n² × n²` matrix indexed by `(a*n+b, c*n+d)`.
    pub(crate) fn koszul_products(&self, gam: &[f64], gp: &CoMetric) -> DMatrix<f64> {
        let rows = rows_of(gam, self.dim());
        &rows * &gp.matrix * rows.transpose()
    }

    /// `R_abcd = ∂_aΓ_bcd − ∂_bΓ_acd + ⟨⟨Γ_ac·,Γ_bd·⟩⟩ − ⟨⟨Γ_bc·,Γ_ad·⟩⟩`.
    pub(crate) fn riemann_from(&self, dgam: &[f64], products: &DMatrix<f64>) -> Vec<f64> {
        let n = self.dim();
        let dg = |e: usize, a: usize, b: usize, c: usize| dgam[((e * n + a) * n + b) * n + c];
        let pr = |a: usize, b: usize, c: usize, d: usize| products[(a * n + b, c * n + d)];
        let mut out = vec![0.0; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        out[((a * n + b) * n + c) * n + d] =
                            dg(a, b, c, d) - dg(b, a, c, d) + pr(a, c, b, d) - pr(b, c, a, d);
                    }
                }
            }
        }
        out
    }

    /// Fails with [`GeometryError::NotRadicalStationary`] where the co-contraction is undefined.
    pub fn riemann_at(&self, p: &Point, tol: f64) -> Result<CurvatureValue, GeometryError> {
        let g = self.metric_at(p)?;
        let gam = self.christoffel_at(p)?;
        let st = self.stationarity_with(&g, &gam, tol);
        if !st.stationary {
            let (a, b) = st.worst_pair;
            return Err(GeometryError::NotRadicalStationary { a, b, residual: st.worst_residual });
        }
        let dgam = self.dchristoffel_at(p)?;
        let gp = cometric(&g, tol);
        let components = self.riemann_from(&dgam, &self.koszul_products(&gam, &gp));
        Ok(CurvatureValue { dim: self.dim(), components, point: p.clone(), tol, degenerate: st.degenerate })
    }

    pub fn lower_cov_derivative(&self, x: &VectorField, y: &VectorField, p: &Point) -> Result<Covector, GeometryError> {
        let n = self.dim();
        let spec = self.spec();
        let g = self.metric_at(p)?;
        let gam = self.christoffel_at(p)?;
        let xv = x.eval(spec, p)?;
        let yv = y.eval(spec, p)?;
        let mut xy = DVector::zeros(n);
        for b in 0..n {
            xy[b] = eval_at(spec, &x.apply(y.component(b), spec.coords()), p, || format!("X(Y^{b})"))?;
        }
        let mut out = g.matrix() * xy;
        for a in 0..n {
            for b in 0..n {
                let w = xv[a] * yv[b];
                if w != 0.0 {
                    for c in 0..n {
                        out[c] += w * gam[(a * n + b) * n + c];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn cov_derivative_oneform(
        &self,
        x: &VectorField,
        omega: &[Expr],
        p: &Point,
        tol: f64,
    ) -> Result<OneFormDerivative, GeometryError> {
        let n = self.dim();
        let spec = self.spec();
        if omega.len() != n || x.dim() != n {
            return Err(GeometryError::FieldDimension { got: omega.len().min(x.dim()), want: n });
        }
        let params: Vec<&str> = spec.params().iter().map(|(k, _)| k.as_str()).collect();
        let omega: Vec<Expr> = omega.iter().map(|e| e.clone().bind_params(&params)).collect();
        let g = self.metric_at(p)?;
        let gam = self.christoffel_at(p)?;
        let mut w = DVector::zeros(n);
        for (b, e) in omega.iter().enumerate() {
            w[b] = eval_at(spec, e, p, || format!("1-form component {b}"))?;
        }
        let residual = annihilator_residual(&w, &g, tol);
        if residual > tol * (1.0 + w.norm()) {
            return Err(TensorError::AnnihilatorViolation { which: "argument", residual }.into());
        }
        let st = self.stationarity_with(&g, &gam, tol);
        if !st.stationary {
            let (a, b) = st.worst_pair;
            return Err(GeometryError::NotRadicalStationary { a, b, residual: st.worst_residual });
        }
        let gp = cometric(&g, tol);
        let xv = x.eval(spec, p)?;
        let mut value = DVector::zeros(n);
        for b in 0..n {
            let xw = eval_at(spec, &x.apply(&omega[b], spec.coords()), p, || format!("X(w_{b})"))?;
            // ∇♭_X ∂_b = X^a Γ_ab·
            let mut lowered = DVector::zeros(n);
            for a in 0..n {
                for c in 0..n {
                    lowered[c] += xv[a] * gam[(a * n + b) * n + c];
                }
            }
            value[b] = xw - cocontract(&lowered, &w, &gp);
        }
        let degenerate = signature_of(&g, tol).is_degenerate();
        Ok(OneFormDerivative { value, degenerate })
    }
}

pub fn check_radical_stationary(spec: &MetricSpec, p: &Point, tol: f64) -> Result<bool, GeometryError> {
    let g = eval_metric(spec, p)?;
    let gam = christoffel_first(spec).eval(spec, p)?;
    let n = spec.dim();
    let gp = cometric(&g, tol);
    Ok((0..n).all(|a| {
        (a..n).all(|b| {
            let start = (a * n + b) * n;
            let omega = DVector::from_column_slice(&gam[start..start + n]);
            (g.matrix() * (&gp.matrix * &omega) - &omega).norm() <= tol * (1.0 + omega.norm())
        })
    }))
}

/// The covector `Z ↦ K(X,Y,Z)` at `p`.
pub fn lower_cov_derivative(
    spec: &MetricSpec,
    x: &VectorField,
    y: &VectorField,
    p: &Point,
) -> Result<Covector, GeometryError> {
    Geometry::new(spec.clone()).lower_cov_derivative(x, y, p)
}

pub fn cov_derivative_oneform(
    spec: &MetricSpec,
    x: &VectorField,
    omega: &[Expr],
    p: &Point,
    tol: f64,
) -> Result<OneFormDerivative, GeometryError> {
    Geometry::new(spec.clone()).cov_derivative_oneform(x, omega, p, tol)
}

pub fn riemann_at(spec: &MetricSpec, p: &Point, tol: f64) -> Result<CurvatureValue, GeometryError> {
    Geometry::new(spec.clone()).riemann_at(p, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_expression, parse_metric_file};
    use crate::tensor::DEFAULT_TOL;

    fn minkowski() -> MetricSpec {
        parse_metric_file("dim = 4\ncoords = t, x, y, z\ng[0][0] = -1\ng[1][1] = 1\ng[2][2] = 1\ng[3][3] = 1\n")
            .unwrap()
    }

    fn schwarzschild() -> MetricSpec {
        parse_metric_file(
            "dim = 4\ncoords = t, r, theta, phi\nparam m = 1\n\
             g[0][0] = -(1 - 2*m/r)\ng[1][1] = 1/(1 - 2*m/r)\ng[2][2] = r^2\ng[3][3] = r^2*sin(theta)^2\n",
        )
        .unwrap()
    }

    fn diag2(gxx: &str) -> MetricSpec {
        parse_metric_file(&format!("dim = 2\ncoords = t, x\ng[0][0] = -1\ng[1][1] = {gxx}\n")).unwrap()
    }

    fn exprs(src: &[&str]) -> Vec<Expr> {
        src.iter().map(|s| parse_expression(s).unwrap()).collect()
    }

    #[test]
    fn lower_derivative_examples() {
        let spec = minkowski();
        let x = VectorField::for_spec(&spec, exprs(&["x*y", "t", "1", "z^2"])).unwrap();
        let w = lower_cov_derivative(&spec, &x, &x, &Point::new([0.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(w, DVector::zeros(4));

        let spec = schwarzschild();
        let dt = VectorField::coordinate(4, 0);
        let w = lower_cov_derivative(&spec, &dt, &dt, &Point::new([0.0, 2.5, 1.0, 0.0])).unwrap();
        assert!((w - DVector::from_column_slice(&[0.0, 0.16, 0.0, 0.0])).norm() < 1e-15);

        let spec = diag2("t^4");
        let dx = VectorField::coordinate(2, 1);
        let w = lower_cov_derivative(&spec, &dx, &dx, &Point::new([1.0, 0.0])).unwrap();
        assert_eq!(w, DVector::from_column_slice(&[-2.0, 0.0]));
    }

    #[test]
    fn lower_derivative_agrees_with_koszul_form() {
        let spec = schwarzschild();
        let x = VectorField::for_spec(&spec, exprs(&["r", "t*theta", "1", "m*phi"])).unwrap();
        let y = VectorField::for_spec(&spec, exprs(&["theta^2", "1", "r*t", "phi - t"])).unwrap();
        let p = Point::new([0.7, 4.1, 0.9, 1.3]);
        let w = lower_cov_derivative(&spec, &x, &y, &p).unwrap();
        for c in 0..4 {
            let k = super::super::koszul_general(&spec, &x, &y, &VectorField::coordinate(4, c), &p).unwrap();
            assert!((w[c] - k).abs() < 1e-12 * k.abs().max(1.0), "{c}: {} vs {k}", w[c]);
        }
    }

    #[test]
    fn radical_stationarity_examples() {
        let tol = DEFAULT_TOL;
        assert!(check_radical_stationary(&schwarzschild(), &Point::new([0.0, 3.0, 1.0, 0.0]), tol).unwrap());
        assert!(check_radical_stationary(&diag2("t^4"), &Point::new([0.0, 0.0]), tol).unwrap());
        assert!(!check_radical_stationary(&diag2("t"), &Point::new([0.0, 0.0]), tol).unwrap());
        let spec = parse_metric_file("dim = 2\ncoords = x, t\ng[0][0] = x\ng[1][1] = 1\n").unwrap();
        assert!(!check_radical_stationary(&spec, &Point::new([0.0, 0.0]), tol).unwrap());
    }

    #[test]
    fn quartic_curvature() {
        let spec = diag2("t^4");
        for t in [0.0, 0.25, 1.0, -2.0] {
            let r = riemann_at(&spec, &Point::new([t, 0.3]), DEFAULT_TOL).unwrap();
            assert!((r.get(0, 1, 0, 1) - 2.0 * t * t).abs() < 1e-12, "t={t}: {}", r.get(0, 1, 0, 1));
            assert!((r.get(1, 0, 1, 0) - 2.0 * t * t).abs() < 1e-12);
            assert!((r.get(0, 1, 1, 0) + 2.0 * t * t).abs() < 1e-12);
            assert_eq!(r.get(0, 0, 1, 1), 0.0);
            assert_eq!(r.degenerate, t == 0.0);
        }
    }

    #[test]
    fn flat_and_nonstationary() {
        let r = riemann_at(&minkowski(), &Point::new([1.0, 2.0, 3.0, 4.0]), DEFAULT_TOL).unwrap();
        assert_eq!(r.max_abs(), 0.0);
        let err = riemann_at(&diag2("t"), &Point::new([0.0, 0.0]), DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, GeometryError::NotRadicalStationary { a: 0, b: 1, .. }), "{err}");
    }

    #[test]
    fn unit_sphere_curvature() {
        let spec = parse_metric_file("dim = 2\ncoords = theta, phi\ng[0][0] = 1\ng[1][1] = sin(theta)^2\n").unwrap();
        let th: f64 = 0.8;
        let r = riemann_at(&spec, &Point::new([th, 0.1]), DEFAULT_TOL).unwrap();
        assert!((r.get(0, 1, 0, 1) + th.sin().powi(2)).abs() < 1e-14);
        assert!((r.get(0, 1, 1, 0) - th.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn oneform_derivative() {
        let spec = minkowski();
        let x = VectorField::for_spec(&spec, exprs(&["x", "1", "t", "0"])).unwrap();
        let p = Point::new([0.5, 1.0, 2.0, 3.0]);
        let d = cov_derivative_oneform(&spec, &x, &exprs(&["1", "2", "3", "4"]), &p, DEFAULT_TOL).unwrap();
        assert_eq!(d.value, DVector::zeros(4));
        assert!(!d.degenerate);
        let d = cov_derivative_oneform(&spec, &x, &[Expr::ZERO, Expr::ZERO, Expr::ZERO, Expr::ZERO], &p, DEFAULT_TOL)
            .unwrap();
        assert_eq!(d.value, DVector::zeros(4));

        // ω = dt on diag(-1, t^4) at t=0 is an annihilator; ∂_x ω picks up -⟨⟨Γ_x·, dt⟩⟩ = 0.
        let spec = diag2("t^4");
        let d = cov_derivative_oneform(
            &spec,
            &VectorField::coordinate(2, 1),
            &exprs(&["1", "0"]),
            &Point::new([0.0, 0.0]),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(d.degenerate);
        assert_eq!(d.value, DVector::zeros(2));

        let err = cov_derivative_oneform(
            &spec,
            &VectorField::coordinate(2, 1),
            &exprs(&["0", "1"]),
            &Point::new([0.0, 0.0]),
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, GeometryError::Tensor(TensorError::AnnihilatorViolation { .. })));
    }
}
