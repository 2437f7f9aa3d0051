use super::{eval_at, GeometryError};
use crate::dsl::{differentiate, simplify, Expr, MetricSpec};
use crate::tensor::Point;

/// A vector field given by symbolic components in the chart basis.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField(Vec<Expr>);

impl VectorField {
    /// Unchecked; see [`VectorField::for_spec`] for validation.
    pub fn new(components: Vec<Expr>) -> Self {
        VectorField(components.iter().map(simplify).collect())
    }

    /// Binds the spec's parameter names and rejects components that mention
    /// anything other than coordinates and parameters.
    pub fn for_spec(spec: &MetricSpec, components: Vec<Expr>) -> Result<Self, GeometryError> {
        if components.len() != spec.dim() {
            return Err(GeometryError::FieldDimension { got: components.len(), want: spec.dim() });
        }
        let params: Vec<&str> = spec.params().iter().map(|(n, _)| n.as_str()).collect();
        let components: Vec<Expr> = components.into_iter().map(|e| e.bind_params(&params)).collect();
        for (index, e) in components.iter().enumerate() {
            if let Some(name) =
                e.free_names().into_iter().find(|n| spec.coord_index(n).is_none() && spec.param(n).is_none())
            {
                return Err(GeometryError::UndeclaredName { index, name: name.to_string() });
            }
        }
        Ok(VectorField::new(components))
    }

    /// The coordinate field ∂_a.
    pub fn coordinate(dim: usize, a: usize) -> Self {
        VectorField((0..dim).map(|i| if i == a { Expr::ONE } else { Expr::ZERO }).collect())
    }

    pub fn zero(dim: usize) -> Self {
        VectorField(vec![Expr::ZERO; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.0
    }

    pub fn component(&self, a: usize) -> &Expr {
        &self.0[a]
    }

    /// The field `f X`.
    pub fn scaled(&self, f: &Expr) -> Self {
        VectorField::new(self.0.iter().map(|c| f.clone() * c.clone()).collect())
    }

    pub fn sum(&self, other: &VectorField) -> Self {
        VectorField::new(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    /// The directional derivative `X(f) = X^a ∂_a f`.
    pub fn apply(&self, f: &Expr, coords: &[String]) -> Expr {
        let mut acc = Expr::ZERO;
        for (xa, name) in self.0.iter().zip(coords) {
            if xa.is_zero() {
                continue;
            }
            acc = acc + xa.clone() * differentiate(f, name);
        }
        simplify(&acc)
    }

    /// The Lie bracket `[X,Y]^c = X(Y^c) − Y(X^c)`.
    pub fn bracket(&self, other: &VectorField, coords: &[String]) -> Self {
        VectorField::new(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(xc, yc)| self.apply(yc, coords) - other.apply(xc, coords))
                .collect(),
        )
    }

    pub fn eval(&self, spec: &MetricSpec, p: &Point) -> Result<Vec<f64>, GeometryError> {
        self.0
            .iter()
            .enumerate()
            .map(|(a, e)| eval_at(spec, e, p, || format!("vector field component {a}")))
            .collect()
    }
}

impl std::ops::Add for &VectorField {
    type Output = VectorField;

    fn add(self, rhs: &VectorField) -> VectorField {
        self.sum(rhs)
    }
}

fn check_field(spec: &MetricSpec, x: &VectorField) -> Result<(), GeometryError> {
    if x.dim() != spec.dim() {
        return Err(GeometryError::FieldDimension { got: x.dim(), want: spec.dim() });
    }
    Ok(())
}

/// The function `⟨X,Y⟩ = g_ab X^a Y^b`.
pub fn metric_pairing(spec: &MetricSpec, x: &VectorField, y: &VectorField) -> Expr {
    let n = spec.dim();
    let mut acc = Expr::ZERO;
    for a in 0..n {
        for b in 0..n {
            let g = spec.component(a, b);
            if g.is_zero() || x.component(a).is_zero() || y.component(b).is_zero() {
                continue;
            }
            acc = acc + g.clone() * x.component(a).clone() * y.component(b).clone();
        }
    }
    simplify(&acc)
}

/// Symbolic Koszul form
/// `½(X⟨Y,Z⟩ + Y⟨Z,X⟩ − Z⟨X,Y⟩ − ⟨X,[Y,Z]⟩ + ⟨Y,[Z,X]⟩ + ⟨Z,[X,Y]⟩)`.
pub fn koszul_expr(spec: &MetricSpec, x: &VectorField, y: &VectorField, z: &VectorField) -> Expr {
    let coords = spec.coords();
    let pair = |u: &VectorField, v: &VectorField| metric_pairing(spec, u, v);
    let sum = x.apply(&pair(y, z), coords) + y.apply(&pair(z, x), coords) - z.apply(&pair(x, y), coords)
        - pair(x, &y.bracket(z, coords))
        + pair(y, &z.bracket(x, coords))
        + pair(z, &x.bracket(y, coords));
    simplify(&(Expr::num(0.5) * sum))
}

pub fn koszul_general(
    spec: &MetricSpec,
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    p: &Point,
) -> Result<f64, GeometryError> {
    for f in [x, y, z] {
        check_field(spec, f)?;
    }
    p.check_dim(spec)?;
    eval_at(spec, &koszul_expr(spec, x, y, z), p, || "Koszul form".to_string())
}

/// Components `(L_Y g)_ab = Y^c ∂_c g_ab + g_cb ∂_a Y^c + g_ac ∂_b Y^c`, row-major.
pub fn lie_derivative_metric(spec: &MetricSpec, y: &VectorField) -> Vec<Expr> {
    let n = spec.dim();
    let coords = spec.coords();
    let dy: Vec<Expr> = (0..n * n).map(|i| differentiate(y.component(i % n), &coords[i / n])).collect();
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = y.apply(spec.component(a, b), coords);
            for c in 0..n {
                acc = acc + spec.component(c, b).clone() * dy[a * n + c].clone();
                acc = acc + spec.component(a, c).clone() * dy[b * n + c].clone();
            }
            out.push(simplify(&acc));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_expression, parse_metric_file};
    use crate::geometry::christoffel_first;

    fn polar() -> MetricSpec {
        parse_metric_file("dim = 2\ncoords = r, phi\ng[0][0] = 1\ng[1][1] = r^2\n").unwrap()
    }

    fn field(spec: &MetricSpec, comps: &[&str]) -> VectorField {
        VectorField::for_spec(spec, comps.iter().map(|s| parse_expression(s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn coordinate_fields_give_christoffel_symbols() {
        let spec = polar();
        let g = christoffel_first(&spec);
        let p = Point::new([1.7, 0.3]);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let k = koszul_general(
                        &spec,
                        &VectorField::coordinate(2, a),
                        &VectorField::coordinate(2, b),
                        &VectorField::coordinate(2, c),
                        &p,
                    )
                    .unwrap();
                    assert_eq!(k, spec.eval(g.get(a, b, c), p.as_slice()).unwrap());
                }
            }
        }
    }

    #[test]
    fn zero_field_gives_zero() {
        let spec = polar();
        let z = VectorField::zero(2);
        let x = field(&spec, &["r*phi", "1"]);
        let p = Point::new([2.0, 1.0]);
        assert_eq!(koszul_general(&spec, &z, &z, &z, &p).unwrap(), 0.0);
        assert_eq!(koszul_general(&spec, &x, &z, &x, &p).unwrap(), 0.0);
    }

    #[test]
    fn bracket_of_coordinate_fields_and_rotation() {
        let coords = vec!["x".to_string(), "y".to_string()];
        let d0 = VectorField::coordinate(2, 0);
        let rot = VectorField::new(vec![-Expr::var("y"), Expr::var("x")]);
        // [∂_x, -y∂_x + x∂_y] = ∂_y
        let br = d0.bracket(&rot, &coords);
        assert_eq!(br.components(), &[Expr::ZERO, Expr::ONE]);
    }

    #[test]
    fn undeclared_names_rejected() {
        let spec = polar();
        let err = VectorField::for_spec(&spec, vec![parse_expression("q").unwrap(), Expr::ONE]).unwrap_err();
        assert!(matches!(err, GeometryError::UndeclaredName { index: 0, .. }));
        let err = VectorField::for_spec(&spec, vec![Expr::ONE]).unwrap_err();
        assert!(matches!(err, GeometryError::FieldDimension { got: 1, want: 2 }));
    }

    #[test]
    fn rotation_is_killing_for_the_plane() {
        let spec = parse_metric_file("dim = 2\ncoords = x, y\ng[0][0] = 1\ng[1][1] = 1\n").unwrap();
        let rot = field(&spec, &["-y", "x"]);
        assert!(lie_derivative_metric(&spec, &rot).iter().all(Expr::is_zero));
        let dilation = field(&spec, &["x", "y"]);
        let l = lie_derivative_metric(&spec, &dilation);
        assert_eq!(l, vec![Expr::num(2.0), Expr::ZERO, Expr::ZERO, Expr::num(2.0)]);
    }
}
