//! Shared helpers for integration tests: an independent classical curvature
//! oracle, random points and polynomial fields, and the Koszul identities.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::Rng;
use semireg_core::catalog;
use semireg_core::dsl::{differentiate, Expr, MetricSpec};
use semireg_core::geometry::{koszul_expr, lie_derivative_metric, metric_pairing, VectorField};
use semireg_core::tensor::Point;

/// Classical all-lower Riemann tensor via second-kind Christoffel symbols and
/// the ordinary inverse metric, in the slot order `R_abcd = g(R(∂_a,∂_b)∂_c, ∂_d)`.
pub struct Classical {
    pub n: usize,
    pub g: DMatrix<f64>,
    pub ginv: DMatrix<f64>,
    /// `R^a_bcd` in the convention `R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb`.
    pub mixed: Vec<f64>,
}

impl Classical {
    pub fn new(spec: &MetricSpec, p: &Point) -> Self {
        let n = spec.dim();
        let x = p.as_slice();
        let ev = |e: &Expr| spec.eval(e, x).unwrap();
        let coords = spec.coords();
        let g = DMatrix::from_fn(n, n, |a, b| ev(spec.component(a, b)));
        let ginv = g.clone().try_inverse().expect("non-degenerate point");
        // dg[c][a][b] = ∂_c g_ab, ddg[c][d][a][b] = ∂_c ∂_d g_ab
        let mut dg = vec![0.0; n * n * n];
        let mut ddg = vec![0.0; n * n * n * n];
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let d1 = differentiate(spec.component(a, b), &coords[c]);
                    dg[(c * n + a) * n + b] = ev(&d1);
                    for d in 0..n {
                        ddg[((c * n + d) * n + a) * n + b] = ev(&differentiate(&d1, &coords[d]));
                    }
                }
            }
        }
        let dg_at = |c: usize, a: usize, b: usize| dg[(c * n + a) * n + b];
        let dginv: Vec<DMatrix<f64>> = (0..n)
            .map(|c| {
                let dgc = DMatrix::from_fn(n, n, |a, b| dg_at(c, a, b));
                -(&ginv * dgc * &ginv)
            })
            .collect();
        // gam[a][b][c] = Γ^a_bc, dgam[e][a][b][c] = ∂_e Γ^a_bc
        let mut gam = vec![0.0; n * n * n];
        let mut dgam = vec![0.0; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut v = 0.0;
                    for d in 0..n {
                        let low = dg_at(b, d, c) + dg_at(c, d, b) - dg_at(d, b, c);
                        v += 0.5 * ginv[(a, d)] * low;
                        for e in 0..n {
                            let dlow = ddg[((e * n + b) * n + d) * n + c] + ddg[((e * n + c) * n + d) * n + b]
                                - ddg[((e * n + d) * n + b) * n + c];
                            dgam[((e * n + a) * n + b) * n + c] +=
                                0.5 * (dginv[e][(a, d)] * low + ginv[(a, d)] * dlow);
                        }
                    }
                    gam[(a * n + b) * n + c] = v;
                }
            }
        }
        let gm = |a: usize, b: usize, c: usize| gam[(a * n + b) * n + c];
        let dgm = |e: usize, a: usize, b: usize, c: usize| dgam[((e * n + a) * n + b) * n + c];
        let mut mixed = vec![0.0; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut v = dgm(c, a, d, b) - dgm(d, a, c, b);
                        for e in 0..n {
                            v += gm(a, c, e) * gm(e, d, b) - gm(a, d, e) * gm(e, c, b);
                        }
                        mixed[((a * n + b) * n + c) * n + d] = v;
                    }
                }
            }
        }
        Classical { n, g, ginv, mixed }
    }

    pub fn mixed(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n;
        self.mixed[((a * n + b) * n + c) * n + d]
    }

    /// `R_abcd = g_de R^e_cab`.
    pub fn lower(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        (0..self.n).map(|e| self.g[(d, e)] * self.mixed(e, c, a, b)).sum()
    }

    /// `Ric_bd = R^a_bad`.
    pub fn ricci(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |b, d| (0..self.n).map(|a| self.mixed(a, b, a, d)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ginv.component_mul(&self.ricci()).sum()
    }

    pub fn einstein(&self) -> DMatrix<f64> {
        self.ricci() - &self.g * (0.5 * self.scalar())
    }

    pub fn einstein_upper(&self) -> DMatrix<f64> {
        &self.ginv * self.einstein() * &self.ginv
    }
}

pub fn random_point(rng: &mut StdRng, bx: &[(f64, f64)]) -> Point {
    Point::new(bx.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect::<Vec<_>>())
}

pub fn catalog_point(rng: &mut StdRng, name: &str, params: &[(&str, f64)]) -> Point {
    random_point(rng, &catalog::entry(name).unwrap().sample_box(params).unwrap())
}

/// A random polynomial of degree at most 2 in the coordinates, with a few terms.
pub fn random_poly(rng: &mut StdRng, coords: &[String]) -> Expr {
    let coef = |rng: &mut StdRng| Expr::num((rng.gen_range(-2.0f64..2.0) * 4.0).round() / 4.0);
    let mut e = coef(rng);
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..coords.len());
        let mut term = coef(rng) * Expr::var(coords[i].as_str());
        if rng.gen_bool(0.5) {
            let j = rng.gen_range(0..coords.len());
            term = term * Expr::var(coords[j].as_str());
        }
        e = e + term;
    }
    e
}

pub fn random_field(rng: &mut StdRng, spec: &MetricSpec) -> VectorField {
    VectorField::new((0..spec.dim()).map(|_| random_poly(rng, spec.coords())).collect())
}

fn close(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Checks the eight Koszul identities at `p` for one random draw of `X, Y, Z, f`.
/// Returns the first failing identity number with both sides.
pub fn koszul_identities(spec: &MetricSpec, rng: &mut StdRng, p: &Point, tol: f64) -> Result<(), (u8, f64, f64)> {
    let coords = spec.coords();
    let x = random_field(rng, spec);
    let y = random_field(rng, spec);
    let z = random_field(rng, spec);
    let x2 = random_field(rng, spec);
    let f = random_poly(rng, coords);
    let c = rng.gen_range(-3.0..3.0);
    let ev = |e: &Expr| spec.eval(e, p.as_slice()).unwrap();
    let k = |a: &VectorField, b: &VectorField, c: &VectorField| ev(&koszul_expr(spec, a, b, c));
    let pair = |a: &VectorField, b: &VectorField| metric_pairing(spec, a, b);
    let fv = ev(&f);
    let kxyz = k(&x, &y, &z);
    let check = |id: u8, lhs: f64, rhs: f64| if close(lhs, rhs, tol) { Ok(()) } else { Err((id, lhs, rhs)) };

    // 1. additive in each slot and R-linear
    check(1, k(&(&x + &x2), &y, &z), kxyz + k(&x2, &y, &z))?;
    check(1, k(&x, &(&y + &x2), &z), kxyz + k(&x, &x2, &z))?;
    check(1, k(&x, &y, &(&z + &x2)), kxyz + k(&x, &y, &x2))?;
    let cn = Expr::num(c);
    check(1, k(&x.scaled(&cn), &y, &z), c * kxyz)?;
    check(1, k(&x, &y.scaled(&cn), &z), c * kxyz)?;
    check(1, k(&x, &y, &z.scaled(&cn)), c * kxyz)?;
    // 2.
    check(2, k(&x.scaled(&f), &y, &z), fv * kxyz)?;
    // 3.
    check(3, k(&x, &y.scaled(&f), &z), fv * kxyz + ev(&x.apply(&f, coords)) * ev(&pair(&y, &z)))?;
    // 4.
    check(4, k(&x, &y, &z.scaled(&f)), fv * kxyz)?;
    // 5.
    check(5, kxyz + k(&x, &z, &y), ev(&x.apply(&pair(&y, &z), coords)))?;
    // 6.
    check(6, kxyz - k(&y, &x, &z), ev(&pair(&x.bracket(&y, coords), &z)))?;
    // 7.
    let lie = lie_derivative_metric(spec, &y);
    let n = spec.dim();
    let zv: Vec<f64> = z.components().iter().map(&ev).collect();
    let xv: Vec<f64> = x.components().iter().map(&ev).collect();
    let mut lyg = 0.0;
    for a in 0..n {
        for b in 0..n {
            lyg += ev(&lie[a * n + b]) * zv[a] * xv[b];
        }
    }
    check(7, kxyz + k(&z, &y, &x), lyg)?;
    // 8.
    check(8, kxyz + k(&y, &z, &x), ev(&y.apply(&pair(&z, &x), coords)) + ev(&pair(&x.bracket(&y, coords), &z)))?;
    Ok(())
}
