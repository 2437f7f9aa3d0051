use super::expr::{BinOp, Expr, Func};
use super::simplify::simplify;

/// Exact partial derivative with respect to the coordinate `var`, simplified.
///
/// Parameters are constants. `d|u|` is `sign(u) du`, which is 0 where `u = 0`.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    simplify(&raw_derivative(e, var))
}

fn raw_derivative(e: &Expr, var: &str) -> Expr {
    if !e.depends_on(var) {
        return Expr::ZERO;
    }
    match e {
        Expr::Const(_) | Expr::Param(_) => Expr::ZERO,
        Expr::Var(n) => {
            if n == var {
                Expr::ONE
            } else {
                Expr::ZERO
            }
        }
        Expr::Neg(u) => -raw_derivative(u, var),
        Expr::Binary(op, u, v) => {
            let (u, v) = (u.as_ref(), v.as_ref());
            let du = || raw_derivative(u, var);
            let dv = || raw_derivative(v, var);
            match op {
                BinOp::Add => du() + dv(),
                BinOp::Sub => du() - dv(),
                BinOp::Mul => du() * v.clone() + u.clone() * dv(),
                BinOp::Div => (du() * v.clone() - u.clone() * dv()) / v.clone().pow(Expr::num(2.0)),
                BinOp::Pow => {
                    if !v.depends_on(var) {
                        // d(u^c) = c u^(c-1) du
                        let reduced = simplify(&(v.clone() - Expr::ONE));
                        v.clone() * u.clone().pow(reduced) * du()
                    } else if !u.depends_on(var) {
                        // d(c^v) = c^v log(c) dv
                        e.clone() * Expr::call(Func::Log, u.clone()) * dv()
                    } else {
                        e.clone()
                            * (dv() * Expr::call(Func::Log, u.clone()) + v.clone() * du() / u.clone())
                    }
                }
            }
        }
        Expr::Call(f, u) => {
            let u = u.as_ref().clone();
            let du = raw_derivative(&u, var);
            let outer = match f {
                Func::Sin => Expr::call(Func::Cos, u),
                Func::Cos => -Expr::call(Func::Sin, u),
                Func::Sinh => Expr::call(Func::Cosh, u),
                Func::Cosh => Expr::call(Func::Sinh, u),
                Func::Exp => Expr::call(Func::Exp, u),
                Func::Log => Expr::ONE / u,
                Func::Sqrt => Expr::ONE / (Expr::num(2.0) * Expr::call(Func::Sqrt, u)),
                Func::Abs => Expr::call(Func::Sign, u),
                Func::Sign => Expr::ZERO,
            };
            outer * du
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{evaluate, parse_expression};

    fn d(src: &str, var: &str) -> Expr {
        differentiate(&parse_expression(src).unwrap().bind_params(&["m"]), var)
    }

    #[test]
    fn power_rule() {
        assert_eq!(d("r^2", "r"), parse_expression("2*r").unwrap());
    }

    #[test]
    fn quotient_rule_value() {
        let de = d("1 - 2*m/r", "r");
        let v = evaluate(&de, &[("m", 1.5), ("r", 3.0)]).unwrap();
        assert!((v - 2.0 * 1.5 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn quartic_at_three() {
        let de = d("t^4", "t");
        assert_eq!(evaluate(&de, &[("t", 3.0)]).unwrap(), 108.0);
    }

    #[test]
    fn parameters_are_constants() {
        assert_eq!(d("m^2 + 3", "r"), Expr::ZERO);
        assert_eq!(d("m*r", "m"), Expr::ZERO);
    }

    #[test]
    fn abs_derivative_is_zero_at_zero() {
        let de = d("abs(x)", "x");
        assert_eq!(evaluate(&de, &[("x", 0.0)]).unwrap(), 0.0);
        assert_eq!(evaluate(&de, &[("x", -2.0)]).unwrap(), -1.0);
    }

    #[test]
    fn variable_exponent() {
        let de = d("x^x", "x");
        let v = evaluate(&de, &[("x", 2.0)]).unwrap();
        assert!((v - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
        let de = d("2^x", "x");
        assert!((evaluate(&de, &[("x", 1.0)]).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
    }
}
