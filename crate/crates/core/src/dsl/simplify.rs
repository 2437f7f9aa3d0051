//! Bottom-up algebraic cleanup: constant folding and the neutral/absorbing
//! element identities. The result evaluates equal to the input wherever the
//! input is defined; it may be defined at more points (e.g. `0*(1/r)`).

use super::eval::evaluate;
use super::expr::{BinOp, Expr};

pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var(_) | Expr::Param(_) => e.clone(),
        Expr::Neg(inner) => simplify_neg(simplify(inner)),
        Expr::Call(f, arg) => {
            let arg = simplify(arg);
            let node = Expr::call(*f, arg);
            fold(node)
        }
        Expr::Binary(op, l, r) => simplify_binary(*op, simplify(l), simplify(r)),
    }
}

/// Folds a node whose children are all constants, keeping it if the value is not finite.
fn fold(node: Expr) -> Expr {
    let all_const = match &node {
        Expr::Call(_, a) | Expr::Neg(a) => a.as_const().is_some(),
        Expr::Binary(_, l, r) => l.as_const().is_some() && r.as_const().is_some(),
        _ => false,
    };
    if all_const {
        if let Ok(v) = evaluate(&node, &[] as &[(&str, f64)]) {
            if v.is_finite() {
                return Expr::Const(v);
            }
        }
    }
    node
}

fn simplify_neg(inner: Expr) -> Expr {
    match inner {
        Expr::Const(v) => Expr::Const(if v == 0.0 { 0.0 } else { -v }),
        Expr::Neg(x) => *x,
        other => Expr::neg(other),
    }
}

fn simplify_binary(op: BinOp, l: Expr, r: Expr) -> Expr {
    if let (Some(_), Some(_)) = (l.as_const(), r.as_const()) {
        let folded = fold(Expr::binary(op, l, r));
        if folded.as_const().is_some() {
            return folded;
        }
        let Expr::Binary(_, l, r) = folded else { unreachable!() };
        return Expr::binary(op, *l, *r);
    }
    match op {
        BinOp::Add => {
            if l.is_zero() {
                r
            } else if r.is_zero() {
                l
            } else if let Expr::Neg(rn) = r {
                simplify_binary(BinOp::Sub, l, *rn)
            } else {
                l + r
            }
        }
        BinOp::Sub => {
            if r.is_zero() {
                l
            } else if l.is_zero() {
                simplify_neg(r)
            } else if l == r {
                Expr::ZERO
            } else if let Expr::Neg(rn) = r {
                simplify_binary(BinOp::Add, l, *rn)
            } else {
                l - r
            }
        }
        BinOp::Mul => {
            if l.is_zero() || r.is_zero() {
                Expr::ZERO
            } else if l.is_one() {
                r
            } else if r.is_one() {
                l
            } else if l.as_const() == Some(-1.0) {
                simplify_neg(r)
            } else if r.as_const() == Some(-1.0) {
                simplify_neg(l)
            } else {
                match (l, r) {
                    (Expr::Neg(a), Expr::Neg(b)) => simplify_binary(BinOp::Mul, *a, *b),
                    (Expr::Neg(a), b) => simplify_neg(simplify_binary(BinOp::Mul, *a, b)),
                    (a, Expr::Neg(b)) => simplify_neg(simplify_binary(BinOp::Mul, a, *b)),
                    // Constants gather on the left: c1*(c2*x) -> (c1*c2)*x, x*c -> c*x.
                    (Expr::Const(c1), Expr::Binary(BinOp::Mul, inner_l, inner_r))
                        if inner_l.as_const().is_some() =>
                    {
                        let c = c1 * inner_l.as_const().unwrap_or(1.0);
                        simplify_binary(BinOp::Mul, Expr::Const(c), *inner_r)
                    }
                    (a, Expr::Const(c)) => simplify_binary(BinOp::Mul, Expr::Const(c), a),
                    (a, b) => a * b,
                }
            }
        }
        BinOp::Div => {
            if r.is_one() {
                l
            } else if l.is_zero() {
                Expr::ZERO
            } else if l == r {
                Expr::ONE
            } else {
                match (l, r) {
                    (Expr::Neg(a), Expr::Neg(b)) => simplify_binary(BinOp::Div, *a, *b),
                    (Expr::Neg(a), b) => simplify_neg(simplify_binary(BinOp::Div, *a, b)),
                    (a, b) => a / b,
                }
            }
        }
        BinOp::Pow => {
            if r.is_zero() {
                Expr::ONE
            } else if r.is_one() {
                l
            } else if l.is_one() {
                Expr::ONE
            } else if l.is_zero() && r.as_const().is_some_and(|c| c > 0.0) {
                Expr::ZERO
            } else {
                l.pow(r)
            }
        }
    }
}
