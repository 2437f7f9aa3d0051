use super::expr::{BinOp, Expr, Func};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("division by zero in `{expr}`")]
    DivisionByZero { expr: String },
    #[error("logarithm of non-positive value {value} in `{expr}`")]
    LogDomain { expr: String, value: f64 },
    #[error("zero raised to negative power in `{expr}`")]
    ZeroToNegative { expr: String },
    #[error("undefined value in `{expr}`")]
    Undefined { expr: String },
}

/// Name lookup for evaluation.
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<f64>;
}

impl Bindings for HashMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for BTreeMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> Bindings for [(&str, f64); N] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.as_slice().lookup(name)
    }
}

impl<B: Bindings + ?Sized> Bindings for &B {
    fn lookup(&self, name: &str) -> Option<f64> {
        (**self).lookup(name)
    }
}

/// Evaluates `e` in IEEE double precision.
pub fn evaluate(e: &Expr, env: &(impl Bindings + ?Sized)) -> Result<f64, EvalError> {
    match e {
        Expr::Const(v) => Ok(*v),
        Expr::Var(n) | Expr::Param(n) => env.lookup(n).ok_or_else(|| EvalError::UnboundName(n.clone())),
        Expr::Neg(inner) => Ok(-evaluate(inner, env)?),
        Expr::Binary(op, l, r) => {
            let a = evaluate(l, env)?;
            let b = evaluate(r, env)?;
            let v = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError::DivisionByZero { expr: e.to_string() });
                    }
                    a / b
                }
                BinOp::Pow => {
                    if a == 0.0 && b < 0.0 {
                        return Err(EvalError::ZeroToNegative { expr: e.to_string() });
                    }
                    if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
                        a.powi(b as i32)
                    } else {
                        a.powf(b)
                    }
                }
            };
            check(v, e)
        }
        Expr::Call(f, arg) => {
            let x = evaluate(arg, env)?;
            let v = match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(EvalError::LogDomain { expr: e.to_string(), value: x });
                    }
                    x.ln()
                }
                Func::Sqrt => x.sqrt(),
                Func::Abs => x.abs(),
                Func::Sign => {
                    if x == 0.0 {
                        0.0
                    } else {
                        x.signum()
                    }
                }
            };
            check(v, e)
        }
    }
}

fn check(v: f64, e: &Expr) -> Result<f64, EvalError> {
    if v.is_nan() {
        Err(EvalError::Undefined { expr: e.to_string() })
    } else {
        Ok(v)
    }
}
