use std::fmt;

/// Binary operators of the expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

/// Elementary functions that may be applied to a single argument.
///
/// `sign` is not accepted by the parser's public function list in metric
/// files any differently from the others; it exists so that the derivative
/// of `abs` stays inside the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
    Abs,
    Sign,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Sign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sign => "sign",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// A symbolic scalar expression in the coordinates and named parameters of a chart.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// A coordinate; the only kind of name that can be differentiated against.
    Var(String),
    /// A named real parameter held fixed by the enclosing metric.
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub const ZERO: Expr = Expr::Const(0.0);
    pub const ONE: Expr = Expr::Const(1.0);

    pub fn num(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn pow(self, exponent: Expr) -> Expr {
        Expr::binary(BinOp::Pow, self, exponent)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(v) if *v == 0.0)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(v) if *v == 1.0)
    }

    /// True if `name` occurs as a coordinate anywhere in the tree.
    pub fn depends_on(&self, name: &str) -> bool {
        match self {
            Expr::Const(_) | Expr::Param(_) => false,
            Expr::Var(v) => v == name,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on(name),
            Expr::Binary(_, l, r) => l.depends_on(name) || r.depends_on(name),
        }
    }

    /// Visits every node, parents before children.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Neg(e) | Expr::Call(_, e) => e.walk(f),
            Expr::Binary(_, l, r) => {
                l.walk(f);
                r.walk(f);
            }
            _ => {}
        }
    }

    /// All distinct coordinate and parameter names, in first-occurrence order.
    pub fn free_names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Var(n) | Expr::Param(n) = e {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
        });
        out
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Rewrites coordinate nodes whose names are in `params` into parameter nodes.
    pub fn bind_params(self, params: &[&str]) -> Expr {
        match self {
            Expr::Var(n) if params.contains(&n.as_str()) => Expr::Param(n),
            Expr::Neg(e) => Expr::neg(e.bind_params(params)),
            Expr::Call(f, e) => Expr::call(f, e.bind_params(params)),
            Expr::Binary(op, l, r) => Expr::binary(op, l.bind_params(params), r.bind_params(params)),
            other => other,
        }
    }

    /// Replaces every parameter node by its value.
    pub fn substitute_params(&self, lookup: &impl Fn(&str) -> Option<f64>) -> Expr {
        match self {
            Expr::Param(n) => lookup(n).map(Expr::Const).unwrap_or_else(|| self.clone()),
            Expr::Neg(e) => Expr::neg(e.substitute_params(lookup)),
            Expr::Call(f, e) => Expr::call(*f, e.substitute_params(lookup)),
            Expr::Binary(op, l, r) => {
                Expr::binary(*op, l.substitute_params(lookup), r.substitute_params(lookup))
            }
            other => other.clone(),
        }
    }

    // Precedence levels used by the printer: sums < products < unary minus < power < atoms.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(v) if v.is_sign_negative() => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Add, self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Sub, self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Mul, self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Div, self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `{}` on f64 is the shortest representation that parses back to the same bits.
    if v.is_sign_negative() {
        write!(f, "-{}", -v)
    } else {
        write!(f, "{}", v)
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({})", e)
    } else {
        write!(f, "{}", e)
    }
}

/// Prints with the minimum parentheses needed for the parser to rebuild the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write_const(f, *v),
            Expr::Var(n) | Expr::Param(n) => f.write_str(n),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                // A bare literal after '-' would be folded into a negative constant.
                let parens = inner.precedence() < 3 || matches!(**inner, Expr::Const(v) if !v.is_sign_negative());
                write_wrapped(f, inner, parens)
            }
            Expr::Call(func, arg) => write!(f, "{}({})", func.name(), arg),
            Expr::Binary(BinOp::Pow, base, exp) => {
                write_wrapped(f, base, base.precedence() <= 4)?;
                f.write_str("^")?;
                write_wrapped(f, exp, exp.precedence() < 3)
            }
            Expr::Binary(op, l, r) => {
                let p = self.precedence();
                write_wrapped(f, l, l.precedence() < p)?;
                match op {
                    BinOp::Add | BinOp::Sub => write!(f, " {} ", op.symbol())?,
                    _ => f.write_str(op.symbol())?,
                }
                write_wrapped(f, r, r.precedence() <= p)
            }
        }
    }
}
