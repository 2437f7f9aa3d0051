//! Recursive-descent parser for the scalar expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-r^2`
//! is `-(r^2)`. There is no implicit multiplication. A minus sign directly
//! in front of a numeric literal (not raised to a power) is folded into a
//! negative constant.

use super::expr::{BinOp, Expr, Func};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at byte {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let v: f64 = text[start..i].parse().map_err(|_| ParseError {
                offset: start,
                expected: "a number".into(),
                found: format!("`{}`", &text[start..i]),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else {
            let tok = match c {
                b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => {
                    let ch = text[start..].chars().next().unwrap_or('?');
                    return Err(ParseError {
                        offset: start,
                        expected: "an operand or operator".into(),
                        found: format!("`{ch}`"),
                    });
                }
            };
            i += 1;
            out.push((start, tok));
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?.0;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?.0;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    /// Returns the parsed node and whether it is a bare numeric literal.
    fn unary(&mut self) -> Result<(Expr, bool), ParseError> {
        if let Tok::Op('-') = self.peek() {
            self.bump();
            let (inner, bare) = self.unary()?;
            return Ok(match inner {
                Expr::Const(v) if bare => (Expr::Const(-v), false),
                other => (Expr::neg(other), false),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<(Expr, bool), ParseError> {
        let (base, bare) = self.primary()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let (exp, _) = self.unary()?;
            return Ok((Expr::binary(BinOp::Pow, base, exp), false));
        }
        Ok((base, bare))
    }

    fn primary(&mut self) -> Result<(Expr, bool), ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok((Expr::Const(v), true))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Tok::LParen = self.peek() {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(ParseError {
                            offset: self.toks[self.pos - 1].0,
                            expected: "a known function (sin, cos, sinh, cosh, exp, log, sqrt, abs)".into(),
                            found: format!("`{name}`"),
                        });
                    };
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok((Expr::call(func, arg), false))
                } else {
                    Ok((Expr::Var(name), false))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok((e, false))
            }
            _ => Err(self.error("a number, name, function call or `(`")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if let Tok::RParen = self.peek() {
            self.bump();
            Ok(())
        } else {
            Err(self.error("`)`"))
        }
    }
}

/// Parses `text` into an expression. Every identifier becomes a coordinate
/// node; use [`Expr::bind_params`] or the metric-file reader to classify
/// parameter names.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Expr {
        Expr::var(n)
    }

    #[test]
    fn schwarzschild_lapse() {
        let e = parse_expression("1 - 2*m/r").unwrap();
        let want = Expr::num(1.0) - (Expr::num(2.0) * v("m")) / v("r");
        assert_eq!(e, want);
    }

    #[test]
    fn power_of_function() {
        let e = parse_expression("sin(theta)^2").unwrap();
        assert_eq!(e, Expr::call(Func::Sin, v("theta")).pow(Expr::num(2.0)));
    }

    #[test]
    fn no_implicit_multiplication() {
        let err = parse_expression("2m").unwrap_err();
        assert_eq!(err.offset, 1);
        assert!(err.expected.contains("operator"), "{err}");
    }

    #[test]
    fn power_is_right_associative_and_tighter_than_minus() {
        assert_eq!(
            parse_expression("a^b^c").unwrap(),
            v("a").pow(v("b").pow(v("c")))
        );
        assert_eq!(parse_expression("-r^2").unwrap(), -(v("r").pow(Expr::num(2.0))));
        assert_eq!(parse_expression("-2").unwrap(), Expr::num(-2.0));
        assert_eq!(parse_expression("-(2)").unwrap(), -Expr::num(2.0));
        assert_eq!(parse_expression("-a*b").unwrap(), (-v("a")) * v("b"));
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(parse_expression("1.5e-3").unwrap(), Expr::num(1.5e-3));
        assert_eq!(parse_expression(".25").unwrap(), Expr::num(0.25));
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse_expression("(r + 1").unwrap_err().offset, 6);
        assert_eq!(parse_expression("r + * 2").unwrap_err().offset, 4);
        assert_eq!(parse_expression("tan(r)").unwrap_err().offset, 0);
        assert_eq!(parse_expression("r $ 2").unwrap_err().offset, 2);
        assert_eq!(parse_expression("").unwrap_err().offset, 0);
    }

    #[test]
    fn display_round_trips_tricky_shapes() {
        for src in [
            "a - (b - c)",
            "a/(b*c)",
            "(a^b)^c",
            "(-2)^x",
            "--2",
            "-(2)",
            "a^-2^3",
            "-(a*b)",
            "a*-2",
            "a - -2",
            "sqrt(abs(x)) + sign(x)",
            "0.1 + 1e-20 + 1e300",
        ] {
            let e = parse_expression(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expression(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
