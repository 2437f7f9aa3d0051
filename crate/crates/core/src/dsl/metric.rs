use super::eval::{evaluate, Bindings, EvalError};
use super::expr::Expr;
use super::parse::{parse_expression, ParseError};
use super::simplify::simplify;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("line {line}: {source}")]
    Syntax {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("components g[{a}][{b}] and g[{b}][{a}] differ: `{ab}` vs `{ba}`")]
    Asymmetric { a: usize, b: usize, ab: String, ba: String },
    #[error("undeclared name `{name}` in g[{a}][{b}]")]
    Undeclared { name: String, a: usize, b: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("name `{0}` declared more than once")]
    DuplicateName(String),
}

/// A chart, its parameter bindings, and the symmetric matrix of metric components.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    coords: Vec<String>,
    params: Vec<(String, f64)>,
    components: Vec<Expr>,
}

impl MetricSpec {
    /// Builds and validates a spec. `components` is row-major, `dim*dim` long.
    ///
    /// Identifiers that name a declared parameter are re-tagged as parameter
    /// nodes, so expressions straight from [`parse_expression`] can be passed in.
    pub fn new(
        coords: Vec<String>,
        params: Vec<(String, f64)>,
        components: Vec<Expr>,
    ) -> Result<Self, MetricError> {
        let dim = coords.len();
        if dim == 0 {
            return Err(MetricError::Dimension("at least one coordinate is required".into()));
        }
        if components.len() != dim * dim {
            return Err(MetricError::Dimension(format!(
                "{} components given for dimension {dim}",
                components.len()
            )));
        }
        let mut seen: Vec<&str> = Vec::new();
        for name in coords.iter().chain(params.iter().map(|(n, _)| n)) {
            if seen.contains(&name.as_str()) {
                return Err(MetricError::DuplicateName(name.clone()));
            }
            seen.push(name);
        }
        let param_names: Vec<&str> = params.iter().map(|(n, _)| n.as_str()).collect();
        let components: Vec<Expr> = components
            .into_iter()
            .map(|e| simplify(&e.bind_params(&param_names)))
            .collect();
        for a in 0..dim {
            for b in 0..dim {
                let e = &components[a * dim + b];
                for name in e.free_names() {
                    if !seen.contains(&name) {
                        return Err(MetricError::Undeclared { name: name.to_string(), a, b });
                    }
                }
                if b > a && components[a * dim + b] != components[b * dim + a] {
                    return Err(MetricError::Asymmetric {
                        a,
                        b,
                        ab: components[a * dim + b].to_string(),
                        ba: components[b * dim + a].to_string(),
                    });
                }
            }
        }
        Ok(MetricSpec { coords, params, components })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn component(&self, a: usize, b: usize) -> &Expr {
        &self.components[a * self.dim() + b]
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// Bindings for the coordinates at `point` plus this spec's parameters.
    pub fn env<'a>(&'a self, point: &'a [f64]) -> PointEnv<'a> {
        PointEnv { spec: self, point }
    }

    /// Evaluates one expression over this chart at `point`.
    pub fn eval(&self, e: &Expr, point: &[f64]) -> Result<f64, EvalError> {
        evaluate(e, &self.env(point))
    }

    /// True if no off-diagonal component is structurally nonzero.
    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| a == b || self.component(a, b).is_zero()))
    }

    /// Serializes in the metric-file format; re-reading yields an equal spec.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim = {}", self.dim());
        let _ = writeln!(out, "coords = {}", self.coords.join(", "));
        for (n, v) in &self.params {
            let _ = writeln!(out, "param {n} = {v}");
        }
        for a in 0..self.dim() {
            for b in a..self.dim() {
                let e = self.component(a, b);
                if !e.is_zero() {
                    let _ = writeln!(out, "g[{a}][{b}] = {e}");
                }
            }
        }
        out
    }
}

pub struct PointEnv<'a> {
    spec: &'a MetricSpec,
    point: &'a [f64],
}

impl Bindings for PointEnv<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        match self.spec.coord_index(name) {
            Some(i) => self.point.get(i).copied(),
            None => self.spec.param(name),
        }
    }
}

fn malformed(line: usize, message: impl Into<String>) -> MetricError {
    MetricError::Malformed { line, message: message.into() }
}

fn parse_index(s: &str, line: usize) -> Result<(usize, usize), MetricError> {
    // Accepts `g[a][b]` with optional whitespace.
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix("g[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| malformed(line, format!("expected `g[a][b]`, found `{s}`")))?;
    let (a, b) = inner
        .split_once("][")
        .ok_or_else(|| malformed(line, format!("expected `g[a][b]`, found `{s}`")))?;
    let a = a.parse().map_err(|_| malformed(line, format!("bad index `{a}`")))?;
    let b = b.parse().map_err(|_| malformed(line, format!("bad index `{b}`")))?;
    Ok((a, b))
}

/// Reads the line-oriented metric-file format.
///
/// Unspecified components are zero. When both `g[a][b]` and `g[b][a]` are
/// given they must agree structurally after simplification.
pub fn parse_metric_file(text: &str) -> Result<MetricSpec, MetricError> {
    let mut dim: Option<(usize, usize)> = None;
    let mut coords: Option<(Vec<String>, usize)> = None;
    let mut params: Vec<(String, f64)> = Vec::new();
    let mut entries: Vec<(usize, usize, Expr, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| malformed(line_no, "expected `key = value`"))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        if lhs == "dim" {
            let n: usize = rhs
                .parse()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| malformed(line_no, format!("dim must be a positive integer, found `{rhs}`")))?;
            dim = Some((n, line_no));
        } else if lhs == "coords" {
            let names: Vec<String> = rhs.split(',').map(|s| s.trim().to_string()).collect();
            for n in &names {
                if !is_identifier(n) {
                    return Err(malformed(line_no, format!("invalid coordinate name `{n}`")));
                }
            }
            coords = Some((names, line_no));
        } else if let Some(name) = lhs.strip_prefix("param") {
            let name = name.trim();
            if !is_identifier(name) || !lhs.starts_with("param ") {
                return Err(malformed(line_no, format!("invalid parameter declaration `{lhs}`")));
            }
            let v: f64 = rhs
                .parse()
                .map_err(|_| malformed(line_no, format!("parameter value must be a real number, found `{rhs}`")))?;
            params.push((name.to_string(), v));
        } else if lhs.starts_with('g') {
            let (a, b) = parse_index(lhs, line_no)?;
            let e = parse_expression(rhs).map_err(|source| MetricError::Syntax { line: line_no, source })?;
            if entries.iter().any(|(x, y, _, _)| *x == a && *y == b) {
                return Err(malformed(line_no, format!("g[{a}][{b}] given twice")));
            }
            entries.push((a, b, e, line_no));
        } else {
            return Err(malformed(line_no, format!("unknown key `{lhs}`")));
        }
    }

    let (coords, coords_line) = coords.ok_or_else(|| malformed(0, "missing `coords` line"))?;
    let n = coords.len();
    if let Some((d, line)) = dim {
        if d != n {
            return Err(MetricError::Dimension(format!(
                "dim = {d} (line {line}) but {n} coordinates declared (line {coords_line})"
            )));
        }
    } else {
        return Err(malformed(0, "missing `dim` line"));
    }

    let mut comps: Vec<Option<Expr>> = vec![None; n * n];
    for (a, b, e, line) in &entries {
        if *a >= n || *b >= n {
            return Err(MetricError::Dimension(format!("g[{a}][{b}] on line {line} is outside dimension {n}")));
        }
        comps[a * n + b] = Some(e.clone());
    }
    let mut components = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let e = comps[a * n + b]
                .clone()
                .or_else(|| comps[b * n + a].clone())
                .unwrap_or(Expr::ZERO);
            components.push(e);
        }
    }
    MetricSpec::new(coords, params, components)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHWARZSCHILD: &str = "\
# Schwarzschild coordinates
dim = 4
coords = t, r, theta, phi
param m = 1.0
g[0][0] = -(1 - 2*m/r)
g[1][1] = 1/(1 - 2*m/r)
g[2][2] = r^2
g[3][3] = r^2 * sin(theta)^2
";

    #[test]
    fn reads_schwarzschild() {
        let spec = parse_metric_file(SCHWARZSCHILD).unwrap();
        assert_eq!(spec.dim(), 4);
        assert_eq!(spec.param("m"), Some(1.0));
        let g00 = spec.component(0, 0);
        assert_eq!(*g00, -(Expr::ONE - Expr::num(2.0) * Expr::param("m") / Expr::var("r")));
        assert!(spec.component(0, 1).is_zero());
        assert!(spec.is_diagonal());
        let v = spec.eval(g00, &[0.0, 4.0, 1.0, 0.0]).unwrap();
        assert_eq!(v, -0.5);
    }

    #[test]
    fn asymmetric_entries_rejected() {
        let text = "dim = 2\ncoords = t, x\ng[0][0] = -1\ng[1][1] = 1\ng[0][1] = x\ng[1][0] = t\n";
        assert!(matches!(parse_metric_file(text), Err(MetricError::Asymmetric { a: 0, b: 1, .. })));
    }

    #[test]
    fn symmetric_duplicates_accepted_after_simplification() {
        let text = "dim = 2\ncoords = t, x\ng[0][1] = x*1\ng[1][0] = x + 0\ng[1][1] = 1\ng[0][0] = -1\n";
        let spec = parse_metric_file(text).unwrap();
        assert_eq!(*spec.component(1, 0), Expr::var("x"));
    }

    #[test]
    fn degenerate_two_dimensional() {
        let text = "dim = 2\ncoords = t, x\ng[0][0] = -1\ng[1][1] = t^4\n";
        let spec = parse_metric_file(text).unwrap();
        assert_eq!(spec.eval(spec.component(1, 1), &[0.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn error_cases() {
        let undeclared = "dim = 2\ncoords = t, x\ng[0][0] = -q\n";
        assert!(matches!(parse_metric_file(undeclared), Err(MetricError::Undeclared { .. })));
        let mismatch = "dim = 3\ncoords = t, x\n";
        assert!(matches!(parse_metric_file(mismatch), Err(MetricError::Dimension(_))));
        let outside = "dim = 2\ncoords = t, x\ng[2][0] = 1\n";
        assert!(matches!(parse_metric_file(outside), Err(MetricError::Dimension(_))));
        let syntax = "dim = 2\ncoords = t, x\ng[0][0] = 2t\n";
        match parse_metric_file(syntax) {
            Err(MetricError::Syntax { line, source }) => {
                assert_eq!(line, 3);
                assert_eq!(source.offset, 1);
            }
            other => panic!("{other:?}"),
        }
        let dup = "dim = 1\ncoords = t\nparam t = 1\n";
        assert!(matches!(parse_metric_file(dup), Err(MetricError::DuplicateName(_))));
    }

    #[test]
    fn file_round_trip() {
        let spec = parse_metric_file(SCHWARZSCHILD).unwrap();
        let again = parse_metric_file(&spec.to_file_string()).unwrap();
        assert_eq!(spec, again);
    }
}
