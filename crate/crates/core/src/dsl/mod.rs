//! Scalar expressions in chart coordinates: parsing, printing, exact
//! differentiation, simplification, evaluation, and the metric-file format.

mod diff;
mod eval;
mod expr;
mod metric;
mod parse;
mod simplify;

pub use diff::differentiate;
pub use eval::{evaluate, Bindings, EvalError};
pub use expr::{BinOp, Expr, Func};
pub use metric::{parse_metric_file, MetricError, MetricSpec, PointEnv};
pub use parse::{parse_expression, ParseError};
pub use simplify::simplify;
