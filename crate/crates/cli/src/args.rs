use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "semireg", version, about = "Curvature of degenerate metrics and Penrose diagram foliations")]
pub struct Cli {
    /// Print results as JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the built-in metric catalog.
    Metric {
        #[command(subcommand)]
        action: MetricAction,
    },
    /// Radical-stationarity or semi-regularity at a point.
    Check(CheckArgs),
    /// Nonzero components of R_abcd at a point.
    Curvature(PointArgs),
    /// Ricci, scalar and Einstein tensors, optionally the Einstein density.
    Einstein(EinsteinArgs),
    /// Render a strip-map foliation to SVG or CSV.
    Foliate(FoliateArgs),
    /// Symbolic expression utilities.
    Expr {
        #[command(subcommand)]
        action: ExprAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum MetricAction {
    /// List catalog metrics with their parameters.
    List,
    /// Show one metric's components and parameters.
    Show {
        #[arg(long)]
        name: String,
        /// Parameter override, `k=v`; repeatable.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
}

#[derive(Debug, Args)]
#[group(skip)]
pub struct MetricSource {
    /// Metric file in the line-oriented format.
    #[arg(long, conflicts_with = "name", required_unless_present = "name")]
    pub metric: Option<PathBuf>,
    /// Catalog metric name.
    #[arg(long)]
    pub name: Option<String>,
    /// Parameter override, `k=v`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
#[group(skip)]
pub struct PointArgs {
    #[command(flatten)]
    pub source: MetricSource,
    /// Point as `coord=value` pairs separated by commas; every coordinate is required.
    #[arg(long, value_name = "C1=V1,C2=V2,..", allow_hyphen_values = true)]
    pub at: String,
    /// Relative rank threshold for degeneracy.
    #[arg(long, default_value_t = semireg_core::tensor::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
#[group(skip)]
pub struct CheckArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, conflicts_with = "semiregular", required_unless_present = "semiregular")]
    pub radical_stationary: bool,
    /// Sample the co-contracted Koszul products along a path into the point.
    #[arg(long)]
    pub semiregular: bool,
    /// Approach path `VAR:BASE:K0..K1`: VAR is shifted by BASE^-k for k = K0..=K1.
    #[arg(long, value_name = "SPEC")]
    pub path: Option<String>,
}

#[derive(Debug, Args)]
#[group(skip)]
pub struct EinsteinArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Also report the Einstein density and the densitized field-equation residual.
    #[arg(long)]
    pub density: bool,
    /// Cosmological constant in the residual.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Coupling constant in the residual (the source tensor is zero).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub kappa: f64,
}

#[derive(Debug, Args)]
pub struct FoliateArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(semireg_core::scfoliate::PRESETS))]
    pub preset: String,
    #[arg(long, default_value_t = semireg_core::scfoliate::DEFAULT_A)]
    pub a: f64,
    #[arg(long, default_value_t = semireg_core::scfoliate::DEFAULT_B)]
    pub b: f64,
    #[arg(long)]
    pub leaves: usize,
    /// Samples per leaf.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub x_max: f64,
    /// Output file; the extension (.svg or .csv) selects the format.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ExprAction {
    /// Differentiate and simplify.
    Diff {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        var: String,
    },
}
