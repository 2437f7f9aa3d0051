use crate::args::{CheckArgs, EinsteinArgs, ExprAction, FoliateArgs, MetricAction, MetricSource, PointArgs};
use crate::output::{matrix_json, matrix_table, Output};
use semireg_core::catalog;
use semireg_core::dsl::{differentiate, parse_expression, parse_metric_file, simplify, MetricSpec};
use semireg_core::einstein::{
    densitized_residual, einstein_at, einstein_density_at, ricci_at, scalar_at, EinsteinError,
};
use semireg_core::geometry::{Geometry, MIN_PATH_LEN};
use semireg_core::scfoliate::{foliation, preset, render, Format, PolylineKind};
use semireg_core::tensor::{eval_metric, signature_of, Point};
use serde_json::json;
use std::fmt::Write as _;

/// Bad input (exit 1) versus a failed computation (exit 2).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn compute(context: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Compute(format!("{context}: {err}"))
}

pub type CmdResult = Result<Output, CliError>;

fn parse_pair(s: &str) -> Result<(String, f64), CliError> {
    let (k, v) = s.split_once('=').ok_or_else(|| usage(format!("expected `name=value`, got `{s}`")))?;
    let v: f64 = v.trim().parse().map_err(|_| usage(format!("`{v}` is not a number (in `{s}`)")))?;
    Ok((k.trim().to_string(), v))
}

fn parse_pairs(items: &[String]) -> Result<Vec<(String, f64)>, CliError> {
    items.iter().map(|s| parse_pair(s)).collect()
}

fn borrowed(pairs: &[(String, f64)]) -> Vec<(&str, f64)> {
    pairs.iter().map(|(k, v)| (k.as_str(), *v)).collect()
}

fn catalog_error(e: catalog::CatalogError) -> CliError {
    match e {
        catalog::CatalogError::UnknownName(_) | catalog::CatalogError::UnknownParam { .. } => usage(e.to_string()),
        other => compute("metric", other),
    }
}

fn load_spec(src: &MetricSource) -> Result<MetricSpec, CliError> {
    let overrides = parse_pairs(&src.params)?;
    if let Some(name) = &src.name {
        return catalog::get_metric(name, &borrowed(&overrides)).map_err(catalog_error);
    }
    let path = src.metric.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path).map_err(|e| compute(&path.display().to_string(), e))?;
    let spec = parse_metric_file(&text).map_err(|e| compute(&path.display().to_string(), e))?;
    if overrides.is_empty() {
        return Ok(spec);
    }
    let mut params = spec.params().to_vec();
    for (k, v) in overrides {
        match params.iter_mut().find(|(n, _)| *n == k) {
            Some(slot) => slot.1 = v,
            None => return Err(usage(format!("metric file declares no parameter `{k}`"))),
        }
    }
    MetricSpec::new(spec.coords().to_vec(), params, spec.components().to_vec())
        .map_err(|e| compute(&path.display().to_string(), e))
}

/// Matches `c=v` pairs to the chart; every coordinate must be given once.
fn parse_point(spec: &MetricSpec, at: &str) -> Result<Point, CliError> {
    let mut values: Vec<Option<f64>> = vec![None; spec.dim()];
    for item in at.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, v) = parse_pair(item)?;
        let i = spec
            .coord_index(&name)
            .ok_or_else(|| usage(format!("`{name}` is not a coordinate (expected {})", spec.coords().join(", "))))?;
        if values[i].replace(v).is_some() {
            return Err(usage(format!("coordinate `{name}` given twice")));
        }
    }
    let missing: Vec<&str> =
        spec.coords().iter().zip(&values).filter(|(_, v)| v.is_none()).map(|(c, _)| c.as_str()).collect();
    if !missing.is_empty() {
        return Err(usage(format!("missing coordinate(s) in --at: {}", missing.join(", "))));
    }
    Ok(Point::new(values.into_iter().map(|v| v.expect("checked")).collect::<Vec<_>>()))
}

fn load(args: &PointArgs) -> Result<(Geometry, Point), CliError> {
    let spec = load_spec(&args.source)?;
    let p = parse_point(&spec, &args.at)?;
    Ok((Geometry::new(spec), p))
}

fn index_names(spec: &MetricSpec, idx: &[usize]) -> String {
    idx.iter().map(|&i| spec.coords()[i].as_str()).collect::<Vec<_>>().join(" ")
}

pub fn metric(action: &MetricAction) -> CmdResult {
    match action {
        MetricAction::List => {
            let entries = catalog::entries();
            let mut text = String::new();
            let _ = writeln!(text, "{:<26} {:<18} {:<24} description", "name", "coords", "params");
            for e in entries {
                let params: Vec<String> = e.params.iter().map(|p| format!("{}={} {}", p.name, p.default, p.range())).collect();
                let _ = writeln!(text, "{:<26} {:<18} {:<24} {}", e.name, e.coords.join(","), params.join("; "), e.description);
            }
            Ok(Output::new(json!({ "metrics": entries }), text))
        }
        MetricAction::Show { name, params } => {
            let e = catalog::entry(name).ok_or_else(|| usage(format!("unknown metric `{name}` (see `metric list`)")))?;
            let overrides = parse_pairs(params)?;
            let resolved = e.resolve_params(&borrowed(&overrides)).map_err(catalog_error)?;
            let spec = e.build(&borrowed(&overrides)).map_err(catalog_error)?;
            let n = spec.dim();
            let mut components = Vec::new();
            for a in 0..n {
                for b in a..n {
                    let c = spec.component(a, b);
                    if !c.is_zero() {
                        components.push(json!({ "index": [a, b], "expr": c.to_string() }));
                    }
                }
            }
            let value = json!({
                "entry": e,
                "params": resolved.iter().map(|(k, v)| json!({ "name": k, "value": v })).collect::<Vec<_>>(),
                "components": components,
            });
            let mut text = format!("{}: {}\nsignature {}\n", e.name, e.description, e.signature);
            for (k, v) in &resolved {
                let _ = writeln!(text, "param {k} = {v}");
            }
            for loc in e.singular_loci {
                let _ = writeln!(text, "singular: {loc}");
            }
            text.push_str(&spec.to_file_string());
            Ok(Output::new(value, text))
        }
    }
}

/// `VAR:BASE:K0..K1`, shifting VAR by `BASE^-k`.
fn parse_path(spec: &MetricSpec, limit: &Point, s: &str) -> Result<Vec<Point>, CliError> {
    let bad = || usage(format!("path `{s}` is not of the form VAR:BASE:K0..K1"));
    let mut parts = s.split(':');
    let (var, base, range) = (parts.next().ok_or_else(bad)?, parts.next().ok_or_else(bad)?, parts.next().ok_or_else(bad)?);
    if parts.next().is_some() {
        return Err(bad());
    }
    let coord = spec.coord_index(var).ok_or_else(|| usage(format!("`{var}` is not a coordinate")))?;
    let base: f64 = base.parse().map_err(|_| bad())?;
    let (k0, k1) = range.split_once("..").ok_or_else(bad)?;
    let (k0, k1): (i32, i32) = (k0.parse().map_err(|_| bad())?, k1.trim_start_matches('=').parse().map_err(|_| bad())?);
    if base.is_nan() || base <= 1.0 || k1 < k0 {
        return Err(usage(format!("path `{s}` needs BASE > 1 and K0 <= K1")));
    }
    Ok((k0..=k1)
        .map(|k| {
            let mut p = limit.clone();
            p.0[coord] += base.powi(-k);
            p
        })
        .collect())
}

pub fn check(args: &CheckArgs) -> CmdResult {
    let (geo, p) = load(&args.point)?;
    let tol = args.point.tol;
    if args.radical_stationary {
        let st = geo.stationarity(&p, tol).map_err(|e| compute("radical-stationarity", e))?;
        let (a, b) = st.worst_pair;
        let text = format!(
            "radical-stationary: {}\ndegenerate: {}\nworst pair: ({}) residual {:.6e}\n",
            st.stationary,
            st.degenerate,
            index_names(geo.spec(), &[a, b]),
            st.worst_residual
        );
        return Ok(Output::new(json!({ "point": p, "stationarity": st }), text));
    }
    let path = match &args.path {
        Some(s) => parse_path(geo.spec(), &p, s)?,
        None => parse_path(geo.spec(), &p, &format!("{}:2:1..12", geo.spec().coords()[0]))?,
    };
    if path.len() < MIN_PATH_LEN {
        return Err(usage(format!("path has {} points, at least {MIN_PATH_LEN} are needed", path.len())));
    }
    let report = geo.check_semiregular(&path, tol).map_err(|e| compute("semi-regularity", e))?;
    let mut text = format!("semi-regular along path: {}\n", report.converged);
    let diverged: Vec<_> = report.diverged().collect();
    if diverged.is_empty() {
        text.push_str("all co-contracted Koszul products converge\n");
    }
    for s in diverged {
        let [a, b, c, d] = s.pair;
        let last = s.values.last().copied().unwrap_or(f64::NAN);
        let _ = writeln!(text, "diverges: <<G_{}, G_{}>>  last value {last:.6e}", index_names(geo.spec(), &[a, b]), index_names(geo.spec(), &[c, d]));
    }
    if let Some(diag) = &report.diagonal {
        let _ = writeln!(text, "diagonal criterion: for all c {}, for some c {}", diag.for_all_c, diag.for_some_c);
    }
    Ok(Output::new(json!({ "point": p, "report": report }), text))
}

pub fn curvature(args: &PointArgs) -> CmdResult {
    let (geo, p) = load(args)?;
    let r = geo.riemann_at(&p, args.tol).map_err(|e| compute("curvature", e))?;
    let threshold = 1e-12 * r.max_abs().max(1.0);
    let nonzero = r.nonzero(threshold);
    let mut text = format!("degenerate: {}\n", r.degenerate);
    if nonzero.is_empty() {
        text.push_str("all components vanish\n");
    }
    for (idx, v) in &nonzero {
        let _ = writeln!(text, "R[{}] = {v:.12e}", index_names(geo.spec(), idx));
    }
    let comps: Vec<_> = nonzero
        .iter()
        .map(|(idx, v)| json!({ "index": idx, "names": index_names(geo.spec(), idx), "value": v }))
        .collect();
    Ok(Output::new(
        json!({ "point": p, "degenerate": r.degenerate, "threshold": threshold, "nonzero": comps }),
        text,
    ))
}

pub fn einstein(args: &EinsteinArgs) -> CmdResult {
    let (geo, p) = load(&args.point)?;
    let tol = args.point.tol;
    let g = eval_metric(geo.spec(), &p).map_err(|e| compute("metric", e))?;
    let sig = signature_of(&g, tol);
    let ricci = ricci_at(&geo, &p, tol).map_err(|e| compute("ricci", e))?;
    let scalar = scalar_at(&geo, &p, tol).map_err(|e| compute("scalar curvature", e))?;
    let einstein = match einstein_at(&geo, &p, tol) {
        Ok(m) => Some(m),
        Err(EinsteinError::Degenerate(_)) => None,
        Err(e) => return Err(compute("einstein", e)),
    };
    let mut value = json!({
        "point": p,
        "signature": sig,
        "ricci": matrix_json(&ricci.matrix),
        "ricci_extended": ricci.extended,
        "scalar": scalar,
        "einstein": einstein.as_ref().map(matrix_json),
    });
    let mut text = format!("signature {sig}\nRicci{}:\n{}scalar = {scalar:.12e}\n", if ricci.extended { " (co-contracted)" } else { "" }, matrix_table(&ricci.matrix));
    match &einstein {
        Some(m) => {
            let _ = write!(text, "Einstein:\n{}", matrix_table(m));
        }
        None => text.push_str("Einstein: undefined at a degenerate point\n"),
    }
    if args.density {
        let d = einstein_density_at(&geo, &p, tol).map_err(|e| compute("einstein density", e))?;
        let zero = nalgebra::DMatrix::zeros(geo.dim(), geo.dim());
        let res = densitized_residual(&geo, &p, args.lambda, &zero, args.kappa, tol)
            .map_err(|e| compute("densitized residual", e))?;
        value["density"] = json!({
            "upper": matrix_json(&d.upper),
            "lower": matrix_json(&d.lower),
            "factor": semireg_core::einstein::DENSITY_FACTOR,
            "residual": matrix_json(&res),
            "lambda": args.lambda,
            "kappa": args.kappa,
        });
        let _ = write!(
            text,
            "Einstein density (upper, {}x G det g):\n{}densitized residual (lambda = {}, kappa = {}, T = 0):\n{}",
            semireg_core::einstein::DENSITY_FACTOR,
            matrix_table(&d.upper),
            args.lambda,
            args.kappa,
            matrix_table(&res)
        );
    }
    Ok(Output::new(value, text))
}

pub fn foliate(args: &FoliateArgs) -> CmdResult {
    let format = Format::from_path(&args.out)
        .ok_or_else(|| usage(format!("cannot tell the format of `{}`; use .svg or .csv", args.out.display())))?;
    let cfg = preset(&args.preset, args.a, args.b).map_err(|e| usage(e.to_string()))?;
    let ps = foliation(&cfg, args.leaves, (args.x_min, args.x_max), args.samples).map_err(|e| match e {
        semireg_core::scfoliate::ScError::Constraint(m) => usage(m),
        other => compute("foliation", other),
    })?;
    let bytes = render(&ps, format);
    std::fs::write(&args.out, &bytes).map_err(|e| compute(&args.out.display().to_string(), e))?;
    let vertices: Vec<_> = ps
        .of_kind(PolylineKind::Vertex)
        .map(|v| json!({ "label": v.label, "re": v.points[0].re, "im": v.points[0].im }))
        .collect();
    let leaves = ps.leaves().count();
    let mut text = format!("wrote {} ({} bytes): {leaves} leaves, {} polylines\n", args.out.display(), bytes.len(), ps.polylines.len());
    for v in &vertices {
        let _ = writeln!(text, "{} = {:.9} {:+.9}i", v["label"].as_str().unwrap_or(""), v["re"].as_f64().unwrap_or(f64::NAN), v["im"].as_f64().unwrap_or(f64::NAN));
    }
    Ok(Output::new(
        json!({
            "out": args.out.display().to_string(),
            "preset": args.preset,
            "a": args.a,
            "b": args.b,
            "leaves": leaves,
            "polylines": ps.polylines.len(),
            "bytes": bytes.len(),
            "vertices": vertices,
        }),
        text,
    ))
}

pub fn expr(action: &ExprAction) -> CmdResult {
    match action {
        ExprAction::Diff { expr, var } => {
            let e = parse_expression(expr).map_err(|e| usage(format!("--expr: {e}")))?;
            let d = simplify(&differentiate(&e, var));
            Ok(Output::new(
                json!({ "expr": e.to_string(), "var": var, "derivative": d.to_string() }),
                format!("{d}\n"),
            ))
        }
    }
}
