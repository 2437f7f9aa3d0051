use super::foliation::{PolylineKind, PolylineSet};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Svg,
    Csv,
}

impl Format {
    /// Picks the format from a file extension, case-insensitively.
    pub fn from_path(path: &std::path::Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "svg" => Some(Format::Svg),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

/// Four decimals, never `-0.0000`.
fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn style(kind: PolylineKind) -> (&'static str, &'static str, f64) {
    match kind {
        PolylineKind::Leaf => ("leaf", "#1f6fb4", 0.003),
        PolylineKind::Boundary => ("boundary", "#000000", 0.006),
        PolylineKind::Vertex => ("vertex", "#c0392b", 0.02),
    }
}

fn svg(ps: &PolylineSet) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for z in ps.points() {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(-z.im);
        y1 = y1.max(-z.im);
    }
    if x0 > x1 {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let w = if x1 > x0 { x1 - x0 } else { 1.0 };
    let h = if y1 > y0 { y1 - y0 } else { 1.0 };
    let size = w.max(h);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        num(x0 - 0.05 * w),
        num(y0 - 0.05 * h),
        num(1.1 * w),
        num(1.1 * h)
    );
    out.push_str("<g fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n");
    for p in &ps.polylines {
        let (class, color, width) = style(p.kind);
        let mut d = String::new();
        for (i, z) in p.points.iter().enumerate() {
            let _ = write!(d, "{}{},{}", if i == 0 { "M" } else { " L" }, num(z.re), num(-z.im));
        }
        if p.points.len() == 1 {
            let _ = write!(d, " L{},{}", num(p.points[0].re), num(-p.points[0].im));
        }
        let _ = writeln!(
            out,
            "<path class=\"{class}\" data-label=\"{}\" stroke=\"{color}\" stroke-width=\"{}\" d=\"{d}\"/>",
            p.label,
            num(width * size)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn csv(ps: &PolylineSet) -> String {
    let mut out = String::from("label,index,re,im\n");
    for p in &ps.polylines {
        for (i, z) in p.points.iter().enumerate() {
            let _ = writeln!(out, "{},{i},{:.11e},{:.11e}", p.label, z.re, z.im);
        }
    }
    out
}

/// SVG (imaginary axis pointing up, 5% margin) or CSV rows
/// `label,index,re,im` with 12 significant digits.
pub fn render(ps: &PolylineSet, format: Format) -> Vec<u8> {
    match format {
        Format::Svg => svg(ps),
        Format::Csv => csv(ps),
    }
    .into_bytes()
}
