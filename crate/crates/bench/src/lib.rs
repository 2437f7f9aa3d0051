//! Benchmark inputs shared by the criterion targets.

use semireg_core::catalog;
use semireg_core::geometry::Geometry;
use semireg_core::tensor::Point;

/// A catalog metric with symbolic derivatives already built.
pub fn geometry(name: &str) -> Geometry {
    Geometry::new(catalog::get_metric(name, &[]).expect("catalog metric"))
}

/// Deterministic points spread over the metric's sampling box.
pub fn points(name: &str, count: usize) -> Vec<Point> {
    let bx = catalog::entry(name).expect("catalog metric").sample_box(&[]).expect("default params");
    (0..count)
        .map(|i| {
            let s = (i as f64 + 0.5) / count as f64;
            Point::new(
                bx.iter()
                    .enumerate()
                    .map(|(k, &(lo, hi))| lo + (hi - lo) * ((s * (k as f64 + 1.618)).fract()))
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}
