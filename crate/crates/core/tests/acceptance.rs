//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

mod common;

use common::{catalog_point, koszul_identities, Classical};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use semireg_core::catalog::{get_metric, outer_horizon};
use semireg_core::einstein::{
    einstein_at, einstein_density_at, kerr_newman_regularize, ricci_at, DENSITY_FACTOR,
};
use semireg_core::geometry::{geometric_path, Geometry};
use semireg_core::scfoliate::{
    foliation, interior_angles, polygon_vertices, preset, render, sc_map, sc_map_via, validate_config, Format,
    Route, StripConfig, DEFAULT_A, DEFAULT_B, PRESETS,
};
use semireg_core::tensor::{cocontract, cometric, eval_metric, MetricValue, Point, DEFAULT_TOL};
use std::path::PathBuf;
use std::time::Instant;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn koszul_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(101);
    let metrics: [(&str, &[(&str, f64)]); 3] = [("minkowski", &[]), ("schwarzschild", &[("m", 1.0)]), ("diag_semiregular", &[])];
    for (name, params) in metrics {
        let spec = get_metric(name, params).map_err(|e| e.to_string())?;
        for trial in 0..50 {
            let p = catalog_point(&mut rng, name, params);
            if let Err((id, lhs, rhs)) = koszul_identities(&spec, &mut rng, &p, 1e-8) {
                return Err(format!("{name} trial {trial}: property {id}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok("8 properties x 50 points x 3 metrics".into())
}

fn vacuum() -> Outcome {
    let geo = Geometry::new(get_metric("schwarzschild", &[("m", 1.0)]).map_err(|e| e.to_string())?);
    let mut worst = 0.0f64;
    for r in [3.0, 4.0, 10.0] {
        let p = Point::new([0.0, r, 1.0, 0.0]);
        let scale = geo.riemann_at(&p, DEFAULT_TOL).map_err(|e| e.to_string())?.max_abs();
        let ric = ricci_at(&geo, &p, DEFAULT_TOL).map_err(|e| e.to_string())?.matrix.amax();
        let ein = einstein_at(&geo, &p, DEFAULT_TOL).map_err(|e| e.to_string())?.amax();
        // The density carries two metric factors relative to the curvature.
        let gscale = geo.metric_at(&p).map_err(|e| e.to_string())?.matrix().amax().powi(2);
        let den = einstein_density_at(&geo, &p, DEFAULT_TOL).map_err(|e| e.to_string())?.upper.amax() / gscale;
        for (what, v) in [("Ricci", ric), ("Einstein", ein), ("density", den)] {
            ensure!(v <= 1e-7 * scale, "r = {r}: {what} {v:e} vs scale {scale:e}");
            worst = worst.max(v / scale);
        }
    }
    Ok(format!("worst relative component {worst:.1e}"))
}

fn traceless() -> Outcome {
    let params = [("m", 1.0), ("e", 0.5)];
    let geo = Geometry::new(get_metric("reissner_nordstrom", &params).map_err(|e| e.to_string())?);
    let mut rng = StdRng::seed_from_u64(103);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = catalog_point(&mut rng, "reissner_nordstrom", &params);
        let g = einstein_at(&geo, &p, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let gp = cometric(&geo.metric_at(&p).map_err(|e| e.to_string())?, DEFAULT_TOL);
        let tr = gp.matrix.component_mul(&g).sum().abs();
        ensure!(g.amax() > 1e-6, "Einstein tensor vanishes at {:?}", p.0);
        ensure!(tr <= 1e-8, "trace {tr:e} at {:?}", p.0);
        worst = worst.max(tr);
    }
    Ok(format!("max |trace| {worst:.1e} over 10 points"))
}

fn degenerate_smoothness() -> Outcome {
    let good = Geometry::new(get_metric("diag_semiregular", &[]).map_err(|e| e.to_string())?);
    let at0 = good.riemann_at(&Point::new([0.0, 0.3, 0.0, 0.0]), DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure!(at0.components.iter().all(|v| v.is_finite()), "non-finite R at t = 0");
    ensure!(at0.max_abs() == 0.0, "R at t = 0 is not the limit 0: {}", at0.max_abs());
    for t in [0.5, 0.25, 0.1] {
        let r = good.riemann_at(&Point::new([t, 0.3, 0.0, 0.0]), DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure!((r.get(0, 1, 0, 1) - 2.0 * t * t).abs() <= 1e-12, "R_txtx at t = {t} is {}", r.get(0, 1, 0, 1));
    }
    let limit = Point::new([0.0, 0.3, 0.0, 0.0]);
    let path = geometric_path(&limit, 0, 1..=12);
    let report = good.check_semiregular(&path, 1e-10).map_err(|e| e.to_string())?;
    ensure!(report.converged, "diag_semiregular did not converge");
    let bad = Geometry::new(get_metric("diag_nonregular", &[]).map_err(|e| e.to_string())?);
    let report = bad.check_semiregular(&path, 1e-10).map_err(|e| e.to_string())?;
    ensure!(!report.converged, "diag_nonregular was judged convergent");
    let pairs: Vec<String> = report.diverged().map(|s| format!("{:?}", s.pair)).collect();
    Ok(format!("R(t=0) = 0, semiregular converges, nonregular diverges at {}", pairs.join(" ")))
}

fn coinner_product() -> Outcome {
    let mut rng = StdRng::seed_from_u64(105);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let n = rng.gen_range(2..=8);
        let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
        let mut lambda: Vec<f64> =
            (0..n).map(|_| [0.0, 1.0, -1.0][rng.gen_range(0..3)] * rng.gen_range(0.1..1.0)).collect();
        lambda[rng.gen_range(0..n)] = 0.0;
        let rank = lambda.iter().filter(|l| **l != 0.0).count();
        let g = MetricValue::new(&q * DMatrix::from_diagonal(&DVector::from_vec(lambda)) * q.transpose());
        let gp = cometric(&g, DEFAULT_TOL);
        let m = g.matrix();
        ensure!(gp.rank == rank, "trial {trial}: rank {} vs {rank}", gp.rank);
        let x = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let residuals = [
            (m * &gp.matrix * m - m).amax(),
            (&gp.matrix * m * &gp.matrix - &gp.matrix).amax(),
            (&gp.matrix - gp.matrix.transpose()).amax(),
            (cocontract(&(m * &x), &(m * &y), &gp) - x.dot(&(m * &y))).abs(),
        ];
        for r in residuals {
            ensure!(r <= 1e-8, "trial {trial}: residual {r:e}");
            worst = worst.max(r);
        }
    }
    Ok(format!("1000 matrices, worst residual {worst:.1e}"))
}

fn density_consistency() -> Outcome {
    let pinned: f64 = std::fs::read_to_string(fixtures().join("density_factor.txt"))
        .map_err(|e| e.to_string())?
        .trim()
        .parse()
        .map_err(|e| format!("density fixture: {e}"))?;
    ensure!(pinned == DENSITY_FACTOR, "fixture {pinned} vs DENSITY_FACTOR {DENSITY_FACTOR}");
    let mut rng = StdRng::seed_from_u64(106);
    let mut ratios = Vec::new();
    for (name, params) in [("reissner_nordstrom", vec![("m", 1.0), ("e", 0.5)]), ("diag_semiregular", vec![])] {
        let spec = get_metric(name, &params).map_err(|e| e.to_string())?;
        let geo = Geometry::new(spec.clone());
        for _ in 0..10 {
            let p = catalog_point(&mut rng, name, &params);
            let d = einstein_density_at(&geo, &p, DEFAULT_TOL).map_err(|e| e.to_string())?;
            let c = Classical::new(&spec, &p);
            let want = c.einstein_upper() * c.g.determinant();
            let ratio = d.upper.dot(&want) / want.norm_squared();
            ensure!((&d.upper - &want * ratio).amax() <= 1e-6 * d.upper.amax(), "{name}: not proportional at {:?}", p.0);
            ratios.push(ratio);
        }
    }
    for r in &ratios {
        ensure!((r - pinned).abs() <= 1e-6 * pinned, "ratio {r} differs from pinned {pinned}");
    }
    Ok(format!("20 points, 2 metrics, constant {pinned}"))
}

fn sc_presets() -> Outcome {
    for name in PRESETS {
        let cfg = preset(name, DEFAULT_A, DEFAULT_B).map_err(|e| e.to_string())?;
        let findings = validate_config(&cfg);
        ensure!(findings.is_empty(), "{name}: {findings:?}");
    }
    let trivial = StripConfig::trivial();
    let mut rng = StdRng::seed_from_u64(107);
    for _ in 0..50 {
        let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.0..=1.0));
        let w = sc_map(z, &trivial).map_err(|e| e.to_string())?;
        ensure!((w - z).norm() <= 1e-10, "trivial map at {z}: {w}");
    }
    let (mut conf, mut angle, mut path) = (0.0f64, 0.0f64, 0.0f64);
    for name in PRESETS {
        let cfg = preset(name, DEFAULT_A, DEFAULT_B).map_err(|e| e.to_string())?;
        let map = |z: Complex64| sc_map(z, &cfg).map_err(|e| format!("{name}: {e}"));
        for _ in 0..50 {
            let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..0.95));
            let eps = 1e-5;
            let f = map(z)?;
            let dx = (map(z + eps)? - f) / eps;
            let dy = (map(z + Complex64::new(0.0, eps))? - f) / Complex64::new(0.0, eps);
            let r = (dx - dy).norm() / dx.norm().max(dy.norm());
            ensure!(r <= 1e-3, "{name}: conformality residual {r:e} at {z}");
            conf = conf.max(r);
        }
        let v = polygon_vertices(&cfg).map_err(|e| e.to_string())?;
        let measured = interior_angles(&v).ok_or_else(|| format!("{name}: end limit did not converge"))?;
        for (vx, a) in v.iter().zip(measured) {
            let want = std::f64::consts::PI * *vx.alpha.numer() as f64 / *vx.alpha.denom() as f64;
            let err = (a - want).abs().to_degrees();
            ensure!(err <= 1.0, "{name} {}: angle off by {err} degrees", vx.label);
            angle = angle.max(err);
        }
        let probes = cfg.prevertices().into_iter().map(|p| p.z).chain([Complex64::new(0.4, 0.3), Complex64::new(-2.0, 1.0)]);
        for z in probes {
            let p = sc_map_via(z, &cfg, Route::Primary).map_err(|e| e.to_string())?;
            let q = sc_map_via(z, &cfg, Route::Alternate).map_err(|e| e.to_string())?;
            ensure!((p - q).norm() <= 1e-8, "{name}: routes differ by {:e} at {z}", (p - q).norm());
            path = path.max((p - q).norm());
        }
    }
    Ok(format!("conformality {conf:.1e}, angles within {angle:.1e} deg, path independence {path:.1e}"))
}

fn kerr_newman() -> Outcome {
    let mut rng = StdRng::seed_from_u64(108);
    let mut checked = 0;
    for _ in 0..20 {
        let (m, a, e) = (rng.gen_range(0.5..2.0), rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
        let reg = kerr_newman_regularize(m, a, e);
        let rh = outer_horizon(m, e, a);
        let p = Point::new([rng.gen_range(-3.0..3.0), rh, rng.gen_range(0.1..3.0), rng.gen_range(0.0..6.0)]);
        let g = eval_metric(&reg, &p).map_err(|e| e.to_string())?;
        ensure!(g.matrix().iter().all(|v| v.is_finite()), "non-finite at Δ = 0, {:?}", p.0);
        for k in 1..=30 {
            let h = 2f64.powi(-k);
            let p = Point::new([0.0, h, std::f64::consts::FRAC_PI_2 + h, 1.0]);
            let g = eval_metric(&reg, &p).map_err(|e| e.to_string())?;
            ensure!(g.matrix().iter().all(|v| v.is_finite()), "non-finite as Σ → 0 at {:?}", p.0);
        }
        checked += 1;
    }
    let reg = kerr_newman_regularize(1.0, 0.0, 0.0);
    let schw = get_metric("schwarzschild", &[("m", 1.0)]).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        let p = catalog_point(&mut rng, "schwarzschild", &[]);
        let r = p.0[1];
        let s = eval_metric(&schw, &p).map_err(|e| e.to_string())?;
        let g = eval_metric(&reg, &p).map_err(|e| e.to_string())?;
        let f = r * r * (r * r - 2.0 * r);
        for i in 0..16 {
            let (got, want) = (g.matrix()[i], f * s.matrix()[i]);
            ensure!((got - want).abs() <= 1e-12 * got.abs().max(want.abs()), "entry {i} at {:?}: {got} vs {want}", p.0);
        }
    }
    Ok(format!("{checked} horizon points + Σ → 0 paths finite; a = e = 0 matches at 100 points"))
}

fn golden_figures() -> Outcome {
    for name in ["hexagon", "diamond", "rn_kerr", "superman"] {
        let cfg = preset(name, 1.0, 0.5).map_err(|e| e.to_string())?;
        let ps = foliation(&cfg, 12, (-4.0, 4.0), 64).map_err(|e| e.to_string())?;
        let got = render(&ps, Format::Svg);
        let path = fixtures().join("golden").join(format!("{name}.svg"));
        let want = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(got == want, "{name}.svg differs from the oracle fixture");
    }
    Ok("hexagon, diamond, rn_kerr, superman byte-identical".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Koszul suite", koszul_suite),
        ("Schwarzschild vacuum", vacuum),
        ("Reissner-Nordstrom traceless source", traceless),
        ("degenerate smoothness", degenerate_smoothness),
        ("co-inner product algebra", coinner_product),
        ("density / classical consistency", density_consistency),
        ("Schwarz-Christoffel presets", sc_presets),
        ("Kerr-Newman regularization", kerr_newman),
        ("golden figures", golden_figures),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} {}. {name} ({:.1}s): {detail}", i + 1, t.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
