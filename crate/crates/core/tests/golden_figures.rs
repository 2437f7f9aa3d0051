//! Foliation SVGs compared byte for byte with fixtures from
//! `tools/sc_oracle.py` (a = 1, b = 0.5, 12 leaves, x in [-4, 4], 64 samples).

use semireg_core::scfoliate::{foliation, preset, render, Format};
use std::path::PathBuf;

pub const GOLDEN: [&str; 4] = ["hexagon", "diamond", "rn_kerr", "superman"];

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden").join(format!("{name}.svg"))
}

fn first_difference(a: &str, b: &str) -> String {
    match a.lines().zip(b.lines()).enumerate().find(|(_, (x, y))| x != y) {
        Some((i, (x, y))) => format!("line {}:\n  got  {x}\n  want {y}", i + 1),
        None => format!("lengths differ: {} vs {}", a.len(), b.len()),
    }
}

#[test]
fn golden_svgs_match_oracle() {
    for name in GOLDEN {
        let cfg = preset(name, 1.0, 0.5).unwrap();
        let ps = foliation(&cfg, 12, (-4.0, 4.0), 64).unwrap();
        let got = String::from_utf8(render(&ps, Format::Svg)).unwrap();
        let want = std::fs::read_to_string(fixture(name)).unwrap();
        assert!(got == want, "{name}: {}", first_difference(&got, &want));
    }
}

#[test]
fn rendering_is_deterministic() {
    let cfg = preset("hexagon", 1.0, 0.5).unwrap();
    let a = render(&foliation(&cfg, 12, (-4.0, 4.0), 64).unwrap(), Format::Svg);
    let b = render(&foliation(&cfg, 12, (-4.0, 4.0), 64).unwrap(), Format::Svg);
    assert_eq!(a, b);
}
