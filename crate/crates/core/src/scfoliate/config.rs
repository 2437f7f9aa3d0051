use super::ScError;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

/// Parameters of a Schwarz–Christoffel map from the strip `0 ≤ Im z ≤ 1`.
///
/// Vertices are traversed counterclockwise: the `−∞` end, the lower
/// prevertices left to right, the `+∞` end, then the upper prevertices right
/// to left. `angles` follows that order with the ends left out; each angle is
/// a multiple of π.
#[derive(Debug, Clone, PartialEq)]
pub struct StripConfig {
    /// Real parts of the prevertices on `Im z = 0`, increasing.
    pub lower: Vec<f64>,
    /// Real parts of the prevertices on `Im z = 1`, decreasing.
    pub upper: Vec<f64>,
    pub angles: Vec<Rational64>,
    pub alpha_minus: Rational64,
    pub alpha_plus: Rational64,
    pub a: Complex64,
    pub c: Complex64,
    pub z0: Complex64,
}

/// Default shift `A`, scale `C`, and base point `z0`.
pub const DEFAULT_Z0: Complex64 = Complex64::new(0.0, 0.5);

impl StripConfig {
    /// A config with `A = 0`, `C = 1`, `z0 = i/2`.
    pub fn new(
        lower: Vec<f64>,
        upper: Vec<f64>,
        angles: Vec<Rational64>,
        alpha_minus: Rational64,
        alpha_plus: Rational64,
    ) -> Self {
        StripConfig {
            lower,
            upper,
            angles,
            alpha_minus,
            alpha_plus,
            a: Complex64::new(0.0, 0.0),
            c: Complex64::new(1.0, 0.0),
            z0: DEFAULT_Z0,
        }
    }

    /// No prevertices and zero end angles, so both ends stay at infinity.
    /// With `A = z0` the map is the identity.
    pub fn trivial() -> Self {
        let zero = Rational64::from_integer(0);
        StripConfig { a: DEFAULT_Z0, ..StripConfig::new(vec![], vec![], vec![], zero, zero) }
    }

    /// Finite prevertices in traversal order with their angles.
    pub fn prevertices(&self) -> Vec<Prevertex> {
        let lower = self.lower.iter().map(|&x| Complex64::new(x, 0.0));
        let upper = self.upper.iter().map(|&x| Complex64::new(x, 1.0));
        lower
            .chain(upper)
            .zip(&self.angles)
            .enumerate()
            .map(|(index, (z, &alpha))| Prevertex { index, z, alpha, beta: ratio_f64(alpha) - 1.0 })
            .collect()
    }

    pub fn n_total(&self) -> usize {
        self.lower.len() + self.upper.len() + 2
    }

    pub fn angle_sum(&self) -> Rational64 {
        self.angles.iter().fold(self.alpha_minus + self.alpha_plus, |s, a| s + a)
    }

    /// The same polygon reflected across the imaginary axis: prevertices
    /// negated and reversed, end angles swapped.
    pub fn mirrored(&self) -> Self {
        let nl = self.lower.len();
        let mut angles: Vec<Rational64> = self.angles[..nl].iter().rev().copied().collect();
        angles.extend(self.angles[nl..].iter().rev());
        StripConfig {
            lower: self.lower.iter().rev().map(|x| -x).collect(),
            upper: self.upper.iter().rev().map(|x| -x).collect(),
            angles,
            alpha_minus: self.alpha_plus,
            alpha_plus: self.alpha_minus,
            a: -self.a.conj(),
            c: self.c.conj(),
            z0: Complex64::new(-self.z0.re, self.z0.im),
        }
    }
}

pub(crate) fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prevertex {
    /// Position in traversal order among the finite prevertices.
    pub index: usize,
    pub z: Complex64,
    pub alpha: Rational64,
    /// Exponent `α − 1` of the sinh factor.
    pub beta: f64,
}

impl Prevertex {
    pub fn is_lower(&self) -> bool {
        self.z.im == 0.0
    }
}

/// A violated config invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    AngleCount { angles: usize, prevertices: usize },
    AngleSum { sum: String, expected: i64 },
    NonPositiveAngle { index: usize },
    NegativeEndAngle,
    NonFinitePrevertex { index: usize },
    CoincidentPrevertices { first: usize, second: usize },
    LowerNotIncreasing { index: usize },
    UpperNotDecreasing { index: usize },
    BasePointOutside,
    BasePointAtPrevertex { index: usize },
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Finding::AngleCount { angles, prevertices } => {
                write!(f, "{angles} angles given for {prevertices} finite prevertices")
            }
            Finding::AngleSum { sum, expected } => write!(f, "angle sum {sum} differs from n_total - 2 = {expected}"),
            Finding::NonPositiveAngle { index } => write!(f, "angle {index} is not positive"),
            Finding::NegativeEndAngle => write!(f, "end angles must be non-negative"),
            Finding::NonFinitePrevertex { index } => write!(f, "prevertex {index} is not finite"),
            Finding::CoincidentPrevertices { first, second } => {
                write!(f, "coincident prevertices {first} and {second}")
            }
            Finding::LowerNotIncreasing { index } => write!(f, "lower prevertex {index} is out of order"),
            Finding::UpperNotDecreasing { index } => write!(f, "upper prevertex {index} is out of order"),
            Finding::BasePointOutside => write!(f, "base point is not interior to the strip"),
            Finding::BasePointAtPrevertex { index } => write!(f, "base point coincides with prevertex {index}"),
        }
    }
}

/// All violated invariants; empty means the config is usable.
pub fn validate_config(cfg: &StripConfig) -> Vec<Finding> {
    let mut out = Vec::new();
    let n = cfg.lower.len() + cfg.upper.len();
    if cfg.angles.len() != n {
        out.push(Finding::AngleCount { angles: cfg.angles.len(), prevertices: n });
    }
    let expected = cfg.n_total() as i64 - 2;
    let sum = cfg.angle_sum();
    if sum != Rational64::from_integer(expected) {
        out.push(Finding::AngleSum { sum: sum.to_string(), expected });
    }
    for (index, a) in cfg.angles.iter().enumerate() {
        if *a <= Rational64::from_integer(0) {
            out.push(Finding::NonPositiveAngle { index });
        }
    }
    if cfg.alpha_minus < Rational64::from_integer(0) || cfg.alpha_plus < Rational64::from_integer(0) {
        out.push(Finding::NegativeEndAngle);
    }
    let pv: Vec<Complex64> = cfg
        .lower
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .chain(cfg.upper.iter().map(|&x| Complex64::new(x, 1.0)))
        .collect();
    for (index, z) in pv.iter().enumerate() {
        if !z.re.is_finite() {
            out.push(Finding::NonFinitePrevertex { index });
        }
    }
    for i in 0..pv.len() {
        for j in i + 1..pv.len() {
            if pv[i] == pv[j] {
                out.push(Finding::CoincidentPrevertices { first: i, second: j });
            }
        }
    }
    for (i, w) in cfg.lower.windows(2).enumerate() {
        if w[1] < w[0] {
            out.push(Finding::LowerNotIncreasing { index: i + 1 });
        }
    }
    for (i, w) in cfg.upper.windows(2).enumerate() {
        if w[1] > w[0] {
            out.push(Finding::UpperNotDecreasing { index: cfg.lower.len() + i + 1 });
        }
    }
    if !(cfg.z0.im > 0.0 && cfg.z0.im < 1.0 && cfg.z0.re.is_finite()) {
        out.push(Finding::BasePointOutside);
    }
    for (index, z) in pv.iter().enumerate() {
        if *z == cfg.z0 {
            out.push(Finding::BasePointAtPrevertex { index });
        }
    }
    out
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 5] = ["hexagon", "threeoo3s", "diamond", "rn_kerr", "superman"];

/// Default preset parameters; chosen for appearance only.
pub const DEFAULT_A: f64 = 1.0;
pub const DEFAULT_B: f64 = 0.5;

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Prevertex and angle tuples of the named Penrose–Carter foliations. The
/// tuples are read positionally; their `∓∞` entries are the strip ends.
///
/// - `hexagon`: maximally extended Schwarzschild, `(−∞, −a, a, +∞, a+i, −a+i)`
/// - `threeoo3s`: Schwarzschild without the white hole, `(−∞, −a, 0, a, +∞, b+i, −b+i)`, `0 < b < a`
/// - `diamond`: Minkowski-like, `(−∞, 0, +∞, i)`
/// - `rn_kerr`: Reissner–Nordström, `(−∞, −a, 0, a, +∞, i)`
/// - `superman`: non-primordial eternal black hole, `(−∞, 0, +∞, a+i, −a+i)`
pub fn preset(name: &str, a: f64, b: f64) -> Result<StripConfig, ScError> {
    let positive = |what: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(ScError::Constraint(format!("{what} must be a positive real, got {v}")))
        }
    };
    let half = q(1, 2);
    let cfg = match name {
        "hexagon" => {
            positive("a", a)?;
            StripConfig::new(vec![-a, a], vec![a, -a], vec![q(3, 4), q(3, 4), q(3, 4), q(3, 4)], half, half)
        }
        "threeoo3s" => {
            positive("a", a)?;
            positive("b", b)?;
            if b >= a {
                return Err(ScError::Constraint(format!("threeoo3s needs 0 < b < a, got a = {a}, b = {b}")));
            }
            StripConfig::new(vec![-a, 0.0, a], vec![b, -b], vec![half, q(3, 2), half, q(3, 4), q(3, 4)], half, half)
        }
        "diamond" => StripConfig::new(vec![0.0], vec![0.0], vec![half, half], half, half),
        "rn_kerr" => {
            positive("a", a)?;
            StripConfig::new(vec![-a, 0.0, a], vec![0.0], vec![half, q(3, 2), half, half], half, half)
        }
        "superman" => {
            positive("a", a)?;
            StripConfig::new(vec![0.0], vec![a, -a], vec![half, q(3, 4), q(3, 4)], half, half)
        }
        other => return Err(ScError::UnknownPreset(other.to_string())),
    };
    Ok(cfg)
}

/// The full listing-order angle tuple `(α₋, lower…, α₊, upper…)`.
pub fn listing_angles(cfg: &StripConfig) -> Vec<Rational64> {
    let nl = cfg.lower.len();
    let mut out = vec![cfg.alpha_minus];
    out.extend(&cfg.angles[..nl]);
    out.push(cfg.alpha_plus);
    out.extend(&cfg.angles[nl..]);
    out
}
