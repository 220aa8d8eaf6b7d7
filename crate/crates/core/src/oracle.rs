//! Ground-truth entropies and mutual informations for the ten-feature
//! benchmark.
//!
//! Four independent base variables X, Y, Z, W are either uniform on
//! `[-delta, delta]` (scenario I) or standard normal (scenario II). The class
//! is `C_k = 1` iff `X + kY >= 0`, and the features are
//!
//! | id  | feature | id  | feature |
//! |-----|---------|-----|---------|
//! | V1  | X       | V6  | Z^2     |
//! | V2  | aX + b  | V7  | Y       |
//! | V3  | Y^2     | V8  | X^2     |
//! | V4  | X - Y   | V9  | W + d   |
//! | V5  | Z       | V10 | Z + W   |
//!
//! Mutual information between a feature and a measurable function of it is
//! `+inf` for continuous variables; those entries are returned as
//! [`XReal::PosInf`].

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, SkewNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::quadrature::integrate_pieces;
use crate::selection::MiProvider;
use crate::xreal::XReal;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Absolute tolerance for the class-MI quadratures.
pub const CLASS_MI_TOL: f64 = 1e-6;

pub const N_FEATURES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Uniform base variables.
    #[serde(rename = "I")]
    Uniform,
    /// Standard normal base variables.
    #[serde(rename = "II")]
    Gaussian,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Uniform => "I",
            Scenario::Gaussian => "II",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" | "uniform" => Ok(Scenario::Uniform),
            "ii" | "2" | "gaussian" | "normal" => Ok(Scenario::Gaussian),
            other => Err(Error::InvalidScenario(format!(
                "unknown scenario `{other}` (expected I or II)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    /// Half-width of the uniform base variables (scenario I only).
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub k: f64,
}

impl ScenarioSpec {
    /// Default parameters `delta = 0.5, a = 3, b = 1, d = 2`.
    pub fn new(scenario: Scenario, k: f64) -> Result<Self> {
        let spec = ScenarioSpec {
            scenario,
            delta: 0.5,
            a: 3.0,
            b: 1.0,
            d: 2.0,
            k,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k < 1.0) {
            return Err(Error::InvalidK(self.k));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if self.a == 0.0 || !self.a.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "a must be nonzero, got {}",
                self.a
            )));
        }
        if !self.b.is_finite() || !self.d.is_finite() {
            return Err(Error::InvalidScenario("b and d must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureId {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    V9,
    V10,
}

const LABELS: [&str; N_FEATURES] = ["X", "3X+1", "Y2", "X-Y", "Z", "Z2", "Y", "X2", "W+2", "Z+W"];

impl FeatureId {
    pub const ALL: [FeatureId; N_FEATURES] = [
        FeatureId::V1,
        FeatureId::V2,
        FeatureId::V3,
        FeatureId::V4,
        FeatureId::V5,
        FeatureId::V6,
        FeatureId::V7,
        FeatureId::V8,
        FeatureId::V9,
        FeatureId::V10,
    ];

    /// Zero-based position in the fixed V1..V10 order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<FeatureId> {
        FeatureId::ALL.get(i).copied()
    }

    /// Short label with the default parameters, e.g. `X-Y` or `Y2`.
    pub fn label(self) -> &'static str {
        LABELS[self.index()]
    }

    /// `V1` .. `V10`.
    pub fn name(self) -> String {
        format!("V{}", self.index() + 1)
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FeatureId {
    type Err = Error;
    /// Accepts `V4`, `v4` or a label such as `X-Y`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(num) = t.strip_prefix(['V', 'v']) {
            if let Ok(n) = num.parse::<usize>() {
                if let Some(f) = n.checked_sub(1).and_then(FeatureId::from_index) {
                    return Ok(f);
                }
            }
        }
        let norm = t.replace(['^', ' '], "");
        FeatureId::ALL
            .into_iter()
            .find(|f| f.label().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| Error::InvalidSubset(format!("unknown feature `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewNormalParams {
    pub location: f64,
    pub scale: f64,
    pub shape: f64,
}

impl SkewNormalParams {
    pub fn new(location: f64, scale: f64, shape: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() || !location.is_finite() || !shape.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "skew normal needs finite parameters and positive scale, got ({location}, {scale}, {shape})"
            )));
        }
        Ok(SkewNormalParams {
            location,
            scale,
            shape,
        })
    }

    /// Analytic mean `location + scale * delta * sqrt(2/pi)`.
    pub fn mean(&self) -> f64 {
        let delta = self.shape / (1.0 + self.shape * self.shape).sqrt();
        self.location + self.scale * delta * (2.0 / PI).sqrt()
    }
}

pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// `(2/sigma) phi((x-mu)/sigma) Phi(alpha (x-mu)/sigma)`.
pub fn skewnormal_pdf(p: &SkewNormalParams, x: f64) -> f64 {
    let z = (x - p.location) / p.scale;
    2.0 / p.scale * std_normal_pdf(z) * std_normal_cdf(p.shape * z)
}

pub fn skewnormal_sample<R: Rng + ?Sized>(p: &SkewNormalParams, rng: &mut R) -> f64 {
    SkewNormal::new(p.location, p.scale, p.shape)
        .expect("parameters validated at construction")
        .sample(rng)
}

/// Differential entropy of a feature.
pub fn entropy_of(spec: &ScenarioSpec, f: FeatureId) -> XReal {
    use FeatureId::*;
    let v = match spec.scenario {
        Scenario::Uniform => {
            let h_unif = (2.0 * spec.delta).ln();
            match f {
                V1 | V5 | V7 | V9 => h_unif,
                V2 => (2.0 * spec.a.abs() * spec.delta).ln(),
                V3 | V6 | V8 => (2.0 * spec.delta * spec.delta).ln() - 1.0,
                V4 | V10 => 0.5 + h_unif,
            }
        }
        Scenario::Gaussian => {
            let two_pi_e = 2.0 * PI * std::f64::consts::E;
            match f {
                V1 | V5 | V7 | V9 => 0.5 * two_pi_e.ln(),
                V2 => 0.5 * (two_pi_e * spec.a * spec.a).ln(),
                V3 | V6 | V8 => 0.5 * (1.0 + PI.ln() - EULER_GAMMA),
                V4 | V10 => 0.5 * (2.0 * two_pi_e).ln(),
            }
        }
    };
    XReal::from_f64(v)
}

/// MI between the class and a feature.
///
/// Scenario I uses closed forms valid for `delta = 0.5`; other half-widths
/// are rejected. Scenario II integrates the skew-normal class conditionals.
pub fn class_mi(spec: &ScenarioSpec, f: FeatureId) -> Result<f64> {
    spec.validate()?;
    let k = spec.k;
    match spec.scenario {
        Scenario::Uniform => {
            if spec.delta != 0.5 {
                return Err(Error::UnsupportedDelta(spec.delta));
            }
            Ok(match f {
                FeatureId::V1 | FeatureId::V2 => -k / 2.0 + LN_2,
                FeatureId::V4 => -(k - 1.0).powi(2) * (1.0 - k).ln() / (4.0 * k),
                FeatureId::V7 => {
                    ((k * k + 1.0) * ((1.0 + k) / (1.0 - k)).ln()
                        + 2.0 * k * ((1.0 - k * k).ln() - 1.0))
                        / (4.0 * k)
                }
                _ => 0.0,
            })
        }
        Scenario::Gaussian => Ok(match gaussian_class_conditional(f, k) {
            Some(p) => skew_class_mi(&p, CLASS_MI_TOL),
            None => 0.0,
        }),
    }
}

/// Class-1 conditional of a class-dependent feature in scenario II, reduced
/// by location/scale invariance to a centred skew normal.
fn gaussian_class_conditional(f: FeatureId, k: f64) -> Option<SkewNormalParams> {
    let (scale, shape) = match f {
        FeatureId::V1 | FeatureId::V2 => (1.0, 1.0 / k),
        FeatureId::V7 => (1.0, k),
        FeatureId::V4 => (SQRT_2, (1.0 - k) / (1.0 + k)),
        _ => return None,
    };
    Some(SkewNormalParams {
        location: 0.0,
        scale,
        shape,
    })
}

/// MI between a balanced binary class and a variable whose class-1
/// conditional is `SN(0, s, alpha)` and class-0 conditional `SN(0, s, -alpha)`.
/// The mixture is then `N(0, s^2)`, so
/// `MI = 1/2 sum_c int f_c ln(f_c / f) = int f_1(x) ln(2 Phi(alpha x / s)) dx`
/// after using the mirror symmetry of the two conditionals.
pub fn skew_class_mi(p: &SkewNormalParams, tol: f64) -> f64 {
    let s = p.scale;
    let class_one = |x: f64| {
        let f1 = skewnormal_pdf(p, x);
        if f1 == 0.0 {
            return 0.0;
        }
        let z = p.shape * (x - p.location) / s;
        f1 * erfc(-z / SQRT_2).ln()
    };
    let class_zero = |x: f64| {
        let mirror = SkewNormalParams {
            shape: -p.shape,
            ..*p
        };
        let f0 = skewnormal_pdf(&mirror, x);
        if f0 == 0.0 {
            return 0.0;
        }
        let z = -p.shape * (x - p.location) / s;
        f0 * erfc(-z / SQRT_2).ln()
    };
    let pts = [p.location - 8.0 * s, p.location, p.location + 8.0 * s];
    0.5 * integrate_pieces(class_one, &pts, tol / 2.0) + 0.5 * integrate_pieces(class_zero, &pts, tol / 2.0)
}

fn pair_kind(i: FeatureId, j: FeatureId) -> PairKind {
    use FeatureId::*;
    if i == j {
        return PairKind::Functional;
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    match (lo, hi) {
        (V1, V2) | (V1, V8) | (V2, V8) | (V3, V7) | (V5, V6) => PairKind::Functional,
        (V1, V4) | (V2, V4) | (V4, V7) | (V5, V10) | (V9, V10) => PairKind::Linear,
        (V3, V4) | (V4, V8) | (V6, V10) => PairKind::Square,
        _ => PairKind::Independent,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairKind {
    Independent,
    Functional,
    /// Pairs like (X, X - Y).
    Linear,
    /// Pairs like (Y^2, X - Y).
    Square,
}

/// MI between two features. Symmetric, `+inf` for functionally related pairs.
pub fn pairwise_mi(spec: &ScenarioSpec, i: FeatureId, j: FeatureId) -> XReal {
    match (pair_kind(i, j), spec.scenario) {
        (PairKind::Independent, _) => XReal::ZERO,
        (PairKind::Functional, _) => XReal::PosInf,
        (PairKind::Linear, Scenario::Uniform) => XReal::Finite(0.5),
        (PairKind::Linear, Scenario::Gaussian) => XReal::Finite(LN_2 / 2.0),
        (PairKind::Square, Scenario::Uniform) => XReal::Finite((1.0 - LN_2) / 2.0),
        (PairKind::Square, Scenario::Gaussian) => XReal::Finite(mi_y2_xy_ii()),
    }
}

/// `ln cosh t` without overflow.
pub fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// MI(Y^2, X - Y) for independent standard normals:
/// `-1 + ln 2 / 2 + E[ln cosh((X - Y)|Y|)]`, the expectation evaluated by
/// nested quadrature on `[-8, 8]^2`. Computed once and cached.
pub fn mi_y2_xy_ii() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| -1.0 + LN_2 / 2.0 + expected_ln_cosh(1e-9))
}

fn expected_ln_cosh(tol: f64) -> f64 {
    let inner = |y: f64| {
        let ay = y.abs();
        let g = |x: f64| std_normal_pdf(x) * ln_cosh((x - y) * ay);
        let lo = -8.0f64;
        let hi = 8.0f64;
        let mid = y.clamp(lo, hi);
        std_normal_pdf(y) * integrate_pieces(g, &[lo, mid, hi], tol)
    };
    integrate_pieces(inner, &[-8.0, 0.0, 8.0], tol)
}

/// Base distribution of X and Y for the class-independence check on X^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseDistribution {
    Uniform { delta: f64 },
    Normal,
}

impl BaseDistribution {
    fn pdf(&self, x: f64) -> f64 {
        match *self {
            BaseDistribution::Uniform { delta } => {
                if x.abs() <= delta {
                    0.5 / delta
                } else {
                    0.0
                }
            }
            BaseDistribution::Normal => std_normal_pdf(x),
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        match *self {
            BaseDistribution::Uniform { delta } => ((x + delta) / (2.0 * delta)).clamp(0.0, 1.0),
            BaseDistribution::Normal => std_normal_cdf(x),
        }
    }
}

/// Numerically evaluates MI(C_k, X^2) from the class-conditional densities
/// of `|X|` (a one-to-one image of `X^2`). The base distribution is assumed
/// symmetric, which is exactly the hypothesis of the independence result;
/// the integral is computed without using that symmetry.
pub fn square_class_mi(k: f64, base: BaseDistribution) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::InvalidK(k));
    }
    if let BaseDistribution::Uniform { delta } = base {
        if !(delta > 0.0) {
            return Err(Error::InvalidScenario(format!("delta must be positive, got {delta}")));
        }
    }
    let pts: Vec<f64> = match base {
        BaseDistribution::Uniform { delta } => vec![0.0, k * delta, delta],
        BaseDistribution::Normal => vec![0.0, 8.0],
    };
    let tol = 1e-10;
    // Unnormalised class-1 and class-0 densities of V = |X|.
    let w1 = |v: f64| base.pdf(v) * (1.0 - base.cdf(-v / k)) + base.pdf(-v) * (1.0 - base.cdf(v / k));
    let w0 = |v: f64| base.pdf(v) * base.cdf(-v / k) + base.pdf(-v) * base.cdf(v / k);
    let g = |v: f64| base.pdf(v) + base.pdf(-v);
    let p1 = integrate_pieces(w1, &pts, tol);
    let p0 = integrate_pieces(w0, &pts, tol);
    let term = |w: &dyn Fn(f64) -> f64, pc: f64| {
        integrate_pieces(
            |v| {
                let gc = w(v) / pc;
                let gv = g(v);
                if gc > 0.0 && gv > 0.0 {
                    gc * (gc / gv).ln()
                } else {
                    0.0
                }
            },
            &pts,
            tol,
        )
    };
    Ok(p1 * term(&w1, p1) + p0 * term(&w0, p0))
}

/// Oracle values for one scenario, computed eagerly at construction.
#[derive(Debug, Clone)]
pub struct OracleProvider {
    spec: ScenarioSpec,
    entropy: [XReal; N_FEATURES],
    class: [XReal; N_FEATURES],
    pairwise: [[XReal; N_FEATURES]; N_FEATURES],
}

pub fn oracle_provider(spec: &ScenarioSpec) -> Result<OracleProvider> {
    spec.validate()?;
    let mut entropy = [XReal::ZERO; N_FEATURES];
    let mut class = [XReal::ZERO; N_FEATURES];
    let mut pairwise = [[XReal::ZERO; N_FEATURES]; N_FEATURES];
    for f in FeatureId::ALL {
        entropy[f.index()] = entropy_of(spec, f);
        class[f.index()] = if f == FeatureId::V2 {
            class[0]
        } else {
            XReal::from_f64(class_mi(spec, f)?)
        };
        for g in FeatureId::ALL {
            pairwise[f.index()][g.index()] = pairwise_mi(spec, f, g);
        }
    }
    Ok(OracleProvider {
        spec: *spec,
        entropy,
        class,
        pairwise,
    })
}

impl OracleProvider {
    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }
}

impl MiProvider for OracleProvider {
    fn n_features(&self) -> usize {
        N_FEATURES
    }
    fn feature_name(&self, i: usize) -> String {
        FeatureId::ALL[i].label().to_string()
    }
    fn entropy(&self, i: usize) -> XReal {
        self.entropy[i]
    }
    fn class_mi(&self, i: usize) -> XReal {
        self.class[i]
    }
    fn pairwise_mi(&self, i: usize, j: usize) -> XReal {
        self.pairwise[i][j]
    }
}
