//! Extended-real arithmetic with typed indeterminate forms.
//!
//! Objective functions of the selection criteria mix entropies that can be
//! zero or negative with mutual informations that can be `+inf`. Evaluating
//! them with IEEE floats silently yields NaN or a wrong sign; [`XReal`]
//! instead keeps infinities symbolic and records *which* undefined form was
//! hit. An indeterminate value absorbs every operation it takes part in.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// The undefined arithmetic outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndetKind {
    ZeroTimesInf,
    InfMinusInf,
    ZeroOverZero,
    InfOverInf,
}

impl IndetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IndetKind::ZeroTimesInf => "0*inf",
            IndetKind::InfMinusInf => "inf-inf",
            IndetKind::ZeroOverZero => "0/0",
            IndetKind::InfOverInf => "inf/inf",
        }
    }
}

/// A value on the extended real line, or a tagged indeterminate form.
///
/// `Finite` never holds NaN or an infinite float, and never holds `-0.0`
/// (zeros are unsigned, so `x / 0` takes its sign from `x` alone).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XReal {
    Finite(f64),
    PosInf,
    NegInf,
    Indet(IndetKind),
}

impl XReal {
    pub const ZERO: XReal = XReal::Finite(0.0);

    /// Maps a host float onto the extended reals: `±inf` become the symbolic
    /// infinities and `-0.0` becomes `0.0`.
    ///
    /// # Panics
    ///
    /// On NaN input; a NaN reaching this point is a bug upstream.
    pub fn from_f64(v: f64) -> XReal {
        assert!(!v.is_nan(), "NaN cannot be represented as an XReal");
        if v == f64::INFINITY {
            XReal::PosInf
        } else if v == f64::NEG_INFINITY {
            XReal::NegInf
        } else if v == 0.0 {
            XReal::ZERO
        } else {
            XReal::Finite(v)
        }
    }

    /// Finite constructor that keeps the invariants. Overflowing host
    /// arithmetic saturates into the matching symbolic infinity.
    fn finite(v: f64) -> XReal {
        XReal::from_f64(v)
    }

    pub fn is_indet(self) -> bool {
        matches!(self, XReal::Indet(_))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, XReal::Finite(_))
    }

    pub fn is_zero(self) -> bool {
        matches!(self, XReal::Finite(v) if v == 0.0)
    }

    pub fn finite_value(self) -> Option<f64> {
        match self {
            XReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Host-float view; indeterminate forms become NaN.
    pub fn to_f64(self) -> f64 {
        match self {
            XReal::Finite(v) => v,
            XReal::PosInf => f64::INFINITY,
            XReal::NegInf => f64::NEG_INFINITY,
            XReal::Indet(_) => f64::NAN,
        }
    }

    /// -1, 0 or +1 for non-indeterminate values.
    fn signum(self) -> Option<i8> {
        match self {
            XReal::Finite(v) if v > 0.0 => Some(1),
            XReal::Finite(v) if v < 0.0 => Some(-1),
            XReal::Finite(_) => Some(0),
            XReal::PosInf => Some(1),
            XReal::NegInf => Some(-1),
            XReal::Indet(_) => None,
        }
    }

    fn signed_inf(sign: i8) -> XReal {
        if sign > 0 {
            XReal::PosInf
        } else {
            XReal::NegInf
        }
    }

    pub fn xadd(self, rhs: XReal) -> XReal {
        use XReal::*;
        match (self, rhs) {
            (Indet(k), _) | (_, Indet(k)) => Indet(k),
            (PosInf, NegInf) | (NegInf, PosInf) => Indet(IndetKind::InfMinusInf),
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => XReal::finite(a + b),
        }
    }

    pub fn xsub(self, rhs: XReal) -> XReal {
        self.xadd(rhs.xneg())
    }

    pub fn xneg(self) -> XReal {
        match self {
            XReal::Finite(v) => XReal::finite(-v),
            XReal::PosInf => XReal::NegInf,
            XReal::NegInf => XReal::PosInf,
            indet => indet,
        }
    }

    pub fn xmul(self, rhs: XReal) -> XReal {
        use XReal::*;
        match (self, rhs) {
            (Indet(k), _) | (_, Indet(k)) => Indet(k),
            (Finite(a), Finite(b)) => XReal::finite(a * b),
            (a, b) => {
                // at least one infinity
                let sa = a.signum().unwrap_or(0);
                let sb = b.signum().unwrap_or(0);
                if sa == 0 || sb == 0 {
                    Indet(IndetKind::ZeroTimesInf)
                } else {
                    XReal::signed_inf(sa * sb)
                }
            }
        }
    }

    pub fn xdiv(self, rhs: XReal) -> XReal {
        use XReal::*;
        match (self, rhs) {
            (Indet(k), _) | (_, Indet(k)) => Indet(k),
            (PosInf | NegInf, PosInf | NegInf) => Indet(IndetKind::InfOverInf),
            (Finite(_), PosInf | NegInf) => XReal::ZERO,
            (num, den) if den.is_zero() => match num.signum() {
                Some(0) => Indet(IndetKind::ZeroOverZero),
                Some(s) => XReal::signed_inf(s),
                None => unreachable!(),
            },
            (PosInf | NegInf, Finite(b)) => {
                let s = num_sign(self) * if b > 0.0 { 1 } else { -1 };
                XReal::signed_inf(s)
            }
            (Finite(a), Finite(b)) => XReal::finite(a / b),
        }
    }

    /// Maximum with indeterminate absorption: if either side is
    /// indeterminate, so is the result.
    pub fn xmax(self, rhs: XReal) -> XReal {
        match (self, rhs) {
            (XReal::Indet(k), _) | (_, XReal::Indet(k)) => XReal::Indet(k),
            (a, b) => {
                if a.order(b) == Ordering::Less {
                    b
                } else {
                    a
                }
            }
        }
    }

    pub fn xmin(self, rhs: XReal) -> XReal {
        match (self, rhs) {
            (XReal::Indet(k), _) | (_, XReal::Indet(k)) => XReal::Indet(k),
            (a, b) => {
                if b.order(a) == Ordering::Less {
                    b
                } else {
                    a
                }
            }
        }
    }

    /// Total order on the extended reals: `-inf < finite < +inf`.
    ///
    /// # Panics
    ///
    /// If either operand is indeterminate. Use [`XReal::try_order`] when that
    /// is a legitimate possibility.
    pub fn order(self, rhs: XReal) -> Ordering {
        self.try_order(rhs)
            .expect("indeterminate XReal values are not ordered")
    }

    pub fn try_order(self, rhs: XReal) -> Option<Ordering> {
        use XReal::*;
        match (self, rhs) {
            (Indet(_), _) | (_, Indet(_)) => None,
            (Finite(a), Finite(b)) => a.partial_cmp(&b),
            (PosInf, PosInf) | (NegInf, NegInf) => Some(Ordering::Equal),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (PosInf, _) | (_, NegInf) => Some(Ordering::Greater),
        }
    }
}

fn num_sign(x: XReal) -> i8 {
    x.signum().expect("sign of indeterminate value")
}

/// Left fold of [`XReal::xadd`] starting from zero.
pub fn xsum<I: IntoIterator<Item = XReal>>(values: I) -> XReal {
    values.into_iter().fold(XReal::ZERO, XReal::xadd)
}

/// Left fold of [`XReal::xmax`]; `None` for an empty input.
pub fn xmax_all<I: IntoIterator<Item = XReal>>(values: I) -> Option<XReal> {
    values.into_iter().reduce(XReal::xmax)
}

impl From<f64> for XReal {
    fn from(v: f64) -> Self {
        XReal::from_f64(v)
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_order(*other)
    }
}

impl Add for XReal {
    type Output = XReal;
    fn add(self, rhs: XReal) -> XReal {
        self.xadd(rhs)
    }
}

impl Sub for XReal {
    type Output = XReal;
    fn sub(self, rhs: XReal) -> XReal {
        self.xsub(rhs)
    }
}

impl Mul for XReal {
    type Output = XReal;
    fn mul(self, rhs: XReal) -> XReal {
        self.xmul(rhs)
    }
}

impl Div for XReal {
    type Output = XReal;
    fn div(self, rhs: XReal) -> XReal {
        self.xdiv(rhs)
    }
}

impl Neg for XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        self.xneg()
    }
}

impl Sum for XReal {
    fn sum<I: Iterator<Item = XReal>>(iter: I) -> XReal {
        xsum(iter)
    }
}

impl fmt::Display for XReal {
    /// Finite values honour the formatter precision (`{:.4}`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XReal::Finite(v) => match f.precision() {
                Some(p) => write!(f, "{:.*}", p, v),
                None => write!(f, "{}", v),
            },
            XReal::PosInf => f.write_str("+inf"),
            XReal::NegInf => f.write_str("-inf"),
            XReal::Indet(k) => write!(f, "indet({})", k.as_str()),
        }
    }
}

/// Finite values serialize as JSON numbers, everything else as its text form.
impl serde::Serialize for XReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            XReal::Finite(v) => s.serialize_f64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}
