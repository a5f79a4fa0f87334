//! Precision backends.
//!
//! Every simulation runs under exactly one [`ScalarBackend`]. The backend is
//! selected at compile time through the [`Real`] type parameter carried by the
//! kinematics, collision and transfer APIs: `f64` for the standard backend and
//! [`Extended`] (double-double) for the extended one.

mod extended;

pub use extended::Extended;

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Precision contract a simulation runs under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalarBackend {
    /// IEEE-754 binary64, at least 15 significant decimal digits.
    Standard,
    /// Double-double arithmetic, at least 30 significant decimal digits.
    Extended,
}

impl ScalarBackend {
    /// Guaranteed significant decimal digits of a single rounded operation.
    pub const fn significant_digits(self) -> u32 {
        match self {
            ScalarBackend::Standard => 15,
            ScalarBackend::Extended => 31,
        }
    }

    /// Digits used when emitting numbers in reproducible text output.
    pub const fn output_digits(self) -> usize {
        match self {
            ScalarBackend::Standard => 17,
            ScalarBackend::Extended => 34,
        }
    }

    /// Relative conservation tolerance for a single collision.
    pub const fn conservation_tolerance(self) -> f64 {
        match self {
            ScalarBackend::Standard => 1e-12,
            ScalarBackend::Extended => 1e-26,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            ScalarBackend::Standard => "standard",
            ScalarBackend::Extended => "extended",
        }
    }
}

impl fmt::Display for ScalarBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown precision `{0}` (expected `standard` or `extended`)")]
pub struct UnknownBackend(pub String);

impl FromStr for ScalarBackend {
    type Err = UnknownBackend;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(ScalarBackend::Standard),
            "extended" => Ok(ScalarBackend::Extended),
            other => Err(UnknownBackend(other.to_owned())),
        }
    }
}

/// Real-number arithmetic required by the simulation.
///
/// Implementations must provide correctly rounded (or faithfully rounded)
/// `exp_m1` and `ln_1p`; the rapidity arithmetic in [`crate::kinematics`]
/// relies on them to stay accurate both at rest and near the speed of light.
pub trait Real:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: ScalarBackend;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_extended(x: Extended) -> Self;
    fn to_extended(self) -> Extended;

    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    /// `e^x - 1`, accurate for small `|x|`.
    fn exp_m1(self) -> Self;
    /// `ln(1 + x)`, accurate for small `|x|`.
    fn ln_1p(self) -> Self;
    fn is_finite(self) -> bool;
    fn pi() -> Self;

    /// Parses a decimal literal (`0.6`, `2e-6`, `-1.5E+3`) at full backend precision.
    fn parse_decimal(s: &str) -> Option<Self>;
    /// Scientific notation with `digits` significant digits and a signed
    /// exponent, e.g. `1.2500000000000000e+0`.
    fn to_sci(self, digits: usize) -> String;

    #[inline]
    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    #[inline]
    fn one() -> Self {
        Self::from_f64(1.0)
    }

    #[inline]
    fn two() -> Self {
        Self::from_f64(2.0)
    }

    #[inline]
    fn half(self) -> Self {
        self * Self::from_f64(0.5)
    }

    #[inline]
    fn recip(self) -> Self {
        Self::one() / self
    }

    #[inline]
    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Formats with the backend's reproducible output width.
    fn to_output(self) -> String {
        self.to_sci(Self::BACKEND.output_digits())
    }
}

impl Real for f64 {
    const BACKEND: ScalarBackend = ScalarBackend::Standard;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn from_extended(x: Extended) -> Self {
        x.to_f64()
    }
    #[inline]
    fn to_extended(self) -> Extended {
        Extended::from(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn exp_m1(self) -> Self {
        f64::exp_m1(self)
    }
    #[inline]
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        let x: f64 = s.trim().parse().ok()?;
        x.is_finite().then_some(x)
    }

    fn to_sci(self, digits: usize) -> String {
        let s = format!("{:.*e}", digits.saturating_sub(1), self);
        match s.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => s,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_round_trips_through_its_name() {
        for b in [ScalarBackend::Standard, ScalarBackend::Extended] {
            assert_eq!(b.name().parse::<ScalarBackend>().unwrap(), b);
        }
        assert!("quad".parse::<ScalarBackend>().is_err());
    }

    #[test]
    fn f64_sci_has_seventeen_digits() {
        assert_eq!(0.5f64.to_output(), "5.0000000000000000e-1");
        assert_eq!(2e-6f64.to_output(), "1.9999999999999999e-6");
        assert_eq!(100f64.to_output(), "1.0000000000000000e+2");
        assert_eq!(f64::INFINITY.to_output(), "inf");
    }
}
