//! Double-double arithmetic backing the extended precision backend.
//!
//! Multiplication, division and square root come from [`qd::Quad`]. Addition
//! goes through the accurate two-sum path so that subtractions of nearly
//! equal values keep their relative accuracy, which the kinetic-energy and
//! rapidity formulas depend on.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use qd::Quad;

use super::{Real, ScalarBackend};

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`, about 106 bits.
#[derive(Clone, Copy, PartialEq)]
pub struct Extended(Quad);

const LN_2: Extended = Extended(Quad(std::f64::consts::LN_2, 2.3190468138462996e-17));

impl Extended {
    pub const ZERO: Extended = Extended(Quad(0.0, 0.0));
    pub const ONE: Extended = Extended(Quad(1.0, 0.0));
    pub const PI: Extended = Extended(Quad(std::f64::consts::PI, 1.2246467991473532e-16));
    /// 2^-104.
    pub const EPSILON: f64 = f64::EPSILON * f64::EPSILON;

    #[inline]
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Extended(Quad(hi, lo))
    }

    #[inline]
    pub const fn hi(self) -> f64 {
        self.0 .0
    }

    #[inline]
    pub const fn lo(self) -> f64 {
        self.0 .1
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi() < 0.0 || (self.hi() == 0.0 && self.lo() < 0.0)
    }

    /// Exact scaling by a power of two.
    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Extended(Quad(self.hi() * s, self.lo() * s))
    }

    /// Largest integer not greater than `self`, for values below 2^53.
    fn floor(self) -> Self {
        let hi = self.hi().floor();
        if hi == self.hi() {
            Extended::from_parts(hi, self.lo().floor()).renormalized()
        } else {
            Extended::from(hi)
        }
    }

    fn renormalized(self) -> Self {
        let s = self.hi() + self.lo();
        let e = self.lo() - (s - self.hi());
        Extended::from_parts(s, e)
    }

    fn powi10(n: u32) -> Self {
        let mut result = Extended::ONE;
        let mut base = Extended::from(10.0);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            n >>= 1;
        }
        result
    }

    /// `expm1` on `|x| <= ln(2) / 2` by a scaled Taylor series followed by
    /// repeated doubling through `e^{2s} - 1 = y (y + 2)`.
    fn exp_m1_reduced(x: Self) -> Self {
        const DOUBLINGS: i32 = 8;
        let s = x.ldexp(-DOUBLINGS);
        let mut term = s;
        let mut sum = s;
        let mut n = 2.0;
        while term.hi().abs() > sum.hi().abs() * 1e-34 {
            term = term * s / Extended::from(n);
            sum += term;
            n += 1.0;
        }
        let two = Extended::from(2.0);
        for _ in 0..DOUBLINGS {
            sum = sum * (sum + two);
        }
        sum
    }

    pub fn exp_m1(self) -> Self {
        if self.hi() == 0.0 {
            return self;
        }
        if self.hi().abs() <= 0.34 {
            return Self::exp_m1_reduced(self);
        }
        if self.hi() > 709.0 {
            return Extended::from(f64::INFINITY);
        }
        if self.hi() < -745.0 {
            return -Extended::ONE;
        }
        let k = (self.hi() / LN_2.hi()).round();
        let r = self - LN_2 * Extended::from(k);
        let e = (Self::exp_m1_reduced(r) + Extended::ONE).ldexp(k as i32);
        e - Extended::ONE
    }

    /// `ln(1 + x)` by Newton refinement of the binary64 estimate against
    /// [`Extended::exp_m1`].
    pub fn ln_1p(self) -> Self {
        if self.hi() == 0.0 {
            return self;
        }
        if !(self.hi() > -1.0) {
            return Extended::from(f64::NAN);
        }
        if self.hi() == f64::INFINITY {
            return self;
        }
        let mut y = Extended::from(self.hi().ln_1p());
        for _ in 0..2 {
            let e = y.exp_m1();
            y -= (e - self) / (e + Extended::ONE);
        }
        y
    }

    pub fn sqrt(self) -> Self {
        if self.hi() <= 0.0 {
            return if self.hi() == 0.0 {
                Extended::ZERO
            } else {
                Extended::from(f64::NAN)
            };
        }
        Extended(self.0.sqrt())
    }

    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi().is_finite() && self.lo().is_finite()
    }

    /// Parses a decimal literal with up to ~38 significant digits.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let mut digits: u128 = 0;
        let mut scale = exponent;
        let mut significant = 0;
        for c in int_part.chars().chain(frac_part.chars()) {
            if !c.is_ascii_digit() {
                return None;
            }
            if significant < 38 {
                digits = digits * 10 + u128::from(c as u8 - b'0');
                if digits != 0 {
                    significant += 1;
                }
            } else {
                scale += 1;
            }
        }
        scale -= frac_part.len() as i32;
        let mut value = from_u128(digits);
        if scale > 0 {
            value = value * Extended::powi10(scale as u32);
        } else if scale < 0 {
            value = value / Extended::powi10((-scale) as u32);
        }
        if !value.is_finite() {
            return None;
        }
        Some(if negative { -value } else { value })
    }

    /// Scientific notation, `d.ddd…e±x`, mirroring the layout of `{:e}` on `f64`.
    pub fn to_sci(self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.hi().is_nan() {
            return "NaN".to_owned();
        }
        if self.hi().is_infinite() {
            return if self.hi() > 0.0 { "inf" } else { "-inf" }.to_owned();
        }
        let negative = self.is_sign_negative();
        let x = self.abs();
        if x.hi() == 0.0 {
            return format!("{}{}", if negative { "-" } else { "" }, 0f64.to_sci(digits));
        }
        let mut exp10 = x.hi().log10().floor() as i32;
        let mut y = x.scale10(-exp10);
        if y.hi() >= 10.0 {
            y = y / Extended::from(10.0);
            exp10 += 1;
        } else if y.hi() < 1.0 {
            y = y * Extended::from(10.0);
            exp10 -= 1;
        }
        let ten = Extended::from(10.0);
        let mut out: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = y.floor().hi().clamp(0.0, 9.0);
            out.push(d as u8);
            y = (y - Extended::from(d)) * ten;
        }
        // Round half up on the guard digit, then propagate the carry.
        let guard = out.pop().unwrap_or(0);
        if guard >= 5 {
            let mut i = out.len();
            loop {
                if i == 0 {
                    out.insert(0, 1);
                    out.pop();
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if out[i] == 9 {
                    out[i] = 0;
                } else {
                    out[i] += 1;
                    break;
                }
            }
        }
        let mut s = String::with_capacity(digits + 8);
        if negative {
            s.push('-');
        }
        s.push((b'0' + out[0]) as char);
        if digits > 1 {
            s.push('.');
            s.extend(out[1..].iter().map(|d| (b'0' + d) as char));
        }
        s.push_str(&format!("e{exp10:+}"));
        s
    }

    fn scale10(self, k: i32) -> Self {
        match k.cmp(&0) {
            Ordering::Equal => self,
            Ordering::Greater => self * Extended::powi10(k as u32),
            Ordering::Less => self / Extended::powi10((-k) as u32),
        }
    }
}

fn from_u128(n: u128) -> Extended {
    let hi = n as f64;
    // `hi` is the correctly rounded value; the remainder fits in 64 bits of
    // signed magnitude for any n < 2^128.
    let rem = n as i128 - hi as i128;
    Extended::from(hi) + Extended::from(rem as f64)
}

impl From<f64> for Extended {
    #[inline]
    fn from(x: f64) -> Self {
        Extended(Quad(x, 0.0))
    }
}

impl fmt::Debug for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Extended({})", self.to_sci(34))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(f.precision().map_or(32, |p| p + 1)))
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi().partial_cmp(&other.hi())? {
            Ordering::Equal => self.lo().partial_cmp(&other.lo()),
            ord => Some(ord),
        }
    }
}

impl Add for Extended {
    type Output = Extended;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Extended(self.0.add_accurate(rhs.0))
    }
}

impl Sub for Extended {
    type Output = Extended;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Extended(self.0.sub_accurate(rhs.0))
    }
}

impl Mul for Extended {
    type Output = Extended;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Extended(self.0 * rhs.0)
    }
}

impl Div for Extended {
    type Output = Extended;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        Extended(self.0 / rhs.0)
    }
}

impl Neg for Extended {
    type Output = Extended;
    #[inline]
    fn neg(self) -> Self {
        Extended(-self.0)
    }
}

impl AddAssign for Extended {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Extended {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Real for Extended {
    const BACKEND: ScalarBackend = ScalarBackend::Extended;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Extended::from(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Extended::to_f64(self)
    }
    #[inline]
    fn from_extended(x: Extended) -> Self {
        x
    }
    #[inline]
    fn to_extended(self) -> Extended {
        self
    }
    fn sqrt(self) -> Self {
        Extended::sqrt(self)
    }
    fn abs(self) -> Self {
        Extended::abs(self)
    }
    fn exp_m1(self) -> Self {
        Extended::exp_m1(self)
    }
    fn ln_1p(self) -> Self {
        Extended::ln_1p(self)
    }
    fn is_finite(self) -> bool {
        Extended::is_finite(self)
    }
    fn pi() -> Self {
        Extended::PI
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        Extended::parse_decimal(s)
    }
    fn to_sci(self, digits: usize) -> String {
        Extended::to_sci(self, digits)
    }
}
