//! Scalar backends: exact rationals and `f64`.
//!
//! Every algebraic routine in this crate is generic over [`Scalar`]. Zero
//! tests always go through [`Scalar::is_negligible`], which is an exact
//! comparison on the rational backend and a tolerance test on floats.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always stored gcd-reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Pivot tolerance used by elimination routines on the float backend.
pub const FLOAT_PIVOT_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for the error-free rational backend.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// `n / d`; panics if `d == 0`.
    fn from_ratio(n: i64, d: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// The exact value, on the rational backend only.
    fn to_rational(&self) -> Option<Rational>;

    fn abs(&self) -> Self;

    /// Zero test: exact on rationals, `|x| <= tol` on floats.
    fn is_negligible(&self, tol: f64) -> bool;

    /// Square root if it exists in the backend (perfect squares only on
    /// rationals). `None` for negative input.
    fn sqrt(&self) -> Option<Self>;

    /// Tolerance to use when the caller did not supply one.
    fn default_tol() -> f64 {
        if Self::EXACT {
            0.0
        } else {
            FLOAT_PIVOT_TOL
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        n as f64 / d as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rational::new(n, d))
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = num_integer::Roots::sqrt(n);
    (&r * &r == *n).then_some(r)
}

/// Correctly scaled conversion that does not overflow for huge numerators
/// and denominators whose ratio is representable.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(x) = ToPrimitive::to_f64(r) {
        if x.is_finite() && (x != 0.0 || r.is_zero()) {
            return x;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs_rational(r).exp()
}

/// Natural log of `|r|`, computed from bit lengths so it never overflows.
pub fn ln_abs_rational(r: &Rational) -> f64 {
    fn ln_bigint(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits <= 1000 {
            return ToPrimitive::to_f64(n).map(f64::abs).unwrap_or(f64::NAN).ln();
        }
        let shift = bits - 64;
        let top: BigInt = n.abs() >> shift;
        ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

/// Parse a decimal (`-1.25`, `3e-4`) or `p/q` literal exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

/// `p/q` (or `p` for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// 17 significant digits; parses back to the identical `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_is_canonical() {
        let r = Rational::from_ratio(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("1.25"), Some(Rational::from_ratio(5, 4)));
        assert_eq!(parse_rational("-3/6"), Some(Rational::from_ratio(-1, 2)));
        assert_eq!(parse_rational("1e-3"), Some(Rational::from_ratio(1, 1000)));
        assert_eq!(parse_rational("2.5E2"), Some(Rational::from_i64(250)));
        assert_eq!(parse_rational(".5"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(Rational::from_ratio(9, 4).sqrt(), Some(Rational::from_ratio(3, 2)));
        assert_eq!(Rational::from_i64(2).sqrt(), None);
        assert_eq!(Rational::from_i64(-4).sqrt(), None);
    }

    #[test]
    fn float_zero_uses_tolerance() {
        assert!(1e-12_f64.is_negligible(1e-10));
        assert!(!1e-9_f64.is_negligible(1e-10));
        assert!(!Rational::from_ratio(1, 1_000_000_000).is_negligible(1.0));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rational::from_integer(num_traits::pow(BigInt::from(10), 400));
        let r = Rational::new(BigInt::from(3) * big.numer(), big.numer() * BigInt::from(2));
        assert!((rational_to_f64(&r) - 1.5).abs() < 1e-15);
        let tiny = Rational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), 200));
        assert!((ln_abs_rational(&tiny) + 200.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
