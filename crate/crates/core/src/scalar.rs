//! Real scalars in float or exact-rational mode, and the fractional-part
//! convention `{x} ∈ (−1/2, 1/2]`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Rational = BigRational;

/// A real number type usable by every symbolic and combinatorial routine.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// True when arithmetic is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(r: &Rational) -> Self;

    /// Converts a float; exact types refuse, since the float is usually a
    /// stand-in for an irrational.
    fn from_real(v: f64) -> Option<Self>;

    fn floor(&self) -> Self;

    fn ceil(&self) -> Self;

    fn to_f64(&self) -> f64;

    fn is_integer(&self) -> bool {
        self.floor() == *self
    }

    /// Equality up to `tol` in float mode, exact equality otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).abs().to_f64() <= tol
        }
    }

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_ratio(r: &Rational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn from_real(v: f64) -> Option<Self> {
                Some(v as $t)
            }

            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }

            fn ceil(&self) -> Self {
                <$t>::ceil(*self)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }

    fn from_real(_: f64) -> Option<Self> {
        None
    }

    fn floor(&self) -> Self {
        Rational::floor(self)
    }

    fn ceil(&self) -> Self {
        Rational::ceil(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_integer(&self) -> bool {
        Rational::is_integer(self)
    }
}

/// Integer part `[x] = ⌈x − 1/2⌉`.
pub fn int_part<S: Scalar>(x: &S) -> S {
    (x.clone() - S::half()).ceil()
}

/// Fractional part `{x} = x − [x]`, lying in `(−1/2, 1/2]`.
pub fn frac<S: Scalar>(x: &S) -> S {
    x.clone() - int_part(x)
}

/// Distance to the nearest integer, `‖x‖_{ℝ/ℤ} = |{x}|`.
pub fn circle_norm<S: Scalar>(x: &S) -> S {
    frac(x).abs()
}

/// Parses `p/q`, an integer, or a plain decimal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return None;
    }
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fraction.is_empty() {
        return None;
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !fraction.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{whole}{fraction}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), fraction.len());
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// `2^{-k} (2k+1)^{-1}`, the interval-width threshold for strong local
/// polynomiality.
pub fn c_k<S: Scalar>(k: u32) -> S {
    let denom = BigInt::from(2u32).pow(k) * BigInt::from(2 * k + 1);
    S::from_ratio(&Rational::new(BigInt::one(), denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn frac_examples() {
        assert!((frac(&0.6f64) + 0.4).abs() < 1e-15);
        assert_eq!(frac(&0.5f64), 0.5);
        assert_eq!(frac(&-0.5f64), 0.5);
        assert_eq!(frac(&q(3, 5)), q(-2, 5));
        assert_eq!(frac(&q(1, 2)), q(1, 2));
        assert_eq!(frac(&q(-1, 2)), q(1, 2));
    }

    #[test]
    fn int_part_examples() {
        assert_eq!(int_part(&0.75f64), 1.0);
        assert_eq!(int_part(&3.0f64), 3.0);
        assert_eq!(int_part(&-0.5f64), -1.0);
        assert_eq!(int_part(&q(-1, 2)), q(-1, 1));
    }

    #[test]
    fn c_k_values() {
        assert_eq!(c_k::<Rational>(2), q(1, 20));
        assert_eq!(c_k::<Rational>(3), q(1, 56));
        assert!((c_k::<f64>(2) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/10"), Some(q(3, 10)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("."), None);
    }
}
