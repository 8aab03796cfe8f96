//! Scalar abstraction shared by the floating and exact-rational code paths.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Numbers the solver can iterate on: `f32`, `f64` and [`Rational`].
///
/// Exact types report `EXACT = true` and use zero tolerances everywhere.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    const EXACT: bool;

    fn is_finite_value(&self) -> bool;

    /// Allowed deviation of a probability row sum from one.
    fn row_sum_tolerance() -> Self;

    /// Magnitudes at or below this are zero for pivoting purposes.
    fn pivot_tolerance() -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Exact rational image of the value, `None` for non-finite floats.
    fn to_rational(&self) -> Option<Rational>;

    fn from_usize_exact(k: usize) -> Self {
        Self::from_usize(k).expect("usize fits every scalar type")
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! float_scalar {
    ($t:ty, $row:expr, $piv:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }

            fn row_sum_tolerance() -> Self {
                $row
            }

            fn pivot_tolerance() -> Self {
                $piv
            }

            fn from_rational(r: &Rational) -> Self {
                rational_to_f64(r) as $t
            }

            fn to_rational(&self) -> Option<Rational> {
                Rational::from_float(*self)
            }
        }
    };
}

float_scalar!(f64, 1e-12, 1e-12);
float_scalar!(f32, 1e-5, 1e-6);

impl Scalar for Rational {
    const EXACT: bool = true;

    fn is_finite_value(&self) -> bool {
        true
    }

    fn row_sum_tolerance() -> Self {
        Rational::zero()
    }

    fn pivot_tolerance() -> Self {
        Rational::zero()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Correctly scaled conversion; `BigRational::to_f64` overflows on huge parts.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    let (n, d) = if shift > 0 {
        (num.clone(), den.clone() << (shift as usize))
    } else {
        (num.clone() << ((-shift) as usize), den.clone())
    };
    let mantissa = Rational::new(n, d).to_f64().unwrap_or(f64::NAN);
    mantissa * 2f64.powi(shift as i32)
}

/// Natural logarithm of a positive rational, accurate far outside the f64 range.
pub fn rational_ln(r: &Rational) -> f64 {
    debug_assert!(r.is_positive());
    bigint_ln(r.numer()) - bigint_ln(r.denom())
}

/// Natural logarithm of a positive big integer from its leading 64 bits.
pub fn bigint_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let lead = (x >> shift).to_f64().expect("64-bit lead");
    lead.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Parses `"p/q"`, an integer or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
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
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Renders a rational as `"p/q"`, or `"p"` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn convert<S: Scalar, T: Scalar>(x: &S) -> T {
    if S::EXACT || T::EXACT {
        let r = x.to_rational().expect("finite scalar converts to a rational");
        T::from_rational(&r)
    } else {
        T::from_f64(x.to_f64_lossy()).expect("float conversion")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("1/3"), Some(q(1, 3)));
        assert_eq!(parse_rational(" -2/4 "), Some(q(-1, 2)));
        assert_eq!(parse_rational("0.1"), Some(q(1, 10)));
        assert_eq!(parse_rational("2.5e-1"), Some(q(1, 4)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rational(&q(6, 3)), "2");
        assert_eq!(format_rational(&q(-3, 6)), "-1/2");
    }

    #[test]
    fn huge_rationals_convert_and_log() {
        let big = Rational::from_integer(num_traits::pow(BigInt::from(3), 2000));
        let ln = rational_ln(&big);
        assert!((ln - 2000.0 * 3f64.ln()).abs() < 1e-9 * ln);
        let tiny = Rational::new(BigInt::from(1), num_traits::pow(BigInt::from(2), 1030));
        assert_eq!(rational_to_f64(&tiny), f64::MIN_POSITIVE / 256.0);
    }
}
