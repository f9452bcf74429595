//! Exact rational helpers. Every payoff, probability and cost in the crate is a
//! [`Rational`]; floating point only appears when rendering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p/q` or an integer. Surrounding whitespace is not accepted.
pub fn parse(text: &str) -> Option<Rational> {
    if text.is_empty() || text.contains(char::is_whitespace) {
        return None;
    }
    let value: Rational = text.parse().ok()?;
    Some(value)
}

/// `p/q` in lowest terms, or just `p` when the denominator is one.
pub fn show(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Renders `x` with `digits` significant digits in plain positional notation.
pub fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exponent = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exponent).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    // log10 can land one below the true exponent near powers of ten
    let significant = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
    if significant > digits && decimals > 0 {
        format!("{:.*}", decimals - 1, x)
    } else {
        s
    }
}

/// Decimal rendering of the square root of a non-negative rational.
pub fn sqrt_decimal(value: &Rational) -> String {
    sig_digits(to_f64(value).max(0.0).sqrt(), 12)
}

pub fn decimal(value: &Rational) -> String {
    sig_digits(to_f64(value), 12)
}

pub fn max_abs_diff(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(zero)
}
