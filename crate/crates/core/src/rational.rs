//! Exact rationals and their textual forms.
//!
//! Every probability, utility and score in the engine is a [`Rational`].
//! Text in scenario files is `"p/q"` or an integer; decimal renderings are
//! for display only and are never parsed back.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"-p/q"` or an integer literal.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical exact form: `"4/5"`, `"-3"`, `"0"`.
pub fn exact(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering with at most `digits` significant digits, rounded half
/// away from zero, trailing zeros trimmed.
pub fn decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let abs = r.abs();
    let ten = BigInt::from(10);

    // Scale so that the integer part has exactly `digits` digits.
    let mut exponent: i64 = 0;
    let mut scaled = abs.clone();
    let lower = Rational::from_integer(ten.pow(digits as u32 - 1));
    let upper = Rational::from_integer(ten.pow(digits as u32));
    while scaled < lower {
        scaled *= Rational::from_integer(ten.clone());
        exponent -= 1;
    }
    while scaled >= upper {
        scaled /= Rational::from_integer(ten.clone());
        exponent += 1;
    }
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = q;
    if rem * BigInt::from(2) >= *scaled.denom() {
        mantissa += BigInt::one();
    }
    // Rounding may carry into an extra digit.
    if mantissa >= ten.pow(digits as u32) {
        mantissa /= &ten;
        exponent += 1;
    }

    let mut text = mantissa.to_str_radix(10);
    // value = mantissa * 10^exponent
    let point = text.len() as i64 + exponent;
    let body = if exponent >= 0 {
        text.extend(std::iter::repeat_n('0', exponent as usize));
        text
    } else if point > 0 {
        let (int_part, frac) = text.split_at(point as usize);
        format!("{int_part}.{frac}")
    } else {
        format!("0.{}{}", "0".repeat((-point) as usize), text)
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

pub fn sum<'a>(items: impl IntoIterator<Item = &'a Rational>) -> Rational {
    items.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn max_zero(r: Rational) -> Rational {
    if r.is_negative() {
        Rational::zero()
    } else {
        r
    }
}
