//! Exact rational helpers: parsing, integer parts, and decimal rendering.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `a/b`, an integer, or an exact decimal such as `0.125` or `-1.5`.
///
/// Decimals are read as the exact fraction they denote, so `0.1` is `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let fail = || Error::Parse(text.to_string());
    if s.is_empty() {
        return Err(fail());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_int(num.trim()).ok_or_else(fail)?;
        let den: BigInt = parse_int(den.trim()).ok_or_else(fail)?;
        if den.is_zero() {
            return Err(fail());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(fail());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(fail());
    }
    let digits = format!("{whole}{frac}");
    let mantissa: BigInt = digits.parse().map_err(|_| fail())?;
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let value = Rational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    if s.is_empty() || s.starts_with('+') && s.len() == 1 {
        return None;
    }
    s.parse().ok()
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn floor_int(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil_int(q: &Rational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// `x` split as `ceil - frac_complement`, with `0 <= frac_complement < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeilDecomposition {
    pub value: Rational,
    pub ceil: BigInt,
    pub frac_complement: Rational,
}

pub fn ceil_decompose(x: &Rational) -> CeilDecomposition {
    let ceil = ceil_int(x);
    let frac_complement = Rational::from_integer(ceil.clone()) - x;
    CeilDecomposition {
        value: x.clone(),
        ceil,
        frac_complement,
    }
}

/// Rounding direction used when a rational is cut to finitely many digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    HalfEven,
}

fn round_to_integer(q: &Rational, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Down => floor_int(q),
        Rounding::Up => ceil_int(q),
        Rounding::HalfEven => {
            let fl = floor_int(q);
            let rem = q - Rational::from_integer(fl.clone());
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            if rem > half || (rem == half && fl.is_odd()) {
                fl + 1
            } else {
                fl
            }
        }
    }
}

/// Exact rendering: a terminating decimal when the denominator has only the
/// prime factors 2 and 5, otherwise `num/den`.
pub fn render_exact(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return q.numer().to_string();
    }
    let scaled = q * Rational::from_integer(BigInt::from(10u32).pow(places));
    positional(&scaled.to_integer(), places as i64)
}

/// Places a decimal point `places` digits from the right of `mantissa`.
fn positional(mantissa: &BigInt, places: i64) -> String {
    let negative = mantissa.sign() == Sign::Minus;
    let digits = mantissa.abs().to_string();
    let body = if places <= 0 {
        format!("{digits}{}", "0".repeat((-places) as usize))
    } else {
        let places = places as usize;
        if digits.len() > places {
            let (a, b) = digits.split_at(digits.len() - places);
            format!("{a}.{b}")
        } else {
            format!("0.{}{digits}", "0".repeat(places - digits.len()))
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Largest `e` with `10^e <= |q|`, for nonzero `q`.
fn decimal_exponent(q: &Rational) -> i64 {
    let a = q.abs();
    let ten = Rational::from_integer(BigInt::from(10));
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            ten.clone().pow(e as u32)
        } else {
            ten.clone().pow((-e) as u32).recip()
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    e
}

/// Renders `q` with `digits` significant digits under the given rounding.
///
/// Positional notation for moderate magnitudes, `d.ddde±x` otherwise.
pub fn render_decimal(q: &Rational, digits: u32, mode: Rounding) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1) as i64;
    let e = decimal_exponent(q);
    let shift = digits - 1 - e;
    let ten = Rational::from_integer(BigInt::from(10));
    let scaled = if shift >= 0 {
        q * ten.pow(shift as u32)
    } else {
        q / ten.pow((-shift) as u32)
    };
    let mantissa = round_to_integer(&scaled, mode);
    if (-10..=20).contains(&e) {
        positional(&mantissa, shift)
    } else {
        // scientific: mantissa may have gained a digit by rounding up
        let negative = mantissa.sign() == Sign::Minus;
        let text = mantissa.abs().to_string();
        let exp = e + text.len() as i64 - digits;
        let (head, tail) = text.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

/// `num/den`, or just the integer when the denominator is 1.
pub fn render_fraction(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Twelve significant digits, round-half-even: the secondary readable form.
pub fn render_approx(q: &Rational) -> String {
    render_decimal(q, 12, Rounding::HalfEven)
}

/// Lossy conversion for reporting only.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        for bad in ["", "1/0", "abc", "1e-3", "0.1.2", "/3", "-"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ceil_decomposition_examples() {
        let d = ceil_decompose(&rat(3, 2));
        assert_eq!((d.ceil, d.frac_complement), (BigInt::from(2), rat(1, 2)));
        let d = ceil_decompose(&int(2));
        assert_eq!((d.ceil, d.frac_complement), (BigInt::from(2), int(0)));
        let d = ceil_decompose(&rat(7, 3));
        assert_eq!((d.ceil, d.frac_complement), (BigInt::from(3), rat(2, 3)));
    }

    #[test]
    fn floor_and_ceil_of_negatives() {
        assert_eq!(floor_int(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(ceil_int(&rat(-3, 2)), BigInt::from(-1));
    }

    #[test]
    fn exact_rendering() {
        assert_eq!(render_exact(&rat(3, 4)), "0.75");
        assert_eq!(render_exact(&rat(1, 3)), "1/3");
        assert_eq!(render_exact(&int(-7)), "-7");
        assert_eq!(render_exact(&rat(-1, 40)), "-0.025");
    }

    #[test]
    fn twelve_digit_rendering() {
        assert_eq!(render_approx(&rat(1, 2)), "0.500000000000");
        assert_eq!(render_approx(&rat(3, 4)), "0.750000000000");
        assert_eq!(render_approx(&rat(4, 3)), "1.33333333333");
        assert_eq!(render_approx(&rat(2, 3)), "0.666666666667");
        assert_eq!(render_approx(&int(120)), "120.000000000");
        // ties go to even
        assert_eq!(render_decimal(&rat(125, 100), 2, Rounding::HalfEven), "1.2");
        assert_eq!(render_decimal(&rat(135, 100), 2, Rounding::HalfEven), "1.4");
    }

    #[test]
    fn directed_rendering_brackets_value() {
        let third = rat(1, 3);
        assert_eq!(render_decimal(&third, 3, Rounding::Down), "0.333");
        assert_eq!(render_decimal(&third, 3, Rounding::Up), "0.334");
        assert_eq!(render_decimal(&-third, 3, Rounding::Down), "-0.334");
        let tiny = Rational::new(BigInt::one(), BigInt::from(10).pow(30u32) * 3);
        assert_eq!(render_decimal(&tiny, 3, Rounding::Up), "3.34e-31");
    }
}
