//! Exact rationals and their text forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational used throughout the exact path.
pub type Q = BigRational;

/// Shorthand constructor; panics on a zero denominator.
pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

/// Parses `"a/b"`, `"a"`, `"-a/b"` or `"a/-b"`. Non-reduced input is accepted.
pub fn parse(text: &str) -> Result<Q, String> {
    let text = text.trim();
    let parse_int = |s: &str| -> Result<BigInt, String> {
        let s = s.trim();
        let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid rational `{text}`"));
        }
        s.parse::<BigInt>()
            .map_err(|_| format!("invalid rational `{text}`"))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{text}`"));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(parse_int(text)?)),
    }
}

/// Reduced form with a positive denominator; integers print without `/1`.
pub fn format(value: &Q) -> String {
    value.to_string()
}

/// Renders `value` with exactly `digits` fractional digits, rounding half to even.
pub fn to_decimal(value: &Q, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = value.abs() * Q::from_integer(scale);
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut units = floor.to_integer();
    if frac > half || (frac == half && units.is_odd()) {
        units += 1;
    }
    let mut body = units.to_string();
    if digits > 0 {
        if body.len() <= digits {
            body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
        }
        body.insert(body.len() - digits, '.');
    }
    if value.is_negative() && !units.is_zero() {
        body.insert(0, '-');
    }
    body
}

/// Lossy conversion for statistics only.
pub fn to_f64(value: &Q) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}
