//! Exact fraction literals: parsing `"a/b"` strings and rendering rationals
//! as fractions or as rounded decimals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractionError {
    #[error("decimal literal {0:?} rejected; use exact fractions")]
    Decimal(String),
    #[error("malformed fraction literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"a/b"`, `"-a/b"` or a bare integer into a normalized rational.
pub fn parse_fraction(text: &str) -> Result<Rational, FractionError> {
    let s = text.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(FractionError::Decimal(text.to_string()));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = parse_int(num).ok_or_else(|| FractionError::Malformed(text.to_string()))?;
    let den = parse_int(den).ok_or_else(|| FractionError::Malformed(text.to_string()))?;
    if den.is_zero() {
        return Err(FractionError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders `a/b`, or just `a` when the denominator is one.
pub fn format_fraction(x: &Rational) -> String {
    x.to_string()
}

/// Renders `x` in positional decimal notation rounded (half away from zero)
/// to `sig` significant digits. Trailing fractional zeros are dropped.
pub fn format_decimal(x: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let abs = x.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= |x| < 10^(e+1)
    let mut e = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    loop {
        let p = pow10(e);
        if abs < p {
            e -= 1;
        } else if abs >= &p * Rational::from_integer(ten.clone()) {
            e += 1;
        } else {
            break;
        }
    }

    let shift = sig as i64 - 1 - e;
    let scaled = &abs * pow10(shift);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut q = if &r * BigInt::from(2) >= *scaled.denom() { q + BigInt::one() } else { q };
    if q == ten.pow(sig as u32) {
        q /= &ten;
        e += 1;
    }
    let digits = q.to_string();
    debug_assert_eq!(digits.len(), sig);

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e >= sig as i64 - 1 {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', (e - sig as i64 + 1) as usize));
        return out;
    }
    let (int_part, frac_part) = if e >= 0 {
        let split = (e + 1) as usize;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        let zeros = "0".repeat((-e - 1) as usize);
        ("0".to_string(), format!("{zeros}{digits}"))
    };
    let frac_part = frac_part.trim_end_matches('0');
    out.push_str(&int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

fn pow10(e: i64) -> Rational {
    let p = BigInt::from(10).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_fraction("6/42").unwrap(), ratio(1, 7));
        assert_eq!(parse_fraction("-2/-4").unwrap(), ratio(1, 2));
        assert_eq!(parse_fraction(" -1/2 ").unwrap(), ratio(-1, 2));
        assert_eq!(parse_fraction("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_fraction("0/5").unwrap(), ratio(0, 1));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        assert!(matches!(parse_fraction("0.5"), Err(FractionError::Decimal(_))));
        assert!(matches!(parse_fraction("1e3"), Err(FractionError::Decimal(_))));
        assert!(matches!(parse_fraction("1/0"), Err(FractionError::ZeroDenominator(_))));
        assert!(matches!(parse_fraction("a/b"), Err(FractionError::Malformed(_))));
        assert!(matches!(parse_fraction(""), Err(FractionError::Malformed(_))));
        assert!(matches!(parse_fraction("1/2/3"), Err(FractionError::Malformed(_))));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&ratio(-1, 21), 20), "-0.047619047619047619048");
        assert_eq!(format_decimal(&ratio(1, 84), 20), "0.011904761904761904762");
        assert_eq!(format_decimal(&ratio(3, 5), 20), "0.6");
        assert_eq!(format_decimal(&ratio(531, 1000), 20), "0.531");
        assert_eq!(format_decimal(&ratio(0, 1), 20), "0");
        assert_eq!(format_decimal(&ratio(12345, 1), 3), "12300");
        assert_eq!(format_decimal(&ratio(2, 3), 3), "0.667");
        assert_eq!(format_decimal(&ratio(999, 1000), 2), "1");
        assert_eq!(format_decimal(&ratio(1, 1000), 20), "0.001");
        assert_eq!(format_decimal(&ratio(-5, 2), 1), "-3");
    }
}
