use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    let bad = || ExactError::ParseRational(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_integer(p).ok_or_else(bad)?;
        let q = parse_integer(q).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        return Ok(Rational::new(p, q));
    }
    if t.contains(['.', 'e', 'E']) {
        return parse_decimal(t).ok_or_else(bad);
    }
    parse_integer(t).map(Rational::from_integer).ok_or_else(bad)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    if exp.unsigned_abs() > 4096 {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if shift >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Some(if neg { -r } else { r })
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with `sig` significant digits, rounded half away from zero.
/// Uses exact integer arithmetic, so the output is reproducible bit for bit.
pub fn format_decimal(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return format!("0.{}", "0".repeat(sig.saturating_sub(1)));
    }
    let neg = r.is_negative();
    let x = r.abs();
    let ten = BigInt::from(10);
    // exponent e with 10^e <= x < 10^(e+1)
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while x < pow10(e) {
        e -= 1;
    }
    while x >= pow10(e + 1) {
        e += 1;
    }
    let scaled = &x * pow10(sig as i64 - 1 - e);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut digits = q;
    if rem * 2 >= *scaled.denom() {
        digits += 1;
    }
    let mut ds = digits.to_string();
    if ds.len() > sig {
        ds.pop();
        e += 1;
    }
    let sign = if neg { "-" } else { "" };
    if (-6..15).contains(&e) {
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if int_len >= ds.len() {
                format!("{sign}{}{}", ds, "0".repeat(int_len - ds.len()))
            } else {
                format!("{sign}{}.{}", &ds[..int_len], &ds[int_len..])
            }
        } else {
            format!("{sign}0.{}{}", "0".repeat((-e - 1) as usize), ds)
        }
    } else {
        format!("{sign}{}.{}e{}", &ds[..1], &ds[1..], e)
    }
}
