//! Arbitrary-precision rationals and their text forms.
//!
//! Every exact quantity in the crate is a [`Rational`]. On the wire rationals
//! are always written as `"p/q"` strings (denominator included even when it
//! is 1); parsing also accepts plain integers and finite decimals such as
//! `"0.3"`, which are converted exactly.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{EapError, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// `"p/q"` with the reduced denominator always present.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"` or a finite decimal (`"-1.25"`, `"3e-2"` is not accepted).
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || EapError::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(EapError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(numer, denom);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Decimal rendering rounded half-away-from-zero to `sig` significant digits.
///
/// Plain notation is used for magnitudes in `[1e-6, 1e15)`, scientific
/// notation (`d.ddde+X`) otherwise. The rendering is a pure function of the
/// exact value, so re-parsing the `p/q` form and re-rendering is stable.
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return format!("0.{}", "0".repeat(sig - 1));
    }
    let negative = r.is_negative();
    let a = r.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e = estimate_exponent(&a);
    let ten = int(10);
    loop {
        let lower = pow10(e);
        if a < lower {
            e -= 1;
            continue;
        }
        if a >= &lower * &ten {
            e += 1;
            continue;
        }
        break;
    }
    // digits = round(a * 10^(sig-1-e))
    let scaled = &a * pow10(sig as i64 - 1 - e);
    let mut digits = round_half_up(&scaled);
    if digits.to_string().len() > sig {
        digits /= 10;
        e += 1;
    }
    let ds = digits.to_string();
    let sign = if negative { "-" } else { "" };
    if !(-6..15).contains(&e) {
        let (head, tail) = ds.split_at(1);
        let tail = if tail.is_empty() { String::new() } else { format!(".{tail}") };
        let esign = if e < 0 { '-' } else { '+' };
        return format!("{sign}{head}{tail}e{esign}{}", e.abs());
    }
    if e >= 0 {
        let int_len = (e + 1) as usize;
        if ds.len() <= int_len {
            format!("{sign}{ds}{}", "0".repeat(int_len - ds.len()))
        } else {
            format!("{sign}{}.{}", &ds[..int_len], &ds[int_len..])
        }
    } else {
        let zeros = (-e - 1) as usize;
        format!("{sign}0.{}{ds}", "0".repeat(zeros))
    }
}

fn estimate_exponent(a: &Rational) -> i64 {
    let n = a.numer().to_string().len() as i64;
    let d = a.denom().to_string().len() as i64;
    n - d
}

fn pow10(e: i64) -> Rational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn round_half_up(x: &Rational) -> BigInt {
    (x + ratio(1, 2)).floor().to_integer()
}

pub fn to_f64(r: &Rational) -> f64 {
    // to_f64 on huge numer/denom pairs can overflow each side separately
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => to_decimal(r, 17).parse().unwrap_or(f64::NAN),
    }
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Rational upper bound for `sqrt(r)`: exact when `r` is a square of a
/// rational, otherwise within `2^-48 / denom` above the true root.
pub fn sqrt_upper(r: &Rational) -> Rational {
    assert!(!r.is_negative(), "sqrt of negative rational");
    if r.is_zero() {
        return Rational::zero();
    }
    let (p, q) = (r.numer(), r.denom());
    let pq = p * q;
    let s = pq.sqrt();
    if &s * &s == pq {
        return Rational::new(s, q.clone());
    }
    let shift = BigInt::one() << 96u32;
    let scaled = &pq * &shift;
    let s = scaled.sqrt() + 1;
    Rational::new(s, q * (BigInt::one() << 48u32))
}

/// Largest integer n with n <= r.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Smallest integer n with n >= r.
pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Nearest integer, ties resolved upwards (`floor(r + 1/2)`).
pub fn round_nearest(r: &Rational) -> BigInt {
    round_half_up(r)
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn two_pow_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn sign(r: &Rational) -> Ordering {
    match r.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_pq {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        use super::super::Rational;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&super::super::to_pq(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| super::super::parse(s).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        use super::super::Rational;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&super::super::to_pq(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| super::super::parse(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}

/// Serde adapters for arbitrary-precision integers written as decimal strings.
pub mod serde_bigint_vec {
    use num_bigint::BigInt;
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&n.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn pq_keeps_denominator() {
        assert_eq!(to_pq(&int(3)), "3/1");
        assert_eq!(to_pq(&ratio(2, 4)), "1/2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(119, 660), 15), "0.180303030303030");
        assert_eq!(to_decimal(&ratio(1, 2), 15), "0.500000000000000");
        assert_eq!(to_decimal(&int(1366), 6), "1366.00");
        assert_eq!(to_decimal(&ratio(-2, 3), 4), "-0.6667");
        assert_eq!(to_decimal(&ratio(999_999, 1_000_000), 3), "1.00");
        assert_eq!(to_decimal(&Rational::zero(), 3), "0.00");
        let big = from_big(&num_traits::pow(BigInt::from(10), 35));
        assert_eq!(to_decimal(&big, 3), "1.00e+35");
        assert_eq!(to_decimal(&ratio(1, 10_000_000), 2), "1.0e-7");
    }

    #[test]
    fn sqrt_upper_bounds() {
        assert_eq!(sqrt_upper(&ratio(1, 4)), ratio(1, 2));
        let two = int(2);
        let s = sqrt_upper(&two);
        assert!(&s * &s >= two);
        assert!(&s - ratio(141_421_356_237, 100_000_000_000) < ratio(1, 1_000_000_000));
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(round_nearest(&ratio(5, 2)), BigInt::from(3));
        assert_eq!(round_nearest(&ratio(-5, 2)), BigInt::from(-2));
        assert_eq!(floor(&ratio(-1, 3)), BigInt::from(-1));
        assert_eq!(ceil(&ratio(-1, 3)), BigInt::from(0));
    }
}
