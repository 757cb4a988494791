//! Exact rational helpers on top of [`num_rational::BigRational`].

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or a plain integer. Decimals are rejected so files stay exact.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (BigInt::from_str(n).ok()?, BigInt::from_str(d).ok()?),
        None => (BigInt::from_str(s).ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Canonical text form: `n` for integers, `p/q` otherwise.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn floor(r: &Rational) -> Rational {
    r.floor()
}

pub fn ceil(r: &Rational) -> Rational {
    r.ceil()
}

/// The rational with the smallest denominator in the closed interval `[lo, hi]`
/// (Stern–Brocot descent via continued fractions). Ties on denominator resolve
/// to the smallest numerator.
pub fn simplest_in_interval(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval");
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_in_interval(&-hi, &-lo);
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    // lo is not an integer, so an integer in (lo, hi] is the answer.
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // Both share the integer part; recurse on reciprocals of fractional parts.
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    let inner = simplest_positive(&hi_f.recip(), &lo_f.recip());
    fl + inner.recip()
}
