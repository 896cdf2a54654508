//! Exact rational scalars.
//!
//! Every quantity in the crate is a [`Rational`]; floating point only shows up
//! in [`to_decimal`], which is for display.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `p/q` as a rational. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p/q"` or `"p"` (optional sign, surrounding whitespace ignored).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Comma separated list of rationals, e.g. `"1/2,1"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_rational)
        .collect()
}

/// Canonical `p/q` string, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half away from zero to `digits` places.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let abs = scaled.abs();
    let floor = abs.floor();
    let rounded = if &abs - &floor >= rat(1, 2) {
        floor.to_integer() + 1
    } else {
        floor.to_integer()
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = digits
        )
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// The rational with the smallest denominator in the half-open interval
/// `(lo, hi]`, found by walking the Stern–Brocot tree. Requires `lo < hi`.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "simplest_in needs lo < hi");
    // Shift to the positive side so that the walk starts at 0/1 and 1/0.
    let shift = if lo.is_negative() {
        Rational::from_integer(-lo.floor().to_integer() + 1)
    } else {
        Rational::zero()
    };
    let (lo, hi) = (lo + &shift, hi + &shift);
    let inside = |x: &Rational| &lo < x && x <= &hi;
    let (mut ln, mut ld) = (BigInt::zero(), BigInt::one());
    let (mut rn, mut rd) = (BigInt::one(), BigInt::zero());
    loop {
        let mn = &ln + &rn;
        let md = &ld + &rd;
        let m = Rational::new(mn.clone(), md.clone());
        if inside(&m) {
            return m - shift;
        }
        if m <= lo {
            // Jump right as far as possible while staying <= lo.
            // Find largest t with (ln + t*rn)/(ld + t*rd) <= lo.
            let t = largest_step(&ln, &ld, &rn, &rd, &lo, true);
            ln = &ln + &rn * &t;
            ld = &ld + &rd * &t;
        } else {
            // m > hi: move the right bound toward the left bound.
            let t = largest_step(&rn, &rd, &ln, &ld, &hi, false);
            rn = &rn + &ln * &t;
            rd = &rd + &ld * &t;
        }
    }
}

// Largest t >= 1 such that the mediant-power (an + t*bn)/(ad + t*bd) stays on
// the same side of `bound` (<= bound when `below`, > bound otherwise).
fn largest_step(
    an: &BigInt,
    ad: &BigInt,
    bn: &BigInt,
    bd: &BigInt,
    bound: &Rational,
    below: bool,
) -> BigInt {
    let ok = |t: &BigInt| {
        let v_num = an + bn * t;
        let v_den = ad + bd * t;
        if v_den.sign() != Sign::Plus {
            return false;
        }
        let v = Rational::new(v_num, v_den);
        if below {
            &v <= bound
        } else {
            &v > bound
        }
    };
    let mut hi = BigInt::one();
    while ok(&(&hi * 2)) {
        hi *= 2;
        if hi.bits() > 4096 {
            break;
        }
    }
    let mut lo = hi.clone();
    let mut hi = &hi * 2;
    // Invariant: ok(lo), !ok(hi).
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if ok(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
