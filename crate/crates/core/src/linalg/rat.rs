//! Rational scalars and their text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Arbitrary-precision rational. Always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rat(s: &str) -> Result<Rat, LinalgError> {
    let t = s.trim();
    let bad = || LinalgError::Parse(format!("not a rational: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `"a/b"`, or `"a"` when the value is an integer.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

pub fn parse_vec(v: &[String]) -> Result<Vec<Rat>, LinalgError> {
    v.iter().map(|s| parse_rat(s)).collect()
}

/// Scales a row of rationals to a primitive integer row (same span, same sign).
///
/// Multiplies by the LCM of the denominators, then divides by the GCD of the
/// numerators. The zero row is returned unchanged.
pub fn primitive_integers(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// [`primitive_integers`] lifted back into rationals.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    primitive_integers(v).into_iter().map(Rat::from_integer).collect()
}

/// Scales a rational row to integers by the LCM of its denominators only.
/// Returns the row and the (positive) scale factor used.
pub(crate) fn clear_denominators(v: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    (ints, lcm)
}

/// `Σ aᵢ bᵢ` accumulated over a common denominator and normalized once.
pub(crate) fn sum_of_products<'a>(pairs: impl Iterator<Item = (&'a Rat, &'a Rat)>) -> Rat {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (a, b) in pairs {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let pn = a.numer() * b.numer();
        if a.is_integer() && b.is_integer() {
            if den.is_one() {
                num += pn;
            } else {
                num += pn * &den;
            }
            continue;
        }
        let pd = a.denom() * b.denom();
        if pd == den {
            num += pn;
        } else {
            num = num * &pd + pn * &den;
            den *= pd;
        }
    }
    Rat::new(num, den)
}

pub fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
