//! Exact arithmetic over the rationals: scalars, dense matrices, sparse
//! echelon forms and sparse multivariate polynomials.

pub mod matrix;
pub mod poly;
pub mod sparse;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use matrix::QMatrix;
pub use poly::{divisible_by_linear, poly_det, MPoly, Monomial};
pub use sparse::{Echelon, SparseVec};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, `+p` or `p/q` in base 10 with `q > 0`.
pub fn parse_rational(token: &str) -> Option<Rational> {
    fn int(s: &str, allow_sign: bool) -> Option<BigInt> {
        let digits = if allow_sign {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }
    match token.split_once('/') {
        None => int(token, true).map(Rational::from_integer),
        Some((p, q)) => {
            let p = int(p, true)?;
            let q = int(q, false)?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
    }
}

/// Scales `v` so that its first nonzero entry is 1. Returns false for the
/// zero vector (left untouched).
pub fn normalize_first_nonzero(v: &mut [Rational]) -> bool {
    let Some(lead) = v.iter().find(|c| !c.is_zero()).cloned() else {
        return false;
    };
    if !lead.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &lead;
        }
    }
    true
}

/// Base-10 rendering, `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}
