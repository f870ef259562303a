//! Exact scalar arithmetic (arbitrary-precision rationals, prime fields) and
//! exact linear algebra (rank, determinant, minors).
//!
//! Everything here is pure and reentrant: values are immutable once
//! constructed, so concurrent evaluation needs no synchronization.

mod matrix;
mod primefield;

pub use matrix::Matrix;
pub use primefield::{default_prime, is_prime, root_of_unity_order, PrimeField};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A field of scalars, carried as a context object so that prime fields can
/// hold their modulus. Elements do not know their field; mixing fields is a
/// caller bug and is caught by the context.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// Exact determinant of a square matrix over this field.
    ///
    /// The default is ordinary Gaussian elimination; [`Rationals`] overrides
    /// it with fraction-free (Bareiss) elimination on cleared integers to
    /// bound intermediate growth.
    fn det_matrix(&self, m: &Matrix<Self>) -> Result<Self::Elem>
    where
        Self: Sized,
    {
        matrix::gaussian_det(self, m)
    }
}

/// The field of arbitrary-precision rationals.
///
/// Elements are [`BigRational`]: always reduced (gcd of numerator and
/// denominator is 1), denominator positive, zero canonically 0/1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

pub type Rational = BigRational;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn det_matrix(&self, m: &Matrix<Self>) -> Result<BigRational> {
        matrix::bareiss_det(m)
    }
}

/// Convenience constructor: the rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Serialize a rational as `"p/q"`, with `/q` omitted when the denominator
/// is 1. This is the wire form used by every file format of the toolkit.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the `"p/q"` wire form back into an exact rational.
pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid integer {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(num)?, den))
        }
    }
}

/// Reduce a rational modulo a prime: `num * den^-1` in `F_p`.
///
/// Fails when the denominator is divisible by `p`; callers should pick a
/// different prime in that case.
pub fn rational_mod_p(r: &BigRational, fp: &PrimeField) -> Result<u64> {
    let p = BigInt::from(fp.p());
    let reduce = |x: &BigInt| -> u64 {
        let m = x % &p;
        let m = if m.is_negative() { m + &p } else { m };
        let (_, digits) = m.to_u64_digits();
        *digits.first().unwrap_or(&0)
    };
    let den = reduce(r.denom());
    let num = reduce(r.numer());
    let den_inv = fp.inv(&den).ok_or_else(|| {
        Error::Degenerate(format!(
            "denominator of {} vanishes modulo {}",
            rational_to_string(r),
            fp.p()
        ))
    })?;
    Ok(fp.mul(&num, &den_inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_wire_form_roundtrip() {
        let r = rat(-6, 4);
        assert_eq!(rational_to_string(&r), "-3/2");
        assert_eq!(rational_from_str("-3/2").unwrap(), r);
        assert_eq!(rational_to_string(&rat(5, 1)), "5");
        assert_eq!(rational_from_str("5").unwrap(), rat(5, 1));
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x").is_err());
    }

    #[test]
    fn rational_canonical_form() {
        // gcd(|num|, den) = 1, den > 0, zero is 0/1
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        let z = rat(0, 7);
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn rational_mod_p_reduces_exactly() {
        let fp = PrimeField::new(7).unwrap();
        // 3/2 = 3 * 4 = 12 = 5 mod 7
        assert_eq!(rational_mod_p(&rat(3, 2), &fp).unwrap(), 5);
        assert_eq!(rational_mod_p(&rat(-1, 1), &fp).unwrap(), 6);
        assert!(rational_mod_p(&rat(1, 7), &fp).is_err());
    }
}
