//! Exact arithmetic: rational polynomials, real number fields `Q(α)`,
//! integer kernels and elimination over exact fields.

mod field;
mod interval;
mod kernel;
pub mod linalg;
mod poly;

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use field::{AlgebraicNumber, NumberField};
pub use interval::Interval;
pub use kernel::{integer_kernel, IntegerVector};
pub use poly::RationalPoly;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("minimal polynomial must have degree at least 1")]
    DegreeTooLow,
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("root interval must isolate exactly one real root, found {count}")]
    RootCountNotOne { count: usize },
    #[error("root interval is empty: lower bound must be below upper bound")]
    EmptyInterval,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("element is not invertible: the minimal polynomial is reducible")]
    NotInvertible,
    #[error("coefficient vector has length {got}, field degree is {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p"`, `"-p/q"` or a finite decimal such as `"1.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let s = text.trim();
    let err = || AlgebraError::Parse(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let whole = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_digits).map_err(|_| err())?
        };
        let frac = BigInt::from_str(frac_part).map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| err())
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest `f64` to a rational, robust to huge numerators and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let numer_bits = q.numer().bits() as i64;
    let denom_bits = q.denom().bits() as i64;
    // Scale so that the integer quotient carries ~64 significant bits.
    let shift = 64 - (numer_bits - denom_bits);
    let quotient = if shift >= 0 {
        (q.numer().abs() << shift as usize) / q.denom()
    } else {
        q.numer().abs() / (q.denom() << (-shift) as usize)
    };
    let mantissa = quotient.to_f64().unwrap_or(f64::INFINITY);
    let value = mantissa * 2f64.powi(-shift as i32);
    if q.is_negative() {
        -value
    } else {
        value
    }
}

/// Exact rational equal to a finite `f64`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Renders a polynomial with the given variable name, e.g. `8*X^3 - 4*X`.
pub fn poly_to_string(p: &RationalPoly, var: &str) -> String {
    let mut out = String::new();
    poly::write_poly(&mut out, p.coeffs(), var).expect("writing to a String");
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn two() -> Rational {
    Rational::one() + Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), integer(3));
        assert_eq!(parse_rational("-3/6").unwrap(), rational(-1, 2));
        assert_eq!(parse_rational("1.25").unwrap(), rational(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rational(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn format_round_trip() {
        for q in [rational(-7, 3), integer(12), rational(0, 5)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }

    #[test]
    fn to_f64_handles_large_parts() {
        let big = Rational::new(BigInt::from(10).pow(400u32) + 1u32, BigInt::from(10).pow(400u32));
        assert!((rational_to_f64(&big) - 1.0).abs() < 1e-15);
        assert!((rational_to_f64(&rational(-1, 3)) + 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(rational_to_f64(&integer(0)), 0.0);
    }
}
