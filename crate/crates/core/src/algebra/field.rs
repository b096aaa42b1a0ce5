use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::poly::write_poly;
use super::{rational, rational_to_f64, AlgebraError, Interval, Rational, RationalPoly};

/// Precision (in bits) of the root enclosure computed when a field is created.
const BASE_BITS: u32 = 80;
/// Bits after which sign determination falls back to exact tests.
const SIGN_BUDGET_BITS: u32 = 5120;

/// A real number field `Q(α)`, with `α` the unique root of `minpoly` inside
/// the user-supplied open interval.
#[derive(Debug)]
pub struct NumberField {
    minpoly: RationalPoly,
    interval: (Rational, Rational),
    // Isolating interval of width at most 2^-BASE_BITS.
    tight: (Rational, Rational),
}

impl NumberField {
    /// Validates `minpoly` (degree ≥ 1, squarefree) and checks that exactly
    /// one of its real roots lies in `(lo, hi)`.
    pub fn new(
        minpoly: RationalPoly,
        root_interval: (Rational, Rational),
    ) -> Result<Arc<NumberField>, AlgebraError> {
        match minpoly.degree() {
            None | Some(0) => return Err(AlgebraError::DegreeTooLow),
            _ => {}
        }
        if !minpoly.is_squarefree() {
            return Err(AlgebraError::NotSquarefree);
        }
        let (lo, hi) = root_interval;
        if lo >= hi {
            return Err(AlgebraError::EmptyInterval);
        }
        let minpoly = minpoly.monic();
        // Sturm counts on (lo, hi]; discount a root sitting exactly on hi.
        let mut count = minpoly.count_roots(&lo, &hi);
        if minpoly.eval(&hi).is_zero() {
            count -= 1;
        }
        if count != 1 {
            return Err(AlgebraError::RootCountNotOne { count });
        }
        let tight = isolate_open(&minpoly, &lo, &hi, BASE_BITS);
        Ok(Arc::new(NumberField {
            minpoly,
            interval: (lo, hi),
            tight,
        }))
    }

    /// `Q` itself, as the degree-one field generated by the root of `x`.
    pub fn rationals() -> Arc<NumberField> {
        NumberField::new(RationalPoly::x(), (rational(-1, 1), rational(1, 1)))
            .expect("x has a single root in (-1, 1)")
    }

    /// Monic minimal polynomial.
    pub fn minpoly(&self) -> &RationalPoly {
        &self.minpoly
    }

    pub fn root_interval(&self) -> (&Rational, &Rational) {
        (&self.interval.0, &self.interval.1)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    /// Enclosure of `α` of width at most `2^-bits`.
    pub fn root_enclosure(&self, bits: u32) -> Interval {
        let (lo, hi) = if bits <= BASE_BITS {
            self.tight.clone()
        } else {
            let width = Rational::one() / pow2(bits);
            self.minpoly
                .refine_root(self.tight.0.clone(), self.tight.1.clone(), &width)
        };
        Interval::new(lo, hi)
    }

    pub fn root_f64(&self) -> f64 {
        self.root_enclosure(BASE_BITS).midpoint_f64()
    }

    /// Same minimal polynomial and same embedded root.
    pub fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
        if Arc::ptr_eq(a, b) {
            return true;
        }
        if a.minpoly != b.minpoly {
            return false;
        }
        let lo = (&a.tight.0).min(&b.tight.0).clone();
        let hi = (&a.tight.1).max(&b.tight.1).clone();
        // Both enclosed roots lie in [lo, hi]; they coincide iff there is only one.
        let below = &lo - Rational::one() / pow2(BASE_BITS * 2);
        a.minpoly.count_roots(&below, &hi) == 1
    }

    /// Every other real root of the minimal polynomial, as an isolating interval.
    pub fn other_real_roots(&self) -> Vec<(Rational, Rational)> {
        let own = &self.tight;
        self.minpoly
            .real_roots(None)
            .into_iter()
            .filter(|(lo, hi)| {
                let (lo, hi) = self.minpoly.refine_root(
                    lo.clone(),
                    hi.clone(),
                    &(Rational::one() / pow2(BASE_BITS)),
                );
                hi < own.0 || lo > own.1
            })
            .collect()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.tight == other.tight
    }
}

fn pow2(bits: u32) -> Rational {
    Rational::from_integer(num_bigint::BigInt::one() << bits as usize)
}

/// Isolating interval inside `(lo, hi)` whose endpoints are not roots.
fn isolate_open(p: &RationalPoly, lo: &Rational, hi: &Rational, bits: u32) -> (Rational, Rational) {
    let roots = p.real_roots(Some((lo, hi)));
    let (a, b) = roots
        .into_iter()
        .find(|(a, b)| {
            // An interval ending at the caller's upper bound may only capture
            // a root exactly at hi, which is excluded.
            !(b == hi && p.eval(hi).is_zero()) && a < b
        })
        .expect("validated root count");
    p.refine_root(a, b, &(Rational::one() / pow2(bits)))
}

/// Element of `Q(α)` in the power basis `1, α, ..., α^(d-1)`.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    coeffs: Vec<Rational>,
}

impl AlgebraicNumber {
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<Rational>) -> Result<Self, AlgebraError> {
        let d = field.degree();
        if coeffs.len() > d {
            return Err(AlgebraError::WrongLength {
                expected: d,
                got: coeffs.len(),
            });
        }
        Ok(Self::from_poly(field, &RationalPoly::new(coeffs)))
    }

    /// Reduces an arbitrary polynomial in `α` modulo the minimal polynomial.
    pub fn from_poly(field: &Arc<NumberField>, p: &RationalPoly) -> Self {
        let r = p.rem(field.minpoly());
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(field.degree(), Rational::zero());
        AlgebraicNumber {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        Self::from_poly(field, &RationalPoly::constant(q))
    }

    pub fn from_i64(field: &Arc<NumberField>, v: i64) -> Self {
        Self::from_rational(field, rational(v, 1))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &RationalPoly::zero())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_i64(field, 1)
    }

    /// The generator `α`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &RationalPoly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> RationalPoly {
        RationalPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(q)` if the element is the rational `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Same coefficient vector, read in another field (e.g. a conjugate embedding).
    pub fn with_field(&self, field: &Arc<NumberField>) -> Result<Self, AlgebraError> {
        Self::from_coeffs(field, self.coeffs.clone())
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if NumberField::same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self::from_poly(&self.field, &(&self.to_poly() * &other.to_poly())))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// `NotInvertible` means `gcd(a, minpoly)` is nonconstant, which proves the
    /// minimal polynomial reducible.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (g, s) = self.to_poly().gcd_with_cofactor(self.field.minpoly());
        if !g.is_constant() {
            return Err(AlgebraError::NotInvertible);
        }
        Ok(Self::from_poly(&self.field, &s))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, q: &Rational) -> Self {
        AlgebraicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        AlgebraicNumber {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Enclosure of the embedded value using a root enclosure of `2^-bits`.
    pub fn enclose(&self, bits: u32) -> Interval {
        self.to_poly().eval_interval(&self.field.root_enclosure(bits))
    }

    /// Interval of width at most `10^-digits` containing the embedded value.
    pub fn embed(&self, digits: u32) -> Interval {
        let target = Rational::one() / Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), digits as usize));
        if let Some(q) = self.as_rational() {
            return Interval::point(q);
        }
        let mut bits = BASE_BITS;
        loop {
            let iv = self.enclose(bits);
            if iv.width() <= target {
                return iv;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.as_rational() {
            Some(q) => rational_to_f64(&q),
            None => self.enclose(BASE_BITS).midpoint_f64(),
        }
    }

    /// Sign of the embedded value: `-1`, `0` or `1`.
    ///
    /// Refines the enclosure up to a fixed budget. If it still straddles zero,
    /// the element is tested exactly: zero coefficients, or a common factor of
    /// `a` and the minimal polynomial vanishing at the embedded root, give `0`.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let mut bits = BASE_BITS;
        loop {
            if let Some(s) = self.enclose(bits).sign() {
                return s;
            }
            if bits >= SIGN_BUDGET_BITS {
                break;
            }
            bits *= 2;
        }
        let g = self.to_poly().gcd(self.field.minpoly());
        if !g.is_constant() {
            let iv = self.field.root_enclosure(BASE_BITS);
            if g.eval(&iv.lo).is_zero() || g.eval(&iv.hi).is_zero() || g.count_roots(&iv.lo, &iv.hi) > 0 {
                return 0;
            }
        }
        // Irreducible case: a nonzero element has a nonzero embedding, so
        // refinement terminates.
        loop {
            bits *= 2;
            if let Some(s) = self.enclose(bits).sign() {
                return s;
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        NumberField::same_field(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (≈{:.6})", self.to_f64())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "a")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &AlgebraicNumber {
            type Output = AlgebraicNumber;
            /// Panics if the operands live in different fields.
            fn $method(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
                self.$checked(rhs).expect("algebraic operands from different fields")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
