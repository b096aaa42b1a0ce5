//! Field operations shared by exact (`Rational`, `AlgebraicNumber`) and
//! floating (`f64`) slope data.

use std::fmt::Debug;

use num_traits::{Signed, Zero};

use crate::algebra::{rational_to_f64, AlgebraicNumber, Rational};

pub trait Scalar: Clone + Debug {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` for zero (or a non-invertible element of a reducible field).
    fn recip(&self) -> Option<Self>;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, v: i64) -> Self;
    /// Exact zero test for exact types; `== 0.0` for floats.
    fn is_zero_value(&self) -> bool;
    fn signum_value(&self) -> i8;
    fn to_f64(&self) -> f64;

    fn abs_value(&self) -> Self {
        if self.signum_value() < 0 {
            self.negated()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn from_int_like(&self, v: i64) -> Self {
        v as f64
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
    fn signum_value(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        crate::algebra::integer(1)
    }
    fn from_int_like(&self, v: i64) -> Self {
        crate::algebra::integer(v)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn signum_value(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Scalar for AlgebraicNumber {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn zero_like(&self) -> Self {
        AlgebraicNumber::zero(self.field())
    }
    fn one_like(&self) -> Self {
        AlgebraicNumber::one(self.field())
    }
    fn from_int_like(&self, v: i64) -> Self {
        AlgebraicNumber::from_i64(self.field(), v)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn signum_value(&self) -> i8 {
        self.sign()
    }
    fn to_f64(&self) -> f64 {
        AlgebraicNumber::to_f64(self)
    }
}
