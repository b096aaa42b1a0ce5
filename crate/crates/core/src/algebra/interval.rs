use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::{rational_to_f64, two, Rational};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / two()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `Some(sign)` when the interval excludes zero or is exactly `[0, 0]`.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (rational_to_f64(&self.lo), rational_to_f64(&self.hi))
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, rational};

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::new(integer(-1), integer(2));
        let b = Interval::new(integer(3), integer(4));
        assert_eq!(&a * &b, Interval::new(integer(-4), integer(8)));
        assert_eq!(&a - &b, Interval::new(integer(-5), integer(-1)));
        assert_eq!((&a + &b).sign(), Some(1));
        assert_eq!(a.sign(), None);
        assert_eq!(Interval::point(rational(0, 1)).sign(), Some(0));
    }
}
