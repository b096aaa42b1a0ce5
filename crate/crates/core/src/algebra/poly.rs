use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{format_rational, integer, rational_to_f64, two, Interval, Rational};

/// Dense univariate polynomial with rational coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`; the vector never ends in a zero,
/// so the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| integer(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `c * x^deg`
    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    /// Interval Horner evaluation; the result encloses `p(x)` for all `x` in `at`.
    pub fn eval_interval(&self, at: &Interval) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + &Interval::point(c.clone());
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * integer(i as i64))
                .collect(),
        )
    }

    /// Monic associate; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        self.scale(&(Rational::one() / lead))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(self, modulus)` monic and `s * self ≡ g (mod modulus)`.
    pub fn gcd_with_cofactor(&self, modulus: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let lead_inv = Rational::one() / r0.leading();
        (r0.scale(&lead_inv), s0.scale(&lead_inv))
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// `p / gcd(p, p')`, monic. Same distinct roots as `p`, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Canonical Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        if self.is_constant() {
            return seq;
        }
        seq.push(self.derivative());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }

    /// Upper bound on the absolute value of every complex root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        if self.is_constant() {
            return Rational::one();
        }
        let lead = self.leading().abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + max
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        let sturm = self.squarefree_part().sturm_sequence();
        sign_variations(&sturm, lo).saturating_sub(sign_variations(&sturm, hi))
    }

    /// Sturm-based isolation of the distinct real roots.
    ///
    /// Returns disjoint open intervals `(lo, hi)` in increasing order, each
    /// holding exactly one root. Endpoints are never roots, except possibly the
    /// caller-supplied bounds of `within` (counted on the half-open `(lo, hi]`).
    pub fn real_roots(&self, within: Option<(&Rational, &Rational)>) -> Vec<(Rational, Rational)> {
        assert!(!self.is_zero(), "real_roots of the zero polynomial");
        let p = self.squarefree_part();
        if p.is_constant() {
            return Vec::new();
        }
        let (lo, hi) = match within {
            Some((a, b)) => (a.clone(), b.clone()),
            None => {
                let b = p.root_bound();
                (-b.clone(), b)
            }
        };
        let sturm = p.sturm_sequence();
        let mut out = Vec::new();
        isolate(&p, &sturm, lo, hi, &mut out);
        out
    }

    /// Shrinks an isolating interval of a squarefree `self` by bisection until
    /// its width is at most `width`.
    pub fn refine_root(
        &self,
        mut lo: Rational,
        mut hi: Rational,
        width: &Rational,
    ) -> (Rational, Rational) {
        let sign_hi = self.eval(&hi).signum();
        if sign_hi.is_zero() {
            return (hi.clone(), hi);
        }
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / two();
            let s = self.eval(&mid).signum();
            if s.is_zero() {
                return (mid.clone(), mid);
            }
            // Simple roots change sign, so equal signs at mid and hi leave the
            // root in the lower half. This stays valid when lo is itself a root
            // excluded from the half-open range.
            if s == sign_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn with_integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

fn sign_variations(seq: &[RationalPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in seq {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let positive = v.is_positive();
        if last.is_some_and(|l| l != positive) {
            count += 1;
        }
        last = Some(positive);
    }
    count
}

fn isolate(
    p: &RationalPoly,
    sturm: &[RationalPoly],
    lo: Rational,
    hi: Rational,
    out: &mut Vec<(Rational, Rational)>,
) {
    let count = sign_variations(sturm, &lo).saturating_sub(sign_variations(sturm, &hi));
    match count {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mut mid = (&lo + &hi) / two();
            // Never split at a root: nudge towards `lo` until the value is nonzero.
            let mut k = 3i64;
            while p.eval(&mid).is_zero() {
                mid = &lo + (&hi - &lo) / integer(k);
                k += 1;
            }
            isolate(p, sturm, lo, mid.clone(), out);
            isolate(p, sturm, mid, hi, out);
        }
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "x")
    }
}

/// Writes `c_d x^d + ... + c_0` with conventional signs.
pub(crate) fn write_poly(f: &mut impl fmt::Write, coeffs: &[Rational], var: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let abs = c.abs();
        if first {
            if negative {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        first = false;
        let unit = abs.is_one();
        match i {
            0 => f.write_str(&format_rational(&abs))?,
            _ => {
                if !unit {
                    write!(f, "{}*", format_rational(&abs))?;
                }
                f.write_str(var)?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    /// Sign-change bisection on a fine grid: independent of the Sturm machinery.
    fn bisection_roots(p: &RationalPoly, lo: f64, hi: f64) -> Vec<f64> {
        let steps = 20_000;
        let h = (hi - lo) / steps as f64;
        let mut roots = Vec::new();
        for k in 0..steps {
            let (a, b) = (lo + k as f64 * h, lo + (k + 1) as f64 * h);
            let (fa, fb) = (p.eval_f64(a), p.eval_f64(b));
            if fa == 0.0 {
                roots.push(a);
            } else if fa * fb < 0.0 {
                let (mut a, mut b) = (a, b);
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    if p.eval_f64(a) * p.eval_f64(m) <= 0.0 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        roots
    }

    fn midpoints(ivs: &[(Rational, Rational)], p: &RationalPoly) -> Vec<f64> {
        let tiny = rational(1, 1 << 40);
        ivs.iter()
            .map(|(a, b)| {
                let (a, b) = p.refine_root(a.clone(), b.clone(), &tiny);
                rational_to_f64(&((a + b) / two()))
            })
            .collect()
    }

    #[test]
    fn golden_roots() {
        let p = RationalPoly::from_i64(&[-1, -1, 1]);
        let roots = midpoints(&p.real_roots(None), &p);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 0.618_033_988_75).abs() < 1e-9);
        assert!((roots[1] - 1.618_033_988_75).abs() < 1e-9);
    }

    #[test]
    fn cubic_roots_match_bisection_oracle() {
        let p = RationalPoly::from_i64(&[1, -2, -1, 1]);
        let oracle = bisection_roots(&p, -3.0, 3.0);
        assert_eq!(oracle.len(), 3);
        let roots = midpoints(&p.real_roots(None), &p);
        assert_eq!(roots.len(), 3);
        for (r, o) in roots.iter().zip(&oracle) {
            assert!((r - o).abs() < 1e-9, "{r} vs {o}");
        }
        // Frozen from the oracle.
        assert!((roots[0] + 1.246_979_6).abs() < 1e-6);
        assert!((roots[1] - 0.445_041_9).abs() < 1e-6);
        assert!((roots[2] - 1.801_937_7).abs() < 1e-6);
    }

    #[test]
    fn no_real_roots() {
        assert!(RationalPoly::from_i64(&[1, 0, 1]).real_roots(None).is_empty());
    }

    #[test]
    fn rational_roots_are_never_endpoints() {
        // (x - 0)(x - 1)(x + 1): bisection midpoints hit roots exactly.
        let p = RationalPoly::from_i64(&[0, -1, 0, 1]);
        let ivs = p.real_roots(None);
        assert_eq!(ivs.len(), 3);
        for (a, b) in &ivs {
            assert!(!p.eval(a).is_zero() && !p.eval(b).is_zero());
            assert_eq!(p.count_roots(a, b), 1);
        }
    }

    #[test]
    fn division_and_gcd() {
        let a = RationalPoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let b = RationalPoly::from_i64(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, RationalPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&RationalPoly::from_i64(&[-1, 1])), RationalPoly::from_i64(&[-1, 1]));
        let sq = &a * &a;
        assert!(!sq.is_squarefree());
        assert_eq!(sq.squarefree_part(), a);
    }

    #[test]
    fn cofactor_inverts_modulo() {
        let m = RationalPoly::from_i64(&[-1, -1, 1]);
        let x = RationalPoly::x();
        let (g, s) = x.gcd_with_cofactor(&m);
        assert!(g.is_constant());
        // x * (x - 1) = x^2 - x = 1 mod m
        assert_eq!(s, RationalPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(RationalPoly::from_i64(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(RationalPoly::from_i64(&[0, -4, 0, 8]).to_string(), "8*x^3 - 4*x");
        assert_eq!(RationalPoly::zero().to_string(), "0");
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn root_count_matches_sturm(coeffs in proptest::collection::vec(-6i64..=6, 2..=7)) {
            let p = RationalPoly::from_i64(&coeffs);
            prop_assume!(p.degree().unwrap_or(0) >= 1);
            let b = p.root_bound();
            let ivs = p.real_roots(None);
            prop_assert_eq!(ivs.len(), p.count_roots(&-b.clone(), &b));
            for w in ivs.windows(2) {
                prop_assert!(w[0].1 <= w[1].0);
            }
        }
    }
}
