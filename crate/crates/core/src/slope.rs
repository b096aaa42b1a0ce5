//! Planes in `R^n`: Grassmann coordinates, Plücker relations, tile
//! frequencies and the n-fold slopes.

use std::f64::consts::PI;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraicNumber, NumberField};
use crate::scalar::Scalar;

/// Default relative tolerance for Plücker residuals of floating slopes.
pub const PLUCKER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SlopeError {
    #[error("generating vectors are linearly dependent (all Grassmann coordinates vanish)")]
    DegenerateSlope,
    #[error("all coordinates are zero")]
    AllZero,
    #[error("generators must have the same length n >= 3, got {0} and {1}")]
    BadDimension(usize, usize),
    #[error("n-fold slopes need n >= 4, got {0}")]
    NfoldTooSmall(usize),
}

/// Position of the pair `(i, j)`, `i < j`, in lexicographic order (0-based).
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `i < j` in lexicographic order (0-based).
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// All increasing triples (0-based), lexicographic.
pub fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// All increasing quadruples (0-based), lexicographic.
pub fn quadruples(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for (i, j, k) in triples(n) {
        for l in k + 1..n {
            out.push((i, j, k, l));
        }
    }
    out
}

/// A plane given by two generating vectors.
#[derive(Clone, Debug)]
pub struct SlopeSpec<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Scalar> SlopeSpec<T> {
    pub fn new(u: Vec<T>, v: Vec<T>) -> Result<Self, SlopeError> {
        if u.len() != v.len() || u.len() < 3 {
            return Err(SlopeError::BadDimension(u.len(), v.len()));
        }
        Ok(SlopeSpec { u, v })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn to_f64(&self) -> SlopeSpec<f64> {
        SlopeSpec {
            u: self.u.iter().map(Scalar::to_f64).collect(),
            v: self.v.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Replaces `(u, v)` by `(a u + b v, c u + d v)`.
    pub fn change_basis(&self, a: &T, b: &T, c: &T, d: &T) -> Self {
        let comb = |x: &T, y: &T| -> Vec<T> {
            self.u
                .iter()
                .zip(&self.v)
                .map(|(ui, vi)| x.times(ui).plus(&y.times(vi)))
                .collect()
        };
        SlopeSpec {
            u: comb(a, b),
            v: comb(c, d),
        }
    }
}

/// A slope in either exact or floating representation.
#[derive(Clone, Debug)]
pub enum Slope {
    Exact(SlopeSpec<AlgebraicNumber>),
    Numeric(SlopeSpec<f64>),
}

impl Slope {
    pub fn n(&self) -> usize {
        match self {
            Slope::Exact(s) => s.n(),
            Slope::Numeric(s) => s.n(),
        }
    }

    pub fn to_f64(&self) -> SlopeSpec<f64> {
        match self {
            Slope::Exact(s) => s.to_f64(),
            Slope::Numeric(s) => s.clone(),
        }
    }

    pub fn exact(&self) -> Option<&SlopeSpec<AlgebraicNumber>> {
        match self {
            Slope::Exact(s) => Some(s),
            Slope::Numeric(_) => None,
        }
    }

    /// Field of an exact slope.
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.exact().and_then(|s| s.u.first()).map(|x| x.field())
    }

    pub fn grassmann_f64(&self) -> Result<Grassmann<f64>, SlopeError> {
        match self {
            Slope::Exact(s) => Ok(grassmann(s)?.to_f64()),
            Slope::Numeric(s) => grassmann(s),
        }
    }
}

/// Projective coordinates `G_ij = u_i v_j - u_j v_i` of a plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Grassmann<T> {
    pub n: usize,
    pub coords: Vec<T>,
}

impl<T: Scalar> Grassmann<T> {
    pub fn new(n: usize, coords: Vec<T>) -> Self {
        assert_eq!(coords.len(), n * (n - 1) / 2, "wrong number of Grassmann coordinates");
        Grassmann { n, coords }
    }

    /// `G_ij` for any `i != j` (0-based), using `G_ji = -G_ij`.
    pub fn get(&self, i: usize, j: usize) -> T {
        if i < j {
            self.coords[pair_index(self.n, i, j)].clone()
        } else if i > j {
            self.coords[pair_index(self.n, j, i)].negated()
        } else {
            self.coords[0].zero_like()
        }
    }

    pub fn to_f64(&self) -> Grassmann<f64> {
        Grassmann {
            n: self.n,
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero_value)
    }

    /// Divides by the first nonzero coordinate.
    pub fn normalized(&self) -> Result<Self, SlopeError> {
        let pivot = self
            .coords
            .iter()
            .find(|c| !c.is_zero_value())
            .ok_or(SlopeError::AllZero)?;
        let inv = pivot.recip().ok_or(SlopeError::AllZero)?;
        Ok(Grassmann {
            n: self.n,
            coords: self.coords.iter().map(|c| c.times(&inv)).collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        Grassmann {
            n: self.n,
            coords: self.coords.iter().map(|x| x.times(c)).collect(),
        }
    }

    /// `G_ij G_kl - (G_ik G_jl - G_il G_jk)` for `i < j < k < l`.
    pub fn plucker_residual(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        let lhs = self.get(i, j).times(&self.get(k, l));
        let rhs = self
            .get(i, k)
            .times(&self.get(j, l))
            .minus(&self.get(i, l).times(&self.get(j, k)));
        lhs.minus(&rhs)
    }

    /// Quadruples whose Plücker relation fails; `negligible` decides zero.
    pub fn plucker_violations_with(
        &self,
        negligible: impl Fn(&T) -> bool,
    ) -> Vec<(usize, usize, usize, usize)> {
        quadruples(self.n)
            .into_iter()
            .filter(|&(i, j, k, l)| !negligible(&self.plucker_residual(i, j, k, l)))
            .collect()
    }

    /// Pairs whose coordinate is zero, i.e. tile types that never occur.
    pub fn zero_pairs(&self) -> Vec<(usize, usize)> {
        pairs(self.n)
            .into_iter()
            .zip(&self.coords)
            .filter(|(_, c)| c.is_zero_value())
            .map(|(p, _)| p)
            .collect()
    }
}

impl Grassmann<AlgebraicNumber> {
    pub fn plucker_violations(&self) -> Vec<(usize, usize, usize, usize)> {
        self.plucker_violations_with(|r| r.is_zero())
    }
}

impl Grassmann<crate::algebra::Rational> {
    pub fn plucker_violations(&self) -> Vec<(usize, usize, usize, usize)> {
        self.plucker_violations_with(|r| num_traits::Zero::is_zero(r))
    }
}

impl Grassmann<f64> {
    /// Violations with residual above `tol * max|G|^2`.
    pub fn plucker_violations(&self, tol: f64) -> Vec<(usize, usize, usize, usize)> {
        let scale = self.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let bound = tol * scale * scale;
        self.plucker_violations_with(|r| r.abs() <= bound)
    }

    /// Largest Plücker residual relative to `max|G|^2`.
    pub fn max_plucker_residual(&self) -> f64 {
        let scale = self.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        quadruples(self.n)
            .into_iter()
            .map(|(i, j, k, l)| self.plucker_residual(i, j, k, l).abs())
            .fold(0.0, f64::max)
            / (scale * scale)
    }

    /// Zero test with a tolerance relative to the largest coordinate.
    pub fn near_zero_pairs(&self, tol: f64) -> Vec<(usize, usize)> {
        let scale = self.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        pairs(self.n)
            .into_iter()
            .zip(&self.coords)
            .filter(|(_, c)| c.abs() <= tol * scale)
            .map(|(p, _)| p)
            .collect()
    }
}

pub fn grassmann<T: Scalar>(s: &SlopeSpec<T>) -> Result<Grassmann<T>, SlopeError> {
    let n = s.n();
    let coords = pairs(n)
        .into_iter()
        .map(|(i, j)| s.u[i].times(&s.v[j]).minus(&s.u[j].times(&s.v[i])))
        .collect();
    let g = Grassmann { n, coords };
    if g.is_all_zero() {
        return Err(SlopeError::DegenerateSlope);
    }
    Ok(g)
}

/// Tile frequencies `|G_ij| / Σ|G_kl|` of a planar tiling with these coordinates.
#[derive(Clone, Debug)]
pub struct Frequencies<T> {
    pub values: Vec<T>,
    /// Pairs with zero frequency (tile types absent from the tiling).
    pub degenerate: Vec<(usize, usize)>,
}

pub fn frequencies<T: Scalar>(g: &Grassmann<T>) -> Result<Frequencies<T>, SlopeError> {
    let abs: Vec<T> = g.coords.iter().map(Scalar::abs_value).collect();
    let total = abs
        .iter()
        .skip(1)
        .fold(abs[0].clone(), |acc, x| acc.plus(x));
    let inv = total.recip().ok_or(SlopeError::AllZero)?;
    Ok(Frequencies {
        values: abs.iter().map(|x| x.times(&inv)).collect(),
        degenerate: g.zero_pairs(),
    })
}

/// Generators `(cos(2kπ/n))_k`, `(sin(2kπ/n))_k` for `k < m` (see
/// [`nfold_dimension`]) and their Grassmann coordinates `sin(2(j-i)π/n)`.
pub fn nfold_slope(n: usize) -> Result<(SlopeSpec<f64>, Grassmann<f64>), SlopeError> {
    if n < 4 {
        return Err(SlopeError::NfoldTooSmall(n));
    }
    let m = nfold_dimension(n);
    let angle = |k: usize| 2.0 * PI * k as f64 / n as f64;
    let u: Vec<f64> = (0..m).map(|k| angle(k).cos()).collect();
    let v: Vec<f64> = (0..m).map(|k| angle(k).sin()).collect();
    let spec = SlopeSpec { u, v };
    let mut g = grassmann(&spec)?;
    // Snap rounding noise so that vanishing coordinates are reported as zero.
    let scale = g.coords.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    for c in g.coords.iter_mut() {
        if c.abs() < 1e-12 * scale {
            *c = 0.0;
        }
    }
    Ok((spec, g))
}

/// Lift dimension of an n-fold tiling: `n` for odd `n`, `n/2` for even `n`.
///
/// For `n = 4` half the roots would only give a 2-dimensional lift (the
/// square lattice itself), so all four are kept; the resulting slope has
/// vanishing coordinates `G_13 = G_24 = sin(π) = 0`.
pub fn nfold_dimension(n: usize) -> usize {
    if n % 2 == 1 || n / 2 < 3 {
        n
    } else {
        n / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_indexing() {
        let n = 5;
        for (k, (i, j)) in pairs(n).into_iter().enumerate() {
            assert_eq!(pair_index(n, i, j), k);
        }
        assert_eq!(quadruples(4).len(), 1);
        assert_eq!(quadruples(5).len(), 5);
        assert_eq!(quadruples(6).len(), 15);
    }

    #[test]
    fn coordinate_plane() {
        let e1 = vec![1.0, 0.0, 0.0, 0.0];
        let e2 = vec![0.0, 1.0, 0.0, 0.0];
        let g = grassmann(&SlopeSpec::new(e1.clone(), e2).unwrap()).unwrap();
        assert_eq!(g.coords, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let f = frequencies(&g).unwrap();
        assert_eq!(f.values, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(f.degenerate.len(), 5);
        assert_eq!(
            grassmann(&SlopeSpec::new(e1.clone(), e1).unwrap()).unwrap_err(),
            SlopeError::DegenerateSlope
        );
    }

    #[test]
    fn all_ones_violates() {
        let g = Grassmann::new(4, vec![1.0; 6]);
        assert_eq!(g.plucker_violations(PLUCKER_TOLERANCE), vec![(0, 1, 2, 3)]);
    }

    #[test]
    fn nfold_five_matches_golden_pattern() {
        let (_, g) = nfold_slope(5).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = [phi, 1.0, -1.0, -phi, phi, 1.0, -1.0, phi, 1.0, phi];
        let s = g.coords[1];
        for (c, e) in g.coords.iter().zip(expected) {
            assert!((c / s - e).abs() < 1e-12);
        }
        let (_, g4) = nfold_slope(4).unwrap();
        assert_eq!(g4.zero_pairs(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn nfold_plucker() {
        for n in [5, 7, 8, 9, 11, 12] {
            let (_, g) = nfold_slope(n).unwrap();
            assert!(g.plucker_violations(PLUCKER_TOLERANCE).is_empty(), "n = {n}");
        }
    }
}
