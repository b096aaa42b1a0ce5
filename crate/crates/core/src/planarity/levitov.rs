//! Surfaces `S_{f,g} = { λq₁ + μq₂ + f(λ)r₁ + g(μ)r₂ }` built from two
//! subperiods lifted both in `E` (`q`) and in a second plane `E'` (`r`).
//! Their shadows along the two subperiods are those of `E` whenever
//! `λ ↦ λ + f(λ)` permutes unit intervals, yet the surface need not be planar.

use std::collections::HashMap;

use super::{planes_meet_trivially, LiftCloud, PlanarityError};
use crate::algebra::AlgebraicNumber;
use crate::slope::SlopeSpec;
use crate::subperiods::{collinear, lift, lift_subperiod, subperiods, Subperiod, SubperiodLift};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Zero,
    /// `x ↦ x³`.
    Cubic,
    /// `x ↦ π(⌊x⌋) − ⌊x⌋` with `π` = [`block_permutation`].
    Staircase,
}

impl Profile {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Cubic => x * x * x,
            Profile::Staircase => {
                let k = x.floor() as i64;
                (block_permutation(k) - k) as f64
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Zero => "zero",
            Profile::Cubic => "cubic",
            Profile::Staircase => "staircase",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "zero" => Some(Profile::Zero),
            "cubic" => Some(Profile::Cubic),
            "staircase" => Some(Profile::Staircase),
            _ => None,
        }
    }
}

/// Reverses each block `[2^m, 2^{m+1})` of the nonnegative integers and
/// mirrors that on the negatives (`π(−k−1) = −π(k)−1`). `π(k) − k` is
/// unbounded, so the staircase profile leaves every strip of bounded width.
pub fn block_permutation(k: i64) -> i64 {
    if k < 0 {
        return -block_permutation(-k - 1) - 1;
    }
    if k == 0 {
        return 0;
    }
    let m = 63 - k.leading_zeros();
    let lo = 1i64 << m;
    let hi = (1i64 << (m + 1)) - 1;
    lo + hi - k
}

#[derive(Clone, Debug)]
pub struct LevitovSurface {
    pub cloud: LiftCloud,
    /// `(λ, μ)` of each point.
    pub params: Vec<(f64, f64)>,
    pub subperiods: [Subperiod; 2],
    pub q: [Vec<f64>; 2],
    pub r: [Vec<f64>; 2],
    pub f: Profile,
    pub g: Profile,
    pub radius: f64,
}

/// Samples `S_{f,g}` on the grid `step·Z` for `|λ|, |μ| ≤ radius`.
///
/// The two subperiods are the first pair of single-period shadows whose lifts
/// in `E` are not collinear.
pub fn levitov_surface(
    e: &SlopeSpec<AlgebraicNumber>,
    e2: &SlopeSpec<AlgebraicNumber>,
    f: Profile,
    g: Profile,
    radius: f64,
    step: f64,
) -> Result<LevitovSurface, PlanarityError> {
    if !planes_meet_trivially(e, e2) {
        return Err(PlanarityError::SlopesIntersect);
    }
    let shadows = subperiods(e).map_err(|_| PlanarityError::NoSubperiodPair)?;
    let singles: Vec<SubperiodLift> = shadows
        .iter()
        .filter(|s| s.count() == 1)
        .flat_map(|s| s.subperiods())
        .filter_map(|sp| lift(e, &sp).ok())
        .collect();
    let (a, b) = (0..singles.len())
        .flat_map(|a| (a + 1..singles.len()).map(move |b| (a, b)))
        .find(|&(a, b)| !collinear(&singles[a].vector, &singles[b].vector))
        .ok_or(PlanarityError::NoSubperiodPair)?;
    let (s1, s2) = (&singles[a], &singles[b]);
    let r_of = |sp: &Subperiod| -> Result<Vec<f64>, PlanarityError> {
        let v = lift_subperiod(e2, sp)
            .map_err(|_| PlanarityError::NoConjugateLift(format!("{:?} {}", sp.triple, sp.vector)))?;
        Ok(v.iter().map(AlgebraicNumber::to_f64).collect())
    };
    let q = [s1.to_f64(), s2.to_f64()];
    let r = [r_of(&s1.subperiod)?, r_of(&s2.subperiod)?];

    let n = e.n();
    let per_unit = (1.0 / step).round().max(1.0);
    let kmax = (radius * per_unit).floor() as i64;
    let mut points = Vec::new();
    let mut params = Vec::new();
    for kl in -kmax..=kmax {
        let lambda = kl as f64 / per_unit;
        let fl = f.eval(lambda);
        for km in -kmax..=kmax {
            let mu = km as f64 / per_unit;
            let gm = g.eval(mu);
            let p: Vec<f64> = (0..n)
                .map(|k| lambda * q[0][k] + mu * q[1][k] + fl * r[0][k] + gm * r[1][k])
                .collect();
            points.push(p);
            params.push((lambda, mu));
        }
    }
    Ok(LevitovSurface {
        cloud: LiftCloud::new(n, points, false)?,
        params,
        subperiods: [s1.subperiod.clone(), s2.subperiod.clone()],
        q,
        r,
        f,
        g,
        radius,
    })
}

impl LevitovSurface {
    /// Whether the shadow on the triple of subperiod `which` (0 or 1) is
    /// invariant under that subperiod: every point whose shadow parameter
    /// `s = λ + f(λ)` (resp. `μ + g(μ)`) satisfies `|s| < B − 1`, `B` the
    /// largest power of two not above the radius, has its translate within
    /// `tol` of another shadow point.
    pub fn shadow_is_periodic(&self, which: usize, tol: f64) -> Result<bool, PlanarityError> {
        let sp = &self.subperiods[which];
        let (i, j, k) = sp.triple;
        let period: Vec<f64> = sp.vector.to_f64();
        let project = |p: &[f64]| [p[i], p[j], p[k]];
        let h = tol.max(1e-12);
        let key = |y: [f64; 3]| y.map(|c| (c / h).round() as i64);
        let mut grid: HashMap<[i64; 3], Vec<[f64; 3]>> = HashMap::new();
        for p in &self.cloud.points {
            let y = project(p);
            grid.entry(key(y)).or_default().push(y);
        }
        let block = 2f64.powi(self.radius.max(1.0).log2().floor() as i32);
        let mut interior = 0usize;
        for (p, &(lambda, mu)) in self.cloud.points.iter().zip(&self.params) {
            let s = if which == 0 {
                lambda + self.f.eval(lambda)
            } else {
                mu + self.g.eval(mu)
            };
            if s.abs() >= block - 1.0 {
                continue;
            }
            interior += 1;
            let y = project(p);
            let t = [y[0] + period[0], y[1] + period[1], y[2] + period[2]];
            let c = key(t);
            let mut found = false;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(list) = grid.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                            if list.iter().any(|z| (0..3).all(|m| (z[m] - t[m]).abs() <= tol)) {
                                found = true;
                                break 'search;
                            }
                        }
                    }
                }
            }
            if !found {
                return Ok(false);
            }
        }
        if interior == 0 {
            return Err(PlanarityError::RankDeficient);
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarity::{conjugate_slope, thickness};
    use crate::presets;

    #[test]
    fn block_permutation_is_a_bijection() {
        let mut image: Vec<i64> = (-64..64).map(block_permutation).collect();
        image.sort_unstable();
        assert_eq!(image, (-64..64).collect::<Vec<_>>());
        assert_eq!(block_permutation(4), 7);
        assert_eq!(block_permutation(-1), -1);
        assert_eq!(block_permutation(-5), -8);
    }

    #[test]
    fn flat_surface_lies_in_e() {
        let e = presets::golden_octagonal();
        let e2 = conjugate_slope(&e, 0).unwrap();
        let s = levitov_surface(&e, &e2, Profile::Zero, Profile::Zero, 4.0, 0.5).unwrap();
        let t = thickness(&s.cloud, &e.to_f64()).unwrap();
        assert!(t.t < 1e-9);
        assert_eq!(levitov_surface(&e, &e, Profile::Zero, Profile::Zero, 4.0, 0.5).unwrap_err(), PlanarityError::SlopesIntersect);
    }

    #[test]
    fn staircase_keeps_shadows_periodic() {
        let e = presets::golden_octagonal();
        let e2 = conjugate_slope(&e, 0).unwrap();
        let s = levitov_surface(&e, &e2, Profile::Staircase, Profile::Staircase, 9.0, 0.25).unwrap();
        assert!(s.shadow_is_periodic(0, 1e-9).unwrap());
        assert!(s.shadow_is_periodic(1, 1e-9).unwrap());
        let c = levitov_surface(&e, &e2, Profile::Cubic, Profile::Cubic, 9.0, 0.25).unwrap();
        assert!(!c.shadow_is_periodic(0, 1e-9).unwrap());
    }
}
