//! Subperiods of a slope: the integer relations `p G_jk − q G_ik + r G_ij = 0`,
//! their lifts in the slope, and the codimension-two planarity criterion.

use thiserror::Error;

use crate::algebra::{integer_kernel, AlgebraicNumber, IntegerVector, Rational};
use crate::scalar::Scalar;
use crate::slope::{grassmann, triples, Grassmann, SlopeError, SlopeSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubperiodError {
    #[error("the projection of the slope does not contain the vector: not a subperiod")]
    NoLift,
    #[error("the slope projects non-injectively onto the shadow; the lift is not unique")]
    NonUnique,
    #[error("the criterion applies to slopes in R^4 only, got n = {0}")]
    NotCodimTwo(usize),
    #[error("degenerate slope: coordinate G_{}{} vanishes", .0 + 1, .1 + 1)]
    DegenerateSlope(usize, usize),
    #[error(transparent)]
    Slope(#[from] SlopeError),
}

/// A prime period `(p, q, r)` of the `ijk`-shadow (indices 0-based, `i < j < k`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subperiod {
    pub triple: (usize, usize, usize),
    pub vector: IntegerVector,
}

impl Subperiod {
    pub fn new(triple: (usize, usize, usize), pqr: [i64; 3]) -> Self {
        Subperiod {
            triple,
            vector: IntegerVector::from_i64(&pqr),
        }
    }

    /// The subperiod as a vector of `Z^n` (zero outside the shadow coordinates).
    pub fn embedded(&self, n: usize) -> Vec<i64> {
        let mut out = vec![0; n];
        let pqr = self.vector.to_i64().expect("small subperiod");
        let (i, j, k) = self.triple;
        out[i] = pqr[0];
        out[j] = pqr[1];
        out[k] = pqr[2];
        out
    }
}

/// Periods of one shadow: a basis of its period lattice.
#[derive(Clone, Debug)]
pub struct ShadowPeriods {
    pub triple: (usize, usize, usize),
    pub periods: Vec<IntegerVector>,
}

impl ShadowPeriods {
    pub fn count(&self) -> usize {
        self.periods.len()
    }

    /// Count 3 means `G_ij = G_ik = G_jk = 0`: the shadow of the plane is a line.
    pub fn is_degenerate(&self) -> bool {
        self.periods.len() == 3
    }

    pub fn subperiods(&self) -> impl Iterator<Item = Subperiod> + '_ {
        self.periods.iter().map(move |v| Subperiod {
            triple: self.triple,
            vector: v.clone(),
        })
    }
}

/// Rational equations (one per power-basis component) of `p x − q y + r z = 0`.
fn relation_rows(x: &AlgebraicNumber, y: &AlgebraicNumber, z: &AlgebraicNumber) -> Vec<Vec<Rational>> {
    (0..x.coeffs().len())
        .map(|t| vec![x.coeffs()[t].clone(), -&y.coeffs()[t], z.coeffs()[t].clone()])
        .collect()
}

/// Period lattice of every shadow, from exact Grassmann coordinates.
pub fn subperiods_of_grassmann(g: &Grassmann<AlgebraicNumber>) -> Vec<ShadowPeriods> {
    triples(g.n)
        .into_iter()
        .map(|(i, j, k)| {
            let rows = relation_rows(&g.get(j, k), &g.get(i, k), &g.get(i, j));
            ShadowPeriods {
                triple: (i, j, k),
                periods: integer_kernel(&rows, 3),
            }
        })
        .collect()
}

pub fn subperiods(s: &SlopeSpec<AlgebraicNumber>) -> Result<Vec<ShadowPeriods>, SubperiodError> {
    Ok(subperiods_of_grassmann(&grassmann(s)?))
}

/// All subperiods, flattened in shadow order.
pub fn all_subperiods(shadows: &[ShadowPeriods]) -> Vec<Subperiod> {
    shadows.iter().flat_map(|s| s.subperiods()).collect()
}

/// Heuristic subperiods of a floating slope: small integer vectors `(p,q,r)`
/// with `|p|,|q|,|r| ≤ bound` whose relation residual is below `tol`.
///
/// Not exact: use only when no algebraic description of the slope is known.
pub fn subperiods_numeric(g: &Grassmann<f64>, bound: i64, tol: f64) -> Vec<ShadowPeriods> {
    let scale = g.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    triples(g.n)
        .into_iter()
        .map(|(i, j, k)| {
            let (x, y, z) = (g.get(j, k), g.get(i, k), g.get(i, j));
            let mut found: Vec<IntegerVector> = Vec::new();
            for p in -bound..=bound {
                for q in -bound..=bound {
                    for r in -bound..=bound {
                        let v = IntegerVector::from_i64(&[p, q, r]);
                        if v.is_zero() || !v.is_primitive() || v != v.normalized() {
                            continue;
                        }
                        let res = p as f64 * x - q as f64 * y + r as f64 * z;
                        if res.abs() <= tol * scale {
                            found.push(v);
                        }
                    }
                }
            }
            // Keep an independent family, smallest vectors first.
            found.sort_by_key(|v| {
                let e = v.to_i64().unwrap();
                (e.iter().map(|x| x.abs()).sum::<i64>(), std::cmp::Reverse(e))
            });
            let mut basis: Vec<IntegerVector> = Vec::new();
            for v in found {
                let mut rows: Vec<Vec<Rational>> = basis
                    .iter()
                    .chain(std::iter::once(&v))
                    .map(|b| b.entries.iter().map(|e| Rational::from_integer(e.clone())).collect())
                    .collect();
                if crate::algebra::linalg::rref(&mut rows, 3).len() == basis.len() + 1 {
                    basis.push(v);
                }
            }
            ShadowPeriods {
                triple: (i, j, k),
                periods: basis,
            }
        })
        .collect()
}

/// The vector of the slope projecting onto a subperiod.
#[derive(Clone, Debug)]
pub struct SubperiodLift {
    pub subperiod: Subperiod,
    pub vector: Vec<AlgebraicNumber>,
}

impl SubperiodLift {
    pub fn norm_squared(&self) -> AlgebraicNumber {
        let zero = self.vector[0].zero_like();
        self.vector.iter().fold(zero, |acc, x| &acc + &(x * x))
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().to_f64().sqrt()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.vector.iter().map(AlgebraicNumber::to_f64).collect()
    }
}

/// Solves `λ u + μ v = (p, q, r)` on the shadow coordinates.
pub fn lift_subperiod<T: Scalar>(
    s: &SlopeSpec<T>,
    sp: &Subperiod,
) -> Result<Vec<T>, SubperiodError> {
    let (i, j, k) = sp.triple;
    let idx = [i, j, k];
    let pqr: Vec<i64> = sp.vector.to_i64().expect("small subperiod");
    let target: Vec<T> = pqr.iter().map(|&x| s.u[0].from_int_like(x)).collect();
    // Pick the pair of shadow rows with a nonzero 2×2 minor.
    let minor = |a: usize, b: usize| {
        s.u[idx[a]]
            .times(&s.v[idx[b]])
            .minus(&s.u[idx[b]].times(&s.v[idx[a]]))
    };
    let (a, b, c, det) = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .into_iter()
        .map(|(a, b, c)| (a, b, c, minor(a, b)))
        .find(|(_, _, _, d)| !d.is_zero_value())
        .ok_or(SubperiodError::NonUnique)?;
    let inv = det.recip().ok_or(SubperiodError::NonUnique)?;
    let (ua, va, ub, vb) = (&s.u[idx[a]], &s.v[idx[a]], &s.u[idx[b]], &s.v[idx[b]]);
    let lambda = target[a].times(vb).minus(&target[b].times(va)).times(&inv);
    let mu = ua.times(&target[b]).minus(&ub.times(&target[a])).times(&inv);
    let check = lambda.times(&s.u[idx[c]]).plus(&mu.times(&s.v[idx[c]]));
    if !check.minus(&target[c]).is_zero_value() {
        return Err(SubperiodError::NoLift);
    }
    Ok(s.u
        .iter()
        .zip(&s.v)
        .map(|(x, y)| lambda.times(x).plus(&mu.times(y)))
        .collect())
}

pub fn lift(s: &SlopeSpec<AlgebraicNumber>, sp: &Subperiod) -> Result<SubperiodLift, SubperiodError> {
    Ok(SubperiodLift {
        subperiod: sp.clone(),
        vector: lift_subperiod(s, sp)?,
    })
}

/// Lifts of every subperiod, in shadow order.
pub fn all_lifts(s: &SlopeSpec<AlgebraicNumber>) -> Result<Vec<SubperiodLift>, SubperiodError> {
    let shadows = subperiods(s)?;
    all_subperiods(&shadows)
        .iter()
        .map(|sp| lift(s, sp))
        .collect()
}

/// Largest Euclidean norm of a subperiod lift (0 if there is none).
pub fn max_lift_norm(s: &SlopeSpec<AlgebraicNumber>) -> Result<f64, SubperiodError> {
    Ok(all_lifts(s)?
        .iter()
        .map(SubperiodLift::norm)
        .fold(0.0, f64::max))
}

/// Whether two exact vectors are parallel (all 2×2 minors vanish).
pub fn collinear(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> bool {
    for x in 0..a.len() {
        for y in x + 1..a.len() {
            if !(&(&a[x] * &b[y]) - &(&a[y] * &b[x])).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Why the criterion fails, when it does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevitovFailure {
    /// A rational direction lies in the plane (given as a primitive vector).
    RationalDirection(IntegerVector),
    /// Fewer than three shadows have exactly one period.
    TooFewSingleShadows(usize),
    /// Enough single-period shadows, but their lifts span at most two lines.
    CollinearLifts,
}

#[derive(Clone, Debug)]
pub struct LevitovVerdict {
    pub holds: bool,
    pub witness: Vec<SubperiodLift>,
    pub failure: Option<LevitovFailure>,
    pub shadows: Vec<ShadowPeriods>,
}

/// Integer vectors lying in the plane: `w ∧ u ∧ v = 0`.
pub fn rational_directions(g: &Grassmann<AlgebraicNumber>) -> Vec<IntegerVector> {
    let n = g.n;
    let mut rows = Vec::new();
    for (i, j, k) in triples(n) {
        for comp in relation_rows(&g.get(j, k), &g.get(i, k), &g.get(i, j)) {
            let mut row = vec![Rational::from_integer(0.into()); n];
            row[i] = comp[0].clone();
            row[j] = comp[1].clone();
            row[k] = comp[2].clone();
            rows.push(row);
        }
    }
    integer_kernel(&rows, n)
}

/// Codimension-two planarity criterion: three subperiods, each alone in its
/// shadow, whose lifts in the slope are pairwise non-collinear.
pub fn levitov_condition(s: &SlopeSpec<AlgebraicNumber>) -> Result<LevitovVerdict, SubperiodError> {
    if s.n() != 4 {
        return Err(SubperiodError::NotCodimTwo(s.n()));
    }
    let g = grassmann(s)?;
    if let Some(&(i, j)) = g.zero_pairs().first() {
        return Err(SubperiodError::DegenerateSlope(i, j));
    }
    let shadows = subperiods_of_grassmann(&g);
    let fail = |f: LevitovFailure, shadows: Vec<ShadowPeriods>| LevitovVerdict {
        holds: false,
        witness: Vec::new(),
        failure: Some(f),
        shadows,
    };
    if let Some(w) = rational_directions(&g).into_iter().next() {
        return Ok(fail(LevitovFailure::RationalDirection(w), shadows));
    }
    let singles: Vec<SubperiodLift> = shadows
        .iter()
        .filter(|sh| sh.count() == 1)
        .flat_map(|sh| sh.subperiods())
        .map(|sp| lift(s, &sp))
        .collect::<Result<_, _>>()?;
    if singles.len() < 3 {
        return Ok(fail(LevitovFailure::TooFewSingleShadows(singles.len()), shadows));
    }
    for a in 0..singles.len() {
        for b in a + 1..singles.len() {
            if collinear(&singles[a].vector, &singles[b].vector) {
                continue;
            }
            for c in b + 1..singles.len() {
                if !collinear(&singles[a].vector, &singles[c].vector)
                    && !collinear(&singles[b].vector, &singles[c].vector)
                {
                    return Ok(LevitovVerdict {
                        holds: true,
                        witness: vec![singles[a].clone(), singles[b].clone(), singles[c].clone()],
                        failure: None,
                        shadows,
                    });
                }
            }
        }
    }
    Ok(fail(LevitovFailure::CollinearLifts, shadows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn found(shadows: &[ShadowPeriods]) -> Vec<((usize, usize, usize), Vec<i64>)> {
        all_subperiods(shadows)
            .into_iter()
            .map(|s| (s.triple, s.vector.to_i64().unwrap()))
            .collect()
    }

    #[test]
    fn golden_octagonal_subperiods() {
        let sh = subperiods(&presets::golden_octagonal()).unwrap();
        assert_eq!(
            found(&sh),
            vec![
                ((0, 1, 2), vec![1, 1, 0]),
                ((0, 1, 3), vec![0, 1, 1]),
                ((0, 2, 3), vec![1, 1, 0]),
                ((1, 2, 3), vec![0, 1, 1]),
            ]
        );
    }

    #[test]
    fn golden_lift_matches_hand_value() {
        let s = presets::golden_octagonal();
        let l = lift(&s, &Subperiod::new((1, 2, 3), [0, 1, 1])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = [1.0 - phi, 0.0, 1.0, 1.0];
        for (x, e) in l.to_f64().iter().zip(expected) {
            assert!((x - e).abs() < 1e-12);
        }
        assert_eq!(
            lift(&s, &Subperiod::new((1, 2, 3), [1, 0, 0])).unwrap_err(),
            SubperiodError::NoLift
        );
    }

    #[test]
    fn rational_plane_lift_is_identity() {
        let k = crate::algebra::NumberField::rationals();
        let c = |x: i64| AlgebraicNumber::from_i64(&k, x);
        let s = SlopeSpec::new(vec![c(1), c(0), c(1), c(0)], vec![c(0), c(1), c(0), c(0)]).unwrap();
        let l = lift(&s, &Subperiod::new((0, 1, 2), [1, 0, 1])).unwrap();
        assert_eq!(l.to_f64(), vec![1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn levitov_golden_and_broken() {
        let v = levitov_condition(&presets::golden_octagonal()).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.len(), 3);

        // v = (0,1,1,2) is rational: the plane contains a rational line.
        let s = presets::golden_octagonal();
        let k = s.u[0].field().clone();
        let c = |x: i64| AlgebraicNumber::from_i64(&k, x);
        let broken = SlopeSpec::new(s.u.clone(), vec![c(0), c(1), c(1), c(2)]).unwrap();
        let verdict = levitov_condition(&broken).unwrap();
        assert!(!verdict.holds);
        assert!(verdict.shadows.iter().any(|sh| sh.count() == 2));
        assert_eq!(
            verdict.failure,
            Some(LevitovFailure::RationalDirection(IntegerVector::from_i64(&[0, 1, 1, 2])))
        );
    }
}
