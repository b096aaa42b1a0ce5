//! Thickness and fitted slope of lifted point clouds, Levitov surfaces and
//! algebraic conjugation of slopes.

mod levitov;
pub mod lp;

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use crate::algebra::{AlgebraicNumber, Interval, NumberField};
use crate::slope::{grassmann, Grassmann, SlopeError, SlopeSpec};
use crate::tiling::{build_window_unchecked, TilingError};

pub use levitov::{block_permutation, levitov_surface, LevitovSurface, Profile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanarityError {
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("cloud is empty")]
    EmptyCloud,
    #[error("points have dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cloud does not span a plane (fewer than three affinely independent points)")]
    RankDeficient,
    #[error("thickness program failed: {0}")]
    Lp(#[from] lp::LpError),
    #[error("the minimal polynomial has no other real root (index {0} requested)")]
    NoOtherRealRoot(usize),
    #[error("slopes E and E' could not be certified to meet only at the origin")]
    SlopesIntersect,
    #[error("no pair of single-period subperiods with non-collinear lifts")]
    NoSubperiodPair,
    #[error("subperiod {0} does not lift into E'")]
    NoConjugateLift(String),
}

/// Points of `R^n`, usually lifted tiling vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftCloud {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    /// Vertices of a genuine rhombus tiling lift (thickness is then at least one).
    pub tiling: bool,
}

impl LiftCloud {
    pub fn new(n: usize, points: Vec<Vec<f64>>, tiling: bool) -> Result<Self, PlanarityError> {
        if points.is_empty() {
            return Err(PlanarityError::EmptyCloud);
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(PlanarityError::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        Ok(LiftCloud { n, points, tiling })
    }

    pub fn from_patch(p: &crate::tiling::Patch) -> Self {
        LiftCloud {
            n: p.n(),
            points: p.lift_points(),
            tiling: true,
        }
    }

    pub fn translated(&self, v: &[f64]) -> Self {
        LiftCloud {
            points: self
                .points
                .iter()
                .map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect())
                .collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThicknessReport {
    /// Thickness; for tiling lifts `max(1, raw)`, since a tiling lift has
    /// thickness at least one by definition.
    pub t: f64,
    /// Optimum of the program for this finite set of points.
    pub raw: f64,
    /// `w` with every `π⊥(x) ∈ w + t·π⊥([0,1]^n)`, in `E⊥` coordinates.
    pub offset: Vec<f64>,
    /// Slope fitted to the cloud, when it spans a plane.
    pub fitted: Option<SlopeFit>,
}

/// Smallest `t` such that the points fit in `E + w + [0,t]^n` for some `w`.
///
/// `x ∈ E + w + [0,t]^n` iff `π⊥(x − w) ∈ t Z` with `Z` the window zonotope,
/// so with facet normals `a` and support values `lo_a ≤ a·z ≤ hi_a` of `Z`
/// this is the linear program
/// `min t` s.t. `t·lo_a ≤ a·π⊥(x) − a·w ≤ t·hi_a` for all points and facets.
pub fn thickness(c: &LiftCloud, s: &SlopeSpec<f64>) -> Result<ThicknessReport, PlanarityError> {
    if s.n() != c.n {
        return Err(PlanarityError::DimensionMismatch {
            expected: c.n,
            got: s.n(),
        });
    }
    grassmann(s)?;
    let (proj, window) = build_window_unchecked(s)?;
    let d = proj.perp_dim();
    let perp: Vec<Vec<f64>> = c.points.iter().map(|x| proj.project_perp(x)).collect();
    // Center the data for conditioning.
    let mean: Vec<f64> = (0..d)
        .map(|k| perp.iter().map(|y| y[k]).sum::<f64>() / perp.len() as f64)
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for f in &window.facets {
        let vals = perp.iter().map(|y| {
            y.iter()
                .zip(&mean)
                .zip(&f.normal)
                .map(|((a, m), n)| (a - m) * n)
                .sum::<f64>()
        });
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        // Variables: t, w⁺ (d), w⁻ (d).
        let mut upper = vec![f.hi];
        upper.extend(f.normal.iter().copied());
        upper.extend(f.normal.iter().map(|a| -a));
        rows.push(upper);
        rhs.push(hi);
        let mut lower = vec![-f.lo];
        lower.extend(f.normal.iter().map(|a| -a));
        lower.extend(f.normal.iter().copied());
        rows.push(lower);
        rhs.push(-lo);
    }
    let mut cost = vec![0.0; 1 + 2 * d];
    cost[0] = 1.0;
    let (raw, z) = lp::minimize(&cost, &rows, &rhs)?;
    let offset: Vec<f64> = (0..d).map(|k| z[1 + k] - z[1 + d + k] + mean[k]).collect();
    let t = if c.tiling { raw.max(1.0) } else { raw };
    Ok(ThicknessReport {
        t,
        raw,
        offset,
        fitted: estimate_slope(c).ok(),
    })
}

/// Principal plane of a cloud.
#[derive(Clone, Debug)]
pub struct SlopeFit {
    pub spec: SlopeSpec<f64>,
    /// Grassmann coordinates scaled to unit norm, largest coordinate positive.
    pub grassmann: Grassmann<f64>,
    /// Root mean square distance of the centered points to the plane.
    pub residual: f64,
}

pub fn estimate_slope(c: &LiftCloud) -> Result<SlopeFit, PlanarityError> {
    let n = c.n;
    if c.points.len() < 3 {
        return Err(PlanarityError::RankDeficient);
    }
    let m = c.points.len() as f64;
    let mean: Vec<f64> = (0..n).map(|k| c.points.iter().map(|p| p[k]).sum::<f64>() / m).collect();
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for p in &c.points {
        for a in 0..n {
            let da = p[a] - mean[a];
            for b in 0..n {
                cov[(a, b)] += da * (p[b] - mean[b]);
            }
        }
    }
    cov /= m;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let (l0, l1) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    if !(l0 > 0.0) || l1 <= 1e-12 * l0 {
        return Err(PlanarityError::RankDeficient);
    }
    let col = |k: usize| -> Vec<f64> { eig.eigenvectors.column(order[k]).iter().copied().collect() };
    let spec = SlopeSpec { u: col(0), v: col(1) };
    let residual = (order[2..].iter().map(|&k| eig.eigenvalues[k].max(0.0)).sum::<f64>()).sqrt();
    let grassmann = unit_grassmann(&grassmann(&spec)?);
    Ok(SlopeFit {
        spec,
        grassmann,
        residual,
    })
}

/// Scales to unit Euclidean norm with the largest-magnitude coordinate positive.
pub fn unit_grassmann(g: &Grassmann<f64>) -> Grassmann<f64> {
    let norm = g.coords.iter().map(|x| x * x).sum::<f64>().sqrt();
    let big = g.coords.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let s = if big < 0.0 { -1.0 / norm } else { 1.0 / norm };
    Grassmann::new(g.n, g.coords.iter().map(|x| x * s).collect())
}

/// Distance between two planes given by Grassmann coordinates, up to scale.
pub fn grassmann_distance(a: &Grassmann<f64>, b: &Grassmann<f64>) -> f64 {
    let (ua, ub) = (unit_grassmann(a), unit_grassmann(b));
    ua.coords
        .iter()
        .zip(&ub.coords)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The same coefficient vectors read in the embedding sending the generator
/// to another real root of its minimal polynomial (`root_index` counts the
/// other real roots in increasing order).
pub fn conjugate_slope(
    s: &SlopeSpec<AlgebraicNumber>,
    root_index: usize,
) -> Result<SlopeSpec<AlgebraicNumber>, PlanarityError> {
    let field = s.u[0].field();
    let others = field.other_real_roots();
    let (lo, hi) = others
        .get(root_index)
        .cloned()
        .ok_or(PlanarityError::NoOtherRealRoot(root_index))?;
    let k: Arc<NumberField> =
        NumberField::new(field.minpoly().clone(), (lo, hi)).expect("isolating interval of a root");
    let conv = |xs: &[AlgebraicNumber]| -> Vec<AlgebraicNumber> {
        xs.iter().map(|x| x.with_field(&k).expect("same degree")).collect()
    };
    Ok(SlopeSpec {
        u: conv(&s.u),
        v: conv(&s.v),
    })
}

/// Certifies `E ∩ E' = {0}`: some 4×4 minor of `[u v u' v']` is nonzero.
///
/// Each minor is the bilinear form
/// `G_ab G'_cd − G_ac G'_bd + G_ad G'_bc + G_bc G'_ad − G_bd G'_ac + G_cd G'_ab`
/// evaluated in certified interval arithmetic (the two slopes may use
/// different embeddings of one field). Returns `false` when no minor can be
/// separated from zero; when both slopes share one embedding this is exact.
pub fn planes_meet_trivially(e: &SlopeSpec<AlgebraicNumber>, e2: &SlopeSpec<AlgebraicNumber>) -> bool {
    let n = e.n();
    if n < 4 || e2.n() != n {
        return false;
    }
    let quads = crate::slope::quadruples(n);
    if NumberField::same_field(e.u[0].field(), e2.u[0].field()) {
        let (g, h) = (grassmann(e), grassmann(e2));
        let (Ok(g), Ok(h)) = (g, h) else { return false };
        return quads.iter().any(|&(a, b, c, d)| {
            let m = &(&(&(&(&(&g.get(a, b) * &h.get(c, d)) - &(&g.get(a, c) * &h.get(b, d)))
                + &(&g.get(a, d) * &h.get(b, c)))
                + &(&g.get(b, c) * &h.get(a, d)))
                - &(&g.get(b, d) * &h.get(a, c)))
                + &(&g.get(c, d) * &h.get(a, b));
            !m.is_zero()
        });
    }
    let mut bits = 80;
    while bits <= 5120 {
        let enc = |s: &SlopeSpec<AlgebraicNumber>| -> (Vec<Interval>, Vec<Interval>) {
            (s.u.iter().map(|x| x.enclose(bits)).collect(), s.v.iter().map(|x| x.enclose(bits)).collect())
        };
        let (u, v) = enc(e);
        let (u2, v2) = enc(e2);
        let minor = |uu: &[Interval], vv: &[Interval], i: usize, j: usize| &(&uu[i] * &vv[j]) - &(&uu[j] * &vv[i]);
        let g = |i: usize, j: usize| minor(&u, &v, i, j);
        let h = |i: usize, j: usize| minor(&u2, &v2, i, j);
        let separated = quads.iter().any(|&(a, b, c, d)| {
            let m = &(&(&(&(&(&g(a, b) * &h(c, d)) - &(&g(a, c) * &h(b, d))) + &(&g(a, d) * &h(b, c)))
                + &(&g(b, c) * &h(a, d)))
                - &(&g(b, d) * &h(a, c)))
                + &(&g(c, d) * &h(a, b));
            !m.contains_zero()
        });
        if separated {
            return true;
        }
        bits *= 2;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::slope::Slope;
    use crate::subperiods::{all_subperiods, subperiods};
    use crate::tiling::{generate_patch_seeded, DEFAULT_SEED};

    #[test]
    fn canonical_patch_is_strongly_planar() {
        let s = presets::golden_octagonal();
        let p = generate_patch_seeded(&Slope::Exact(s.clone()), DEFAULT_SEED, 12.0).unwrap();
        let c = LiftCloud::from_patch(&p);
        let r = thickness(&c, &s.to_f64()).unwrap();
        assert!(r.raw <= 1.0 + 1e-9 && r.raw > 0.8, "{}", r.raw);
        assert_eq!(r.t, 1.0);
        let shifted = thickness(&c.translated(&[3.5, -2.0, 0.25, 7.0]), &s.to_f64()).unwrap();
        assert!((shifted.raw - r.raw).abs() < 1e-9);
    }

    #[test]
    fn plane_samples() {
        // Points of E itself: thickness zero, exact slope recovery.
        let s = presets::ammann_beenker().to_f64();
        let mut pts = Vec::new();
        for a in -3..=3 {
            for b in -3..=3 {
                pts.push((0..4).map(|k| a as f64 * s.u[k] + 0.5 * b as f64 * s.v[k]).collect());
            }
        }
        let c = LiftCloud::new(4, pts, false).unwrap();
        let r = thickness(&c, &s).unwrap();
        assert!(r.t.abs() < 1e-9);
        let fit = estimate_slope(&c).unwrap();
        let g = grassmann(&s).unwrap();
        assert!(grassmann_distance(&fit.grassmann, &g) < 1e-10);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn rank_deficient() {
        let c = LiftCloud::new(4, vec![vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0, 0.0]], false).unwrap();
        assert_eq!(estimate_slope(&c).unwrap_err(), PlanarityError::RankDeficient);
        assert!(LiftCloud::new(4, vec![], false).is_err());
    }

    #[test]
    fn conjugates() {
        let s = presets::golden_octagonal();
        let c = conjugate_slope(&s, 0).unwrap();
        assert!((c.u[2].to_f64() - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(conjugate_slope(&s, 1).is_err());
        let before: Vec<_> = all_subperiods(&subperiods(&s).unwrap());
        let after: Vec<_> = all_subperiods(&subperiods(&c).unwrap());
        assert_eq!(before, after);
        assert!(planes_meet_trivially(&s, &c));
        assert!(!planes_meet_trivially(&s, &s));
        let ab = conjugate_slope(&presets::ammann_beenker(), 0).unwrap();
        assert!((ab.u[1].to_f64() + 2f64.sqrt() / 2.0).abs() < 1e-12);
        let cubic = presets::cubic_dodecagonal();
        let roots: Vec<f64> = (0..2)
            .map(|k| conjugate_slope(&cubic, k).unwrap().u[3].to_f64())
            .collect();
        assert!((roots[0] + 1.246_979_603_717_467).abs() < 1e-12);
        assert!((roots[1] - 0.445_041_867_912_629).abs() < 1e-12);
    }
}
