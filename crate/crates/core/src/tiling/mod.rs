//! Canonical cut-and-project patches, their lifts and shadows.
//!
//! A lattice point `x ∈ Z^n` is a vertex when `π⊥(x) − c` lies in the window
//! `Z = Σ_k [0,1] g_k`, `g_k = π⊥(e_k)`. The face `x + [0,1]e_i + [0,1]e_j` is
//! a tile when `π⊥(x) − c ∈ Σ_{k∉{i,j}} [0,1) g_k`, which is the condition that
//! its dual `(n−2)`-face meets `E + γ` for `c = π⊥(γ) − ½ Σ_k g_k`.

mod generate;
mod shadow;

use thiserror::Error;

use crate::slope::{pairs, SlopeError, SlopeSpec};

pub use generate::{
    empirical_frequencies, generate_patch, generate_patch_seeded, random_offset, Patch, Tile, DEFAULT_SEED,
};
pub use shadow::{empirical_period, shadow, Shadow};

/// Relative size below which a Grassmann coordinate counts as zero when
/// building projections.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Distance to the window boundary treated as a boundary hit.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TilingError {
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error("slope is degenerate: tile types {0:?} never occur")]
    DegenerateSlope(Vec<(usize, usize)>),
    #[error("offset is singular: a lattice point projects onto the window boundary")]
    SingularOffset,
    #[error("offset has {got} coordinates, expected {expected}")]
    OffsetLength { expected: usize, got: usize },
    #[error("radius must be positive and finite")]
    BadRadius,
    #[error("patch too small: no shadow point is far enough from the boundary")]
    PatchTooSmall,
    #[error("indices must be distinct and below n")]
    BadIndices,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal bases of the slope `E` and of `E⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionPair {
    pub n: usize,
    /// Two orthonormal rows spanning `E`.
    pub basis_e: Vec<Vec<f64>>,
    /// `n − 2` orthonormal rows spanning `E⊥`.
    pub basis_perp: Vec<Vec<f64>>,
}

impl ProjectionPair {
    /// Gram–Schmidt on the generators; `E⊥` is completed from standard basis
    /// vectors, largest residual first.
    pub fn new(s: &SlopeSpec<f64>) -> Result<Self, TilingError> {
        let n = s.n();
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
        for g in [&s.u, &s.v] {
            let scale = norm(g);
            let r = residual(g, &basis);
            let nr = norm(&r);
            if scale == 0.0 || nr <= 1e-12 * scale {
                return Err(TilingError::Slope(SlopeError::DegenerateSlope));
            }
            basis.push(r.iter().map(|x| x / nr).collect());
        }
        while basis.len() < n {
            let best = (0..n)
                .map(|k| {
                    let mut e = vec![0.0; n];
                    e[k] = 1.0;
                    residual(&e, &basis)
                })
                .max_by(|a, b| norm(a).total_cmp(&norm(b)))
                .expect("n > 0");
            // Second pass keeps the rows orthogonal to rounding accuracy.
            let best = residual(&best, &basis);
            let nb = norm(&best);
            basis.push(best.iter().map(|x| x / nb).collect());
        }
        let basis_perp = basis.split_off(2);
        Ok(ProjectionPair {
            n,
            basis_e: basis,
            basis_perp,
        })
    }

    pub fn perp_dim(&self) -> usize {
        self.n - 2
    }

    /// Coordinates of `π_E(x)` in the orthonormal basis of `E`.
    pub fn project_e(&self, x: &[f64]) -> [f64; 2] {
        [dot(&self.basis_e[0], x), dot(&self.basis_e[1], x)]
    }

    /// Coordinates of `π⊥(x)` in the orthonormal basis of `E⊥`.
    pub fn project_perp(&self, x: &[f64]) -> Vec<f64> {
        self.basis_perp.iter().map(|b| dot(b, x)).collect()
    }

    /// `π⊥(e_k)` for every `k`.
    pub fn perp_generators(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|k| self.basis_perp.iter().map(|b| b[k]).collect())
            .collect()
    }

    /// `π_E(e_k)` for every `k`.
    pub fn e_generators(&self) -> Vec<[f64; 2]> {
        (0..self.n).map(|k| [self.basis_e[0][k], self.basis_e[1][k]]).collect()
    }

    /// Largest deviation of `[basis_e; basis_perp]` from an orthonormal matrix.
    pub fn orthonormality_error(&self) -> f64 {
        let rows: Vec<&Vec<f64>> = self.basis_e.iter().chain(&self.basis_perp).collect();
        let mut err = 0.0f64;
        for (a, ra) in rows.iter().enumerate() {
            for (b, rb) in rows.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                err = err.max((dot(ra, rb) - target).abs());
            }
        }
        err
    }
}

fn residual(x: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut r = x.to_vec();
    for b in basis {
        let c = dot(&r, b);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri -= c * bi;
        }
    }
    r
}

/// Bounding half-space pair `lo ≤ a·z ≤ hi` of the window, `a` a unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

/// The zonotope `offset + Σ_k [0,1] π⊥(e_k)` in `E⊥` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub generators: Vec<Vec<f64>>,
    /// Pairs of opposite facets (exact H-description of the zonotope).
    pub facets: Vec<Facet>,
    pub offset: Vec<f64>,
}

impl Window {
    /// Window of a projection pair, with zero offset.
    pub fn new(p: &ProjectionPair) -> Self {
        let generators = p.perp_generators();
        let facets = zonotope_facets(&generators, p.perp_dim());
        Window {
            generators,
            facets,
            offset: vec![0.0; p.perp_dim()],
        }
    }

    pub fn translated(&self, offset: &[f64]) -> Self {
        Window {
            offset: offset.to_vec(),
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    /// `offset + ½ Σ g_k`, the center of symmetry.
    pub fn center(&self) -> Vec<f64> {
        let mut c = self.offset.clone();
        for g in &self.generators {
            for (ci, gi) in c.iter_mut().zip(g) {
                *ci += 0.5 * gi;
            }
        }
        c
    }

    /// `½ Σ ‖g_k‖`, an upper bound on the distance from the center to any point.
    pub fn radius_bound(&self) -> f64 {
        0.5 * self.generators.iter().map(|g| norm(g)).sum::<f64>()
    }

    /// Projected hypercube vertices `offset + Σ_{k∈S} g_k` for all subsets `S`.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let n = self.generators.len();
        assert!(n <= 20, "2^n points requested for n = {n}");
        (0u32..1 << n)
            .map(|mask| {
                let mut p = self.offset.clone();
                for (k, g) in self.generators.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        for (pi, gi) in p.iter_mut().zip(g) {
                            *pi += gi;
                        }
                    }
                }
                p
            })
            .collect()
    }

    /// Signed slack of `y` (positive inside): the smallest facet margin.
    pub fn margin(&self, y: &[f64]) -> f64 {
        let z: Vec<f64> = y.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.facets
            .iter()
            .map(|f| {
                let t = dot(&f.normal, &z);
                (t - f.lo).min(f.hi - t)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.margin(y) >= -BOUNDARY_TOLERANCE
    }

    /// Vertices in counterclockwise order, for two-dimensional windows.
    pub fn polygon(&self) -> Option<Vec<[f64; 2]>> {
        if self.dim() != 2 {
            return None;
        }
        let pts: Vec<[f64; 2]> = self.points().into_iter().map(|p| [p[0], p[1]]).collect();
        Some(convex_hull(pts))
    }
}

/// Unit normals from generalized cross products of `(d−1)`-subsets of
/// generators, one per direction up to sign, with the support values.
fn zonotope_facets(generators: &[Vec<f64>], d: usize) -> Vec<Facet> {
    let mut normals: Vec<Vec<f64>> = Vec::new();
    if d == 1 {
        normals.push(vec![1.0]);
    } else {
        for subset in combinations(generators.len(), d - 1) {
            let rows: Vec<&Vec<f64>> = subset.iter().map(|&k| &generators[k]).collect();
            let mut a: Vec<f64> = (0..d)
                .map(|col| {
                    let minor = nalgebra::DMatrix::from_fn(d - 1, d - 1, |r, c| {
                        let cc = if c < col { c } else { c + 1 };
                        rows[r][cc]
                    });
                    let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                    sign * minor.determinant()
                })
                .collect();
            let na = norm(&a);
            let scale: f64 = rows.iter().map(|r| norm(r)).product();
            if na <= 1e-12 * scale.max(1e-300) {
                continue;
            }
            a.iter_mut().for_each(|x| *x /= na);
            if let Some(first) = a.iter().find(|x| x.abs() > 1e-9) {
                if *first < 0.0 {
                    a.iter_mut().for_each(|x| *x = -*x);
                }
            }
            if !normals.iter().any(|b| b.iter().zip(&a).all(|(x, y)| (x - y).abs() < 1e-9)) {
                normals.push(a);
            }
        }
    }
    normals
        .into_iter()
        .map(|a| {
            let (lo, hi) = generators.iter().fold((0.0, 0.0), |(lo, hi), g| {
                let t = dot(&a, g);
                (lo + t.min(0.0), hi + t.max(0.0))
            });
            Facet { normal: a, lo, hi }
        })
        .collect()
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Monotone chain; collinear points are dropped.
fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 1e-12 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull
}

/// Projection pair and zero-offset window of a slope, rejecting slopes with
/// vanishing Grassmann coordinates (their tilings miss tile types and the
/// selection rule degenerates).
pub fn build_projectors(s: &SlopeSpec<f64>) -> Result<(ProjectionPair, Window), TilingError> {
    let g = crate::slope::grassmann(s)?;
    let zero = g.near_zero_pairs(DEGENERACY_TOLERANCE);
    if !zero.is_empty() {
        return Err(TilingError::DegenerateSlope(zero));
    }
    let p = ProjectionPair::new(s)?;
    let w = Window::new(&p);
    Ok((p, w))
}

/// Window of an arbitrary plane, allowing degenerate slopes (used for the
/// thickness of clouds, where every coordinate plane is legitimate).
pub fn build_window_unchecked(s: &SlopeSpec<f64>) -> Result<(ProjectionPair, Window), TilingError> {
    let p = ProjectionPair::new(s)?;
    let w = Window::new(&p);
    Ok((p, w))
}

/// Index pairs in lexicographic order, re-exported for tile bookkeeping.
pub fn tile_types(n: usize) -> Vec<(usize, usize)> {
    pairs(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn coordinate_plane_window_is_unit_square() {
        let s = SlopeSpec::new(vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let (p, w) = build_window_unchecked(&s).unwrap();
        let poly = w.polygon().unwrap();
        assert_eq!(poly.len(), 4);
        let area = shoelace(&poly);
        assert!((area - 1.0).abs() < 1e-12);
        assert!(p.orthonormality_error() < 1e-12);
        assert!(build_projectors(&s).is_err());
    }

    fn shoelace(p: &[[f64; 2]]) -> f64 {
        let n = p.len();
        0.5 * (0..n)
            .map(|k| p[k][0] * p[(k + 1) % n][1] - p[(k + 1) % n][0] * p[k][1])
            .sum::<f64>()
    }

    #[test]
    fn ammann_beenker_window_is_regular_octagon() {
        let (p, w) = build_projectors(&presets::ammann_beenker().to_f64()).unwrap();
        assert!(p.orthonormality_error() < 1e-12);
        let poly = w.polygon().unwrap();
        assert_eq!(poly.len(), 8);
        let c = w.center();
        let radii: Vec<f64> = poly.iter().map(|v| ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2)).sqrt()).collect();
        let sides: Vec<f64> = (0..8)
            .map(|k| {
                let (a, b) = (poly[k], poly[(k + 1) % 8]);
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
            })
            .collect();
        for k in 1..8 {
            assert!((radii[k] - radii[0]).abs() < 1e-12);
            assert!((sides[k] - sides[0]).abs() < 1e-12);
        }
        assert_eq!(w.facets.len(), 4);
    }

    #[test]
    fn golden_window_has_eight_vertices() {
        let (_, w) = build_projectors(&presets::golden_octagonal().to_f64()).unwrap();
        assert_eq!(w.polygon().unwrap().len(), 8);
        assert!(w.contains(&w.center()));
    }

    #[test]
    fn facets_agree_with_hull_points() {
        // Every projected cube vertex is inside, and each facet is attained.
        let (_, w) = build_projectors(&presets::cubic_dodecagonal().to_f64()).unwrap();
        let pts = w.points();
        for p in &pts {
            assert!(w.contains(p));
        }
        for f in &w.facets {
            let hi = pts.iter().map(|p| dot(&f.normal, p)).fold(f64::NEG_INFINITY, f64::max);
            assert!((hi - f.hi).abs() < 1e-9);
        }
        let mut outside = w.center();
        outside[0] += 10.0;
        assert!(!w.contains(&outside));
    }
}
