use std::collections::{BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_projectors, ProjectionPair, TilingError, Window, BOUNDARY_TOLERANCE};
use crate::slope::{pair_index, pairs, Slope};

/// Seed used when the caller does not pick an offset.
pub const DEFAULT_SEED: u64 = 0x7111_4e55;

/// Offsets redrawn after a boundary hit before giving up.
const OFFSET_ATTEMPTS: usize = 8;

/// The face `anchor + [0,1]e_i + [0,1]e_j` of `Z^n` (`i < j`, 0-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    pub anchor: Vec<i64>,
    pub i: usize,
    pub j: usize,
}

impl Tile {
    /// Lifted vertices in cyclic order: `x`, `x+e_i`, `x+e_i+e_j`, `x+e_j`.
    pub fn vertices(&self) -> [Vec<i64>; 4] {
        let mut a = self.anchor.clone();
        let v0 = a.clone();
        a[self.i] += 1;
        let v1 = a.clone();
        a[self.j] += 1;
        let v2 = a.clone();
        a[self.i] -= 1;
        [v0, v1, v2, a]
    }

    /// Edges as `(start, direction)`.
    fn edges(&self) -> [(Vec<i64>, usize); 4] {
        let mut ei = self.anchor.clone();
        ei[self.i] += 1;
        let mut ej = self.anchor.clone();
        ej[self.j] += 1;
        [
            (self.anchor.clone(), self.i),
            (self.anchor.clone(), self.j),
            (ej, self.i),
            (ei, self.j),
        ]
    }
}

/// A finite patch of the canonical tiling with window offset `offset`.
#[derive(Clone, Debug)]
pub struct Patch {
    pub slope: Slope,
    /// Window translation `c` in `E⊥` coordinates.
    pub offset: Vec<f64>,
    pub radius: f64,
    pub seed: Option<u64>,
    /// Sorted.
    pub tiles: Vec<Tile>,
    pub projection: ProjectionPair,
    pub window: Window,
}

impl Patch {
    pub fn n(&self) -> usize {
        self.projection.n
    }

    /// Factor from `π_E` coordinates to the tiling plane; chosen so that the
    /// squared edge lengths average to one (unit edges for n-fold slopes).
    pub fn scale(&self) -> f64 {
        plane_scale(self.n())
    }

    /// Position of a lifted point in the tiling plane.
    pub fn physical(&self, x: &[i64]) -> [f64; 2] {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let p = self.projection.project_e(&xf);
        [p[0] * self.scale(), p[1] * self.scale()]
    }

    /// Edge vectors `v_k` of the tiling.
    pub fn edge_vectors(&self) -> Vec<[f64; 2]> {
        let s = self.scale();
        self.projection
            .e_generators()
            .into_iter()
            .map(|e| [e[0] * s, e[1] * s])
            .collect()
    }

    pub fn max_edge(&self) -> f64 {
        self.edge_vectors()
            .iter()
            .map(|v| v[0].hypot(v[1]))
            .fold(0.0, f64::max)
    }

    pub fn tile_polygon(&self, t: &Tile) -> [[f64; 2]; 4] {
        let [a, b, c, d] = t.vertices();
        [self.physical(&a), self.physical(&b), self.physical(&c), self.physical(&d)]
    }

    pub fn tile_center(&self, t: &Tile) -> [f64; 2] {
        let p = self.physical(&t.anchor);
        let e = self.edge_vectors();
        [
            p[0] + 0.5 * (e[t.i][0] + e[t.j][0]),
            p[1] + 0.5 * (e[t.i][1] + e[t.j][1]),
        ]
    }

    pub fn vertices(&self) -> BTreeSet<Vec<i64>> {
        self.tiles.iter().flat_map(|t| t.vertices()).collect()
    }

    /// Lifted vertices as real points (the lift cloud).
    pub fn lift_points(&self) -> Vec<Vec<f64>> {
        self.vertices()
            .into_iter()
            .map(|v| v.into_iter().map(|x| x as f64).collect())
            .collect()
    }

    /// Number of tiles of each type, indexed like Grassmann coordinates.
    pub fn tile_counts(&self) -> Vec<usize> {
        let n = self.n();
        let mut counts = vec![0; n * (n - 1) / 2];
        for t in &self.tiles {
            counts[pair_index(n, t.i, t.j)] += 1;
        }
        counts
    }
}

pub(crate) fn plane_scale(n: usize) -> f64 {
    (n as f64 / 2.0).sqrt()
}

/// Tile-count proportions.
pub fn empirical_frequencies(p: &Patch) -> Vec<f64> {
    let counts = p.tile_counts();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// `−½ Σ g_k + u`, `u` uniform in `[−½, ½]^{n−2}`: the window center moves by
/// `u` away from the origin of `E⊥`.
pub fn random_offset(window: &Window, rng: &mut impl Rng) -> Vec<f64> {
    let mut c: Vec<f64> = (0..window.dim()).map(|_| rng.gen_range(-0.5..0.5)).collect();
    for g in &window.generators {
        for (ci, gi) in c.iter_mut().zip(g) {
            *ci -= 0.5 * gi;
        }
    }
    c
}

/// Patch with a pseudo-random offset; redraws the offset after boundary hits.
pub fn generate_patch_seeded(slope: &Slope, seed: u64, radius: f64) -> Result<Patch, TilingError> {
    let (_, window) = build_projectors(&slope.to_f64())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = TilingError::SingularOffset;
    for _ in 0..OFFSET_ATTEMPTS {
        let offset = random_offset(&window, &mut rng);
        match generate_patch(slope, &offset, radius) {
            Ok(mut p) => {
                p.seed = Some(seed);
                return Ok(p);
            }
            Err(TilingError::SingularOffset) => last = TilingError::SingularOffset,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// All tiles with center at most `radius` from the origin of the tiling
/// plane, restricted to the edge-connected component nearest the origin.
pub fn generate_patch(slope: &Slope, offset: &[f64], radius: f64) -> Result<Patch, TilingError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(TilingError::BadRadius);
    }
    let spec = slope.to_f64();
    let (projection, window0) = build_projectors(&spec)?;
    let n = projection.n;
    let d = projection.perp_dim();
    if offset.len() != d {
        return Err(TilingError::OffsetLength {
            expected: d,
            got: offset.len(),
        });
    }
    let window = window0.translated(offset);
    let scale = plane_scale(n);
    let max_edge = projection
        .e_generators()
        .iter()
        .map(|e| e[0].hypot(e[1]) * scale)
        .fold(0.0, f64::max);
    let reach = radius + max_edge;

    // Inverse of [g_k]_{k∉{i,j}} for each tile type.
    let solvers: Vec<((usize, usize), DMatrix<f64>)> = pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let cols: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
            let a = DMatrix::from_fn(d, d, |r, c| window.generators[cols[c]][r]);
            let inv = a.try_inverse().ok_or_else(|| TilingError::DegenerateSlope(vec![(i, j)]))?;
            Ok(((i, j), inv))
        })
        .collect::<Result<_, TilingError>>()?;

    let mut tiles: Vec<Tile> = Vec::new();
    let mut singular = false;
    enumerate_candidates(&projection, &window, reach / scale, |x| {
        if singular {
            return;
        }
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let y = projection.project_perp(&xf);
        let margin = window.margin(&y);
        if margin < -BOUNDARY_TOLERANCE {
            return;
        }
        if margin <= BOUNDARY_TOLERANCE {
            singular = true;
            return;
        }
        let rel = DVector::from_iterator(d, y.iter().zip(&window.offset).map(|(a, b)| a - b));
        for ((i, j), inv) in &solvers {
            let lambda = inv * &rel;
            let inside = lambda.iter().all(|&l| (-BOUNDARY_TOLERANCE..1.0 + BOUNDARY_TOLERANCE).contains(&l));
            if !inside {
                continue;
            }
            if lambda
                .iter()
                .any(|&l| l.abs() <= BOUNDARY_TOLERANCE || (l - 1.0).abs() <= BOUNDARY_TOLERANCE)
            {
                singular = true;
                return;
            }
            tiles.push(Tile {
                anchor: x.to_vec(),
                i: *i,
                j: *j,
            });
        }
    });
    if singular {
        return Err(TilingError::SingularOffset);
    }

    let mut patch = Patch {
        slope: slope.clone(),
        offset: offset.to_vec(),
        radius,
        seed: None,
        tiles: Vec::new(),
        projection,
        window,
    };
    tiles.retain(|t| {
        let c = patch.tile_center(t);
        c[0].hypot(c[1]) <= radius
    });
    patch.tiles = central_component(&patch, tiles);
    patch.tiles.sort();
    Ok(patch)
}

/// Edge-connected component containing the tile nearest the origin.
fn central_component(patch: &Patch, tiles: Vec<Tile>) -> Vec<Tile> {
    if tiles.is_empty() {
        return tiles;
    }
    let mut parent: Vec<usize> = (0..tiles.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut by_edge: HashMap<(Vec<i64>, usize), usize> = HashMap::new();
    for (k, t) in tiles.iter().enumerate() {
        for e in t.edges() {
            if let Some(&other) = by_edge.get(&e) {
                let (a, b) = (find(&mut parent, k), find(&mut parent, other));
                parent[a] = b;
            } else {
                by_edge.insert(e, k);
            }
        }
    }
    let nearest = (0..tiles.len())
        .min_by(|&a, &b| {
            let ca = patch.tile_center(&tiles[a]);
            let cb = patch.tile_center(&tiles[b]);
            ca[0].hypot(ca[1]).total_cmp(&cb[0].hypot(cb[1]))
        })
        .expect("nonempty");
    let root = find(&mut parent, nearest);
    let keep: Vec<bool> = (0..tiles.len()).map(|k| find(&mut parent, k) == root).collect();
    tiles
        .into_iter()
        .zip(keep)
        .filter_map(|(t, k)| k.then_some(t))
        .collect()
}

/// Calls `visit` on every `x ∈ Z^n` with
/// `‖π_E x‖²/reach² + ‖π⊥x − center‖²/ρ² ≤ 2` (Fincke–Pohst enumeration),
/// which contains every vertex within `reach` of the origin along `E`.
fn enumerate_candidates(p: &ProjectionPair, w: &Window, reach: f64, mut visit: impl FnMut(&[i64])) {
    let n = p.n;
    let rho = w.radius_bound() * (1.0 + 1e-9) + 1e-12;
    let be = DMatrix::from_fn(2, n, |r, c| p.basis_e[r][c]);
    let bp = DMatrix::from_fn(n - 2, n, |r, c| p.basis_perp[r][c]);
    let q = be.transpose() * &be / (reach * reach) + bp.transpose() * &bp / (rho * rho);
    // Center: zero along E, window center across.
    let center = w.center();
    let x0: Vec<f64> = (0..n)
        .map(|k| (0..n - 2).map(|r| p.basis_perp[r][k] * center[r]).sum())
        .collect();
    let chol = nalgebra::Cholesky::new(q).expect("positive definite form");
    let u = chol.l().transpose();
    let bound = 2.0;
    let mut x = vec![0i64; n];
    fn rec(
        level: usize,
        n: usize,
        u: &DMatrix<f64>,
        x0: &[f64],
        x: &mut Vec<i64>,
        partial: f64,
        bound: f64,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let tail: f64 = (level + 1..n).map(|j| u[(level, j)] * (x[j] as f64 - x0[j])).sum();
        let diag = u[(level, level)];
        let ctr = x0[level] - tail / diag;
        let slack = (bound - partial).max(0.0);
        let half = slack.sqrt() / diag.abs();
        let lo = (ctr - half).ceil() as i64;
        let hi = (ctr + half).floor() as i64;
        for v in lo..=hi {
            x[level] = v;
            let t = diag * (v as f64 - ctr);
            let s = partial + t * t;
            if s > bound {
                continue;
            }
            if level == 0 {
                visit(x);
            } else {
                rec(level - 1, n, u, x0, x, s, bound, visit);
            }
        }
    }
    rec(n - 1, n, &u, &x0, &mut x, 0.0, bound, &mut visit);
}
