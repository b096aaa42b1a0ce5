use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;

use super::{generate::Patch, TilingError};

/// Orthogonal projection of a lift onto three coordinates: a stepped surface in `Z^3`.
#[derive(Clone, Debug)]
pub struct Shadow {
    pub triple: (usize, usize, usize),
    /// Shadow points with the smallest tiling-plane radius among their preimages.
    pub points: BTreeMap<[i64; 3], f64>,
    /// Projected tiles that stay two-dimensional: `(anchor, a, b)` with local
    /// directions `a < b` in `0..3`.
    pub faces: BTreeSet<([i64; 3], usize, usize)>,
    /// Patch radius.
    pub radius: f64,
    /// Bound on the tiling-plane displacement per unit of shadow displacement.
    pub spread: f64,
    /// Diameter bound of the window in `E⊥`.
    pub window_diameter: f64,
    /// Longest tile edge in the tiling plane.
    pub max_edge: f64,
}

pub fn shadow(p: &Patch, triple: (usize, usize, usize)) -> Result<Shadow, TilingError> {
    let (a, b, c) = triple;
    let n = p.n();
    if a >= n || b >= n || c >= n || a == b || b == c || a == c {
        return Err(TilingError::BadIndices);
    }
    let idx = [a, b, c];
    let mut points: BTreeMap<[i64; 3], f64> = BTreeMap::new();
    for v in p.vertices() {
        let y = [v[a], v[b], v[c]];
        let ph = p.physical(&v);
        let r = ph[0].hypot(ph[1]);
        points
            .entry(y)
            .and_modify(|old| *old = old.min(r))
            .or_insert(r);
    }
    let faces = p
        .tiles
        .iter()
        .filter_map(|t| {
            let la = idx.iter().position(|&k| k == t.i)?;
            let lb = idx.iter().position(|&k| k == t.j)?;
            let y = [t.anchor[a], t.anchor[b], t.anchor[c]];
            Some((y, la.min(lb), la.max(lb)))
        })
        .collect();
    // Rows of the E basis at the triple; its pseudo-inverse norm bounds how
    // far apart in E two points with nearby shadows can be.
    let bm = DMatrix::from_fn(3, 2, |r, col| p.projection.basis_e[col][idx[r]]);
    let smin = bm.singular_values().min();
    let spread = if smin > 0.0 { p.scale() / smin } else { f64::INFINITY };
    Ok(Shadow {
        triple,
        points,
        faces,
        radius: p.radius,
        spread,
        window_diameter: 2.0 * p.window.radius_bound(),
        max_edge: p.max_edge(),
    })
}

impl Shadow {
    /// Points whose translates by `v` are certainly in the shadow of the
    /// infinite tiling's patch whenever they are in the infinite shadow.
    pub fn interior(&self, v: &[i64; 3]) -> Vec<[i64; 3]> {
        let vn = v.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
        let reach = self.spread * (vn + self.window_diameter) + self.max_edge;
        self.points
            .iter()
            .filter(|(_, &r)| r + reach <= self.radius)
            .map(|(y, _)| *y)
            .collect()
    }
}

/// Whether `v` translates every interior shadow point onto a shadow point.
pub fn empirical_period(s: &Shadow, v: &[i64; 3]) -> Result<bool, TilingError> {
    if v.iter().all(|&x| x == 0) {
        return Ok(true);
    }
    let interior = s.interior(v);
    if interior.is_empty() {
        return Err(TilingError::PatchTooSmall);
    }
    Ok(interior.iter().all(|y| {
        let t = [y[0] + v[0], y[1] + v[1], y[2] + v[2]];
        s.points.contains_key(&t)
    }))
}
