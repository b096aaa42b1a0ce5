//! r-maps (tiles meeting a disk of diameter r) and r-atlases of patches.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::tiling::{Patch, Tile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtlasError {
    #[error("diameter must be positive and finite")]
    BadRadius,
    #[error("patch too small: no vertex has its whole disk inside the patch")]
    PatchTooSmall,
    #[error("atlases use different diameters ({0} and {1})")]
    RadiusMismatch(f64, f64),
}

/// Tiles translated so that the lexicographically smallest anchor is zero, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternKey(pub Vec<Tile>);

impl PatternKey {
    pub fn canonical(tiles: &[Tile]) -> Self {
        let Some(min) = tiles.iter().map(|t| &t.anchor).min().cloned() else {
            return PatternKey(Vec::new());
        };
        let mut out: Vec<Tile> = tiles
            .iter()
            .map(|t| Tile {
                anchor: t.anchor.iter().zip(&min).map(|(a, m)| a - m).collect(),
                i: t.i,
                j: t.j,
            })
            .collect();
        out.sort();
        out.dedup();
        PatternKey(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atlas {
    /// Disk diameter.
    pub r: f64,
    pub patterns: BTreeSet<PatternKey>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub contained: bool,
    /// Patterns of the second atlas absent from the first.
    pub missing: Vec<PatternKey>,
}

/// Spatial index of tile centers.
struct TileGrid<'a> {
    patch: &'a Patch,
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl<'a> TileGrid<'a> {
    fn new(patch: &'a Patch, cell: f64) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (k, t) in patch.tiles.iter().enumerate() {
            let c = patch.tile_center(t);
            cells
                .entry(((c[0] / cell).floor() as i64, (c[1] / cell).floor() as i64))
                .or_default()
                .push(k);
        }
        TileGrid { patch, cell, cells }
    }

    /// Tiles whose centers lie within `reach` of `p`.
    fn near(&self, p: [f64; 2], reach: f64) -> Vec<usize> {
        let span = (reach / self.cell).ceil() as i64;
        let (cx, cy) = ((p[0] / self.cell).floor() as i64, (p[1] / self.cell).floor() as i64);
        let mut out = Vec::new();
        for dx in -span..=span {
            for dy in -span..=span {
                if let Some(list) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &k in list {
                        let c = self.patch.tile_center(&self.patch.tiles[k]);
                        if (c[0] - p[0]).hypot(c[1] - p[1]) <= reach {
                            out.push(k);
                        }
                    }
                }
            }
        }
        out
    }
}

fn distance_to_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Euclidean distance from `p` to a convex quadrilateral (zero inside).
pub fn distance_to_tile(poly: &[[f64; 2]; 4], p: [f64; 2]) -> f64 {
    let mut sign = 0.0;
    let mut inside = true;
    for k in 0..4 {
        let (a, b) = (poly[k], poly[(k + 1) % 4]);
        let cr = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        if sign == 0.0 {
            sign = cr.signum();
        } else if cr.signum() != sign && cr != 0.0 {
            inside = false;
        }
    }
    if inside {
        return 0.0;
    }
    (0..4)
        .map(|k| distance_to_segment(p, poly[k], poly[(k + 1) % 4]))
        .fold(f64::INFINITY, f64::min)
}

/// Tiles meeting the closed disk of diameter `r` centered at `center` (tiling-plane coordinates).
pub fn r_map(p: &Patch, center: [f64; 2], r: f64) -> Vec<Tile> {
    let grid = TileGrid::new(p, (r / 2.0 + p.max_edge()).max(1e-6));
    r_map_indexed(p, &grid, center, r)
}

fn r_map_indexed(p: &Patch, grid: &TileGrid, center: [f64; 2], r: f64) -> Vec<Tile> {
    let mut out: Vec<Tile> = grid
        .near(center, r / 2.0 + p.max_edge())
        .into_iter()
        .map(|k| &p.tiles[k])
        .filter(|t| distance_to_tile(&p.tile_polygon(t), center) <= r / 2.0 + 1e-12)
        .cloned()
        .collect();
    out.sort();
    out
}

/// Vertices whose disk lies well inside the patch: `‖c‖ + r/2 + max edge ≤ R`.
pub fn interior_centers(p: &Patch, r: f64) -> Vec<Vec<i64>> {
    let margin = r / 2.0 + p.max_edge();
    p.vertices()
        .into_iter()
        .filter(|v| {
            let c = p.physical(v);
            c[0].hypot(c[1]) + margin <= p.radius
        })
        .collect()
}

/// Canonical r-maps around every interior vertex.
pub fn r_atlas(p: &Patch, r: f64) -> Result<Atlas, AtlasError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(AtlasError::BadRadius);
    }
    let centers = interior_centers(p, r);
    if centers.is_empty() {
        return Err(AtlasError::PatchTooSmall);
    }
    let grid = TileGrid::new(p, (r / 2.0 + p.max_edge()).max(1e-6));
    let patterns = centers
        .iter()
        .map(|v| PatternKey::canonical(&r_map_indexed(p, &grid, p.physical(v), r)))
        .collect();
    Ok(Atlas { r, patterns })
}

/// Whether every pattern of `b` occurs in `a`.
pub fn atlas_contains(a: &Atlas, b: &Atlas) -> Result<Containment, AtlasError> {
    if (a.r - b.r).abs() > 1e-12 * a.r.abs().max(1.0) {
        return Err(AtlasError::RadiusMismatch(a.r, b.r));
    }
    let missing: Vec<PatternKey> = b.patterns.difference(&a.patterns).cloned().collect();
    Ok(Containment {
        contained: missing.is_empty(),
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::slope::Slope;
    use crate::tiling::{generate_patch, generate_patch_seeded, DEFAULT_SEED};

    fn golden(radius: f64) -> Patch {
        generate_patch_seeded(&Slope::Exact(presets::golden_octagonal()), DEFAULT_SEED, radius).unwrap()
    }

    #[test]
    fn canonical_is_idempotent() {
        let p = golden(6.0);
        let m = r_map(&p, [0.3, -0.2], 2.0);
        let k = PatternKey::canonical(&m);
        assert_eq!(PatternKey::canonical(&k.0), k);
        assert!(k.0.iter().any(|t| t.anchor.iter().all(|&x| x == 0)));
    }

    #[test]
    fn subpatch_atlas_is_contained() {
        let small = golden(12.0);
        let big = generate_patch(&small.slope, &small.offset, 18.0).unwrap();
        let a = r_atlas(&big, 1.5).unwrap();
        let b = r_atlas(&small, 1.5).unwrap();
        assert!(atlas_contains(&a, &b).unwrap().contained);
        let empty = Atlas {
            r: 1.5,
            patterns: BTreeSet::new(),
        };
        assert!(atlas_contains(&a, &empty).unwrap().contained);
        assert!(matches!(atlas_contains(&a, &r_atlas(&small, 1.0).unwrap()), Err(AtlasError::RadiusMismatch(..))));
    }

    #[test]
    fn maps_grow_with_the_diameter() {
        let p = golden(10.0);
        for v in interior_centers(&p, 3.0).into_iter().take(40) {
            let c = p.physical(&v);
            let small: BTreeSet<Tile> = r_map(&p, c, 1.0).into_iter().collect();
            let large: BTreeSet<Tile> = r_map(&p, c, 3.0).into_iter().collect();
            assert!(small.is_subset(&large));
            assert!(!small.is_empty());
        }
    }

    #[test]
    fn tiny_patch() {
        let p = golden(1.5);
        assert_eq!(r_atlas(&p, 2.0).unwrap_err(), AtlasError::PatchTooSmall);
        assert_eq!(r_atlas(&p, 0.0).unwrap_err(), AtlasError::BadRadius);
    }
}
