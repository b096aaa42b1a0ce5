//! SVG output for patches.

use std::collections::BTreeMap;
use std::fmt::Write;

use rhombus_core::slope::pairs;
use rhombus_core::tiling::Patch;

#[derive(Clone, Debug, PartialEq)]
pub struct Overlay {
    /// Center in tiling-plane units.
    pub center: [f64; 2],
    /// Diameter in tiling-plane units.
    pub diameter: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    /// Pixels per unit of length in the tiling plane.
    pub edge_px: f64,
    /// Fill for tile type `(i, j)`, 0-based, as `#rrggbb`. Missing types use the default palette.
    pub colors: BTreeMap<(usize, usize), String>,
    pub overlays: Vec<Overlay>,
    pub stroke_width: f64,
    pub stroke: String,
    /// Replacement edge vectors `v_k`; `None` keeps the projections of `e_k`.
    pub tile_vectors: Option<Vec<[f64; 2]>>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            edge_px: 40.0,
            colors: BTreeMap::new(),
            overlays: Vec::new(),
            stroke_width: 1.0,
            stroke: "#333333".into(),
            tile_vectors: None,
        }
    }
}

pub fn is_hex_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].bytes().all(|b| b.is_ascii_hexdigit())
}

impl RenderOptions {
    /// Checks the options against a patch of dimension `n`; the message names the offending option.
    pub fn validate(&self, n: usize) -> Result<(), String> {
        if !(self.edge_px.is_finite() && self.edge_px > 0.0) {
            return Err(format!("edge-px must be positive, got {}", self.edge_px));
        }
        if !(self.stroke_width.is_finite() && self.stroke_width >= 0.0) {
            return Err(format!("stroke-width must be nonnegative, got {}", self.stroke_width));
        }
        if !is_hex_color(&self.stroke) {
            return Err(format!("stroke: {:?} is not a #rrggbb color", self.stroke));
        }
        for (&(i, j), c) in &self.colors {
            if !(i < j && j < n) {
                return Err(format!("color: no tile type {}{} for n = {n}", i + 1, j + 1));
            }
            if !is_hex_color(c) {
                return Err(format!("color: {c:?} is not a #rrggbb color"));
            }
        }
        for o in &self.overlays {
            if !(o.diameter.is_finite() && o.diameter > 0.0) || !o.center.iter().all(|x| x.is_finite()) {
                return Err(format!("circle: bad overlay {:?}", o));
            }
        }
        if let Some(vs) = &self.tile_vectors {
            if vs.len() != n {
                return Err(format!("tile-vectors: expected {n} vectors, got {}", vs.len()));
            }
            for v in vs {
                if ((v[0].hypot(v[1])) - 1.0).abs() > 1e-6 {
                    return Err(format!("tile-vectors: ({}, {}) is not a unit vector", v[0], v[1]));
                }
            }
            for (i, j) in pairs(n) {
                let cross = vs[i][0] * vs[j][1] - vs[i][1] * vs[j][0];
                if cross.abs() < 1e-9 {
                    return Err(format!("tile-vectors: v{} and v{} are collinear", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }
}

/// Evenly spaced hues, fixed saturation and lightness.
pub fn default_palette(count: usize) -> Vec<String> {
    (0..count)
        .map(|k| {
            let h = k as f64 / count.max(1) as f64;
            let (r, g, b) = hsl_to_rgb(h, 0.55, 0.68);
            format!("#{r:02x}{g:02x}{b:02x}")
        })
        .collect()
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> (u8, u8, u8) {
    let q = if l < 0.5 { l * (1.0 + s) } else { l + s - l * s };
    let p = 2.0 * l - q;
    let channel = |t: f64| {
        let t = t.rem_euclid(1.0);
        let v = if t < 1.0 / 6.0 {
            p + (q - p) * 6.0 * t
        } else if t < 0.5 {
            q
        } else if t < 2.0 / 3.0 {
            p + (q - p) * (2.0 / 3.0 - t) * 6.0
        } else {
            p
        };
        (v * 255.0).round() as u8
    };
    (channel(h + 1.0 / 3.0), channel(h), channel(h - 1.0 / 3.0))
}

/// Three decimals, without a negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// One polygon per tile, in the patch's tile order; y points up in the tiling plane.
pub fn to_svg(p: &Patch, o: &RenderOptions) -> String {
    let n = p.n();
    let vectors = o.tile_vectors.clone().unwrap_or_else(|| p.edge_vectors());
    let place = |x: &[i64]| -> [f64; 2] {
        let mut q = [0.0, 0.0];
        for (k, &c) in x.iter().enumerate() {
            q[0] += c as f64 * vectors[k][0];
            q[1] += c as f64 * vectors[k][1];
        }
        [q[0] * o.edge_px, -q[1] * o.edge_px]
    };
    let palette = default_palette(n * (n - 1) / 2);
    let fill = |i: usize, j: usize| -> &str {
        o.colors
            .get(&(i, j))
            .map(String::as_str)
            .unwrap_or(&palette[rhombus_core::slope::pair_index(n, i, j)])
    };

    let polys: Vec<[[f64; 2]; 4]> = p
        .tiles
        .iter()
        .map(|t| {
            let [a, b, c, d] = t.vertices();
            [place(&a), place(&b), place(&c), place(&d)]
        })
        .collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    let mut extend = |x: f64, y: f64| {
        lo = [lo[0].min(x), lo[1].min(y)];
        hi = [hi[0].max(x), hi[1].max(y)];
    };
    for q in polys.iter().flatten() {
        extend(q[0], q[1]);
    }
    for c in &o.overlays {
        let r = c.diameter / 2.0 * o.edge_px;
        let (x, y) = (c.center[0] * o.edge_px, -c.center[1] * o.edge_px);
        extend(x - r, y - r);
        extend(x + r, y + r);
    }
    if !lo[0].is_finite() {
        lo = [0.0, 0.0];
        hi = [0.0, 0.0];
    }
    let pad = o.stroke_width + 2.0;
    let (x0, y0) = (lo[0] - pad, lo[1] - pad);
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num(w),
        num(h),
        num(x0),
        num(y0),
        num(w),
        num(h)
    );
    let _ = writeln!(
        s,
        "<g stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
        o.stroke,
        num(o.stroke_width)
    );
    for (t, q) in p.tiles.iter().zip(&polys) {
        let pts: Vec<String> = q.iter().map(|v| format!("{},{}", num(v[0]), num(v[1]))).collect();
        let _ = writeln!(
            s,
            "<polygon class=\"T{}{}\" points=\"{}\" fill=\"{}\"/>",
            t.i + 1,
            t.j + 1,
            pts.join(" "),
            fill(t.i, t.j)
        );
    }
    s.push_str("</g>\n");
    for c in &o.overlays {
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"{}\"/>",
            num(c.center[0] * o.edge_px),
            num(-c.center[1] * o.edge_px),
            num(c.diameter / 2.0 * o.edge_px),
            num(2.0 * o.stroke_width.max(0.5))
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palette_is_distinct_hex() {
        let p = default_palette(15);
        assert!(p.iter().all(|c| is_hex_color(c)));
        let mut q = p.clone();
        q.sort();
        q.dedup();
        assert_eq!(q.len(), 15);
    }

    #[test]
    fn number_format() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(1.23456), "1.235");
    }

    #[test]
    fn validation_names_the_option() {
        let mut o = RenderOptions::default();
        assert!(o.validate(4).is_ok());
        o.edge_px = 0.0;
        assert!(o.validate(4).unwrap_err().starts_with("edge-px"));
        o.edge_px = 10.0;
        o.colors.insert((0, 1), "red".into());
        assert!(o.validate(4).unwrap_err().starts_with("color"));
        o.colors.clear();
        o.tile_vectors = Some(vec![[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(o.validate(4).unwrap_err().contains("collinear"));
    }
}
