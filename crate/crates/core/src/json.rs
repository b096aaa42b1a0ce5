//! JSON encodings of slopes, patches, reports, atlases and clouds.
//!
//! Rationals are written as JSON integers when integral and as `"p/q"`
//! strings otherwise; both forms (and decimal strings) are accepted on input.
//! Pair and triple indices are 1-based in every document.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{format_rational, parse_rational, AlgebraicNumber, NumberField, Rational, RationalPoly};
use crate::atlas::{Atlas, Containment, PatternKey};
use crate::planarity::{LiftCloud, ThicknessReport};
use crate::presets;
use crate::slope::{pairs, Grassmann, Slope, SlopeSpec};
use crate::subperiods::{lift, ShadowPeriods};
use crate::systems::{coordinate_names, ChebyshevReport, Dimension, Intersection, ReducedSystem};
use crate::tiling::{build_projectors, Patch, Tile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("{0}")]
    Schema(String),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError::Schema(msg.into()))
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn rational_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Some(v) = q.numer().to_i64() {
            return json!(v);
        }
    }
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| JsonError::Schema(e.to_string())),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else {
                // Decimal literals are read by their text, not the nearest double.
                parse_rational(&n.to_string()).map_err(|e| JsonError::Schema(e.to_string()))
            }
        }
        _ => schema(format!("expected a rational, got {v}")),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| JsonError::Schema(format!("{what} must be an array")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| JsonError::Schema(format!("missing field \"{key}\"")))
}

fn f64_of(v: &Value, what: &str) -> Result<f64, JsonError> {
    v.as_f64().ok_or_else(|| JsonError::Schema(format!("{what} must be a number")))
}

fn f64_vec(v: &Value, what: &str) -> Result<Vec<f64>, JsonError> {
    array(v, what)?.iter().map(|x| f64_of(x, what)).collect()
}

fn index_of(v: &Value, n: usize, what: &str) -> Result<usize, JsonError> {
    match v.as_u64() {
        Some(k) if k >= 1 && (k as usize) <= n => Ok(k as usize - 1),
        _ => schema(format!("{what} must be an index in 1..={n}")),
    }
}

pub fn poly_to_json(p: &RationalPoly) -> Value {
    Value::Array(p.coeffs().iter().map(rational_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<RationalPoly, JsonError> {
    let coeffs = array(v, "polynomial")?
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RationalPoly::new(coeffs))
}

pub fn field_to_json(k: &NumberField) -> Value {
    let (lo, hi) = k.root_interval();
    json!({
        "minpoly": poly_to_json(k.minpoly()),
        "interval": [rational_to_json(lo), rational_to_json(hi)],
        "root": k.root_f64(),
    })
}

pub fn field_from_json(v: &Value) -> Result<Arc<NumberField>, JsonError> {
    let minpoly = poly_from_json(field(v, "minpoly")?)?;
    let iv = array(field(v, "interval")?, "interval")?;
    if iv.len() != 2 {
        return schema("interval must have two entries");
    }
    let (lo, hi) = (rational_from_json(&iv[0])?, rational_from_json(&iv[1])?);
    NumberField::new(minpoly, (lo, hi)).map_err(|e| JsonError::Schema(format!("field: {e}")))
}

/// Power-basis coefficients of an algebraic number.
pub fn algebraic_to_json(x: &AlgebraicNumber) -> Value {
    Value::Array(x.coeffs().iter().map(rational_to_json).collect())
}

/// Accepts a coefficient array (padded with zeros) or a single rational.
pub fn algebraic_from_json(k: &Arc<NumberField>, v: &Value) -> Result<AlgebraicNumber, JsonError> {
    let mut coeffs = match v {
        Value::Array(cs) => cs.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>()?,
        other => vec![rational_from_json(other)?],
    };
    if coeffs.len() > k.degree() {
        return schema(format!("coefficient array longer than the field degree {}", k.degree()));
    }
    coeffs.resize(k.degree(), Rational::from_integer(BigInt::from(0)));
    AlgebraicNumber::from_coeffs(k, coeffs).map_err(|e| JsonError::Schema(e.to_string()))
}

pub fn exact_spec_to_json(s: &SlopeSpec<AlgebraicNumber>) -> Value {
    json!({
        "n": s.n(),
        "mode": "exact",
        "field": field_to_json(s.u[0].field()),
        "u": s.u.iter().map(algebraic_to_json).collect::<Vec<_>>(),
        "v": s.v.iter().map(algebraic_to_json).collect::<Vec<_>>(),
    })
}

pub fn slope_to_json(s: &Slope) -> Value {
    match s {
        Slope::Exact(e) => exact_spec_to_json(e),
        Slope::Numeric(f) => json!({
            "n": f.n(),
            "mode": "numeric",
            "u": f.u,
            "v": f.v,
        }),
    }
}

/// Reads a slope document; `{"preset": name}` selects a built-in slope.
pub fn slope_from_json(v: &Value) -> Result<Slope, JsonError> {
    if let Some(name) = v.get("preset").and_then(Value::as_str) {
        return presets::by_name(name)
            .map(Slope::Exact)
            .ok_or_else(|| JsonError::Schema(format!("unknown preset \"{name}\"")));
    }
    let mode = v.get("mode").and_then(Value::as_str).unwrap_or(if v.get("field").is_some() {
        "exact"
    } else {
        "numeric"
    });
    let slope = match mode {
        "exact" => {
            let k = field_from_json(field(v, "field")?)?;
            let read = |key: &str| -> Result<Vec<AlgebraicNumber>, JsonError> {
                array(field(v, key)?, key)?.iter().map(|x| algebraic_from_json(&k, x)).collect()
            };
            let spec = SlopeSpec::new(read("u")?, read("v")?).map_err(|e| JsonError::Schema(e.to_string()))?;
            Slope::Exact(spec)
        }
        "numeric" => {
            let spec = SlopeSpec::new(f64_vec(field(v, "u")?, "u")?, f64_vec(field(v, "v")?, "v")?)
                .map_err(|e| JsonError::Schema(e.to_string()))?;
            Slope::Numeric(spec)
        }
        other => return schema(format!("unknown slope mode \"{other}\"")),
    };
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != slope.n() {
            return schema(format!("\"n\" is {n} but the generators have length {}", slope.n()));
        }
    }
    Ok(slope)
}

pub fn grassmann_exact_to_json(g: &Grassmann<AlgebraicNumber>) -> Value {
    json!({
        "legend": coordinate_names(g.n),
        "exact": g.coords.iter().map(algebraic_to_json).collect::<Vec<_>>(),
        "approx": g.coords.iter().map(AlgebraicNumber::to_f64).collect::<Vec<_>>(),
    })
}

pub fn grassmann_f64_to_json(g: &Grassmann<f64>) -> Value {
    json!({
        "legend": coordinate_names(g.n),
        "approx": g.coords,
    })
}

pub fn tile_to_json(t: &Tile) -> Value {
    json!({"anchor": t.anchor, "i": t.i + 1, "j": t.j + 1})
}

pub fn tile_from_json(v: &Value, n: usize) -> Result<Tile, JsonError> {
    let anchor: Vec<i64> = array(field(v, "anchor")?, "anchor")?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| JsonError::Schema("anchor entries must be integers".into())))
        .collect::<Result<_, _>>()?;
    if anchor.len() != n {
        return schema(format!("anchor has length {}, expected {n}", anchor.len()));
    }
    let i = index_of(field(v, "i")?, n, "tile index i")?;
    let j = index_of(field(v, "j")?, n, "tile index j")?;
    if i >= j {
        return schema("tile indices must satisfy i < j");
    }
    Ok(Tile { anchor, i, j })
}

pub fn patch_to_json(p: &Patch) -> Value {
    let mut m = Map::new();
    m.insert("slope".into(), slope_to_json(&p.slope));
    m.insert("offset".into(), json!(p.offset));
    m.insert("radius".into(), json!(p.radius));
    if let Some(seed) = p.seed {
        m.insert("seed".into(), json!(seed));
    }
    m.insert("tiles".into(), Value::Array(p.tiles.iter().map(tile_to_json).collect()));
    Value::Object(m)
}

/// Rebuilds a patch; the projection and window are recomputed from the slope.
pub fn patch_from_json(v: &Value) -> Result<Patch, JsonError> {
    let slope = slope_from_json(field(v, "slope")?)?;
    let n = slope.n();
    let (projection, window) =
        build_projectors(&slope.to_f64()).map_err(|e| JsonError::Schema(format!("slope: {e}")))?;
    let offset = f64_vec(field(v, "offset")?, "offset")?;
    if offset.len() != projection.perp_dim() {
        return schema(format!("offset has length {}, expected {}", offset.len(), projection.perp_dim()));
    }
    let radius = f64_of(field(v, "radius")?, "radius")?;
    let seed = v.get("seed").and_then(Value::as_u64);
    let mut tiles: Vec<Tile> = array(field(v, "tiles")?, "tiles")?
        .iter()
        .map(|t| tile_from_json(t, n))
        .collect::<Result<_, _>>()?;
    tiles.sort();
    tiles.dedup();
    let window = window.translated(&offset);
    Ok(Patch {
        slope,
        offset,
        radius,
        seed,
        tiles,
        projection,
        window,
    })
}

/// Per-shadow periods with their lifts in the slope.
pub fn subperiods_to_json(s: &SlopeSpec<AlgebraicNumber>, shadows: &[ShadowPeriods]) -> Value {
    Value::Array(
        shadows
            .iter()
            .map(|sh| {
                let (i, j, k) = sh.triple;
                let lifts: Vec<Value> = sh
                    .subperiods()
                    .map(|sp| match lift(s, &sp) {
                        Ok(l) => json!({
                            "exact": l.vector.iter().map(algebraic_to_json).collect::<Vec<_>>(),
                            "approx": l.to_f64(),
                            "norm": l.norm(),
                        }),
                        Err(_) => Value::Null,
                    })
                    .collect();
                json!({
                    "shadow": [i + 1, j + 1, k + 1],
                    "periods": sh.periods.iter().map(|p| p.to_i64().expect("small period")).collect::<Vec<_>>(),
                    "count": sh.count(),
                    "lift": lifts,
                })
            })
            .collect(),
    )
}

pub fn dimension_to_json(d: Dimension) -> Value {
    match d {
        Dimension::Zero => json!(0),
        Dimension::One => json!(1),
        other => json!(other.as_str()),
    }
}

pub fn system_to_json(r: &ReducedSystem) -> Value {
    let names = coordinate_names(r.relations.n);
    let solutions: Vec<Value> = r
        .solutions
        .iter()
        .map(|g| {
            let mut v = grassmann_exact_to_json(g);
            v["field"] = field_to_json(g.coords[0].field());
            v
        })
        .collect();
    json!({
        "n": r.relations.n,
        "relations": r.relations.describe(),
        "pivot": r.pivot.map(|p| names[p].clone()),
        "free": r.reduced.free.iter().map(|&c| names[c].clone()).collect::<Vec<_>>(),
        "variables": r.variable_names(),
        "residuals": r.residual_strings(),
        "minpoly": r.univariate.as_ref().map(poly_to_json),
        "dimension": dimension_to_json(r.dimension),
        "solutions": solutions,
    })
}

pub fn nfold_to_json(r: &ChebyshevReport) -> Value {
    json!({
        "n": r.n,
        "m": r.m,
        "dimension": r.dimension,
        "constraint": r.constraint,
        "variable": if r.two_variables { "XY" } else { "X" },
        "polynomial": poly_to_json(&r.polynomial),
        "rhs": r.rhs,
        "identities": r.identities.iter().map(|c| c.describe()).collect::<Vec<_>>(),
        "extra_identities": r.extra_identities.iter().map(|c| c.describe()).collect::<Vec<_>>(),
        "band_classes": r.band_classes,
        "family_consistent": r.family_consistent,
        "nfold_residual": r.nfold_residual,
    })
}

pub fn intersection_to_json(x: &Intersection) -> Value {
    json!({
        "dimension": x.dimension,
        "basis": x
            .basis
            .iter()
            .map(|b| b.iter().map(algebraic_to_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "approx": x
            .basis
            .iter()
            .map(|b| b.iter().map(AlgebraicNumber::to_f64).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn pattern_to_json(p: &PatternKey) -> Value {
    Value::Array(p.0.iter().map(tile_to_json).collect())
}

pub fn atlas_to_json(a: &Atlas) -> Value {
    json!({
        "r": a.r,
        "patterns": a.patterns.iter().map(pattern_to_json).collect::<Vec<_>>(),
    })
}

pub fn atlas_from_json(v: &Value) -> Result<Atlas, JsonError> {
    let r = f64_of(field(v, "r")?, "r")?;
    let mut patterns = BTreeSet::new();
    for p in array(field(v, "patterns")?, "patterns")? {
        let tiles = array(p, "pattern")?;
        let n = match tiles.first().and_then(|t| t.get("anchor")).and_then(Value::as_array) {
            Some(a) => a.len(),
            None => {
                patterns.insert(PatternKey(Vec::new()));
                continue;
            }
        };
        let tiles: Vec<Tile> = tiles.iter().map(|t| tile_from_json(t, n)).collect::<Result<_, _>>()?;
        patterns.insert(PatternKey::canonical(&tiles));
    }
    Ok(Atlas { r, patterns })
}

pub fn containment_to_json(c: &Containment) -> Value {
    json!({
        "contained": c.contained,
        "missing": c.missing.iter().map(pattern_to_json).collect::<Vec<_>>(),
    })
}

pub fn thickness_to_json(r: &ThicknessReport, reference: &Slope) -> Value {
    let fitted = r.fitted.as_ref().map(|f| {
        json!({
            "grassmann": grassmann_f64_to_json(&f.grassmann),
            "residual": f.residual,
        })
    });
    json!({
        "t": r.t,
        "raw": r.raw,
        "slope": slope_to_json(reference),
        "offset": r.offset,
        "fitted": fitted,
    })
}

pub fn cloud_to_json(c: &LiftCloud) -> Value {
    json!(c.points)
}

/// A bare array of points, or a patch document (its lifted vertices).
pub fn cloud_from_json(v: &Value) -> Result<LiftCloud, JsonError> {
    if v.get("tiles").is_some() {
        return Ok(LiftCloud::from_patch(&patch_from_json(v)?));
    }
    let points: Vec<Vec<f64>> = array(v, "cloud")?
        .iter()
        .map(|p| f64_vec(p, "cloud point"))
        .collect::<Result<_, _>>()?;
    let n = points.first().map(Vec::len).unwrap_or(0);
    LiftCloud::new(n, points, false).map_err(|e| JsonError::Schema(e.to_string()))
}

/// Tile frequencies keyed by pair, for reports.
pub fn frequencies_to_json(n: usize, values: &[f64]) -> Value {
    let mut m = Map::new();
    for ((i, j), f) in pairs(n).into_iter().zip(values) {
        m.insert(format!("T{}{}", i + 1, j + 1), json!(f));
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use crate::atlas::r_atlas;
    use crate::tiling::{generate_patch_seeded, DEFAULT_SEED};

    #[test]
    fn rationals() {
        assert_eq!(rational_to_json(&rational(-3, 1)), json!(-3));
        assert_eq!(rational_to_json(&rational(1, 2)), json!("1/2"));
        assert_eq!(rational_from_json(&json!("3/6")).unwrap(), rational(1, 2));
        assert_eq!(rational_from_json(&json!(0.25)).unwrap(), rational(1, 4));
        assert!(rational_from_json(&json!(true)).is_err());
    }

    #[test]
    fn slope_round_trip() {
        for name in presets::PRESET_NAMES {
            let s = Slope::Exact(presets::by_name(name).unwrap());
            let back = slope_from_json(&slope_to_json(&s)).unwrap();
            let (a, b) = (s.exact().unwrap(), back.exact().unwrap());
            assert_eq!(a.u, b.u);
            assert_eq!(a.v, b.v);
        }
        let golden = slope_from_json(&json!({"preset": "golden"})).unwrap();
        assert_eq!(golden.n(), 4);
        let num = slope_from_json(&json!({"u": [1.0, 0.5, 0.0, -0.5], "v": [0.0, 0.5, 1.0, 0.5]})).unwrap();
        assert!(matches!(num, Slope::Numeric(_)));
        assert!(slope_from_json(&json!({"n": 5, "u": [1.0, 0.0, 0.0, 0.0], "v": [0.0, 1.0, 0.0, 0.0]})).is_err());
    }

    #[test]
    fn patch_and_atlas_round_trip() {
        let p = generate_patch_seeded(&Slope::Exact(presets::golden_octagonal()), DEFAULT_SEED, 6.0).unwrap();
        let back = patch_from_json(&parse(&patch_to_json(&p).to_string()).unwrap()).unwrap();
        assert_eq!(back.tiles, p.tiles);
        assert_eq!(back.offset, p.offset);
        assert_eq!(back.seed, Some(DEFAULT_SEED));
        let a = r_atlas(&p, 1.0).unwrap();
        assert_eq!(atlas_from_json(&atlas_to_json(&a)).unwrap(), a);
    }
}
