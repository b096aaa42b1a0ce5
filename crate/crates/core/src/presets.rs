//! Exact slopes of the classical examples.

use std::sync::Arc;

use crate::algebra::{integer, rational, AlgebraicNumber, NumberField, RationalPoly};
use crate::slope::SlopeSpec;

/// `Q(φ)`, `φ² = φ + 1`, `φ ∈ (1, 2)`.
pub fn golden_field() -> Arc<NumberField> {
    NumberField::new(RationalPoly::from_i64(&[-1, -1, 1]), (integer(1), integer(2)))
        .expect("golden ratio field")
}

/// `Q(√2)`, `√2 ∈ (1, 2)`.
pub fn sqrt2_field() -> Arc<NumberField> {
    NumberField::new(RationalPoly::from_i64(&[-2, 0, 1]), (integer(1), integer(2)))
        .expect("sqrt 2 field")
}

/// `Q(a)` with `a³ = a² + 2a − 1`, `a ∈ (1, 2)` (`a = 2cos(π/7) ≈ 1.80194`).
pub fn cubic_field() -> Arc<NumberField> {
    NumberField::new(RationalPoly::from_i64(&[1, -2, -1, 1]), (integer(1), integer(2)))
        .expect("cubic field")
}

/// Builds an exact slope from rows of `(rational part, coefficient of α, ...)`.
fn spec(field: &Arc<NumberField>, u: &[&[(i64, i64)]], v: &[&[(i64, i64)]]) -> SlopeSpec<AlgebraicNumber> {
    let conv = |rows: &[&[(i64, i64)]]| -> Vec<AlgebraicNumber> {
        rows.iter()
            .map(|c| {
                AlgebraicNumber::from_coeffs(field, c.iter().map(|&(p, q)| rational(p, q)).collect())
                    .expect("coefficient vector fits the field")
            })
            .collect()
    };
    SlopeSpec::new(conv(u), conv(v)).expect("well-formed preset")
}

/// Golden octagonal slope `(-1,0,φ,φ)`, `(0,1,φ,1)`; coordinates `-(1,φ,1,φ,φ,1)`.
pub fn golden_octagonal() -> SlopeSpec<AlgebraicNumber> {
    let k = golden_field();
    let (z, one, phi) = (&[(0, 1)][..], &[(1, 1)][..], &[(0, 1), (1, 1)][..]);
    let m1 = &[(-1, 1)][..];
    spec(&k, &[m1, z, phi, phi], &[z, one, phi, one])
}

/// Ammann–Beenker slope `(cos kπ/4)_k`, `(sin kπ/4)_k`, `k = 0..3`, exact in `Q(√2)`.
pub fn ammann_beenker() -> SlopeSpec<AlgebraicNumber> {
    let k = sqrt2_field();
    let z = &[(0, 1)][..];
    let one = &[(1, 1)][..];
    let h = &[(0, 1), (1, 2)][..];
    let mh = &[(0, 1), (-1, 2)][..];
    spec(&k, &[one, h, z, mh], &[z, h, one, h])
}

/// Penrose slope `(φ,0,-φ,-1,1)`, `(-1,1,φ,0,-φ)`.
pub fn penrose() -> SlopeSpec<AlgebraicNumber> {
    let k = golden_field();
    let z = &[(0, 1)][..];
    let one = &[(1, 1)][..];
    let m1 = &[(-1, 1)][..];
    let phi = &[(0, 1), (1, 1)][..];
    let mphi = &[(0, 1), (-1, 1)][..];
    spec(&k, &[phi, z, mphi, m1, one], &[m1, one, phi, z, mphi])
}

/// Cubic dodecagonal slope `(-1,0,1,a,b,b)`, `(0,1,a,b,b,a)` with `b = a² − 1`.
pub fn cubic_dodecagonal() -> SlopeSpec<AlgebraicNumber> {
    let k = cubic_field();
    let z = &[(0, 1)][..];
    let one = &[(1, 1)][..];
    let m1 = &[(-1, 1)][..];
    let a = &[(0, 1), (1, 1)][..];
    let b = &[(-1, 1), (0, 1), (1, 1)][..];
    spec(&k, &[m1, z, one, a, b, b], &[z, one, a, b, b, a])
}

pub const PRESET_NAMES: [&str; 4] = ["golden-octagonal", "ammann-beenker", "penrose", "cubic-dodecagonal"];

pub fn by_name(name: &str) -> Option<SlopeSpec<AlgebraicNumber>> {
    match name {
        "golden-octagonal" | "golden" => Some(golden_octagonal()),
        "ammann-beenker" | "ab" => Some(ammann_beenker()),
        "penrose" => Some(penrose()),
        "cubic-dodecagonal" | "cubic" => Some(cubic_dodecagonal()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slope::grassmann;

    fn values(s: &SlopeSpec<AlgebraicNumber>) -> Vec<f64> {
        let g = grassmann(s).unwrap().normalized().unwrap();
        g.coords.iter().map(|c| c.to_f64()).collect()
    }

    #[test]
    fn golden_coordinates() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = [1.0, phi, 1.0, phi, phi, 1.0];
        for (g, e) in values(&golden_octagonal()).iter().zip(expected) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn ammann_beenker_coordinates() {
        let r = 2f64.sqrt();
        let expected = [1.0, r, 1.0, 1.0, r, 1.0];
        for (g, e) in values(&ammann_beenker()).iter().zip(expected) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn penrose_coordinates() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = [phi, 1.0, -1.0, -phi, phi, 1.0, -1.0, phi, 1.0, phi];
        for (g, e) in values(&penrose()).iter().zip(expected) {
            assert!((g - e / phi).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_coordinates() {
        let a = 1.801_937_735_804_838;
        let b = a * a - 1.0;
        let expected = [1.0, a, b, b, a, 1.0, a, b, b, 1.0, a, b, 1.0, a, 1.0];
        for (g, e) in values(&cubic_dodecagonal()).iter().zip(expected) {
            assert!((g - e).abs() < 1e-9, "{g} vs {e}");
        }
    }
}
