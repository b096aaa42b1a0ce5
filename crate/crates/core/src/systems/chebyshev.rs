//! Subperiod systems of the n-fold slopes and their Chebyshev constraints.

use std::f64::consts::PI;

use num_traits::{One, Zero};

use super::{propagate_band, MPoly};
use crate::algebra::{integer, rational_to_f64, Rational, RationalPoly};
use crate::slope::{pair_index, pairs, SlopeError, PLUCKER_TOLERANCE};

/// `U_0 = 1`, `U_1 = 2X`, `U_{i+1} = 2X U_i − U_{i−1}`.
pub fn chebyshev_u(i: usize) -> RationalPoly {
    let two_x = RationalPoly::monomial(integer(2), 1);
    let (mut prev, mut cur) = (RationalPoly::one(), two_x.clone());
    if i == 0 {
        return prev;
    }
    for _ in 1..i {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Alternating recurrence in two variables (`X` index 0, `Y` index 1):
/// `U_1 = 2X`, `U_{2i} = 2Y U_{2i−1} − U_{2i−2}`, `U_{2i+1} = 2X U_{2i} − U_{2i−1}`.
pub fn chebyshev_u_xy(i: usize) -> MPoly {
    let two = integer(2);
    let (mut prev, mut cur) = (MPoly::constant(2, Rational::one()), MPoly::var(2, 0).scale(&two));
    if i == 0 {
        return prev;
    }
    for k in 2..=i {
        let var = if k % 2 == 0 { 1 } else { 0 };
        let next = MPoly::var(2, var).scale(&two).mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// A linear identity `G_a = factor · G_b` between coordinates of the
/// `m`-dimensional lift (0-based pairs).
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateIdentity {
    pub lhs: (usize, usize),
    pub factor: Rational,
    pub rhs: (usize, usize),
}

impl CoordinateIdentity {
    pub fn describe(&self) -> String {
        let name = |(i, j): (usize, usize)| format!("G{}_{}", i + 1, j + 1);
        let f = if self.factor.is_one() {
            String::new()
        } else if self.factor == -Rational::one() {
            "-".to_string()
        } else {
            format!("{}*", crate::algebra::format_rational(&self.factor))
        };
        format!("{} = {}{}", name(self.lhs), f, name(self.rhs))
    }
}

/// Outcome of the n-fold analysis.
#[derive(Clone, Debug)]
pub struct ChebyshevReport {
    pub n: usize,
    /// Dimension of the lift, `n` for odd `n` and `n/2` otherwise.
    pub m: usize,
    pub identities: Vec<CoordinateIdentity>,
    /// Extra identities when `12 | n`.
    pub extra_identities: Vec<CoordinateIdentity>,
    /// Classes of band coordinates `G_{i,i+1}`, `G_{i,i+2}` forced equal.
    pub band_classes: usize,
    /// `U_{m−2} = rhs` closes the band.
    pub rhs: i64,
    /// Constraint as a polynomial in `X` (`4 ∤ n`) or in `Z = XY` (`4 | n`).
    pub polynomial: RationalPoly,
    pub two_variables: bool,
    pub constraint: String,
    /// `|U_{m−2}(cos 2π/n) − rhs|`.
    pub nfold_residual: f64,
    /// All identities and Plücker relations hold on a sample of the
    /// solution set away from the n-fold point.
    pub family_consistent: bool,
    /// `band_classes − 2` (projective scaling and closing constraint) when
    /// the family is consistent.
    pub dimension: Option<usize>,
}

/// Position of `G_{a,b}` for arbitrary integer `b`, using `G_{i,j+n} = G_ij`
/// (odd `n`) or `G_{i,j+n/2} = −G_ij` (even `n`) and antisymmetry.
/// Returns `None` when the coordinate is diagonal (hence zero).
fn resolve(n: usize, m: usize, a: usize, b: i64) -> Option<(i64, usize, usize)> {
    let mi = m as i64;
    let t = b.div_euclid(mi);
    let b0 = b.rem_euclid(mi) as usize;
    let mut sign = if n % 2 == 0 && t % 2 != 0 { -1 } else { 1 };
    if b0 == a {
        return None;
    }
    if a < b0 {
        Some((sign, a, b0))
    } else {
        sign = -sign;
        Some((sign, b0, a))
    }
}

fn identity(n: usize, m: usize, lhs: (usize, i64), factor: i64, rhs: (usize, i64)) -> Option<CoordinateIdentity> {
    let (sl, a, b) = resolve(n, m, lhs.0, lhs.1)?;
    let (sr, c, d) = resolve(n, m, rhs.0, rhs.1)?;
    let id = CoordinateIdentity {
        lhs: (a, b),
        factor: integer(sl * sr * factor),
        rhs: (c, d),
    };
    if id.lhs == id.rhs && id.factor.is_one() {
        None
    } else {
        Some(id)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.parent[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Analyzes the subperiod identities `G_ij = G_{j,2j−i}` of the n-fold slope.
pub fn nfold_system(n: usize) -> Result<ChebyshevReport, SlopeError> {
    if n < 5 {
        return Err(SlopeError::NfoldTooSmall(n));
    }
    let m = if n % 2 == 1 { n } else { n / 2 };
    let mut identities = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            if let Some(id) = identity(n, m, (i, j as i64), 1, (j, 2 * j as i64 - i as i64)) {
                if !identities.contains(&id) {
                    identities.push(id);
                }
            }
        }
    }
    let mut extra_identities = Vec::new();
    if n % 12 == 0 {
        let p = (n / 12) as i64;
        for i in 0..m {
            let ii = i as i64;
            for other in [ii + p, ii + 5 * p] {
                if let Some(id) = identity(n, m, (i, ii + 3 * p), 2, (i, other)) {
                    if !extra_identities.contains(&id) {
                        extra_identities.push(id);
                    }
                }
            }
        }
    }

    let ncoords = m * (m - 1) / 2;
    let mut uf = UnionFind {
        parent: (0..ncoords).collect(),
    };
    for id in &identities {
        if id.factor.is_one() || id.factor == -Rational::one() {
            uf.union(pair_index(m, id.lhs.0, id.lhs.1), pair_index(m, id.rhs.0, id.rhs.1));
        }
    }
    let mut roots: Vec<usize> = pairs(m)
        .into_iter()
        .filter(|&(i, j)| j - i <= 2)
        .map(|(i, j)| uf.find(pair_index(m, i, j)))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    let band_classes = roots.len();

    // G_{1,m} = rhs · G_{m,m+1} and G_{m,m+1} = G_{m−1,m} = G_12.
    let (s, _, _) = resolve(n, m, m - 1, m as i64).expect("off-diagonal");
    let rhs = s;
    let two_variables = n % 4 == 0;
    let x_nfold = (2.0 * PI / n as f64).cos();
    let (polynomial, constraint, nfold_residual) = if two_variables {
        let u = chebyshev_u_xy(m - 2);
        let mut zc: Vec<Rational> = Vec::new();
        for (e, c) in u.terms() {
            assert_eq!(e[0], e[1], "U_(m-2) is a polynomial in XY");
            let d = e[0] as usize;
            if zc.len() <= d {
                zc.resize(d + 1, Rational::zero());
            }
            zc[d] += c;
        }
        let p = RationalPoly::new(zc);
        let residual = (p.eval_f64(x_nfold * x_nfold) - rhs as f64).abs();
        (p.clone(), describe_z_constraint(&(&p - &RationalPoly::from_i64(&[rhs]))), residual)
    } else {
        let p = chebyshev_u(m - 2);
        let residual = (p.eval_f64(x_nfold) - rhs as f64).abs();
        let text = format!("{} = {}", crate::algebra::poly_to_string(&p, "X"), rhs);
        (p, text, residual)
    };

    let family_consistent = check_family(n, m, &identities, &extra_identities, &polynomial, rhs, two_variables);
    // For m = 3 the closing coordinate G_{1,m} is itself in the band, so
    // the union-find has already absorbed the constraint.
    let constraints = if m > 3 { 2 } else { 1 };
    let dimension = if family_consistent {
        band_classes.checked_sub(constraints)
    } else {
        None
    };
    Ok(ChebyshevReport {
        n,
        m,
        identities,
        extra_identities,
        band_classes,
        rhs,
        polynomial,
        two_variables,
        constraint,
        nfold_residual,
        family_consistent,
        dimension,
    })
}

/// `"XY=1/2"` when the nondegenerate part is linear in `Z = XY`.
fn describe_z_constraint(q: &RationalPoly) -> String {
    // Z = 0 would make a band coordinate vanish; drop that factor.
    let mut q = q.clone();
    while !q.is_zero() && q.coeff(0).is_zero() {
        q = q.div_rem(&RationalPoly::x()).0;
    }
    if q.degree() == Some(1) {
        let root = -q.coeff(0) / q.coeff(1);
        format!("XY={}", crate::algebra::format_rational(&root))
    } else {
        format!("{} = 0", crate::algebra::poly_to_string(&q, "(XY)"))
    }
}

/// Builds the band from `X` (and `Y`), completes it and tests every identity
/// and Plücker relation numerically. For `4 | n` the sample point is off the
/// diagonal `X = Y`, so it probes the whole curve and not the n-fold point.
fn check_family(
    n: usize,
    m: usize,
    identities: &[CoordinateIdentity],
    extra: &[CoordinateIdentity],
    polynomial: &RationalPoly,
    rhs: i64,
    two_variables: bool,
) -> bool {
    let x_nfold = (2.0 * PI / n as f64).cos();
    let target = (polynomial - &RationalPoly::from_i64(&[rhs])).squarefree_part();
    let (x, y) = if two_variables {
        // Root of the Z-polynomial closest to the n-fold value.
        let z0 = x_nfold * x_nfold;
        let Some(z) = target
            .real_roots(None)
            .into_iter()
            .map(|(lo, hi)| {
                let (lo, hi) = target.refine_root(lo, hi, &Rational::new(1.into(), (1u64 << 60).into()));
                rational_to_f64(&((lo + hi) / integer(2)))
            })
            .filter(|z| *z > 0.0)
            .min_by(|a, b| (a - z0).abs().total_cmp(&(b - z0).abs()))
        else {
            return false;
        };
        let x = 1.3 * z.sqrt();
        (x, z / x)
    } else {
        (x_nfold, x_nfold)
    };
    let band1 = vec![1.0; m - 1];
    let band2: Vec<f64> = (0..m - 2).map(|i| if i % 2 == 0 { 2.0 * x } else { 2.0 * y }).collect();
    let Ok(g) = propagate_band(m, &band1, &band2) else {
        return false;
    };
    let scale = g.coords.iter().fold(1.0f64, |a, c| a.max(c.abs()));
    let tol = 1e-9 * scale;
    let holds = |id: &CoordinateIdentity| {
        (g.get(id.lhs.0, id.lhs.1) - rational_to_f64(&id.factor) * g.get(id.rhs.0, id.rhs.1)).abs() <= tol
    };
    identities.iter().all(holds)
        && extra.iter().all(holds)
        && g.plucker_violations(PLUCKER_TOLERANCE).is_empty()
}
