//! Polynomial systems "subperiod relations + Plücker relations": linear
//! reduction, dimension classification, n-fold analysis and intersections of
//! lifted slopes.

mod chebyshev;
mod mpoly;

use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::linalg::{nullspace, rref_with_order};
use crate::algebra::{integer, AlgebraicNumber, NumberField, Rational, RationalPoly};
use crate::scalar::Scalar;
use crate::slope::{pair_index, pairs, quadruples, Grassmann, SlopeSpec};
use crate::subperiods::Subperiod;

pub use chebyshev::{chebyshev_u, chebyshev_u_xy, nfold_system, ChebyshevReport};
pub use mpoly::MPoly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("closed-form classification needs n = 4, got n = {0}")]
    NotCodimTwo(usize),
    #[error("the constraints only admit the zero vector")]
    InconsistentConstraints,
    #[error("index {} is not covered by any constraint", .0 + 1)]
    UncoveredIndex(usize),
    #[error("constraint {0}: {1}")]
    BadConstraint(usize, String),
    #[error("normalization pivot G_{}{} is not a free coordinate", .0 + 1, .1 + 1)]
    PivotNotFree(usize, usize),
    #[error("band propagation divides by a vanishing coordinate G_{}{}", .0 + 1, .1 + 1)]
    ZeroDivisor(usize, usize),
}

/// Rational linear equations on the `C(n,2)` Grassmann coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRelationSet {
    pub n: usize,
    pub rows: Vec<Vec<Rational>>,
}

impl LinearRelationSet {
    pub fn new(n: usize) -> Self {
        LinearRelationSet { n, rows: Vec::new() }
    }

    pub fn ncoords(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Adds `Σ c · G_ij = 0`, given as `(i, j, c)` with any order of `i, j`.
    pub fn push(&mut self, terms: &[(usize, usize, Rational)]) {
        let mut row = vec![Rational::zero(); self.ncoords()];
        for (i, j, c) in terms {
            let (a, b, c) = if i < j { (*i, *j, c.clone()) } else { (*j, *i, -c) };
            row[pair_index(self.n, a, b)] += c;
        }
        if row.iter().any(|c| !c.is_zero()) {
            self.rows.push(row);
        }
    }

    /// Whether `g` satisfies every relation exactly.
    pub fn satisfied_by<T: Scalar>(&self, g: &Grassmann<T>) -> bool {
        self.rows.iter().all(|row| {
            let zero = g.coords[0].zero_like();
            row.iter()
                .zip(&g.coords)
                .fold(zero.clone(), |acc, (c, x)| acc.plus(&x.times(&rational_like(x, c))))
                .is_zero_value()
        })
    }

    /// Human-readable equations such as `G12 - G23 = 0`.
    pub fn describe(&self) -> Vec<String> {
        let names = coordinate_names(self.n);
        self.rows
            .iter()
            .map(|row| {
                let mut p = MPoly::zero(names.len());
                for (k, c) in row.iter().enumerate() {
                    p = p.add(&MPoly::var(names.len(), k).scale(c));
                }
                format!("{} = 0", p.display_with(&names))
            })
            .collect()
    }
}

fn rational_like<T: Scalar>(x: &T, q: &Rational) -> T {
    // Exact rationals enter the other scalar types through numerator/denominator.
    use num_traits::ToPrimitive;
    let num = x.from_int_like(q.numer().to_i64().expect("small relation coefficient"));
    let den = x.from_int_like(q.denom().to_i64().expect("small relation coefficient"));
    num.times(&den.recip().expect("nonzero denominator"))
}

/// `G12, G13, ...` (1-based names, lexicographic).
pub fn coordinate_names(n: usize) -> Vec<String> {
    pairs(n)
        .into_iter()
        .map(|(i, j)| {
            if n <= 9 {
                format!("G{}{}", i + 1, j + 1)
            } else {
                format!("G{}_{}", i + 1, j + 1)
            }
        })
        .collect()
}

/// One equation `p G_jk − q G_ik + r G_ij = 0` per subperiod.
pub fn subperiod_relations(sps: &[Subperiod], n: usize) -> LinearRelationSet {
    let mut set = LinearRelationSet::new(n);
    for sp in sps {
        let (i, j, k) = sp.triple;
        let pqr = sp.vector.to_i64().expect("small subperiod");
        set.push(&[
            (j, k, integer(pqr[0])),
            (i, k, integer(-pqr[1])),
            (i, j, integer(pqr[2])),
        ]);
    }
    set
}

/// All quadruples `i<j<k<l` (0-based), each standing for
/// `G_ij G_kl = G_ik G_jl − G_il G_jk`.
pub fn plucker_relations(n: usize) -> Vec<(usize, usize, usize, usize)> {
    quadruples(n)
}

/// Row-reduced relations and the resulting parametrization.
#[derive(Clone, Debug)]
pub struct ReducedRelations {
    pub n: usize,
    pub rows: Vec<Vec<Rational>>,
    /// Eliminated coordinate of each row.
    pub pivots: Vec<usize>,
    /// Free coordinates, increasing.
    pub free: Vec<usize>,
    /// `coord = Σ_f substitution[coord][f] · free[f]`.
    pub substitution: Vec<Vec<Rational>>,
}

/// Reduced echelon form, eliminating the highest-index coordinates first so
/// that the lexicographically earliest coordinates remain free.
pub fn reduce(l: &LinearRelationSet) -> ReducedRelations {
    let nc = l.ncoords();
    let mut rows = l.rows.clone();
    let order: Vec<usize> = (0..nc).rev().collect();
    let pivots = rref_with_order(&mut rows, &order);
    let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
    let mut substitution = vec![vec![Rational::zero(); free.len()]; nc];
    for (f, &c) in free.iter().enumerate() {
        substitution[c][f] = Rational::one();
    }
    for (row, &pc) in rows.iter().zip(&pivots) {
        for (f, &c) in free.iter().enumerate() {
            substitution[pc][f] = -&row[c];
        }
    }
    ReducedRelations {
        n: l.n,
        rows,
        pivots,
        free,
        substitution,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Empty,
    Zero,
    One,
    Unknown,
}

impl Dimension {
    pub fn as_str(&self) -> &'static str {
        match self {
            Dimension::Empty => "empty",
            Dimension::Zero => "0",
            Dimension::One => "1",
            Dimension::Unknown => "unknown",
        }
    }
}

/// Linear relations, normalized and substituted into the Plücker relations.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub relations: LinearRelationSet,
    pub reduced: ReducedRelations,
    /// Coordinate normalized to one.
    pub pivot: Option<usize>,
    /// Coordinates left as unknowns (the variables of the residuals).
    pub variables: Vec<usize>,
    /// Every Plücker relation after substitution, in quadruple order.
    pub raw_residuals: Vec<((usize, usize, usize, usize), MPoly)>,
    /// Distinct nonzero residuals, each scaled to leading coefficient one.
    pub residuals: Vec<MPoly>,
    /// Common univariate residual when a single unknown remains.
    pub univariate: Option<RationalPoly>,
    pub dimension: Dimension,
    pub solutions: Vec<Grassmann<AlgebraicNumber>>,
}

impl ReducedSystem {
    pub fn variable_names(&self) -> Vec<String> {
        let names = coordinate_names(self.relations.n);
        self.variables.iter().map(|&c| names[c].clone()).collect()
    }

    pub fn residual_strings(&self) -> Vec<String> {
        let names = self.variable_names();
        self.residuals
            .iter()
            .map(|r| format!("{} = 0", r.display_with(&names)))
            .collect()
    }
}

/// Classifies the system with the default normalization: `G12 = 1` when
/// `G12` is free, otherwise the first free coordinate.
pub fn classify(l: &LinearRelationSet) -> ReducedSystem {
    let reduced = reduce(l);
    let pivot = reduced.free.first().copied();
    classify_reduced(l, reduced, pivot)
}

/// Same as [`classify`] with an explicit normalization coordinate.
pub fn classify_with_pivot(l: &LinearRelationSet, pivot: (usize, usize)) -> Result<ReducedSystem, SystemError> {
    let reduced = reduce(l);
    let c = pair_index(l.n, pivot.0, pivot.1);
    if !reduced.free.contains(&c) {
        return Err(SystemError::PivotNotFree(pivot.0, pivot.1));
    }
    Ok(classify_reduced(l, reduced, Some(c)))
}

/// Closed-form classification for slopes in `R^4` (a single Plücker relation).
pub fn classify_codim2(l: &LinearRelationSet) -> Result<ReducedSystem, SystemError> {
    if l.n != 4 {
        return Err(SystemError::NotCodimTwo(l.n));
    }
    Ok(classify(l))
}

fn classify_reduced(l: &LinearRelationSet, reduced: ReducedRelations, pivot: Option<usize>) -> ReducedSystem {
    let n = l.n;
    let Some(pivot) = pivot else {
        return ReducedSystem {
            relations: l.clone(),
            reduced,
            pivot: None,
            variables: Vec::new(),
            raw_residuals: Vec::new(),
            residuals: Vec::new(),
            univariate: None,
            dimension: Dimension::Empty,
            solutions: Vec::new(),
        };
    };
    let variables: Vec<usize> = reduced.free.iter().copied().filter(|&c| c != pivot).collect();
    let nv = variables.len();
    // Each coordinate as a polynomial in the variables, with the pivot set to one.
    let coord_poly: Vec<MPoly> = reduced
        .substitution
        .iter()
        .map(|coefs| {
            let mut p = MPoly::zero(nv);
            for (f, c) in coefs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let fc = reduced.free[f];
                let term = if fc == pivot {
                    MPoly::constant(nv, c.clone())
                } else {
                    let k = variables.iter().position(|&v| v == fc).unwrap();
                    MPoly::var(nv, k).scale(c)
                };
                p = p.add(&term);
            }
            p
        })
        .collect();
    let g = |i: usize, j: usize| &coord_poly[pair_index(n, i, j)];
    let raw_residuals: Vec<_> = quadruples(n)
        .into_iter()
        .map(|(i, j, k, m)| {
            let r = g(i, j)
                .mul(g(k, m))
                .sub(&g(i, k).mul(g(j, m)))
                .add(&g(i, m).mul(g(j, k)));
            ((i, j, k, m), r)
        })
        .collect();
    let mut residuals: Vec<MPoly> = Vec::new();
    for (_, r) in &raw_residuals {
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if !residuals.contains(&r) {
            residuals.push(r);
        }
    }

    let mut univariate = None;
    let mut solutions = Vec::new();
    let dimension = if residuals.is_empty() {
        match nv {
            0 => Dimension::Zero,
            1 => Dimension::One,
            _ => Dimension::Unknown,
        }
    } else if residuals.iter().any(|r| r.total_degree() == 0) {
        Dimension::Empty
    } else if nv == 1 {
        let common = residuals
            .iter()
            .map(|r| r.to_univariate(0).expect("single variable"))
            .fold(RationalPoly::zero(), |acc, p| acc.gcd(&p));
        let dim = if common.is_constant() {
            Dimension::Empty
        } else {
            solutions = univariate_solutions(&common, &coord_poly, n);
            if solutions.is_empty() {
                Dimension::Empty
            } else {
                Dimension::Zero
            }
        };
        univariate = Some(common);
        dim
    } else if nv == 2 && residuals.len() == 1 {
        Dimension::One
    } else {
        Dimension::Unknown
    };
    if dimension == Dimension::Zero && nv == 0 {
        let k = NumberField::rationals();
        solutions.push(Grassmann::new(
            n,
            coord_poly
                .iter()
                .map(|p| {
                    let c = p.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero);
                    AlgebraicNumber::from_rational(&k, c)
                })
                .collect(),
        ));
    }
    ReducedSystem {
        relations: l.clone(),
        reduced,
        pivot: Some(pivot),
        variables,
        raw_residuals,
        residuals,
        univariate,
        dimension,
        solutions,
    }
}

/// One Grassmann solution per real root of `p`, in the field that root generates.
fn univariate_solutions(p: &RationalPoly, coord_poly: &[MPoly], n: usize) -> Vec<Grassmann<AlgebraicNumber>> {
    let sq = p.squarefree_part();
    sq.real_roots(None)
        .into_iter()
        .map(|(lo, hi)| {
            let field = NumberField::new(sq.clone(), (lo, hi)).expect("isolating interval");
            let coords = coord_poly
                .iter()
                .map(|cp| {
                    let u = cp.to_univariate(0).expect("single variable");
                    AlgebraicNumber::from_poly(&field, &u)
                })
                .collect();
            Grassmann::new(n, coords)
        })
        .collect()
}

/// Result of intersecting the preimages of several partial slopes.
#[derive(Clone, Debug)]
pub struct Intersection {
    pub dimension: usize,
    pub basis: Vec<Vec<AlgebraicNumber>>,
}

/// The space `V` of vectors whose restriction to each index subset `S_k`
/// lies in the given plane (generated on those indices).
pub fn intersect_lifted_slopes(
    n: usize,
    constraints: &[(Vec<usize>, SlopeSpec<AlgebraicNumber>)],
) -> Result<Intersection, SystemError> {
    let field: Arc<NumberField> = constraints
        .first()
        .map(|(_, s)| s.u[0].field().clone())
        .ok_or(SystemError::InconsistentConstraints)?;
    let zero = AlgebraicNumber::zero(&field);
    let mut covered = vec![false; n];
    let mut rows: Vec<Vec<AlgebraicNumber>> = Vec::new();
    for (k, (subset, s)) in constraints.iter().enumerate() {
        if subset.len() != s.n() {
            return Err(SystemError::BadConstraint(k, "subset size differs from slope dimension".into()));
        }
        if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
            return Err(SystemError::BadConstraint(k, format!("index {} out of range", bad + 1)));
        }
        for &i in subset {
            covered[i] = true;
        }
        // Vectors orthogonal to the plane give the linear conditions on x|_S.
        let plane = vec![s.u.clone(), s.v.clone()];
        for w in nullspace(&plane, s.n(), &zero) {
            let mut row = vec![zero.clone(); n];
            for (&i, wi) in subset.iter().zip(w) {
                row[i] = wi;
            }
            rows.push(row);
        }
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(SystemError::UncoveredIndex(i));
    }
    let basis = nullspace(&rows, n, &zero);
    if basis.is_empty() {
        return Err(SystemError::InconsistentConstraints);
    }
    Ok(Intersection {
        dimension: basis.len(),
        basis,
    })
}

/// Restriction of a slope to an index subset (0-based).
pub fn restrict(s: &SlopeSpec<AlgebraicNumber>, subset: &[usize]) -> SlopeSpec<AlgebraicNumber> {
    SlopeSpec {
        u: subset.iter().map(|&i| s.u[i].clone()).collect(),
        v: subset.iter().map(|&i| s.v[i].clone()).collect(),
    }
}

/// Completes the band `G_{i,i+1}`, `G_{i,i+2}` of an `m`-dimensional plane to
/// all coordinates using `G_{i,i+1} G_{j-1,j} = G_{i,j-1} G_{i+1,j} − G_ij G_{i+1,j-1}`.
///
/// `band1[i] = G_{i,i+1}` (length `m−1`), `band2[i] = G_{i,i+2}` (length `m−2`).
pub fn propagate_band<T: Scalar>(m: usize, band1: &[T], band2: &[T]) -> Result<Grassmann<T>, SystemError> {
    assert_eq!(band1.len(), m - 1);
    assert_eq!(band2.len(), m - 2);
    let zero = band1[0].zero_like();
    let mut coords = vec![zero; m * (m - 1) / 2];
    for i in 0..m - 1 {
        coords[pair_index(m, i, i + 1)] = band1[i].clone();
    }
    for i in 0..m - 2 {
        coords[pair_index(m, i, i + 2)] = band2[i].clone();
    }
    for delta in 3..m {
        for i in 0..m - delta {
            let j = i + delta;
            let get = |a: usize, b: usize| coords[pair_index(m, a, b)].clone();
            let num = get(i, j - 1)
                .times(&get(i + 1, j))
                .minus(&get(i, i + 1).times(&get(j - 1, j)));
            let den = get(i + 1, j - 1);
            let inv = den.recip().ok_or(SystemError::ZeroDivisor(i + 1, j - 1))?;
            coords[pair_index(m, i, j)] = num.times(&inv);
        }
    }
    Ok(Grassmann::new(m, coords))
}
