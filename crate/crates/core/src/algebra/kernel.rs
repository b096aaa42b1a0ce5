use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Vector of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerVector {
    pub entries: Vec<BigInt>,
}

impl IntegerVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntegerVector { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntegerVector::new(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::zero(), |g, e| g.gcd(e))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides by the content and makes the first nonzero entry positive.
    pub fn normalized(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let sign = self
            .entries
            .iter()
            .find(|e| !e.is_zero())
            .map(|e| if e.is_negative() { -BigInt::one() } else { BigInt::one() })
            .unwrap();
        IntegerVector::new(self.entries.iter().map(|e| e / &g * &sign).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.entries.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.entries
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Display for IntegerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Basis of the lattice `{ v ∈ Z^ncols : M v = 0 }`.
///
/// The basis is the row Hermite normal form of the kernel lattice: vectors are
/// primitive, their first nonzero entry is positive, and they are listed in
/// echelon order (pivot columns increasing, i.e. decreasing lexicographic order).
pub fn integer_kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<IntegerVector> {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            assert_eq!(row.len(), ncols, "ragged matrix");
            clear_denominators(row)
        })
        .filter(|row| row.iter().any(|e| !e.is_zero()))
        .collect();

    // Row-reduce M^T while tracking the unimodular transform T: rows of T
    // whose image row is zero span the saturated kernel.
    let m = int_rows.len();
    let mut a: Vec<Vec<BigInt>> = (0..ncols)
        .map(|c| int_rows.iter().map(|r| r[c].clone()).collect())
        .collect();
    let mut t: Vec<Vec<BigInt>> = (0..ncols)
        .map(|r| (0..ncols).map(|c| BigInt::from((r == c) as i64)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m {
        if rank == ncols {
            break;
        }
        loop {
            // Smallest nonzero |entry| at or below the current pivot row.
            let pick = (rank..ncols)
                .filter(|&r| !a[r][col].is_zero())
                .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()));
            let Some(p) = pick else { break };
            a.swap(rank, p);
            t.swap(rank, p);
            let mut done = true;
            for r in rank + 1..ncols {
                if a[r][col].is_zero() {
                    continue;
                }
                let q = a[r][col].div_floor(&a[rank][col]);
                row_axpy(&mut a, r, rank, &q);
                row_axpy(&mut t, r, rank, &q);
                if !a[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                rank += 1;
                break;
            }
        }
    }
    let basis: Vec<Vec<BigInt>> = t.split_off(rank);
    hermite_rows(basis)
        .into_iter()
        .map(|v| IntegerVector::new(v).normalized())
        .collect()
}

/// `rows[target] -= q * rows[source]`
fn row_axpy(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = rows[source].clone();
    for (x, s) in rows[target].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    row.iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
        .collect()
}

/// Row Hermite normal form: positive pivots, entries above each pivot reduced
/// into `[0, pivot)`, zero rows dropped.
fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        loop {
            let pick = (rank..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&x, &y| rows[x][col].abs().cmp(&rows[y][col].abs()));
            let Some(p) = pick else { break };
            rows.swap(rank, p);
            let mut done = true;
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[rank][col]);
                row_axpy(&mut rows, r, rank, &q);
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                if rows[rank][col].is_negative() {
                    for x in rows[rank].iter_mut() {
                        *x = -x.clone();
                    }
                }
                for r in 0..rank {
                    let q = rows[r][col].div_floor(&rows[rank][col]);
                    row_axpy(&mut rows, r, rank, &q);
                }
                rank += 1;
                break;
            }
        }
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, rational};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| integer(x)).collect())
            .collect()
    }

    #[test]
    fn single_row() {
        let k = integer_kernel(&mat(&[&[1, -1, 0]]), 3);
        assert_eq!(k, vec![IntegerVector::from_i64(&[1, 1, 0]), IntegerVector::from_i64(&[0, 0, 1])]);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(integer_kernel(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 3).is_empty());
    }

    #[test]
    fn golden_relation() {
        // φ·p − φ·q = 0 over the basis {1, φ}: rows are the 1- and φ-components.
        let k = integer_kernel(&mat(&[&[0, 0, 0], &[1, -1, 0]]), 3);
        assert!(k.contains(&IntegerVector::from_i64(&[1, 1, 0])));
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn saturated_not_just_rational() {
        // 2x + 4y = 0: rational kernel spanned by (2,-1); integer kernel too, primitive.
        let k = integer_kernel(&[vec![rational(1, 3), rational(2, 3)]], 2);
        assert_eq!(k, vec![IntegerVector::from_i64(&[2, -1])]);
    }

    #[test]
    fn empty_matrix_gives_standard_basis() {
        let k = integer_kernel(&[], 3);
        assert_eq!(k.len(), 3);
        assert_eq!(k[0], IntegerVector::from_i64(&[1, 0, 0]));
    }

    fn rank_oracle(rows: &[Vec<i64>], ncols: usize) -> usize {
        // Floating elimination is fine for tiny integer matrices.
        let mut a: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..a.len()).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())) else { break };
            if a[p][c].abs() < 1e-9 {
                continue;
            }
            a.swap(rank, p);
            for r in 0..a.len() {
                if r != rank {
                    let f = a[r][c] / a[rank][c];
                    for k in 0..ncols {
                        a[r][k] -= f * a[rank][k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(
            rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 5), 0..4)
        ) {
            let m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| integer(x)).collect()).collect();
            let k = integer_kernel(&m, 5);
            prop_assert_eq!(k.len(), 5 - rank_oracle(&rows, 5));
            for v in &k {
                prop_assert!(v.is_primitive());
                for row in &rows {
                    let dot: BigInt = row.iter().zip(&v.entries).map(|(a, b)| BigInt::from(*a) * b).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
