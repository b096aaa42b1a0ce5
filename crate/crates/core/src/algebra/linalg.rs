//! Gaussian elimination over an exact field.

use crate::scalar::Scalar;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row. Zero rows are removed.
///
/// Pivot columns are chosen in the order given by `column_order`, which lets
/// callers decide which variables end up free.
pub fn rref_with_order<T: Scalar>(rows: &mut Vec<Vec<T>>, column_order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for &col in column_order {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero_value()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col]
            .recip()
            .expect("nonzero pivot must be invertible");
        for x in rows[rank].iter_mut() {
            *x = x.times(&inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero_value() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.minus(&f.times(p));
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

pub fn rref<T: Scalar>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize> {
    let order: Vec<usize> = (0..ncols).collect();
    rref_with_order(rows, &order)
}

pub fn rank<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{ x : rows · x = 0 }`, one vector per free column, with the free
/// coordinate set to one. `zero` supplies the field for empty matrices.
pub fn nullspace<T: Scalar>(rows: &[Vec<T>], ncols: usize, zero: &T) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let one = zero.one_like();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![zero.clone(); ncols];
            v[free] = one.clone();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = row[free].negated();
            }
            v
        })
        .collect()
}
