//! Dense two-phase simplex for small problems `min cᵀz, Az ≥ b, z ≥ 0`.
//! Bland's rule prevents cycling; problem sizes here are tens of rows.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

const EPS: f64 = 1e-11;

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for x in self.a[r].iter_mut() {
            *x /= p;
        }
        let prow = self.a[r].clone();
        for (k, row) in self.a.iter_mut().enumerate() {
            if k != r {
                let f = row[c];
                if f != 0.0 {
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x -= f * y;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost · z` over the columns allowed by `active`; returns the
    /// reduced costs' objective value.
    fn optimize(&mut self, cost: &[f64], active: &dyn Fn(usize) -> bool) -> Result<(), LpError> {
        let scale = cost.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        loop {
            // Reduced cost of column j: cost_j − Σ_r cost_{basis r} a_rj.
            let entering = (0..self.cols).filter(|&j| active(j)).find(|&j| {
                let rc = cost[j]
                    - self
                        .a
                        .iter()
                        .zip(&self.basis)
                        .map(|(row, &b)| cost[b] * row[j])
                        .sum::<f64>();
                rc < -EPS * scale
            });
            let Some(c) = entering else { return Ok(()) };
            let mut best: Option<(usize, f64)> = None;
            for (r, row) in self.a.iter().enumerate() {
                if row[c] > EPS {
                    let ratio = row[self.cols] / row[c];
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bv)) => {
                            if ratio < bv - EPS || (ratio <= bv + EPS && self.basis[r] < self.basis[br]) {
                                Some((r, ratio))
                            } else {
                                Some((br, bv))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = best else { return Err(LpError::Unbounded) };
            self.pivot(r, c);
        }
    }
}

/// Returns `(optimum, z)`.
pub fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<(f64, Vec<f64>), LpError> {
    let n = c.len();
    let m = a.len();
    // Columns: z (n), surplus (m), artificial (m).
    let cols = n + 2 * m;
    let mut t = Tableau {
        a: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cols,
    };
    for (r, (row, &rhs)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n);
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        let mut full = vec![0.0; cols + 1];
        for (k, x) in row.iter().enumerate() {
            full[k] = sign * x;
        }
        full[n + r] = -sign;
        full[n + m + r] = 1.0;
        full[cols] = sign * rhs;
        t.a.push(full);
        t.basis.push(n + m + r);
    }
    let mut phase1 = vec![0.0; cols];
    for x in phase1.iter_mut().skip(n + m) {
        *x = 1.0;
    }
    t.optimize(&phase1, &|_| true)?;
    let infeasibility: f64 = t
        .basis
        .iter()
        .zip(&t.a)
        .filter(|(&bcol, _)| bcol >= n + m)
        .map(|(_, row)| row[cols])
        .sum();
    let bscale = b.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    if infeasibility > 1e-9 * bscale {
        return Err(LpError::Infeasible);
    }
    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= n + m {
            if let Some(c) = (0..n + m).find(|&j| t.a[r][j].abs() > 1e-9) {
                t.pivot(r, c);
            }
        }
    }
    let mut phase2 = vec![0.0; cols];
    phase2[..n].copy_from_slice(c);
    t.optimize(&phase2, &|j| j < n + m)?;
    let mut z = vec![0.0; n];
    for (r, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            z[bcol] = t.a[r][cols];
        }
    }
    let value = c.iter().zip(&z).map(|(x, y)| x * y).sum();
    Ok((value, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_problem() {
        // min x + y, x + 2y ≥ 2, 3x + y ≥ 3 → (4/5, 3/5).
        let (v, z) = minimize(&[1.0, 1.0], &[vec![1.0, 2.0], vec![3.0, 1.0]], &[2.0, 3.0]).unwrap();
        assert!((v - 1.4).abs() < 1e-12);
        assert!((z[0] - 0.8).abs() < 1e-12 && (z[1] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x ≥ 1 and −x ≥ 0.
        assert_eq!(
            minimize(&[1.0], &[vec![1.0], vec![-1.0]], &[1.0, 0.0]),
            Err(LpError::Infeasible)
        );
        assert_eq!(minimize(&[-1.0], &[vec![1.0]], &[1.0]), Err(LpError::Unbounded));
    }

    #[test]
    fn negative_rhs() {
        // min x, −x ≥ −5, x ≥ −3 → 0.
        let (v, _) = minimize(&[1.0], &[vec![-1.0], vec![1.0]], &[-5.0, -3.0]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            rows in proptest::collection::vec((0.1f64..3.0, 0.1f64..3.0, 0.5f64..4.0), 1..5),
            c in (0.1f64..2.0, 0.1f64..2.0),
        ) {
            // Positive data: feasible and bounded. Oracle: best feasible vertex
            // among pairwise constraint intersections and axis intercepts.
            let a: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.0, r.1]).collect();
            let b: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let (v, _) = minimize(&[c.0, c.1], &a, &b).unwrap();
            let mut lines: Vec<(f64, f64, f64)> = rows.clone();
            lines.push((1.0, 0.0, 0.0));
            lines.push((0.0, 1.0, 0.0));
            let feasible = |x: f64, y: f64| x >= -1e-9 && y >= -1e-9 && rows.iter().all(|r| r.0 * x + r.1 * y >= r.2 - 1e-9);
            let mut best = f64::INFINITY;
            for p in 0..lines.len() {
                for q in p + 1..lines.len() {
                    let (a1, b1, c1) = lines[p];
                    let (a2, b2, c2) = lines[q];
                    let det = a1 * b2 - a2 * b1;
                    if det.abs() < 1e-12 { continue; }
                    let x = (c1 * b2 - c2 * b1) / det;
                    let y = (a1 * c2 - a2 * c1) / det;
                    if feasible(x, y) { best = best.min(c.0 * x + c.1 * y); }
                }
            }
            prop_assert!((v - best).abs() < 1e-7 * best.max(1.0));
        }
    }
}
