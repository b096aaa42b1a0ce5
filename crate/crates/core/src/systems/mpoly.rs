use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{format_rational, Rational, RationalPoly};

/// Sparse polynomial over `Q` in `nvars` variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&k| self.terms.keys().any(|e| e[k] > 0))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, va * vb);
            }
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(crate::algebra::rational_to_f64(c), |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Leading term in graded-lexicographic order.
    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                da.cmp(&db).then_with(|| a.cmp(b))
            })
    }

    /// Scaled so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    /// As a univariate polynomial in variable `k`, if no other variable occurs.
    pub fn to_univariate(&self, k: usize) -> Option<RationalPoly> {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| i != k && x > 0) {
                return None;
            }
            let d = e[k] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] += c;
        }
        Some(RationalPoly::new(coeffs))
    }

    /// Renders with the given variable names, highest terms first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{k}", names[i])
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|k| format!("x{}", k + 1)).collect();
        f.write_str(&self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integer;

    #[test]
    fn arithmetic_and_display() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.mul(&y).sub(&MPoly::constant(2, integer(2)));
        assert_eq!(p.display_with(&["G13".into(), "G24".into()]), "G13*G24 - 2");
        assert_eq!(p.used_vars(), vec![0, 1]);
        let sq = x.mul(&x).sub(&x).sub(&MPoly::constant(2, integer(1)));
        assert_eq!(sq.to_univariate(0).unwrap(), RationalPoly::from_i64(&[-1, -1, 1]));
        assert!(p.to_univariate(0).is_none());
        assert!(x.sub(&x).is_zero());
    }
}
