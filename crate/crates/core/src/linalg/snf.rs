//! Smith normal form invariants and exact rank.

use num_bigint::BigInt;

use super::elim::{eliminate_units, Reduced};
use super::int::Int;
use super::matrix::{BigMatrix, IntMatrix, Matrix, SparseMatrix};

/// Nonzero invariant factors `d1 | d2 | ... | dr`, each at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        let one = BigInt::from(1);
        self.factors.iter().filter(|f| **f > one).cloned().collect()
    }
}

fn min_abs_in<T: Int>(a: &Matrix<T>, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<Option<(usize, usize)>> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let av = v.checked_abs()?;
            if best.as_ref().is_none_or(|b| av < b.2) {
                let unit = av.is_unit();
                best = Some((i, j, av));
                if unit {
                    let b = best.unwrap();
                    return Some(Some((b.0, b.1)));
                }
            }
        }
    }
    Some(best.map(|b| (b.0, b.1)))
}

/// Dense Smith reduction in place; returns the nonzero diagonal.
pub(crate) fn snf_dense<T: Int>(a: &mut Matrix<T>) -> Option<Vec<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_in(a, t..m, t..n)? else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).checked_div_floor(&p)?;
                a.row_sub_mul(i, t, &q, t)?;
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).checked_div_floor(&p)?;
                for i in t..m {
                    let s = a.get(i, t).clone();
                    if s.is_zero() {
                        continue;
                    }
                    let v = a.get(i, j).checked_sub_mul(&q, &s)?;
                    a.set(i, j, v);
                }
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                // A smaller remainder sits in row t or column t; bring it to the corner.
                let (ci, _) = min_abs_in(a, t..m, t..t + 1)?.unwrap_or((t, t));
                let (_, cj) = min_abs_in(a, t..t + 1, t..n)?.unwrap_or((t, t));
                let vi = a.get(ci, t).checked_abs()?;
                let vj = a.get(t, cj).checked_abs()?;
                if vi <= vj {
                    a.swap_rows(t, ci);
                } else {
                    a.swap_cols(t, cj);
                }
                continue;
            }
            // Row t and column t are clear; enforce divisibility of the rest.
            let p = a.get(t, t).clone();
            let mut bad_row = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    let v = a.get(i, j);
                    if !v.is_zero() {
                        let q = v.checked_div_floor(&p)?;
                        if !v.checked_sub_mul(&q, &p)?.is_zero() {
                            bad_row = Some(i);
                            break 'scan;
                        }
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    // row t += row i; column t of row i is zero so the pivot stays.
                    a.row_sub_mul(t, i, &T::one().checked_neg()?, t)?;
                }
                None => break,
            }
        }
        diag.push(a.get(t, t).checked_abs()?);
        t += 1;
    }
    Some(diag)
}

fn snf_sparse_generic<T: Int>(a: &SparseMatrix) -> Option<Vec<BigInt>> {
    let Reduced { unit_rank, mut rest } = eliminate_units::<T>(a)?;
    let tail = snf_dense(&mut rest)?;
    let mut factors = vec![BigInt::from(1); unit_rank];
    factors.extend(tail.iter().map(Int::to_bigint));
    factors.sort();
    Some(factors)
}

/// Smith invariants of a sparse matrix, promoting to `BigInt` on overflow.
pub fn smith_normal_form_sparse(a: &SparseMatrix) -> SnfResult {
    let factors = snf_sparse_generic::<i64>(a)
        .or_else(|| snf_sparse_generic::<BigInt>(a))
        .expect("bigint arithmetic cannot overflow");
    SnfResult { factors }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut d = a.clone();
    let factors = match snf_dense(&mut d) {
        Some(f) => f.iter().map(Int::to_bigint).collect(),
        None => invariant_factors_big(&a.to_big()),
    };
    SnfResult { factors }
}

pub fn invariant_factors_big(a: &BigMatrix) -> Vec<BigInt> {
    let mut d = a.clone();
    snf_dense::<BigInt>(&mut d).expect("bigint arithmetic cannot overflow")
}

/// Rank by fraction-free elimination, keeping rows primitive.
fn rank_dense<T: Int>(a: &mut Matrix<T>) -> Option<usize> {
    let (m, n) = (a.rows(), a.cols());
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        let Some(pi) = (r..m).find(|&i| !a.get(i, j).is_zero()) else { continue };
        a.swap_rows(r, pi);
        let p = a.get(r, j).clone();
        for i in r + 1..m {
            let v = a.get(i, j).clone();
            if v.is_zero() {
                continue;
            }
            let g = p.checked_gcd(&v)?;
            let (fp, fv) = (p.checked_div_exact(&g)?, v.checked_div_exact(&g)?);
            for k in j..n {
                let x = a.get(i, k).checked_mul(&fp)?.checked_sub_mul(&fv, a.get(r, k))?;
                a.set(i, k, x);
            }
            let c = super::int::content(a.row(i).iter())?;
            if !c.is_zero() && !c.is_unit() {
                for k in j..n {
                    let x = a.get(i, k).checked_div_exact(&c)?;
                    a.set(i, k, x);
                }
            }
        }
        r += 1;
    }
    Some(r)
}

fn rank_sparse_generic<T: Int>(a: &SparseMatrix) -> Option<usize> {
    let Reduced { unit_rank, mut rest } = eliminate_units::<T>(a)?;
    Some(unit_rank + rank_dense(&mut rest)?)
}

/// Rank over the rationals, computed exactly.
pub fn rank_sparse(a: &SparseMatrix) -> usize {
    rank_sparse_generic::<i64>(a)
        .or_else(|| rank_sparse_generic::<BigInt>(a))
        .expect("bigint arithmetic cannot overflow")
}

pub fn rank(a: &IntMatrix) -> usize {
    rank_sparse(&SparseMatrix::from_dense(a))
}
