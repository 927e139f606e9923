//! Incremental column independence over the rationals.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::int::{content, Int};
use super::matrix::SparseMatrix;

/// Reduced columns keyed by their lowest nonzero row.
struct ColumnSpan<T> {
    by_low: HashMap<u32, Vec<(u32, T)>>,
}

impl<T: Int> ColumnSpan<T> {
    fn new() -> Self {
        ColumnSpan { by_low: HashMap::new() }
    }

    /// Reduces `col` against the stored columns. Stores it and returns `true`
    /// if it is independent of them.
    fn insert(&mut self, col: &[(u32, i64)]) -> Option<bool> {
        let mut c: Vec<(u32, T)> = col.iter().map(|&(i, v)| (i, T::from_i64(v))).collect();
        while let Some(&(low, ref cv)) = c.last() {
            let Some(p) = self.by_low.get(&low) else {
                let g = content(c.iter().map(|e| &e.1))?;
                if !g.is_unit() {
                    for e in c.iter_mut() {
                        e.1 = e.1.checked_div_exact(&g)?;
                    }
                }
                self.by_low.insert(low, c);
                return Some(true);
            };
            let pv = &p.last().unwrap().1;
            let g = pv.checked_gcd(cv)?;
            let (fc, fp) = (pv.checked_div_exact(&g)?, cv.checked_div_exact(&g)?);
            c = combine(&c, &fc, p, &fp)?;
        }
        Some(false)
    }
}

/// `fa * a - fb * b` on sorted sparse vectors, dividing out the content.
fn combine<T: Int>(a: &[(u32, T)], fa: &T, b: &[(u32, T)], fb: &T) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (row, v) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            i += 1;
            (a[i - 1].0, a[i - 1].1.checked_mul(fa)?)
        } else if i == a.len() || b[j].0 < a[i].0 {
            j += 1;
            (b[j - 1].0, T::zero().checked_sub_mul(fb, &b[j - 1].1)?)
        } else {
            i += 1;
            j += 1;
            (a[i - 1].0, a[i - 1].1.checked_mul(fa)?.checked_sub_mul(fb, &b[j - 1].1)?)
        };
        if !v.is_zero() {
            out.push((row, v));
        }
    }
    let g = content(out.iter().map(|e| &e.1))?;
    if !g.is_zero() && !g.is_unit() {
        for e in out.iter_mut() {
            e.1 = e.1.checked_div_exact(&g)?;
        }
    }
    Some(out)
}

fn independence_generic<T: Int>(a: &SparseMatrix, order: &[usize]) -> Option<Vec<bool>> {
    let mut span = ColumnSpan::<T>::new();
    order.iter().map(|&j| span.insert(a.column(j))).collect()
}

/// Visits columns in `order`; entry `k` of the result says whether column
/// `order[k]` is independent of the columns visited before it.
pub fn independent_in_order(a: &SparseMatrix, order: &[usize]) -> Vec<bool> {
    independence_generic::<i64>(a, order)
        .or_else(|| independence_generic::<BigInt>(a, order))
        .expect("bigint arithmetic cannot overflow")
}
