//! Sparse elimination on unit pivots.
//!
//! Boundary matrices are mostly `±1`. Pivoting on a unit entry and taking the
//! Schur complement preserves both the rank and the Smith invariants while
//! removing one row and one column, so most of the matrix can be consumed
//! this way; only the part left without unit entries is densified.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::int::Int;
use super::matrix::{Matrix, SparseMatrix};

type Row<T> = Vec<(u32, T)>;

pub(crate) struct Reduced<T> {
    /// Number of unit pivots eliminated.
    pub unit_rank: usize,
    /// What remains, with empty rows and columns dropped.
    pub rest: Matrix<T>,
}

pub(crate) fn eliminate_units<T: Int>(a: &SparseMatrix) -> Option<Reduced<T>> {
    let nrows = a.rows();
    let ncols = a.cols();
    let mut rows: Vec<Row<T>> = vec![Vec::new(); nrows];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_count = vec![0usize; ncols];
    for (j, col) in a.columns().iter().enumerate() {
        for &(i, v) in col {
            rows[i as usize].push((j as u32, T::from_i64(v)));
            col_rows[j].push(i);
            col_count[j] += 1;
        }
    }
    // Columns were visited in order, so each row is already sorted.
    let mut row_alive = vec![true; nrows];
    let mut col_done = vec![false; ncols];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
        (0..ncols).map(|j| Reverse((col_count[j], j as u32))).collect();
    let mut unit_rank = 0;

    while let Some(Reverse((cnt, c))) = heap.pop() {
        let cu = c as usize;
        if col_done[cu] {
            continue;
        }
        if cnt != col_count[cu] {
            heap.push(Reverse((col_count[cu], c)));
            continue;
        }
        if cnt == 0 {
            col_done[cu] = true;
            continue;
        }
        // Live rows holding a unit in column c; prefer the shortest.
        let mut best: Option<(usize, u32)> = None;
        let mut live: Vec<u32> = Vec::with_capacity(col_rows[cu].len());
        for &r in &col_rows[cu] {
            let ru = r as usize;
            if !row_alive[ru] || live.contains(&r) {
                continue;
            }
            let Ok(pos) = rows[ru].binary_search_by_key(&c, |e| e.0) else {
                continue;
            };
            live.push(r);
            if rows[ru][pos].1.is_unit() && best.is_none_or(|(len, _)| rows[ru].len() < len) {
                best = Some((rows[ru].len(), r));
            }
        }
        col_rows[cu] = live;
        let Some((_, p)) = best else {
            // No unit here; leave the column for the dense stage.
            col_done[cu] = true;
            continue;
        };
        let pu = p as usize;
        let prow = std::mem::take(&mut rows[pu]);
        let u = prow[prow.binary_search_by_key(&c, |e| e.0).unwrap()].1.clone();
        let targets: Vec<u32> = col_rows[cu].iter().copied().filter(|&r| r != p).collect();
        for r in targets {
            let ru = r as usize;
            let pos = rows[ru].binary_search_by_key(&c, |e| e.0).unwrap();
            // u is ±1, so a / u = a * u.
            let f = rows[ru][pos].1.checked_mul(&u)?;
            let merged = sub_scaled(&rows[ru], &prow, &f, |col, delta| {
                let cu = col as usize;
                if delta > 0 {
                    col_rows[cu].push(r);
                    col_count[cu] += 1;
                } else {
                    col_count[cu] -= 1;
                }
                if !col_done[cu] {
                    heap.push(Reverse((col_count[cu], col)));
                }
            })?;
            rows[ru] = merged;
        }
        for &(col, _) in &prow {
            col_count[col as usize] -= 1;
            if !col_done[col as usize] && col != c {
                heap.push(Reverse((col_count[col as usize], col)));
            }
        }
        row_alive[pu] = false;
        col_done[cu] = true;
        unit_rank += 1;
    }

    // Collect the remainder.
    let live_rows: Vec<usize> = (0..nrows).filter(|&i| row_alive[i] && !rows[i].is_empty()).collect();
    let mut col_index = vec![u32::MAX; ncols];
    let mut next = 0u32;
    for &i in &live_rows {
        for (col, _) in &rows[i] {
            if col_index[*col as usize] == u32::MAX {
                col_index[*col as usize] = next;
                next += 1;
            }
        }
    }
    let mut rest = Matrix::zeros(live_rows.len(), next as usize);
    for (ri, &i) in live_rows.iter().enumerate() {
        for (col, v) in &rows[i] {
            rest.set(ri, col_index[*col as usize] as usize, v.clone());
        }
    }
    Some(Reduced { unit_rank, rest })
}

/// `a - f * b` for sorted sparse rows; `on_change(col, +1 | -1)` reports
/// entries that appear or vanish.
fn sub_scaled<T: Int, F: FnMut(u32, i32)>(
    a: &Row<T>,
    b: &Row<T>,
    f: &T,
    mut on_change: F,
) -> Option<Row<T>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = T::zero().checked_sub_mul(f, &b[j].1)?;
            on_change(b[j].0, 1);
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = a[i].1.checked_sub_mul(f, &b[j].1)?;
            if v.is_zero() {
                on_change(a[i].0, -1);
            } else {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}
