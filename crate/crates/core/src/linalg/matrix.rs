use std::fmt;

use num_bigint::BigInt;

use super::int::Int;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Machine-width integer matrix; results that may grow are returned as [`BigMatrix`].
pub type IntMatrix = Matrix<i64>;
pub type BigMatrix = Matrix<BigInt>;

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from equal-length rows. `cols` is needed for the 0-row case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reverses the column order.
    pub fn reverse_cols(&self) -> Self {
        let mut m = self.clone();
        for i in 0..m.rows {
            m.row_mut(i).reverse();
        }
        m
    }
}

impl<T: Int> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn to_big(&self) -> BigMatrix {
        self.map(Int::to_bigint)
    }

    /// Matrix product, `None` on overflow.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).checked_add(&a.checked_mul(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }

    /// `row[dst] -= q * row[src]` over the columns `from..`.
    pub(crate) fn row_sub_mul(&mut self, dst: usize, src: usize, q: &T, from: usize) -> Option<()> {
        if q.is_zero() {
            return Some(());
        }
        for j in from..self.cols {
            let s = self.get(src, j).clone();
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, j).checked_sub_mul(q, &s)?;
            self.set(dst, j, v);
        }
        Some(())
    }

    pub(crate) fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.row_mut(i) {
            *x = x.checked_neg()?;
        }
        Some(())
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.to_vec()).collect())
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| x.to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse integer matrix stored by columns; each column is sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        let mut columns = columns;
        for c in &mut columns {
            c.sort_unstable_by_key(|e| e.0);
            c.retain(|e| e.1 != 0);
            debug_assert!(c.iter().all(|e| (e.0 as usize) < rows));
        }
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m.set(i as usize, j, v);
            }
        }
        m
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| *m.get(i, j) != 0)
                    .map(|i| (i as u32, *m.get(i, j)))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows(),
            columns,
        }
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            columns: cols.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// Product `self * other`, `None` on overflow.
    pub fn checked_mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.columns.len(), other.rows);
        let mut out = Vec::with_capacity(other.columns.len());
        for col in &other.columns {
            let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k as usize] {
                    let e = acc.entry(i).or_insert(0);
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            out.push(acc.into_iter().filter(|e| e.1 != 0).collect());
        }
        Some(SparseMatrix {
            rows: self.rows,
            columns: out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_stack() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(a.transpose().to_rows(), vec![vec![1, 4], vec![2, 5], vec![3, 6]]);
        assert_eq!(a.vstack(&a).rows(), 4);
        assert_eq!(a.reverse_cols().row(0), &[3, 2, 1]);
        let mut b = a.clone();
        b.swap_rows(0, 1);
        assert_eq!(b.row(0), &[4, 5, 6]);
    }

    #[test]
    fn sparse_dense_round_trip() {
        let a = IntMatrix::from_i64_rows(&[&[1, 0, -1], &[0, 0, 2]]);
        let s = SparseMatrix::from_dense(&a);
        assert_eq!(s.nnz(), 3);
        assert_eq!(s.to_dense(), a);
        let p = s.checked_mul(&SparseMatrix::from_dense(&a.transpose())).unwrap();
        assert_eq!(p.to_dense(), a.checked_mul(&a.transpose()).unwrap());
    }
}
