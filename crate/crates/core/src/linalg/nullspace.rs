//! Standardised integer nullspace basis.
//!
//! The basis is read off a Hermite normal form: reverse the columns of `A`,
//! stack the identity underneath, take the HNF of the transpose and keep the
//! rows whose first `m` entries vanish, reversing them back. The resulting basis
//! and its row order are unique for a given `A`, which matters because the
//! cycle search iterates it in this order.

use num_bigint::BigInt;

use super::hnf::{hermite_normal_form_big, hnf_in_place};
use super::int::Int;
use super::matrix::{BigMatrix, IntMatrix, Matrix};

/// Basis of `{x : A x = 0}` as rows of length `A.cols()`.
pub fn nullspace(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    if let Some(rows) = nullspace_generic(a) {
        return rows;
    }
    nullspace_generic(&a.to_big()).expect("bigint arithmetic cannot overflow")
}

pub fn nullspace_big(a: &BigMatrix) -> Vec<Vec<BigInt>> {
    nullspace_generic(a).expect("bigint arithmetic cannot overflow")
}

fn nullspace_generic<T: Int>(a: &Matrix<T>) -> Option<Vec<Vec<BigInt>>> {
    let (m, n) = (a.rows(), a.cols());
    let stacked = a.reverse_cols().vstack(&Matrix::identity(n));
    let mut h = stacked.transpose();
    hnf_in_place(&mut h, None)?;
    let mut basis = Vec::new();
    for i in 0..h.rows() {
        let row = h.row(i);
        if row[..m].iter().all(Int::is_zero) {
            basis.push(row[m..].iter().rev().map(Int::to_bigint).collect());
        }
    }
    Some(basis)
}

/// Same basis computed by a different route: any integer kernel basis, then the
/// Hermite normal form of that lattice in reversed coordinates.
///
/// The zero-block rows of the stacked HNF are exactly the HNF of the saturated
/// kernel lattice written in reversed coordinates, so the two routes must agree.
pub fn nullspace_via_kernel_lattice(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols();
    // Column operations on A, tracked on the identity: A·V = E.
    let mut e = a.to_big().transpose();
    let mut v = BigMatrix::identity(n);
    let pivots = hnf_in_place::<BigInt>(&mut e, Some(&mut v)).expect("bigint");
    let kernel_rows: Vec<Vec<BigInt>> = (pivots.len()..n)
        .map(|i| v.row(i).iter().rev().cloned().collect())
        .collect();
    if kernel_rows.is_empty() {
        return Vec::new();
    }
    let lattice = Matrix::from_rows(n, kernel_rows);
    let h = hermite_normal_form_big(&lattice).h;
    h.to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|x| !Int::is_zero(x)))
        .map(|r| r.into_iter().rev().collect())
        .collect()
}
