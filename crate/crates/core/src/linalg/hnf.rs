//! Row-style Hermite normal form.
//!
//! Convention: nonzero rows first; the pivot (first nonzero entry) of each row
//! is positive and lies strictly right of the pivot of the row above; entries
//! above a pivot lie in `[0, pivot)`. The form is unique for a given matrix
//! under left multiplication by unimodular matrices.

use num_bigint::BigInt;

use super::int::Int;
use super::matrix::{BigMatrix, IntMatrix, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: BigMatrix,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduces `a` in place. When `track` is given, the same row operations are
/// applied to it, so starting from the identity it ends as `V` with `V·A = H`.
pub(crate) fn hnf_in_place<T: Int>(
    a: &mut Matrix<T>,
    mut track: Option<&mut Matrix<T>>,
) -> Option<Vec<usize>> {
    let (m, n) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        loop {
            // Row with the smallest nonzero |a[i][j]|, i >= r.
            let mut best: Option<(usize, T)> = None;
            for i in r..m {
                let v = a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let av = v.checked_abs()?;
                if best.as_ref().is_none_or(|(_, b)| av < *b) {
                    best = Some((i, av));
                }
            }
            let Some((bi, _)) = best else { break };
            a.swap_rows(r, bi);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(r, bi);
            }
            let p = a.get(r, j).clone();
            let mut clean = true;
            for i in r + 1..m {
                if a.get(i, j).is_zero() {
                    continue;
                }
                let q = a.get(i, j).checked_div_floor(&p)?;
                a.row_sub_mul(i, r, &q, j)?;
                if let Some(t) = track.as_deref_mut() {
                    t.row_sub_mul(i, r, &q, 0)?;
                }
                if !a.get(i, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r, j).is_zero() {
            continue;
        }
        if a.get(r, j).is_negative() {
            a.negate_row(r)?;
            if let Some(t) = track.as_deref_mut() {
                t.negate_row(r)?;
            }
        }
        let p = a.get(r, j).clone();
        for i in 0..r {
            let q = a.get(i, j).checked_div_floor(&p)?;
            a.row_sub_mul(i, r, &q, j)?;
            if let Some(t) = track.as_deref_mut() {
                t.row_sub_mul(i, r, &q, 0)?;
            }
        }
        pivots.push(j);
        r += 1;
    }
    Some(pivots)
}

/// Hermite normal form; computed in `i64`, redone in `BigInt` on overflow.
pub fn hermite_normal_form(a: &IntMatrix) -> HnfResult {
    let mut h = a.clone();
    if let Some(pivots) = hnf_in_place(&mut h, None) {
        return HnfResult { h: h.to_big(), pivots };
    }
    hermite_normal_form_big(&a.to_big())
}

pub fn hermite_normal_form_big(a: &BigMatrix) -> HnfResult {
    let mut h = a.clone();
    let pivots = hnf_in_place::<BigInt>(&mut h, None).expect("bigint arithmetic cannot overflow");
    HnfResult { h, pivots }
}

/// Hermite normal form together with a unimodular `V` such that `V·A = H`.
pub fn hermite_normal_form_with_transform(a: &IntMatrix) -> (HnfResult, BigMatrix) {
    let mut h = a.clone();
    let mut v = IntMatrix::identity(a.rows());
    if let Some(pivots) = hnf_in_place(&mut h, Some(&mut v)) {
        return (HnfResult { h: h.to_big(), pivots }, v.to_big());
    }
    let mut h = a.to_big();
    let mut v = BigMatrix::identity(a.rows());
    let pivots = hnf_in_place::<BigInt>(&mut h, Some(&mut v)).expect("bigint arithmetic");
    (HnfResult { h, pivots }, v)
}

/// Checks the three defining conditions directly.
pub fn is_hermite_normal_form<T: Int>(h: &Matrix<T>) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        let row = h.row(i);
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero_row = true,
            Some(p) => {
                if seen_zero_row || last_pivot.is_some_and(|lp| p <= lp) {
                    return false;
                }
                let pv = &row[p];
                if pv.is_negative() {
                    return false;
                }
                for k in 0..i {
                    let above = h.get(k, p);
                    if above.is_negative() || above >= pv {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> BigMatrix {
        IntMatrix::from_i64_rows(rows).to_big()
    }

    #[test]
    fn small_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id).h, id.to_big());
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(hermite_normal_form(&z).h, z.to_big());
        let a = IntMatrix::from_i64_rows(&[&[2, 3], &[4, 5]]);
        assert_eq!(hermite_normal_form(&a).h, big(&[&[2, 0], &[0, 1]]));
    }

    /// Independent oracle: column by column, take the gcd via repeated
    /// Euclid on pairs of rows, then reduce upward.
    fn oracle_hnf(a: &IntMatrix) -> BigMatrix {
        let mut rows: Vec<Vec<BigInt>> = a.to_big().to_rows();
        let n = a.cols();
        let mut r = 0;
        for j in 0..n {
            for i in r + 1..rows.len() {
                while !rows[i][j].is_zero() {
                    let q = Int::checked_div_floor(&rows[r][j], &rows[i][j]).unwrap();
                    let sub: Vec<BigInt> = rows[i].iter().map(|x| x * &q).collect();
                    for (x, s) in rows[r].iter_mut().zip(sub) {
                        *x -= s;
                    }
                    rows.swap(r, i);
                }
            }
            if r < rows.len() && !rows[r][j].is_zero() {
                if rows[r][j].is_negative() {
                    for x in rows[r].iter_mut() {
                        *x = -x.clone();
                    }
                }
                for k in 0..r {
                    let q = Int::checked_div_floor(&rows[k][j], &rows[r][j]).unwrap();
                    let sub: Vec<BigInt> = rows[r].iter().map(|x| x * &q).collect();
                    for (x, s) in rows[k].iter_mut().zip(sub) {
                        *x -= s;
                    }
                }
                r += 1;
            }
        }
        Matrix::from_rows(n, rows)
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..=4, r * c)
                .prop_map(move |d| Matrix::from_rows(c, d.chunks(c).map(|x| x.to_vec()).collect()))
        })
    }

    fn arb_unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..12).prop_map(
            move |ops| {
                let mut u = IntMatrix::identity(n);
                for (a, b, q, swap) in ops {
                    if swap {
                        u.swap_rows(a, b);
                    } else if a != b {
                        u.row_sub_mul(a, b, &q, 0).unwrap();
                    }
                }
                u
            },
        )
    }

    proptest! {
        #[test]
        fn output_is_in_normal_form_and_matches_oracle(a in arb_matrix(6)) {
            let res = hermite_normal_form(&a);
            prop_assert!(is_hermite_normal_form(&res.h));
            prop_assert_eq!(&res.h, &oracle_hnf(&a));
            prop_assert_eq!(hermite_normal_form_big(&res.h).h, res.h);
        }

        #[test]
        fn transform_reproduces_h(a in arb_matrix(6)) {
            let (res, v) = hermite_normal_form_with_transform(&a);
            prop_assert_eq!(v.checked_mul(&a.to_big()).unwrap(), res.h);
        }

        #[test]
        fn unique_under_unimodular_scrambling(
            (a, u) in arb_matrix(6).prop_flat_map(|a| { let r = a.rows(); (Just(a), arb_unimodular(r)) })
        ) {
            let ua = u.checked_mul(&a).unwrap();
            prop_assert_eq!(hermite_normal_form(&ua).h, hermite_normal_form(&a).h);
        }
    }

    #[test]
    fn overflow_promotion_agrees_with_bigint() {
        let big_entry = 1i64 << 61;
        let a = IntMatrix::from_i64_rows(&[
            &[big_entry, 3, 1],
            &[big_entry - 1, 5, 7],
            &[3, big_entry - 3, 11],
        ]);
        let mut probe = a.clone();
        assert!(hnf_in_place(&mut probe, None).is_none(), "test matrix must overflow i64");
        let via_promotion = hermite_normal_form(&a);
        assert_eq!(via_promotion.h, hermite_normal_form_big(&a.to_big()).h);
        assert!(is_hermite_normal_form(&via_promotion.h));
    }
}
