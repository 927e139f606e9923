//! Boundary matrices and integral homology.
//!
//! Homology is unreduced: degree 0 counts connected components.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::flag::Tournaplex;
use crate::linalg::{rank_sparse, smith_normal_form_sparse, SparseMatrix};

/// Something with cells in each dimension and signed face maps.
pub trait ChainComplex: Sync {
    fn top_dim(&self) -> Option<usize>;
    fn cell_count(&self, d: usize) -> usize;
    fn boundary_matrix(&self, d: usize) -> Result<SparseMatrix>;
}

impl ChainComplex for Complex {
    fn top_dim(&self) -> Option<usize> {
        self.dim()
    }

    fn cell_count(&self, d: usize) -> usize {
        self.of_dim(d).len()
    }

    /// Rows are the `(d-1)`-simplices and columns the `d`-simplices, both in
    /// short-lex order; deleting position `i` contributes `(-1)^i`. The
    /// complex must be downward closed.
    fn boundary_matrix(&self, d: usize) -> Result<SparseMatrix> {
        let dim = self.dim().unwrap_or(0);
        if d == 0 || d > dim {
            return Err(Error::DegreeOutOfRange { degree: d, dim });
        }
        let rows = self.of_dim(d - 1);
        let index: HashMap<&crate::Simplex, u32> =
            rows.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
        let mut columns = Vec::with_capacity(self.of_dim(d).len());
        for s in self.of_dim(d) {
            let mut col = Vec::with_capacity(s.len());
            for (i, f) in s.faces().iter().enumerate() {
                let r = index.get(f).ok_or_else(|| {
                    Error::InvalidSimplex(format!("face {f:?} of {s:?} missing; complex not closed"))
                })?;
                col.push((*r, if i % 2 == 0 { 1 } else { -1 }));
            }
            columns.push(col);
        }
        Ok(SparseMatrix::new(rows.len(), columns))
    }
}

impl ChainComplex for Tournaplex {
    fn top_dim(&self) -> Option<usize> {
        self.dim()
    }

    fn cell_count(&self, d: usize) -> usize {
        self.cells(d).len()
    }

    fn boundary_matrix(&self, d: usize) -> Result<SparseMatrix> {
        Tournaplex::boundary_matrix(self, d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DegreeHomology {
    pub betti: usize,
    /// Invariant factors greater than one, ascending.
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyProfile {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyProfile {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(|d| d.torsion.is_empty())
    }

    /// Reduced Betti numbers: degree 0 is lowered by one.
    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }

    /// True when reduced homology vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.is_torsion_free() && self.reduced_betti().iter().all(|&b| b == 0)
    }

    /// Drops trailing degrees with trivial homology, keeping degree 0.
    pub fn trimmed(&self) -> HomologyProfile {
        let mut degrees = self.degrees.clone();
        while degrees.len() > 1 && degrees.last().is_some_and(|d| d.betti == 0 && d.torsion.is_empty()) {
            degrees.pop();
        }
        HomologyProfile { degrees }
    }

    /// The `d: betti=<k> torsion=[...]` line format, one line per degree.
    pub fn to_lines(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<HomologyProfile> {
        let mut degrees = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::parse(ln + 1, format!("bad homology line {line:?}"));
            let (d, rest) = line.split_once(':').ok_or_else(bad)?;
            let d: usize = d.trim().parse().map_err(|_| bad())?;
            if d != degrees.len() {
                return Err(Error::parse(ln + 1, format!("expected degree {}", degrees.len())));
            }
            let rest = rest.trim();
            let rest = rest.strip_prefix("betti=").ok_or_else(bad)?;
            let (b, t) = rest.split_once(" torsion=").ok_or_else(bad)?;
            let betti = b.parse().map_err(|_| bad())?;
            let t = t.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
            let torsion = if t.is_empty() {
                Vec::new()
            } else {
                t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
            };
            degrees.push(DegreeHomology { betti, torsion });
        }
        Ok(HomologyProfile { degrees })
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, h) in self.degrees.iter().enumerate() {
            let t: Vec<String> = h.torsion.iter().map(u64::to_string).collect();
            writeln!(f, "{d}: betti={} torsion=[{}]", h.betti, t.join(","))?;
        }
        Ok(())
    }
}

struct DegreeData {
    rank: usize,
    torsion: Vec<u64>,
}

fn integral_degree<C: ChainComplex + ?Sized>(c: &C, d: usize) -> Result<DegreeData> {
    let m = c.boundary_matrix(d)?;
    let snf = smith_normal_form_sparse(&m);
    let torsion = snf
        .torsion()
        .iter()
        .map(|f| f.to_u64().ok_or_else(|| Error::Unsupported(format!("torsion factor {f}"))))
        .collect::<Result<_>>()?;
    Ok(DegreeData {
        rank: snf.rank(),
        torsion,
    })
}

fn assemble(counts: &[usize], data: &[DegreeData]) -> HomologyProfile {
    // data[d - 1] describes the boundary from degree d.
    let rank_of = |d: usize| if d == 0 || d > data.len() { 0 } else { data[d - 1].rank };
    let degrees = (0..counts.len())
        .map(|d| DegreeHomology {
            betti: counts[d] - rank_of(d) - rank_of(d + 1),
            torsion: if d < data.len() { data[d].torsion.clone() } else { Vec::new() },
        })
        .collect();
    HomologyProfile { degrees }
}

/// Integral homology of a chain complex; torsion comes from Smith forms.
pub fn chain_homology<C: ChainComplex + ?Sized>(c: &C) -> Result<HomologyProfile> {
    let dim = c.top_dim().ok_or(Error::EmptyComplex)?;
    let counts: Vec<usize> = (0..=dim).map(|d| c.cell_count(d)).collect();
    let data = (1..=dim)
        .into_par_iter()
        .map(|d| integral_degree(c, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(&counts, &data))
}

/// Rational Betti numbers from exact ranks.
pub fn chain_betti<C: ChainComplex + ?Sized>(c: &C) -> Result<Vec<usize>> {
    let dim = c.top_dim().ok_or(Error::EmptyComplex)?;
    let counts: Vec<usize> = (0..=dim).map(|d| c.cell_count(d)).collect();
    let ranks = (1..=dim)
        .into_par_iter()
        .map(|d| Ok(rank_sparse(&c.boundary_matrix(d)?)))
        .collect::<Result<Vec<usize>>>()?;
    let rank_of = |d: usize| if d == 0 || d > ranks.len() { 0 } else { ranks[d - 1] };
    Ok((0..=dim).map(|d| counts[d] - rank_of(d) - rank_of(d + 1)).collect())
}

fn closed(s: &Complex) -> std::borrow::Cow<'_, Complex> {
    if s.is_downward_closed() {
        std::borrow::Cow::Borrowed(s)
    } else {
        std::borrow::Cow::Owned(s.closure())
    }
}

/// Integral homology of the complex spanned by `s` (its closure is taken if needed).
pub fn integral_homology(s: &Complex) -> Result<HomologyProfile> {
    chain_homology(closed(s).as_ref())
}

/// Rational Betti numbers of the complex spanned by `s`.
pub fn betti_only(s: &Complex) -> Result<Vec<usize>> {
    chain_betti(closed(s).as_ref())
}

/// Bit-exact boundary of the closure of `s` in degree `d`.
pub fn boundary_matrix(s: &Complex, d: usize) -> Result<SparseMatrix> {
    closed(s).boundary_matrix(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::flag::directed_flag_complex;
    use crate::simplex::Simplex;

    fn cx(t: &[&[u32]]) -> Complex {
        Complex::from_tuples(t).unwrap()
    }

    /// The 6-vertex, 10-triangle projective plane.
    pub(crate) fn rp2() -> Complex {
        cx(&[
            &[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 1, 5],
            &[1, 2, 4], &[2, 3, 5], &[1, 3, 4], &[2, 4, 5], &[1, 3, 5],
        ])
    }

    #[test]
    fn edge_boundary_signs() {
        let e = cx(&[&[0, 1]]).closure();
        let d = boundary_matrix(&e, 1).unwrap();
        assert_eq!(d.column(0), &[(0, -1), (1, 1)]);
        assert!(matches!(boundary_matrix(&e, 2), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn basic_profiles() {
        let circle = cx(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(integral_homology(&circle).unwrap().betti(), vec![1, 1]);
        assert_eq!(betti_only(&circle).unwrap(), vec![1, 1]);
        let p = integral_homology(&rp2()).unwrap();
        assert_eq!(p.betti(), vec![1, 0, 0]);
        assert_eq!(p.degrees[1].torsion, vec![2]);
        assert_eq!(betti_only(&rp2()).unwrap(), vec![1, 0, 0]);
        assert!(integral_homology(&Complex::default()).is_err());
    }

    #[test]
    fn injective_words_on_three_letters() {
        let k3 = directed_flag_complex(&Digraph::complete(3));
        assert_eq!(integral_homology(&k3).unwrap().betti(), vec![1, 0, 2]);
    }

    #[test]
    fn profile_lines_round_trip() {
        let p = integral_homology(&rp2()).unwrap();
        let text = p.to_lines();
        assert_eq!(text, "0: betti=1 torsion=[]\n1: betti=0 torsion=[2]\n2: betti=0 torsion=[]\n");
        assert_eq!(HomologyProfile::parse(&text).unwrap(), p);
    }

    #[test]
    fn boundary_squares_to_zero() {
        for seed in 0..20 {
            let g = Digraph::random(7, 0.6, seed).unwrap();
            let c = directed_flag_complex(&g);
            let dim = c.dim().unwrap();
            for d in 2..=dim {
                let a = c.boundary_matrix(d - 1).unwrap();
                let b = c.boundary_matrix(d).unwrap();
                let prod = a.checked_mul(&b).unwrap();
                assert_eq!(prod.nnz(), 0);
            }
        }
    }

    /// Prime-power parts of the torsion factors, which add under direct sums.
    fn elementary_divisors(torsion: &[u64]) -> Vec<u64> {
        let mut out = Vec::new();
        for &t in torsion {
            let (mut t, mut p) = (t, 2);
            while t > 1 {
                let mut q = 1;
                while t % p == 0 {
                    t /= p;
                    q *= p;
                }
                if q > 1 {
                    out.push(q);
                }
                p += 1;
            }
        }
        out.sort_unstable();
        out
    }

    fn arb_pointed(n: u32) -> impl proptest::strategy::Strategy<Value = Complex> {
        use proptest::prelude::*;
        proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=4usize), 1..8).prop_map(|sets| {
            let mut all: Vec<Simplex> = sets
                .into_iter()
                .filter_map(|s| Simplex::new(&s.into_iter().collect::<Vec<_>>()).ok())
                .collect();
            all.push(Simplex::new(&[0]).unwrap());
            Complex::from_simplices(all).closure()
        })
    }

    proptest::proptest! {
        #[test]
        fn reduced_homology_adds_over_one_point_unions(a in arb_pointed(6), b in arb_pointed(6)) {
            // Shift b so that only vertex 0 is shared.
            let shift = |v: u32| if v == 0 { 0 } else { v + 6 };
            let b_shifted = b
                .iter()
                .map(|s| Simplex::new(&s.vertices().iter().map(|&v| shift(v)).collect::<Vec<_>>()).unwrap());
            let wedge = Complex::from_simplices(a.iter().cloned().chain(b_shifted));
            let (pa, pb, pw) = (
                integral_homology(&a).unwrap(),
                integral_homology(&b).unwrap(),
                integral_homology(&wedge).unwrap(),
            );
            let top = pa.degrees.len().max(pb.degrees.len()).max(pw.degrees.len());
            let at = |p: &HomologyProfile, d: usize| {
                p.degrees.get(d).cloned().unwrap_or_default()
            };
            let (ra, rb, rw) = (pa.reduced_betti(), pb.reduced_betti(), pw.reduced_betti());
            for d in 0..top {
                let r = |v: &Vec<usize>| v.get(d).copied().unwrap_or(0);
                proptest::prop_assert_eq!(r(&rw), r(&ra) + r(&rb), "degree {}", d);
                let mut t = at(&pa, d).torsion;
                t.extend(at(&pb, d).torsion);
                proptest::prop_assert_eq!(
                    elementary_divisors(&at(&pw, d).torsion),
                    elementary_divisors(&t),
                    "degree {}", d
                );
            }
        }
    }
}
