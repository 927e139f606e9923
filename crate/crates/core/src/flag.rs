//! Flag complexes of digraphs: directed, undirected, and the flag tournaplex.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::complex::{Complex, FVector};
use crate::digraph::{BitRow, Digraph};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::simplex::{Simplex, VertexBuf, VertexId};

/// All directed cliques `(v0, ..., vk)` with `vi -> vj` for every `i < j`.
pub fn directed_flag_complex(g: &Digraph) -> Complex {
    let n = g.vertex_count() as VertexId;
    let per_source: Vec<Vec<Simplex>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut stack: VertexBuf = smallvec::smallvec![v];
            grow(&mut stack, g.out_row(v).clone(), &|w| g.out_row(w).clone(), &mut out);
            out
        })
        .collect();
    Complex::from_simplices(per_source.into_iter().flatten())
}

/// Clique complex of the underlying undirected graph; tuples are ascending.
pub fn undirected_flag_complex(g: &Digraph) -> Complex {
    let n = g.vertex_count();
    let und: Vec<BitRow> = (0..n as VertexId).map(|v| undirected_row(g, v)).collect();
    let above: Vec<BitRow> = (0..n)
        .map(|v| {
            let mut r = BitRow::new(n);
            for w in und[v].iter().filter(|&w| w > v) {
                r.set(w);
            }
            r
        })
        .collect();
    let mut out = Vec::new();
    for v in 0..n as VertexId {
        let mut stack: VertexBuf = smallvec::smallvec![v];
        grow(&mut stack, above[v as usize].clone(), &|w| above[w as usize].clone(), &mut out);
    }
    Complex::from_simplices(out)
}

fn undirected_row(g: &Digraph, v: VertexId) -> BitRow {
    let mut r = g.out_row(v).clone();
    for u in g.in_neighbours(v) {
        r.set(u as usize);
    }
    r
}

/// Depth-first clique growth: `cand` holds vertices adjacent (in the required
/// sense) to everything on the stack.
fn grow<F: Fn(VertexId) -> BitRow>(
    stack: &mut VertexBuf,
    cand: BitRow,
    row: &F,
    out: &mut Vec<Simplex>,
) {
    out.push(Simplex::from_buf(stack.clone()));
    for w in cand.iter() {
        let w = w as VertexId;
        stack.push(w);
        grow(stack, cand.and(&row(w)), row, out);
        stack.pop();
    }
}

/// Largest tournament handled by the 64-bit orientation mask.
pub const MAX_TOURNAMENT_VERTICES: usize = 11;

#[inline]
fn pair_index(i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// A tournament on an ascending vertex tuple. Bit `pair_index(i, j)` of
/// `orient`, for positions `i < j` in lexicographic pair order, is set iff
/// `vertices[i] -> vertices[j]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TournamentSimplex {
    vertices: VertexBuf,
    orient: u64,
}

impl TournamentSimplex {
    /// `arrow(i, j)` says whether position `i` beats position `j`.
    pub fn from_fn<F: Fn(usize, usize) -> bool>(vertices: &[VertexId], arrow: F) -> Result<Self> {
        let k = vertices.len();
        if k == 0 || k > MAX_TOURNAMENT_VERTICES {
            return Err(Error::Unsupported(format!("tournament on {k} vertices")));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSimplex(format!("vertices {vertices:?} not ascending")));
        }
        let mut orient = 0u64;
        for i in 0..k {
            for j in i + 1..k {
                if arrow(i, j) {
                    orient |= 1 << pair_index(i, j, k);
                }
            }
        }
        Ok(TournamentSimplex {
            vertices: VertexBuf::from_slice(vertices),
            orient,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn orientation(&self) -> u64 {
        self.orient
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Whether position `i` beats position `j`.
    pub fn arrow(&self, i: usize, j: usize) -> bool {
        let k = self.vertices.len();
        if i < j {
            self.orient >> pair_index(i, j, k) & 1 == 1
        } else {
            self.orient >> pair_index(j, i, k) & 1 == 0
        }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let k = self.len();
        (0..k)
            .map(|i| (0..k).filter(|&j| j != i && self.arrow(i, j)).count())
            .collect()
    }

    /// Transitive tournaments have pairwise distinct out-degrees.
    pub fn is_transitive(&self) -> bool {
        let mut d = self.out_degrees();
        d.sort_unstable();
        d.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// For a transitive tournament, its vertices from source to sink.
    pub fn to_ordered_simplex(&self) -> Option<Simplex> {
        if !self.is_transitive() {
            return None;
        }
        let deg = self.out_degrees();
        let mut pos: Vec<usize> = (0..self.len()).collect();
        pos.sort_by_key(|&i| std::cmp::Reverse(deg[i]));
        let vs: Vec<VertexId> = pos.iter().map(|&i| self.vertices[i]).collect();
        Some(Simplex::from_slice_unchecked(&vs))
    }

    /// Induced subtournament without position `p`.
    pub fn delete(&self, p: usize) -> TournamentSimplex {
        let k = self.len();
        let keep: Vec<usize> = (0..k).filter(|&i| i != p).collect();
        let vs: Vec<VertexId> = keep.iter().map(|&i| self.vertices[i]).collect();
        TournamentSimplex::from_fn(&vs, |a, b| self.arrow(keep[a], keep[b]))
            .expect("faces of a valid tournament are valid")
    }

    /// Codimension-1 faces in order of the deleted position.
    pub fn faces(&self) -> Vec<TournamentSimplex> {
        if self.len() < 2 {
            return Vec::new();
        }
        (0..self.len()).map(|p| self.delete(p)).collect()
    }

    /// Sum over vertices of the squared difference between out- and in-degree.
    pub fn directionality(&self) -> u64 {
        let k = self.len() as i64;
        self.out_degrees()
            .iter()
            .map(|&o| {
                let sd = 2 * o as i64 - (k - 1);
                (sd * sd) as u64
            })
            .sum()
    }
}

impl Ord for TournamentSimplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
            .then_with(|| self.orient.cmp(&other.orient))
    }
}

impl PartialOrd for TournamentSimplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A face-closed collection of tournaments, stored per dimension in sorted order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tournaplex {
    cells: Vec<Vec<TournamentSimplex>>,
}

impl Tournaplex {
    /// Sorts the given simplices and adds all their faces.
    pub fn from_simplices<I: IntoIterator<Item = TournamentSimplex>>(iter: I) -> Self {
        let mut by_dim: Vec<std::collections::HashSet<TournamentSimplex>> = Vec::new();
        let mut work: Vec<TournamentSimplex> = iter.into_iter().collect();
        while let Some(s) = work.pop() {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Default::default);
            }
            if by_dim[d].contains(&s) {
                continue;
            }
            work.extend(s.faces());
            by_dim[d].insert(s);
        }
        let cells = by_dim
            .into_iter()
            .map(|set| {
                let mut v: Vec<TournamentSimplex> = set.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        Tournaplex { cells }
    }

    pub fn cells(&self, d: usize) -> &[TournamentSimplex] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &TournamentSimplex> {
        self.cells.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, s: &TournamentSimplex) -> bool {
        self.cells(s.dim()).binary_search(s).is_ok()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.cells.iter().map(Vec::len).collect())
    }

    /// Signed face matrix from dimension `d` to `d - 1`.
    pub fn boundary_matrix(&self, d: usize) -> Result<SparseMatrix> {
        let dim = self.dim().unwrap_or(0);
        if d == 0 || d > dim {
            return Err(Error::DegreeOutOfRange { degree: d, dim });
        }
        let rows: HashMap<&TournamentSimplex, u32> = self.cells[d - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        let columns = self.cells[d]
            .iter()
            .map(|s| {
                s.faces()
                    .iter()
                    .enumerate()
                    .map(|(i, f)| (rows[f], if i % 2 == 0 { 1 } else { -1 }))
                    .collect()
            })
            .collect();
        Ok(SparseMatrix::new(self.cells[d - 1].len(), columns))
    }

    /// The transitive simplices, as the ordered simplicial complex they form.
    pub fn transitive_subcomplex(&self) -> Complex {
        Complex::from_simplices(self.iter().filter_map(TournamentSimplex::to_ordered_simplex))
    }

    /// Simplices of weight at most `d`, closed under faces.
    pub fn filtration_stage<W: FiltrationWeight + ?Sized>(&self, w: &W, d: u64) -> Result<Tournaplex> {
        let mut keep = Vec::new();
        for s in self.iter() {
            let ws = w
                .weight(s)
                .ok_or_else(|| Error::Unsupported(format!("no weight for tournament {s:?}")))?;
            if ws <= d {
                keep.push(s.clone());
            }
        }
        Ok(Tournaplex::from_simplices(keep))
    }
}

/// Every subtournament of `g`.
pub fn flag_tournaplex(g: &Digraph) -> Result<Tournaplex> {
    let und = undirected_flag_complex(g);
    if und.dim().is_some_and(|d| d + 1 > MAX_TOURNAMENT_VERTICES) {
        return Err(Error::Unsupported(format!(
            "cliques with more than {MAX_TOURNAMENT_VERTICES} vertices"
        )));
    }
    let mut cells: Vec<Vec<TournamentSimplex>> = vec![Vec::new(); und.dim().map_or(0, |d| d + 1)];
    for s in und.iter() {
        let vs = s.vertices();
        let k = vs.len();
        // Pairs with both orientations available multiply the count.
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let mut choices: Vec<Vec<bool>> = Vec::with_capacity(pairs.len());
        for &(i, j) in &pairs {
            let mut c = Vec::with_capacity(2);
            if g.has_edge(vs[i], vs[j]) {
                c.push(true);
            }
            if g.has_edge(vs[j], vs[i]) {
                c.push(false);
            }
            choices.push(c);
        }
        let total: usize = choices.iter().map(Vec::len).product();
        for mut code in 0..total {
            let mut orient = 0u64;
            for (p, c) in choices.iter().enumerate() {
                let pick = c[code % c.len()];
                code /= c.len();
                let (i, j) = pairs[p];
                if pick {
                    orient |= 1 << pair_index(i, j, k);
                }
            }
            cells[k - 1].push(TournamentSimplex {
                vertices: VertexBuf::from_slice(vs),
                orient,
            });
        }
    }
    for c in &mut cells {
        c.sort_unstable();
    }
    Ok(Tournaplex { cells })
}

/// A real-valued filtration weight on tournaments, rounded to integers.
pub trait FiltrationWeight: Sync {
    fn name(&self) -> &str;
    /// `None` when the weight is not defined for `s`.
    fn weight(&self, s: &TournamentSimplex) -> Option<u64>;
}

/// 0 for transitive tournaments, 1 otherwise.
pub struct TransitiveIndicator;

impl FiltrationWeight for TransitiveIndicator {
    fn name(&self) -> &str {
        "transitive"
    }
    fn weight(&self, s: &TournamentSimplex) -> Option<u64> {
        Some(u64::from(!s.is_transitive()))
    }
}

/// Maximum of [`TournamentSimplex::directionality`] over all faces, so that
/// stages are closed under faces without correction.
pub struct MaxFaceDirectionality;

impl FiltrationWeight for MaxFaceDirectionality {
    fn name(&self) -> &str {
        "max-face-directionality"
    }
    fn weight(&self, s: &TournamentSimplex) -> Option<u64> {
        let mut best = s.directionality();
        for f in s.faces() {
            best = best.max(self.weight(&f)?);
        }
        Some(best)
    }
}

/// Weights read from a table, keyed by simplex.
#[derive(Default)]
pub struct WeightTable {
    name: String,
    table: HashMap<TournamentSimplex, u64>,
}

impl WeightTable {
    pub fn new(name: impl Into<String>, table: HashMap<TournamentSimplex, u64>) -> Self {
        WeightTable {
            name: name.into(),
            table,
        }
    }
}

impl FiltrationWeight for WeightTable {
    fn name(&self) -> &str {
        &self.name
    }
    fn weight(&self, s: &TournamentSimplex) -> Option<u64> {
        self.table.get(s).copied()
    }
}

/// The graph itself with a 2-simplex for every directed 3-cycle.
pub fn graph_with_three_cycles(t: &Tournaplex) -> Tournaplex {
    let mut keep: Vec<TournamentSimplex> = t.cells(0).to_vec();
    keep.extend(t.cells(1).iter().cloned());
    keep.extend(t.cells(2).iter().filter(|s| !s.is_transitive()).cloned());
    Tournaplex::from_simplices(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc3() -> Digraph {
        Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn directed_examples() {
        assert_eq!(directed_flag_complex(&cyc3()).f_vector(), FVector(vec![3, 3]));
        let k3 = directed_flag_complex(&Digraph::complete(3));
        assert_eq!(k3.f_vector(), FVector(vec![3, 6, 6]));
        let k4 = directed_flag_complex(&Digraph::complete(4));
        assert_eq!(k4.f_vector().counts().last(), Some(&24));
        assert!(k4.is_downward_closed());
    }

    #[test]
    fn undirected_examples() {
        assert_eq!(undirected_flag_complex(&cyc3()).f_vector(), FVector(vec![3, 3, 1]));
        let pair = Digraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(undirected_flag_complex(&pair).f_vector(), FVector(vec![2, 1]));
    }

    #[test]
    fn tournaplex_examples() {
        let t = flag_tournaplex(&cyc3()).unwrap();
        assert_eq!(t.f_vector(), FVector(vec![3, 3, 1]));
        assert!(!t.cells(2)[0].is_transitive());
        let t = flag_tournaplex(&Digraph::complete(3)).unwrap();
        assert_eq!(t.f_vector(), FVector(vec![3, 6, 8]));
        assert_eq!(t.cells(2).iter().filter(|s| s.is_transitive()).count(), 6);
    }

    #[test]
    fn tournament_faces_are_induced() {
        // 0->1, 1->2, 0->2 on positions; delete the middle.
        let s = TournamentSimplex::from_fn(&[3, 5, 9], |i, j| i < j).unwrap();
        assert!(s.is_transitive());
        assert_eq!(s.to_ordered_simplex().unwrap(), Simplex::new(&[3, 5, 9]).unwrap());
        let f = s.delete(1);
        assert_eq!(f.vertices(), &[3, 9]);
        assert!(f.arrow(0, 1));
        let c = TournamentSimplex::from_fn(&[0, 1, 2], |i, j| (i, j) != (0, 2)).unwrap();
        assert!(!c.is_transitive());
        assert_eq!(c.directionality(), 0);
        assert_eq!(s.directionality(), 8);
    }

    #[test]
    fn filtration_stages_are_nested() {
        let g = Digraph::random(7, 0.5, 3).unwrap();
        let t = flag_tournaplex(&g).unwrap();
        let w = MaxFaceDirectionality;
        let mut prev = 0;
        for d in [0u64, 2, 8, 20, 1000] {
            let s = t.filtration_stage(&w, d).unwrap();
            assert!(s.iter().all(|x| t.contains(x)));
            assert!(s.len() >= prev);
            prev = s.len();
        }
        assert_eq!(t.filtration_stage(&w, u64::MAX).unwrap(), t);
        let tr = t.filtration_stage(&TransitiveIndicator, 0).unwrap();
        assert_eq!(tr.transitive_subcomplex(), directed_flag_complex(&g));
    }

    proptest::proptest! {
        #[test]
        fn transitive_part_is_the_directed_flag_complex(n in 2usize..7, p in 0.0f64..1.0, seed in 0u64..1000) {
            let g = Digraph::random(n, p, seed).unwrap();
            let d = directed_flag_complex(&g);
            proptest::prop_assert!(d.is_downward_closed());
            proptest::prop_assert_eq!(flag_tournaplex(&g).unwrap().transitive_subcomplex(), d.clone());
            proptest::prop_assert_eq!(directed_flag_complex(&g.reversed()).f_vector(), d.f_vector());
        }
    }
}
