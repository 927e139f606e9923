//! Simple directed graphs: no loops, no multi-edges, reciprocal pairs allowed.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::simplex::VertexId;

/// Fixed-width bitset over vertex ids, used for adjacency rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitRow(Vec<u64>);

impl BitRow {
    pub(crate) fn new(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64)])
    }

    #[inline]
    pub(crate) fn get(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    pub(crate) fn and(&self, other: &BitRow) -> BitRow {
        BitRow(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// A directed graph on vertices `0..n`.
///
/// Vertex ids are assigned once, at construction, and never re-sorted: the
/// collapse heuristics downstream are sensitive to the numbering. Optional
/// vertex names record where each id came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<BitRow>,
    inc: Vec<BitRow>,
    names: Option<Vec<String>>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            out: vec![BitRow::new(n); n],
            inc: vec![BitRow::new(n); n],
            names: None,
        }
    }

    /// Builds a graph, rejecting loops, out-of-range ids and repeated edges.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Digraph::empty(n);
        for &(u, v) in edges {
            if !g.try_add_edge(u, v)? {
                return Err(Error::InvalidGraph(format!("duplicate edge {u} -> {v}")));
            }
        }
        Ok(g)
    }

    /// Adds `u -> v`; returns `false` if the edge was already present.
    pub fn try_add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        let (ui, vi) = (u as usize, v as usize);
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if ui >= self.n || vi >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge {u} -> {v} out of range for {} vertices",
                self.n
            )));
        }
        if self.out[ui].get(vi) {
            return Ok(false);
        }
        self.out[ui].set(vi);
        self.inc[vi].set(ui);
        Ok(true)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n, "one name per vertex");
        self.names = Some(names);
        self
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out[u as usize].get(v as usize)
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|r| r.iter().count()).sum()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.n)
            .flat_map(|u| self.out[u].iter().map(move |v| (u as VertexId, v as VertexId)))
            .collect()
    }

    pub fn out_neighbours(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[u as usize].iter().map(|v| v as VertexId)
    }

    pub fn in_neighbours(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.inc[u as usize].iter().map(|v| v as VertexId)
    }

    pub(crate) fn out_row(&self, u: VertexId) -> &BitRow {
        &self.out[u as usize]
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out[u as usize].iter().count()
    }

    pub fn in_degree(&self, u: VertexId) -> usize {
        self.inc[u as usize].iter().count()
    }

    /// The same vertices with every edge reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inc.clone(),
            inc: self.out.clone(),
            names: self.names.clone(),
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[VertexId]) -> Digraph {
        let mut g = Digraph::empty(self.n);
        for (u, v) in self.edges() {
            g.try_add_edge(perm[u as usize], perm[v as usize])
                .expect("permutation preserves validity");
        }
        g
    }

    /// Every ordered pair of distinct vertices is an edge.
    pub fn complete(n: usize) -> Digraph {
        let mut g = Digraph::empty(n);
        for u in 0..n as VertexId {
            for v in 0..n as VertexId {
                if u != v {
                    g.try_add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    /// Directed Erdős-Rényi graph: each ordered pair `(u, v)`, `u != v`, is
    /// included independently with probability `p`. Pairs are visited in
    /// lexicographic order so a seed fixes the graph.
    pub fn random(n: usize, p: f64, seed: u64) -> Result<Digraph> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidGraph(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Digraph::empty(n);
        for u in 0..n as VertexId {
            for v in 0..n as VertexId {
                if u != v && rng.gen_bool(p) {
                    g.try_add_edge(u, v).unwrap();
                }
            }
        }
        Ok(g)
    }

    /// Exactly one edge between every pair of distinct vertices.
    pub fn is_tournament(&self) -> bool {
        (0..self.n as VertexId).all(|u| {
            (u + 1..self.n as VertexId).all(|v| self.has_edge(u, v) != self.has_edge(v, u))
        })
    }

    pub fn check_tournament(&self) -> Result<()> {
        for u in 0..self.n as VertexId {
            for v in u + 1..self.n as VertexId {
                match (self.has_edge(u, v), self.has_edge(v, u)) {
                    (true, true) => {
                        return Err(Error::NotATournament(format!("reciprocal pair {u}, {v}")))
                    }
                    (false, false) => {
                        return Err(Error::NotATournament(format!("no edge between {u} and {v}")))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Groups vertices by bidegree together with the sets of bidegrees of
    /// their in- and out-neighbours. Classes are listed by smallest member.
    pub fn degree_signature_partition(&self) -> Vec<Vec<VertexId>> {
        type Bideg = (usize, usize);
        let bideg: Vec<Bideg> = (0..self.n as VertexId)
            .map(|v| (self.in_degree(v), self.out_degree(v)))
            .collect();
        let mut classes: BTreeMap<(Bideg, BTreeSet<Bideg>, BTreeSet<Bideg>), Vec<VertexId>> =
            BTreeMap::new();
        for v in 0..self.n as VertexId {
            let ins = self.in_neighbours(v).map(|u| bideg[u as usize]).collect();
            let outs = self.out_neighbours(v).map(|u| bideg[u as usize]).collect();
            classes.entry((bideg[v as usize], ins, outs)).or_default().push(v);
        }
        let mut out: Vec<Vec<VertexId>> = classes.into_values().collect();
        out.sort();
        out
    }

    pub fn is_automorphism(&self, perm: &[VertexId]) -> bool {
        self.edges()
            .into_iter()
            .all(|(u, v)| self.has_edge(perm[u as usize], perm[v as usize]))
    }

    /// All automorphisms that map each class of `classes` onto itself,
    /// found by checking every such permutation explicitly. Fails if more
    /// than `limit` candidates would have to be checked.
    pub fn automorphisms_within(
        &self,
        classes: &[Vec<VertexId>],
        limit: u64,
    ) -> Result<Vec<Vec<VertexId>>> {
        let mut candidates: u64 = 1;
        for c in classes {
            let f: u64 = (1..=c.len() as u64).product();
            candidates = candidates.saturating_mul(f);
        }
        if candidates > limit {
            return Err(Error::Unsupported(format!(
                "{candidates} candidate permutations exceed limit {limit}"
            )));
        }
        let movable: Vec<&Vec<VertexId>> = classes.iter().filter(|c| c.len() > 1).collect();
        let mut perm: Vec<VertexId> = (0..self.n as VertexId).collect();
        let mut found = Vec::new();
        self.search_automorphisms(&movable, 0, &mut perm, &mut found);
        found.sort();
        Ok(found)
    }

    fn search_automorphisms(
        &self,
        classes: &[&Vec<VertexId>],
        at: usize,
        perm: &mut Vec<VertexId>,
        found: &mut Vec<Vec<VertexId>>,
    ) {
        if at == classes.len() {
            if self.is_automorphism(perm) {
                found.push(perm.clone());
            }
            return;
        }
        let class = classes[at];
        let mut images = class.clone();
        for_each_permutation(&mut images, 0, &mut |img| {
            for (src, dst) in class.iter().zip(img) {
                perm[*src as usize] = *dst;
            }
            self.search_automorphisms(classes, at + 1, perm, found);
        });
        for v in class {
            perm[*v as usize] = *v;
        }
    }

    /// Full automorphism group, using the degree-signature partition to
    /// restrict the search.
    pub fn automorphism_group(&self, limit: u64) -> Result<Vec<Vec<VertexId>>> {
        self.automorphisms_within(&self.degree_signature_partition(), limit)
    }
}

fn for_each_permutation<F: FnMut(&[VertexId])>(xs: &mut [VertexId], k: usize, f: &mut F) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        for_each_permutation(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// True iff the permutation group is the Klein four-group: order 4 with
/// every non-identity element an involution.
pub fn is_klein_four(group: &[Vec<VertexId>]) -> bool {
    group.len() == 4
        && group.iter().all(|p| {
            p.iter()
                .enumerate()
                .all(|(i, &j)| p[j as usize] as usize == i)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Digraph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Digraph::from_edges(2, &[(0, 1), (0, 1)]).is_err());
        assert!(Digraph::from_edges(2, &[(0, 1), (1, 0)]).is_ok());
        assert!(Digraph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = Digraph::random(12, 0.3, 7).unwrap();
        let b = Digraph::random(12, 0.3, 7).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(Digraph::random(6, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(Digraph::random(6, 1.0, 1).unwrap().edge_count(), 30);
        assert!(Digraph::random(3, 1.5, 0).is_err());
    }

    #[test]
    fn complete_digraph_is_one_class() {
        let g = Digraph::complete(5);
        assert_eq!(g.degree_signature_partition(), vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(g.automorphism_group(1000).unwrap().len(), 120);
    }

    #[test]
    fn cyclic_triangle_automorphisms() {
        let g = Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(g.is_tournament());
        let aut = g.automorphism_group(100).unwrap();
        assert_eq!(aut.len(), 3);
        assert!(!is_klein_four(&aut));
    }

    #[test]
    fn two_disjoint_edges_give_klein_group() {
        let g = Digraph::from_edges(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        // One class of four vertices; the automorphisms preserving both edges form D4.
        assert_eq!(g.automorphism_group(100).unwrap().len(), 8);
        // Source 0, sink 3: only the swap of 1 and 2 survives.
        let g = Digraph::from_edges(4, &[(0, 1), (2, 3), (0, 2), (1, 3)]).unwrap();
        assert_eq!(g.automorphism_group(100).unwrap().len(), 2);
    }

    #[test]
    fn reversal_swaps_degrees() {
        let g = Digraph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let r = g.reversed();
        assert_eq!(r.edges(), vec![(1, 0), (2, 0)]);
        assert_eq!(r.in_degree(0), 2);
    }
}
