//! Ordered simplicial complexes stored as short-lex sorted simplex lists.
//!
//! A [`Complex`] is a list of simplices that spans a complex; it is not required
//! to be closed under taking faces. Most algorithms work on the list of maximal
//! faces and take the downward closure only when homology is needed.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexId};

/// Number of `d`-simplices for `d = 0..=dim`, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }
}

/// A finite, duplicate-free, short-lex sorted list of ordered simplices.
#[derive(Clone, Debug, Default)]
pub struct Complex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for Complex {}

impl FromIterator<Simplex> for Complex {
    fn from_iter<I: IntoIterator<Item = Simplex>>(iter: I) -> Self {
        Complex::from_simplices(iter)
    }
}

impl Complex {
    /// Sorts and deduplicates the given simplices.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(iter: I) -> Self {
        let mut simplices: Vec<Simplex> = iter.into_iter().collect();
        simplices.sort_unstable();
        simplices.dedup();
        Self::from_sorted_unchecked(simplices)
    }

    /// Builds a complex from vertex tuples, validating each one.
    pub fn from_tuples(tuples: &[&[VertexId]]) -> Result<Self> {
        let simplices = tuples
            .iter()
            .map(|t| Simplex::new(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_simplices(simplices))
    }

    pub(crate) fn from_sorted_unchecked(simplices: Vec<Simplex>) -> Self {
        debug_assert!(simplices.windows(2).all(|w| w[0] < w[1]));
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Complex { simplices, index }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn into_simplices(self) -> Vec<Simplex> {
        self.simplices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Simplex> {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` in the short-lex order of this list.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Largest simplex dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.simplices.iter().map(Simplex::max_vertex).max()
    }

    /// Sorted list of distinct vertices occurring in any simplex.
    pub fn vertex_set(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self
            .simplices
            .iter()
            .flat_map(|s| s.vertices().iter().copied())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Simplices of dimension `d`, in short-lex order.
    pub fn of_dim(&self, d: usize) -> &[Simplex] {
        let lo = self.simplices.partition_point(|s| s.dim() < d);
        let hi = self.simplices.partition_point(|s| s.dim() <= d);
        &self.simplices[lo..hi]
    }

    /// Simplices of the largest dimension.
    pub fn top_simplices(&self) -> &[Simplex] {
        match self.dim() {
            Some(d) => self.of_dim(d),
            None => &[],
        }
    }

    /// Smallest downward-closed complex containing every listed simplex.
    pub fn closure(&self) -> Complex {
        let mut set: HashSet<Simplex> = HashSet::with_capacity(self.simplices.len() * 4);
        // Simplices whose faces have all been inserted already need no expansion.
        for s in self.simplices.iter().rev() {
            if set.contains(s) {
                continue;
            }
            for m in s.face_masks() {
                set.insert(s.sub_by_mask(m));
            }
        }
        Complex::from_simplices(set)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.simplices
            .iter()
            .all(|s| s.faces().iter().all(|f| self.contains(f)))
    }

    /// The simplices that are not proper ordered subtuples of another listed simplex.
    pub fn maximal_faces(&self) -> Complex {
        let mut covered: HashSet<Simplex> = HashSet::new();
        let mut maximal = Vec::new();
        for s in self.simplices.iter().rev() {
            if covered.contains(s) {
                continue;
            }
            let full = (1u32 << s.len()) - 1;
            for m in 1..full {
                covered.insert(s.sub_by_mask(m));
            }
            maximal.push(s.clone());
        }
        maximal.reverse();
        Complex::from_sorted_unchecked(maximal)
    }

    /// Counts simplices per dimension. The complex should be downward closed.
    pub fn f_vector(&self) -> FVector {
        let mut counts = vec![0usize; self.dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        while counts.last() == Some(&0) {
            counts.pop();
        }
        FVector(counts)
    }

    /// All pairs `(tau, sigma)` where `tau` is a proper face of exactly one
    /// maximal simplex `sigma`, sorted short-lex by `tau`.
    ///
    /// No codimension restriction is placed on the pair.
    pub fn free_faces(&self) -> Vec<(Simplex, Simplex)> {
        let maximal = self.maximal_faces();
        let mut owners: HashMap<Simplex, (u32, usize)> = HashMap::new();
        for (i, s) in maximal.iter().enumerate() {
            let full = (1u32 << s.len()) - 1;
            for m in 1..full {
                let e = owners.entry(s.sub_by_mask(m)).or_insert((0, i));
                e.0 += 1;
            }
        }
        let mut free: Vec<(Simplex, Simplex)> = owners
            .into_iter()
            .filter(|(_, (count, _))| *count == 1)
            .map(|(tau, (_, i))| (tau, maximal.simplices[i].clone()))
            .collect();
        free.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        free
    }

    /// Removes each simplex of `targets` and puts back its codimension-1 faces;
    /// returns the maximal faces of the result.
    pub fn pop(&self, targets: &[Simplex]) -> Result<Complex> {
        let mut removed: HashSet<&Simplex> = HashSet::with_capacity(targets.len());
        for t in targets {
            if !self.contains(t) {
                return Err(Error::PopTargetAbsent(format!("{t:?}")));
            }
            removed.insert(t);
        }
        let mut out: Vec<Simplex> = self
            .simplices
            .iter()
            .filter(|s| !removed.contains(s))
            .cloned()
            .collect();
        for t in targets {
            out.extend(t.faces());
        }
        Ok(Complex::from_simplices(out).maximal_faces())
    }

    /// Cones off each list of `bases` with its own new apex. Apexes are
    /// `m+1, m+2, ...` in list order, `m` being the largest vertex of `self`.
    /// Returns the maximal faces of the result.
    pub fn cone(&self, bases: &[Vec<Simplex>]) -> Result<Complex> {
        if bases.is_empty() {
            return Ok(self.maximal_faces());
        }
        let closure = self.closure();
        let first_apex = self.max_vertex().map_or(0, |m| m + 1);
        let mut out: Vec<Simplex> = self.simplices.clone();
        for (i, base) in bases.iter().enumerate() {
            let apex = first_apex + i as VertexId;
            for g in base {
                if !closure.contains(g) {
                    return Err(Error::ConeBaseNotSubcomplex(format!("{g:?}")));
                }
                out.push(g.join_vertex(apex));
            }
        }
        Ok(Complex::from_simplices(out).maximal_faces())
    }

    /// Connected components of the listed simplices, where two simplices are
    /// adjacent when they share a vertex. Components come out ordered so that
    /// their sorted vertex sets are in short-lex order; each component keeps
    /// the short-lex order of its simplices.
    pub fn vertex_components(simplices: &[Simplex]) -> Vec<Vec<Simplex>> {
        let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
        fn find(parent: &mut HashMap<VertexId, VertexId>, v: VertexId) -> VertexId {
            let p = *parent.entry(v).or_insert(v);
            if p == v {
                return v;
            }
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
        for s in simplices {
            let vs = s.vertices();
            let r0 = find(&mut parent, vs[0]);
            for &v in &vs[1..] {
                let r = find(&mut parent, v);
                if r != r0 {
                    let (lo, hi) = if r < r0 { (r, r0) } else { (r0, r) };
                    parent.insert(hi, lo);
                }
            }
        }
        let mut groups: HashMap<VertexId, Vec<Simplex>> = HashMap::new();
        for s in simplices {
            let root = find(&mut parent, s.vertices()[0]);
            groups.entry(root).or_default().push(s.clone());
        }
        let mut comps: Vec<(Simplex, Vec<Simplex>)> = groups
            .into_values()
            .map(|mut c| {
                c.sort_unstable();
                let mut vs: Vec<VertexId> =
                    c.iter().flat_map(|s| s.vertices().iter().copied()).collect();
                vs.sort_unstable();
                vs.dedup();
                (Simplex::from_slice_unchecked(&vs), c)
            })
            .collect();
        comps.sort_by(|a, b| a.0.cmp(&b.0));
        comps.into_iter().map(|(_, c)| c).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v).unwrap()
    }

    fn cx(t: &[&[u32]]) -> Complex {
        Complex::from_tuples(t).unwrap()
    }

    fn triangle() -> Complex {
        cx(&[&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]])
    }

    #[test]
    fn maximal_faces_examples() {
        assert_eq!(cx(&[&[1], &[2], &[1, 2]]).maximal_faces(), cx(&[&[1, 2]]));
        assert_eq!(triangle().maximal_faces(), cx(&[&[1, 2, 3]]));
        // Opposite orientations of an edge are both maximal.
        assert_eq!(cx(&[&[1, 2], &[2, 1], &[1]]).maximal_faces().len(), 2);
    }

    #[test]
    fn free_faces_examples() {
        let free = cx(&[&[1, 2, 3]]).free_faces();
        assert_eq!(free.len(), 6);
        assert_eq!(free[0].0, s(&[1]));
        assert!(cx(&[&[1, 2], &[2, 3], &[1, 3]]).free_faces().is_empty());
        let path: Vec<Simplex> = cx(&[&[1, 2], &[2, 3]])
            .free_faces()
            .into_iter()
            .map(|(t, _)| t)
            .collect();
        assert_eq!(path, vec![s(&[1]), s(&[3])]);
    }

    #[test]
    fn pop_examples() {
        let popped = triangle().pop(&[s(&[1, 2, 3])]).unwrap();
        assert_eq!(popped, cx(&[&[1, 2], &[1, 3], &[2, 3]]));
        let m = cx(&[&[1, 2], &[2, 3], &[3]]);
        assert_eq!(m.pop(&[]).unwrap(), m.maximal_faces());
        assert!(matches!(
            m.pop(&[s(&[9])]),
            Err(Error::PopTargetAbsent(_))
        ));
    }

    #[test]
    fn cone_examples() {
        let circle = cx(&[&[1, 2], &[2, 3], &[1, 3]]);
        let disc = circle.cone(&[circle.simplices().to_vec()]).unwrap();
        assert_eq!(disc, cx(&[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]));
        assert_eq!(circle.cone(&[]).unwrap(), circle);

        let two = cx(&[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]]);
        let coned = two
            .cone(&[
                vec![s(&[0, 1]), s(&[1, 2]), s(&[0, 2])],
                vec![s(&[3, 4]), s(&[4, 5]), s(&[3, 5])],
            ])
            .unwrap();
        assert!(coned.contains(&s(&[0, 1, 6])));
        assert!(coned.contains(&s(&[3, 4, 7])));
        assert!(matches!(
            circle.cone(&[vec![s(&[1, 2, 3])]]),
            Err(Error::ConeBaseNotSubcomplex(_))
        ));
    }

    #[test]
    fn closure_and_f_vector() {
        let c = cx(&[&[1, 2, 3]]).closure();
        assert_eq!(c.len(), 7);
        assert_eq!(c.f_vector(), FVector(vec![3, 3, 1]));
        assert_eq!(c.closure(), c);
        assert!(c.is_downward_closed());
    }

    #[test]
    fn components_are_short_lex_ordered_by_vertex_set() {
        let comps = Complex::vertex_components(&[s(&[5, 6]), s(&[0, 7]), s(&[6, 8]), s(&[1, 2])]);
        assert_eq!(
            comps,
            vec![
                vec![s(&[0, 7])],
                vec![s(&[1, 2])],
                vec![s(&[5, 6]), s(&[6, 8])],
            ]
        );
    }

    fn arb_complex() -> impl proptest::strategy::Strategy<Value = Complex> {
        use proptest::prelude::*;
        proptest::collection::vec(proptest::sample::subsequence((0u32..6).collect::<Vec<_>>(), 1..4), 1..8)
            .prop_flat_map(|sets| {
                let n = sets.len();
                (Just(sets), proptest::collection::vec(any::<bool>(), n))
            })
            .prop_map(|(sets, flips)| {
                Complex::from_simplices(sets.into_iter().zip(flips).map(|(mut v, f)| {
                    if f {
                        v.reverse();
                    }
                    Simplex::new(&v).unwrap()
                }))
            })
    }

    proptest::proptest! {
        #[test]
        fn closure_is_idempotent_and_maximal_faces_agree(c in arb_complex()) {
            let cl = c.closure();
            proptest::prop_assert_eq!(cl.closure(), cl.clone());
            proptest::prop_assert_eq!(c.maximal_faces().closure(), cl.clone());
            proptest::prop_assert_eq!(cl.maximal_faces(), c.maximal_faces());
            for s in c.iter() {
                proptest::prop_assert!(cl.contains(s));
            }
        }

        #[test]
        fn free_faces_lie_in_exactly_one_maximal(c in arb_complex()) {
            let m = c.maximal_faces();
            for (tau, sigma) in m.free_faces() {
                let owners: Vec<&Simplex> = m.iter().filter(|x| tau.is_face_of(x)).collect();
                proptest::prop_assert_eq!(owners, vec![&sigma]);
                proptest::prop_assert!(tau != sigma);
            }
        }

        #[test]
        fn pop_then_restore_recovers_closure(c in arb_complex()) {
            let m = c.maximal_faces();
            let targets: Vec<Simplex> = m.iter().step_by(2).cloned().collect();
            let popped = m.pop(&targets).unwrap();
            let restored = Complex::from_simplices(popped.iter().cloned().chain(targets.iter().cloned()));
            proptest::prop_assert_eq!(restored.closure(), c.closure());
        }
    }
}
