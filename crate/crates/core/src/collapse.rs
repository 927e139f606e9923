//! Greedy elementary collapses, cell selection and the pop-everything test.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::complex::Complex;
use crate::homology::{betti_only, boundary_matrix};
use crate::linalg::independent_in_order;
use crate::simplex::Simplex;

/// One elementary collapse: `tau` is free and `sigma` is its unique maximal coface.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CollapseStep {
    pub tau: Simplex,
    pub sigma: Simplex,
}

impl fmt::Debug for CollapseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}<{:?}", self.tau, self.sigma)
    }
}

#[derive(Clone, Copy, Default)]
struct Entry {
    /// Number of maximal simplices containing this one (itself included).
    count: u32,
    /// Wrapping sum of the ids of those maximal simplices.
    owners: u64,
    /// Nonzero iff this simplex is maximal.
    id: u64,
}

/// A downward-closed complex kept together with its coface counts, so that
/// free faces are available without rescanning after each collapse.
pub struct Collapser {
    cells: HashMap<Simplex, Entry>,
    by_id: HashMap<u64, Simplex>,
    next_id: u64,
    free: BTreeSet<Simplex>,
    maximal: BTreeSet<Simplex>,
    vertices: usize,
}

impl Collapser {
    pub fn new(s: &Complex) -> Self {
        let mut c = Collapser {
            cells: HashMap::new(),
            by_id: HashMap::new(),
            next_id: 1,
            free: BTreeSet::new(),
            maximal: BTreeSet::new(),
            vertices: 0,
        };
        let mut touched = Vec::new();
        for m in s.maximal_faces().iter() {
            c.attach(m, &mut touched);
        }
        c.refresh(touched);
        c
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn simplex_count(&self) -> usize {
        self.cells.len()
    }

    pub fn maximal_faces(&self) -> Complex {
        Complex::from_sorted_unchecked(self.maximal.iter().cloned().collect())
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.cells.contains_key(s)
    }

    pub fn is_maximal(&self, s: &Simplex) -> bool {
        self.cells.get(s).is_some_and(|e| e.id != 0)
    }

    /// The unique maximal coface of `tau`, if `tau` is free.
    pub fn free_coface(&self, tau: &Simplex) -> Option<&Simplex> {
        let e = self.cells.get(tau)?;
        if e.count == 1 && e.id == 0 {
            self.by_id.get(&e.owners)
        } else {
            None
        }
    }

    /// The short-lex-first free face.
    pub fn first_free(&self) -> Option<&Simplex> {
        self.free.iter().next()
    }

    /// Makes `s` maximal and bumps the counts of its faces.
    fn attach(&mut self, s: &Simplex, touched: &mut Vec<Simplex>) {
        let id = self.next_id;
        self.next_id += 1;
        for mask in s.face_masks() {
            let f = s.sub_by_mask(mask);
            let e = self.cells.entry(f.clone()).or_insert_with(|| {
                if mask.count_ones() == 1 {
                    self.vertices += 1;
                }
                Entry::default()
            });
            e.count += 1;
            e.owners = e.owners.wrapping_add(id);
            touched.push(f);
        }
        self.cells.get_mut(s).unwrap().id = id;
        self.by_id.insert(id, s.clone());
        self.maximal.insert(s.clone());
    }

    /// Drops `s` from the maximal list and lowers the counts of its faces.
    /// Entries reaching zero are cleared later by `refresh`.
    fn detach(&mut self, s: &Simplex, touched: &mut Vec<Simplex>) {
        let e = self.cells.get_mut(s).unwrap();
        let id = std::mem::take(&mut e.id);
        debug_assert!(id != 0);
        self.by_id.remove(&id);
        self.maximal.remove(s);
        for mask in s.face_masks() {
            let f = s.sub_by_mask(mask);
            let e = self.cells.get_mut(&f).unwrap();
            e.count -= 1;
            e.owners = e.owners.wrapping_sub(id);
            touched.push(f);
        }
    }

    fn refresh(&mut self, touched: Vec<Simplex>) {
        for f in touched {
            let Some(e) = self.cells.get(&f).copied() else { continue };
            if e.count == 0 {
                self.cells.remove(&f);
                self.free.remove(&f);
                if f.len() == 1 {
                    self.vertices -= 1;
                }
            } else if e.count == 1 && e.id == 0 {
                self.free.insert(f);
            } else {
                self.free.remove(&f);
            }
        }
    }

    /// Adds `s` (and its faces). Maximal simplices that become faces of `s`
    /// stop being maximal.
    pub fn insert(&mut self, s: &Simplex) {
        if self.cells.contains_key(s) {
            return;
        }
        let covered: Vec<Simplex> = s
            .proper_faces()
            .into_iter()
            .filter(|f| self.is_maximal(f))
            .collect();
        let mut touched = Vec::new();
        self.attach(s, &mut touched);
        for f in &covered {
            self.detach(f, &mut touched);
        }
        self.refresh(touched);
    }

    /// Performs the elementary collapse of the free face `tau`; returns the
    /// step, or `None` when `tau` is not free.
    pub fn collapse(&mut self, tau: &Simplex) -> Option<CollapseStep> {
        let sigma = self.free_coface(tau)?.clone();
        let mut touched = Vec::new();
        self.detach(&sigma, &mut touched);
        let in_tau: Vec<usize> = (0..sigma.len())
            .filter(|&p| tau.vertices().contains(&sigma.vertices()[p]))
            .collect();
        for p in in_tau {
            if sigma.len() == 1 {
                break;
            }
            let rho = sigma.delete(p);
            if self.cells.get(&rho).is_none_or(|e| e.count == 0) {
                self.attach(&rho, &mut touched);
            }
        }
        self.refresh(touched);
        Some(CollapseStep {
            tau: tau.clone(),
            sigma,
        })
    }

    /// Collapses greedily until no face is free or one vertex remains.
    pub fn run(&mut self, mut log: Option<&mut Vec<CollapseStep>>) {
        while self.vertices > 1 {
            let Some(tau) = self.first_free().cloned() else { break };
            let step = self.collapse(&tau).expect("listed face is free");
            if let Some(l) = log.as_deref_mut() {
                l.push(step);
            }
        }
    }
}

/// Greedy short-lex collapse. Returns the final maximal faces and the steps taken.
pub fn seq_collapse(s: &Complex) -> (Complex, Vec<CollapseStep>) {
    let mut c = Collapser::new(s);
    let mut steps = Vec::new();
    c.run(Some(&mut steps));
    (c.maximal_faces(), steps)
}

/// Whether greedy collapsing ends at a single vertex.
pub fn seq_collapsible(s: &Complex) -> bool {
    let mut c = Collapser::new(s);
    c.run(None);
    c.vertex_count() == 1 && c.simplex_count() == 1
}

/// Maximal `d`-simplices of `m` that can be popped one after another, in
/// short-lex order, each lowering `β_d` by one and fixing the other Betti numbers.
///
/// A maximal `d`-simplex has no cofaces, so popping it lowers `β_d` exactly
/// when its boundary column depends on the remaining `d`-columns. Scanning
/// forward and discarding dependent columns keeps precisely the columns that
/// are independent of all non-maximal columns and all later maximal ones,
/// which is what a reverse-order independence sweep computes.
pub fn select_cells(m: &Complex, d: usize) -> Vec<Simplex> {
    let m = m.maximal_faces();
    let candidates: Vec<&Simplex> = m.of_dim(d).iter().collect();
    if candidates.is_empty() {
        return Vec::new();
    }
    if d == 0 {
        return candidates.into_iter().cloned().collect();
    }
    let closure = m.closure();
    let cols = closure.of_dim(d);
    let bd = boundary_matrix(&closure, d).expect("degree within range");
    let is_max: Vec<bool> = cols.iter().map(|s| m.contains(s)).collect();
    let mut order: Vec<usize> = (0..cols.len()).filter(|&j| !is_max[j]).collect();
    order.extend((0..cols.len()).rev().filter(|&j| is_max[j]));
    let independent = independent_in_order(&bd, &order);
    let mut chosen: Vec<usize> = order
        .iter()
        .zip(&independent)
        .filter(|(&j, &ind)| is_max[j] && !ind)
        .map(|(&j, _)| j)
        .collect();
    chosen.sort_unstable();
    chosen.into_iter().map(|j| cols[j].clone()).collect()
}

/// The record of a pop-everything attempt on one connected component.
#[derive(Clone, Debug)]
pub struct PopPart {
    pub success: bool,
    /// The collapsed complex the cells were selected from.
    pub reduced: Complex,
    pub collapse_steps: Vec<CollapseStep>,
    /// Cells popped from `reduced`, in selection order (by degree, then short-lex).
    pub witness: Vec<Simplex>,
    /// Steps collapsing `reduced` with the witness popped.
    pub final_steps: Vec<CollapseStep>,
    pub terminal: Complex,
}

#[derive(Clone, Debug)]
pub struct PopEverything {
    pub parts: Vec<PopPart>,
}

impl PopEverything {
    pub fn success(&self) -> bool {
        !self.parts.is_empty() && self.parts.iter().all(|p| p.success)
    }

    pub fn witness(&self) -> Vec<Simplex> {
        let mut w: Vec<Simplex> = self.parts.iter().flat_map(|p| p.witness.iter().cloned()).collect();
        w.sort_unstable();
        w
    }

    /// Sphere dimensions, ascending.
    pub fn sphere_dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.parts.iter().flat_map(|p| p.witness.iter().map(Simplex::dim)).collect();
        d.sort_unstable();
        d
    }
}

fn pop_component(s: &Complex) -> PopPart {
    let (reduced, collapse_steps) = seq_collapse(s);
    let fail = |reduced: Complex, steps, witness| PopPart {
        success: false,
        terminal: reduced.clone(),
        reduced,
        collapse_steps: steps,
        witness,
        final_steps: Vec::new(),
    };
    let betti = betti_only(&reduced).expect("nonempty");
    let mut witness = Vec::new();
    for (i, &b) in betti.iter().enumerate().skip(1) {
        if b == 0 {
            continue;
        }
        let cells = select_cells(&reduced, i);
        if cells.len() != b {
            return fail(reduced, collapse_steps, witness);
        }
        witness.extend(cells);
    }
    let popped = reduced.pop(&witness).expect("witness cells are maximal");
    let (terminal, final_steps) = seq_collapse(&popped);
    let success = terminal.len() == 1 && terminal.simplices()[0].len() == 1;
    PopPart {
        success,
        reduced,
        collapse_steps,
        witness,
        final_steps,
        terminal,
    }
}

/// Collapse, select cells in each degree, pop them and test collapsibility;
/// disconnected inputs are handled one component at a time.
pub fn pop_everything_recorded(s: &Complex) -> PopEverything {
    let maximal = s.maximal_faces();
    let parts = Complex::vertex_components(maximal.simplices())
        .into_iter()
        .map(|c| pop_component(&Complex::from_sorted_unchecked(c)))
        .collect();
    PopEverything { parts }
}

/// `(true, cells)` when popping `cells` from the collapsed complex leaves a
/// collapsible complex, so that the input is a wedge of spheres of the cell dimensions.
pub fn pop_everything(s: &Complex) -> (bool, Vec<Simplex>) {
    let r = pop_everything_recorded(s);
    (r.success(), r.witness())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::integral_homology;
    use proptest::prelude::*;

    fn cx(t: &[&[u32]]) -> Complex {
        Complex::from_tuples(t).unwrap()
    }

    fn sx(v: &[u32]) -> Simplex {
        Simplex::new(v).unwrap()
    }

    fn circle() -> Complex {
        cx(&[&[0, 1], &[1, 2], &[0, 2]])
    }

    /// Reference collapse that recomputes free faces from scratch each step.
    fn naive_collapse(s: &Complex) -> (Complex, Vec<CollapseStep>) {
        let mut m = s.maximal_faces();
        let mut steps = Vec::new();
        while m.vertex_set().len() > 1 {
            let free = m.free_faces();
            let Some((tau, sigma)) = free.into_iter().next() else { break };
            let kept: Vec<Simplex> = m
                .closure()
                .iter()
                .filter(|r| !(tau.is_face_of(r) && r.is_face_of(&sigma)))
                .cloned()
                .collect();
            m = Complex::from_simplices(kept).maximal_faces();
            steps.push(CollapseStep { tau, sigma });
        }
        (m, steps)
    }

    fn replay(s: &Complex, steps: &[CollapseStep]) -> Complex {
        let mut cur = s.closure();
        for st in steps {
            let free = cur.maximal_faces().free_faces();
            assert!(free.contains(&(st.tau.clone(), st.sigma.clone())), "{st:?} not free");
            let kept: Vec<Simplex> = cur
                .iter()
                .filter(|r| !(st.tau.is_face_of(r) && r.is_face_of(&st.sigma)))
                .cloned()
                .collect();
            cur = Complex::from_simplices(kept);
        }
        cur.maximal_faces()
    }

    #[test]
    fn simplex_and_circle() {
        let (m, steps) = seq_collapse(&cx(&[&[1, 2, 3]]));
        assert_eq!(m, cx(&[&[3]]));
        assert!(!steps.is_empty());
        assert!(seq_collapsible(&cx(&[&[1, 2, 3]]).closure()));
        let (m, steps) = seq_collapse(&circle());
        assert_eq!(m, circle());
        assert!(steps.is_empty());
        assert!(!seq_collapsible(&circle()));
    }

    #[test]
    fn first_step_uses_shortlex_first_free_face() {
        let (_, steps) = seq_collapse(&cx(&[&[0, 1, 2], &[2, 3]]));
        assert_eq!(steps[0], CollapseStep { tau: sx(&[0]), sigma: sx(&[0, 1, 2]) });
    }

    #[test]
    fn insert_unmarks_covered_maximal() {
        let mut c = Collapser::new(&circle());
        c.insert(&sx(&[0, 1, 3]));
        assert!(!c.is_maximal(&sx(&[0, 1])));
        assert!(c.is_maximal(&sx(&[0, 1, 3])));
        assert_eq!(c.maximal_faces(), cx(&[&[0, 2], &[1, 2], &[0, 1, 3]]));
        assert_eq!(c.free_coface(&sx(&[3])), Some(&sx(&[0, 1, 3])));
    }

    #[test]
    fn select_cells_examples() {
        assert_eq!(select_cells(&circle(), 1).len(), 1);
        assert!(select_cells(&cx(&[&[0, 1, 2]]), 2).is_empty());
        let wedge = cx(&[&[0, 1], &[1, 2], &[0, 2], &[0, 3], &[3, 4], &[0, 4]]);
        assert_eq!(select_cells(&wedge, 1).len(), 2);
    }

    #[test]
    fn pop_everything_examples() {
        assert_eq!(pop_everything(&cx(&[&[0, 1, 2]])), (true, vec![]));
        let (ok, w) = pop_everything(&circle());
        assert!(ok);
        assert_eq!(w.len(), 1);
        let sphere = cx(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        let r = pop_everything_recorded(&sphere);
        assert!(r.success());
        assert_eq!(r.sphere_dims(), vec![2]);
        let two = cx(&[&[0, 1], &[1, 2], &[0, 2], &[5, 6], &[6, 7], &[5, 7]]);
        let r = pop_everything_recorded(&two);
        assert_eq!(r.parts.len(), 2);
        assert!(r.success());
        assert_eq!(r.sphere_dims(), vec![1, 1]);
    }

    #[test]
    fn rp2_fails_pop_everything() {
        let rp2 = cx(&[
            &[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 1, 5],
            &[1, 2, 4], &[2, 3, 5], &[1, 3, 4], &[2, 4, 5], &[1, 3, 5],
        ]);
        assert!(!pop_everything(&rp2).0);
    }

    fn arb_complex(n: u32, max_dim: usize, count: usize) -> impl Strategy<Value = Complex> {
        proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=max_dim + 1), 1..=count).prop_map(
            |sets| {
                Complex::from_simplices(
                    sets.into_iter()
                        .map(|s| Simplex::new(&s.into_iter().collect::<Vec<_>>()).unwrap()),
                )
            },
        )
    }

    /// Literal greedy probing of the selection rule.
    fn select_by_probing(m: &Complex, d: usize) -> Vec<Simplex> {
        let mut chosen: Vec<Simplex> = Vec::new();
        for s in m.iter() {
            let t = m.pop(&chosen).unwrap();
            if !t.contains(s) {
                continue;
            }
            let before = betti_only(&t).unwrap();
            let after_c = t.pop(std::slice::from_ref(s)).unwrap();
            let mut after = if after_c.is_empty() { vec![] } else { betti_only(&after_c).unwrap() };
            after.resize(before.len(), 0);
            let ok = (0..before.len()).all(|i| {
                if i == d {
                    after[i] + 1 == before[i]
                } else {
                    after[i] == before[i]
                }
            });
            if ok {
                chosen.push(s.clone());
            }
        }
        chosen
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn incremental_matches_naive(s in arb_complex(7, 3, 8)) {
            let fast = seq_collapse(&s);
            let slow = naive_collapse(&s);
            prop_assert_eq!(&fast.0, &slow.0);
            prop_assert_eq!(&fast.1, &slow.1);
            prop_assert_eq!(replay(&s, &fast.1), fast.0);
        }

        #[test]
        fn collapse_preserves_homology(s in arb_complex(8, 4, 10)) {
            let (m, _) = seq_collapse(&s);
            prop_assert_eq!(integral_homology(&m).unwrap().trimmed(), integral_homology(&s).unwrap().trimmed());
        }

        #[test]
        fn selection_matches_probing(s in arb_complex(7, 3, 9), d in 1usize..3) {
            let m = s.maximal_faces();
            prop_assert_eq!(select_cells(&m, d), select_by_probing(&m, d));
        }

        #[test]
        fn pop_everything_success_means_free_matching_homology(s in arb_complex(7, 3, 8)) {
            let r = pop_everything_recorded(&s);
            if r.success() {
                let h = integral_homology(&s).unwrap();
                prop_assert!(h.is_torsion_free());
                let mut expected = h.reduced_betti();
                expected[0] = 0;
                let mut got = vec![0usize; expected.len()];
                for d in r.sphere_dims() {
                    got[d] += 1;
                }
                prop_assert_eq!(got, expected);
            }
        }

        #[test]
        fn cone_is_collapsible(s in arb_complex(7, 3, 7)) {
            prop_assume!(Complex::vertex_components(s.maximal_faces().simplices()).len() == 1);
            let coned = s.cone(&[s.closure().into_simplices()]).unwrap();
            prop_assert!(seq_collapsible(&coned.closure()));
        }
    }
}
