//! Coning off spherical subcomplexes and recollapsing, with a certificate
//! of every operation.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::certificate::{Certificate, Op};
use crate::collapse::{pop_everything_recorded, seq_collapse, CollapseStep, Collapser};
use crate::complex::Complex;
use crate::homology::betti_only;
use crate::linalg::{nullspace, IntMatrix};
use crate::simplex::Simplex;

/// A subcomplex that may be coned off, with the proof that it is a wedge of
/// spheres: popping `witness` from its closure and collapsing by `steps`
/// leaves a single vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coneable {
    pub support: Vec<Simplex>,
    pub witness: Vec<Simplex>,
    pub steps: Vec<CollapseStep>,
}

/// For each list, the elements occurring in no other list, in input order.
pub fn unique_simplices(c: &[Vec<Simplex>]) -> Vec<Vec<Simplex>> {
    let mut owner: HashMap<&Simplex, Option<usize>> = HashMap::new();
    for (i, ci) in c.iter().enumerate() {
        for s in ci {
            owner
                .entry(s)
                .and_modify(|o| {
                    if *o != Some(i) {
                        *o = None;
                    }
                })
                .or_insert(Some(i));
        }
    }
    c.iter()
        .enumerate()
        .map(|(i, ci)| ci.iter().filter(|s| owner[s] == Some(i)).cloned().collect())
        .collect()
}

/// Boundary matrix from the top simplices of `m` to their faces. Rows with no
/// entry are left out; they do not affect the kernel or its standard basis.
fn top_boundary(tops: &[Simplex]) -> IntMatrix {
    let mut faces: Vec<Simplex> = tops.iter().flat_map(|t| t.faces()).collect();
    faces.sort_unstable();
    faces.dedup();
    let index: HashMap<&Simplex, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut a = IntMatrix::zeros(faces.len(), tops.len());
    for (j, t) in tops.iter().enumerate() {
        for (i, f) in t.faces().iter().enumerate() {
            a.set(index[f], j, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleSearch {
    /// Skip supports whose rational homology is not that of a sphere. Such a
    /// support can never pass the collapse test, so the output is unchanged.
    pub prefilter: bool,
}

impl Default for CycleSearch {
    fn default() -> Self {
        CycleSearch { prefilter: true }
    }
}

/// Supports of the standard top-dimensional cycle basis of `m` that become
/// collapsible after popping one simplex they do not share with other supports.
pub fn find_good_cycles(m: &Complex) -> Vec<Coneable> {
    find_good_cycles_with(m, CycleSearch::default())
}

pub fn find_good_cycles_with(m: &Complex, opts: CycleSearch) -> Vec<Coneable> {
    let Some(d) = m.dim() else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let tops = m.of_dim(d);
    let basis = nullspace(&top_boundary(tops));
    let supports: Vec<Vec<Simplex>> = basis
        .iter()
        .map(|b| b.iter().zip(tops).filter(|(x, _)| !x.is_zero()).map(|(_, t)| t.clone()).collect())
        .collect();
    let unique = unique_simplices(&supports);
    supports
        .into_par_iter()
        .zip(unique)
        .filter_map(|(c, candidates)| {
            if candidates.is_empty() {
                return None;
            }
            let cx = Complex::from_sorted_unchecked(c);
            if opts.prefilter && !has_sphere_betti(&cx, d) {
                return None;
            }
            for t in candidates {
                let popped = cx.pop(std::slice::from_ref(&t)).expect("support simplex");
                let (rest, steps) = seq_collapse(&popped);
                if is_vertex(&rest) {
                    return Some(Coneable {
                        support: cx.into_simplices(),
                        witness: vec![t],
                        steps,
                    });
                }
            }
            None
        })
        .collect()
}

fn is_vertex(c: &Complex) -> bool {
    c.len() == 1 && c.simplices()[0].len() == 1
}

fn has_sphere_betti(c: &Complex, d: usize) -> bool {
    let b = betti_only(c).expect("nonempty support");
    b.iter().enumerate().all(|(i, &x)| x == usize::from(i == 0 || i == d))
}

/// Connected components of the top-dimensional simplices of `m`, those that
/// pass pop-everything with every popped cell top-dimensional.
///
/// Popped cells have to be maximal in all of `m` for the cone to split off
/// spheres, and among the cells of a component only the top-dimensional ones
/// are guaranteed to be.
pub fn find_good_components(m: &Complex) -> Vec<Coneable> {
    let Some(d) = m.dim() else { return Vec::new() };
    let comps = Complex::vertex_components(m.of_dim(d));
    comps
        .into_par_iter()
        .filter_map(|c| {
            let cx = Complex::from_sorted_unchecked(c);
            let r = pop_everything_recorded(&cx);
            let part = r.parts.into_iter().next()?;
            if !part.success || part.witness.iter().any(|w| w.dim() != d) {
                return None;
            }
            let mut steps = part.collapse_steps;
            steps.extend(part.final_steps);
            Some(Coneable {
                support: cx.into_simplices(),
                witness: part.witness,
                steps,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Cycles,
    Components,
}

/// What one round of coning did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub source: Source,
    pub cones: usize,
    pub spheres: Vec<usize>,
    /// Simplices in the closure after recollapsing.
    pub simplices_after: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeOptions {
    pub cycles: CycleSearch,
    /// Stop with a partial certificate after this many rounds.
    pub max_rounds: usize,
}

impl Default for ConeOptions {
    fn default() -> Self {
        ConeOptions {
            cycles: CycleSearch::default(),
            max_rounds: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConeAndCollapse {
    pub terminal: Complex,
    pub certificate: Certificate,
    pub rounds: Vec<Round>,
    /// True when the round limit stopped the loop.
    pub truncated: bool,
}

impl ConeAndCollapse {
    pub fn reached_vertex(&self) -> bool {
        is_vertex(&self.terminal)
    }

    /// Sphere dimensions split off so far, ascending.
    pub fn spheres(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.rounds.iter().flat_map(|r| r.spheres.iter().copied()).collect();
        s.sort_unstable();
        s
    }
}

fn log_steps(ops: &mut Vec<Op>, steps: Vec<CollapseStep>) {
    ops.extend(steps.into_iter().map(|s| Op::Collapse { tau: s.tau, sigma: s.sigma }));
}

/// Collapse, then repeatedly cone off good cycles (or, failing that, good
/// components) and recollapse, one cone per subcomplex per round. Stops when
/// nothing qualifies or the complex is zero-dimensional.
pub fn cone_and_collapse(s: &Complex) -> ConeAndCollapse {
    cone_and_collapse_with(s, ConeOptions::default())
}

pub fn cone_and_collapse_with(s: &Complex, opts: ConeOptions) -> ConeAndCollapse {
    let mut cert = Certificate::new(s.simplices().to_vec());
    let mut engine = Collapser::new(s);
    let mut steps = Vec::new();
    engine.run(Some(&mut steps));
    log_steps(&mut cert.ops, steps);
    let mut rounds = Vec::new();
    let mut truncated = false;
    loop {
        let m = engine.maximal_faces();
        if m.dim().is_none_or(|d| d == 0) {
            break;
        }
        if rounds.len() >= opts.max_rounds {
            truncated = true;
            break;
        }
        let (source, good) = match find_good_cycles_with(&m, opts.cycles) {
            g if !g.is_empty() => (Source::Cycles, g),
            _ => (Source::Components, find_good_components(&m)),
        };
        if good.is_empty() {
            break;
        }
        let first_apex = m.max_vertex().expect("nonempty") + 1;
        let mut spheres = Vec::new();
        for (i, g) in good.iter().enumerate() {
            let apex = first_apex + i as u32;
            for t in &g.support {
                engine.insert(&t.join_vertex(apex));
            }
            spheres.extend(g.witness.iter().map(Simplex::dim));
        }
        let cones = good.len();
        for (i, g) in good.into_iter().enumerate() {
            cert.ops.push(Op::Cone {
                apex: first_apex + i as u32,
                base: g.support,
                witness: g.witness,
                steps: g.steps.into_iter().map(|s| (s.tau, s.sigma)).collect(),
            });
        }
        let mut steps = Vec::new();
        engine.run(Some(&mut steps));
        log_steps(&mut cert.ops, steps);
        rounds.push(Round {
            source,
            cones,
            spheres,
            simplices_after: engine.simplex_count(),
        });
    }
    let terminal = engine.maximal_faces();
    cert.terminal = terminal.simplices().to_vec();
    ConeAndCollapse {
        terminal,
        certificate: cert,
        rounds,
        truncated,
    }
}

/// Pop-everything as a certificate: collapse, pop the witness cells, collapse again.
/// `None` unless the input is connected and the attempt succeeds.
pub fn pop_everything_certificate(s: &Complex) -> Option<Certificate> {
    let r = pop_everything_recorded(s);
    if r.parts.len() != 1 || !r.success() {
        return None;
    }
    let part = r.parts.into_iter().next().unwrap();
    let mut cert = Certificate::new(s.simplices().to_vec());
    log_steps(&mut cert.ops, part.collapse_steps);
    cert.ops.extend(part.witness.into_iter().map(Op::Pop));
    log_steps(&mut cert.ops, part.final_steps);
    cert.terminal = part.terminal.into_simplices();
    Some(cert)
}
