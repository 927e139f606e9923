//! Homotopy classification of directed flag complexes by certified wedge
//! decompositions, with the Moore-space shortcut for tournaments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::certificate::{wedge_summary, Certificate};
use crate::collapse::seq_collapsible;
use crate::complex::Complex;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::flag::directed_flag_complex;
use crate::homology::{integral_homology, DegreeHomology, HomologyProfile};
use crate::wedge::{cone_and_collapse, pop_everything_certificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Summand {
    Sphere(usize),
    /// The Moore space `M(Z_m, n)`.
    Moore { m: u64, n: usize },
}

impl Summand {
    pub fn degree(&self) -> usize {
        match *self {
            Summand::Sphere(n) | Summand::Moore { n, .. } => n,
        }
    }

    fn key(&self) -> (usize, u8, u64) {
        match *self {
            Summand::Sphere(n) => (n, 0, 0),
            Summand::Moore { m, n } => (n, 1, m),
        }
    }
}

impl Ord for Summand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Summand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Sphere(n) => write!(f, "S^{n}"),
            Summand::Moore { m, n } => write!(f, "M(Z_{m},{n})"),
        }
    }
}

/// A wedge of spheres and Moore spaces, counted by summand. The empty wedge
/// is a point and prints as `pt`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomotopyDescriptor {
    pub summands: BTreeMap<Summand, usize>,
}

impl HomotopyDescriptor {
    pub fn point() -> Self {
        Self::default()
    }

    pub fn spheres(dims: &[usize]) -> Self {
        let mut d = Self::default();
        for &n in dims {
            d.add(Summand::Sphere(n), 1);
        }
        d
    }

    pub fn add(&mut self, s: Summand, k: usize) {
        if k > 0 {
            *self.summands.entry(s).or_default() += k;
        }
    }

    pub fn is_point(&self) -> bool {
        self.summands.is_empty()
    }

    /// The integral homology of the wedge, through its top degree.
    pub fn homology(&self) -> HomologyProfile {
        let top = self.summands.keys().map(|s| s.degree() + matches!(s, Summand::Moore { .. }) as usize).max().unwrap_or(0);
        let mut degrees = vec![DegreeHomology::default(); top + 1];
        degrees[0].betti = 1;
        for (s, &k) in &self.summands {
            match *s {
                Summand::Sphere(n) => degrees[n].betti += k,
                Summand::Moore { m, n } => degrees[n].torsion.extend(std::iter::repeat_n(m, k)),
            }
        }
        for d in &mut degrees {
            d.torsion.sort_unstable();
        }
        HomologyProfile { degrees }
    }
}

impl fmt::Display for HomotopyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "pt");
        }
        for (i, (s, k)) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{s}*{k}")?;
        }
        Ok(())
    }
}

impl FromStr for HomotopyDescriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse { line: 1, message: m };
        let text = text.trim();
        let mut d = Self::default();
        if text == "pt" {
            return Ok(d);
        }
        for term in text.split('+') {
            let (head, k) = term.rsplit_once('*').ok_or_else(|| bad(format!("missing count in {term:?}")))?;
            let k: usize = k.parse().map_err(|_| bad(format!("bad count in {term:?}")))?;
            let s = if let Some(n) = head.strip_prefix("S^") {
                Summand::Sphere(n.parse().map_err(|_| bad(format!("bad sphere in {term:?}")))?)
            } else if let Some(body) = head.strip_prefix("M(Z_").and_then(|b| b.strip_suffix(')')) {
                let (m, n) = body.split_once(',').ok_or_else(|| bad(format!("bad Moore space in {term:?}")))?;
                let m: u64 = m.parse().map_err(|_| bad(format!("bad order in {term:?}")))?;
                let n: usize = n.parse().map_err(|_| bad(format!("bad degree in {term:?}")))?;
                if m < 2 {
                    return Err(bad(format!("Moore space order must be at least 2 in {term:?}")));
                }
                Summand::Moore { m, n }
            } else {
                return Err(bad(format!("unknown summand {term:?}")));
            };
            if k == 0 {
                return Err(bad(format!("zero count in {term:?}")));
            }
            d.add(s, k);
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    CertifiedWedge,
    MooreByProposition,
    Contractible,
    Unresolved,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedWedge => "CERTIFIED-WEDGE",
            Verdict::MooreByProposition => "MOORE-BY-PROPOSITION",
            Verdict::Contractible => "CONTRACTIBLE",
            Verdict::Unresolved => "UNRESOLVED",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Collapse,
    Homology,
    PopEverything,
    ConeAndCollapse,
    None,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    /// `None` exactly when the verdict is `Unresolved`.
    pub descriptor: Option<HomotopyDescriptor>,
    pub homology: HomologyProfile,
    pub method: Method,
    pub certificate: Option<Certificate>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.descriptor {
            Some(d) => write!(f, "{} {}", self.verdict, d),
            None => write!(f, "{}", self.verdict),
        }
    }
}

/// The Moore-space wedge forced by `profile` on a simply connected space:
/// reduced homology must be concentrated in degrees `n, n + 1` with `n ≥ 2`
/// and free in degree `n + 1`. All-trivial reduced homology gives a point.
pub fn moore_decomposition(profile: &HomologyProfile, simply_connected: bool) -> Option<HomotopyDescriptor> {
    if !simply_connected {
        return None;
    }
    let reduced = profile.reduced_betti();
    let nonzero: Vec<usize> = (0..profile.degrees.len())
        .filter(|&i| reduced[i] > 0 || !profile.degrees[i].torsion.is_empty())
        .collect();
    let mut d = HomotopyDescriptor::point();
    let Some(&n) = nonzero.first() else {
        return Some(d);
    };
    if n < 2 || nonzero.iter().any(|&i| i > n + 1) {
        return None;
    }
    if profile.degrees.get(n + 1).is_some_and(|h| !h.torsion.is_empty()) {
        return None;
    }
    d.add(Summand::Sphere(n), reduced[n]);
    d.add(Summand::Sphere(n + 1), reduced.get(n + 1).copied().unwrap_or(0));
    for &m in &profile.degrees[n].torsion {
        d.add(Summand::Moore { m, n }, 1);
    }
    Some(d)
}

/// Classifies a complex. `tournament` enables the homology shortcut, which
/// relies on trivial first homology forcing a simply connected complex.
pub fn classify_complex(x: &Complex, tournament: bool) -> Result<Classification> {
    let homology = integral_homology(x)?;
    let done = |verdict, descriptor, method, certificate| Classification {
        verdict,
        descriptor: Some(descriptor),
        homology: homology.clone(),
        method,
        certificate,
    };
    if seq_collapsible(x) {
        return Ok(done(Verdict::Contractible, HomotopyDescriptor::point(), Method::Collapse, None));
    }
    if tournament {
        let h1_trivial = homology.degrees.get(1).is_none_or(|h| h.betti == 0 && h.torsion.is_empty());
        if let Some(d) = moore_decomposition(&homology, h1_trivial) {
            return Ok(done(Verdict::MooreByProposition, d, Method::Homology, None));
        }
    }
    if let Some(cert) = pop_everything_certificate(x) {
        if let Ok(dims) = wedge_summary(&cert) {
            return Ok(done(Verdict::CertifiedWedge, HomotopyDescriptor::spheres(&dims), Method::PopEverything, Some(cert)));
        }
    }
    let run = cone_and_collapse(x);
    if run.reached_vertex() {
        if let Ok(dims) = wedge_summary(&run.certificate) {
            return Ok(done(
                Verdict::CertifiedWedge,
                HomotopyDescriptor::spheres(&dims),
                Method::ConeAndCollapse,
                Some(run.certificate),
            ));
        }
    }
    Ok(Classification {
        verdict: Verdict::Unresolved,
        descriptor: None,
        homology,
        method: Method::None,
        certificate: None,
    })
}

/// Classifies the directed flag complex of a tournament.
pub fn classify_tournament(t: &Digraph) -> Result<Classification> {
    t.check_tournament()?;
    classify_complex(&directed_flag_complex(t), true)
}

/// Classifies the directed flag complex of any digraph; tournaments get the
/// homology shortcut, other digraphs do not.
pub fn classify_digraph(g: &Digraph) -> Result<Classification> {
    classify_complex(&directed_flag_complex(g), g.is_tournament())
}

pub struct BatchReport {
    pub results: Vec<Result<Classification>>,
}

impl BatchReport {
    /// Distinct descriptors among resolved items.
    pub fn distinct_types(&self) -> BTreeSet<HomotopyDescriptor> {
        self.results
            .iter()
            .filter_map(|r| r.as_ref().ok().and_then(|c| c.descriptor.clone()))
            .collect()
    }

    pub fn unresolved(&self) -> usize {
        self.results.iter().filter(|r| matches!(r, Ok(c) if c.verdict == Verdict::Unresolved)).count()
    }

    pub fn errors(&self) -> usize {
        self.results.iter().filter(|r| r.is_err()).count()
    }

    /// One line per item, then a summary line.
    pub fn table(&self) -> String {
        let mut s = String::new();
        for (i, r) in self.results.iter().enumerate() {
            match r {
                Ok(c) => s.push_str(&format!("{i} {c}\n")),
                Err(e) => s.push_str(&format!("{i} ERROR {e}\n")),
            }
        }
        s.push_str(&format!(
            "# homotopy types: {} (unresolved: {}, errors: {})\n",
            self.distinct_types().len(),
            self.unresolved(),
            self.errors()
        ));
        s
    }
}

/// Classifies every tournament; a failure on one item does not stop the rest.
pub fn batch_classify(items: &[Digraph]) -> BatchReport {
    use rayon::prelude::*;
    BatchReport { results: items.par_iter().map(classify_tournament).collect() }
}
