//! Line-based certificates of collapse, pop and cone operations, with a
//! replaying verifier that shares no code with the producers.
//!
//! ```text
//! DFL <vertices>
//! D <sha256 of the S lines>
//! S v0 v1 ...            initial simplices
//! X t0 .. ; s0 ..        collapse of the free face t along s
//! P v0 ..                pop of a maximal simplex
//! W P v0 ..              witness cell of the next cone
//! W X t0 .. ; s0 ..      witness collapse of the next cone
//! C apex { s ; s ; .. }  cone on the closure of the listed simplices
//! F v0 ..                final maximal simplices
//! END <number of F lines>
//! ```
//!
//! Before a cone, its witness lines say: popping the `W P` cells from the
//! closure of the base and replaying the `W X` collapses leaves one vertex.
//! With the cells maximal in the whole complex, the complex is then the cone
//! result wedged with one sphere per witness cell.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Collapse { tau: Simplex, sigma: Simplex },
    Pop(Simplex),
    Cone {
        apex: VertexId,
        base: Vec<Simplex>,
        witness: Vec<Simplex>,
        steps: Vec<(Simplex, Simplex)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub vertex_count: usize,
    pub digest: String,
    pub initial: Vec<Simplex>,
    pub ops: Vec<Op>,
    pub terminal: Vec<Simplex>,
}

fn join(s: &Simplex) -> String {
    s.to_string()
}

fn initial_digest(initial: &[Simplex]) -> String {
    let mut h = Sha256::new();
    for s in initial {
        h.update(format!("S {}\n", join(s)).as_bytes());
    }
    hex::encode(h.finalize())
}

impl Certificate {
    pub fn new(initial: Vec<Simplex>) -> Self {
        let vertices: BTreeSet<VertexId> = initial.iter().flat_map(|s| s.vertices().iter().copied()).collect();
        Certificate {
            vertex_count: vertices.len(),
            digest: initial_digest(&initial),
            initial,
            ops: Vec::new(),
            terminal: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        Parser::default().run(text)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DFL {}", self.vertex_count)?;
        writeln!(f, "D {}", self.digest)?;
        for s in &self.initial {
            writeln!(f, "S {}", join(s))?;
        }
        for op in &self.ops {
            match op {
                Op::Collapse { tau, sigma } => writeln!(f, "X {} ; {}", join(tau), join(sigma))?,
                Op::Pop(s) => writeln!(f, "P {}", join(s))?,
                Op::Cone { apex, base, witness, steps } => {
                    for w in witness {
                        writeln!(f, "W P {}", join(w))?;
                    }
                    for (t, s) in steps {
                        writeln!(f, "W X {} ; {}", join(t), join(s))?;
                    }
                    let parts: Vec<String> = base.iter().map(join).collect();
                    writeln!(f, "C {apex} {{ {} }}", parts.join(" ; "))?;
                }
            }
        }
        for s in &self.terminal {
            writeln!(f, "F {}", join(s))?;
        }
        writeln!(f, "END {}", self.terminal.len())
    }
}

#[derive(Default)]
struct Parser {
    witness: Vec<Simplex>,
    steps: Vec<(Simplex, Simplex)>,
}

fn simplex(line: usize, text: &str) -> Result<Simplex> {
    let vs: Vec<VertexId> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("bad vertex id {t:?}"))))
        .collect::<Result<_>>()?;
    Simplex::new(&vs).map_err(|e| Error::parse(line, e.to_string()))
}

fn pair(line: usize, text: &str) -> Result<(Simplex, Simplex)> {
    let (t, s) = text.split_once(';').ok_or_else(|| Error::parse(line, "expected `tau ; sigma`"))?;
    Ok((simplex(line, t)?, simplex(line, s)?))
}

impl Parser {
    fn run(mut self, text: &str) -> Result<Certificate> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let (ln, head) = lines.next().ok_or_else(|| Error::parse(1, "empty certificate"))?;
        let vertex_count = head
            .strip_prefix("DFL ")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::parse(ln, "expected `DFL <vertices>`"))?;
        let (ln, d) = lines.next().ok_or_else(|| Error::parse(2, "missing digest"))?;
        let digest = d
            .strip_prefix("D ")
            .map(|x| x.trim().to_string())
            .ok_or_else(|| Error::parse(ln, "expected `D <digest>`"))?;
        let mut cert = Certificate {
            vertex_count,
            digest,
            initial: Vec::new(),
            ops: Vec::new(),
            terminal: Vec::new(),
        };
        let mut section = 0; // 0: S, 1: ops, 2: F
        let mut end = None;
        for (ln, line) in lines {
            if end.is_some() {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::parse(ln, "content after END"));
            }
            let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
            match tag {
                "S" if section == 0 => cert.initial.push(simplex(ln, rest)?),
                "X" | "P" | "C" | "W" if section <= 1 => {
                    section = 1;
                    self.op(ln, tag, rest, &mut cert.ops)?;
                }
                "F" if section <= 2 => {
                    self.no_pending(ln)?;
                    section = 2;
                    cert.terminal.push(simplex(ln, rest)?);
                }
                "END" => {
                    self.no_pending(ln)?;
                    let n: usize = rest.trim().parse().map_err(|_| Error::parse(ln, "bad END count"))?;
                    if n != cert.terminal.len() {
                        return Err(Error::parse(ln, format!("END says {n}, found {} F lines", cert.terminal.len())));
                    }
                    end = Some(n);
                }
                _ => return Err(Error::parse(ln, format!("unexpected line {line:?}"))),
            }
        }
        if end.is_none() {
            return Err(Error::parse(text.lines().count() + 1, "missing END"));
        }
        Ok(cert)
    }

    fn no_pending(&self, ln: usize) -> Result<()> {
        if self.witness.is_empty() && self.steps.is_empty() {
            Ok(())
        } else {
            Err(Error::parse(ln, "witness lines without a following cone"))
        }
    }

    fn op(&mut self, ln: usize, tag: &str, rest: &str, ops: &mut Vec<Op>) -> Result<()> {
        match tag {
            "X" => {
                self.no_pending(ln)?;
                let (tau, sigma) = pair(ln, rest)?;
                ops.push(Op::Collapse { tau, sigma });
            }
            "P" => {
                self.no_pending(ln)?;
                ops.push(Op::Pop(simplex(ln, rest)?));
            }
            "W" => {
                let (sub, body) = rest.split_once(' ').unwrap_or((rest, ""));
                match sub {
                    "P" if self.steps.is_empty() => self.witness.push(simplex(ln, body)?),
                    "X" => self.steps.push(pair(ln, body)?),
                    _ => return Err(Error::parse(ln, "bad witness line")),
                }
            }
            "C" => {
                let (apex, body) = rest.split_once(' ').ok_or_else(|| Error::parse(ln, "bad cone line"))?;
                let apex = apex.parse().map_err(|_| Error::parse(ln, "bad apex"))?;
                let body = body
                    .trim()
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| Error::parse(ln, "cone base must be braced"))?;
                let base = if body.trim().is_empty() {
                    Vec::new()
                } else {
                    body.split(';').map(|s| simplex(ln, s)).collect::<Result<_>>()?
                };
                ops.push(Op::Cone {
                    apex,
                    base,
                    witness: std::mem::take(&mut self.witness),
                    steps: std::mem::take(&mut self.steps),
                });
            }
            _ => unreachable!(),
        }
        Ok(())
    }
}

/// A downward-closed complex stored with the immediate cofaces of every simplex.
#[derive(Default)]
struct Replay {
    cofaces: HashMap<Simplex, Vec<Simplex>>,
    vertices: BTreeSet<VertexId>,
}

impl Replay {
    fn from_closure(simplices: &[Simplex]) -> Self {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for s in simplices {
            let k = s.len();
            for mask in 1u32..(1 << k) {
                let vs: Vec<VertexId> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| s.vertices()[i]).collect();
                all.insert(Simplex::new(&vs).expect("face of a simplex"));
            }
        }
        let mut r = Replay::default();
        for s in all {
            r.add(s);
        }
        r
    }

    fn contains(&self, s: &Simplex) -> bool {
        self.cofaces.contains_key(s)
    }

    fn is_maximal(&self, s: &Simplex) -> bool {
        self.cofaces.get(s).is_some_and(Vec::is_empty)
    }

    /// Adds `s`, whose codimension-1 faces must already be present.
    fn add(&mut self, s: Simplex) {
        if s.len() > 1 {
            for i in 0..s.len() {
                self.cofaces.get_mut(&s.delete(i)).expect("face present").push(s.clone());
            }
        } else {
            self.vertices.insert(s.vertices()[0]);
        }
        self.cofaces.insert(s, Vec::new());
    }

    /// Removes `s`, which must have no cofaces.
    fn remove(&mut self, s: &Simplex) {
        debug_assert!(self.is_maximal(s));
        if s.len() > 1 {
            for i in 0..s.len() {
                if let Some(c) = self.cofaces.get_mut(&s.delete(i)) {
                    c.retain(|x| x != s);
                }
            }
        } else {
            self.vertices.remove(&s.vertices()[0]);
        }
        self.cofaces.remove(s);
    }

    fn collapse(&mut self, tau: &Simplex, sigma: &Simplex) -> std::result::Result<(), String> {
        if !self.contains(tau) || !self.contains(sigma) {
            return Err(format!("{tau:?} or {sigma:?} not present"));
        }
        if tau == sigma || !tau.is_face_of(sigma) {
            return Err(format!("{tau:?} is not a proper face of {sigma:?}"));
        }
        if !self.is_maximal(sigma) {
            return Err(format!("{sigma:?} is not maximal"));
        }
        let mut interval = vec![tau.clone()];
        let mut seen: BTreeSet<Simplex> = BTreeSet::new();
        let mut i = 0;
        while i < interval.len() {
            for c in &self.cofaces[&interval[i]] {
                if !c.is_face_of(sigma) {
                    return Err(format!("{tau:?} is not free: {c:?} lies outside {sigma:?}"));
                }
                if seen.insert(c.clone()) {
                    interval.push(c.clone());
                }
            }
            i += 1;
        }
        interval.sort_by_key(|s| std::cmp::Reverse(s.len()));
        for s in &interval {
            self.remove(s);
        }
        Ok(())
    }

    fn pop(&mut self, s: &Simplex) -> std::result::Result<(), String> {
        if !self.is_maximal(s) {
            return Err(format!("pop target {s:?} is not a maximal simplex"));
        }
        self.remove(s);
        Ok(())
    }

    fn is_single_vertex(&self) -> bool {
        self.cofaces.len() == 1 && self.vertices.len() == 1
    }

    fn maximal(&self) -> Vec<Simplex> {
        let mut m: Vec<Simplex> = self.cofaces.iter().filter(|(_, c)| c.is_empty()).map(|(s, _)| s.clone()).collect();
        m.sort_unstable();
        m
    }

    fn cone(&mut self, apex: VertexId, base: &[Simplex], witness: &[Simplex], steps: &[(Simplex, Simplex)]) -> std::result::Result<(), String> {
        let expected = self.vertices.iter().next_back().map_or(0, |m| m + 1);
        if apex != expected {
            return Err(format!("apex {apex} should be {expected}"));
        }
        for b in base {
            if !self.contains(b) {
                return Err(format!("cone base simplex {b:?} not present"));
            }
        }
        let mut sub = Replay::from_closure(base);
        for w in witness {
            if !self.is_maximal(w) {
                return Err(format!("witness cell {w:?} is not maximal in the complex"));
            }
            sub.pop(w).map_err(|e| format!("witness: {e}"))?;
        }
        for (t, s) in steps {
            sub.collapse(t, s).map_err(|e| format!("witness: {e}"))?;
        }
        if !sub.is_single_vertex() {
            return Err("witness collapses do not end at a single vertex".into());
        }
        let mut faces: Vec<Simplex> = Replay::from_closure(base).cofaces.into_keys().collect();
        faces.sort_unstable();
        self.add(Simplex::vertex(apex));
        for f in faces {
            self.add(f.join_vertex(apex));
        }
        Ok(())
    }
}

/// Outcome of replaying a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    /// `None` when every check passed; otherwise the failing operation index
    /// (the number of operations when the final state is wrong) and a reason.
    pub failure: Option<(usize, String)>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Replays `cert` from its initial simplices, checking every operation and
/// the final maximal simplices.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    let fail = |i: usize, m: String| Verification { failure: Some((i, m)) };
    if initial_digest(&cert.initial) != cert.digest {
        return fail(0, "digest does not match the initial simplices".into());
    }
    let mut state = Replay::from_closure(&cert.initial);
    if state.vertices.len() != cert.vertex_count {
        return fail(0, format!("header says {} vertices, found {}", cert.vertex_count, state.vertices.len()));
    }
    for (i, op) in cert.ops.iter().enumerate() {
        let r = match op {
            Op::Collapse { tau, sigma } => state.collapse(tau, sigma),
            Op::Pop(s) => state.pop(s),
            Op::Cone { apex, base, witness, steps } => state.cone(*apex, base, witness, steps),
        };
        if let Err(m) = r {
            return fail(i, m);
        }
    }
    if state.maximal() != cert.terminal {
        return fail(cert.ops.len(), "final maximal simplices differ from the recorded ones".into());
    }
    Verification { failure: None }
}

/// Sphere dimensions (ascending) of the wedge certified by `cert`.
///
/// Errors unless the certificate verifies, ends at a single vertex, and any
/// top-level pops form one final block followed only by collapses.
pub fn wedge_summary(cert: &Certificate) -> Result<Vec<usize>> {
    let v = verify_certificate(cert);
    if let Some((i, m)) = v.failure {
        return Err(Error::IncompleteReduction(format!("certificate fails at operation {i}: {m}")));
    }
    if !(cert.terminal.len() == 1 && cert.terminal[0].len() == 1) {
        return Err(Error::IncompleteReduction(format!("terminal state has {} maximal simplices", cert.terminal.len())));
    }
    let mut dims = Vec::new();
    // 0: before any pop, 1: inside the pop block, 2: collapsing after it.
    let mut phase = 0;
    for op in &cert.ops {
        match op {
            Op::Collapse { .. } if phase == 1 => phase = 2,
            Op::Collapse { .. } => {}
            Op::Pop(s) if phase < 2 => {
                phase = 1;
                dims.push(s.dim());
            }
            Op::Pop(_) => return Err(Error::IncompleteReduction("pop after post-pop collapses".into())),
            Op::Cone { .. } if phase > 0 => return Err(Error::IncompleteReduction("cone after a top-level pop".into())),
            Op::Cone { witness, .. } => dims.extend(witness.iter().map(Simplex::dim)),
        }
    }
    dims.sort_unstable();
    Ok(dims)
}

/// Writes `cert` to a string; shorthand for the `Display` form.
pub fn write_certificate(cert: &Certificate) -> String {
    let mut s = String::new();
    write!(s, "{cert}").unwrap();
    s
}
