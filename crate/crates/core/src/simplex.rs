//! Ordered simplices and the short-lex order.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Dense, 0-based vertex identifier.
pub type VertexId = u32;

pub(crate) type VertexBuf = SmallVec<[VertexId; 10]>;

/// An ordered tuple of pairwise distinct vertices.
///
/// Unlike an ordinary simplex, `(0, 1)` and `(1, 0)` are different simplices.
/// Equality is tuple equality and the total order is short-lex: shorter tuples
/// come first, tuples of equal length compare lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Simplex(VertexBuf);

impl Simplex {
    /// Builds a simplex, rejecting empty tuples and repeated vertices.
    pub fn new(vertices: &[VertexId]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex("empty vertex tuple".into()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidSimplex(format!(
                    "vertex {v} repeated in {vertices:?}"
                )));
            }
        }
        Ok(Simplex(VertexBuf::from_slice(vertices)))
    }

    /// Builds a simplex without checking distinctness.
    pub(crate) fn from_buf(buf: VertexBuf) -> Self {
        debug_assert!(!buf.is_empty());
        Simplex(buf)
    }

    pub(crate) fn from_slice_unchecked(vertices: &[VertexId]) -> Self {
        Simplex::from_buf(VertexBuf::from_slice(vertices))
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(smallvec::smallvec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn max_vertex(&self) -> VertexId {
        *self.0.iter().max().expect("simplex is nonempty")
    }

    /// Codimension-1 faces in order of the deleted position `0..=dim`.
    ///
    /// A vertex has no faces; the empty list is returned rather than an error.
    pub fn faces(&self) -> Vec<Simplex> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len()).map(|i| self.delete(i)).collect()
    }

    /// The face obtained by deleting the vertex at position `i`.
    pub fn delete(&self, i: usize) -> Simplex {
        let mut buf = self.0.clone();
        buf.remove(i);
        Simplex(buf)
    }

    /// The face spanned by the positions set in `mask` (bit `i` = position `i`).
    pub(crate) fn sub_by_mask(&self, mask: u32) -> Simplex {
        let buf: VertexBuf = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        Simplex(buf)
    }

    /// All nonempty faces, including `self`, as position masks.
    pub(crate) fn face_masks(&self) -> impl Iterator<Item = u32> {
        let full = (1u32 << self.0.len()) - 1;
        1..=full
    }

    /// Every nonempty proper face (ordered subtuple other than `self`).
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let full = (1u32 << self.0.len()) - 1;
        (1..full).map(|m| self.sub_by_mask(m)).collect()
    }

    /// The simplex with `v` appended as its last vertex.
    pub fn join_vertex(&self, v: VertexId) -> Simplex {
        let mut buf = self.0.clone();
        buf.push(v);
        Simplex(buf)
    }

    /// True iff `self` is an ordered subtuple of `other` (not necessarily proper).
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.by_ref().any(|w| w == v))
    }
}

/// Short-lex comparison of two simplices.
pub fn short_lex_compare(a: &Simplex, b: &Simplex) -> Ordering {
    a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0))
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        short_lex_compare(self, other)
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Space-separated vertex ids, the form used by every text format in this crate.
impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
