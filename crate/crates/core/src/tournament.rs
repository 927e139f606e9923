//! Tournament families: Paley and doubled skew-Hadamard constructions, and
//! isomorphism-class enumeration for small orders.

use std::collections::HashMap;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::simplex::VertexId;

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// The Paley tournament on `Z_q`: `i -> j` iff `j - i` is a nonzero square.
/// Needs `q` prime with `q ≡ 3 (mod 4)`.
pub fn paley(q: usize) -> Result<Digraph> {
    if !is_prime(q) || q % 4 != 3 {
        return Err(Error::Unsupported(format!("Paley tournament needs a prime q ≡ 3 mod 4, got {q}")));
    }
    let mut square = vec![false; q];
    for x in 1..q {
        square[x * x % q] = true;
    }
    let mut edges = Vec::new();
    for i in 0..q {
        for j in 0..q {
            if i != j && square[(j + q - i) % q] {
                edges.push((i as VertexId, j as VertexId));
            }
        }
    }
    Digraph::from_edges(q, &edges)
}

/// The `±1` skew-Hadamard matrix `I + S` where `S` is the signed adjacency
/// matrix of `t` bordered by a row of `+1` and a column of `-1`.
fn skew_hadamard_of(t: &Digraph) -> Vec<Vec<i8>> {
    let n = t.vertex_count() + 1;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i, j) {
                    _ if i == j => 1,
                    (0, _) => 1,
                    (_, 0) => -1,
                    _ if t.has_edge(i as VertexId - 1, j as VertexId - 1) => 1,
                    _ => -1,
                })
                .collect()
        })
        .collect()
}

/// Reads a tournament from a skew-Hadamard matrix: flip signs so the first
/// row is all `+1`, then `i -> j` on the remaining indices iff the entry is `+1`.
fn tournament_of_skew_hadamard(h: &[Vec<i8>]) -> Result<Digraph> {
    let n = h.len();
    let sign: Vec<i8> = (0..n).map(|j| if j == 0 { 1 } else { h[0][j] }).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        for j in 1..n {
            if i != j && sign[i] * h[i][j] * sign[j] == 1 {
                edges.push(((i - 1) as VertexId, (j - 1) as VertexId));
            }
        }
    }
    let g = Digraph::from_edges(n - 1, &edges)?;
    g.check_tournament()?;
    Ok(g)
}

/// A doubly regular tournament on `2q + 1` vertices, from the doubled
/// skew-Hadamard matrix `[[H, H], [-Hᵀ, Hᵀ]]` of the Paley tournament on `q`.
pub fn doubled_paley(q: usize) -> Result<Digraph> {
    let h = skew_hadamard_of(&paley(q)?);
    let n = h.len();
    let mut k = vec![vec![0i8; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            k[i][j] = h[i][j];
            k[i][j + n] = h[i][j];
            k[i + n][j] = -h[j][i];
            k[i + n][j + n] = h[j][i];
        }
    }
    tournament_of_skew_hadamard(&k)
}

/// The doubly regular tournament used for order `n`: Paley when `n` is a
/// prime, otherwise the doubled construction when `n = 2q + 1`.
pub fn doubly_regular(n: usize) -> Result<Digraph> {
    if is_prime(n) && n % 4 == 3 {
        paley(n)
    } else if n % 2 == 1 && is_prime((n - 1) / 2) && ((n - 1) / 2) % 4 == 3 {
        doubled_paley((n - 1) / 2)
    } else {
        Err(Error::Unsupported(format!("no doubly regular construction for n = {n}")))
    }
}

pub fn is_regular(t: &Digraph) -> bool {
    let n = t.vertex_count();
    n % 2 == 1 && (0..n as VertexId).all(|v| t.out_degree(v) == (n - 1) / 2)
}

/// Regular, and every two vertices have the same number of common out-neighbours.
pub fn is_doubly_regular(t: &Digraph) -> bool {
    let n = t.vertex_count();
    if !t.is_tournament() || !is_regular(t) || n % 4 != 3 {
        return false;
    }
    let want = (n - 3) / 4;
    (0..n as VertexId).all(|u| {
        (u + 1..n as VertexId).all(|v| t.out_neighbours(u).filter(|&w| t.has_edge(v, w)).count() == want)
    })
}

/// Per-vertex isomorphism invariant: own score, then the sorted scores of
/// the out- and in-neighbourhood subtournaments.
fn vertex_invariant(t: &Digraph, v: VertexId) -> (usize, Vec<usize>, Vec<usize>) {
    let local = |nbrs: Vec<VertexId>| {
        let mut s: Vec<usize> = nbrs
            .iter()
            .map(|&a| nbrs.iter().filter(|&&b| t.has_edge(a, b)).count())
            .collect();
        s.sort_unstable();
        s
    };
    (
        t.out_degree(v),
        local(t.out_neighbours(v).collect()),
        local(t.in_neighbours(v).collect()),
    )
}

type Invariants = Vec<(usize, Vec<usize>, Vec<usize>)>;

fn invariants(t: &Digraph) -> Invariants {
    (0..t.vertex_count() as VertexId).map(|v| vertex_invariant(t, v)).collect()
}

fn extend_iso(a: &Digraph, b: &Digraph, ia: &Invariants, ib: &Invariants, map: &mut Vec<VertexId>, used: &mut [bool]) -> bool {
    let k = map.len();
    if k == a.vertex_count() {
        return true;
    }
    for c in 0..b.vertex_count() {
        if used[c] || ia[k] != ib[c] {
            continue;
        }
        let c = c as VertexId;
        let consistent = map
            .iter()
            .enumerate()
            .all(|(i, &m)| a.has_edge(i as VertexId, k as VertexId) == b.has_edge(m, c));
        if consistent {
            map.push(c);
            used[c as usize] = true;
            if extend_iso(a, b, ia, ib, map, used) {
                return true;
            }
            used[c as usize] = false;
            map.pop();
        }
    }
    false
}

fn isomorphic_with(a: &Digraph, b: &Digraph, ia: &Invariants, ib: &Invariants) -> bool {
    if a.vertex_count() != b.vertex_count() {
        return false;
    }
    let (mut sa, mut sb) = (ia.clone(), ib.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut used = vec![false; b.vertex_count()];
    extend_iso(a, b, ia, ib, &mut Vec::new(), &mut used)
}

pub fn are_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    isomorphic_with(a, b, &invariants(a), &invariants(b))
}

/// Keeps one representative per isomorphism class, in first-seen order.
#[derive(Default)]
struct Classes {
    reps: Vec<Digraph>,
    buckets: HashMap<Invariants, Vec<(usize, Invariants)>>,
}

impl Classes {
    fn offer(&mut self, t: Digraph) {
        let inv = invariants(&t);
        let mut key = inv.clone();
        key.sort();
        let bucket = self.buckets.entry(key).or_default();
        if bucket.iter().any(|(i, ir)| isomorphic_with(&t, &self.reps[*i], &inv, ir)) {
            return;
        }
        bucket.push((self.reps.len(), inv));
        self.reps.push(t);
    }
}

/// One tournament per isomorphism class on `n` vertices, built by adding a
/// vertex to each class on `n - 1` vertices in every possible way.
pub fn all_tournaments(n: usize) -> Vec<Digraph> {
    let mut level = vec![Digraph::empty(n.min(1))];
    for k in 2..=n {
        let mut classes = Classes::default();
        for t in &level {
            for mask in 0u32..(1 << (k - 1)) {
                let mut edges = t.edges();
                for v in 0..k - 1 {
                    let new = (k - 1) as VertexId;
                    edges.push(if mask & (1 << v) != 0 { (v as VertexId, new) } else { (new, v as VertexId) });
                }
                classes.offer(Digraph::from_edges(k, &edges).expect("valid tournament"));
            }
        }
        level = classes.reps;
    }
    level
}

/// One regular tournament per isomorphism class on odd `n`. Vertex 0 is
/// sent to `1..=(n-1)/2`, which loses no class, and the remaining pairs are
/// filled in by backtracking under the score constraint.
pub fn regular_tournaments(n: usize) -> Result<Vec<Digraph>> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::Unsupported(format!("regular tournaments need odd n ≥ 3, got {n}")));
    }
    if n > 11 {
        return Err(Error::Unsupported(format!("enumeration for n = {n} is too large")));
    }
    let h = (n - 1) / 2;
    let mut pairs = Vec::new();
    for i in 1..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let mut out = vec![0usize; n];
    let mut remaining = vec![n - 1; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    out[0] = h;
    remaining[0] = 0;
    for v in 1..n {
        remaining[v] -= 1;
        if v <= h {
            edges.push((0, v));
        } else {
            edges.push((v, 0));
            out[v] += 1;
        }
    }
    let mut classes = Classes::default();
    struct Search<'a> {
        n: usize,
        h: usize,
        pairs: &'a [(usize, usize)],
        out: Vec<usize>,
        remaining: Vec<usize>,
        edges: Vec<(usize, usize)>,
    }
    fn go(s: &mut Search, k: usize, classes: &mut Classes) {
        if k == s.pairs.len() {
            let e: Vec<(VertexId, VertexId)> = s.edges.iter().map(|&(a, b)| (a as VertexId, b as VertexId)).collect();
            classes.offer(Digraph::from_edges(s.n, &e).expect("valid tournament"));
            return;
        }
        let (i, j) = s.pairs[k];
        for (a, b) in [(i, j), (j, i)] {
            // a beats b; a needs room for one more win, b must still reach h.
            if s.out[a] < s.h && s.out[b] + s.remaining[b] > s.h {
                s.out[a] += 1;
                s.remaining[a] -= 1;
                s.remaining[b] -= 1;
                s.edges.push((a, b));
                go(s, k + 1, classes);
                s.edges.pop();
                s.remaining[b] += 1;
                s.remaining[a] += 1;
                s.out[a] -= 1;
            }
        }
    }
    let mut s = Search { n, h, pairs: &pairs, out, remaining, edges };
    go(&mut s, 0, &mut classes);
    Ok(classes.reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paley_family() {
        for q in [3, 7, 11] {
            let t = paley(q).unwrap();
            assert!(is_doubly_regular(&t), "q = {q}");
        }
        assert!(paley(5).is_err());
        let t = paley(3).unwrap();
        assert!(t.has_edge(0, 1) && t.has_edge(1, 2) && t.has_edge(2, 0));
    }

    #[test]
    fn doubled_construction_is_doubly_regular() {
        let t = doubly_regular(15).unwrap();
        assert_eq!(t.vertex_count(), 15);
        assert!(is_doubly_regular(&t));
        assert!(doubly_regular(9).is_err());
    }

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| all_tournaments(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 12, 56]);
        let reg: Vec<usize> = [3, 5, 7].iter().map(|&n| regular_tournaments(n).unwrap().len()).collect();
        assert_eq!(reg, vec![1, 1, 3]);
    }

    #[test]
    fn isomorphism_respects_relabeling() {
        let t = paley(7).unwrap();
        let perm: Vec<VertexId> = vec![3, 6, 0, 5, 1, 4, 2];
        assert!(are_isomorphic(&t, &t.permuted(&perm)));
        assert!(!are_isomorphic(&t, &t.reversed().permuted(&perm)) || are_isomorphic(&t, &t.reversed()));
    }
}
