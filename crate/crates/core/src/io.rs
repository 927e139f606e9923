//! Readers and writers for connectome CSV files, edge lists, tournament
//! bit-strings, simplex lists and tournaplexes.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::complex::Complex;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::flag::{TournamentSimplex, Tournaplex};
use crate::simplex::{Simplex, VertexId};

/// Connection codes of the connectome spreadsheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConnectionType {
    /// First neuron sends a chemical synapse.
    S,
    Sp,
    /// First neuron receives a chemical synapse.
    R,
    Rp,
    /// Electrical junction.
    EJ,
    /// Neuromuscular junction.
    NMJ,
}

impl FromStr for ConnectionType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.trim() {
            "S" => ConnectionType::S,
            "Sp" => ConnectionType::Sp,
            "R" => ConnectionType::R,
            "Rp" => ConnectionType::Rp,
            "EJ" => ConnectionType::EJ,
            "NMJ" => ConnectionType::NMJ,
            other => return Err(format!("unknown connection type {other:?}")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectomeRecord {
    pub neuron1: String,
    pub neuron2: String,
    pub kind: ConnectionType,
    pub nbr: u32,
}

/// Which half of the chemical synapse records to read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `S` and `Sp` rows, first neuron to second.
    Send,
    /// `R` and `Rp` rows, second neuron to first.
    Receive,
}

/// Parses connectome CSV text with columns `neuron1,neuron2,type,nbr`.
/// A header row is recognised by its unparseable type column and skipped.
pub fn parse_connectome(text: &str) -> Result<Vec<ConnectomeRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 1;
        let row = row.map_err(|e| Error::parse(line, e.to_string()))?;
        if row.iter().all(str::is_empty) {
            continue;
        }
        if row.len() != 4 {
            return Err(Error::parse(line, format!("expected 4 columns, found {}", row.len())));
        }
        let kind = match row[2].parse::<ConnectionType>() {
            Ok(k) => k,
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Error::parse(line, e)),
        };
        let nbr = row[3]
            .parse()
            .map_err(|_| Error::parse(line, format!("bad synapse count {:?}", &row[3])))?;
        if row[0].is_empty() || row[1].is_empty() {
            return Err(Error::parse(line, "empty neuron name"));
        }
        out.push(ConnectomeRecord {
            neuron1: row[0].to_string(),
            neuron2: row[1].to_string(),
            kind,
            nbr,
        });
    }
    if out.is_empty() {
        return Err(Error::parse(0, "no records"));
    }
    Ok(out)
}

pub fn read_connectome(path: impl AsRef<Path>) -> Result<Vec<ConnectomeRecord>> {
    parse_connectome(&fs::read_to_string(path)?)
}

/// The synapse graph from one side of the records. Names are matched
/// case-insensitively and stored upper-case. Vertices are numbered by first
/// occurrence in the sequence of (source, target) pairs as they appear.
pub fn connectome_graph(records: &[ConnectomeRecord], side: Side) -> Result<Digraph> {
    let pairs: Vec<(String, String)> = records
        .iter()
        .filter_map(|r| match (side, r.kind) {
            (Side::Send, ConnectionType::S | ConnectionType::Sp) => Some((&r.neuron1, &r.neuron2)),
            (Side::Receive, ConnectionType::R | ConnectionType::Rp) => Some((&r.neuron2, &r.neuron1)),
            _ => None,
        })
        .map(|(a, b)| (a.to_uppercase(), b.to_uppercase()))
        .collect();
    if pairs.is_empty() {
        return Err(Error::InvalidGraph("no chemical synapse records".into()));
    }
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut names = Vec::new();
    let mut id = |name: &String, names: &mut Vec<String>| {
        *ids.entry(name.clone()).or_insert_with(|| {
            names.push(name.clone());
            (names.len() - 1) as VertexId
        })
    };
    let mut edges = BTreeSet::new();
    let mut ordered = Vec::new();
    for (a, b) in &pairs {
        let (u, v) = (id(a, &mut names), id(b, &mut names));
        if u == v {
            return Err(Error::InvalidGraph(format!("self-synapse on {a}")));
        }
        if edges.insert((u, v)) {
            ordered.push((u, v));
        }
    }
    Ok(Digraph::from_edges(names.len(), &ordered)?.with_names(names))
}

pub fn load_connectome(path: impl AsRef<Path>, side: Side) -> Result<Digraph> {
    connectome_graph(&read_connectome(path)?, side)
}

/// The graph used for the connectome reduction: send-side numbering, all edges reversed.
pub fn preprocess_celegans(records: &[ConnectomeRecord]) -> Result<Digraph> {
    Ok(connectome_graph(records, Side::Send)?.reversed())
}

/// Edges as name pairs, for comparing graphs numbered differently.
pub fn named_edges(g: &Digraph) -> BTreeSet<(String, String)> {
    let name = |v: VertexId| match g.names() {
        Some(n) => n[v as usize].clone(),
        None => v.to_string(),
    };
    g.edges().into_iter().map(|(u, v)| (name(u), name(v))).collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_ids(line: usize, text: &str) -> Result<Vec<VertexId>> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("bad vertex id {t:?}"))))
        .collect()
}

/// Edge list: one `u v` per line, `#` starts a comment. An optional
/// `vertices N` line fixes the vertex count; otherwise it is one more than the largest id.
pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (line, l) in content_lines(text) {
        if let Some(n) = l.strip_prefix("vertices") {
            let n = n.trim().parse().map_err(|_| Error::parse(line, "bad vertex count"))?;
            declared = Some(n);
            continue;
        }
        match parse_ids(line, l)?[..] {
            [u, v] => edges.push((line, u, v)),
            _ => return Err(Error::parse(line, "expected two vertex ids")),
        }
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|e| e.1.max(e.2) as usize + 1).max().unwrap_or(0));
    let mut g = Digraph::empty(n);
    for (line, u, v) in edges {
        match g.try_add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => return Err(Error::parse(line, format!("duplicate edge {u} {v}"))),
            Err(e) => return Err(Error::parse(line, e.to_string())),
        }
    }
    Ok(g)
}

pub fn write_edge_list(g: &Digraph) -> String {
    let mut s = format!("vertices {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

/// One tournament from `n(n-1)/2` bits over the pairs `i<j` in
/// lexicographic order; `1` means `i -> j`.
pub fn parse_tournament(bits: &str, n: usize) -> std::result::Result<Digraph, String> {
    let bits = bits.trim().as_bytes();
    if bits.len() != n * n.saturating_sub(1) / 2 {
        return Err(format!("expected {} bits, found {}", n * n.saturating_sub(1) / 2, bits.len()));
    }
    let mut g = Digraph::empty(n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (u, v) = match bits[k] {
                b'1' => (i, j),
                b'0' => (j, i),
                c => return Err(format!("bad character {:?}", c as char)),
            };
            g.try_add_edge(u as VertexId, v as VertexId).map_err(|e| e.to_string())?;
            k += 1;
        }
    }
    Ok(g)
}

pub fn parse_tournaments(text: &str, n: usize) -> Result<Vec<Digraph>> {
    content_lines(text)
        .map(|(line, l)| parse_tournament(l, n).map_err(|m| Error::parse(line, m)))
        .collect()
}

pub fn load_tournaments(path: impl AsRef<Path>, n: usize) -> Result<Vec<Digraph>> {
    parse_tournaments(&fs::read_to_string(path)?, n)
}

/// The bit-string of a tournament; inverse of [`parse_tournament`].
pub fn tournament_bits(g: &Digraph) -> Result<String> {
    g.check_tournament()?;
    let n = g.vertex_count() as VertexId;
    let mut s = String::new();
    for i in 0..n {
        for j in i + 1..n {
            s.push(if g.has_edge(i, j) { '1' } else { '0' });
        }
    }
    Ok(s)
}

/// Simplex list: one simplex per line as space-separated vertex ids.
pub fn parse_complex(text: &str) -> Result<Complex> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        let vs = parse_ids(line, l)?;
        out.push(Simplex::new(&vs).map_err(|e| Error::parse(line, e.to_string()))?);
    }
    Ok(Complex::from_simplices(out))
}

pub fn write_complex(c: &Complex) -> String {
    let mut s = String::new();
    for x in c.iter() {
        writeln!(s, "{x}").unwrap();
    }
    s
}

/// Tournaments of any size, one per line; `n` is recovered from the line length.
pub fn parse_tournaments_auto(text: &str) -> Result<Vec<Digraph>> {
    content_lines(text)
        .map(|(line, l)| {
            let n = (1..64usize)
                .find(|n| n * (n - 1) / 2 == l.len())
                .ok_or_else(|| Error::parse(line, format!("{} bits is not n(n-1)/2 for any n", l.len())))?;
            parse_tournament(l, n).map_err(|m| Error::parse(line, m))
        })
        .collect()
}

/// Tournaplex list: `v0 v1 ... : bits` per line, with the bits over
/// position pairs `i<j` as in [`parse_tournament`].
pub fn write_tournaplex(t: &Tournaplex) -> String {
    let mut s = String::new();
    for x in t.iter() {
        let vs: Vec<String> = x.vertices().iter().map(|v| v.to_string()).collect();
        let k = x.len();
        let bits: String = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| if x.arrow(i, j) { '1' } else { '0' })
            .collect();
        writeln!(s, "{} : {}", vs.join(" "), bits).unwrap();
    }
    s
}

pub fn parse_tournaplex(text: &str) -> Result<Tournaplex> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        let (vs, bits) = l.split_once(':').ok_or_else(|| Error::parse(line, "expected `vertices : bits`"))?;
        let vs = parse_ids(line, vs)?;
        let bits = bits.trim().as_bytes();
        let k = vs.len();
        if bits.len() != k * k.saturating_sub(1) / 2 || bits.iter().any(|b| !matches!(b, b'0' | b'1')) {
            return Err(Error::parse(line, "orientation bits do not match the vertex count"));
        }
        let pair = |i: usize, j: usize| i * (2 * k - i - 1) / 2 + (j - i - 1);
        let t = TournamentSimplex::from_fn(&vs, |i, j| bits[pair(i, j)] == b'1')
            .map_err(|e| Error::parse(line, e.to_string()))?;
        out.push(t);
    }
    Ok(Tournaplex::from_simplices(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connectome_parsing() {
        let text = "Neuron 1,Neuron 2,Type,Nbr\nADAL,ADAR,S,2\nADAR,adal,R,2\nADAL,AIBR,Sp,1\nAIBR,ADAL,Rp,1\nADAL,AVFL,EJ,1\n";
        let recs = parse_connectome(text).unwrap();
        assert_eq!(recs.len(), 5);
        let s = connectome_graph(&recs, Side::Send).unwrap();
        let r = connectome_graph(&recs, Side::Receive).unwrap();
        assert_eq!(s.names().unwrap(), &["ADAL", "ADAR", "AIBR"]);
        assert_eq!(named_edges(&s), named_edges(&r));
        let p = preprocess_celegans(&recs).unwrap();
        assert!(p.has_edge(1, 0) && !p.has_edge(0, 1));
    }

    #[test]
    fn connectome_errors() {
        assert!(matches!(parse_connectome(""), Err(Error::Parse { .. })));
        assert!(parse_connectome("Neuron 1,Neuron 2,Type,Nbr\n").unwrap_err().to_string().contains("no records"));
        let e = parse_connectome("A,B,S,1\nA,C,XX,1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(matches!(parse_connectome("A,B,S\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn edge_lists() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(parse_edge_list("0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("# c\n0 1\n0 1\n"), Err(Error::Parse { line: 3, .. })));
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        let iso = parse_edge_list("vertices 4\n0 1\n").unwrap();
        assert_eq!(iso.vertex_count(), 4);
    }

    #[test]
    fn tournament_strings() {
        let t = parse_tournament("111", 3).unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        let c = parse_tournament("101", 3).unwrap();
        assert!(c.has_edge(0, 1) && c.has_edge(1, 2) && c.has_edge(2, 0));
        assert_eq!(tournament_bits(&c).unwrap(), "101");
        assert!(matches!(parse_tournaments("111\n11\n", 3), Err(Error::Parse { line: 2, .. })));
        assert!(parse_tournament("1x1", 3).is_err());
    }

    #[test]
    fn complex_round_trip() {
        let c = Complex::from_tuples(&[&[0, 1, 2], &[3], &[2, 4]]).unwrap();
        assert_eq!(parse_complex(&write_complex(&c)).unwrap(), c);
        assert!(parse_complex("0 0\n").is_err());
    }

    #[test]
    fn tournaplex_round_trip() {
        let g = Digraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 1), (1, 3), (2, 3)]).unwrap();
        let t = crate::flag::flag_tournaplex(&g).unwrap();
        let text = write_tournaplex(&t);
        assert!(text.contains("0 1 2 : 101\n"));
        let back = parse_tournaplex(&text).unwrap();
        assert_eq!(write_tournaplex(&back), text);
        assert!(parse_tournaplex("0 1 : 11\n").is_err());
    }

    #[test]
    fn tournament_sizes_are_inferred() {
        let ts = parse_tournaments_auto("1\n101\n# comment\n111111\n").unwrap();
        assert_eq!(ts.iter().map(Digraph::vertex_count).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert!(matches!(parse_tournaments_auto("1\n11\n"), Err(Error::Parse { line: 2, .. })));
    }
}
