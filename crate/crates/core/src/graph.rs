//! Simple undirected graphs, matchings and alternating paths, plus the text
//! formats used to move them in and out of the engine.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: i64 },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: i64, v: i64 },
    #[error("header declares {declared} edges but {found} were read")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("empty input")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// `c` comments, `p edge n m`, then `e u v` with 1-based ids.
    Dimacs,
    /// `n m`, then `u v` with 0-based ids.
    EdgeList,
}

/// A simple undirected graph on vertices `0..n` with stable edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph from an edge list. Errors carry the 1-based position of
    /// the offending edge in `edges` as their line.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut builder = GraphBuilder::new(n);
        for (k, &(u, v)) in edges.iter().enumerate() {
            builder.add(k + 1, u as i64, v as i64)?;
        }
        Ok(builder.finish())
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adjacency[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, e)| e)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_between(u, v).is_some()
    }
}

struct GraphBuilder {
    n: usize,
    seen: HashSet<(VertexId, VertexId)>,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl GraphBuilder {
    fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            seen: HashSet::new(),
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    /// `u` and `v` are already shifted to 0-based ids; `raw` values are
    /// only used for error messages.
    fn add_raw(&mut self, line: usize, u: i64, v: i64, raw: (i64, i64)) -> Result<(), GraphError> {
        for (x, r) in [(u, raw.0), (v, raw.1)] {
            if x < 0 || x as usize >= self.n {
                return Err(GraphError::VertexOutOfRange { line, vertex: r, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: raw.0 });
        }
        let (a, b) = (u as usize, v as usize);
        let key = (a.min(b), a.max(b));
        if !self.seen.insert(key) {
            return Err(GraphError::DuplicateEdge { line, u: raw.0, v: raw.1 });
        }
        let id = self.edges.len();
        self.edges.push((a, b));
        self.adjacency[a].push((b, id));
        self.adjacency[b].push((a, id));
        Ok(())
    }

    fn add(&mut self, line: usize, u: i64, v: i64) -> Result<(), GraphError> {
        self.add_raw(line, u, v, (u, v))
    }

    fn finish(self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges,
            adjacency: self.adjacency,
        }
    }
}

fn parse_int(line: usize, tok: Option<&str>, what: &str) -> Result<i64, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Malformed {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse::<i64>().map_err(|_| GraphError::Malformed {
        line,
        msg: format!("expected integer for {what}, found `{tok}`"),
    })
}

fn parse_count(line: usize, tok: Option<&str>, what: &str) -> Result<usize, GraphError> {
    let x = parse_int(line, tok, what)?;
    usize::try_from(x).map_err(|_| GraphError::Malformed {
        line,
        msg: format!("{what} must be non-negative"),
    })
}

fn expect_end<'a>(line: usize, mut toks: impl Iterator<Item = &'a str>) -> Result<(), GraphError> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(GraphError::Malformed {
            line,
            msg: format!("unexpected trailing token `{t}`"),
        }),
    }
}

pub fn parse_graph_str(input: &str, format: InputFormat) -> Result<Graph, GraphError> {
    match format {
        InputFormat::Dimacs => parse_dimacs(input),
        InputFormat::EdgeList => parse_edge_list(input),
    }
}

pub fn parse_graph(mut input: impl Read, format: InputFormat) -> Result<Graph, GraphError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    parse_graph_str(&text, format)
}

fn parse_dimacs(input: &str) -> Result<Graph, GraphError> {
    let mut builder: Option<(GraphBuilder, usize)> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if builder.is_some() {
                    return Err(GraphError::Malformed { line, msg: "second problem line".into() });
                }
                match toks.next() {
                    Some("edge") => {}
                    other => {
                        return Err(GraphError::Malformed {
                            line,
                            msg: format!("expected `p edge`, found `p {}`", other.unwrap_or("")),
                        })
                    }
                }
                let n = parse_count(line, toks.next(), "vertex count")?;
                let m = parse_count(line, toks.next(), "edge count")?;
                expect_end(line, toks)?;
                builder = Some((GraphBuilder::new(n), m));
            }
            "e" => {
                let Some((b, _)) = builder.as_mut() else {
                    return Err(GraphError::Malformed { line, msg: "edge before problem line".into() });
                };
                let u = parse_int(line, toks.next(), "edge endpoint")?;
                let v = parse_int(line, toks.next(), "edge endpoint")?;
                expect_end(line, toks)?;
                b.add_raw(line, u - 1, v - 1, (u, v))?;
            }
            other => {
                return Err(GraphError::Malformed {
                    line,
                    msg: format!("unknown line tag `{other}`"),
                })
            }
        }
    }
    let (b, m) = builder.ok_or(GraphError::Empty)?;
    if b.edges.len() != m {
        return Err(GraphError::EdgeCountMismatch { declared: m, found: b.edges.len() });
    }
    Ok(b.finish())
}

fn parse_edge_list(input: &str) -> Result<Graph, GraphError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(GraphError::Empty)?;
    let mut toks = header.split_whitespace();
    let n = parse_count(hline, toks.next(), "vertex count")?;
    let m = parse_count(hline, toks.next(), "edge count")?;
    expect_end(hline, toks)?;
    let mut b = GraphBuilder::new(n);
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let u = parse_int(line, toks.next(), "edge endpoint")?;
        let v = parse_int(line, toks.next(), "edge endpoint")?;
        expect_end(line, toks)?;
        b.add(line, u, v)?;
    }
    if b.edges.len() != m {
        return Err(GraphError::EdgeCountMismatch { declared: m, found: b.edges.len() });
    }
    Ok(b.finish())
}

/// Edge-list text: `n m`, then one `u v` line per edge in edge-id order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// A matching stored as a partner map.
///
/// The constructors that take raw partner data do not validate; run
/// [`validate_matching`] before trusting one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<Option<VertexId>>,
    size: usize,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { partner: vec![None; n], size: 0 }
    }

    /// Builds a matching from pairs, checking that each pair is an edge and
    /// no vertex is used twice.
    pub fn from_pairs(g: &Graph, pairs: &[(VertexId, VertexId)]) -> Result<Self, MatchingViolation> {
        let n = g.vertex_count();
        let mut m = Matching::empty(n);
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(MatchingViolation::OutOfRange { vertex: u.max(v), n });
            }
            if !g.has_edge(u, v) {
                return Err(MatchingViolation::NotAnEdge { u, v });
            }
            for x in [u, v] {
                if m.partner[x].is_some() {
                    return Err(MatchingViolation::Asymmetric { u: x, v: m.partner[x].unwrap() });
                }
            }
            m.partner[u] = Some(v);
            m.partner[v] = Some(u);
            m.size += 1;
        }
        Ok(m)
    }

    /// Raw constructor; `size` is taken as given.
    pub fn from_raw(partner: Vec<Option<VertexId>>, size: usize) -> Self {
        Matching { partner, size }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn vertex_count(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        self.partner[v]
    }

    pub fn partners(&self) -> &[Option<VertexId>] {
        &self.partner
    }

    pub fn is_free(&self, v: VertexId) -> bool {
        self.partner[v].is_none()
    }

    pub fn is_matched_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.partner[u] == Some(v)
    }

    /// Matched pairs with `u < v`, sorted.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(u, p)| p.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    pub(crate) fn set_pair(&mut self, u: VertexId, v: VertexId) {
        self.partner[u] = Some(v);
        self.partner[v] = Some(u);
    }

    /// Flips every edge of an augmenting path. The caller guarantees the
    /// path is augmenting.
    pub fn augment(&mut self, path: &AlternatingPath) {
        let vs = path.vertices();
        for pair in vs.chunks(2) {
            self.set_pair(pair[0], pair[1]);
        }
        self.size += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingViolation {
    #[error("matching covers {found} vertices but graph has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: VertexId, n: usize },
    #[error("vertex {v} matched to itself")]
    SelfMatched { v: VertexId },
    #[error("partner({u}) = {v} but partner({v}) disagrees")]
    Asymmetric { u: VertexId, v: VertexId },
    #[error("matched pair ({u}, {v}) is not an edge")]
    NotAnEdge { u: VertexId, v: VertexId },
    #[error("recorded size {recorded} but {actual} pairs are matched")]
    SizeMismatch { recorded: usize, actual: usize },
}

/// Checks every matching invariant against `g`, reporting the first one
/// that fails together with witness vertices.
pub fn validate_matching(g: &Graph, m: &Matching) -> Result<(), MatchingViolation> {
    let n = g.vertex_count();
    if m.partner.len() != n {
        return Err(MatchingViolation::LengthMismatch { expected: n, found: m.partner.len() });
    }
    let mut covered = 0;
    for (u, p) in m.partner.iter().enumerate() {
        let Some(v) = *p else { continue };
        if v >= n {
            return Err(MatchingViolation::OutOfRange { vertex: v, n });
        }
        if v == u {
            return Err(MatchingViolation::SelfMatched { v });
        }
        if m.partner[v] != Some(u) {
            return Err(MatchingViolation::Asymmetric { u, v });
        }
        if !g.has_edge(u, v) {
            return Err(MatchingViolation::NotAnEdge { u: u.min(v), v: u.max(v) });
        }
        covered += 1;
    }
    if covered != 2 * m.size {
        return Err(MatchingViolation::SizeMismatch { recorded: m.size, actual: covered / 2 });
    }
    Ok(())
}

/// Matching text: `<size>`, then `u v` per matched edge with `u < v`, sorted.
pub fn format_matching(m: &Matching) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", m.len());
    for (u, v) in m.pairs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Reads the format produced by [`format_matching`] and validates it.
pub fn parse_matching(input: &str, g: &Graph) -> Result<Matching, MatchingParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(MatchingParseError::Empty)?;
    let size: usize = header.trim().parse().map_err(|_| MatchingParseError::Malformed {
        line: hline,
        msg: format!("expected matching size, found `{}`", header.trim()),
    })?;
    let mut pairs = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = toks.iter().map(|t| t.parse().ok()).collect();
        match parsed.as_deref() {
            Some([u, v]) => pairs.push((*u, *v)),
            _ => {
                return Err(MatchingParseError::Malformed {
                    line,
                    msg: format!("expected `u v`, found `{}`", l.trim()),
                })
            }
        }
    }
    if pairs.len() != size {
        return Err(MatchingParseError::Malformed {
            line: hline,
            msg: format!("size {size} but {} pairs listed", pairs.len()),
        });
    }
    Ok(Matching::from_pairs(g, &pairs)?)
}

#[derive(Debug, Error)]
pub enum MatchingParseError {
    #[error("empty matching input")]
    Empty,
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] MatchingViolation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("vertices {u} and {v} are not adjacent")]
    NotAdjacent { u: VertexId, v: VertexId },
    #[error("edges at position {at} do not alternate")]
    NotAlternating { at: usize },
    #[error("vertex {v} repeats")]
    Repeated { v: VertexId },
}

/// A simple path whose edges alternate between matched and unmatched with
/// respect to the matching it was built against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingPath {
    vertices: Vec<VertexId>,
    matched: Vec<bool>,
}

impl AlternatingPath {
    pub fn new(g: &Graph, m: &Matching, vertices: Vec<VertexId>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = HashSet::with_capacity(vertices.len());
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(PathError::Repeated { v });
            }
        }
        let mut matched = Vec::with_capacity(vertices.len().saturating_sub(1));
        for (k, w) in vertices.windows(2).enumerate() {
            if !g.has_edge(w[0], w[1]) {
                return Err(PathError::NotAdjacent { u: w[0], v: w[1] });
            }
            let is_m = m.is_matched_edge(w[0], w[1]);
            if k > 0 && matched[k - 1] == is_m {
                return Err(PathError::NotAlternating { at: k });
            }
            matched.push(is_m);
        }
        Ok(AlternatingPath { vertices, matched })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn matched_flags(&self) -> &[bool] {
        &self.matched
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.matched.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matched.is_empty()
    }
}

/// True iff `p` is an alternating path between two free vertices whose
/// first and last edges are unmatched.
pub fn is_augmenting(g: &Graph, m: &Matching, p: &AlternatingPath) -> bool {
    let vs = p.vertices();
    if p.len().is_multiple_of(2) {
        return false;
    }
    let (first, last) = (vs[0], vs[vs.len() - 1]);
    if !m.is_free(first) || !m.is_free(last) {
        return false;
    }
    // The flags must still be consistent with `m` and with `g`.
    vs.windows(2).zip(p.matched_flags()).enumerate().all(|(k, (w, &f))| {
        g.has_edge(w[0], w[1]) && m.is_matched_edge(w[0], w[1]) == f && f == (k % 2 == 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_smallest_graph() {
        let g = parse_graph_str("p edge 2 1\ne 1 2\n", InputFormat::Dimacs).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn dimacs_triangle_with_comments() {
        let g = parse_graph_str(
            "c a triangle\np edge 3 3\ne 1 2\ne 2 3\nc mid\ne 3 1\n",
            InputFormat::Dimacs,
        )
        .unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        assert!(g.has_edge(2, 0));
    }

    #[test]
    fn dimacs_self_loop_reports_line() {
        let err = parse_graph_str("p edge 2 1\ne 1 1\n", InputFormat::Dimacs).unwrap_err();
        assert!(matches!(err, GraphError::SelfLoop { line: 2, vertex: 1 }), "{err}");
    }

    #[test]
    fn dimacs_errors() {
        let cases = [
            ("", "empty"),
            ("p col 2 1\ne 1 2\n", "line 1"),
            ("p edge 2 1\ne 1 3\n", "line 2: vertex 3 out of range"),
            ("p edge 3 2\ne 1 2\ne 2 1\n", "line 3: duplicate"),
            ("e 1 2\n", "line 1"),
            ("p edge 3 2\ne 1 2\n", "declares 2"),
            ("p edge 2 1\ne 1 x\n", "line 2: expected integer"),
        ];
        for (input, needle) in cases {
            let err = parse_graph_str(input, InputFormat::Dimacs).unwrap_err().to_string();
            assert!(err.contains(needle), "{input:?} -> {err}");
        }
    }

    #[test]
    fn edge_list_parse_and_errors() {
        let g = parse_graph_str("4 2\n0 1\n2 3\n", InputFormat::EdgeList).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (2, 3)]);
        let err = parse_graph_str("2 1\n0 0\n", InputFormat::EdgeList).unwrap_err();
        assert!(matches!(err, GraphError::SelfLoop { line: 2, .. }));
        let err = parse_graph_str("2 1\n0 2\n", InputFormat::EdgeList).unwrap_err();
        assert!(matches!(err, GraphError::VertexOutOfRange { line: 2, .. }));
        assert!(matches!(
            parse_graph_str("   \n", InputFormat::EdgeList),
            Err(GraphError::Empty)
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (4, 3)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "5 3\n0 1\n1 2\n4 3\n");
        assert_eq!(parse_graph_str(&text, InputFormat::EdgeList).unwrap(), g);
    }

    #[test]
    fn adjacency_consistent() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            assert!(g.neighbors(u).contains(&(v, e)));
            assert!(g.neighbors(v).contains(&(u, e)));
        }
        let total: usize = (0..4).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn validate_matching_cases() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(validate_matching(&g, &Matching::empty(3)), Ok(()));
        let m = Matching::from_pairs(&g, &[(0, 1)]).unwrap();
        assert_eq!(validate_matching(&g, &m), Ok(()));
        let bad = Matching::from_raw(vec![Some(1), None, None], 1);
        assert_eq!(
            validate_matching(&g, &bad),
            Err(MatchingViolation::Asymmetric { u: 0, v: 1 })
        );
        let bad = Matching::from_raw(vec![Some(2), None, Some(0)], 1);
        assert_eq!(validate_matching(&g, &bad), Err(MatchingViolation::NotAnEdge { u: 0, v: 2 }));
        let bad = Matching::from_raw(vec![Some(1), Some(0), None], 0);
        assert!(matches!(
            validate_matching(&g, &bad),
            Err(MatchingViolation::SizeMismatch { .. })
        ));
    }

    #[test]
    fn augmenting_checks() {
        // f1=0 - a=1 = b=2 - f2=3
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2)]).unwrap();
        let p = AlternatingPath::new(&g, &m, vec![0, 1, 2, 3]).unwrap();
        assert!(is_augmenting(&g, &m, &p));
        let p2 = AlternatingPath::new(&g, &m, vec![0, 1, 2]).unwrap();
        assert!(!is_augmenting(&g, &m, &p2));

        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let free = Matching::empty(2);
        let p = AlternatingPath::new(&e, &free, vec![0, 1]).unwrap();
        assert!(is_augmenting(&e, &free, &p));

        assert_eq!(
            AlternatingPath::new(&g, &Matching::empty(4), vec![0, 1, 2]),
            Err(PathError::NotAlternating { at: 1 })
        );
        assert_eq!(AlternatingPath::new(&g, &m, vec![0, 2]), Err(PathError::NotAdjacent { u: 0, v: 2 }));
    }

    #[test]
    fn matching_output_is_sorted() {
        let g = Graph::from_edges(4, &[(2, 3), (1, 0)]).unwrap();
        let m = Matching::from_pairs(&g, &[(3, 2), (1, 0)]).unwrap();
        assert_eq!(format_matching(&m), "2\n0 1\n2 3\n");
        assert_eq!(parse_matching(&format_matching(&m), &g).unwrap(), m);
    }
}
