//! Small handcrafted instances used by tests, the CLI demo inputs and docs.
//!
//! Each fixture is a graph with a starting matching. Vertex names in the
//! comments refer to the ids in the edge list.

use crate::graph::{Graph, Matching, VertexId};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub graph: Graph,
    pub matching: Matching,
}

fn build(name: &'static str, n: usize, edges: &[(VertexId, VertexId)], pairs: &[(VertexId, VertexId)]) -> Fixture {
    let graph = Graph::from_edges(n, edges).expect("fixture graph is simple");
    let matching = Matching::from_pairs(&graph, pairs).expect("fixture matching is valid");
    Fixture { name, graph, matching }
}

/// f1=0, a=1, b=2, f2=3: path f1-a=b-f2.
pub fn path() -> Fixture {
    build("path", 4, &[(0, 1), (1, 2), (2, 3)], &[(1, 2)])
}

/// f=0, a=1, b=2: triangle with a=b matched.
pub fn triangle() -> Fixture {
    build("triangle", 3, &[(0, 1), (1, 2), (0, 2)], &[(1, 2)])
}

/// f=0, w=1, b=2, c=3, d=4, e=5, g=6: stem f-w=b, cycle b-c=d-e=g-b.
pub fn five_cycle() -> Fixture {
    build(
        "five-cycle",
        7,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 2)],
        &[(1, 2), (3, 4), (5, 6)],
    )
}

/// The five-cycle with a second route from f: f-10=9-8=7-c and 10-b.
/// Blossom {c,d,e,g} with base b sits inside a tenacity-11 blossom with
/// base f.
pub fn nested() -> Fixture {
    build(
        "nested",
        11,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 2),
            (7, 8),
            (9, 10),
            (7, 3),
            (9, 8),
            (10, 0),
            (10, 2),
        ],
        &[(1, 2), (3, 4), (5, 6), (7, 8), (9, 10)],
    )
}

/// [`nested`] plus a free chain 11-12=13 hooked to 1. The only minimum
/// augmenting path, of length 13, runs from 11 through both blossoms to 0.
pub fn nested_pendant() -> Fixture {
    let base = nested();
    let mut edges = base.graph.edges().to_vec();
    edges.extend([(11, 12), (12, 13), (13, 1)]);
    let mut pairs = base.matching.pairs();
    pairs.push((12, 13));
    build("nested-pendant", 14, &edges, &pairs)
}

/// x=0, a=1, b=2, y=3: two free vertices each adjacent to both ends of the
/// matched edge a=b. Neither a nor b has a base.
pub fn no_base() -> Fixture {
    build("no-base", 4, &[(0, 1), (0, 2), (1, 2), (3, 1), (3, 2)], &[(1, 2)])
}

/// Two copies of [`path`] joined by an unmatched edge between inner vertices.
pub fn two_paths() -> Fixture {
    build(
        "two-paths",
        8,
        &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (1, 5)],
        &[(1, 2), (5, 6)],
    )
}

/// Triangle blossom {1,2} hanging off the free vertex 0, which starts the
/// augmenting path 0-3=4-5=6-7.
pub fn blossom_at_endpoint() -> Fixture {
    build(
        "blossom-at-endpoint",
        8,
        &[(0, 1), (0, 2), (1, 2), (0, 3), (3, 4), (4, 5), (5, 6), (6, 7)],
        &[(1, 2), (3, 4), (5, 6)],
    )
}

pub fn c4() -> Fixture {
    build("c4", 4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[])
}

pub fn c5() -> Fixture {
    build("c5", 5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], &[])
}

pub fn petersen() -> Fixture {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    build("petersen", 10, &e, &[])
}

/// The structural fixtures, each with its starting matching.
pub fn structural() -> Vec<Fixture> {
    vec![path(), triangle(), five_cycle(), nested(), nested_pendant(), no_base(), two_paths(), blossom_at_endpoint()]
}

pub fn all() -> Vec<Fixture> {
    let mut v = structural();
    v.extend([c4(), c5(), petersen()]);
    v
}
