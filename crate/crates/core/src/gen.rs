//! Seeded generators for graphs, matchings and layered DAGs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ddfs::LayeredGraph;
use crate::graph::{Graph, Matching, VertexId};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` under `seed`, so case `index` of a run can be
/// regenerated alone.
pub fn case_rng(seed: u64, index: u64) -> Rng64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Erdős–Rényi by edge count: `m` distinct uniform pairs, duplicates
/// rejected. `m` is clamped to the number of possible pairs.
pub fn random_graph(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    let max = n * n.saturating_sub(1) / 2;
    let m = m.min(max);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    if 2 * m > max {
        // Dense: shuffle the full pair list instead of rejection sampling.
        let mut all: Vec<(VertexId, VertexId)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        all.shuffle(rng);
        all.truncate(m);
        return Graph::from_edges(n, &all).expect("distinct pairs");
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        if seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("distinct pairs")
}

/// Greedy maximal matching in edge order.
pub fn greedy_matching(g: &Graph) -> Matching {
    greedy_over(g, g.edges().iter().copied())
}

/// Maximal matching built greedily over a shuffled edge order.
pub fn random_maximal_matching(g: &Graph, rng: &mut impl Rng) -> Matching {
    let mut edges = g.edges().to_vec();
    edges.shuffle(rng);
    greedy_over(g, edges.into_iter())
}

/// Random matching that need not be maximal: each edge is offered with
/// probability one half.
pub fn random_matching(g: &Graph, rng: &mut impl Rng) -> Matching {
    let mut edges = g.edges().to_vec();
    edges.shuffle(rng);
    let picked: Vec<_> = edges.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    greedy_over(g, picked.into_iter())
}

fn greedy_over(g: &Graph, edges: impl Iterator<Item = (VertexId, VertexId)>) -> Matching {
    let mut used = vec![false; g.vertex_count()];
    let mut pairs = Vec::new();
    for (u, v) in edges {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            pairs.push((u, v));
        }
    }
    Matching::from_pairs(g, &pairs).expect("greedy pairs form a matching")
}

/// Random layered DAG with at most `max_layers` layers above layer 0 and at
/// most `max_vertices` vertices. Every non-bottom vertex gets at least one
/// arc so the result always validates.
pub fn random_layered(max_layers: u32, max_vertices: usize, rng: &mut impl Rng) -> LayeredGraph {
    let h = rng.gen_range(1..=max_layers);
    let budget = max_vertices.max(h as usize + 3);
    let mut layer = vec![h, h];
    let inner = rng.gen_range(h as usize + 1..=budget - 2);
    for k in 0..inner {
        // Make sure every layer below the roots is populated.
        let l = if k < h as usize { k as u32 } else { rng.gen_range(0..h) };
        layer.push(l);
    }
    let n = layer.len();
    let density: f64 = rng.gen_range(0.05..0.5);
    let mut arcs = Vec::new();
    for a in 0..n {
        if layer[a] == 0 {
            continue;
        }
        let below: Vec<VertexId> = (0..n).filter(|&b| layer[b] < layer[a]).collect();
        let mut any = false;
        for &b in &below {
            // Prefer short jumps so paths stay long.
            let jump = layer[a] - layer[b];
            let p = density / jump as f64;
            if rng.gen_bool(p.min(1.0)) {
                arcs.push((a, b));
                any = true;
            }
        }
        if !any {
            let near: Vec<VertexId> = below.iter().copied().filter(|&b| layer[b] + 1 == layer[a]).collect();
            let pool = if near.is_empty() { &below } else { &near };
            arcs.push((a, *pool.choose(rng).unwrap()));
        }
    }
    arcs.shuffle(rng);
    LayeredGraph::new(layer, &arcs, 0, 1).expect("generator builds valid layered graphs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_matching;

    #[test]
    fn deterministic_by_seed() {
        let a = random_graph(30, 60, &mut rng(7));
        let b = random_graph(30, 60, &mut rng(7));
        assert_eq!(a, b);
        assert_eq!(a.edge_count(), 60);
    }

    #[test]
    fn case_streams_differ_and_repeat() {
        let a = random_graph(20, 40, &mut case_rng(1, 0));
        let b = random_graph(20, 40, &mut case_rng(1, 1));
        assert_ne!(a, b);
        assert_eq!(a, random_graph(20, 40, &mut case_rng(1, 0)));
    }

    #[test]
    fn dense_request_is_clamped() {
        let g = random_graph(5, 100, &mut rng(1));
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn matchings_are_valid_and_maximal() {
        let mut r = rng(3);
        for _ in 0..20 {
            let g = random_graph(12, 20, &mut r);
            let m = random_maximal_matching(&g, &mut r);
            validate_matching(&g, &m).unwrap();
            for &(u, v) in g.edges() {
                assert!(!(m.is_free(u) && m.is_free(v)));
            }
            validate_matching(&g, &random_matching(&g, &mut r)).unwrap();
        }
    }

    #[test]
    fn layered_graphs_validate() {
        let mut r = rng(5);
        for _ in 0..50 {
            let h = random_layered(12, 40, &mut r);
            assert!(h.vertex_count() <= 40);
            assert!(h.height() <= 12);
        }
    }
}
