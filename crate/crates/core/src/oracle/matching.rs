//! Reference maximum matchings: an exact subset DP for small graphs and a
//! textbook blossom-contraction matcher for medium ones.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, VertexId};

pub const EXHAUSTIVE_MAX_VERTICES: usize = 22;
pub const REFERENCE_MAX_VERTICES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{n} vertices exceeds the bound of {max}")]
pub struct SizeGuard {
    pub n: usize,
    pub max: usize,
}

/// Maximum matching size by dynamic programming over vertex subsets.
pub fn max_matching_exhaustive(g: &Graph) -> Result<usize, SizeGuard> {
    let n = g.vertex_count();
    if n > EXHAUSTIVE_MAX_VERTICES {
        return Err(SizeGuard { n, max: EXHAUSTIVE_MAX_VERTICES });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &(w, _)| acc | 1 << w))
        .collect();
    // best[mask] is the maximum matching inside the vertex set `mask`.
    let mut best = vec![0u8; 1 << n];
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut b = best[rest];
        let mut cand = nbr[v] as usize & rest;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            b = b.max(1 + best[rest & !(1 << w)]);
        }
        best[mask] = b;
    }
    Ok(best[(1 << n) - 1] as usize)
}

const NIL: usize = usize::MAX;

struct Blossoms<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossoms<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NIL {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NIL);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for k in 0..self.adj[v].len() {
                let to = self.adj[v][k];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NIL && self.parent[self.mate[to]] != NIL) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark(v, cur, to);
                    self.mark(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NIL {
                    self.parent[to] = v;
                    if self.mate[to] == NIL {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NIL
    }
}

/// Maximum matching by repeated single-source augmentation with blossom
/// contraction. Returns partners.
pub fn reference_matching(g: &Graph) -> Result<Vec<Option<VertexId>>, SizeGuard> {
    let n = g.vertex_count();
    if n > REFERENCE_MAX_VERTICES {
        return Err(SizeGuard { n, max: REFERENCE_MAX_VERTICES });
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).iter().map(|&(w, _)| w).collect()).collect();
    let mut st = Blossoms {
        adj: &adj,
        mate: vec![NIL; n],
        parent: vec![NIL; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    for root in 0..n {
        if st.mate[root] != NIL {
            continue;
        }
        let mut v = st.find_path(root);
        while v != NIL {
            let pv = st.parent[v];
            let ppv = st.mate[pv];
            st.mate[v] = pv;
            st.mate[pv] = v;
            v = ppv;
        }
    }
    Ok(st.mate.into_iter().map(|x| (x != NIL).then_some(x)).collect())
}

pub fn reference_size(g: &Graph) -> Result<usize, SizeGuard> {
    Ok(reference_matching(g)?.iter().flatten().count() / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn known_sizes() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        for (g, want) in [(c4, 2), (c5, 2), (petersen(), 5), (Graph::empty(0), 0)] {
            assert_eq!(max_matching_exhaustive(&g).unwrap(), want);
            assert_eq!(reference_size(&g).unwrap(), want);
        }
    }

    #[test]
    fn reference_output_is_a_matching() {
        let g = petersen();
        let mate = reference_matching(&g).unwrap();
        for (v, w) in mate.iter().enumerate() {
            if let Some(w) = *w {
                assert_eq!(mate[w], Some(v));
                assert!(g.has_edge(v, w));
            }
        }
    }

    #[test]
    fn guard() {
        assert_eq!(max_matching_exhaustive(&Graph::empty(30)), Err(SizeGuard { n: 30, max: 22 }));
    }
}
