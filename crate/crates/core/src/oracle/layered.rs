//! Exhaustive bottleneck search on layered DAGs.

use thiserror::Error;

use crate::ddfs::LayeredGraph;
use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("more than {budget} root-to-bottom paths")]
pub struct BudgetExceeded {
    pub budget: usize,
}

/// Enumerates every path from either root down to layer 0 and returns the
/// highest vertex common to all of them.
pub fn brute_bottleneck(h: &LayeredGraph, budget: usize) -> Result<Option<VertexId>, BudgetExceeded> {
    let n = h.vertex_count();
    let (r, g) = h.roots();
    let mut common: Option<Vec<bool>> = None;
    let mut count = 0usize;
    for root in [r, g] {
        let mut path = vec![root];
        walk(h, &mut path, &mut |p: &[VertexId]| {
            count += 1;
            if count > budget {
                return false;
            }
            let mut mask = vec![false; n];
            for &v in p {
                mask[v] = true;
            }
            common = Some(match common.take() {
                None => mask,
                Some(c) => c.iter().zip(&mask).map(|(a, b)| *a && *b).collect(),
            });
            true
        });
        if count > budget {
            return Err(BudgetExceeded { budget });
        }
    }
    let common = common.unwrap_or_default();
    Ok((0..n).filter(|&v| common[v]).max_by_key(|&v| h.layer(v)))
}

fn walk(h: &LayeredGraph, path: &mut Vec<VertexId>, visit: &mut dyn FnMut(&[VertexId]) -> bool) -> bool {
    let v = *path.last().unwrap();
    if h.layer(v) == 0 {
        return visit(path);
    }
    for &w in h.arcs(v) {
        path.push(w);
        let go_on = walk(h, path, visit);
        path.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn reachable_from(h: &LayeredGraph, starts: &[VertexId]) -> Vec<bool> {
    let mut seen = vec![false; h.vertex_count()];
    let mut stack: Vec<VertexId> = starts.to_vec();
    for &s in starts {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in h.arcs(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

fn reaches(h: &LayeredGraph, targets: &[VertexId]) -> Vec<bool> {
    let n = h.vertex_count();
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by_key(|&v| h.layer(v));
    let mut ok = vec![false; n];
    for &t in targets {
        ok[t] = true;
    }
    for &v in &order {
        if !ok[v] {
            ok[v] = h.arcs(v).iter().any(|&w| ok[w]);
        }
    }
    ok
}

/// Number of arcs lying on some path from a root to one of `targets`.
pub fn arcs_toward(h: &LayeredGraph, targets: &[VertexId]) -> usize {
    let (r, g) = h.roots();
    let from = reachable_from(h, &[r, g]);
    let to = reaches(h, targets);
    (0..h.vertex_count())
        .filter(|&v| from[v] && !targets.contains(&v))
        .map(|v| h.arcs(v).iter().filter(|&&w| to[w]).count())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shared_sink() {
        let h = LayeredGraph::new(vec![1, 1, 0], &[(0, 2), (1, 2)], 0, 1).unwrap();
        assert_eq!(brute_bottleneck(&h, 100), Ok(Some(2)));
        assert_eq!(arcs_toward(&h, &[2]), 2);
    }

    #[test]
    fn disjoint_chains() {
        let h = LayeredGraph::new(vec![1, 1, 0, 0], &[(0, 2), (1, 3)], 0, 1).unwrap();
        assert_eq!(brute_bottleneck(&h, 100), Ok(None));
    }

    #[test]
    fn diamond() {
        let h = LayeredGraph::new(
            vec![3, 3, 2, 1, 0],
            &[(0, 2), (1, 2), (2, 4), (0, 3), (3, 4)],
            0,
            1,
        )
        .unwrap();
        assert_eq!(brute_bottleneck(&h, 100), Ok(Some(4)));
    }

    #[test]
    fn budget_guard() {
        // Two layers of width 4, fully connected: 16 paths per root.
        let mut layer = vec![3, 3];
        layer.extend([2; 4]);
        layer.extend([1; 4]);
        layer.push(0);
        let mut arcs = Vec::new();
        for a in 2..6 {
            arcs.push((0, a));
            arcs.push((1, a));
            for b in 6..10 {
                arcs.push((a, b));
            }
        }
        for b in 6..10 {
            arcs.push((b, 10));
        }
        let h = LayeredGraph::new(layer, &arcs, 0, 1).unwrap();
        assert_eq!(brute_bottleneck(&h, 10), Err(BudgetExceeded { budget: 10 }));
        assert_eq!(brute_bottleneck(&h, 100), Ok(Some(10)));
    }
}
