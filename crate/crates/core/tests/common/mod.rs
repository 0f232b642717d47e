//! Checks shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashSet;

use mvmatch::ddfs::{ddfs_layered, Color, DdfsKind, DdfsOptions, LayeredGraph};
use mvmatch::oracle::layered::{arcs_toward, brute_bottleneck};

pub const BUDGET: usize = 200_000;

/// Checks one DAG; `None` when the brute force ran out of budget.
pub fn check_layered(h: &LayeredGraph) -> Option<Result<(), String>> {
    let expected = brute_bottleneck(h, BUDGET).ok()?;
    let out = match ddfs_layered(h, DdfsOptions { trace: None, record_centers: true }) {
        Ok(o) => o,
        Err(e) => return Some(Err(format!("engine error: {e}"))),
    };
    let res = (|| {
        for w in out.center_layers.windows(2) {
            if w[1].0.min(w[1].1) > w[0].0.min(w[0].1) {
                return Err(format!("min center layer rose: {:?}", w));
            }
        }
        match (&out.kind, expected) {
            (DdfsKind::Bottleneck { b, red, green }, Some(eb)) => {
                if *b != eb {
                    return Err(format!("bottleneck {b}, oracle {eb}"));
                }
                let (r, g) = h.roots();
                if !red.contains(&r) && r != *b || !green.contains(&g) && g != *b {
                    return Err("roots missing from their colors".into());
                }
                let rs: HashSet<_> = red.iter().collect();
                if green.iter().any(|x| rs.contains(x)) {
                    return Err("colors overlap".into());
                }
                let bound = 2 * arcs_toward(h, &[eb]) as u64;
                if out.steps > bound {
                    return Err(format!("steps {} > 2|E_b| = {bound}", out.steps));
                }
            }
            (DdfsKind::FreePair { r0, g0 }, None) => {
                if r0 == g0 || h.layer(*r0) != 0 || h.layer(*g0) != 0 {
                    return Err("bad free pair".into());
                }
                let mut on_red: HashSet<usize> = out.chain_to(Color::Red, *r0).iter().map(|e| e.parent).collect();
                on_red.insert(*r0);
                let mut on_green: HashSet<usize> =
                    out.chain_to(Color::Green, *g0).iter().map(|e| e.parent).collect();
                on_green.insert(*g0);
                if !on_red.contains(&h.roots().0) || !on_green.contains(&h.roots().1) {
                    return Err("tree path does not reach its root".into());
                }
                if on_red.intersection(&on_green).next().is_some() {
                    return Err("tree paths intersect".into());
                }
                let bound = 2 * arcs_toward(h, &[*r0, *g0]) as u64;
                if out.steps > bound {
                    return Err(format!("steps {} > 2|E_p| = {bound}", out.steps));
                }
            }
            (k, e) => return Err(format!("engine {k:?}, oracle {e:?}")),
        }
        Ok(())
    })();
    Some(res)
}


use std::collections::{BTreeMap, BTreeSet};

use mvmatch::augment::PhaseObserver;
use mvmatch::graph::{Graph, Matching, VertexId};
use mvmatch::level::LevelState;
use mvmatch::oracle::paths::{for_each_path, Guard, Lv, OracleProfile};
use mvmatch::petal::PetalForest;

/// Engine levels at the end of a phase.
#[derive(Default)]
pub struct LevelSnapshot(pub Vec<(Lv, Lv)>);

impl PhaseObserver for LevelSnapshot {
    fn after_phase(&mut self, s: &LevelState<'_>, _pf: &PetalForest) {
        self.0 = (0..s.vertex_count()).map(|v| (s.evenlevel(v).value(), s.oddlevel(v).value())).collect();
    }
}

/// Compares bud* against the oracle's bases right after the search level
/// that settles each tenacity below `l_m`.
pub struct BaseWatch<'p> {
    pub profile: &'p OracleProfile,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl<'p> BaseWatch<'p> {
    pub fn new(profile: &'p OracleProfile) -> Self {
        BaseWatch { profile, checked: 0, failures: Vec::new() }
    }
}

impl PhaseObserver for BaseWatch<'_> {
    fn after_level(&mut self, i: u32, s: &LevelState<'_>, pf: &PetalForest) {
        let p = self.profile;
        let t = 2 * i + 1;
        if p.lm.is_some_and(|l| t >= l) {
            return;
        }
        let mut want: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        let mut got: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for v in 0..s.vertex_count() {
            if p.tenacity(v) == Some(t) {
                self.checked += 1;
                let b = pf.bud_star_peek(v);
                match p.base[v] {
                    Some(base) if base == b => {}
                    other => self.failures.push(format!("level {i}: bud*({v}) = {b}, base = {other:?}")),
                }
                if let Some(base) = p.base[v] {
                    want.entry(base).or_default().insert(v);
                }
            }
            if s.tenacity(v).value() == Some(t) {
                got.entry(pf.bud_star_peek(v)).or_default().insert(v);
            }
        }
        if want != got {
            self.failures.push(format!("level {i}: bud* fibers {got:?}, oracle S {want:?}"));
        }
    }
}

/// Length of a shortest augmenting path of `m` avoiding `blocked`.
pub fn shortest_augmenting(g: &Graph, m: &Matching, blocked: &[bool], guard: Guard) -> Option<usize> {
    let starts: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| m.is_free(v) && !blocked[v]).collect();
    let mut best: Option<usize> = None;
    for_each_path(g, m, &starts, guard, |path| {
        let l = path.len() - 1;
        let last = path[l];
        if l % 2 == 1 && m.is_free(last) && path.iter().all(|&v| !blocked[v]) {
            best = Some(best.map_or(l, |b| b.min(l)));
        }
    })
    .expect("instance within the oracle guard");
    best
}
