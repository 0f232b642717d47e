//! Per-phase level bookkeeping and the breadth-first half of a search level.
//!
//! `LevelState` owns everything MIN touches: the two level arrays,
//! predecessor lists, edge classes, bridge buckets keyed by tenacity and the
//! per-vertex lists of bridges waiting for a maxlevel.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{validate_matching, EdgeId, Graph, Matching, MatchingViolation, VertexId};

/// An extended natural: a finite level or infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Level(u32);

impl Level {
    pub const INF: Level = Level(u32::MAX);
    pub const ZERO: Level = Level(0);

    pub fn new(v: u32) -> Self {
        assert!(v != u32::MAX, "level overflow");
        Level(v)
    }

    pub fn is_finite(self) -> bool {
        self.0 != u32::MAX
    }

    pub fn value(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }

    /// Finite value; panics on infinity.
    pub fn get(self) -> u32 {
        self.value().expect("infinite level")
    }

    /// Saturating sum: anything plus infinity is infinity.
    pub fn plus(self, other: Level) -> Level {
        if !self.is_finite() || !other.is_finite() {
            return Level::INF;
        }
        match self.0.checked_add(other.0) {
            Some(s) if s != u32::MAX => Level(s),
            _ => Level::INF,
        }
    }

    pub fn plus_u32(self, k: u32) -> Level {
        self.plus(Level(k))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(level: u32) -> Parity {
        if level.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeClass {
    Unscanned,
    Prop,
    Bridge,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BridgeStatus {
    /// Bucketed under this tenacity.
    Placed(u32),
    /// Waiting for an endpoint's evenlevel.
    Deferred,
    /// Already bucketed earlier, or tenacity saturated.
    Ignored,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("search level {got} requested but level {expected} is next")]
    OutOfOrder { expected: u32, got: u32 },
    #[error(transparent)]
    InvalidMatching(#[from] MatchingViolation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseConfig {
    /// Highest search level a phase may reach; `None` means `n`.
    pub max_search_level: Option<u32>,
    /// Count edge scans in MIN.
    pub instrument: bool,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        PhaseConfig { max_search_level: None, instrument: true }
    }
}

impl PhaseConfig {
    pub fn search_cap(&self, n: usize) -> u32 {
        self.max_search_level.unwrap_or(n as u32)
    }
}

pub struct LevelState<'g> {
    g: &'g Graph,
    mate: Vec<Option<VertexId>>,
    mate_edge: Vec<Option<EdgeId>>,
    even: Vec<Level>,
    odd: Vec<Level>,
    preds: Vec<Vec<VertexId>>,
    succs: Vec<Vec<VertexId>>,
    alive_preds: Vec<u32>,
    class: Vec<EdgeClass>,
    placed: Vec<bool>,
    bridge_buckets: Vec<Vec<EdgeId>>,
    pending: Vec<Vec<EdgeId>>,
    level_buckets: Vec<Vec<VertexId>>,
    alive: Vec<bool>,
    next_min: u32,
    config: PhaseConfig,
    min_scans: u64,
}

impl<'g> LevelState<'g> {
    /// Fresh phase state: evenlevel 0 at free vertices, everything else infinite.
    pub fn init_phase(g: &'g Graph, m: &Matching, config: PhaseConfig) -> Result<Self, LevelError> {
        validate_matching(g, m)?;
        let n = g.vertex_count();
        let mate: Vec<Option<VertexId>> = m.partners().to_vec();
        let mate_edge = (0..n)
            .map(|v| mate[v].map(|w| g.edge_between(v, w).expect("matched pair is an edge")))
            .collect();
        let mut even = vec![Level::INF; n];
        let mut frontier = Vec::new();
        for v in 0..n {
            if mate[v].is_none() {
                even[v] = Level::ZERO;
                frontier.push(v);
            }
        }
        Ok(LevelState {
            g,
            mate,
            mate_edge,
            even,
            odd: vec![Level::INF; n],
            preds: vec![Vec::new(); n],
            succs: vec![Vec::new(); n],
            alive_preds: vec![0; n],
            class: vec![EdgeClass::Unscanned; g.edge_count()],
            placed: vec![false; g.edge_count()],
            bridge_buckets: Vec::new(),
            pending: vec![Vec::new(); n],
            level_buckets: vec![frontier],
            alive: vec![true; n],
            next_min: 0,
            config,
            min_scans: 0,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn config(&self) -> &PhaseConfig {
        &self.config
    }

    pub fn vertex_count(&self) -> usize {
        self.even.len()
    }

    /// Partner under the matching this phase started from.
    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate[v]
    }

    pub fn is_matched_edge(&self, e: EdgeId) -> bool {
        let (u, _) = self.g.endpoints(e);
        self.mate_edge[u] == Some(e)
    }

    pub fn evenlevel(&self, v: VertexId) -> Level {
        self.even[v]
    }

    pub fn oddlevel(&self, v: VertexId) -> Level {
        self.odd[v]
    }

    pub fn level(&self, v: VertexId, p: Parity) -> Level {
        match p {
            Parity::Even => self.even[v],
            Parity::Odd => self.odd[v],
        }
    }

    pub fn minlevel(&self, v: VertexId) -> Level {
        self.even[v].min(self.odd[v])
    }

    pub fn maxlevel(&self, v: VertexId) -> Level {
        self.even[v].max(self.odd[v])
    }

    pub fn tenacity(&self, v: VertexId) -> Level {
        self.even[v].plus(self.odd[v])
    }

    /// Tenacity of an edge from the levels known right now.
    pub fn edge_tenacity(&self, e: EdgeId) -> Level {
        let (u, v) = self.g.endpoints(e);
        if self.is_matched_edge(e) {
            self.odd[u].plus(self.odd[v]).plus_u32(1)
        } else {
            self.even[u].plus(self.even[v]).plus_u32(1)
        }
    }

    pub fn is_outer(&self, v: VertexId) -> bool {
        self.even[v] < self.odd[v]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.preds[v]
    }

    /// Vertices that list `v` as a predecessor.
    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succs[v]
    }

    pub fn edge_class(&self, e: EdgeId) -> EdgeClass {
        self.class[e]
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive[v]
    }

    /// Bridges bucketed under tenacity `t` (odd).
    pub fn bridge_bucket(&self, t: u32) -> &[EdgeId] {
        debug_assert!(t % 2 == 1);
        self.bridge_buckets
            .get((t / 2) as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// All non-empty buckets as `(tenacity, bridges)`.
    pub fn bridge_buckets(&self) -> impl Iterator<Item = (u32, &[EdgeId])> {
        self.bridge_buckets
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(k, b)| (2 * k as u32 + 1, b.as_slice()))
    }

    pub fn pending_bridges(&self, v: VertexId) -> &[EdgeId] {
        &self.pending[v]
    }

    pub fn level_bucket(&self, i: u32) -> &[VertexId] {
        self.level_buckets.get(i as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn min_scans(&self) -> u64 {
        self.min_scans
    }

    /// The next search level MIN expects.
    pub fn next_level(&self) -> u32 {
        self.next_min
    }

    fn push_level_bucket(&mut self, level: u32, v: VertexId) {
        let idx = level as usize;
        if self.level_buckets.len() <= idx {
            self.level_buckets.resize_with(idx + 1, Vec::new);
        }
        self.level_buckets[idx].push(v);
    }

    fn place(&mut self, e: EdgeId, t: Level) -> BridgeStatus {
        let Some(t) = t.value() else {
            return BridgeStatus::Ignored;
        };
        self.placed[e] = true;
        let idx = (t / 2) as usize;
        if self.bridge_buckets.len() <= idx {
            self.bridge_buckets.resize_with(idx + 1, Vec::new);
        }
        self.bridge_buckets[idx].push(e);
        BridgeStatus::Placed(t)
    }

    /// MIN at search level `i`: scans from every alive vertex whose level of
    /// parity `i` equals `i` and returns the vertices that received minlevel
    /// `i + 1`.
    pub fn run_min(&mut self, i: u32) -> Result<Vec<VertexId>, LevelError> {
        if i != self.next_min {
            return Err(LevelError::OutOfOrder { expected: self.next_min, got: i });
        }
        self.next_min = i + 1;
        let idx = i as usize;
        if idx >= self.level_buckets.len() {
            return Ok(Vec::new());
        }
        let mut frontier = std::mem::take(&mut self.level_buckets[idx]);
        frontier.sort_unstable();
        let parity = Parity::of(i);
        let next = Level::new(i + 1);
        let mut assigned = Vec::new();
        for &u in &frontier {
            if !self.alive[u] {
                continue;
            }
            debug_assert_eq!(self.level(u, parity), Level::new(i));
            match parity {
                Parity::Even => {
                    for k in 0..self.g.degree(u) {
                        let (v, e) = self.g.neighbors(u)[k];
                        if self.mate_edge[u] == Some(e) {
                            continue;
                        }
                        self.scan(u, v, e, next, &mut assigned);
                    }
                }
                Parity::Odd => {
                    if let (Some(v), Some(e)) = (self.mate[u], self.mate_edge[u]) {
                        self.scan(u, v, e, next, &mut assigned);
                    }
                }
            }
        }
        self.level_buckets[idx] = frontier;
        Ok(assigned)
    }

    fn scan(&mut self, u: VertexId, v: VertexId, e: EdgeId, next: Level, assigned: &mut Vec<VertexId>) {
        if self.class[e] != EdgeClass::Unscanned || !self.alive[v] {
            return;
        }
        if self.config.instrument {
            self.min_scans += 1;
        }
        if self.minlevel(v) >= next {
            let slot = match Parity::of(next.get()) {
                Parity::Odd => &mut self.odd[v],
                Parity::Even => &mut self.even[v],
            };
            if *slot == Level::INF {
                *slot = next;
                assigned.push(v);
                self.push_level_bucket(next.get(), v);
            }
            self.preds[v].push(u);
            self.succs[u].push(v);
            self.alive_preds[v] += 1;
            self.class[e] = EdgeClass::Prop;
        } else {
            self.class[e] = EdgeClass::Bridge;
            self.register_bridge(e);
        }
    }

    /// Buckets a bridge by tenacity if both needed levels are known, otherwise
    /// parks it on every endpoint still missing its evenlevel.
    pub fn register_bridge(&mut self, e: EdgeId) -> BridgeStatus {
        debug_assert_eq!(self.class[e], EdgeClass::Bridge);
        if self.placed[e] {
            return BridgeStatus::Ignored;
        }
        let (u, v) = self.g.endpoints(e);
        if self.is_matched_edge(e) {
            return self.place(e, self.edge_tenacity(e));
        }
        let mut deferred = false;
        for x in [u, v] {
            if !self.even[x].is_finite() {
                self.pending[x].push(e);
                deferred = true;
            }
        }
        if deferred {
            BridgeStatus::Deferred
        } else {
            self.place(e, self.edge_tenacity(e))
        }
    }

    /// Re-submits the bridges parked on `v` after its maxlevel was assigned.
    pub fn resolve_pending(&mut self, v: VertexId) -> Vec<EdgeId> {
        let parked = std::mem::take(&mut self.pending[v]);
        let mut placed = Vec::new();
        for e in parked {
            if self.placed[e] {
                continue;
            }
            let (a, b) = self.g.endpoints(e);
            if self.even[a].is_finite() && self.even[b].is_finite() {
                if let BridgeStatus::Placed(_) = self.place(e, self.edge_tenacity(e)) {
                    placed.push(e);
                }
            }
        }
        placed
    }

    /// Records a maxlevel found by MAX and queues `v` for the MIN frontier.
    pub(crate) fn assign_maxlevel(&mut self, v: VertexId, level: u32) {
        let slot = match Parity::of(level) {
            Parity::Even => &mut self.even[v],
            Parity::Odd => &mut self.odd[v],
        };
        debug_assert!(!slot.is_finite());
        *slot = Level::new(level);
        self.push_level_bucket(level, v);
    }

    /// True once nothing reachable remains beyond level `i`.
    pub fn phase_done(&self, i: u32) -> bool {
        let from = i as usize + 1;
        let frontier_left = self.level_buckets.iter().skip(from).any(|b| !b.is_empty());
        let bridges_left = self.bridge_buckets.iter().skip(from).any(|b| !b.is_empty());
        !frontier_left && !bridges_left
    }

    /// Marks `v` dead; returns false if it already was.
    pub(crate) fn kill(&mut self, v: VertexId) -> bool {
        std::mem::replace(&mut self.alive[v], false)
    }

    /// One fewer live predecessor for `v`; returns the remaining count.
    pub(crate) fn drop_pred(&mut self, v: VertexId) -> u32 {
        self.alive_preds[v] -= 1;
        self.alive_preds[v]
    }

    /// `v evenlevel oddlevel tenacity`, one line per vertex.
    pub fn dump_levels(&self) -> String {
        let mut out = String::new();
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "{v} {} {} {}", self.even[v], self.odd[v], self.tenacity(v));
        }
        out
    }

    /// `bucket <t> <u> <v> ...` per non-empty bridge bucket.
    pub fn dump_buckets(&self) -> String {
        let mut out = String::new();
        for (t, edges) in self.bridge_buckets() {
            let _ = write!(out, "bucket {t}");
            for &e in edges {
                let (u, v) = self.g.endpoints(e);
                let _ = write!(out, " {u}-{v}");
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_fixture() -> (Graph, Matching) {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2)]).unwrap();
        (g, m)
    }

    #[test]
    fn level_arithmetic() {
        assert_eq!(Level::new(2).plus(Level::new(3)), Level::new(5));
        assert_eq!(Level::new(2).plus(Level::INF), Level::INF);
        assert_eq!(Level::INF.to_string(), "inf");
        assert!(Level::new(7) < Level::INF);
        assert_eq!(Level::new(u32::MAX - 2).plus_u32(5), Level::INF);
    }

    #[test]
    fn init_phase_cases() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = Matching::from_pairs(&g, &[(0, 1)]).unwrap();
        let s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        assert!(s.level_bucket(0).is_empty());

        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = LevelState::init_phase(&k3, &Matching::empty(3), PhaseConfig::default()).unwrap();
        assert_eq!(s.level_bucket(0), &[0, 1, 2]);

        let (g, m) = path_fixture();
        let s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        assert_eq!(s.level_bucket(0), &[0, 3]);
        assert_eq!(s.evenlevel(1), Level::INF);
    }

    #[test]
    fn init_rejects_bad_matching() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let bad = Matching::from_raw(vec![Some(1), None], 1);
        assert!(matches!(
            LevelState::init_phase(&g, &bad, PhaseConfig::default()),
            Err(LevelError::InvalidMatching(_))
        ));
    }

    #[test]
    fn path_fixture_min_levels() {
        let (g, m) = path_fixture();
        let mut s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        let got = s.run_min(0).unwrap();
        assert_eq!(got, vec![1, 2]);
        assert_eq!(s.oddlevel(1), Level::new(1));
        assert_eq!(s.predecessors(1), &[0]);
        assert_eq!(s.predecessors(2), &[3]);
        assert!(!s.phase_done(0));
        assert!(s.run_min(1).unwrap().is_empty());
        let ab = g.edge_between(1, 2).unwrap();
        assert_eq!(s.edge_class(ab), EdgeClass::Bridge);
        assert_eq!(s.bridge_bucket(3), &[ab]);
    }

    #[test]
    fn out_of_order_is_rejected() {
        let (g, m) = path_fixture();
        let mut s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        assert_eq!(s.run_min(1), Err(LevelError::OutOfOrder { expected: 0, got: 1 }));
    }

    #[test]
    fn triangle_props() {
        // f=0, a=1, b=2, (a,b) matched
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2)]).unwrap();
        let mut s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        s.run_min(0).unwrap();
        assert_eq!(s.edge_class(0), EdgeClass::Prop);
        assert_eq!(s.edge_class(1), EdgeClass::Prop);
        assert_eq!((s.oddlevel(1), s.oddlevel(2)), (Level::new(1), Level::new(1)));
    }

    #[test]
    fn unmatched_bridge_between_free_vertices() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let mut s = LevelState::init_phase(&g, &Matching::empty(2), PhaseConfig::default()).unwrap();
        // Both endpoints sit at evenlevel 0, so the edge can never be a prop.
        s.run_min(0).unwrap();
        assert_eq!(s.edge_class(0), EdgeClass::Bridge);
        assert_eq!(s.bridge_bucket(1), &[0]);
    }

    #[test]
    fn perfect_matching_is_done_immediately() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = Matching::from_pairs(&g, &[(0, 1)]).unwrap();
        let mut s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        s.run_min(0).unwrap();
        assert!(s.phase_done(0));
    }

    #[test]
    fn deferred_then_resolved() {
        // Five-cycle fixture: f=0 w=1 b=2 c=3 d=4 e=5 g=6.
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 2)],
        )
        .unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4), (5, 6)]).unwrap();
        let mut s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        for i in 0..4 {
            s.run_min(i).unwrap();
        }
        // b=2 has evenlevel 2, c=3 and g=6 have oddlevel 3, d and e evenlevel 4.
        assert_eq!(s.evenlevel(2), Level::new(2));
        assert_eq!(s.oddlevel(3), Level::new(3));
        assert_eq!(s.evenlevel(4), Level::new(4));
        s.run_min(4).unwrap();
        let de = g.edge_between(4, 5).unwrap();
        assert_eq!(s.edge_class(de), EdgeClass::Bridge);
        assert_eq!(s.bridge_bucket(9), &[de]);

        // Unmatched bridge (b, c) once c's evenlevel is pending.
        let bc = g.edge_between(2, 3).unwrap();
        assert_eq!(s.edge_class(bc), EdgeClass::Prop);
        let mut s2 = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        s2.run_min(0).unwrap();
        s2.run_min(1).unwrap();
        s2.run_min(2).unwrap();
        s2.class[bc] = EdgeClass::Bridge;
        s2.preds[3].clear();
        assert_eq!(s2.register_bridge(bc), BridgeStatus::Deferred);
        assert_eq!(s2.pending_bridges(3), &[bc]);
        s2.assign_maxlevel(3, 6);
        assert_eq!(s2.resolve_pending(3), vec![bc]);
        assert_eq!(s2.bridge_bucket(9), &[bc]);
        assert!(s2.resolve_pending(3).is_empty());
    }

    #[test]
    fn resolve_keeps_bridge_when_partner_pending() {
        // Two inner vertices joined by an unmatched edge: f-x=y, f'-p=q, x-p.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (1, 4)]).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2), (4, 5)]).unwrap();
        let mut s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        let xp = g.edge_between(1, 4).unwrap();
        s.class[xp] = EdgeClass::Bridge;
        assert_eq!(s.register_bridge(xp), BridgeStatus::Deferred);
        s.even[1] = Level::new(2);
        assert!(s.resolve_pending(1).is_empty());
        assert_eq!(s.pending_bridges(4), &[xp]);
    }

    #[test]
    fn dump_format() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = Matching::from_pairs(&g, &[(0, 1)]).unwrap();
        let s = LevelState::init_phase(&g, &m, PhaseConfig::default()).unwrap();
        assert_eq!(s.dump_levels(), "0 inf inf inf\n1 inf inf inf\n");
    }
}
