//! Phases: path extraction through petals, augmentation, the removal
//! cascade, and the outer loop to a maximum matching.

use std::collections::HashMap;

use thiserror::Error;

use crate::ddfs::{Color, DdfsKind, DdfsOutcome, TreeEdge};
use crate::gen::greedy_matching;
use crate::graph::{is_augmenting, AlternatingPath, EdgeId, Graph, Matching, PathError, VertexId};
use crate::level::{Level, LevelError, LevelState, Parity, PhaseConfig};
use crate::petal::{PetalError, PetalForest, PetalId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhaseStats {
    pub levels: u32,
    pub min_scans: u64,
    pub ddfs_steps: u64,
    pub ddfs_runs: u64,
    pub petals: usize,
    pub paths: usize,
    /// Length of the shortest augmenting path, if any.
    pub lm: Option<u32>,
}

impl PhaseStats {
    /// Final search level `(l_m - 1) / 2`.
    pub fn jm(&self) -> Option<u32> {
        self.lm.map(|l| (l - 1) / 2)
    }

    pub fn work(&self) -> u64 {
        self.min_scans + self.ddfs_steps
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathFault {
    #[error("no live route from {from} down to {target}")]
    NoRoute { from: VertexId, target: VertexId },
    #[error("vertex {v} reached at its maxlevel but belongs to no petal")]
    NotInPetal { v: VertexId },
    #[error("petal {petal} was opened after its bud died")]
    DeadBud { petal: PetalId },
    #[error("vertex {v} has no color in petal {petal}")]
    Uncolored { v: VertexId, petal: PetalId },
    #[error("petal {petal} has no {color} route from {root} to {target}")]
    PetalRoute { petal: PetalId, color: Color, root: VertexId, target: VertexId },
    #[error("extracted path is malformed: {0}")]
    Malformed(#[from] PathError),
    #[error("extracted path is not augmenting")]
    NotAugmenting,
    #[error("extracted path has length {got}, the phase needs {want}")]
    WrongLength { got: usize, want: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhaseError {
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error(transparent)]
    Petal(#[from] PetalError),
    #[error("path extraction failed: {0}")]
    Path(#[from] PathFault),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMode {
    /// Augment along every free pair found at the final search level.
    #[default]
    Augment,
    /// Record free pairs without augmenting; stop at the same level.
    Analyze,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhaseOptions {
    pub config: PhaseConfig,
    pub mode: PhaseMode,
    pub trace: bool,
}

/// Hooks into a running phase; all methods default to no-ops.
pub trait PhaseObserver {
    /// After MIN at search level `i`, before MAX.
    fn after_min(&mut self, _i: u32, _s: &LevelState<'_>) {}
    /// After MAX at search level `i`.
    fn after_level(&mut self, _i: u32, _s: &LevelState<'_>, _pf: &PetalForest) {}
    /// After a path was extracted and augmented; `removed` lists the cascade.
    fn on_path(&mut self, _p: &AlternatingPath, _removed: &[VertexId]) {}
    fn after_phase(&mut self, _s: &LevelState<'_>, _pf: &PetalForest) {}
}

pub struct NoObserver;

impl PhaseObserver for NoObserver {}

#[derive(Debug, Clone)]
pub struct PhaseResult {
    pub matching: Matching,
    pub stats: PhaseStats,
    pub paths: Vec<AlternatingPath>,
    /// Free pairs seen in analyze mode, as bridge edges.
    pub free_bridges: Vec<EdgeId>,
    pub trace: Vec<String>,
}

/// Read-only path construction over one phase's structures.
pub struct Extractor<'a, 'g> {
    s: &'a LevelState<'g>,
    pf: &'a PetalForest,
}

fn min_parity(s: &LevelState<'_>, v: VertexId) -> Parity {
    Parity::of(s.minlevel(v).get())
}

/// Appends `seg` to `out`, where `seg[0]` repeats the last vertex of `out`.
fn join(out: &mut Vec<VertexId>, seg: &[VertexId]) {
    debug_assert_eq!(out.last(), seg.first());
    out.extend_from_slice(&seg[1..]);
}

impl<'a, 'g> Extractor<'a, 'g> {
    pub fn new(s: &'a LevelState<'g>, pf: &'a PetalForest) -> Self {
        Extractor { s, pf }
    }

    /// Whether the immediate-bud chain of `y` reaches `target`.
    fn chain_hits(&self, mut y: VertexId, target: VertexId) -> bool {
        let floor = self.s.minlevel(target);
        loop {
            if y == target {
                return true;
            }
            if self.s.minlevel(y) <= floor {
                return false;
            }
            match self.pf.petal_of(y) {
                Some(p) => y = self.pf.petal(p).bud,
                None => return false,
            }
        }
    }

    /// First vertex on the bud chain of `w` that is a member of `pid` or its
    /// bud.
    fn enter_petal(&self, w: VertexId, pid: PetalId) -> Option<VertexId> {
        let bud = self.pf.petal(pid).bud;
        let floor = self.s.minlevel(bud);
        let mut y = w;
        loop {
            if y == bud || self.pf.petal_of(y) == Some(pid) {
                return Some(y);
            }
            if self.s.minlevel(y) <= floor {
                return None;
            }
            y = self.pf.petal(self.pf.petal_of(y)?).bud;
        }
    }

    /// Alternating path from `x`, entered at its level of parity `par`, down
    /// to `target`; `x` first.
    pub fn path_to(&self, x: VertexId, par: Parity, target: VertexId) -> Result<Vec<VertexId>, PathFault> {
        let s = self.s;
        let mut out = vec![x];
        let (mut cur, mut par) = (x, par);
        while cur != target {
            let lv = s.level(cur, par);
            if !lv.is_finite() || lv.get() == 0 {
                return Err(PathFault::NoRoute { from: cur, target });
            }
            if lv == s.minlevel(cur) {
                let next = s
                    .predecessors(cur)
                    .iter()
                    .copied()
                    .find(|&p| s.is_alive(p) && self.chain_hits(p, target))
                    .ok_or(PathFault::NoRoute { from: cur, target })?;
                out.push(next);
                cur = next;
                par = par.flip();
            } else {
                let seg = self.open_petal(cur, par)?;
                join(&mut out, &seg);
                cur = *out.last().unwrap();
                par = Parity::Even;
            }
        }
        Ok(out)
    }

    /// For `x` entered at its maxlevel: up through its petal's bridge and
    /// down the other side to the petal's bud; `x` first.
    pub fn open_petal(&self, x: VertexId, par: Parity) -> Result<Vec<VertexId>, PathFault> {
        let pid = self.pf.petal_of(x).ok_or(PathFault::NotInPetal { v: x })?;
        let p = self.pf.petal(pid);
        if !self.s.is_alive(p.bud) {
            return Err(PathFault::DeadBud { petal: pid });
        }
        debug_assert_eq!(self.s.level(x, par), self.s.maxlevel(x));
        let c = self.pf.color(x).ok_or(PathFault::Uncolored { v: x, petal: pid })?;
        let (same_end, other_end, same_root, other_root) = match c {
            Color::Red => (p.bridge.0, p.bridge.1, p.red_root, p.green_root),
            Color::Green => (p.bridge.1, p.bridge.0, p.green_root, p.red_root),
        };
        let bp = if self.s.is_matched_edge(p.bridge_edge) { Parity::Odd } else { Parity::Even };

        let mut out = self.descend(pid, c, same_root, x)?;
        out.reverse();
        let mut up = self.path_to(same_end, bp, same_root)?;
        up.reverse();
        join(&mut out, &up);
        out.extend(self.path_to(other_end, bp, other_root)?);
        let down = self.descend(pid, c.other(), other_root, p.bud)?;
        join(&mut out, &down);
        Ok(out)
    }

    /// Expands one contracted hop `parent -> child` (through predecessor
    /// `via`) into a real path.
    fn expand_hop(&self, parent: VertexId, via: VertexId, child: VertexId) -> Result<Vec<VertexId>, PathFault> {
        let mut seg = vec![parent];
        seg.extend(self.path_to(via, min_parity(self.s, parent).flip(), child)?);
        Ok(seg)
    }

    /// Fresh DFS from `root` to `target` over live members of petal `pid`
    /// with color `c`, then expanded; `root` first.
    fn descend(&self, pid: PetalId, c: Color, root: VertexId, target: VertexId) -> Result<Vec<VertexId>, PathFault> {
        if root == target {
            return Ok(vec![root]);
        }
        let s = self.s;
        let bud = self.pf.petal(pid).bud;
        let mut parent: HashMap<VertexId, (VertexId, VertexId)> = HashMap::new();
        let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
        let mut found = false;
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            if v == target {
                found = true;
                break;
            }
            let preds = s.predecessors(v);
            let mut next = None;
            while *k < preds.len() {
                let w = preds[*k];
                *k += 1;
                if !s.is_alive(w) {
                    continue;
                }
                let Some(z) = self.enter_petal(w, pid) else { continue };
                if !s.is_alive(z) || z == root || parent.contains_key(&z) {
                    continue;
                }
                let usable = z == target || (z != bud && self.pf.color(z) == Some(c));
                if usable {
                    next = Some((z, w));
                    break;
                }
            }
            match next {
                Some((z, w)) => {
                    parent.insert(z, (v, w));
                    stack.push((z, 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
        if !found {
            return Err(PathFault::PetalRoute { petal: pid, color: c, root, target });
        }
        let mut hops = Vec::new();
        let mut cur = target;
        while cur != root {
            let (p, w) = parent[&cur];
            hops.push((p, w, cur));
            cur = p;
        }
        let mut out = vec![root];
        for &(p, w, z) in hops.iter().rev() {
            join(&mut out, &self.expand_hop(p, w, z)?);
        }
        Ok(out)
    }

    fn expand_chain(&self, root: VertexId, chain: &[TreeEdge]) -> Result<Vec<VertexId>, PathFault> {
        let mut out = vec![root];
        for e in chain {
            join(&mut out, &self.expand_hop(e.parent, e.via, e.child)?);
        }
        Ok(out)
    }

    /// The augmenting path behind a FreePair outcome on `bridge`, as a vertex
    /// sequence from the red free vertex to the green one.
    pub fn free_pair_vertices(&self, bridge: EdgeId, out: &DdfsOutcome) -> Result<Vec<VertexId>, PathFault> {
        let DdfsKind::FreePair { r0, g0 } = out.kind else {
            panic!("free_pair_vertices needs a FreePair outcome");
        };
        let (u, v) = self.s.graph().endpoints(bridge);
        let bp = if self.s.is_matched_edge(bridge) { Parity::Odd } else { Parity::Even };
        let mut red = self.path_to(u, bp, out.red_root)?;
        join(&mut red, &self.expand_chain(out.red_root, &out.chain_to(Color::Red, r0))?);
        let mut green = self.path_to(v, bp, out.green_root)?;
        join(&mut green, &self.expand_chain(out.green_root, &out.chain_to(Color::Green, g0))?);
        red.reverse();
        red.extend(green);
        Ok(red)
    }
}

/// Builds and validates the augmenting path for a FreePair on `bridge`.
pub fn extract_path(
    s: &LevelState<'_>,
    pf: &PetalForest,
    m: &Matching,
    bridge: EdgeId,
    out: &DdfsOutcome,
) -> Result<AlternatingPath, PathFault> {
    let vs = Extractor::new(s, pf).free_pair_vertices(bridge, out)?;
    let p = AlternatingPath::new(s.graph(), m, vs)?;
    if !is_augmenting(s.graph(), m, &p) {
        return Err(PathFault::NotAugmenting);
    }
    Ok(p)
}

/// Flips `p`, kills its vertices and then every vertex left without a live
/// predecessor. Returns all vertices killed, path first.
pub fn augment_and_cascade(s: &mut LevelState<'_>, m: &mut Matching, p: &AlternatingPath) -> Result<Vec<VertexId>, PathFault> {
    if !is_augmenting(s.graph(), m, p) {
        return Err(PathFault::NotAugmenting);
    }
    m.augment(p);
    let mut removed: Vec<VertexId> = p.vertices().iter().copied().filter(|&v| s.kill(v)).collect();
    let mut k = 0;
    while k < removed.len() {
        let x = removed[k];
        k += 1;
        for j in 0..s.successors(x).len() {
            let y = s.successors(x)[j];
            if s.is_alive(y) && s.drop_pred(y) == 0 && s.minlevel(y) > Level::ZERO {
                s.kill(y);
                removed.push(y);
            }
        }
    }
    Ok(removed)
}

/// One phase from matching `m`.
pub fn run_phase(g: &Graph, m: &Matching, opts: PhaseOptions) -> Result<PhaseResult, PhaseError> {
    run_phase_observed(g, m, opts, &mut NoObserver)
}

pub fn run_phase_observed(
    g: &Graph,
    m: &Matching,
    opts: PhaseOptions,
    obs: &mut dyn PhaseObserver,
) -> Result<PhaseResult, PhaseError> {
    let n = g.vertex_count();
    let mut s = LevelState::init_phase(g, m, opts.config)?;
    let mut pf = PetalForest::new(n);
    if opts.trace {
        pf.enable_trace();
    }
    let mut work = m.clone();
    let mut paths = Vec::new();
    let mut free_bridges = Vec::new();
    let mut lm = None;
    let cap = opts.config.search_cap(n);
    let mut levels = 0;
    let mut i = 0;
    loop {
        s.run_min(i)?;
        levels += 1;
        obs.after_min(i, &s);
        let t = 2 * i + 1;
        pf.run_max(&mut s, i, |s, pf, e, out| -> Result<(), PhaseError> {
            if lm.is_none() {
                lm = Some(t);
            }
            if opts.mode == PhaseMode::Analyze {
                free_bridges.push(e);
                return Ok(());
            }
            let p = extract_path(s, pf, &work, e, out)?;
            if p.len() != t as usize {
                return Err(PathFault::WrongLength { got: p.len(), want: t }.into());
            }
            let removed = augment_and_cascade(s, &mut work, &p)?;
            obs.on_path(&p, &removed);
            paths.push(p);
            Ok(())
        })?;
        obs.after_level(i, &s, &pf);
        if lm.is_some() || s.phase_done(i) || i >= cap {
            break;
        }
        i += 1;
    }
    obs.after_phase(&s, &pf);
    let stats = PhaseStats {
        levels,
        min_scans: s.min_scans(),
        ddfs_steps: pf.ddfs_steps(),
        ddfs_runs: pf.ddfs_runs(),
        petals: pf.petals().len(),
        paths: paths.len(),
        lm: if opts.mode == PhaseMode::Augment && paths.is_empty() { None } else { lm },
    };
    let trace = pf.take_trace();
    Ok(PhaseResult { matching: work, stats, paths, free_bridges, trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub phase: PhaseOptions,
    /// Start from a greedy maximal matching instead of the empty one.
    pub warm_start: bool,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub matching: Matching,
    pub phases: Vec<PhaseStats>,
    pub trace: Vec<String>,
}

/// Maximum matching from the empty matching.
pub fn maximum_matching(g: &Graph) -> Result<Solution, PhaseError> {
    solve(g, SolveOptions::default())
}

pub fn solve(g: &Graph, opts: SolveOptions) -> Result<Solution, PhaseError> {
    let m0 = if opts.warm_start { greedy_matching(g) } else { Matching::empty(g.vertex_count()) };
    maximum_matching_from(g, m0, opts.phase)
}

/// Repeats phases from `m0` until one finds no augmenting path.
pub fn maximum_matching_from(g: &Graph, m0: Matching, opts: PhaseOptions) -> Result<Solution, PhaseError> {
    let opts = PhaseOptions { mode: PhaseMode::Augment, ..opts };
    let mut m = m0;
    let mut phases = Vec::new();
    let mut trace = Vec::new();
    loop {
        let r = run_phase(g, &m, opts)?;
        trace.extend(r.trace);
        if r.stats.paths == 0 {
            phases.push(r.stats);
            break;
        }
        phases.push(r.stats);
        m = r.matching;
    }
    Ok(Solution { matching: m, phases, trace })
}
