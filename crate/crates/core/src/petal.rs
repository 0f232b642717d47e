//! MAX: bridge processing, petals, buds and the bud* closure.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ddfs::{ArcSource, Color, DdfsEngine, DdfsError, DdfsKind, DdfsOptions, DdfsOutcome, TraceEvent};
use crate::dsu::LabeledDsu;
use crate::graph::{EdgeId, VertexId};
use crate::level::LevelState;

pub type PetalId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Petal {
    pub id: PetalId,
    pub bridge_edge: EdgeId,
    /// Bridge endpoints; the first was the red side of the search.
    pub bridge: (VertexId, VertexId),
    pub bud: VertexId,
    pub members: Vec<VertexId>,
    pub tenacity: u32,
    pub red_root: VertexId,
    pub green_root: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PetalError {
    #[error("vertex {v} already has both levels when petal {petal} claims it")]
    AlreadyLeveled { v: VertexId, petal: PetalId },
    #[error("vertex {v} is already in petal {existing}")]
    AlreadyInPetal { v: VertexId, existing: PetalId },
    #[error("vertex {v} would get maxlevel {max} not above its minlevel {min}")]
    BadMaxlevel { v: VertexId, min: u32, max: u32 },
    #[error("bud {bud} of petal {petal} is not outer")]
    InnerBud { bud: VertexId, petal: PetalId },
    #[error("bridge {edge} resurfaced in bucket {t} while processing level {level}")]
    LateBridge { edge: EdgeId, t: u32, level: u32 },
    #[error(transparent)]
    Ddfs(#[from] DdfsError),
}

/// Petal bookkeeping for one phase.
pub struct PetalForest {
    petals: Vec<Petal>,
    petal_of: Vec<Option<PetalId>>,
    color: Vec<Option<Color>>,
    dsu: LabeledDsu,
    engine: DdfsEngine,
    ddfs_steps: u64,
    ddfs_runs: u64,
    trace: Option<Vec<String>>,
}

/// Predecessor arcs contracted through bud*: from `c` the heads are
/// `bud*(w)` for each live predecessor `w` whose bud* is live.
pub(crate) struct GraphArcs<'a, 'g> {
    pub s: &'a LevelState<'g>,
    pub dsu: &'a mut LabeledDsu,
}

impl ArcSource for GraphArcs<'_, '_> {
    fn layer(&self, v: VertexId) -> u32 {
        self.s.minlevel(v).get()
    }

    fn next_arc(&mut self, v: VertexId, cursor: &mut u32) -> Option<(VertexId, VertexId)> {
        let preds = self.s.predecessors(v);
        while (*cursor as usize) < preds.len() {
            let w = preds[*cursor as usize];
            *cursor += 1;
            if !self.s.is_alive(w) {
                continue;
            }
            let b = self.dsu.label(w);
            if self.s.is_alive(b) {
                return Some((b, w));
            }
        }
        None
    }
}

impl PetalForest {
    pub fn new(n: usize) -> Self {
        PetalForest {
            petals: Vec::new(),
            petal_of: vec![None; n],
            color: vec![None; n],
            dsu: LabeledDsu::new(n),
            engine: DdfsEngine::new(n),
            ddfs_steps: 0,
            ddfs_runs: 0,
            trace: None,
        }
    }

    /// Collects DDFS trace lines from now on.
    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn take_trace(&mut self) -> Vec<String> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn petals(&self) -> &[Petal] {
        &self.petals
    }

    pub fn petal(&self, id: PetalId) -> &Petal {
        &self.petals[id]
    }

    pub fn petal_of(&self, v: VertexId) -> Option<PetalId> {
        self.petal_of[v]
    }

    pub fn color(&self, v: VertexId) -> Option<Color> {
        self.color[v]
    }

    pub fn bud_star(&mut self, v: VertexId) -> VertexId {
        self.dsu.label(v)
    }

    /// bud* without path compression.
    pub fn bud_star_peek(&self, v: VertexId) -> VertexId {
        self.dsu.label_peek(v)
    }

    /// bud* by walking immediate buds, independent of the disjoint sets.
    pub fn bud_chain_top(&self, v: VertexId) -> VertexId {
        let mut cur = v;
        while let Some(p) = self.petal_of[cur] {
            cur = self.petals[p].bud;
        }
        cur
    }

    pub fn ddfs_steps(&self) -> u64 {
        self.ddfs_steps
    }

    pub fn ddfs_runs(&self) -> u64 {
        self.ddfs_runs
    }

    /// Runs DDFS between `bud*(red_end)` and `bud*(green_end)`.
    pub fn ddfs_on_graph(
        &mut self,
        s: &LevelState<'_>,
        red_end: VertexId,
        green_end: VertexId,
    ) -> Result<DdfsOutcome, DdfsError> {
        let r = self.dsu.label(red_end);
        let g = self.dsu.label(green_end);
        let n = s.vertex_count();
        let mut arcs = GraphArcs { s, dsu: &mut self.dsu };
        let out = match self.trace.as_mut() {
            Some(lines) => {
                let mut sink = |e: TraceEvent| lines.push(e.to_string());
                self.engine.run(&mut arcs, n, r, g, DdfsOptions { trace: Some(&mut sink), record_centers: false })
            }
            None => self.engine.run(&mut arcs, n, r, g, DdfsOptions::default()),
        }?;
        self.ddfs_steps += out.steps;
        self.ddfs_runs += 1;
        Ok(out)
    }

    /// MAX at search level `i`. FreePair outcomes go to `on_free`, which may
    /// kill vertices; later bridges of the bucket see the reduced graph.
    pub fn run_max<F, E>(&mut self, s: &mut LevelState<'_>, i: u32, mut on_free: F) -> Result<(), E>
    where
        F: FnMut(&mut LevelState<'_>, &mut PetalForest, EdgeId, &DdfsOutcome) -> Result<(), E>,
        E: From<PetalError>,
    {
        let t = 2 * i + 1;
        let mut k = 0;
        while k < s.bridge_bucket(t).len() {
            let e = s.bridge_bucket(t)[k];
            k += 1;
            let (u, v) = s.graph().endpoints(e);
            if !s.is_alive(u) || !s.is_alive(v) {
                continue;
            }
            let out = self.ddfs_on_graph(s, u, v).map_err(PetalError::from)?;
            match out.kind {
                DdfsKind::Bottleneck { .. } => {
                    self.create_petal(s, e, i, &out)?;
                }
                DdfsKind::FreePair { .. } => on_free(s, self, e, &out)?,
                DdfsKind::EmptySupport { .. } => {}
            }
        }
        Ok(())
    }

    /// Turns a bottleneck outcome into a petal and assigns maxlevels.
    pub fn create_petal(
        &mut self,
        s: &mut LevelState<'_>,
        bridge_edge: EdgeId,
        i: u32,
        out: &DdfsOutcome,
    ) -> Result<PetalId, PetalError> {
        let DdfsKind::Bottleneck { b, red, green } = &out.kind else {
            panic!("create_petal needs a bottleneck outcome");
        };
        let id = self.petals.len();
        let t = 2 * i + 1;
        if !s.is_outer(*b) {
            return Err(PetalError::InnerBud { bud: *b, petal: id });
        }
        let mut members = Vec::with_capacity(red.len() + green.len());
        for (set, c) in [(red, Color::Red), (green, Color::Green)] {
            for &v in set.iter() {
                if let Some(existing) = self.petal_of[v] {
                    return Err(PetalError::AlreadyInPetal { v, existing });
                }
                if s.maxlevel(v).is_finite() {
                    return Err(PetalError::AlreadyLeveled { v, petal: id });
                }
                let min = s.minlevel(v).get();
                if t <= 2 * min {
                    return Err(PetalError::BadMaxlevel { v, min, max: t.saturating_sub(min) });
                }
                s.assign_maxlevel(v, t - min);
                self.petal_of[v] = Some(id);
                self.color[v] = Some(c);
                self.dsu.absorb(v, *b);
                members.push(v);
            }
        }
        for &v in &members {
            for e in s.resolve_pending(v) {
                let te = s.edge_tenacity(e).get();
                if te < t {
                    return Err(PetalError::LateBridge { edge: e, t: te, level: i });
                }
            }
        }
        members.sort_unstable();
        self.petals.push(Petal {
            id,
            bridge_edge,
            bridge: s.graph().endpoints(bridge_edge),
            bud: *b,
            members,
            tenacity: t,
            red_root: out.red_root,
            green_root: out.green_root,
        });
        Ok(id)
    }

    /// `petal <id> bud <b> bridge <u> <v> members ...` in creation order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for p in &self.petals {
            let _ = write!(out, "petal {} bud {} bridge {} {} members", p.id, p.bud, p.bridge.0, p.bridge.1);
            for &v in &p.members {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }
}
