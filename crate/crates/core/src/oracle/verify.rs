//! One engine-versus-oracle comparison: matching size, levels, bud* against
//! bases, blossom definitions and the structural checks.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::augment::{maximum_matching_from, run_phase_observed, PhaseObserver, PhaseOptions};
use crate::graph::{Graph, Matching, VertexId};
use crate::level::LevelState;
use crate::oracle::matching::max_matching_exhaustive;
use crate::oracle::paths::{check_structure, fmt_lv, Check, Guard, Lv, OracleError, OracleProfile};
use crate::petal::PetalForest;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Mismatch {
    #[error("matching size {got}, exhaustive maximum {want}")]
    Size { got: usize, want: usize },
    #[error("vertex {v}: engine levels {got}, oracle {want}")]
    Levels { v: VertexId, got: String, want: String },
    #[error("vertex {v} after level {level}: bud* {got}, oracle base {want:?}")]
    Base { v: VertexId, level: u32, got: VertexId, want: Option<VertexId> },
    #[error("blossom ({b}, {t}): recursive {recursive:?}, by bases {by_base:?}")]
    Blossom { b: VertexId, t: u32, recursive: BTreeSet<VertexId>, by_base: BTreeSet<VertexId> },
    #[error("{check:?} check failed: {detail}")]
    Structure { check: Check, detail: String },
    #[error("engine error: {0}")]
    Engine(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub guard: Guard,
    /// Negative control: drop one matched edge from the engine's answer.
    pub inject_fault: bool,
}

struct Watch<'p> {
    p: &'p OracleProfile,
    levels: Vec<(Lv, Lv)>,
    first: Option<Mismatch>,
}

impl PhaseObserver for Watch<'_> {
    fn after_level(&mut self, i: u32, s: &LevelState<'_>, pf: &PetalForest) {
        let t = 2 * i + 1;
        if self.first.is_some() || self.p.lm.is_some_and(|l| t >= l) {
            return;
        }
        for v in 0..s.vertex_count() {
            if self.p.tenacity(v) == Some(t) {
                let got = pf.bud_star_peek(v);
                if self.p.base[v] != Some(got) {
                    self.first = Some(Mismatch::Base { v, level: i, got, want: self.p.base[v] });
                    return;
                }
            }
        }
    }

    fn after_phase(&mut self, s: &LevelState<'_>, _pf: &PetalForest) {
        self.levels = (0..s.vertex_count()).map(|v| (s.evenlevel(v).value(), s.oddlevel(v).value())).collect();
    }
}

fn pair(l: (Lv, Lv)) -> String {
    format!("({}, {})", fmt_lv(l.0), fmt_lv(l.1))
}

/// Levels the engine must reproduce after one phase from the profile's
/// matching: every level below `l_m`, minlevels up to the final search
/// level, and no assigned level that disagrees.
fn compare_levels(p: &OracleProfile, got: &[(Lv, Lv)]) -> Result<(), Mismatch> {
    let jm = p.lm.map(|l| (l - 1) / 2);
    for (v, &(e, o)) in got.iter().enumerate() {
        let want = (p.even[v], p.odd[v]);
        let bad = || Mismatch::Levels { v, got: pair((e, o)), want: pair(want) };
        let t = p.tenacity(v);
        if p.lm.is_none() || (t.is_some() && t < p.lm) {
            if (e, o) != want {
                return Err(bad());
            }
            continue;
        }
        let got_min = [e, o].into_iter().flatten().min();
        let searched = match (p.minlevel(v), jm) {
            (Some(x), Some(j)) => x <= j + 1,
            _ => false,
        };
        if searched && got_min != p.minlevel(v) {
            return Err(bad());
        }
        if (e.is_some() && e != want.0) || (o.is_some() && o != want.1) {
            return Err(bad());
        }
    }
    Ok(())
}

pub fn verify_instance(g: &Graph, m0: &Matching, opts: VerifyOptions) -> Result<(), Mismatch> {
    let p = OracleProfile::build(g, m0, opts.guard)?;
    let report = check_structure(&p, g, m0, opts.guard)?;
    if let Some(w) = report.failures.first() {
        return Err(Mismatch::Structure { check: w.check, detail: w.detail.clone() });
    }
    for (&(b, t), bl) in &p.blossoms {
        let by_base = p.blossoms_o.get(&(b, t)).cloned().unwrap_or_default();
        if bl.members != by_base {
            return Err(Mismatch::Blossom { b, t, recursive: bl.members.clone(), by_base });
        }
    }

    let mut watch = Watch { p: &p, levels: Vec::new(), first: None };
    run_phase_observed(g, m0, PhaseOptions::default(), &mut watch).map_err(|e| Mismatch::Engine(e.to_string()))?;
    if let Some(m) = watch.first {
        return Err(m);
    }
    compare_levels(&p, &watch.levels)?;

    let sol = maximum_matching_from(g, m0.clone(), PhaseOptions::default()).map_err(|e| Mismatch::Engine(e.to_string()))?;
    let mut got = sol.matching.len();
    if opts.inject_fault && got > 0 {
        got -= 1;
    }
    let want = max_matching_exhaustive(g).map_err(|e| Mismatch::Engine(e.to_string()))?;
    if got != want {
        return Err(Mismatch::Size { got, want });
    }
    Ok(())
}
