//! Ground truth by enumerating every simple alternating path.
//!
//! Levels are `Option<u32>` with `None` for infinity; nothing here touches
//! the search engine.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, Matching, VertexId};

pub type Lv = Option<u32>;

fn add(a: Lv, b: Lv) -> Lv {
    Some(a? + b?)
}

/// `a > b` with `None` as infinity.
fn gt(a: Lv, b: Lv) -> bool {
    match (a, b) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x > y,
    }
}

fn ge(a: Lv, b: Lv) -> bool {
    a == b || gt(a, b)
}

pub fn fmt_lv(l: Lv) -> String {
    l.map_or_else(|| "inf".to_owned(), |x| x.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_vertices: usize,
    pub path_budget: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_vertices: 14, path_budget: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} vertices exceeds the oracle bound of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("more than {budget} alternating paths")]
    PathBudget { budget: u64 },
    #[error("vertex {v}: minimum paths disagree on the base (candidates {candidates:?})")]
    BaseConflict { v: VertexId, candidates: Vec<VertexId> },
}

struct Walker<'a, F: FnMut(&[VertexId])> {
    g: &'a Graph,
    m: &'a Matching,
    budget: u64,
    count: u64,
    on: Vec<bool>,
    path: Vec<VertexId>,
    visit: F,
}

impl<F: FnMut(&[VertexId])> Walker<'_, F> {
    fn walk(&mut self) -> Result<(), OracleError> {
        self.count += 1;
        if self.count > self.budget {
            return Err(OracleError::PathBudget { budget: self.budget });
        }
        (self.visit)(&self.path);
        let v = *self.path.last().unwrap();
        let want_matched = (self.path.len() - 1) % 2 == 1;
        let mate = self.m.partner(v);
        for &(w, _) in self.g.neighbors(v) {
            if self.on[w] || (mate == Some(w)) != want_matched {
                continue;
            }
            self.on[w] = true;
            self.path.push(w);
            self.walk()?;
            self.path.pop();
            self.on[w] = false;
        }
        Ok(())
    }
}

/// Visits every simple alternating path that starts at one of `starts` with
/// an unmatched edge, including the one-vertex paths.
pub fn for_each_path<F: FnMut(&[VertexId])>(
    g: &Graph,
    m: &Matching,
    starts: &[VertexId],
    guard: Guard,
    visit: F,
) -> Result<(), OracleError> {
    let n = g.vertex_count();
    if n > guard.max_vertices {
        return Err(OracleError::TooLarge { n, max: guard.max_vertices });
    }
    let mut w = Walker { g, m, budget: guard.path_budget, count: 0, on: vec![false; n], path: Vec::new(), visit };
    for &s in starts {
        w.on[s] = true;
        w.path.push(s);
        w.walk()?;
        w.path.pop();
        w.on[s] = false;
    }
    Ok(())
}

fn free_vertices(g: &Graph, m: &Matching) -> Vec<VertexId> {
    (0..g.vertex_count()).filter(|&v| m.is_free(v)).collect()
}

/// Minimum even and odd path lengths from the given starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Levels {
    pub even: Vec<Lv>,
    pub odd: Vec<Lv>,
}

impl Levels {
    pub fn level(&self, v: VertexId, len: usize) -> Lv {
        if len.is_multiple_of(2) {
            self.even[v]
        } else {
            self.odd[v]
        }
    }
}

fn levels_from(g: &Graph, m: &Matching, starts: &[VertexId], guard: Guard) -> Result<Levels, OracleError> {
    let n = g.vertex_count();
    let mut even: Vec<Lv> = vec![None; n];
    let mut odd: Vec<Lv> = vec![None; n];
    for_each_path(g, m, starts, guard, |p| {
        let v = *p.last().unwrap();
        let l = (p.len() - 1) as u32;
        let slot = if l.is_multiple_of(2) { &mut even[v] } else { &mut odd[v] };
        if slot.is_none_or(|x| l < x) {
            *slot = Some(l);
        }
    })?;
    Ok(Levels { even, odd })
}

/// Exact evenlevel and oddlevel of every vertex.
pub fn enumerate_levels(g: &Graph, m: &Matching, guard: Guard) -> Result<Levels, OracleError> {
    levels_from(g, m, &free_vertices(g, m), guard)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blossom {
    pub members: BTreeSet<VertexId>,
    pub depth: u32,
}

#[derive(Debug, Clone)]
pub struct OracleProfile {
    pub even: Vec<Lv>,
    pub odd: Vec<Lv>,
    pub lm: Lv,
    pub edge_tenacity: Vec<Lv>,
    pub prop: Vec<bool>,
    /// Support of every bridge with tenacity at most `lm`.
    pub supports: BTreeMap<EdgeId, BTreeSet<VertexId>>,
    pub base: Vec<Option<VertexId>>,
    /// `base^1(v), base^2(v), ...` while defined.
    pub chain: Vec<Vec<VertexId>>,
    /// Blossoms by the recursive definition, keyed by `(base, tenacity)`.
    pub blossoms: BTreeMap<(VertexId, u32), Blossom>,
    /// Blossoms by the `base_{>t}` definition.
    pub blossoms_o: BTreeMap<(VertexId, u32), BTreeSet<VertexId>>,
}

impl OracleProfile {
    pub fn build(g: &Graph, m: &Matching, guard: Guard) -> Result<Self, OracleError> {
        let lv = enumerate_levels(g, m, guard)?;
        let mut p = OracleProfile {
            lm: free_vertices(g, m).iter().filter_map(|&f| lv.odd[f]).min(),
            even: lv.even,
            odd: lv.odd,
            edge_tenacity: Vec::new(),
            prop: Vec::new(),
            supports: BTreeMap::new(),
            base: Vec::new(),
            chain: Vec::new(),
            blossoms: BTreeMap::new(),
            blossoms_o: BTreeMap::new(),
        };
        p.classify_edges(g, m, guard)?;
        p.compute_bases(g, m, guard)?;
        p.build_blossoms();
        Ok(p)
    }

    pub fn vertex_count(&self) -> usize {
        self.even.len()
    }

    pub fn tenacity(&self, v: VertexId) -> Lv {
        add(self.even[v], self.odd[v])
    }

    pub fn level(&self, v: VertexId, len: usize) -> Lv {
        if len.is_multiple_of(2) {
            self.even[v]
        } else {
            self.odd[v]
        }
    }

    pub fn minlevel(&self, v: VertexId) -> Lv {
        match (self.even[v], self.odd[v]) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn maxlevel(&self, v: VertexId) -> Lv {
        match (self.even[v], self.odd[v]) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        }
    }

    pub fn is_outer(&self, v: VertexId) -> bool {
        gt(self.odd[v], self.even[v])
    }

    /// Tenacity strictly below `lm`.
    fn below_lm(&self, t: Lv) -> bool {
        t.is_some() && gt(self.lm, t)
    }

    /// Edge tenacities, props, and supports. A prop is the last edge of some
    /// minlevel path of one of its endpoints.
    pub fn classify_edges(&mut self, g: &Graph, m: &Matching, guard: Guard) -> Result<(), OracleError> {
        self.edge_tenacity = (0..g.edge_count())
            .map(|e| {
                let (u, v) = g.endpoints(e);
                if m.is_matched_edge(u, v) {
                    add(add(self.odd[u], self.odd[v]), Some(1))
                } else {
                    add(add(self.even[u], self.even[v]), Some(1))
                }
            })
            .collect();
        let mut prop = vec![false; g.edge_count()];
        let mut maxpaths: Vec<Vec<VertexId>> = Vec::new();
        let me = &*self;
        for_each_path(g, m, &free_vertices(g, m), guard, |p| {
            let l = p.len() - 1;
            let v = p[l];
            if l > 0 && me.minlevel(v) == Some(l as u32) {
                prop[g.edge_between(p[l - 1], v).unwrap()] = true;
            }
            let t = me.tenacity(v);
            if me.maxlevel(v) == Some(l as u32) && ge(me.lm, t) {
                maxpaths.push(p.to_vec());
            }
        })?;
        self.prop = prop;
        self.supports.clear();
        for e in 0..g.edge_count() {
            if !self.prop[e] && self.edge_tenacity[e].is_some() && ge(self.lm, self.edge_tenacity[e]) {
                self.supports.insert(e, BTreeSet::new());
            }
        }
        for p in maxpaths {
            let v = *p.last().unwrap();
            let t = self.tenacity(v);
            for w in p.windows(2) {
                let e = g.edge_between(w[0], w[1]).unwrap();
                if !self.prop[e] && self.edge_tenacity[e] == t {
                    self.supports.entry(e).or_default().insert(v);
                }
            }
        }
        Ok(())
    }

    /// F(p, v) over every minimum path of `v` with tenacity below `lm`; each
    /// set must be a singleton.
    pub fn compute_bases(&mut self, g: &Graph, m: &Matching, guard: Guard) -> Result<(), OracleError> {
        let sets = base_candidates(self, g, m, guard)?;
        let n = self.vertex_count();
        self.base = vec![None; n];
        for (v, set) in sets.into_iter().enumerate() {
            if set.len() > 1 {
                return Err(OracleError::BaseConflict { v, candidates: set.into_iter().collect() });
            }
            self.base[v] = set.into_iter().next();
        }
        self.chain = (0..n)
            .map(|v| {
                let mut out = Vec::new();
                let mut cur = v;
                while self.below_lm(self.tenacity(cur)) {
                    let Some(b) = self.base[cur] else { break };
                    out.push(b);
                    cur = b;
                }
                out
            })
            .collect();
        Ok(())
    }

    /// `base_{>t}(v)`: the first iterated base of tenacity above `t`.
    pub fn base_gt(&self, v: VertexId, t: u32) -> Option<VertexId> {
        self.chain[v].iter().copied().find(|&b| gt(self.tenacity(b), Some(t)))
    }

    /// True when some iterated base of `v` is a free vertex.
    pub fn all_bases_defined(&self, v: VertexId) -> bool {
        self.chain[v].last().is_some_and(|&b| self.even[b] == Some(0))
    }

    fn blossom_rec(&self, b: VertexId, t: u32, memo: &mut HashMap<(VertexId, u32), Blossom>) -> Blossom {
        if t <= 1 {
            return Blossom { members: BTreeSet::new(), depth: 0 };
        }
        if let Some(x) = memo.get(&(b, t)) {
            return x.clone();
        }
        let s: Vec<VertexId> = (0..self.vertex_count())
            .filter(|&v| self.tenacity(v) == Some(t) && self.base[v] == Some(b))
            .collect();
        let mut members: BTreeSet<VertexId> = s.iter().copied().collect();
        let mut depth = 0;
        for &v in s.iter().chain(std::iter::once(&b)) {
            if self.is_outer(v) {
                let inner = self.blossom_rec(v, t - 2, memo);
                depth = depth.max(inner.depth);
                members.extend(inner.members);
            }
        }
        let depth = if s.is_empty() { self.blossom_rec(b, t - 2, memo).depth } else { 1 + depth };
        let out = Blossom { members, depth };
        memo.insert((b, t), out.clone());
        out
    }

    /// Both blossom families over every admissible `(b, t)`.
    pub fn build_blossoms(&mut self) {
        let n = self.vertex_count();
        let top = (0..n).filter_map(|v| self.tenacity(v)).max().unwrap_or(0);
        let mut memo = HashMap::new();
        self.blossoms.clear();
        self.blossoms_o.clear();
        for b in 0..n {
            if !self.is_outer(b) {
                continue;
            }
            let mut t = 3;
            while t <= top && gt(self.lm, Some(t)) && gt(self.tenacity(b), Some(t)) {
                let rec = self.blossom_rec(b, t, &mut memo);
                let o: BTreeSet<VertexId> = (0..n)
                    .filter(|&v| ge(Some(t), self.tenacity(v)) && self.base_gt(v, t) == Some(b))
                    .collect();
                self.blossoms.insert((b, t), rec);
                self.blossoms_o.insert((b, t), o);
                t += 2;
            }
        }
    }

    /// Line-oriented dump; the level lines match the engine's format.
    pub fn dump(&self, g: &Graph) -> String {
        let mut out = String::new();
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "{v} {} {} {}", fmt_lv(self.even[v]), fmt_lv(self.odd[v]), fmt_lv(self.tenacity(v)));
        }
        let mut by_t: BTreeMap<u32, Vec<EdgeId>> = BTreeMap::new();
        for e in 0..g.edge_count() {
            if let (false, Some(t)) = (self.prop[e], self.edge_tenacity[e]) {
                by_t.entry(t).or_default().push(e);
            }
        }
        for (t, es) in by_t {
            let _ = write!(out, "bucket {t}");
            for e in es {
                let (u, v) = g.endpoints(e);
                let _ = write!(out, " {u}-{v}");
            }
            out.push('\n');
        }
        for v in 0..self.vertex_count() {
            if let Some(b) = self.base[v] {
                let _ = writeln!(out, "base {v} {b}");
            }
        }
        for (&(b, t), bl) in &self.blossoms {
            if bl.members.is_empty() {
                continue;
            }
            let _ = write!(out, "blossom {b} {t} depth {} members", bl.depth);
            for v in &bl.members {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }
}

/// F(p, v) candidate sets for every vertex with tenacity below `lm`.
fn base_candidates(
    p: &OracleProfile,
    g: &Graph,
    m: &Matching,
    guard: Guard,
) -> Result<Vec<BTreeSet<VertexId>>, OracleError> {
    let mut sets = vec![BTreeSet::new(); p.vertex_count()];
    for_each_path(g, m, &free_vertices(g, m), guard, |path| {
        let l = path.len() - 1;
        let v = path[l];
        let t = p.tenacity(v);
        if !p.below_lm(t) || p.level(v, l) != Some(l as u32) {
            return;
        }
        if let Some(&f) = path.iter().rev().find(|&&u| gt(p.tenacity(u), t)) {
            sets[v].insert(f);
        }
    })?;
    Ok(sets)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Honesty,
    BaseSingleton,
    Laminar,
    Confinement,
    PathBases,
    BasesOnPath,
    UniqueBridge,
    Equivalence,
    TMatched,
    Concat,
    UnBridge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub check: Check,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct StructureReport {
    pub checked: BTreeMap<Check, u64>,
    pub failures: Vec<Witness>,
    pub failure_count: u64,
    /// Instances skipped because an iterated base chain stops early.
    pub skipped: u64,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn failed(&self, c: Check) -> bool {
        self.failures.iter().any(|w| w.check == c)
    }

    fn tick(&mut self, c: Check) {
        *self.checked.entry(c).or_default() += 1;
    }

    fn fail(&mut self, check: Check, detail: impl FnOnce() -> String) {
        self.failure_count += 1;
        if self.failures.len() < 32 {
            self.failures.push(Witness { check, detail: detail() });
        }
    }

    fn expect(&mut self, c: Check, ok: bool, detail: impl FnOnce() -> String) {
        self.tick(c);
        if !ok {
            self.fail(c, detail);
        }
    }
}

/// Mechanical checks of the structural theorems against `p`, which may
/// have been altered after [`OracleProfile::build`].
pub fn check_structure(p: &OracleProfile, g: &Graph, m: &Matching, guard: Guard) -> Result<StructureReport, OracleError> {
    let mut r = StructureReport::default();
    let n = p.vertex_count();

    // Base singleton, recomputed from the given levels.
    for (v, set) in base_candidates(p, g, m, guard)?.into_iter().enumerate() {
        if !p.below_lm(p.tenacity(v)) {
            continue;
        }
        let ok = set.len() == 1 && p.base[v] == set.iter().next().copied();
        r.expect(Check::BaseSingleton, ok, || format!("v={v} candidates={set:?} recorded={:?}", p.base[v]));
    }

    // Levels measured from every base, for concat and confinement.
    let bases: BTreeSet<VertexId> = p.base.iter().flatten().copied().collect();
    let mut from_base: HashMap<VertexId, Levels> = HashMap::new();
    for &b in &bases {
        from_base.insert(b, levels_from(g, m, &[b], guard)?);
    }

    let mut pending: Vec<(Check, bool, String)> = Vec::new();
    let mut skipped = 0u64;
    for_each_path(g, m, &free_vertices(g, m), guard, |path| {
        let l = path.len() - 1;
        let v = path[l];
        let tv = p.tenacity(v);
        let is_min = p.level(v, l) == Some(l as u32);

        if is_min && tv.is_some() {
            for (k, &u) in path.iter().enumerate() {
                let tu = p.tenacity(u);
                if !ge(tu, tv) {
                    continue;
                }
                let mut ok = p.level(u, k) == Some(k as u32);
                if gt(tu, tv) {
                    ok &= p.minlevel(u) == Some(k as u32);
                }
                pending.push((Check::Honesty, ok, format!("v={v} u={u} at {k} on {path:?}")));
            }
        }

        if is_min && p.below_lm(tv) {
            if p.all_bases_defined(v) {
                for &u in path {
                    if !p.all_bases_defined(u) {
                        skipped += 1;
                        continue;
                    }
                    let ok = p.chain[u].iter().all(|b| path.contains(b));
                    pending.push((Check::BasesOnPath, ok, format!("u={u} chain={:?} path={path:?}", p.chain[u])));
                }
            }
            if let Some(b) = p.base[v] {
                let ok = match path.iter().position(|&x| x == b) {
                    Some(k) => {
                        let fb = &from_base[&b];
                        p.even[b] == Some(k as u32) && fb.level(v, l - k) == Some((l - k) as u32)
                    }
                    None => false,
                };
                pending.push((Check::Concat, ok, format!("v={v} base={b} path={path:?}")));
            }
        }

        if p.maxlevel(v) == Some(l as u32) && ge(p.lm, tv) {
            let bridges = path
                .windows(2)
                .filter(|w| {
                    let e = g.edge_between(w[0], w[1]).unwrap();
                    !p.prop[e] && p.edge_tenacity[e] == tv
                })
                .count();
            pending.push((Check::UniqueBridge, bridges == 1, format!("v={v} bridges={bridges} path={path:?}")));
        }
    })?;

    // Confinement and claim (4) of the path theorem, from each base.
    for &b in &bases {
        let fb = &from_base[&b];
        for_each_path(g, m, &[b], guard, |q| {
            let l = q.len() - 1;
            let v = q[l];
            let tv = p.tenacity(v);
            if l == 0 || p.base[v] != Some(b) || !p.below_lm(tv) || fb.level(v, l) != Some(l as u32) {
                return;
            }
            let t = tv.unwrap();
            let blossom = p.blossoms.get(&(b, t));
            let ok = q.iter().all(|&u| u == b || blossom.is_some_and(|bl| bl.members.contains(&u)));
            pending.push((Check::Confinement, ok, format!("v={v} b={b} t={t} path={q:?}")));
            for &u in &q[1..] {
                let Some(stop) = p.chain[u].iter().position(|&x| x == b) else {
                    skipped += 1;
                    continue;
                };
                let ok = p.chain[u][..=stop].iter().all(|x| q.contains(x));
                pending.push((Check::PathBases, ok, format!("u={u} chain={:?} path={q:?}", p.chain[u])));
            }
        })?;
    }
    for (c, ok, detail) in pending {
        r.expect(c, ok, || detail);
    }
    r.skipped = skipped;

    let nonempty: Vec<(&(VertexId, u32), &Blossom)> =
        p.blossoms.iter().filter(|(_, b)| !b.members.is_empty()).collect();
    for (i, (ka, a)) in nonempty.iter().enumerate() {
        for (kb, b) in &nonempty[i + 1..] {
            let ok = a.members.is_disjoint(&b.members)
                || a.members.is_subset(&b.members)
                || b.members.is_subset(&a.members);
            r.expect(Check::Laminar, ok, || format!("{ka:?} {:?} vs {kb:?} {:?}", a.members, b.members));
        }
    }
    for (k, bl) in &p.blossoms {
        let o = p.blossoms_o.get(k);
        r.expect(Check::Equivalence, o == Some(&bl.members), || format!("{k:?}: {:?} vs {o:?}", bl.members));
    }

    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        let te = p.edge_tenacity[e];
        if m.is_matched_edge(u, v) {
            let ok = p.tenacity(u) == te && p.tenacity(v) == te;
            r.expect(Check::TMatched, ok, || format!("edge {u}-{v}"));
        } else if !p.prop[e] && te.is_some() && ge(p.lm, te) {
            let ok = ge(te, p.tenacity(u)) && ge(te, p.tenacity(v));
            r.expect(Check::UnBridge, ok, || format!("edge {u}-{v}"));
        }
    }
    debug_assert!(n == g.vertex_count());
    Ok(r)
}
