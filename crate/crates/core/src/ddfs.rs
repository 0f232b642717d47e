//! Double depth-first search.
//!
//! Two DFSs, red and green, descend a layered DAG from their roots. The one
//! whose center of activity sits higher moves; on a tie red moves. When one
//! lands on the other's center they arbitrate who keeps the vertex, and if
//! neither can get around it that vertex is the highest bottleneck.
//!
//! The engine is generic over an [`ArcSource`], so the same code runs on an
//! explicit [`LayeredGraph`] and on the predecessor structure of a phase.

use std::fmt;

use thiserror::Error;

use crate::graph::VertexId;


const NONE: u32 = u32::MAX;

/// Successor access for the engine.
pub trait ArcSource {
    fn layer(&self, v: VertexId) -> u32;
    /// Returns the next usable arc out of `v` at or after `*cursor` as
    /// `(head, via)` and advances the cursor past it.
    fn next_arc(&mut self, v: VertexId, cursor: &mut u32) -> Option<(VertexId, VertexId)>;
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Color {
    Red,
    Green,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Green,
            Color::Green => Color::Red,
        }
    }

    fn idx(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Green => "green",
        })
    }
}

/// `child` was reached from `parent` through the arc recorded as `via`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TreeEdge {
    pub child: VertexId,
    pub parent: VertexId,
    pub via: VertexId,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DdfsKind {
    /// `b` is excluded from both color sets; both trees hold an edge into it.
    Bottleneck { b: VertexId, red: Vec<VertexId>, green: Vec<VertexId> },
    FreePair { r0: VertexId, g0: VertexId },
    /// Both roots coincide.
    EmptySupport { b: VertexId },
}

#[derive(Clone, Debug)]
pub struct DdfsOutcome {
    pub kind: DdfsKind,
    pub red_root: VertexId,
    pub green_root: VertexId,
    pub red_tree: Vec<TreeEdge>,
    pub green_tree: Vec<TreeEdge>,
    /// Arc examinations.
    pub steps: u64,
    /// `(red center layer, green center layer)` before each main-loop step,
    /// filled only when requested.
    pub center_layers: Vec<(u32, u32)>,
}

impl DdfsOutcome {
    pub fn tree(&self, c: Color) -> &[TreeEdge] {
        match c {
            Color::Red => &self.red_tree,
            Color::Green => &self.green_tree,
        }
    }

    /// Hops from the root of color `c` down to `x`, as tree edges in
    /// descending order. Empty when `x` is the root.
    pub fn chain_to(&self, c: Color, x: VertexId) -> Vec<TreeEdge> {
        let tree = self.tree(c);
        let by_child: std::collections::HashMap<VertexId, TreeEdge> =
            tree.iter().map(|e| (e.child, *e)).collect();
        let mut out = Vec::new();
        let mut cur = x;
        while let Some(e) = by_child.get(&cur) {
            out.push(*e);
            cur = e.parent;
            assert!(out.len() <= tree.len(), "cycle in search tree");
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TraceKind {
    Advance,
    Retreat,
    Meet,
    Bottleneck,
    FreePair,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TraceEvent {
    pub kind: TraceKind,
    pub color: Color,
    pub vertex: VertexId,
    pub layer: u32,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            TraceKind::Advance => "advance",
            TraceKind::Retreat => "retreat",
            TraceKind::Meet => "meet",
            TraceKind::Bottleneck => "bottleneck",
            TraceKind::FreePair => "freepair",
        };
        write!(f, "{kind} {} {} {}", self.color, self.vertex, self.layer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DdfsError {
    #[error("{color} search exhausted its stack at step {steps} without meeting")]
    Stuck { color: Color, steps: u64 },
}

#[derive(Default)]
pub struct DdfsOptions<'t> {
    pub trace: Option<&'t mut dyn FnMut(TraceEvent)>,
    pub record_centers: bool,
}

/// Reusable scratch space; per-vertex state is invalidated by bumping an
/// epoch instead of clearing arrays.
#[derive(Debug, Default)]
pub struct DdfsEngine {
    epoch: u32,
    stamp: Vec<u32>,
    color: Vec<Color>,
    cursor: Vec<u32>,
    parent: Vec<(u32, u32)>,
    visited: Vec<VertexId>,
    stacks: [Vec<VertexId>; 2],
    bottleneck_in: Option<(VertexId, (u32, u32), (u32, u32))>,
}

struct Run<'e, 's, 't, S: ArcSource> {
    e: &'e mut DdfsEngine,
    src: &'s mut S,
    steps: u64,
    trace: Option<&'t mut dyn FnMut(TraceEvent)>,
}

impl DdfsEngine {
    pub fn new(n: usize) -> Self {
        let mut e = DdfsEngine::default();
        e.ensure(n);
        e
    }

    fn ensure(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.color.resize(n, Color::Red);
            self.cursor.resize(n, 0);
            self.parent.resize(n, (NONE, NONE));
        }
    }

    fn begin(&mut self, n: usize) {
        self.ensure(n);
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.visited.clear();
        self.bottleneck_in = None;
        self.stacks[0].clear();
        self.stacks[1].clear();
    }

    fn visited(&self, v: VertexId) -> bool {
        self.stamp[v] == self.epoch
    }

    fn visit(&mut self, v: VertexId, c: Color, parent: (u32, u32)) {
        self.stamp[v] = self.epoch;
        self.color[v] = c;
        self.cursor[v] = 0;
        self.parent[v] = parent;
        self.visited.push(v);
    }

    /// Runs DDFS from roots `r` (red) and `g` (green) over a graph with `n`
    /// vertices.
    pub fn run<S: ArcSource>(
        &mut self,
        src: &mut S,
        n: usize,
        r: VertexId,
        g: VertexId,
        opts: DdfsOptions<'_>,
    ) -> Result<DdfsOutcome, DdfsError> {
        let mut outcome = DdfsOutcome {
            kind: DdfsKind::EmptySupport { b: r },
            red_root: r,
            green_root: g,
            red_tree: Vec::new(),
            green_tree: Vec::new(),
            steps: 0,
            center_layers: Vec::new(),
        };
        if r == g {
            return Ok(outcome);
        }
        self.begin(n);
        self.visit(r, Color::Red, (NONE, NONE));
        self.visit(g, Color::Green, (NONE, NONE));
        self.stacks[0].push(r);
        self.stacks[1].push(g);
        let mut run = Run { e: self, src, steps: 0, trace: opts.trace };
        let result = run.main_loop(if opts.record_centers { Some(&mut outcome.center_layers) } else { None });
        let steps = run.steps;
        let kind = result?;
        outcome.steps = steps;
        self.collect_trees(&kind, &mut outcome);
        outcome.kind = kind;
        Ok(outcome)
    }

    fn collect_trees(&self, kind: &DdfsKind, out: &mut DdfsOutcome) {
        let b = match kind {
            DdfsKind::Bottleneck { b, .. } => Some(*b),
            _ => None,
        };
        for &x in &self.visited {
            if Some(x) == b {
                continue;
            }
            let (p, via) = self.parent[x];
            if p == NONE {
                continue;
            }
            let edge = TreeEdge { child: x, parent: p as usize, via: via as usize };
            match self.color[x] {
                Color::Red => out.red_tree.push(edge),
                Color::Green => out.green_tree.push(edge),
            }
        }
        if let Some((b, red_in, green_in)) = self.bottleneck_in {
            for ((p, via), tree) in [(red_in, &mut out.red_tree), (green_in, &mut out.green_tree)] {
                if p != NONE {
                    tree.push(TreeEdge { child: b, parent: p as usize, via: via as usize });
                }
            }
        }
    }
}

impl<'e, 's, 't, S: ArcSource> Run<'e, 's, 't, S> {
    fn emit(&mut self, kind: TraceKind, color: Color, vertex: VertexId) {
        if let Some(t) = self.trace.as_mut() {
            let layer = self.src.layer(vertex);
            t(TraceEvent { kind, color, vertex, layer });
        }
    }

    fn top(&self, c: Color) -> Option<VertexId> {
        self.e.stacks[c.idx()].last().copied()
    }

    fn arc(&mut self, v: VertexId) -> Option<(VertexId, VertexId)> {
        let mut cur = self.e.cursor[v];
        let a = self.src.next_arc(v, &mut cur);
        self.e.cursor[v] = cur;
        if a.is_some() {
            self.steps += 1;
        }
        a
    }

    fn push(&mut self, v: VertexId, c: Color, parent: (u32, u32)) {
        self.e.visit(v, c, parent);
        self.e.stacks[c.idx()].push(v);
        self.emit(TraceKind::Advance, c, v);
    }

    fn pop(&mut self, c: Color) -> Option<VertexId> {
        let v = self.e.stacks[c.idx()].pop();
        if let Some(v) = v {
            self.emit(TraceKind::Retreat, c, v);
        }
        v
    }

    fn main_loop(&mut self, mut centers: Option<&mut Vec<(u32, u32)>>) -> Result<DdfsKind, DdfsError> {
        loop {
            let cr = self.top(Color::Red).expect("red stack non-empty");
            let cg = self.top(Color::Green).expect("green stack non-empty");
            let (lr, lg) = (self.src.layer(cr), self.src.layer(cg));
            if let Some(c) = centers.as_mut() {
                c.push((lr, lg));
            }
            if lr == 0 && lg == 0 {
                self.emit(TraceKind::FreePair, Color::Red, cr);
                self.emit(TraceKind::FreePair, Color::Green, cg);
                return Ok(DdfsKind::FreePair { r0: cr, g0: cg });
            }
            let mover = if lr >= lg { Color::Red } else { Color::Green };
            let c = if mover == Color::Red { cr } else { cg };
            match self.arc(c) {
                Some((t, via)) => {
                    let hop = (c as u32, via as u32);
                    if !self.e.visited(t) {
                        self.push(t, mover, hop);
                    } else if self.e.color[t] == mover.other() && self.top(mover.other()) == Some(t) {
                        if let Some(kind) = self.meet(t, mover, hop) {
                            return Ok(kind);
                        }
                    }
                }
                None => {
                    self.pop(mover);
                    if self.top(mover).is_none() {
                        return Err(DdfsError::Stuck { color: mover, steps: self.steps });
                    }
                }
            }
        }
    }

    /// Continues the DFS of color `c` until it pushes a new vertex at layer
    /// `<= bound` (true) or its stack runs dry (false).
    fn seek(&mut self, c: Color, bound: u32) -> bool {
        while let Some(x) = self.top(c) {
            match self.arc(x) {
                Some((t, via)) => {
                    if !self.e.visited(t) {
                        self.push(t, c, (x as u32, via as u32));
                        if self.src.layer(t) <= bound {
                            return true;
                        }
                    }
                }
                None => {
                    self.pop(c);
                }
            }
        }
        false
    }

    /// `lander` reached `v`, the other color's center, through `hop`.
    fn meet(&mut self, v: VertexId, lander: Color, hop: (u32, u32)) -> Option<DdfsKind> {
        let owner = lander.other();
        self.emit(TraceKind::Meet, lander, v);
        let lv = self.src.layer(v);
        let owner_parent = self.e.parent[v];

        if owner == Color::Green {
            self.e.stacks[Color::Green.idx()].pop();
        }
        if self.seek(Color::Green, lv) {
            if owner == Color::Green {
                self.e.color[v] = Color::Red;
                self.e.parent[v] = hop;
                self.e.stacks[Color::Red.idx()].push(v);
                self.emit(TraceKind::Advance, Color::Red, v);
            }
            return None;
        }

        if owner == Color::Red {
            self.e.stacks[Color::Red.idx()].pop();
        }
        if self.seek(Color::Red, lv) {
            let green_parent = if owner == Color::Green { owner_parent } else { hop };
            self.e.color[v] = Color::Green;
            self.e.parent[v] = green_parent;
            self.e.stacks[Color::Green.idx()].push(v);
            self.emit(TraceKind::Advance, Color::Green, v);
            return None;
        }

        let (red_parent, green_parent) =
            if owner == Color::Red { (owner_parent, hop) } else { (hop, owner_parent) };
        self.emit(TraceKind::Bottleneck, Color::Red, v);
        let mut red = Vec::new();
        let mut green = Vec::new();
        for &x in &self.e.visited {
            if x == v {
                continue;
            }
            match self.e.color[x] {
                Color::Red => red.push(x),
                Color::Green => green.push(x),
            }
        }
        self.e.bottleneck_in = Some((v, red_parent, green_parent));
        Some(DdfsKind::Bottleneck { b: v, red, green })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayeredError {
    #[error("arc {from} -> {to} does not descend (layers {from_layer} -> {to_layer})")]
    NotDescending { from: VertexId, to: VertexId, from_layer: u32, to_layer: u32 },
    #[error("vertex {v} cannot reach layer 0")]
    Stranded { v: VertexId },
    #[error("root {v} is at layer {layer}, expected the top layer {top}")]
    RootNotOnTop { v: VertexId, layer: u32, top: u32 },
    #[error("vertex {v} out of range")]
    OutOfRange { v: VertexId },
    #[error("the two roots coincide")]
    SameRoot,
}

/// A DAG whose arcs strictly descend through layers `0..=h`, with the red
/// and green roots on layer `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    layer: Vec<u32>,
    arcs: Vec<Vec<VertexId>>,
    red_root: VertexId,
    green_root: VertexId,
}

impl LayeredGraph {
    pub fn new(
        layer: Vec<u32>,
        arcs: &[(VertexId, VertexId)],
        red_root: VertexId,
        green_root: VertexId,
    ) -> Result<Self, LayeredError> {
        let n = layer.len();
        for v in [red_root, green_root] {
            if v >= n {
                return Err(LayeredError::OutOfRange { v });
            }
        }
        if red_root == green_root {
            return Err(LayeredError::SameRoot);
        }
        let mut out = vec![Vec::new(); n];
        for &(a, b) in arcs {
            if a >= n || b >= n {
                return Err(LayeredError::OutOfRange { v: a.max(b) });
            }
            if layer[b] >= layer[a] {
                return Err(LayeredError::NotDescending {
                    from: a,
                    to: b,
                    from_layer: layer[a],
                    to_layer: layer[b],
                });
            }
            out[a].push(b);
        }
        let top = layer.iter().copied().max().unwrap_or(0);
        for v in [red_root, green_root] {
            if layer[v] != top {
                return Err(LayeredError::RootNotOnTop { v, layer: layer[v], top });
            }
        }
        let mut order: Vec<VertexId> = (0..n).collect();
        order.sort_by_key(|&v| layer[v]);
        let mut grounded = vec![false; n];
        for &v in &order {
            grounded[v] = layer[v] == 0 || out[v].iter().any(|&w| grounded[w]);
            if !grounded[v] {
                return Err(LayeredError::Stranded { v });
            }
        }
        Ok(LayeredGraph { layer, arcs: out, red_root, green_root })
    }

    pub fn vertex_count(&self) -> usize {
        self.layer.len()
    }

    pub fn layer(&self, v: VertexId) -> u32 {
        self.layer[v]
    }

    pub fn arcs(&self, v: VertexId) -> &[VertexId] {
        &self.arcs[v]
    }

    pub fn roots(&self) -> (VertexId, VertexId) {
        (self.red_root, self.green_root)
    }

    pub fn height(&self) -> u32 {
        self.layer[self.red_root]
    }
}

struct LayeredArcs<'a>(&'a LayeredGraph);

impl ArcSource for LayeredArcs<'_> {
    fn layer(&self, v: VertexId) -> u32 {
        self.0.layer[v]
    }

    fn next_arc(&mut self, v: VertexId, cursor: &mut u32) -> Option<(VertexId, VertexId)> {
        let w = *self.0.arcs[v].get(*cursor as usize)?;
        *cursor += 1;
        Some((w, w))
    }
}

/// DDFS over an explicit layered graph.
pub fn ddfs_layered(h: &LayeredGraph, opts: DdfsOptions<'_>) -> Result<DdfsOutcome, DdfsError> {
    let mut engine = DdfsEngine::new(h.vertex_count());
    let (r, g) = h.roots();
    engine.run(&mut LayeredArcs(h), h.vertex_count(), r, g, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(h: &LayeredGraph) -> DdfsOutcome {
        ddfs_layered(h, DdfsOptions::default()).unwrap()
    }

    #[test]
    fn shared_sink_is_bottleneck() {
        // r=0, g=1 at layer 1; v=2 at layer 0.
        let h = LayeredGraph::new(vec![1, 1, 0], &[(0, 2), (1, 2)], 0, 1).unwrap();
        let o = run(&h);
        assert_eq!(o.kind, DdfsKind::Bottleneck { b: 2, red: vec![0], green: vec![1] });
        assert_eq!(o.red_tree, vec![TreeEdge { child: 2, parent: 0, via: 2 }]);
        assert_eq!(o.green_tree, vec![TreeEdge { child: 2, parent: 1, via: 2 }]);
    }

    #[test]
    fn disjoint_chains_free_pair() {
        let h = LayeredGraph::new(vec![1, 1, 0, 0], &[(0, 2), (1, 3)], 0, 1).unwrap();
        let o = run(&h);
        assert_eq!(o.kind, DdfsKind::FreePair { r0: 2, g0: 3 });
        assert_eq!(o.chain_to(Color::Red, 2).len(), 1);
    }

    #[test]
    fn diamond_bottleneck_is_sink() {
        // r=0 g=1 (layer 3), a=2 (layer 2), b=3 (layer 1), z=4 (layer 0)
        let h = LayeredGraph::new(
            vec![3, 3, 2, 1, 0],
            &[(0, 2), (1, 2), (2, 4), (0, 3), (3, 4)],
            0,
            1,
        )
        .unwrap();
        let o = run(&h);
        match o.kind {
            DdfsKind::Bottleneck { b, mut red, mut green } => {
                assert_eq!(b, 4);
                red.sort();
                green.sort();
                let mut all: Vec<_> = red.iter().chain(&green).copied().collect();
                all.sort();
                assert_eq!(all, vec![0, 1, 2, 3]);
                assert!(red.contains(&0) && green.contains(&1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            LayeredGraph::new(vec![1, 1, 1], &[(0, 2)], 0, 1),
            Err(LayeredError::NotDescending { .. })
        ));
        assert!(matches!(
            LayeredGraph::new(vec![1, 1, 0], &[(0, 2)], 0, 1),
            Err(LayeredError::Stranded { v: 1 })
        ));
        assert!(matches!(
            LayeredGraph::new(vec![2, 1, 0], &[(0, 2), (1, 2)], 0, 1),
            Err(LayeredError::RootNotOnTop { .. })
        ));
    }

    #[test]
    fn trace_lines() {
        let h = LayeredGraph::new(vec![1, 1, 0, 0], &[(0, 2), (1, 3)], 0, 1).unwrap();
        let mut lines = Vec::new();
        let mut sink = |e: TraceEvent| lines.push(e.to_string());
        ddfs_layered(&h, DdfsOptions { trace: Some(&mut sink), record_centers: false }).unwrap();
        assert_eq!(
            lines,
            vec!["advance red 2 0", "advance green 3 0", "freepair red 2 0", "freepair green 3 0"]
        );
    }

    #[test]
    fn empty_support_when_roots_coincide() {
        struct One;
        impl ArcSource for One {
            fn layer(&self, _: VertexId) -> u32 {
                1
            }
            fn next_arc(&mut self, _: VertexId, _: &mut u32) -> Option<(VertexId, VertexId)> {
                None
            }
        }
        let o = DdfsEngine::new(1).run(&mut One, 1, 0, 0, DdfsOptions::default()).unwrap();
        assert_eq!(o.kind, DdfsKind::EmptySupport { b: 0 });
        assert_eq!(o.steps, 0);
    }
}
