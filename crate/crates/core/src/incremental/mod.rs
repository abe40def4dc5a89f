//! Incremental betweenness maintenance.
//!
//! One edge event is handled per source: classify how the edge sits in that
//! source's BFS structure, run the matching repair kernel over the affected
//! vertices, then run the shared dependency sweep to settle score deltas.
//! The graph is mutated before any per-source work starts, so kernels see
//! new adjacency and the old per-source record side by side.

mod add;
mod remove;
pub mod scratch;
mod sweep;

use crate::brandes::{brandes_full, CentralityScores, SourceData, UNREACHABLE};
use crate::graph::{DynamicGraph, Edge, VertexId};
use scratch::UpdateScratch;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Add,
    Remove,
}

/// One streamed edge event. Vertex ids one past the current maximum are
/// allowed on insertion and grow the graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeEvent {
    pub kind: EventKind,
    pub u: VertexId,
    pub v: VertexId,
    pub timestamp: Option<f64>,
}

impl EdgeEvent {
    pub fn add(u: VertexId, v: VertexId) -> EdgeEvent {
        EdgeEvent {
            kind: EventKind::Add,
            u,
            v,
            timestamp: None,
        }
    }

    pub fn remove(u: VertexId, v: VertexId) -> EdgeEvent {
        EdgeEvent {
            kind: EventKind::Remove,
            u,
            v,
            timestamp: None,
        }
    }
}

impl fmt::Display for EdgeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            EventKind::Add => '+',
            EventKind::Remove => '-',
        };
        write!(f, "{op} {} {}", self.u, self.v)
    }
}

/// How one source saw an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateCase {
    /// Nothing to do: endpoints unreachable or on one level.
    Unaffected,
    /// Inserted edge spans adjacent levels; path counts grow, levels hold.
    AddNoLevelChange,
    /// Inserted edge spans a gap; the far side drops closer.
    AddLevelDrop,
    /// Inserted edge reaches unreachable territory.
    Merge,
    /// Removed edge spans adjacent levels and the far endpoint keeps
    /// another predecessor; path counts shrink, levels hold.
    RemoveNoLevelChange,
    /// Far endpoint lost its last predecessor but keeps a same-level
    /// neighbor; the sunk region drops exactly one level.
    RemoveLevelRiseByOne,
    /// Far endpoint lost its last predecessor; flood and repair from the
    /// vertices that provably keep their distance.
    RemoveLevelRise,
    /// The removed edge was a bridge; the far side becomes unreachable.
    Disconnect,
}

impl UpdateCase {
    pub const ALL: [UpdateCase; 8] = [
        UpdateCase::Unaffected,
        UpdateCase::AddNoLevelChange,
        UpdateCase::AddLevelDrop,
        UpdateCase::Merge,
        UpdateCase::RemoveNoLevelChange,
        UpdateCase::RemoveLevelRiseByOne,
        UpdateCase::RemoveLevelRise,
        UpdateCase::Disconnect,
    ];

    pub fn index(self) -> usize {
        UpdateCase::ALL.iter().position(|&c| c == self).unwrap()
    }

    pub fn label(self) -> &'static str {
        match self {
            UpdateCase::Unaffected => "unaffected",
            UpdateCase::AddNoLevelChange => "add_no_level_change",
            UpdateCase::AddLevelDrop => "add_level_drop",
            UpdateCase::Merge => "merge",
            UpdateCase::RemoveNoLevelChange => "remove_no_level_change",
            UpdateCase::RemoveLevelRiseByOne => "remove_rise_by_one",
            UpdateCase::RemoveLevelRise => "remove_rise",
            UpdateCase::Disconnect => "disconnect",
        }
    }
}

impl fmt::Display for UpdateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-case tallies across sources (and, aggregated, across events).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CaseCounts {
    counts: [u64; 8],
}

impl CaseCounts {
    pub fn record(&mut self, case: UpdateCase) {
        self.counts[case.index()] += 1;
    }

    pub fn get(&self, case: UpdateCase) -> u64 {
        self.counts[case.index()]
    }

    pub fn merge(&mut self, other: &CaseCounts) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    /// True if any source lost part of its reachable set.
    pub fn disconnected(&self) -> bool {
        self.get(UpdateCase::Disconnect) > 0
    }
}

impl fmt::Display for CaseCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for case in UpdateCase::ALL {
            let c = self.get(case);
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}={c}", case.label())?;
            first = false;
        }
        if first {
            f.write_str("(none)")?;
        }
        Ok(())
    }
}

/// Toggles for the update path. The one-level shortcut is on by default;
/// turning it off routes those events through the general flood-and-repair,
/// which must produce identical scores.
#[derive(Clone, Copy, Debug)]
pub struct UpdateOptions {
    pub one_level_rise: bool,
}

impl Default for UpdateOptions {
    fn default() -> UpdateOptions {
        UpdateOptions {
            one_level_rise: true,
        }
    }
}

/// Score deltas produced by one source's pass, applied to the totals by the
/// caller. Keeping them out of line is what lets sources run in parallel
/// and still merge in a fixed order.
#[derive(Clone, Debug, Default)]
pub struct PartialScores {
    pub vbc: Vec<(VertexId, f64)>,
    pub ebc: Vec<(Edge, f64)>,
}

impl PartialScores {
    pub fn clear(&mut self) {
        self.vbc.clear();
        self.ebc.clear();
    }

    pub fn apply_to(&self, scores: &mut CentralityScores) {
        for &(v, d) in &self.vbc {
            scores.vbc[v as usize] += d;
        }
        for &(e, d) in &self.ebc {
            *scores.ebc.entry(e).or_insert(0.0) += d;
        }
    }
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum EventError {
    #[error("self loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge ({0}, {1}) already present")]
    EdgeExists(VertexId, VertexId),
    #[error("edge ({0}, {1}) not present")]
    EdgeMissing(VertexId, VertexId),
    #[error("vertex {id} out of range for {n} vertices")]
    VertexOutOfRange { id: VertexId, n: usize },
}

/// Checks an event against the current graph without touching it. Returns
/// the vertex count after any growth the event implies: fresh ids on an
/// addition may extend the graph, but only without gaps.
pub fn validate_event(g: &DynamicGraph, event: &EdgeEvent) -> Result<usize, EventError> {
    let (u, v) = (event.u, event.v);
    if u == v {
        return Err(EventError::SelfLoop(u));
    }
    let n = g.vertex_count() as u32;
    match event.kind {
        EventKind::Add => {
            let mut virt = n;
            for id in [u.min(v), u.max(v)] {
                if id == virt {
                    virt += 1;
                } else if id > virt {
                    return Err(EventError::VertexOutOfRange { id, n: n as usize });
                }
            }
            if virt == n && g.has_edge(u, v) {
                return Err(EventError::EdgeExists(u, v));
            }
            Ok(virt as usize)
        }
        EventKind::Remove => {
            for id in [u, v] {
                if id >= n {
                    return Err(EventError::VertexOutOfRange { id, n: n as usize });
                }
            }
            if !g.has_edge(u, v) {
                return Err(EventError::EdgeMissing(u, v));
            }
            Ok(n as usize)
        }
    }
}

/// Updates one source's record for an event already applied to the graph,
/// pushing score deltas into `out`. Returns which case fired.
pub fn update_source(
    g: &DynamicGraph,
    kind: EventKind,
    eu: VertexId,
    ev: VertexId,
    s: VertexId,
    bd: &mut SourceData,
    scratch: &mut UpdateScratch,
    opts: &UpdateOptions,
    out: &mut PartialScores,
) -> UpdateCase {
    let du = bd.dist[eu as usize];
    let dv = bd.dist[ev as usize];

    match kind {
        EventKind::Add => {
            if du == UNREACHABLE && dv == UNREACHABLE {
                return UpdateCase::Unaffected;
            }
            let added = Some((eu.min(ev), eu.max(ev)));
            if du == UNREACHABLE || dv == UNREACHABLE {
                let (uh, ul) = if du == UNREACHABLE { (ev, eu) } else { (eu, ev) };
                scratch.begin_pass();
                add::component_merge(g, bd, scratch, uh, ul);
                finish(g, bd, scratch, out, s, added, None);
                return UpdateCase::Merge;
            }
            if du == dv {
                return UpdateCase::Unaffected;
            }
            let (uh, ul) = if du < dv { (eu, ev) } else { (ev, eu) };
            scratch.begin_pass();
            if du.abs_diff(dv) == 1 {
                add::no_level_change(g, bd, scratch, EventKind::Add, uh, ul);
                finish(g, bd, scratch, out, s, added, None);
                UpdateCase::AddNoLevelChange
            } else {
                add::level_drop(g, bd, scratch, uh, ul);
                finish(g, bd, scratch, out, s, added, None);
                UpdateCase::AddLevelDrop
            }
        }
        EventKind::Remove => {
            if du == UNREACHABLE && dv == UNREACHABLE {
                return UpdateCase::Unaffected;
            }
            // A reachable vertex cannot lose an edge to an unreachable one.
            debug_assert!(du != UNREACHABLE && dv != UNREACHABLE);
            if du == dv {
                return UpdateCase::Unaffected;
            }
            let (uh, ul) = if du < dv { (eu, ev) } else { (ev, eu) };
            let dul = bd.dist[ul as usize];

            let mut has_pred = false;
            let mut has_sibling = false;
            for &y in g.neighbors(ul) {
                let dy = bd.dist[y as usize];
                if dy + 1 == dul {
                    has_pred = true;
                    break;
                }
                if dy == dul {
                    has_sibling = true;
                }
            }

            scratch.begin_pass();
            if has_pred {
                add::no_level_change(g, bd, scratch, EventKind::Remove, uh, ul);
                finish(g, bd, scratch, out, s, None, Some((uh, ul)));
                UpdateCase::RemoveNoLevelChange
            } else if has_sibling && opts.one_level_rise {
                remove::one_level_rise(g, bd, scratch, ul);
                finish(g, bd, scratch, out, s, None, Some((uh, ul)));
                UpdateCase::RemoveLevelRiseByOne
            } else if remove::flood_affected(g, bd, scratch, ul) {
                remove::repair_flooded(g, bd, scratch);
                finish(g, bd, scratch, out, s, None, Some((uh, ul)));
                UpdateCase::RemoveLevelRise
            } else {
                remove::clear_lost_side(g, bd, scratch, out, s);
                finish(g, bd, scratch, out, s, None, Some((uh, ul)));
                UpdateCase::Disconnect
            }
        }
    }
}

fn finish(
    g: &DynamicGraph,
    bd: &mut SourceData,
    scratch: &mut UpdateScratch,
    out: &mut PartialScores,
    s: VertexId,
    added_edge: Option<(VertexId, VertexId)>,
    removed_edge: Option<(VertexId, VertexId)>,
) {
    if let Some((uh, ul)) = removed_edge {
        sweep::seed_removed_edge(bd, scratch, s, uh, ul);
    }
    let ctx = sweep::SweepCtx { s, added_edge };
    sweep::dependency_sweep(g, bd, scratch, out, &ctx);
    scratch.writeback(bd);
}

/// Graph, per-source records, and running totals, updated in place one
/// event at a time. Single-threaded reference driver; the partitioned
/// engine reproduces exactly this, source range by source range.
pub struct SerialState {
    pub graph: DynamicGraph,
    pub bd: Vec<SourceData>,
    pub scores: CentralityScores,
    pub opts: UpdateOptions,
    scratch: UpdateScratch,
}

impl SerialState {
    pub fn from_graph(graph: DynamicGraph) -> SerialState {
        let (bd, scores) = brandes_full(&graph);
        let scratch = UpdateScratch::new(graph.vertex_count());
        SerialState {
            graph,
            bd,
            scores,
            opts: UpdateOptions::default(),
            scratch,
        }
    }

    pub fn apply(&mut self, event: &EdgeEvent) -> Result<CaseCounts, EventError> {
        let (u, v) = (event.u, event.v);
        let virt = validate_event(&self.graph, event)?;

        match event.kind {
            EventKind::Add => {
                while self.graph.vertex_count() < virt {
                    self.grow_one();
                }
                let inserted = self.graph.add_edge(u, v).expect("ids validated");
                debug_assert!(inserted);
                self.scores.ebc.entry(Edge::new(u, v)).or_insert(0.0);
            }
            EventKind::Remove => {
                let removed = self.graph.remove_edge(u, v).expect("ids validated");
                debug_assert!(removed);
            }
        }

        let mut counts = CaseCounts::default();
        let mut out = PartialScores::default();
        for s in 0..self.graph.vertex_count() as u32 {
            out.clear();
            let case = update_source(
                &self.graph,
                event.kind,
                u,
                v,
                s,
                &mut self.bd[s as usize],
                &mut self.scratch,
                &self.opts,
                &mut out,
            );
            counts.record(case);
            out.apply_to(&mut self.scores);
        }

        if event.kind == EventKind::Remove {
            let dropped = self.scores.ebc.remove(&Edge::new(u, v));
            debug_assert!(dropped.is_some());
        }
        Ok(counts)
    }

    fn grow_one(&mut self) {
        let s = self.graph.add_vertex();
        let n = self.graph.vertex_count();
        for bd in &mut self.bd {
            bd.grow(n);
        }
        self.bd.push(SourceData::isolated(n, s));
        self.scores.grow(n);
        self.scratch.grow(n);
    }
}
