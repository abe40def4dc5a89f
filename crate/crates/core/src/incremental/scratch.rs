//! Per-worker scratch for update passes.
//!
//! A pass over one source touches a handful of vertices out of n, so every
//! array here is an epoch-stamped overlay: bumping the epoch invalidates all
//! slots at once and nothing is ever cleared vertex by vertex. Reads fall
//! through to the old per-source record until a vertex is touched.

use crate::brandes::{Distance, SourceData};
use crate::graph::VertexId;
use std::collections::{HashSet, VecDeque};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flag {
    /// Untouched by the current pass.
    None,
    /// Distance or path count changed; dependency is rebuilt from zero.
    Changed,
    /// Distance and path count kept; dependency is patched by deltas.
    Fringe,
    /// Flood marker: possibly affected by a removal, not yet repaired.
    Flooded,
    /// Flooded vertex that provably keeps its distance; repair starts here.
    Pivot,
    /// Lost its component and became unreachable.
    Cleared,
}

/// FIFO queues bucketed by level, with enough bookkeeping to drain cheaply.
pub struct LevelQueues {
    q: Vec<VecDeque<VertexId>>,
    used: Vec<usize>,
    pub max_level: usize,
    len: usize,
}

impl LevelQueues {
    fn new() -> LevelQueues {
        LevelQueues {
            q: Vec::new(),
            used: Vec::new(),
            max_level: 0,
            len: 0,
        }
    }

    pub fn push(&mut self, level: usize, v: VertexId) {
        if self.q.len() <= level {
            self.q.resize_with(level + 1, VecDeque::new);
        }
        if self.q[level].is_empty() {
            self.used.push(level);
        }
        self.q[level].push_back(v);
        self.max_level = self.max_level.max(level);
        self.len += 1;
    }

    pub fn pop(&mut self, level: usize) -> Option<VertexId> {
        let v = self.q.get_mut(level)?.pop_front();
        if v.is_some() {
            self.len -= 1;
        }
        v
    }

    pub fn level_is_empty(&self, level: usize) -> bool {
        self.q.get(level).map_or(true, |d| d.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn reset(&mut self) {
        for &l in &self.used {
            self.q[l].clear();
        }
        self.used.clear();
        self.max_level = 0;
        self.len = 0;
    }
}

pub struct UpdateScratch {
    epoch: u64,
    stamp: Vec<u64>,
    flag: Vec<Flag>,
    dist: Vec<Distance>,
    sigma: Vec<u64>,
    delta: Vec<f64>,
    /// Vertices in first-touch order; the writeback list.
    pub touched: Vec<VertexId>,
    /// Level queues feeding the dependency sweep.
    pub lq: LevelQueues,
    /// Pivots by (old) level for removal repair.
    pub pq: LevelQueues,
    /// BFS wave buffers.
    pub cur: VecDeque<VertexId>,
    pub next: VecDeque<VertexId>,
    /// Edges already corrected once in this pass.
    pub te: HashSet<(VertexId, VertexId)>,
}

impl UpdateScratch {
    pub fn new(n: usize) -> UpdateScratch {
        UpdateScratch {
            epoch: 0,
            stamp: vec![0; n],
            flag: vec![Flag::None; n],
            dist: vec![0; n],
            sigma: vec![0; n],
            delta: vec![0.0; n],
            touched: Vec::new(),
            lq: LevelQueues::new(),
            pq: LevelQueues::new(),
            cur: VecDeque::new(),
            next: VecDeque::new(),
            te: HashSet::new(),
        }
    }

    pub fn grow(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.flag.resize(n, Flag::None);
            self.dist.resize(n, 0);
            self.sigma.resize(n, 0);
            self.delta.resize(n, 0.0);
        }
    }

    pub fn begin_pass(&mut self) {
        self.epoch += 1;
        self.touched.clear();
        self.lq.reset();
        self.pq.reset();
        self.cur.clear();
        self.next.clear();
        self.te.clear();
    }

    fn fresh(&self, v: VertexId) -> bool {
        self.stamp[v as usize] == self.epoch
    }

    pub fn flag(&self, v: VertexId) -> Flag {
        if self.fresh(v) {
            self.flag[v as usize]
        } else {
            Flag::None
        }
    }

    /// First touch of a vertex this pass: overlay slots start as copies of
    /// the old record (delta starts from the old value only for the fringe,
    /// which patches it; every other flag rebuilds it from zero).
    pub fn touch(&mut self, v: VertexId, bd: &SourceData, f: Flag) {
        debug_assert!(!self.fresh(v), "double touch of {v}");
        let vi = v as usize;
        self.stamp[vi] = self.epoch;
        self.flag[vi] = f;
        self.dist[vi] = bd.dist[vi];
        self.sigma[vi] = bd.sigma[vi];
        self.delta[vi] = if f == Flag::Fringe { bd.delta[vi] } else { 0.0 };
        self.touched.push(v);
    }

    pub fn set_flag(&mut self, v: VertexId, f: Flag) {
        debug_assert!(self.fresh(v));
        self.flag[v as usize] = f;
    }

    pub fn dist_of(&self, v: VertexId, bd: &SourceData) -> Distance {
        if self.fresh(v) {
            self.dist[v as usize]
        } else {
            bd.dist[v as usize]
        }
    }

    pub fn sigma_of(&self, v: VertexId, bd: &SourceData) -> u64 {
        if self.fresh(v) {
            self.sigma[v as usize]
        } else {
            bd.sigma[v as usize]
        }
    }

    pub fn set_dist(&mut self, v: VertexId, d: Distance) {
        debug_assert!(self.fresh(v));
        self.dist[v as usize] = d;
    }

    pub fn set_sigma(&mut self, v: VertexId, s: u64) {
        debug_assert!(self.fresh(v));
        self.sigma[v as usize] = s;
    }

    pub fn add_sigma(&mut self, v: VertexId, delta: i128) {
        debug_assert!(self.fresh(v));
        let cur = self.sigma[v as usize] as i128 + delta;
        debug_assert!(cur >= 0, "path count went negative at {v}");
        self.sigma[v as usize] = cur as u64;
    }

    /// Dependency overlay value; only meaningful for touched vertices.
    pub fn delta_new(&self, v: VertexId) -> f64 {
        debug_assert!(self.fresh(v));
        self.delta[v as usize]
    }

    pub fn add_delta(&mut self, v: VertexId, d: f64) {
        debug_assert!(self.fresh(v));
        self.delta[v as usize] += d;
    }

    /// Dead-edge marker, canonical order; true the first time.
    pub fn mark_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.te.insert(key)
    }

    /// Folds the overlay back into the per-source record.
    pub fn writeback(&self, bd: &mut SourceData) {
        for &v in &self.touched {
            let vi = v as usize;
            debug_assert!(self.fresh(v));
            debug_assert!(
                !matches!(self.flag[vi], Flag::Flooded | Flag::Pivot),
                "unrepaired vertex {v} at writeback"
            );
            bd.dist[vi] = self.dist[vi];
            bd.sigma[vi] = self.sigma[vi];
            bd.delta[vi] = self.delta[vi];
        }
    }
}
