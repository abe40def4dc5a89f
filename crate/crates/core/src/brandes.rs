//! Predecessor-free Brandes pass.
//!
//! One BFS per source records, for every vertex, the distance `d`, the
//! shortest-path count `sigma`, and the dependency `delta`. No predecessor
//! lists are kept: the dependency sweep rescans neighbors and recognizes DAG
//! edges by level difference (`d[v] + 1 == d[w]`). That choice is what makes
//! the per-source data patchable in place when edges come and go.
//!
//! Scores follow the ordered-pair convention: every unordered vertex pair
//! contributes once per direction and nothing is divided by two. The source's
//! own dependency is pinned at zero (`delta[s] == 0`).

use crate::graph::{DynamicGraph, Edge, VertexId};
use std::collections::HashMap;

pub type Distance = u32;
pub const UNREACHABLE: Distance = Distance::MAX;

/// Per-source BFS byproducts. This is the record the block store persists and
/// the incremental kernels patch.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceData {
    pub dist: Vec<Distance>,
    pub sigma: Vec<u64>,
    pub delta: Vec<f64>,
}

impl SourceData {
    /// All-unreachable record (a vertex that has never been connected).
    pub fn unreachable(n: usize) -> SourceData {
        SourceData {
            dist: vec![UNREACHABLE; n],
            sigma: vec![0; n],
            delta: vec![0.0; n],
        }
    }

    /// Record for a vertex that can reach only itself.
    pub fn isolated(n: usize, s: VertexId) -> SourceData {
        let mut bd = SourceData::unreachable(n);
        bd.dist[s as usize] = 0;
        bd.sigma[s as usize] = 1;
        bd
    }

    pub fn reachable(&self, v: VertexId) -> bool {
        self.dist[v as usize] != UNREACHABLE
    }

    /// Grows the arrays to `n` vertices, new slots unreachable.
    pub fn grow(&mut self, n: usize) {
        self.dist.resize(n, UNREACHABLE);
        self.sigma.resize(n, 0);
        self.delta.resize(n, 0.0);
    }
}

/// Aggregated vertex and edge betweenness.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CentralityScores {
    pub vbc: Vec<f64>,
    pub ebc: HashMap<Edge, f64>,
}

/// Worst disagreement between two score sets, with the offender attached.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScoreDeviation {
    pub max_vbc: f64,
    pub max_ebc: f64,
    pub worst_vertex: Option<VertexId>,
    pub worst_edge: Option<Edge>,
}

impl ScoreDeviation {
    pub fn max(&self) -> f64 {
        self.max_vbc.max(self.max_ebc)
    }
}

impl CentralityScores {
    pub fn new(n: usize) -> CentralityScores {
        CentralityScores {
            vbc: vec![0.0; n],
            ebc: HashMap::new(),
        }
    }

    /// Zero scores with one EBC slot per existing edge.
    pub fn zeroed_for(g: &DynamicGraph) -> CentralityScores {
        CentralityScores {
            vbc: vec![0.0; g.vertex_count()],
            ebc: g.edges().map(|e| (e, 0.0)).collect(),
        }
    }

    pub fn grow(&mut self, n: usize) {
        if self.vbc.len() < n {
            self.vbc.resize(n, 0.0);
        }
    }

    /// EBC entries in canonical edge order (stable output for dumps).
    pub fn ebc_sorted(&self) -> Vec<(Edge, f64)> {
        let mut v: Vec<(Edge, f64)> = self.ebc.iter().map(|(&e, &x)| (e, x)).collect();
        v.sort_by_key(|&(e, _)| e);
        v
    }

    /// Relative deviation (floored at 1 in the denominator) against a
    /// reference, over vertices and the union of edge keys.
    pub fn deviation_from(&self, reference: &CentralityScores) -> ScoreDeviation {
        let mut dev = ScoreDeviation::default();
        let n = self.vbc.len().max(reference.vbc.len());
        for v in 0..n {
            let a = self.vbc.get(v).copied().unwrap_or(0.0);
            let b = reference.vbc.get(v).copied().unwrap_or(0.0);
            let d = (a - b).abs() / b.abs().max(1.0);
            if d > dev.max_vbc {
                dev.max_vbc = d;
                dev.worst_vertex = Some(v as VertexId);
            }
        }
        for (&e, &a) in &self.ebc {
            let b = reference.ebc.get(&e).copied().unwrap_or(0.0);
            let d = (a - b).abs() / b.abs().max(1.0);
            if d > dev.max_ebc {
                dev.max_ebc = d;
                dev.worst_edge = Some(e);
            }
        }
        for (&e, &b) in &reference.ebc {
            if !self.ebc.contains_key(&e) {
                let d = b.abs() / b.abs().max(1.0);
                if d > dev.max_ebc {
                    dev.max_ebc = d;
                    dev.worst_edge = Some(e);
                }
            }
        }
        dev
    }
}

/// Single-source pass; optionally folds this source's contributions into
/// running scores.
fn single_source(g: &DynamicGraph, s: VertexId, mut scores: Option<&mut CentralityScores>) -> SourceData {
    let n = g.vertex_count();
    let mut bd = SourceData::unreachable(n);
    bd.dist[s as usize] = 0;
    bd.sigma[s as usize] = 1;

    // Level-synchronous BFS; each wave is fully counted before the next one
    // starts, so sigma of a vertex is final by the time its wave is scanned.
    let mut waves: Vec<Vec<VertexId>> = vec![vec![s]];
    loop {
        let cur = waves.last().unwrap();
        let d = (waves.len() - 1) as Distance;
        let mut next: Vec<VertexId> = Vec::new();
        for &v in cur {
            let sv = bd.sigma[v as usize];
            for &w in g.neighbors(v) {
                let wi = w as usize;
                if bd.dist[wi] == UNREACHABLE {
                    bd.dist[wi] = d + 1;
                    next.push(w);
                }
                if bd.dist[wi] == d + 1 {
                    bd.sigma[wi] += sv;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        waves.push(next);
    }

    // Dependency sweep, deepest wave first. delta of a vertex is final when
    // its own wave is reached, which is also when it is folded into VBC.
    for wave in waves.iter().rev() {
        for &w in wave {
            let wi = w as usize;
            let coeff = 1.0 + bd.delta[wi];
            for &v in g.neighbors(w) {
                let vi = v as usize;
                if bd.dist[vi] != UNREACHABLE && bd.dist[vi] + 1 == bd.dist[wi] {
                    let c = bd.sigma[vi] as f64 / bd.sigma[wi] as f64 * coeff;
                    if v != s {
                        bd.delta[vi] += c;
                    }
                    if let Some(sc) = scores.as_deref_mut() {
                        *sc.ebc.entry(Edge::new(v, w)).or_insert(0.0) += c;
                    }
                }
            }
            if w != s {
                if let Some(sc) = scores.as_deref_mut() {
                    sc.vbc[wi] += bd.delta[wi];
                }
            }
        }
    }
    bd
}

pub fn brandes_single_source(g: &DynamicGraph, s: VertexId) -> SourceData {
    single_source(g, s, None)
}

/// Single-source pass that also adds this source's dependency into `scores`.
pub fn accumulate_source(g: &DynamicGraph, s: VertexId, scores: &mut CentralityScores) -> SourceData {
    single_source(g, s, Some(scores))
}

/// Full recomputation: every source's record plus aggregate scores.
pub fn brandes_full(g: &DynamicGraph) -> (Vec<SourceData>, CentralityScores) {
    let n = g.vertex_count();
    let mut scores = CentralityScores::zeroed_for(g);
    let mut all = Vec::with_capacity(n);
    for s in 0..n as VertexId {
        all.push(accumulate_source(g, s, &mut scores));
    }
    (all, scores)
}

/// Aggregate scores only (reference path for benchmarks and GN).
pub fn brandes_scores(g: &DynamicGraph) -> CentralityScores {
    let mut scores = CentralityScores::zeroed_for(g);
    for s in 0..g.vertex_count() as VertexId {
        accumulate_source(g, s, &mut scores);
    }
    scores
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> DynamicGraph {
        DynamicGraph::from_edges(3, &[(0, 1), (1, 2)])
    }

    #[test]
    fn p3_single_source() {
        let bd = brandes_single_source(&p3(), 0);
        assert_eq!(bd.dist, vec![0, 1, 2]);
        assert_eq!(bd.sigma, vec![1, 1, 1]);
        assert_eq!(bd.delta, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn source_dependency_is_zero() {
        let bd = brandes_single_source(&p3(), 2);
        assert_eq!(bd.dist, vec![2, 1, 0]);
        assert_eq!(bd.delta, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn cycle4_single_source() {
        let c4 = DynamicGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let bd = brandes_single_source(&c4, 0);
        assert_eq!(bd.dist, vec![0, 1, 2, 1]);
        assert_eq!(bd.sigma, vec![1, 1, 2, 1]);
        assert_eq!(bd.delta, vec![0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn p3_full_scores() {
        let (_, sc) = brandes_full(&p3());
        assert_eq!(sc.vbc, vec![0.0, 2.0, 0.0]);
        assert_eq!(sc.ebc[&Edge::new(0, 1)], 4.0);
        assert_eq!(sc.ebc[&Edge::new(1, 2)], 4.0);
    }

    #[test]
    fn star_and_cycle_scores() {
        let star = DynamicGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let (_, sc) = brandes_full(&star);
        assert_eq!(sc.vbc, vec![6.0, 0.0, 0.0, 0.0]);

        let c4 = DynamicGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let (_, sc) = brandes_full(&c4);
        assert_eq!(sc.vbc, vec![1.0, 1.0, 1.0, 1.0]);
        for (_, &x) in &sc.ebc {
            assert_eq!(x, 4.0);
        }
    }

    #[test]
    fn p4_scores() {
        let p4 = DynamicGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let (_, sc) = brandes_full(&p4);
        assert_eq!(sc.vbc, vec![0.0, 4.0, 4.0, 0.0]);
        assert_eq!(sc.ebc[&Edge::new(1, 2)], 8.0);
        assert_eq!(sc.ebc[&Edge::new(0, 1)], 6.0);
    }

    #[test]
    fn triangle_scores() {
        let tri = DynamicGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let (_, sc) = brandes_full(&tri);
        assert_eq!(sc.vbc, vec![0.0, 0.0, 0.0]);
        for (_, &x) in &sc.ebc {
            assert_eq!(x, 2.0);
        }
    }

    #[test]
    fn disconnected_pieces() {
        let g = DynamicGraph::from_edges(5, &[(0, 1), (2, 3)]);
        let bd = brandes_single_source(&g, 0);
        assert_eq!(bd.dist[1], 1);
        assert_eq!(bd.dist[2], UNREACHABLE);
        assert_eq!(bd.sigma[3], 0);
        let (_, sc) = brandes_full(&g);
        assert_eq!(sc.vbc, vec![0.0; 5]);
        assert_eq!(sc.ebc[&Edge::new(0, 1)], 2.0);
    }
}
