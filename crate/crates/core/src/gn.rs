//! Girvan and Newman's divisive clustering: repeatedly remove the edge with
//! the highest betweenness. The incremental route feeds each removal through
//! the engine; the reference route recomputes from scratch every step.

use std::io::{self, Write};

use crate::brandes::{brandes_scores, CentralityScores};
use crate::engine::{Engine, EngineError};
use crate::graph::{DynamicGraph, Edge};
use crate::incremental::{EdgeEvent, UpdateOptions};
use crate::oracle::ORACLE_MAX_VERTICES;
use crate::state::format_score;

/// Scores this close to the maximum, relatively, count as tied. Incremental
/// and recomputed betweenness differ at rounding level, so an exact argmax
/// could diverge between the two routes on mathematically equal edges.
pub const GN_TIE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct DendrogramRow {
    pub step: usize,
    pub edge: Edge,
    /// Betweenness of the edge at the moment it was removed.
    pub ebc: f64,
    /// Component count after the removal.
    pub components: usize,
}

/// Component membership right after a removal that split the graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub step: usize,
    pub labels: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dendrogram {
    pub rows: Vec<DendrogramRow>,
    pub splits: Vec<Split>,
}

impl Dendrogram {
    pub fn removed_edges(&self) -> Vec<Edge> {
        self.rows.iter().map(|r| r.edge).collect()
    }
}

#[derive(thiserror::Error, Debug)]
pub enum GnError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("reference clustering is capped at {ORACLE_MAX_VERTICES} vertices, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Picks the next edge to remove: the lexicographically smallest among all
/// edges within [`GN_TIE_TOLERANCE`] of the maximum score.
pub fn top_edge(scores: &CentralityScores) -> Option<(Edge, f64)> {
    let max = scores.ebc.values().fold(0.0f64, |m, &s| m.max(s));
    let edge = scores
        .ebc
        .iter()
        .filter(|&(_, &s)| s >= max * (1.0 - GN_TIE_TOLERANCE))
        .map(|(e, _)| *e)
        .min()?;
    Some((edge, scores.ebc[&edge]))
}

/// Divisive clustering with maintained betweenness: each removal is one
/// engine event, and the component count moves only when a source actually
/// lost reachability, so connectivity is rescanned just at splits.
pub fn girvan_newman(
    g: &DynamicGraph,
    stop_components: usize,
    workers: usize,
    opts: UpdateOptions,
) -> Result<Dendrogram, GnError> {
    if g.vertex_count() == 0 {
        return Err(GnError::EmptyGraph);
    }
    let mut engine = Engine::in_memory(g.clone(), workers, opts);
    let mut components = g.component_count();
    let mut out = Dendrogram::default();
    let mut step = 0;

    while engine.graph().edge_count() > 0 && components < stop_components {
        step += 1;
        let (edge, ebc) = top_edge(engine.scores()).expect("edges remain");
        let report = engine.apply_event(&EdgeEvent::remove(edge.u, edge.v))?;
        if report.cases.disconnected() {
            components += 1;
            debug_assert_eq!(components, engine.graph().component_count());
            out.splits.push(Split {
                step,
                labels: engine.graph().component_labels(),
            });
        }
        out.rows.push(DendrogramRow {
            step,
            edge,
            ebc,
            components,
        });
    }
    Ok(out)
}

/// Same loop, but betweenness is recomputed from scratch after every removal
/// and connectivity is rescanned every step.
pub fn gn_reference(
    g: &DynamicGraph,
    stop_components: usize,
) -> Result<Dendrogram, GnError> {
    if g.vertex_count() == 0 {
        return Err(GnError::EmptyGraph);
    }
    if g.vertex_count() > ORACLE_MAX_VERTICES {
        return Err(GnError::TooLarge(g.vertex_count()));
    }
    let mut g = g.clone();
    let mut components = g.component_count();
    let mut out = Dendrogram::default();
    let mut step = 0;

    while g.edge_count() > 0 && components < stop_components {
        step += 1;
        let scores = brandes_scores(&g);
        let (edge, ebc) = top_edge(&scores).expect("edges remain");
        g.remove_edge(edge.u, edge.v).expect("edge came from scores");
        let now = g.component_count();
        if now > components {
            components = now;
            out.splits.push(Split {
                step,
                labels: g.component_labels(),
            });
        }
        out.rows.push(DendrogramRow {
            step,
            edge,
            ebc,
            components,
        });
    }
    Ok(out)
}

pub fn write_dendrogram_csv(mut w: impl Write, d: &Dendrogram) -> io::Result<()> {
    writeln!(w, "step,edge_u,edge_v,ebc,components")?;
    for r in &d.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.step,
            r.edge.u,
            r.edge.v,
            format_score(r.ebc),
            r.components
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn barbell() -> DynamicGraph {
        DynamicGraph::from_edges(
            6,
            &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)],
        )
    }

    #[test]
    fn the_bridge_goes_first() {
        let d = girvan_newman(&barbell(), 2, 2, UpdateOptions::default()).unwrap();
        let last = d.rows.last().unwrap();
        assert_eq!(d.rows[0].edge, Edge::new(2, 3));
        assert_eq!(d.rows[0].components, 2);
        assert_eq!(d.rows.len(), 1);
        assert_eq!(last.components, 2);
        // Each triangle keeps its own label.
        assert_eq!(d.splits[0].labels, vec![0, 0, 0, 1, 1, 1]);

        let r = gn_reference(&barbell(), 2).unwrap();
        assert_eq!(r.rows, d.rows);
        assert_eq!(r.splits, d.splits);
    }

    #[test]
    fn a_full_run_peels_a_cycle_to_singletons() {
        let c4 = DynamicGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let d = girvan_newman(&c4, usize::MAX, 1, UpdateOptions::default()).unwrap();
        assert_eq!(d.rows.len(), 4);
        assert_eq!(d.rows.last().unwrap().components, 4);
        // All four cycle edges tie at the start; the smallest pair leads.
        assert_eq!(d.rows[0].edge, Edge::new(0, 1));
    }

    #[test]
    fn two_cliques_on_a_path_lose_the_path_first() {
        // Two triangles joined through vertex 6 by a path of length two.
        let g = DynamicGraph::from_edges(
            7,
            &[(0, 1), (0, 2), (1, 2), (2, 6), (6, 3), (3, 4), (3, 5), (4, 5)],
        );
        let d = girvan_newman(&g, 3, 1, UpdateOptions::default()).unwrap();
        let first_two: Vec<Edge> = d.removed_edges().into_iter().take(2).collect();
        assert_eq!(first_two, vec![Edge::new(2, 6), Edge::new(3, 6)]);
    }

    #[test]
    fn refuses_nothing_to_cluster() {
        assert!(matches!(
            girvan_newman(&DynamicGraph::new(0), 2, 1, UpdateOptions::default()),
            Err(GnError::EmptyGraph)
        ));
    }
}
