//! Hand-built fixtures for every update route, checked source by source
//! against an independent reference implementation.

mod common;

use common::{assert_source_matches, assert_state_consistent, reference_source};
use sbc::brandes::{brandes_single_source, SourceData, UNREACHABLE};
use sbc::graph::{DynamicGraph, Edge, VertexId};
use sbc::incremental::scratch::UpdateScratch;
use sbc::incremental::{
    update_source, EdgeEvent, EventError, EventKind, PartialScores, SerialState, UpdateCase,
    UpdateOptions,
};
use std::collections::HashMap;

struct Drive {
    case: UpdateCase,
    bd: SourceData,
    vbc: HashMap<VertexId, f64>,
    ebc: HashMap<Edge, f64>,
}

/// Runs one event for one source against a fresh record and folds the score
/// pushes into maps.
fn drive(g0: &DynamicGraph, event: EdgeEvent, s: VertexId, opts: &UpdateOptions) -> Drive {
    let mut g = g0.clone();
    let mut bd = brandes_single_source(&g, s);
    match event.kind {
        EventKind::Add => assert!(g.add_edge(event.u, event.v).unwrap()),
        EventKind::Remove => assert!(g.remove_edge(event.u, event.v).unwrap()),
    }
    let mut scratch = UpdateScratch::new(g.vertex_count());
    let mut out = PartialScores::default();
    let case = update_source(
        &g, event.kind, event.u, event.v, s, &mut bd, &mut scratch, opts, &mut out,
    );
    let mut vbc = HashMap::new();
    for (v, d) in out.vbc {
        *vbc.entry(v).or_insert(0.0) += d;
    }
    let mut ebc = HashMap::new();
    for (e, d) in out.ebc {
        *ebc.entry(e).or_insert(0.0) += d;
    }
    Drive { case, bd, vbc, ebc }
}

/// Checks a drive against the old/new reference: record fields, then pushed
/// score deltas (which must equal the per-source contribution difference).
fn check_drive(g0: &DynamicGraph, event: EdgeEvent, s: VertexId, opts: &UpdateOptions) -> UpdateCase {
    let d = drive(g0, event, s, opts);
    let mut g = g0.clone();
    let (added, removed) = match event.kind {
        EventKind::Add => {
            g.add_edge(event.u, event.v).unwrap();
            (Some(Edge::new(event.u, event.v)), None)
        }
        EventKind::Remove => {
            g.remove_edge(event.u, event.v).unwrap();
            (None, Some(Edge::new(event.u, event.v)))
        }
    };
    let ctx = format!("{event:?} source {s}");
    let old = reference_source(g0, s, None);
    let new = reference_source(&g, s, None);
    assert_source_matches(&d.bd, &new, &ctx);

    for v in 0..g.vertex_count() as u32 {
        if v == s {
            continue;
        }
        let want = new.delta[v as usize] - old.delta[v as usize];
        let got = d.vbc.get(&v).copied().unwrap_or(0.0);
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1.0),
            "{ctx}: vertex delta at {v}: pushed {got}, want {want}"
        );
    }

    let contribution = |bd: &SourceData, e: Edge| -> f64 {
        let (a, b) = (e.u as usize, e.v as usize);
        if bd.dist[a] == UNREACHABLE || bd.dist[b] == UNREACHABLE {
            return 0.0;
        }
        if bd.dist[a] + 1 == bd.dist[b] {
            bd.sigma[a] as f64 / bd.sigma[b] as f64 * (1.0 + bd.delta[b])
        } else if bd.dist[b] + 1 == bd.dist[a] {
            bd.sigma[b] as f64 / bd.sigma[a] as f64 * (1.0 + bd.delta[a])
        } else {
            0.0
        }
    };
    for e in g.edges() {
        // An edge absent on one side contributes nothing on that side.
        let old_c = if Some(e) == added { 0.0 } else { contribution(&old, e) };
        let want = contribution(&new, e) - old_c;
        let got = d.ebc.get(&e).copied().unwrap_or(0.0);
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1.0),
            "{ctx}: edge delta at {e}: pushed {got}, want {want}"
        );
    }
    if let Some(e) = removed {
        assert!(
            !d.ebc.contains_key(&e),
            "{ctx}: pushed a delta for the removed edge"
        );
    }
    d.case
}

fn graph(n: usize, edges: &[(u32, u32)]) -> DynamicGraph {
    DynamicGraph::from_edges(n, edges)
}

fn defaults() -> UpdateOptions {
    UpdateOptions::default()
}

#[test]
fn removal_with_pivot_repairs_two_levels() {
    // Hexagon: after dropping (1, 2), vertex 3 hangs on via 5 and vertex 2
    // dangles off 3 two levels lower than it started.
    let g = graph(6, &[(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 3)]);
    let case = check_drive(&g, EdgeEvent::remove(1, 2), 0, &defaults());
    assert_eq!(case, UpdateCase::RemoveLevelRise);

    let d = drive(&g, EdgeEvent::remove(1, 2), 0, &defaults());
    assert_eq!(d.bd.dist[2], 4);
    assert_eq!(d.bd.dist[3], 3);
    assert_eq!(d.bd.sigma[3], 1);
}

#[test]
fn bridge_removal_clears_the_far_side() {
    let g = graph(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]);
    let case = check_drive(&g, EdgeEvent::remove(3, 4), 0, &defaults());
    assert_eq!(case, UpdateCase::Disconnect);

    let d = drive(&g, EdgeEvent::remove(3, 4), 0, &defaults());
    assert_eq!(d.bd.dist[4], UNREACHABLE);
    assert_eq!(d.bd.sigma[4], 0);
}

#[test]
fn sibling_keeps_the_rise_to_one_level() {
    let g = graph(5, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)]);
    let case = check_drive(&g, EdgeEvent::remove(1, 3), 0, &defaults());
    assert_eq!(case, UpdateCase::RemoveLevelRiseByOne);

    let d = drive(&g, EdgeEvent::remove(1, 3), 0, &defaults());
    assert_eq!(d.bd.dist[3], 3);

    // Same event through the general flood must agree everywhere.
    let via_flood = UpdateOptions {
        one_level_rise: false,
    };
    let case = check_drive(&g, EdgeEvent::remove(1, 3), 0, &via_flood);
    assert_eq!(case, UpdateCase::RemoveLevelRise);
}

#[test]
fn surviving_predecessor_keeps_levels_on_removal() {
    let g = graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    let case = check_drive(&g, EdgeEvent::remove(1, 3), 0, &defaults());
    assert_eq!(case, UpdateCase::RemoveNoLevelChange);

    let d = drive(&g, EdgeEvent::remove(1, 3), 0, &defaults());
    assert_eq!(d.bd.dist[3], 2);
    assert_eq!(d.bd.sigma[3], 1);
}

#[test]
fn insertion_across_adjacent_levels_adds_paths() {
    let g = graph(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
    let case = check_drive(&g, EdgeEvent::add(1, 3), 0, &defaults());
    assert_eq!(case, UpdateCase::AddNoLevelChange);

    let d = drive(&g, EdgeEvent::add(1, 3), 0, &defaults());
    assert_eq!(d.bd.dist[3], 2);
    assert_eq!(d.bd.sigma[3], 2);
}

#[test]
fn insertion_across_a_gap_drops_levels() {
    let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
    let case = check_drive(&g, EdgeEvent::add(0, 3), 0, &defaults());
    assert_eq!(case, UpdateCase::AddLevelDrop);

    let d = drive(&g, EdgeEvent::add(0, 3), 0, &defaults());
    assert_eq!(d.bd.dist[3], 1);
    assert_eq!(d.bd.dist[2], 2);
    assert_eq!(d.bd.sigma[2], 2);
}

#[test]
fn insertion_into_unreachable_territory_merges() {
    let g = graph(4, &[(0, 1), (2, 3)]);
    let case = check_drive(&g, EdgeEvent::add(1, 2), 0, &defaults());
    assert_eq!(case, UpdateCase::Merge);

    let d = drive(&g, EdgeEvent::add(1, 2), 0, &defaults());
    assert_eq!(d.bd.dist, vec![0, 1, 2, 3]);
    assert_eq!(d.bd.sigma, vec![1, 1, 1, 1]);
}

#[test]
fn same_level_events_change_nothing() {
    let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let case = check_drive(&c4, EdgeEvent::add(1, 3), 0, &defaults());
    assert_eq!(case, UpdateCase::Unaffected);

    let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
    let case = check_drive(&tri, EdgeEvent::remove(1, 2), 0, &defaults());
    assert_eq!(case, UpdateCase::Unaffected);
}

#[test]
fn events_between_unreachable_vertices_are_skipped() {
    let g = graph(4, &[(0, 1), (2, 3)]);
    let case = check_drive(&g, EdgeEvent::remove(2, 3), 0, &defaults());
    assert_eq!(case, UpdateCase::Unaffected);

    let g = graph(4, &[(0, 1)]);
    let case = check_drive(&g, EdgeEvent::add(2, 3), 1, &defaults());
    assert_eq!(case, UpdateCase::Unaffected);
}

#[test]
fn serial_state_tracks_a_scripted_stream() {
    let mut state = SerialState::from_graph(graph(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]));
    let script = [
        EdgeEvent::remove(3, 4),
        EdgeEvent::add(1, 4),
        EdgeEvent::add(0, 3),
        EdgeEvent::remove(1, 3),
        EdgeEvent::remove(0, 3),
        EdgeEvent::add(3, 4),
        EdgeEvent::remove(2, 3),
    ];
    for (i, e) in script.iter().enumerate() {
        state.apply(e).unwrap();
        assert_state_consistent(&state, 1e-9, &format!("after event {i} ({e:?})"));
    }
}

#[test]
fn tearing_down_a_path_empties_the_scores() {
    let mut state = SerialState::from_graph(graph(2, &[(0, 1)]));
    state.apply(&EdgeEvent::remove(0, 1)).unwrap();
    assert_eq!(state.scores.vbc, vec![0.0, 0.0]);
    assert!(state.scores.ebc.is_empty());
    assert!(!state.bd[0].reachable(1));
    assert!(!state.bd[1].reachable(0));
}

#[test]
fn fresh_ids_grow_the_graph() {
    let mut state = SerialState::from_graph(graph(2, &[(0, 1)]));
    // A detached pair on brand-new ids: both sources see a merge, and the
    // new edge carries one ordered pair each way.
    state.apply(&EdgeEvent::add(2, 3)).unwrap();
    assert_eq!(state.graph.vertex_count(), 4);
    assert_eq!(state.scores.ebc[&Edge::new(2, 3)], 2.0);
    assert_state_consistent(&state, 1e-9, "after growth");

    state.apply(&EdgeEvent::add(1, 2)).unwrap();
    assert_state_consistent(&state, 1e-9, "after joining the pair");
}

#[test]
fn invalid_events_are_rejected_in_place() {
    let mut state = SerialState::from_graph(graph(3, &[(0, 1), (1, 2)]));
    assert_eq!(
        state.apply(&EdgeEvent::add(1, 1)),
        Err(EventError::SelfLoop(1))
    );
    assert_eq!(
        state.apply(&EdgeEvent::add(0, 1)),
        Err(EventError::EdgeExists(0, 1))
    );
    assert_eq!(
        state.apply(&EdgeEvent::remove(0, 2)),
        Err(EventError::EdgeMissing(0, 2))
    );
    assert_eq!(
        state.apply(&EdgeEvent::remove(0, 7)),
        Err(EventError::VertexOutOfRange { id: 7, n: 3 })
    );
    assert_eq!(
        state.apply(&EdgeEvent::add(0, 9)),
        Err(EventError::VertexOutOfRange { id: 9, n: 3 })
    );
    // Nothing above may have touched the state.
    assert_state_consistent(&state, 1e-12, "after rejected events");
    assert_eq!(state.graph.edge_count(), 2);
}
