//! Shared helpers for the integration tests: a textbook predecessor-list
//! betweenness implementation kept deliberately independent of the library's
//! internals, plus comparison plumbing.

#![allow(dead_code)]

use sbc::brandes::{CentralityScores, SourceData, UNREACHABLE};
use sbc::graph::{DynamicGraph, Edge, VertexId};
use sbc::incremental::SerialState;
use std::collections::VecDeque;

/// Classic single-source pass with explicit predecessor lists and a stack.
/// Accumulates into `scores` when given.
pub fn reference_source(
    g: &DynamicGraph,
    s: VertexId,
    mut scores: Option<&mut CentralityScores>,
) -> SourceData {
    let n = g.vertex_count();
    let mut dist = vec![UNREACHABLE; n];
    let mut sigma = vec![0u64; n];
    let mut delta = vec![0.0; n];
    let mut preds: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut q = VecDeque::new();

    dist[s as usize] = 0;
    sigma[s as usize] = 1;
    q.push_back(s);
    while let Some(v) = q.pop_front() {
        stack.push(v);
        for &w in g.neighbors(v) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = dist[v as usize] + 1;
                q.push_back(w);
            }
            if dist[w as usize] == dist[v as usize] + 1 {
                sigma[w as usize] += sigma[v as usize];
                preds[w as usize].push(v);
            }
        }
    }

    for &w in stack.iter().rev() {
        for &v in &preds[w as usize] {
            let c =
                sigma[v as usize] as f64 / sigma[w as usize] as f64 * (1.0 + delta[w as usize]);
            if v != s {
                delta[v as usize] += c;
            }
            if let Some(sc) = scores.as_deref_mut() {
                *sc.ebc.get_mut(&Edge::new(v, w)).unwrap() += c;
            }
        }
        if w != s {
            if let Some(sc) = scores.as_deref_mut() {
                sc.vbc[w as usize] += delta[w as usize];
            }
        }
    }

    SourceData { dist, sigma, delta }
}

pub fn reference_full(g: &DynamicGraph) -> (Vec<SourceData>, CentralityScores) {
    let mut scores = CentralityScores::zeroed_for(g);
    let bds = (0..g.vertex_count() as u32)
        .map(|s| reference_source(g, s, Some(&mut scores)))
        .collect();
    (bds, scores)
}

pub fn assert_source_matches(got: &SourceData, want: &SourceData, ctx: &str) {
    assert_eq!(got.dist, want.dist, "{ctx}: distances differ");
    assert_eq!(got.sigma, want.sigma, "{ctx}: path counts differ");
    for (v, (g, w)) in got.delta.iter().zip(&want.delta).enumerate() {
        let tol = 1e-12 * w.abs().max(1.0);
        assert!(
            (g - w).abs() <= tol,
            "{ctx}: dependency differs at vertex {v}: {g} vs {w}"
        );
    }
}

pub fn assert_scores_match(got: &CentralityScores, want: &CentralityScores, tol: f64, ctx: &str) {
    assert_eq!(got.vbc.len(), want.vbc.len(), "{ctx}: vertex count differs");
    for (v, (g, w)) in got.vbc.iter().zip(&want.vbc).enumerate() {
        let lim = tol * w.abs().max(1.0);
        assert!(
            (g - w).abs() <= lim,
            "{ctx}: vertex score differs at {v}: {g} vs {w}"
        );
    }
    assert_eq!(
        got.ebc.len(),
        want.ebc.len(),
        "{ctx}: edge score sets differ in size"
    );
    for (e, w) in &want.ebc {
        let g = got
            .ebc
            .get(e)
            .unwrap_or_else(|| panic!("{ctx}: missing edge score for {e}"));
        let lim = tol * w.abs().max(1.0);
        assert!(
            (g - w).abs() <= lim,
            "{ctx}: edge score differs at {e}: {g} vs {w}"
        );
    }
}

/// Full consistency check of live state against a from-scratch reference.
pub fn assert_state_consistent(state: &SerialState, tol: f64, ctx: &str) {
    let (want_bd, want_scores) = reference_full(&state.graph);
    for (s, (got, want)) in state.bd.iter().zip(&want_bd).enumerate() {
        assert_source_matches(got, want, &format!("{ctx} (source {s})"));
    }
    assert_scores_match(&state.scores, &want_scores, tol, ctx);
}
