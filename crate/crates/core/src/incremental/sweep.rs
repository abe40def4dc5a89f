//! The shared dependency sweep.
//!
//! Every update case ends here. Its BFS phase has already repaired distances
//! and path counts for the vertices it touched and queued them, at their new
//! levels, in the level queues. The sweep then walks levels deepest-first and
//! settles dependencies, pushing vertex/edge score deltas as it goes.
//!
//! Two kinds of vertices are swept:
//!
//! * `Changed`: distance or path count moved. Dependency is rebuilt from
//!   zero out of every DAG edge below (the BFS phases guarantee that all
//!   successors of a changed vertex were touched too, so no edge is missed).
//! * `Fringe`: distance and path count kept. Dependency is patched by the
//!   difference between the new and old contribution of each touched
//!   successor edge. Fringe vertices are discovered lazily right here and
//!   ride the queues up toward the source.
//!
//! Edges whose endpoints land on the same new level but sat on different old
//! levels are dead: they carried a contribution and no longer do. They are
//! settled once (a shared marker set dedups the two sightings) before the
//! popped vertex pushes anything upward, so its own dependency is final
//! first.

use super::scratch::{Flag, UpdateScratch};
use super::PartialScores;
use crate::brandes::{SourceData, UNREACHABLE};
use crate::graph::{DynamicGraph, Edge, VertexId};

pub(super) struct SweepCtx {
    pub s: VertexId,
    /// Canonical endpoints of a just-added edge: it carried nothing before,
    /// so its old contribution is forced to zero. None for removals (the
    /// removed edge is out of the adjacency and never scanned).
    pub added_edge: Option<(VertexId, VertexId)>,
}

/// Contribution the edge {a, b} carried in the old state, directed by the
/// old levels. Zero if it was on no shortest path (same level, unreachable
/// ends, level gap) or if it did not exist yet.
pub(super) fn old_contribution(bd: &SourceData, a: VertexId, b: VertexId, ctx: &SweepCtx) -> f64 {
    if let Some((x, y)) = ctx.added_edge {
        if (a.min(b), a.max(b)) == (x, y) {
            return 0.0;
        }
    }
    let (da, db) = (bd.dist[a as usize], bd.dist[b as usize]);
    if da == UNREACHABLE || db == UNREACHABLE {
        return 0.0;
    }
    if da + 1 == db {
        bd.sigma[a as usize] as f64 / bd.sigma[b as usize] as f64 * (1.0 + bd.delta[b as usize])
    } else if db + 1 == da {
        bd.sigma[b as usize] as f64 / bd.sigma[a as usize] as f64 * (1.0 + bd.delta[a as usize])
    } else {
        0.0
    }
}

/// Removal of (uh, ul) takes the edge's old contribution out of uh's
/// dependency and queues uh so the loss propagates to its ancestors. The
/// edge's own score entry is dropped by the caller, not adjusted here.
pub(super) fn seed_removed_edge(
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    s: VertexId,
    uh: VertexId,
    ul: VertexId,
) {
    if uh == s {
        return;
    }
    debug_assert_eq!(scratch.flag(uh), Flag::None);
    let alpha = bd.sigma[uh as usize] as f64 / bd.sigma[ul as usize] as f64
        * (1.0 + bd.delta[ul as usize]);
    scratch.touch(uh, bd, Flag::Fringe);
    scratch.add_delta(uh, -alpha);
    scratch.lq.push(bd.dist[uh as usize] as usize, uh);
}

pub(super) fn dependency_sweep(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    out: &mut PartialScores,
    ctx: &SweepCtx,
) {
    let mut level = scratch.lq.max_level;
    while level >= 1 {
        while let Some(w) = scratch.lq.pop(level) {
            let wi = w as usize;
            debug_assert!(matches!(scratch.flag(w), Flag::Changed | Flag::Fringe));
            let dw = scratch.dist_of(w, bd);
            debug_assert_eq!(dw as usize, level);

            // Dead same-level edges first: they may adjust delta of w itself.
            for &v in g.neighbors(w) {
                if v == w {
                    continue;
                }
                let dv = scratch.dist_of(v, bd);
                if dv != dw {
                    continue;
                }
                settle_dead_edge(g, bd, scratch, out, ctx, w, v, dw as usize);
            }

            let coeff = 1.0 + scratch.delta_new(w);
            let sw = scratch.sigma_of(w, bd);
            debug_assert!(sw > 0, "reachable vertex {w} with no paths");

            for &v in g.neighbors(w) {
                let dv = scratch.dist_of(v, bd);
                debug_assert_ne!(dv, UNREACHABLE, "unreachable neighbor in sweep");
                if dv >= dw {
                    // Same level settled above; deeper edges were this
                    // vertex's own predecessor edges in an earlier level.
                    continue;
                }
                debug_assert_eq!(dv + 1, dw);
                let c = scratch.sigma_of(v, bd) as f64 / sw as f64 * coeff;
                let alpha = old_contribution(bd, v, w, ctx);
                out.ebc.push((Edge::new(v, w), c - alpha));
                if v == ctx.s {
                    continue;
                }
                match scratch.flag(v) {
                    Flag::None => {
                        scratch.touch(v, bd, Flag::Fringe);
                        scratch.lq.push(dv as usize, v);
                        scratch.add_delta(v, c - alpha);
                    }
                    Flag::Fringe => {
                        // A fringe vertex kept its old level, so the old
                        // contribution it loses can only be the unflipped
                        // direction (or nothing).
                        debug_assert!(
                            alpha == 0.0
                                || bd.dist[vi_of(v)] + 1 == bd.dist[wi],
                            "flipped edge reached a fringe vertex"
                        );
                        scratch.add_delta(v, c - alpha);
                    }
                    Flag::Changed => {
                        // Fresh rebuild: no old value to take out.
                        scratch.add_delta(v, c);
                    }
                    other => unreachable!("flag {other:?} on predecessor {v}"),
                }
            }

            if w != ctx.s {
                out.vbc.push((w, scratch.delta_new(w) - bd.delta[wi]));
            }
        }
        level -= 1;
    }
}

fn vi_of(v: VertexId) -> usize {
    v as usize
}

/// An edge whose endpoints ended on one level but started on two carried a
/// contribution that is now gone: take it out of the edge score and out of
/// the old closer endpoint's dependency (unless that endpoint is rebuilt
/// fresh anyway).
fn settle_dead_edge(
    _g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    out: &mut PartialScores,
    ctx: &SweepCtx,
    w: VertexId,
    v: VertexId,
    level: usize,
) {
    let alpha = old_contribution(bd, v, w, ctx);
    if alpha == 0.0 {
        return;
    }
    if !scratch.mark_edge(v, w) {
        return;
    }
    out.ebc.push((Edge::new(v, w), -alpha));

    let (odv, odw) = (bd.dist[v as usize], bd.dist[w as usize]);
    debug_assert!(odv != odw, "alpha nonzero needs distinct old levels");
    let closer = if odv < odw { v } else { w };
    debug_assert_ne!(closer, ctx.s, "source cannot sit on a sweep level");
    match scratch.flag(closer) {
        Flag::None => {
            debug_assert_ne!(closer, w, "popped vertex is always touched");
            scratch.touch(closer, bd, Flag::Fringe);
            scratch.lq.push(level, closer);
            scratch.add_delta(closer, -alpha);
        }
        Flag::Fringe => scratch.add_delta(closer, -alpha),
        Flag::Changed => {}
        other => unreachable!("flag {other:?} on dead edge endpoint {closer}"),
    }
}
