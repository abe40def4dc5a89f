//! Removal kernels for the hard cases: the far endpoint lost its only
//! predecessor, so some set of vertices sinks to deeper levels (or falls off
//! the component entirely).
//!
//! The flood walks the far endpoint's old successor and same-level edges and
//! marks everything that might be affected. A flooded vertex that still has
//! an untouched old predecessor provably keeps its distance; those pivots
//! anchor the repair, a multi-source BFS that reassigns distances and path
//! counts across the flooded region. No pivots at all means the removed edge
//! was a bridge and the far side is gone.
//!
//! When the far endpoint has a same-level neighbor, every sinking vertex
//! sinks exactly one level (each keeps either a surviving predecessor chain
//! or a same-level neighbor to hang from), and a leaner single pass handles
//! it without flooding.

use super::scratch::{Flag, UpdateScratch};
use super::PartialScores;
use crate::brandes::{SourceData, UNREACHABLE};
use crate::graph::{DynamicGraph, Edge, VertexId};

/// Marks everything whose distance or path count may change, and collects
/// pivots. Returns true if at least one pivot exists (repair is possible).
pub(super) fn flood_affected(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    ul: VertexId,
) -> bool {
    scratch.touch(ul, bd, Flag::Flooded);
    scratch.cur.push_back(ul);
    while let Some(v) = scratch.cur.pop_front() {
        let dv = bd.dist[v as usize];
        let mut keeps_distance = false;
        for &w in g.neighbors(v) {
            let dw = bd.dist[w as usize];
            debug_assert_ne!(dw, UNREACHABLE);
            if dw == dv - 1 {
                if scratch.flag(w) == Flag::None {
                    // An untouched old predecessor still delivers v at its
                    // old distance. (Affected predecessors are always marked
                    // before v pops, so this read is stable.)
                    keeps_distance = true;
                }
            } else if dw == dv || dw == dv + 1 {
                if scratch.flag(w) == Flag::None {
                    scratch.touch(w, bd, Flag::Flooded);
                    scratch.cur.push_back(w);
                }
            }
        }
        if keeps_distance {
            scratch.set_flag(v, Flag::Pivot);
            scratch.pq.push(dv as usize, v);
        }
    }
    !scratch.pq.is_empty()
}

/// Multi-source BFS from the pivots, injected level by level, reassigning
/// distances and rebuilding path counts across the flooded region. Every
/// flooded vertex is reached (the flood has no way around them).
pub(super) fn repair_flooded(g: &DynamicGraph, bd: &SourceData, scratch: &mut UpdateScratch) {
    debug_assert!(!scratch.pq.is_empty());
    let mut level = 0;
    while scratch.pq.level_is_empty(level) {
        level += 1;
    }
    inject_pivots(scratch, level);

    while !(scratch.cur.is_empty() && scratch.pq.is_empty() && scratch.next.is_empty()) {
        while let Some(v) = scratch.cur.pop_front() {
            debug_assert_eq!(scratch.flag(v), Flag::Changed);
            debug_assert_eq!(scratch.dist_of(v, bd) as usize, level);

            let mut sig: u64 = 0;
            for &w in g.neighbors(v) {
                // A neighbor's distance is final if it was never touched,
                // or if repair has already assigned it. Still-flooded ones
                // are going to land deeper than us; skip them.
                let final_d = match scratch.flag(w) {
                    Flag::None => Some(bd.dist[w as usize]),
                    Flag::Changed => Some(scratch.dist_of(w, bd)),
                    Flag::Flooded | Flag::Pivot => None,
                    other => unreachable!("flag {other:?} during repair"),
                };
                if final_d == Some(level as u32 - 1) {
                    sig += scratch.sigma_of(w, bd);
                }
            }
            debug_assert!(sig > 0, "repaired vertex {v} ended with no paths");
            scratch.set_sigma(v, sig);

            for &w in g.neighbors(v) {
                if scratch.flag(w) == Flag::Flooded {
                    scratch.set_flag(w, Flag::Changed);
                    scratch.set_dist(w, level as u32 + 1);
                    scratch.lq.push(level + 1, w);
                    scratch.next.push_back(w);
                }
            }
        }
        level += 1;
        std::mem::swap(&mut scratch.cur, &mut scratch.next);
        inject_pivots(scratch, level);
    }
}

fn inject_pivots(scratch: &mut UpdateScratch, level: usize) {
    while let Some(p) = scratch.pq.pop(level) {
        debug_assert_eq!(scratch.flag(p), Flag::Pivot);
        scratch.set_flag(p, Flag::Changed);
        scratch.lq.push(level, p);
        scratch.cur.push_back(p);
    }
}

/// Fast path when the far endpoint has a same-level neighbor: every vertex
/// that lost all its shortest paths sinks exactly one level. One wave pass
/// settles distances and path counts without flooding.
pub(super) fn one_level_rise(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    ul: VertexId,
) {
    let base = bd.dist[ul as usize];
    scratch.touch(ul, bd, Flag::Changed);
    scratch.set_dist(ul, base + 1);
    scratch.lq.push(base as usize + 1, ul);
    scratch.cur.push_back(ul);
    let mut wave = base + 1;

    while !scratch.cur.is_empty() {
        while let Some(v) = scratch.cur.pop_front() {
            let vi = v as usize;
            let odv = bd.dist[vi];
            let rose = scratch.dist_of(v, bd) == odv + 1;
            debug_assert_eq!(scratch.dist_of(v, bd), wave);

            let mut sig: u64 = 0;
            for &w in g.neighbors(v) {
                let cd = scratch.dist_of(w, bd);
                if cd == wave - 1 {
                    debug_assert!(
                        !(rose
                            && bd.dist[w as usize] + 1 == odv
                            && scratch.flag(w) == Flag::None),
                        "sunk vertex {v} kept an untouched predecessor"
                    );
                    sig += scratch.sigma_of(w, bd);
                }
            }
            debug_assert!(sig > 0);
            scratch.set_sigma(v, sig);

            for &w in g.neighbors(v) {
                if scratch.flag(w) != Flag::None {
                    continue;
                }
                let odw = bd.dist[w as usize];
                if odw != odv + 1 {
                    continue;
                }
                // Old successor of v. It sinks only if every old predecessor
                // sank; any untouched or level-keeping predecessor holds it.
                let sinks = rose && all_old_predecessors_sank(g, bd, scratch, w);
                scratch.touch(w, bd, Flag::Changed);
                if sinks {
                    scratch.set_dist(w, odw + 1);
                    scratch.lq.push(odw as usize + 1, w);
                    scratch.next.push_back(w);
                } else {
                    scratch.lq.push(odw as usize, w);
                    if odw == wave {
                        // Keeps its level, which is the wave being drained.
                        scratch.cur.push_back(w);
                    } else {
                        debug_assert_eq!(odw, wave + 1);
                        scratch.next.push_back(w);
                    }
                }
            }
        }
        std::mem::swap(&mut scratch.cur, &mut scratch.next);
        wave += 1;
    }
}

fn all_old_predecessors_sank(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &UpdateScratch,
    w: VertexId,
) -> bool {
    let odw = bd.dist[w as usize];
    for &z in g.neighbors(w) {
        if bd.dist[z as usize] + 1 != odw {
            continue;
        }
        let kept = match scratch.flag(z) {
            Flag::None => true,
            Flag::Changed => scratch.dist_of(z, bd) == bd.dist[z as usize],
            other => unreachable!("flag {other:?} in sink check"),
        };
        if kept {
            return false;
        }
    }
    true
}

/// No pivots: the removed edge was a bridge and the flooded set is exactly
/// the lost component. Clear it and take its contributions out of the
/// scores; the sweep then fixes the surviving side through the near
/// endpoint as usual.
pub(super) fn clear_lost_side(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    out: &mut PartialScores,
    s: VertexId,
) {
    for i in 0..scratch.touched.len() {
        let v = scratch.touched[i];
        let vi = v as usize;
        debug_assert_eq!(scratch.flag(v), Flag::Flooded);
        debug_assert_ne!(v, s);
        scratch.set_flag(v, Flag::Cleared);
        scratch.set_dist(v, UNREACHABLE);
        scratch.set_sigma(v, 0);

        // This source no longer contributes through v at all.
        out.vbc.push((v, -bd.delta[vi]));
        let dv = bd.dist[vi];
        for &w in g.neighbors(v) {
            if bd.dist[w as usize] == dv + 1 {
                let alpha = bd.sigma[vi] as f64 / bd.sigma[w as usize] as f64
                    * (1.0 + bd.delta[w as usize]);
                out.ebc.push((Edge::new(v, w), -alpha));
            }
        }
    }
}
