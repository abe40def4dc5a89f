//! Insertion kernels. Which one runs depends on where the new edge lands in
//! the source's BFS tree: spanning one level (path counts grow, no distance
//! moves), spanning two or more (the far side drops closer), or reaching into
//! unreachable territory (a whole component merges in).

use super::scratch::{Flag, UpdateScratch};
use super::EventKind;
use crate::brandes::{SourceData, UNREACHABLE};
use crate::graph::{DynamicGraph, VertexId};

/// Endpoints one level apart: every shortest path through the edge is new
/// (insert) or gone (remove), so path counts shift by a fixed delta down the
/// far endpoint's successor cone while distances stay put. Shared by the
/// matching removal case, which only flips the sign (and whose caller seeds
/// the near endpoint separately).
pub(super) fn no_level_change(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    kind: EventKind,
    uh: VertexId,
    ul: VertexId,
) {
    let seed = bd.sigma[uh as usize] as i128;
    let seed = match kind {
        EventKind::Add => seed,
        EventKind::Remove => -seed,
    };
    scratch.touch(ul, bd, Flag::Changed);
    scratch.add_sigma(ul, seed);
    scratch.lq.push(bd.dist[ul as usize] as usize, ul);
    scratch.cur.push_back(ul);

    // Plain FIFO is level-ordered here: the cone only follows successor
    // edges, so a vertex pops strictly after all its cone predecessors.
    while let Some(v) = scratch.cur.pop_front() {
        let vi = v as usize;
        let shift = scratch.sigma_of(v, bd) as i128 - bd.sigma[vi] as i128;
        debug_assert_ne!(shift, 0);
        for &w in g.neighbors(v) {
            if bd.dist[w as usize] != UNREACHABLE && bd.dist[w as usize] == bd.dist[vi] + 1 {
                if scratch.flag(w) == Flag::None {
                    scratch.touch(w, bd, Flag::Changed);
                    scratch.lq.push(bd.dist[w as usize] as usize, w);
                    scratch.cur.push_back(w);
                }
                scratch.add_sigma(w, shift);
            }
        }
    }
}

/// Endpoints two or more levels apart: the far endpoint snaps to one past
/// the near one and the improvement cascades. Distances only ever shrink
/// here; path counts are rebuilt per vertex from its final predecessors.
pub(super) fn level_drop(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    uh: VertexId,
    ul: VertexId,
) {
    let new_dul = bd.dist[uh as usize] + 1;
    debug_assert!(new_dul < bd.dist[ul as usize]);
    scratch.touch(ul, bd, Flag::Changed);
    scratch.set_dist(ul, new_dul);
    scratch.lq.push(new_dul as usize, ul);

    scratch.cur.push_back(ul);
    let mut wave = new_dul;
    while !scratch.cur.is_empty() {
        while let Some(v) = scratch.cur.pop_front() {
            debug_assert_eq!(scratch.dist_of(v, bd), wave);
            // Final path count: all real predecessors are either untouched
            // (distance never moved) or already settled in an earlier wave.
            let mut sig: u64 = 0;
            for &w in g.neighbors(v) {
                if scratch.dist_of(w, bd) == wave - 1 {
                    sig += scratch.sigma_of(w, bd);
                }
            }
            debug_assert!(sig > 0);
            scratch.set_sigma(v, sig);

            for &w in g.neighbors(v) {
                if scratch.flag(w) != Flag::None {
                    continue;
                }
                let dw = bd.dist[w as usize];
                if dw > wave + 1 {
                    // Improves through v (this covers unreachable too, but
                    // insertion into reachable territory cannot reach it).
                    debug_assert_ne!(dw, UNREACHABLE);
                    scratch.touch(w, bd, Flag::Changed);
                    scratch.set_dist(w, wave + 1);
                    scratch.lq.push(wave as usize + 1, w);
                    scratch.next.push_back(w);
                } else if dw == wave + 1 {
                    // Keeps its distance but gains paths through v.
                    scratch.touch(w, bd, Flag::Changed);
                    scratch.lq.push(dw as usize, w);
                    scratch.next.push_back(w);
                }
            }
        }
        std::mem::swap(&mut scratch.cur, &mut scratch.next);
        wave += 1;
    }
}

/// One endpoint was unreachable: its whole component hangs off the new edge.
/// Fresh BFS over old-unreachable territory only; the reachable side keeps
/// its distances and counts untouched (the new edge is its only way in).
pub(super) fn component_merge(
    g: &DynamicGraph,
    bd: &SourceData,
    scratch: &mut UpdateScratch,
    uh: VertexId,
    ul: VertexId,
) {
    let base = bd.dist[uh as usize] + 1;
    scratch.touch(ul, bd, Flag::Changed);
    scratch.set_dist(ul, base);
    scratch.set_sigma(ul, bd.sigma[uh as usize]);
    scratch.lq.push(base as usize, ul);

    scratch.cur.push_back(ul);
    let mut wave = base;
    while !scratch.cur.is_empty() {
        while let Some(v) = scratch.cur.pop_front() {
            let sv = scratch.sigma_of(v, bd) as i128;
            for &w in g.neighbors(v) {
                if scratch.flag(w) == Flag::None {
                    if bd.dist[w as usize] != UNREACHABLE {
                        // Only the far endpoint borders old reachable
                        // ground, and that edge points up, not down.
                        debug_assert!(v == ul && w == uh);
                        continue;
                    }
                    scratch.touch(w, bd, Flag::Changed);
                    scratch.set_dist(w, wave + 1);
                    scratch.lq.push(wave as usize + 1, w);
                    scratch.next.push_back(w);
                }
                if scratch.dist_of(w, bd) == wave + 1 {
                    scratch.add_sigma(w, sv);
                }
            }
        }
        std::mem::swap(&mut scratch.cur, &mut scratch.next);
        wave += 1;
    }
}
