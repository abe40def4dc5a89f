//! Seeded random graphs and event streams for tests and benchmarks.

use crate::graph::DynamicGraph;
use crate::incremental::EdgeEvent;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Uniform simple graph with `n` vertices and exactly `m` edges.
pub fn gnm(n: usize, m: usize, seed: u64) -> DynamicGraph {
    let max = n * n.saturating_sub(1) / 2;
    assert!(m <= max, "{m} edges do not fit in {n} vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DynamicGraph::new(n);
    while g.edge_count() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Random connected graph: a random spanning tree plus `m - (n - 1)` extra
/// uniform edges.
pub fn connected_gnm(n: usize, m: usize, seed: u64) -> DynamicGraph {
    assert!(n >= 1);
    assert!(m + 1 >= n, "{m} edges cannot connect {n} vertices");
    let max = n * n.saturating_sub(1) / 2;
    assert!(m <= max, "{m} edges do not fit in {n} vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let mut g = DynamicGraph::new(n);
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        g.add_edge(order[i], parent).unwrap();
    }
    while g.edge_count() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Ring lattice (each vertex tied to `k / 2` neighbors per side) with each
/// lattice edge rewired to a uniform target with probability `beta`. Keeps
/// exactly `n * k / 2` edges. `beta` well above zero matters for path-count
/// growth: near-lattices stack up astronomically many shortest paths.
pub fn small_world(n: usize, k: usize, beta: f64, seed: u64) -> DynamicGraph {
    assert!(k % 2 == 0 && k >= 2, "k must be even and positive");
    assert!(k < n, "lattice degree {k} too large for {n} vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DynamicGraph::new(n);
    for j in 1..=k / 2 {
        for i in 0..n {
            let u = i as u32;
            let v = ((i + j) % n) as u32;
            let preferred = if rng.random_bool(beta) { None } else { Some(v) };
            insert_one(&mut g, &mut rng, u, preferred);
        }
    }
    g
}

/// Inserts exactly one new edge at `u`, preferring `preferred` when it is
/// still open, so the generators above keep their exact edge budgets even
/// when rewires collide.
fn insert_one(g: &mut DynamicGraph, rng: &mut ChaCha8Rng, u: u32, preferred: Option<u32>) {
    if let Some(v) = preferred {
        if v != u && g.add_edge(u, v).unwrap() {
            return;
        }
    }
    let n = g.vertex_count() as u32;
    for _ in 0..64 {
        let t = rng.random_range(0..n);
        if t != u && g.add_edge(u, t).unwrap() {
            return;
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if g.add_edge(a, b).unwrap() {
                return;
            }
        }
    }
    unreachable!("graph is complete");
}

/// Mixed stream of valid insertions and removals against `g`, simulated on
/// a copy so every event is applicable in order. `p_add` is the chance an
/// event inserts (when both directions are possible).
pub fn random_events(g: &DynamicGraph, count: usize, p_add: f64, seed: u64) -> Vec<EdgeEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sim = g.clone();
    let n = sim.vertex_count() as u32;
    let max = (n as usize) * (n as usize - 1) / 2;
    let mut edges: Vec<(u32, u32)> = sim.edges().map(|e| (e.u, e.v)).collect();
    let mut events = Vec::with_capacity(count);
    for _ in 0..count {
        let add = if edges.is_empty() {
            true
        } else if edges.len() == max {
            false
        } else {
            rng.random_bool(p_add)
        };
        if add {
            loop {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u != v && sim.add_edge(u, v).unwrap() {
                    edges.push((u.min(v), u.max(v)));
                    events.push(EdgeEvent::add(u, v));
                    break;
                }
            }
        } else {
            let i = rng.random_range(0..edges.len());
            let (u, v) = edges.swap_remove(i);
            sim.remove_edge(u, v).unwrap();
            events.push(EdgeEvent::remove(u, v));
        }
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnm_hits_requested_size() {
        let g = gnm(20, 35, 7);
        assert_eq!(g.vertex_count(), 20);
        assert_eq!(g.edge_count(), 35);
    }

    #[test]
    fn connected_gnm_is_connected() {
        for seed in 0..5 {
            let g = connected_gnm(30, 40, seed);
            assert_eq!(g.edge_count(), 40);
            let bd = crate::brandes::brandes_single_source(&g, 0);
            assert!((0..30).all(|v| bd.reachable(v)), "seed {seed} disconnected");
        }
    }

    #[test]
    fn small_world_keeps_edge_budget() {
        let g = small_world(100, 6, 0.2, 11);
        assert_eq!(g.edge_count(), 300);
        for v in 0..100 {
            assert!(g.degree(v) >= 1);
        }
    }

    #[test]
    fn event_stream_replays_cleanly() {
        let g = gnm(15, 20, 3);
        let events = random_events(&g, 200, 0.5, 4);
        assert_eq!(events.len(), 200);
        let mut replay = g.clone();
        for e in &events {
            let ok = match e.kind {
                crate::incremental::EventKind::Add => replay.add_edge(e.u, e.v).unwrap(),
                crate::incremental::EventKind::Remove => replay.remove_edge(e.u, e.v).unwrap(),
            };
            assert!(ok, "event {e:?} was a no-op");
        }
    }
}
