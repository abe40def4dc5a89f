//! Brute-force betweenness straight from the definition.
//!
//! All-pairs BFS fills distance and path-count matrices; scores are then
//! counted by testing every (s, t, x) triple with
//! `d(s,x) + d(x,t) == d(s,t)` (and the directed-edge variant for EBC).
//! Deliberately naive and structurally unrelated to the production pass so
//! the two can check each other. Quadratic memory, roughly cubic time; hard
//! size guard because of it.

use crate::brandes::{CentralityScores, Distance, SourceData, UNREACHABLE};
use crate::graph::{DynamicGraph, VertexId};

pub const ORACLE_MAX_VERTICES: usize = 2048;

#[derive(thiserror::Error, Debug)]
#[error("oracle refuses {0} vertices (limit {ORACLE_MAX_VERTICES})")]
pub struct TooLarge(pub usize);

struct Matrices {
    d: Vec<Vec<Distance>>,
    sig: Vec<Vec<u64>>,
}

fn all_pairs(g: &DynamicGraph) -> Matrices {
    let n = g.vertex_count();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    let mut sig = vec![vec![0u64; n]; n];
    for s in 0..n {
        let dr = &mut d[s];
        let sr = &mut sig[s];
        dr[s] = 0;
        sr[s] = 1;
        let mut queue = std::collections::VecDeque::from([s as VertexId]);
        while let Some(v) = queue.pop_front() {
            let dv = dr[v as usize];
            let sv = sr[v as usize];
            for &w in g.neighbors(v) {
                let wi = w as usize;
                if dr[wi] == UNREACHABLE {
                    dr[wi] = dv + 1;
                    queue.push_back(w);
                }
                if dr[wi] == dv + 1 {
                    sr[wi] += sv;
                }
            }
        }
    }
    Matrices { d, sig }
}

/// VBC and EBC by definition, ordered-pair convention.
pub fn oracle_scores(g: &DynamicGraph) -> Result<CentralityScores, TooLarge> {
    let n = g.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        return Err(TooLarge(n));
    }
    let m = all_pairs(g);
    let mut scores = CentralityScores::zeroed_for(g);

    for s in 0..n {
        for t in 0..n {
            if s == t || m.sig[s][t] == 0 {
                continue;
            }
            let dst = m.d[s][t];
            let paths = m.sig[s][t] as f64;
            for x in 0..n {
                if x == s || x == t {
                    continue;
                }
                if m.d[s][x] != UNREACHABLE
                    && m.d[x][t] != UNREACHABLE
                    && m.d[s][x] + m.d[x][t] == dst
                {
                    scores.vbc[x] += m.sig[s][x] as f64 * m.sig[x][t] as f64 / paths;
                }
            }
        }
    }

    let edges: Vec<_> = g.edges().collect();
    for e in edges {
        let mut total = 0.0;
        for s in 0..n {
            for t in 0..n {
                if s == t || m.sig[s][t] == 0 {
                    continue;
                }
                let dst = m.d[s][t];
                let paths = m.sig[s][t] as f64;
                for (a, b) in [(e.u as usize, e.v as usize), (e.v as usize, e.u as usize)] {
                    if m.d[s][a] != UNREACHABLE
                        && m.d[b][t] != UNREACHABLE
                        && m.d[s][a] + 1 + m.d[b][t] == dst
                    {
                        total += m.sig[s][a] as f64 * m.sig[b][t] as f64 / paths;
                    }
                }
            }
        }
        scores.ebc.insert(e, total);
    }
    Ok(scores)
}

/// One source's d / sigma / delta rows by definition. Independent check of
/// the per-source records the incremental kernels maintain.
pub fn oracle_source_data(g: &DynamicGraph, s: VertexId) -> Result<SourceData, TooLarge> {
    let n = g.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        return Err(TooLarge(n));
    }
    let m = all_pairs(g);
    let si = s as usize;
    let mut delta = vec![0.0; n];
    for v in 0..n {
        if v == si || m.d[si][v] == UNREACHABLE {
            continue;
        }
        for t in 0..n {
            if t == si || t == v || m.sig[si][t] == 0 {
                continue;
            }
            if m.d[v][t] != UNREACHABLE && m.d[si][v] + m.d[v][t] == m.d[si][t] {
                delta[v] += m.sig[si][v] as f64 * m.sig[v][t] as f64 / m.sig[si][t] as f64;
            }
        }
    }
    Ok(SourceData {
        dist: m.d[si].clone(),
        sigma: m.sig[si].clone(),
        delta,
    })
}

/// Sums that every exact state must satisfy: over ordered reachable pairs
/// (s, t), sum of EBC equals sum of d(s,t) and sum of VBC equals sum of
/// (d(s,t) - 1). Cheap enough to run after every streamed event.
pub fn conservation_targets(g: &DynamicGraph) -> (f64, f64) {
    let n = g.vertex_count();
    let mut ebc_target = 0.0;
    let mut vbc_target = 0.0;
    for s in 0..n as VertexId {
        let mut dist = vec![UNREACHABLE; n];
        dist[s as usize] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if dist[w as usize] == UNREACHABLE {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        for t in 0..n {
            if t != s as usize && dist[t] != UNREACHABLE {
                ebc_target += dist[t] as f64;
                vbc_target += dist[t] as f64 - 1.0;
            }
        }
    }
    (vbc_target, ebc_target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn p3_by_definition() {
        let g = DynamicGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let sc = oracle_scores(&g).unwrap();
        assert_eq!(sc.vbc, vec![0.0, 2.0, 0.0]);
        assert_eq!(sc.ebc[&Edge::new(0, 1)], 4.0);
        assert_eq!(sc.ebc[&Edge::new(1, 2)], 4.0);
    }

    #[test]
    fn four_cycle_by_definition() {
        // 0-1, 0-2, 1-3, 2-3: two shortest routes between 0 and 3. Each edge
        // serves two endpoint pairs fully and four opposite-corner pairs at
        // half weight: 1+1+4*(1/2) = 4.
        let g = DynamicGraph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let sc = oracle_scores(&g).unwrap();
        assert_eq!(sc.vbc, vec![1.0, 1.0, 1.0, 1.0]);
        for (_, &x) in &sc.ebc {
            assert_eq!(x, 4.0);
        }
    }

    #[test]
    fn source_rows_match_hand_values() {
        let g = DynamicGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let bd = oracle_source_data(&g, 0).unwrap();
        assert_eq!(bd.dist, vec![0, 1, 2, 1]);
        assert_eq!(bd.sigma, vec![1, 1, 2, 1]);
        assert_eq!(bd.delta, vec![0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn conservation_on_p4() {
        // Ordered pairs of P4: distances 1,2,3 each twice, plus inner pair.
        let g = DynamicGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let (vbc_t, ebc_t) = conservation_targets(&g);
        let sc = oracle_scores(&g).unwrap();
        let vbc_sum: f64 = sc.vbc.iter().sum();
        let ebc_sum: f64 = sc.ebc.values().sum();
        assert_eq!(vbc_sum, vbc_t);
        assert_eq!(ebc_sum, ebc_t);
        assert_eq!(ebc_t, 20.0);
        assert_eq!(vbc_t, 8.0);
    }

    #[test]
    fn size_guard() {
        let g = DynamicGraph::new(ORACLE_MAX_VERTICES + 1);
        assert!(oracle_scores(&g).is_err());
    }
}
