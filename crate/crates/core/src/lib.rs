//! Exact betweenness centrality (vertex and edge) for evolving graphs.
//!
//! The crate keeps, for every source vertex s, the BFS byproducts of a
//! predecessor-free Brandes pass: distances d, shortest-path counts sigma,
//! and dependencies delta. Streamed edge insertions and deletions patch those
//! arrays per source instead of recomputing them, and centrality scores are
//! corrected from the patches. Scores use the ordered-pair convention (each
//! unordered pair contributes from both directions; nothing is halved).

pub mod brandes;
pub mod engine;
pub mod gen;
pub mod gn;
pub mod graph;
pub mod incremental;
pub mod latency;
pub mod oracle;
pub mod state;
pub mod store;
pub mod stream;
