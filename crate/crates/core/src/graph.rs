//! Undirected simple graph over dense integer ids.
//!
//! Neighbor lists are kept in ascending order; every traversal in this crate
//! inherits its discovery order (and therefore its floating-point summation
//! order) from that, which is what makes results reproducible run to run.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};

pub type VertexId = u32;

/// Canonical undirected edge: smaller endpoint first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Edge {
        debug_assert_ne!(a, b, "self-loop");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    OutOfRange(VertexId, usize),
    #[error("self-loop on vertex {0} rejected")]
    SelfLoop(VertexId),
}

#[derive(Clone, Debug, Default)]
pub struct DynamicGraph {
    adj: Vec<Vec<VertexId>>,
    m: usize,
}

impl DynamicGraph {
    pub fn new(n: usize) -> DynamicGraph {
        DynamicGraph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Convenience constructor for tests and small fixtures.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> DynamicGraph {
        let mut g = DynamicGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v).expect("bad fixture edge");
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Appends an isolated vertex and returns its id (= old n).
    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        (self.adj.len() - 1) as VertexId
    }

    /// Drops vertices `n..` again. Only valid while they are still isolated;
    /// used to unwind a failed event that had grown the graph.
    pub(crate) fn truncate_vertices(&mut self, n: usize) {
        debug_assert!(self.adj[n..].iter().all(|a| a.is_empty()));
        self.adj.truncate(n);
    }

    /// Number of connected components; isolated vertices count.
    pub fn component_count(&self) -> usize {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut queue = Vec::new();
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            queue.push(start as VertexId);
            while let Some(v) = queue.pop() {
                for &w in &self.adj[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push(w);
                    }
                }
            }
        }
        count
    }

    /// Component index per vertex, components numbered in order of their
    /// lowest vertex id. Deterministic, so two equal graphs label alike.
    pub fn component_labels(&self) -> Vec<u32> {
        let n = self.adj.len();
        let mut labels = vec![u32::MAX; n];
        let mut queue = Vec::new();
        let mut next = 0;
        for start in 0..n {
            if labels[start] != u32::MAX {
                continue;
            }
            labels[start] = next;
            queue.push(start as VertexId);
            while let Some(v) = queue.pop() {
                for &w in &self.adj[v as usize] {
                    if labels[w as usize] == u32::MAX {
                        labels[w as usize] = next;
                        queue.push(w);
                    }
                }
            }
            next += 1;
        }
        labels
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if (v as usize) < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::OutOfRange(v, self.adj.len()))
        }
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if (u as usize) >= self.adj.len() || (v as usize) >= self.adj.len() {
            return false;
        }
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Inserts the edge; returns false (and changes nothing) if it already
    /// existed.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u as usize].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(iu) => {
                self.adj[u as usize].insert(iu, v);
                let iv = self.adj[v as usize].binary_search(&u).unwrap_err();
                self.adj[v as usize].insert(iv, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    /// Removes the edge; returns false (and changes nothing) if it was absent.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u as usize].binary_search(&v) {
            Err(_) => Ok(false),
            Ok(iu) => {
                self.adj[u as usize].remove(iu);
                let iv = self.adj[v as usize].binary_search(&u).unwrap();
                self.adj[v as usize].remove(iv);
                self.m -= 1;
                Ok(true)
            }
        }
    }

    /// All edges in canonical (u < v) form, ascending.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            let u = u as VertexId;
            nbrs.iter()
                .filter(move |&&w| u < w)
                .map(move |&w| Edge { u, v: w })
        })
    }
}

#[derive(thiserror::Error, Debug)]
pub enum ParseError {
    #[error("line {0}: expected `u v`, got {1:?}")]
    Malformed(usize, String),
    #[error("line {0}: self-loop {1:?}")]
    SelfLoop(usize, String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug)]
pub struct EdgeListLoad {
    pub graph: DynamicGraph,
    /// Original label for each dense id, in first-seen order.
    pub labels: Vec<String>,
}

/// Parses a whitespace-separated edge list. Lines starting with `#` and blank
/// lines are skipped; arbitrary string labels are remapped to dense ids in
/// first-seen order. Duplicate edges are tolerated (the graph is simple).
pub fn parse_edge_list(src: impl BufRead) -> Result<EdgeListLoad, ParseError> {
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();

    for (idx, line) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut it = text.split_whitespace();
        let (a, b) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(ParseError::Malformed(lineno, text.to_string())),
        };
        if a == b {
            return Err(ParseError::SelfLoop(lineno, text.to_string()));
        }
        let mut intern = |tok: &str| -> VertexId {
            *ids.entry(tok.to_string()).or_insert_with(|| {
                labels.push(tok.to_string());
                (labels.len() - 1) as VertexId
            })
        };
        let ua = intern(a);
        let ub = intern(b);
        edges.push((ua, ub));
    }

    let mut graph = DynamicGraph::new(labels.len());
    for (u, v) in edges {
        graph.add_edge(u, v).expect("interned ids are in range");
    }
    Ok(EdgeListLoad { graph, labels })
}

/// Writes the graph back out as a canonical edge list. The vertex count rides
/// along in a comment so isolated vertices survive a round trip.
pub fn write_edge_list(mut w: impl Write, g: &DynamicGraph) -> io::Result<()> {
    writeln!(w, "# vertices {}", g.vertex_count())?;
    for e in g.edges() {
        writeln!(w, "{} {}", e.u, e.v)?;
    }
    Ok(())
}

/// Reads a canonical dump produced by [`write_edge_list`], honoring the
/// `# vertices n` header if present (plain edge lists work too).
pub fn read_edge_list_canonical(src: impl BufRead) -> Result<DynamicGraph, ParseError> {
    let mut n: usize = 0;
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for (idx, line) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            let mut it = rest.split_whitespace();
            if it.next() == Some("vertices") {
                if let Some(Ok(k)) = it.next().map(|t| t.parse::<usize>()) {
                    n = n.max(k);
                }
            }
            continue;
        }
        let mut it = text.split_whitespace();
        let (a, b) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(ParseError::Malformed(lineno, text.to_string())),
        };
        let ua: VertexId = a
            .parse()
            .map_err(|_| ParseError::Malformed(lineno, text.to_string()))?;
        let ub: VertexId = b
            .parse()
            .map_err(|_| ParseError::Malformed(lineno, text.to_string()))?;
        if ua == ub {
            return Err(ParseError::SelfLoop(lineno, text.to_string()));
        }
        n = n.max(ua.max(ub) as usize + 1);
        edges.push((ua, ub));
    }
    let mut graph = DynamicGraph::new(n);
    for (u, v) in edges {
        graph.add_edge(u, v).expect("ids bounded by scan above");
    }
    Ok(graph)
}
