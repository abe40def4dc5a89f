//! A state directory pairs the partition stores and manifest with a canonical
//! edge list and a totals CSV, so a run can stop and pick up where it left.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::brandes::CentralityScores;
use crate::graph::{
    read_edge_list_canonical, write_edge_list, DynamicGraph, Edge, ParseError, VertexId,
};

pub const GRAPH_FILE: &str = "graph.edges";
pub const SCORES_FILE: &str = "scores.csv";
pub const LABELS_FILE: &str = "idmap.txt";

#[derive(thiserror::Error, Debug)]
pub enum StateError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Graph(#[from] ParseError),
    #[error("scores line {0}: {1}")]
    Scores(usize, String),
}

/// Fixed 12-significant-digit form used for every score we print, so equal
/// runs produce byte-identical files.
pub fn format_score(x: f64) -> String {
    format!("{x:.11e}")
}

/// Writes `graph.edges` and `scores.csv` under `dir`. Vertex rows come first
/// in id order, then edge rows in canonical edge order.
pub fn save_state(dir: &Path, g: &DynamicGraph, scores: &CentralityScores) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(GRAPH_FILE))?);
    write_edge_list(&mut w, g)?;
    w.flush()?;

    let mut w = BufWriter::new(File::create(dir.join(SCORES_FILE))?);
    writeln!(w, "# kind,id[,id2],score")?;
    for (v, &score) in scores.vbc.iter().enumerate() {
        writeln!(w, "v,{v},{}", format_score(score))?;
    }
    for (e, score) in scores.ebc_sorted() {
        writeln!(w, "e,{},{},{}", e.u, e.v, format_score(score))?;
    }
    w.flush()
}

/// Reads a state directory back. The totals are nudged by at most one unit
/// in the twelfth significant digit per save, far inside every tolerance
/// this crate checks against.
pub fn load_state(dir: &Path) -> Result<(DynamicGraph, CentralityScores), StateError> {
    let graph = read_edge_list_canonical(BufReader::new(File::open(dir.join(GRAPH_FILE))?))?;
    let n = graph.vertex_count();
    let mut scores = CentralityScores::new(n);

    let src = BufReader::new(File::open(dir.join(SCORES_FILE))?);
    for (idx, line) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        let fail = |msg: &str| StateError::Scores(lineno, format!("{msg} in {text:?}"));
        let parse_id = |tok: &str| -> Result<usize, StateError> {
            match tok.parse::<VertexId>() {
                Ok(id) if (id as usize) < n => Ok(id as usize),
                _ => Err(fail("vertex id out of range")),
            }
        };
        match fields.as_slice() {
            ["v", id, score] => {
                let id = parse_id(id)?;
                scores.vbc[id] = score.parse().map_err(|_| fail("bad score"))?;
            }
            ["e", u, v, score] => {
                let u = parse_id(u)? as VertexId;
                let v = parse_id(v)? as VertexId;
                if !graph.has_edge(u, v) {
                    return Err(fail("edge not in graph"));
                }
                let score = score.parse().map_err(|_| fail("bad score"))?;
                scores.ebc.insert(Edge::new(u, v), score);
            }
            _ => return Err(fail("expected `v,id,score` or `e,u,v,score`")),
        }
    }
    if scores.ebc.len() != graph.edge_count() {
        return Err(StateError::Scores(
            0,
            format!(
                "{} edge rows for {} edges",
                scores.ebc.len(),
                graph.edge_count()
            ),
        ));
    }
    Ok((graph, scores))
}

/// One original label per line, in dense-id order. Written when the input
/// graph used arbitrary names, read back for display only.
pub fn save_labels(dir: &Path, labels: &[String]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(LABELS_FILE))?);
    for label in labels {
        writeln!(w, "{label}")?;
    }
    w.flush()
}

pub fn load_labels(dir: &Path) -> io::Result<Option<Vec<String>>> {
    match File::open(dir.join(LABELS_FILE)) {
        Ok(f) => {
            let labels: Result<Vec<String>, io::Error> = BufReader::new(f).lines().collect();
            Ok(Some(labels?))
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brandes::brandes_scores;

    #[test]
    fn a_state_directory_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let g = DynamicGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3)]);
        let scores = brandes_scores(&g);
        save_state(dir.path(), &g, &scores).unwrap();

        let (g2, s2) = load_state(dir.path()).unwrap();
        assert_eq!(g2.vertex_count(), 5);
        assert_eq!(g2.edge_count(), 3);
        assert!(g2.has_edge(2, 3));
        // Path scores are small dyadics, so twelve digits lose nothing.
        assert_eq!(s2.vbc, scores.vbc);
        assert_eq!(s2.ebc, scores.ebc);

        assert_eq!(load_labels(dir.path()).unwrap(), None);
        save_labels(dir.path(), &["alpha".into(), "beta".into()]).unwrap();
        assert_eq!(
            load_labels(dir.path()).unwrap().unwrap(),
            vec!["alpha", "beta"]
        );
    }

    #[test]
    fn damaged_score_rows_are_located() {
        let dir = tempfile::tempdir().unwrap();
        let g = DynamicGraph::from_edges(3, &[(0, 1)]);
        save_state(dir.path(), &g, &brandes_scores(&g)).unwrap();

        std::fs::write(
            dir.path().join(SCORES_FILE),
            "v,0,0.0\nv,1,0.0\nv,2,0.0\ne,0,2,1.0\n",
        )
        .unwrap();
        match load_state(dir.path()) {
            Err(StateError::Scores(4, msg)) => assert!(msg.contains("edge not in graph")),
            other => panic!("expected a located failure, got {other:?}"),
        }

        std::fs::write(dir.path().join(SCORES_FILE), "x,y\n").unwrap();
        assert!(matches!(
            load_state(dir.path()),
            Err(StateError::Scores(1, _))
        ));
    }
}
