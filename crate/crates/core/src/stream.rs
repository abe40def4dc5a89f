//! Text form of an event stream: one `op u v [timestamp]` line per event,
//! where `op` is `+` or `-`.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::graph::VertexId;
use crate::incremental::{EdgeEvent, EventKind};

#[derive(thiserror::Error, Debug)]
pub enum StreamParseError {
    #[error("line {0}: expected `+|- u v [timestamp]`, got {1:?}")]
    Malformed(usize, String),
    #[error("line {0}: timestamp {1:?} is not a finite, non-decreasing number")]
    Timestamp(usize, String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parsed stream plus the 1-based source line of each event, so a failure
/// while applying event `i` can be reported against `lines[i]`.
#[derive(Debug)]
pub struct StreamLoad {
    pub events: Vec<EdgeEvent>,
    pub lines: Vec<usize>,
}

/// Parses an event stream. Blank lines and `#` comments are skipped.
/// Timestamps are optional per line but must not decrease where present.
pub fn parse_event_stream(src: impl BufRead) -> Result<StreamLoad, StreamParseError> {
    let mut events = Vec::new();
    let mut lines = Vec::new();
    let mut last_ts = f64::NEG_INFINITY;

    for (idx, line) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut it = text.split_whitespace();
        let (op, a, b) = match (it.next(), it.next(), it.next()) {
            (Some(op), Some(a), Some(b)) => (op, a, b),
            _ => return Err(StreamParseError::Malformed(lineno, text.to_string())),
        };
        let kind = match op {
            "+" => EventKind::Add,
            "-" => EventKind::Remove,
            _ => return Err(StreamParseError::Malformed(lineno, text.to_string())),
        };
        let parse_id = |tok: &str| -> Result<VertexId, StreamParseError> {
            tok.parse()
                .map_err(|_| StreamParseError::Malformed(lineno, text.to_string()))
        };
        let u = parse_id(a)?;
        let v = parse_id(b)?;
        let timestamp = match it.next() {
            None => None,
            Some(tok) => {
                let t: f64 = tok
                    .parse()
                    .map_err(|_| StreamParseError::Timestamp(lineno, tok.to_string()))?;
                if !t.is_finite() || t < last_ts {
                    return Err(StreamParseError::Timestamp(lineno, tok.to_string()));
                }
                last_ts = t;
                Some(t)
            }
        };
        if it.next().is_some() {
            return Err(StreamParseError::Malformed(lineno, text.to_string()));
        }
        events.push(EdgeEvent {
            kind,
            u,
            v,
            timestamp,
        });
        lines.push(lineno);
    }
    Ok(StreamLoad { events, lines })
}

pub fn read_event_stream(path: &Path) -> Result<StreamLoad, StreamParseError> {
    parse_event_stream(BufReader::new(File::open(path)?))
}

pub fn write_event_stream(mut w: impl Write, events: &[EdgeEvent]) -> io::Result<()> {
    for ev in events {
        let op = match ev.kind {
            EventKind::Add => '+',
            EventKind::Remove => '-',
        };
        match ev.timestamp {
            Some(t) => writeln!(w, "{op} {} {} {t}", ev.u, ev.v)?,
            None => writeln!(w, "{op} {} {}", ev.u, ev.v)?,
        }
    }
    Ok(())
}
