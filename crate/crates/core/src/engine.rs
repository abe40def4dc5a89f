//! Partitioned event engine. Sources are split into contiguous ranges, each
//! worked by its own thread against its own slice of records (in memory or
//! in a block store), and per-source score deltas are merged back in a fixed
//! ascending order so the totals come out identical for any worker count.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Instant;

use thiserror::Error;

use crate::brandes::{
    accumulate_source, brandes_full, CentralityScores, Distance, SourceData, UNREACHABLE,
};
use crate::graph::{DynamicGraph, Edge, VertexId};
use crate::incremental::scratch::UpdateScratch;
use crate::incremental::{
    update_source, validate_event, CaseCounts, EdgeEvent, EventError, EventKind, PartialScores,
    UpdateCase, UpdateOptions,
};
use crate::store::{check_encodable, BdStore, IoCounters, StoreError};

pub const MANIFEST_FILE: &str = "manifest.txt";

/// One worker's contiguous source range and the store file backing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub worker_id: usize,
    pub lo: VertexId,
    pub hi: VertexId,
    pub store_path: PathBuf,
}

impl Partition {
    /// Balanced layout with conventional store file names, relative to the
    /// state directory.
    pub fn layout(n: usize, p: usize) -> Vec<Partition> {
        partition_sources(n, p)
            .into_iter()
            .enumerate()
            .map(|(i, (lo, hi))| Partition {
                worker_id: i,
                lo,
                hi,
                store_path: PathBuf::from(format!("bd_{i}.sbc")),
            })
            .collect()
    }
}

/// Splits `[0, n)` into `p` contiguous ranges whose sizes differ by at most
/// one, earlier ranges taking the remainder.
pub fn partition_sources(n: usize, p: usize) -> Vec<(VertexId, VertexId)> {
    assert!(p >= 1, "at least one worker");
    let base = n / p;
    let extra = n % p;
    let mut ranges = Vec::with_capacity(p);
    let mut lo = 0usize;
    for i in 0..p {
        let len = base + usize::from(i < extra);
        ranges.push((lo as VertexId, (lo + len) as VertexId));
        lo += len;
    }
    debug_assert_eq!(lo, n);
    ranges
}

/// One `worker_id lo hi store_path` line per partition.
pub fn write_manifest(path: &Path, parts: &[Partition]) -> io::Result<()> {
    let mut text = String::new();
    for p in parts {
        text.push_str(&format!(
            "{} {} {} {}\n",
            p.worker_id,
            p.lo,
            p.hi,
            p.store_path.display()
        ));
    }
    fs::write(path, text)
}

pub fn read_manifest(path: &Path) -> Result<Vec<Partition>, EngineError> {
    let text = fs::read_to_string(path)?;
    let mut parts = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| EngineError::Manifest {
            line: lineno,
            msg: msg.to_string(),
        };
        let mut it = t.splitn(4, ' ');
        let (a, b, c, d) = match (it.next(), it.next(), it.next(), it.next()) {
            (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
            _ => return Err(bad("expected `worker_id lo hi store_path`")),
        };
        let worker_id = a.parse().map_err(|_| bad("bad worker id"))?;
        let lo = b.parse().map_err(|_| bad("bad range start"))?;
        let hi = c.parse().map_err(|_| bad("bad range end"))?;
        if hi <= lo {
            return Err(bad("empty source range"));
        }
        parts.push(Partition {
            worker_id,
            lo,
            hi,
            store_path: PathBuf::from(d),
        });
    }
    if parts.is_empty() {
        return Err(EngineError::Manifest {
            line: 0,
            msg: "no partitions".to_string(),
        });
    }
    Ok(parts)
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Event(#[from] EventError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("state mismatch: {0}")]
    Mismatch(String),
    #[error("event stream: {0}")]
    Stream(String),
}

/// What one event cost: which cases fired, how many sources were covered,
/// and where the time and bytes went.
#[derive(Clone, Copy, Debug, Default)]
pub struct EventReport {
    pub cases: CaseCounts,
    pub sources: usize,
    pub io: IoCounters,
    pub compute_seconds: f64,
    pub write_seconds: f64,
    pub merge_seconds: f64,
}

impl EventReport {
    pub fn total_seconds(&self) -> f64 {
        self.compute_seconds + self.write_seconds + self.merge_seconds
    }
}

#[derive(Default)]
struct WorkerOut {
    scores: PartialScores,
    counts: CaseCounts,
    staged: Vec<(VertexId, SourceData)>,
}

struct DiskState {
    stores: Vec<BdStore>,
    parts: Vec<Partition>,
    dir: PathBuf,
    manifest: PathBuf,
}

impl DiskState {
    fn store_file(&self, part: &Partition) -> PathBuf {
        if part.store_path.is_absolute() {
            part.store_path.clone()
        } else {
            self.dir.join(&part.store_path)
        }
    }
}

enum Backend {
    Memory(Vec<SourceData>),
    Disk(DiskState),
}

/// Maintains exact vertex and edge betweenness of one evolving graph under
/// a stream of edge events, spreading per-source work across partitions.
pub struct Engine {
    graph: DynamicGraph,
    scores: CentralityScores,
    pub opts: UpdateOptions,
    workers: usize,
    backend: Backend,
    scratch: Vec<UpdateScratch>,
}

impl Engine {
    /// All records held in memory; `workers` threads per event.
    pub fn in_memory(graph: DynamicGraph, workers: usize, opts: UpdateOptions) -> Engine {
        let workers = workers.max(1);
        let n = graph.vertex_count();
        let (bd, scores) = brandes_full(&graph);
        let scratch = (0..workers).map(|_| UpdateScratch::new(n)).collect();
        Engine {
            graph,
            scores,
            opts,
            workers,
            backend: Backend::Memory(bd),
            scratch,
        }
    }

    /// Runs the full baseline pass, streaming each partition's records into
    /// its own store file under `dir`, and writes the manifest.
    pub fn init_on_disk(
        graph: DynamicGraph,
        dir: &Path,
        workers: usize,
        sigma_width: u8,
        opts: UpdateOptions,
    ) -> Result<Engine, EngineError> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(EngineError::Mismatch("graph has no vertices".to_string()));
        }
        let p = workers.clamp(1, n);
        let parts = Partition::layout(n, p);
        let mut scores = CentralityScores::new(n);
        let mut stores = Vec::with_capacity(p);
        for part in &parts {
            let path = dir.join(&part.store_path);
            let blocks = (part.lo..part.hi).map(|s| accumulate_source(&graph, s, &mut scores));
            stores.push(BdStore::create(&path, n, part.lo, part.hi, sigma_width, blocks)?);
        }
        let manifest = dir.join(MANIFEST_FILE);
        write_manifest(&manifest, &parts)?;
        let scratch = (0..p).map(|_| UpdateScratch::new(n)).collect();
        Ok(Engine {
            graph,
            scores,
            opts,
            workers: p,
            backend: Backend::Disk(DiskState {
                stores,
                parts,
                dir: dir.to_path_buf(),
                manifest,
            }),
            scratch,
        })
    }

    /// Reopens the stores listed in `dir`'s manifest against a graph and
    /// totals the caller restored from the same state directory.
    pub fn open_on_disk(
        graph: DynamicGraph,
        scores: CentralityScores,
        dir: &Path,
        opts: UpdateOptions,
    ) -> Result<Engine, EngineError> {
        let n = graph.vertex_count();
        let manifest = dir.join(MANIFEST_FILE);
        let parts = read_manifest(&manifest)?;
        let disk = DiskState {
            stores: Vec::new(),
            parts,
            dir: dir.to_path_buf(),
            manifest,
        };

        let mut expected_lo = 0;
        for (i, part) in disk.parts.iter().enumerate() {
            if part.worker_id != i || part.lo != expected_lo {
                return Err(EngineError::Mismatch(format!(
                    "partition {} is out of order or leaves a gap",
                    part.worker_id
                )));
            }
            expected_lo = part.hi;
        }
        if expected_lo as usize != n {
            return Err(EngineError::Mismatch(format!(
                "partitions cover {} sources but the graph has {}",
                expected_lo, n
            )));
        }

        let mut stores = Vec::with_capacity(disk.parts.len());
        for part in &disk.parts {
            let store = BdStore::open(&disk.store_file(part))?;
            if store.n() != n || store.lo() != part.lo || store.hi() != part.hi {
                return Err(EngineError::Mismatch(format!(
                    "store {} does not match its manifest range",
                    part.store_path.display()
                )));
            }
            stores.push(store);
        }
        let p = stores.len();
        let scratch = (0..p).map(|_| UpdateScratch::new(n)).collect();
        Ok(Engine {
            graph,
            scores,
            opts,
            workers: p,
            backend: Backend::Disk(DiskState { stores, ..disk }),
            scratch,
        })
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn scores(&self) -> &CentralityScores {
        &self.scores
    }

    pub fn workers(&self) -> usize {
        match &self.backend {
            Backend::Memory(_) => self.workers,
            Backend::Disk(d) => d.parts.len(),
        }
    }

    pub fn partitions(&self) -> Option<&[Partition]> {
        match &self.backend {
            Backend::Memory(_) => None,
            Backend::Disk(d) => Some(&d.parts),
        }
    }

    /// Cumulative store traffic since the engine was opened.
    pub fn io_counters(&self) -> IoCounters {
        match &self.backend {
            Backend::Memory(_) => IoCounters::default(),
            Backend::Disk(d) => {
                let mut total = IoCounters::default();
                for s in &d.stores {
                    total.merge(&s.io);
                }
                total
            }
        }
    }

    /// One source's record, cloned from memory or read from its store.
    pub fn source_data(&mut self, s: VertexId) -> Result<SourceData, EngineError> {
        match &mut self.backend {
            Backend::Memory(bd) => bd
                .get(s as usize)
                .cloned()
                .ok_or(EngineError::Store(StoreError::SourceOutOfRange(s))),
            Backend::Disk(d) => {
                for store in &mut d.stores {
                    if s >= store.lo() && s < store.hi() {
                        return Ok(store.load_source(s)?);
                    }
                }
                Err(EngineError::Store(StoreError::SourceOutOfRange(s)))
            }
        }
    }

    pub fn flush(&mut self) -> Result<(), EngineError> {
        if let Backend::Disk(d) = &mut self.backend {
            for store in &mut d.stores {
                store.flush()?;
            }
        }
        Ok(())
    }

    /// Applies one event: validates it, mutates the graph, updates every
    /// source in parallel, and merges the score deltas in ascending source
    /// order. On a worker error the event is rolled back whole; committed
    /// store writes happen only after every worker has finished.
    pub fn apply_event(&mut self, event: &EdgeEvent) -> Result<EventReport, EngineError> {
        let old_n = self.graph.vertex_count();
        let new_n = validate_event(&self.graph, event)?;
        let (u, v) = (event.u, event.v);

        for _ in old_n..new_n {
            self.graph.add_vertex();
        }
        match event.kind {
            EventKind::Add => {
                let inserted = self.graph.add_edge(u, v).expect("ids validated");
                debug_assert!(inserted);
                self.scores.grow(new_n);
                self.scores.ebc.entry(Edge::new(u, v)).or_insert(0.0);
            }
            EventKind::Remove => {
                let removed = self.graph.remove_edge(u, v).expect("ids validated");
                debug_assert!(removed);
            }
        }
        for sc in &mut self.scratch {
            sc.grow(new_n);
        }

        let io_before = self.io_counters();
        let started = Instant::now();
        let results = compute(
            &self.graph,
            &mut self.backend,
            &mut self.scratch,
            &self.opts,
            self.workers,
            event.kind,
            u,
            v,
            old_n,
            new_n,
        );
        let compute_seconds = started.elapsed().as_secs_f64();

        let mut outputs = Vec::with_capacity(results.len());
        for r in results {
            match r {
                Ok(out) => outputs.push(out),
                Err(e) => {
                    self.rollback(event, old_n);
                    return Err(e.into());
                }
            }
        }

        let started = Instant::now();
        self.commit_stores(&mut outputs, old_n, new_n)?;
        let write_seconds = started.elapsed().as_secs_f64();

        let started = Instant::now();
        let mut cases = CaseCounts::default();
        for out in &outputs {
            out.scores.apply_to(&mut self.scores);
            cases.merge(&out.counts);
        }
        if event.kind == EventKind::Remove {
            let dropped = self.scores.ebc.remove(&Edge::new(u, v));
            debug_assert!(dropped.is_some());
        }
        let merge_seconds = started.elapsed().as_secs_f64();

        let io_after = self.io_counters();
        Ok(EventReport {
            cases,
            sources: new_n,
            io: IoCounters {
                reads: io_after.reads - io_before.reads,
                writes: io_after.writes - io_before.writes,
                bytes_read: io_after.bytes_read - io_before.bytes_read,
                bytes_written: io_after.bytes_written - io_before.bytes_written,
            },
            compute_seconds,
            write_seconds,
            merge_seconds,
        })
    }

    /// Undoes the graph mutation of an event whose compute phase failed.
    /// Nothing has been written to any store at this point.
    fn rollback(&mut self, event: &EdgeEvent, old_n: usize) {
        debug_assert!(matches!(self.backend, Backend::Disk(_)));
        let (u, v) = (event.u, event.v);
        match event.kind {
            EventKind::Add => {
                self.graph.remove_edge(u, v).expect("was inserted");
                self.scores.ebc.remove(&Edge::new(u, v));
                self.graph.truncate_vertices(old_n);
                self.scores.vbc.truncate(old_n);
            }
            EventKind::Remove => {
                self.graph.add_edge(u, v).expect("was removed");
            }
        }
    }

    /// Writes staged records back: one in-place block write per affected
    /// source, or a full per-partition rebuild when the vertex count grew
    /// (a larger n changes every block stride).
    fn commit_stores(
        &mut self,
        outputs: &mut [WorkerOut],
        old_n: usize,
        new_n: usize,
    ) -> Result<(), EngineError> {
        let Backend::Disk(disk) = &mut self.backend else {
            return Ok(());
        };
        if new_n > old_n {
            let last = disk.parts.len() - 1;
            for i in 0..disk.parts.len() {
                let new_hi = if i == last {
                    new_n as VertexId
                } else {
                    disk.parts[i].hi
                };
                let path = disk.store_file(&disk.parts[i]);
                let rebuilt = rebuild_grown(
                    &mut disk.stores[i],
                    &path,
                    new_n,
                    new_hi,
                    &outputs[i].staged,
                )?;
                disk.stores[i] = rebuilt;
                disk.parts[i].hi = new_hi;
            }
            write_manifest(&disk.manifest, &disk.parts)?;
        } else {
            for (store, out) in disk.stores.iter_mut().zip(outputs.iter()) {
                for (s, bd) in &out.staged {
                    store.write_source(*s, bd)?;
                }
            }
        }
        Ok(())
    }
}

/// Re-slices a state directory's stores into `workers` partitions, streaming
/// every record into fresh files before swapping names and rewriting the
/// manifest. A no-op when the count already matches.
pub fn repartition_on_disk(dir: &Path, workers: usize) -> Result<(), EngineError> {
    let manifest = dir.join(MANIFEST_FILE);
    let old_parts = read_manifest(&manifest)?;
    if old_parts.len() == workers {
        return Ok(());
    }
    let mut old: Vec<BdStore> = old_parts
        .iter()
        .map(|part| {
            let path = if part.store_path.is_absolute() {
                part.store_path.clone()
            } else {
                dir.join(&part.store_path)
            };
            BdStore::open(&path)
        })
        .collect::<Result<_, _>>()?;
    let n = old[0].n();
    let width = old[0].sigma_width();
    debug_assert!(old.iter().all(|s| s.n() == n && s.sigma_width() == width));

    let new_parts = Partition::layout(n, workers.clamp(1, n));
    let mut cursor = 0usize;
    let mut tmps = Vec::with_capacity(new_parts.len());
    for part in &new_parts {
        let tmp = dir.join(format!("bd_{}.repart", part.worker_id));
        let mut read_err: Option<StoreError> = None;
        {
            let old = &mut old;
            let cursor = &mut cursor;
            let blocks = (part.lo..part.hi).map_while(|s| {
                while s >= old[*cursor].hi() {
                    *cursor += 1;
                }
                match old[*cursor].load_source(s) {
                    Ok(bd) => Some(bd),
                    Err(e) => {
                        read_err = Some(e);
                        None
                    }
                }
            });
            let created = BdStore::create(&tmp, n, part.lo, part.hi, width, blocks);
            if let Some(e) = read_err {
                let _ = fs::remove_file(&tmp);
                return Err(e.into());
            }
            created?;
        }
        tmps.push(tmp);
    }

    drop(old);
    for (part, tmp) in new_parts.iter().zip(&tmps) {
        fs::rename(tmp, dir.join(&part.store_path))?;
    }
    for part in &old_parts[new_parts.len().min(old_parts.len())..] {
        let _ = fs::remove_file(dir.join(&part.store_path));
    }
    write_manifest(&manifest, &new_parts)
        .map_err(EngineError::from)
}

/// Runs every partition's worker and collects their results in worker order.
#[allow(clippy::too_many_arguments)]
fn compute(
    graph: &DynamicGraph,
    backend: &mut Backend,
    scratch: &mut [UpdateScratch],
    opts: &UpdateOptions,
    workers: usize,
    kind: EventKind,
    u: VertexId,
    v: VertexId,
    old_n: usize,
    new_n: usize,
) -> Vec<Result<WorkerOut, StoreError>> {
    match backend {
        Backend::Memory(bd) => {
            if new_n > old_n {
                for b in bd.iter_mut() {
                    b.grow(new_n);
                }
                for s in old_n..new_n {
                    bd.push(SourceData::isolated(new_n, s as VertexId));
                }
            }
            let p = workers.clamp(1, new_n.max(1));
            let ranges = partition_sources(new_n, p);
            let mut slices: Vec<&mut [SourceData]> = Vec::with_capacity(ranges.len());
            let mut tail: &mut [SourceData] = bd;
            for &(lo, hi) in &ranges {
                let (head, rest) = tail.split_at_mut((hi - lo) as usize);
                slices.push(head);
                tail = rest;
            }
            if p == 1 {
                let out = run_memory_worker(
                    graph,
                    kind,
                    u,
                    v,
                    0,
                    slices.pop().unwrap(),
                    &mut scratch[0],
                    opts,
                );
                return vec![Ok(out)];
            }
            thread::scope(|sc| {
                let mut handles = Vec::with_capacity(p);
                for ((&(lo, _), bds), scr) in
                    ranges.iter().zip(slices).zip(scratch.iter_mut())
                {
                    handles.push(sc.spawn(move || {
                        Ok(run_memory_worker(graph, kind, u, v, lo, bds, scr, opts))
                    }));
                }
                handles.into_iter().map(join_worker).collect()
            })
        }
        Backend::Disk(disk) => {
            let p = disk.stores.len();
            let last = p - 1;
            if p == 1 {
                let hi = (disk.stores[0].hi()).max(new_n as VertexId);
                return vec![run_disk_worker(
                    graph,
                    kind,
                    u,
                    v,
                    &mut disk.stores[0],
                    hi,
                    old_n,
                    new_n,
                    &mut scratch[0],
                    opts,
                )];
            }
            thread::scope(|sc| {
                let mut handles = Vec::with_capacity(p);
                for (i, (store, scr)) in
                    disk.stores.iter_mut().zip(scratch.iter_mut()).enumerate()
                {
                    let hi = if i == last {
                        store.hi().max(new_n as VertexId)
                    } else {
                        store.hi()
                    };
                    handles.push(sc.spawn(move || {
                        run_disk_worker(graph, kind, u, v, store, hi, old_n, new_n, scr, opts)
                    }));
                }
                handles.into_iter().map(join_worker).collect()
            })
        }
    }
}

fn join_worker(
    handle: thread::ScopedJoinHandle<'_, Result<WorkerOut, StoreError>>,
) -> Result<WorkerOut, StoreError> {
    match handle.join() {
        Ok(result) => result,
        Err(payload) => std::panic::resume_unwind(payload),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_memory_worker(
    g: &DynamicGraph,
    kind: EventKind,
    u: VertexId,
    v: VertexId,
    lo: VertexId,
    bds: &mut [SourceData],
    scratch: &mut UpdateScratch,
    opts: &UpdateOptions,
) -> WorkerOut {
    let mut out = WorkerOut::default();
    for (i, bd) in bds.iter_mut().enumerate() {
        let s = lo + i as VertexId;
        let case = update_source(g, kind, u, v, s, bd, scratch, opts, &mut out.scores);
        out.counts.record(case);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn run_disk_worker(
    g: &DynamicGraph,
    kind: EventKind,
    u: VertexId,
    v: VertexId,
    store: &mut BdStore,
    hi: VertexId,
    old_n: usize,
    new_n: usize,
    scratch: &mut UpdateScratch,
    opts: &UpdateOptions,
) -> Result<WorkerOut, StoreError> {
    let mut out = WorkerOut::default();
    let mut dist: Vec<Distance> = Vec::new();
    for s in store.lo()..hi {
        let mut bd = if (s as usize) < old_n {
            store.read_distances_into(s, &mut dist)?;
            let du = endpoint_distance(&dist, u);
            let dv = endpoint_distance(&dist, v);
            // Same-level or doubly-unreachable endpoints leave this source
            // untouched; the distance column alone settles that, so the
            // rest of the block is never read and never rewritten.
            if du == dv {
                out.counts.record(UpdateCase::Unaffected);
                continue;
            }
            let mut bd = store.load_source_with_distances(s, &dist)?;
            if new_n > old_n {
                bd.grow(new_n);
            }
            bd
        } else {
            // A source born this event; it is one of the event's endpoints.
            debug_assert!(s == u || s == v);
            SourceData::isolated(new_n, s)
        };
        let case = update_source(g, kind, u, v, s, &mut bd, scratch, opts, &mut out.scores);
        debug_assert!(case != UpdateCase::Unaffected);
        out.counts.record(case);
        check_encodable(&bd, store.sigma_width(), s)?;
        out.staged.push((s, bd));
    }
    Ok(out)
}

fn endpoint_distance(dist: &[Distance], x: VertexId) -> Distance {
    dist.get(x as usize).copied().unwrap_or(UNREACHABLE)
}

/// Streams a partition's store into a replacement file with the larger
/// vertex count, splicing in staged records and padding the rest with
/// unreachable entries for the new vertices.
fn rebuild_grown(
    old: &mut BdStore,
    path: &Path,
    new_n: usize,
    new_hi: VertexId,
    staged: &[(VertexId, SourceData)],
) -> Result<BdStore, EngineError> {
    let tmp = path.with_extension("rebuild");
    let lo = old.lo();
    let width = old.sigma_width();
    let mut staged_it = staged.iter().peekable();
    let mut read_err: Option<StoreError> = None;
    let blocks = (lo..new_hi).map_while(|s| {
        if staged_it.peek().is_some_and(|(t, _)| *t == s) {
            let (_, bd) = staged_it.next().unwrap();
            return Some(bd.clone());
        }
        match old.load_source(s) {
            Ok(mut bd) => {
                bd.grow(new_n);
                Some(bd)
            }
            Err(e) => {
                read_err = Some(e);
                None
            }
        }
    });
    let created = BdStore::create(&tmp, new_n, lo, new_hi, width, blocks);
    if let Some(e) = read_err {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    let written = created?.io;
    fs::rename(&tmp, path)?;
    let mut reopened = BdStore::open(path)?;
    // The replacement keeps the partition's lifetime counters so that
    // per-event deltas stay meaningful across a rebuild.
    reopened.io.merge(&old.io);
    reopened.io.merge(&written);
    Ok(reopened)
}

/// Applies a timestamped stream one event at a time, measuring each update,
/// and reports how the engine would have kept up with the arrival times.
pub fn replay_stream(
    engine: &mut Engine,
    events: &[EdgeEvent],
) -> Result<crate::latency::OnlineReport, EngineError> {
    let mut arrivals = Vec::with_capacity(events.len());
    let mut last = f64::NEG_INFINITY;
    for (i, ev) in events.iter().enumerate() {
        let t = ev.timestamp.ok_or_else(|| {
            EngineError::Stream(format!("event {} has no timestamp", i + 1))
        })?;
        if t < last {
            return Err(EngineError::Stream(format!(
                "event {}: timestamp {} decreases",
                i + 1,
                t
            )));
        }
        last = t;
        arrivals.push(t);
    }
    let mut processing = Vec::with_capacity(events.len());
    for ev in events {
        let started = Instant::now();
        engine.apply_event(ev)?;
        processing.push(started.elapsed().as_secs_f64());
    }
    Ok(crate::latency::simulate_completions(&arrivals, &processing))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_contiguous_and_balanced() {
        assert_eq!(partition_sources(10, 3), vec![(0, 4), (4, 7), (7, 10)]);
        assert_eq!(partition_sources(5, 1), vec![(0, 5)]);
        let unit = partition_sources(4, 4);
        assert_eq!(unit, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);

        for (n, p) in [(17, 4), (100, 7), (3, 3), (8, 16)] {
            let ranges = partition_sources(n, p);
            assert_eq!(ranges.len(), p);
            assert_eq!(ranges[0].0, 0);
            assert_eq!(ranges[p - 1].1 as usize, n);
            let mut sizes = Vec::new();
            for w in ranges.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
            for (lo, hi) in ranges {
                sizes.push(hi - lo);
            }
            let min = *sizes.iter().min().unwrap();
            let max = *sizes.iter().max().unwrap();
            assert!(max - min <= 1, "n={n} p={p} sizes {sizes:?}");
        }
    }

    #[test]
    fn manifest_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(MANIFEST_FILE);
        let parts = Partition::layout(10, 3);
        write_manifest(&path, &parts).unwrap();
        assert_eq!(read_manifest(&path).unwrap(), parts);
        assert_eq!(parts[2].store_path, PathBuf::from("bd_2.sbc"));
    }

    #[test]
    fn manifest_rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(MANIFEST_FILE);
        std::fs::write(&path, "0 0 five bd_0.sbc\n").unwrap();
        assert!(matches!(
            read_manifest(&path),
            Err(EngineError::Manifest { line: 1, .. })
        ));
        std::fs::write(&path, "").unwrap();
        assert!(matches!(
            read_manifest(&path),
            Err(EngineError::Manifest { .. })
        ));
    }
}
