use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use sbc::brandes::{brandes_full, brandes_scores};
use sbc::engine::{repartition_on_disk, Engine};
use sbc::gen;
use sbc::gn::{girvan_newman, gn_reference, write_dendrogram_csv};
use sbc::graph::{parse_edge_list, read_edge_list_canonical, ParseError};
use sbc::incremental::UpdateOptions;
use sbc::latency::simulate_completions;
use sbc::oracle::ORACLE_MAX_VERTICES;
use sbc::state::{format_score, load_labels, load_state, save_labels, save_state};
use sbc::stream::read_event_stream;

/// Stored records must agree with a fresh recompute this tightly for
/// `verify` to pass (relative, distances and path counts exact).
const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "sbc", about = "exact betweenness maintenance under edge streams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build baseline state for an edge list: stores, manifest, totals.
    Init {
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Bytes per stored path count: 2, 4 or 8.
        #[arg(long, default_value_t = 2)]
        sigma_width: u8,
    },
    /// Apply an event stream to existing state, one committed event at a time.
    Apply {
        state: PathBuf,
        stream: PathBuf,
        /// Re-slice the stores into this many partitions first.
        #[arg(long)]
        workers: Option<usize>,
        /// Replay against line timestamps and report missed events.
        #[arg(long)]
        online_report: bool,
    },
    /// Check totals and every stored record against a fresh recompute.
    Verify { state: PathBuf },
    /// Print the k best-scoring vertices or edges.
    Top {
        state: PathBuf,
        #[arg(short, long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, conflicts_with = "edges")]
        vertices: bool,
        #[arg(long)]
        edges: bool,
    },
    /// Divisive clustering by repeatedly removing the top-betweenness edge.
    Gn {
        state: PathBuf,
        /// Stop once this many components exist (default: run to singletons).
        #[arg(long)]
        stop: Option<usize>,
        /// Also run the recompute-from-scratch route and compare.
        #[arg(long)]
        reference: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Per-event latency against full recomputes on synthetic graphs.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        events: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        workers_list: Vec<usize>,
        /// Stage state on disk (under SBC_TMPDIR) instead of in memory.
        #[arg(long)]
        disk: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("sbc: {err:#}");
            1
        }
    };
    process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.cmd {
        Cmd::Init {
            graph,
            out,
            workers,
            sigma_width,
        } => cmd_init(&graph, &out, workers, sigma_width),
        Cmd::Apply {
            state,
            stream,
            workers,
            online_report,
        } => cmd_apply(&state, &stream, workers, online_report),
        Cmd::Verify { state } => cmd_verify(&state),
        Cmd::Top {
            state,
            k,
            vertices,
            edges,
        } => cmd_top(&state, k as usize, vertices, edges),
        Cmd::Gn {
            state,
            stop,
            reference,
            workers,
        } => cmd_gn(&state, stop, reference, workers),
        Cmd::Bench {
            sizes,
            events,
            workers_list,
            disk,
        } => cmd_bench(&sizes, events, &workers_list, disk),
    }
}

fn open_state(dir: &Path) -> anyhow::Result<Engine> {
    let (graph, scores) =
        load_state(dir).with_context(|| format!("loading state from {}", dir.display()))?;
    Ok(Engine::open_on_disk(
        graph,
        scores,
        dir,
        UpdateOptions::default(),
    )?)
}

fn cmd_init(graph: &Path, out: &Path, workers: usize, sigma_width: u8) -> anyhow::Result<i32> {
    let text =
        fs::read_to_string(graph).with_context(|| format!("reading {}", graph.display()))?;
    // Numeric ids are taken verbatim so later streams can name the same
    // vertices; anything else is interned and remembered in the id map.
    let (g, labels) = match read_edge_list_canonical(std::io::Cursor::new(&text)) {
        Ok(g) => (g, None),
        Err(ParseError::Malformed(..)) => {
            let load = parse_edge_list(std::io::Cursor::new(&text))?;
            (load.graph, Some(load.labels))
        }
        Err(e) => return Err(e.into()),
    };
    fs::create_dir_all(out)?;

    let mut engine = Engine::init_on_disk(g, out, workers, sigma_width, UpdateOptions::default())?;
    engine.flush()?;
    save_state(out, engine.graph(), engine.scores())?;
    if let Some(labels) = labels {
        save_labels(out, &labels)?;
    }

    let mut bytes = 0;
    for part in engine.partitions().expect("disk state") {
        bytes += fs::metadata(out.join(&part.store_path))?.len();
    }
    println!(
        "n={} m={} partitions={} store_bytes={}",
        engine.graph().vertex_count(),
        engine.graph().edge_count(),
        engine.workers(),
        bytes
    );
    Ok(0)
}

fn cmd_apply(
    state: &Path,
    stream: &Path,
    workers: Option<usize>,
    online_report: bool,
) -> anyhow::Result<i32> {
    if let Some(w) = workers {
        repartition_on_disk(state, w)?;
    }
    let mut engine = open_state(state)?;
    let load = read_event_stream(stream)?;
    if online_report && load.events.iter().any(|e| e.timestamp.is_none()) {
        bail!("--online-report needs a timestamp on every stream line");
    }

    let mut processing = Vec::with_capacity(load.events.len());
    let started_all = Instant::now();
    for (i, ev) in load.events.iter().enumerate() {
        let started = Instant::now();
        match engine.apply_event(ev) {
            Ok(report) => {
                let took = started.elapsed().as_secs_f64();
                processing.push(took);
                eprintln!(
                    "event {} (line {}): {} took {:.6}s, {} skipped, {} block writes",
                    i + 1,
                    load.lines[i],
                    ev,
                    took,
                    report.cases.get(sbc::incremental::UpdateCase::Unaffected),
                    report.io.writes,
                );
            }
            Err(err) => {
                // Everything before this event is committed; park the totals
                // to match and report the offending line.
                engine.flush()?;
                save_state(state, engine.graph(), engine.scores())?;
                bail!(
                    "stream line {}: event {} rejected after {} applied: {err}",
                    load.lines[i],
                    ev,
                    i
                );
            }
        }
    }
    engine.flush()?;
    save_state(state, engine.graph(), engine.scores())?;
    println!(
        "applied {} events in {:.3}s",
        load.events.len(),
        started_all.elapsed().as_secs_f64()
    );

    if online_report {
        let arrivals: Vec<f64> = load.events.iter().map(|e| e.timestamp.unwrap()).collect();
        let report = simulate_completions(&arrivals, &processing);
        println!(
            "online: events={} missed={} ({:.2}%) mean_delay={:.6}s",
            report.events,
            report.missed,
            100.0 * report.missed_fraction(),
            report.mean_delay_seconds
        );
    }
    Ok(0)
}

fn cmd_verify(state: &Path) -> anyhow::Result<i32> {
    let (graph, scores) = load_state(state)?;
    let n = graph.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        bail!("state has {n} vertices, verify is capped at {ORACLE_MAX_VERTICES}");
    }

    let (want_bd, want_scores) = brandes_full(&graph);
    let dev = scores.deviation_from(&want_scores);
    let mut worst_delta = 0.0f64;
    let mut failure: Option<String> = None;

    let mut engine = open_state(state)?;
    for s in 0..n {
        let got = engine.source_data(s as u32)?;
        let want = &want_bd[s];
        if got.dist != want.dist {
            let v = got.dist.iter().zip(&want.dist).position(|(a, b)| a != b);
            failure = Some(format!("source {s}: distance differs at vertex {v:?}"));
            break;
        }
        if got.sigma != want.sigma {
            let v = got.sigma.iter().zip(&want.sigma).position(|(a, b)| a != b);
            failure = Some(format!("source {s}: path count differs at vertex {v:?}"));
            break;
        }
        for (v, (a, b)) in got.delta.iter().zip(&want.delta).enumerate() {
            let scale = b.abs().max(1.0);
            let rel = (a - b).abs() / scale;
            worst_delta = worst_delta.max(rel);
            if rel > VERIFY_TOLERANCE {
                failure = Some(format!(
                    "source {s}: dependency at vertex {v} off by {rel:.3e}"
                ));
                break;
            }
        }
        if failure.is_some() {
            break;
        }
    }

    let totals_bad = dev.max() > VERIFY_TOLERANCE;
    println!(
        "verify: max vbc deviation {:.3e}, max ebc deviation {:.3e}, max stored dependency deviation {:.3e}",
        dev.max_vbc, dev.max_ebc, worst_delta
    );
    if totals_bad || failure.is_some() {
        if totals_bad {
            eprintln!("sbc: totals diverge from recompute beyond {VERIFY_TOLERANCE:e}");
        }
        if let Some(msg) = failure {
            eprintln!("sbc: {msg}");
        }
        println!("verify: FAIL");
        return Ok(1);
    }
    println!("verify: pass");
    Ok(0)
}

fn cmd_top(state: &Path, k: usize, _vertices: bool, edges: bool) -> anyhow::Result<i32> {
    let (_, scores) = load_state(state)?;
    let labels = load_labels(state)?;
    let name = |id: u32| -> String {
        match &labels {
            Some(l) if (id as usize) < l.len() => l[id as usize].clone(),
            _ => id.to_string(),
        }
    };

    let out = std::io::stdout();
    let mut out = out.lock();
    if edges {
        let mut ranked = scores.ebc_sorted();
        ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        for (e, score) in ranked.into_iter().take(k) {
            writeln!(
                out,
                "e,{},{},{}",
                name(e.u),
                name(e.v),
                format_score(score)
            )?;
        }
    } else {
        let mut ranked: Vec<(usize, f64)> = scores.vbc.iter().copied().enumerate().collect();
        ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        for (v, score) in ranked.into_iter().take(k) {
            writeln!(out, "v,{},{}", name(v as u32), format_score(score))?;
        }
    }
    Ok(0)
}

fn cmd_gn(
    state: &Path,
    stop: Option<usize>,
    reference: bool,
    workers: usize,
) -> anyhow::Result<i32> {
    let (graph, _) = load_state(state)?;
    let stop = stop.unwrap_or(usize::MAX);

    let started = Instant::now();
    let dendro = girvan_newman(&graph, stop, workers, UpdateOptions::default())?;
    let incremental_s = started.elapsed().as_secs_f64();
    write_dendrogram_csv(std::io::stdout().lock(), &dendro)?;
    eprintln!(
        "gn: {} removals, {} components in {:.3}s",
        dendro.rows.len(),
        dendro.rows.last().map_or(1, |r| r.components),
        incremental_s
    );

    if reference {
        let started = Instant::now();
        let want = gn_reference(&graph, stop)?;
        let reference_s = started.elapsed().as_secs_f64();
        let same_shape = dendro.rows.len() == want.rows.len()
            && dendro
                .rows
                .iter()
                .zip(&want.rows)
                .all(|(a, b)| a.edge == b.edge && a.components == b.components)
            && dendro.splits == want.splits;
        eprintln!(
            "gn reference: {:.3}s, incremental is {:.2}x",
            reference_s,
            reference_s / incremental_s
        );
        if !same_shape {
            eprintln!("sbc: dendrograms diverge between routes");
            return Ok(1);
        }
    }
    Ok(0)
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}

fn cmd_bench(
    sizes: &[usize],
    events: usize,
    workers_list: &[usize],
    disk: bool,
) -> anyhow::Result<i32> {
    let stage_root = std::env::var_os("SBC_TMPDIR")
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    println!("n,m,workers,mode,events,full_s,lat_median_s,lat_min_s,lat_max_s,speedup_median");
    for &n in sizes {
        let g = gen::small_world(n, 6, 0.2, 42);
        let stream = gen::random_events(&g, events, 0.5, 43);

        let mut full_samples: Vec<f64> = (0..3)
            .map(|_| {
                let started = Instant::now();
                let scores = brandes_scores(&g);
                std::hint::black_box(&scores);
                started.elapsed().as_secs_f64()
            })
            .collect();
        let full_s = median(&mut full_samples);

        for &w in workers_list {
            let mut staged = None;
            let mut engine = if disk {
                let dir = stage_root.join(format!("sbc-bench-{n}-{w}-{}", process::id()));
                fs::create_dir_all(&dir)?;
                let e = Engine::init_on_disk(g.clone(), &dir, w, 4, UpdateOptions::default())?;
                staged = Some(dir);
                e
            } else {
                Engine::in_memory(g.clone(), w, UpdateOptions::default())
            };

            let mut lat = Vec::with_capacity(stream.len());
            for ev in &stream {
                let started = Instant::now();
                engine.apply_event(ev)?;
                lat.push(started.elapsed().as_secs_f64());
            }
            drop(engine);
            if let Some(dir) = staged {
                let _ = fs::remove_dir_all(dir);
            }

            let min = lat.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = lat.iter().cloned().fold(0.0f64, f64::max);
            let med = median(&mut lat);
            println!(
                "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.2}",
                n,
                g.edge_count(),
                w,
                if disk { "disk" } else { "memory" },
                stream.len(),
                full_s,
                med,
                min,
                max,
                full_s / med
            );
        }
    }
    Ok(0)
}
