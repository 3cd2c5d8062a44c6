//! Batch front end for the separation index and the subdivision engine.
//!
//! Exit codes are part of the interface:
//!
//! * `separate`:  0 never separated, 2 separated, 1 parse or I/O error
//! * `subdivide`: 0 path found, 2 separated, 3 depth exhausted, 1 error
//! * `verify`:    0 full agreement, 4 divergence, 1 error
//! * `bench`:     0, timings on stdout
//!
//! For identical inputs, `separate`, `subdivide`, and `verify` produce
//! byte-identical stdout and SVG output; warnings go to stderr.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use stsep::geom::{Anchor, Point, frac, rat};
use stsep::scene::{parse_scene, parse_stream};
use stsep::separation::SeparationIndex;
use stsep::subdivision::{Engine, ObstacleOracle, Outcome};
use stsep::svg::{render_stream, render_subdivision};
use stsep::verify::{floodfill_separated, green_path_exists, random_unit_boxes};

/// Grid cell side used by `--finder grid` when replaying streams.
const STREAM_GRID_CELL: i64 = 4;

#[derive(Parser)]
#[command(
    name = "stsep",
    version,
    about = "Detects when growing families of convex obstacles separate two fixed points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FinderKind {
    Naive,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// Replay an obstacle stream, reporting each insertion and the moment
    /// the stream separates the anchors
    Separate {
        stream: PathBuf,
        #[arg(long, value_enum, default_value_t = FinderKind::Naive)]
        finder: FinderKind,
        /// Write an SVG snapshot of the final state
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Print union-find counters after the replay
        #[arg(long)]
        stats: bool,
    },
    /// Subdivide the unit box over a scene until the anchors are connected
    /// by free boxes or separated by blocked ones
    Subdivide {
        scene: PathBuf,
        /// Overrides the scene's maxdepth (default 10)
        #[arg(long)]
        max_depth: Option<u32>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        stats: bool,
    },
    /// Replay a stream or scene, cross-checking every verdict against the
    /// brute-force connectivity oracle
    Verify {
        #[arg(long, conflicts_with = "scene", required_unless_present = "scene")]
        stream: Option<PathBuf>,
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Corrupts the parity of one insertion's first edge (test hook)
        #[arg(long, hide = true)]
        inject_parity_fault: Option<usize>,
    },
    /// Time bulk insertions of random unit boxes through a finder
    Bench {
        /// Comma-separated stream sizes
        #[arg(long, value_delimiter = ',', default_value = "100000,200000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        extent: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FinderKind::Grid)]
        finder: FinderKind,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Separate { stream, finder, svg, stats } => cmd_separate(stream, finder, svg, stats),
        Command::Subdivide { scene, max_depth, svg, stats } => {
            cmd_subdivide(scene, max_depth, svg, stats)
        }
        Command::Verify { stream, scene, inject_parity_fault } => {
            cmd_verify(stream, scene, inject_parity_fault)
        }
        Command::Bench { sizes, extent, seed, finder } => cmd_bench(sizes, extent, seed, finder),
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn make_index(anchor: Anchor, finder: FinderKind) -> SeparationIndex {
    match finder {
        FinderKind::Naive => SeparationIndex::with_naive_finder(anchor),
        FinderKind::Grid => SeparationIndex::with_grid_finder(anchor, rat(STREAM_GRID_CELL)),
    }
}

fn status(separated: bool) -> &'static str {
    if separated { "separated" } else { "connected" }
}

fn cmd_separate(
    path: PathBuf,
    finder: FinderKind,
    svg: Option<PathBuf>,
    stats: bool,
) -> Result<ExitCode, String> {
    let spec = parse_stream(&read(&path)?).map_err(|e| e.to_string())?;
    for warning in &spec.warnings {
        eprintln!("warning: {warning}");
    }
    let mut idx = make_index(spec.anchor.clone(), finder);
    for (i, body) in spec.bodies.iter().enumerate() {
        let report = idx.insert(body.clone()).map_err(|e| e.to_string())?;
        println!(
            "{} k={} merges={} cycles={} status={}",
            i + 1,
            report.neighbors,
            report.merge_edges,
            report.cycle_edges,
            status(idx.is_separated())
        );
    }
    if stats {
        let s = idx.uf_stats();
        println!(
            "stats makeset={} findext={} unionext={} parent_hops={}",
            s.makeset_calls, s.findext_calls, s.unionext_calls, s.parent_hops
        );
    }
    if let Some(svg_path) = svg {
        let doc = render_stream(&spec.anchor, &spec.bodies, idx.first_separation());
        fs::write(&svg_path, doc).map_err(|e| format!("{}: {e}", svg_path.display()))?;
    }
    match idx.first_separation() {
        Some(id) => {
            println!("result status=separated first={}", id + 1);
            Ok(ExitCode::from(2))
        }
        None => {
            println!("result status=connected");
            Ok(ExitCode::from(0))
        }
    }
}

fn outcome_name(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Running => "running",
        Outcome::PathFound => "path_found",
        Outcome::Separated => "separated",
        Outcome::DepthExhausted => "depth_exhausted",
    }
}

fn cmd_subdivide(
    path: PathBuf,
    max_depth: Option<u32>,
    svg: Option<PathBuf>,
    stats: bool,
) -> Result<ExitCode, String> {
    let spec = parse_scene(&read(&path)?).map_err(|e| e.to_string())?;
    for warning in &spec.warnings {
        eprintln!("warning: {warning}");
    }
    let depth = max_depth.or(spec.max_depth).unwrap_or(10);
    let oracle = ObstacleOracle::new(spec.obstacles.clone());
    let mut engine =
        Engine::new(spec.anchor, Box::new(oracle), depth).map_err(|e| e.to_string())?;
    let outcome = engine.run().map_err(|e| e.to_string())?;
    let s = engine.stats();
    println!(
        "outcome={} subdivisions={} green={} red={} yellow={}",
        outcome_name(outcome),
        s.subdivisions,
        s.green_boxes,
        s.red_boxes,
        s.yellow_boxes
    );
    if stats {
        println!(
            "stats max_neighbors={} green_uf_ops={} red_makeset={} red_findext={} red_unionext={} red_parent_hops={}",
            s.max_neighbors,
            s.green_uf_ops,
            s.red_uf.makeset_calls,
            s.red_uf.findext_calls,
            s.red_uf.unionext_calls,
            s.red_uf.parent_hops
        );
    }
    if let Some(svg_path) = svg {
        let doc = render_subdivision(&engine, &spec.obstacles);
        fs::write(&svg_path, doc).map_err(|e| format!("{}: {e}", svg_path.display()))?;
    }
    Ok(ExitCode::from(match outcome {
        Outcome::PathFound => 0,
        Outcome::Separated => 2,
        Outcome::DepthExhausted => 3,
        Outcome::Running => unreachable!("run always leaves a terminal outcome"),
    }))
}

fn cmd_verify(
    stream: Option<PathBuf>,
    scene: Option<PathBuf>,
    inject_parity_fault: Option<usize>,
) -> Result<ExitCode, String> {
    if let Some(path) = stream {
        let spec = parse_stream(&read(&path)?).map_err(|e| e.to_string())?;
        for warning in &spec.warnings {
            eprintln!("warning: {warning}");
        }
        let mut idx = SeparationIndex::with_naive_finder(spec.anchor.clone());
        if let Some(at) = inject_parity_fault {
            idx.inject_parity_fault(at);
        }
        for (i, body) in spec.bodies.iter().enumerate() {
            idx.insert(body.clone()).map_err(|e| e.to_string())?;
            let truth = floodfill_separated(&spec.anchor, &spec.bodies[..=i])
                .map_err(|e| e.to_string())?;
            if idx.is_separated() != truth {
                println!(
                    "mismatch at insertion {}: index={} oracle={}",
                    i + 1,
                    status(idx.is_separated()),
                    status(truth)
                );
                return Ok(ExitCode::from(4));
            }
        }
        println!("verify ok ({} insertions checked)", spec.bodies.len());
        return Ok(ExitCode::from(0));
    }

    let path = scene.expect("clap enforces one of --stream/--scene");
    let spec = parse_scene(&read(&path)?).map_err(|e| e.to_string())?;
    for warning in &spec.warnings {
        eprintln!("warning: {warning}");
    }
    let depth = spec.max_depth.unwrap_or(10);
    let oracle = ObstacleOracle::new(spec.obstacles.clone());
    let mut engine =
        Engine::new(spec.anchor, Box::new(oracle), depth).map_err(|e| e.to_string())?;
    let outcome = engine.run().map_err(|e| e.to_string())?;
    let red_separated =
        floodfill_separated(engine.anchor(), &engine.red_bodies()).map_err(|e| e.to_string())?;
    let green_connected = green_path_exists(
        &engine.green_bodies(),
        engine.anchor().source(),
        engine.anchor().target(),
    )
    .map_err(|e| e.to_string())?;
    let agree = match outcome {
        Outcome::Separated => red_separated && !green_connected,
        Outcome::PathFound => green_connected && !red_separated,
        Outcome::DepthExhausted => !red_separated && !green_connected,
        Outcome::Running => false,
    };
    if agree {
        println!("verify ok (outcome={})", outcome_name(outcome));
        Ok(ExitCode::from(0))
    } else {
        println!(
            "mismatch: outcome={} red_separated={} green_connected={}",
            outcome_name(outcome),
            red_separated,
            green_connected
        );
        Ok(ExitCode::from(4))
    }
}

fn cmd_bench(
    sizes: Vec<usize>,
    extent: i64,
    seed: u64,
    finder: FinderKind,
) -> Result<ExitCode, String> {
    if extent < 8 {
        return Err("bench needs an extent of at least 8".into());
    }
    // Anchors mid-cell, far apart, enclosable by the stream.
    let anchor = Anchor::new(
        Point::new(frac(extent - 1, 2), frac(extent - 1, 2)),
        Point::new(frac(7, 2), frac(7, 2)),
    )
    .map_err(|e| e.to_string())?;
    for n in sizes {
        let bodies = random_unit_boxes(seed, n, extent, &anchor);
        let mut idx = match finder {
            FinderKind::Naive => SeparationIndex::with_naive_finder(anchor.clone()),
            FinderKind::Grid => SeparationIndex::with_grid_finder(anchor.clone(), rat(1)),
        };
        let start = Instant::now();
        for body in bodies {
            idx.insert(body).map_err(|e| e.to_string())?;
        }
        let elapsed = start.elapsed();
        let s = idx.uf_stats();
        let ops = s.operations().max(1);
        println!(
            "n={} elapsed_ms={:.1} makeset={} findext={} unionext={} parent_hops={} hops_per_op={:.3} separated_at={}",
            n,
            elapsed.as_secs_f64() * 1e3,
            s.makeset_calls,
            s.findext_calls,
            s.unionext_calls,
            s.parent_hops,
            s.parent_hops as f64 / ops as f64,
            idx.first_separation()
                .map(|i| (i + 1).to_string())
                .unwrap_or_else(|| "never".into()),
        );
    }
    Ok(ExitCode::from(0))
}
