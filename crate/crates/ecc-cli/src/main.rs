//! Command-line front end for the clique cover library: generate graphs,
//! build and verify covers, run the exact and greedy baselines, estimate
//! survival frequencies, and sweep experiment grids.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ecc_core::{
    estimate_survival, exact_theta1, greedy_cover, iteration_csv_row, lower_bound, run_cover,
    run_experiment, verify_cover, CliqueCover, CoverParams, Error, ExperimentConfig, Graph,
    Result, RunSummary, Seed, DEFAULT_ALPHA, DEFAULT_CLIQUE_BUDGET, ITERATION_CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "ecc", version, about = "Edge clique covers of random graphs")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores). Outputs
    /// are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

/// Where a subcommand gets its graph: an edge-list file, or G(n, p) drawn
/// from the seed. With --graph, --p and --seed still set the model density
/// and run randomness where the subcommand uses them.
#[derive(Args)]
struct GraphSource {
    /// Read the graph from this file instead of generating one.
    #[arg(long, conflicts_with = "n")]
    graph: Option<PathBuf>,

    /// Vertices of the generated graph.
    #[arg(long)]
    n: Option<usize>,

    /// Edge probability of the generated graph, and the model density.
    #[arg(long, default_value_t = 0.5)]
    p: f64,

    /// Seed for graph generation and for the run's randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GraphSource {
    fn load(&self) -> Result<Graph> {
        match &self.graph {
            Some(path) => {
                let file = File::open(path)?;
                Graph::load(&mut BufReader::new(file))
            }
            None => {
                let n = self.n.ok_or_else(|| {
                    Error::Domain("provide either --graph FILE or --n N".into())
                })?;
                Graph::gnp(n, self.p, Seed(self.seed))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a G(n, p) graph and write it as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Build a clique cover of one graph and report per-iteration tallies.
    Run {
        #[command(flatten)]
        source: GraphSource,
        /// Schedule coefficient: iteration 1 uses cliques of size
        /// floor(alpha * log_{1/p} n).
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// Explicit comma-separated clique sizes, overriding the formula.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<u32>>,
        /// Refuse any iteration predicted to enumerate more cliques than
        /// this.
        #[arg(long, default_value_t = DEFAULT_CLIQUE_BUDGET)]
        budget: u64,
        /// Write the cover, one clique per line.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-iteration rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the run summary (with baselines) as JSON. Computes the
        /// exact clique number, which is slow past a few hundred vertices.
        #[arg(long)]
        json: Option<PathBuf>,
    },

    /// Check a cover file against a graph file.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },

    /// Compute a minimum cover by branch and bound (small graphs only).
    Exact {
        #[command(flatten)]
        source: GraphSource,
        /// Largest vertex count to attempt.
        #[arg(long, default_value_t = ecc_core::baselines::EXACT_COVER_VERTEX_CEILING)]
        cap: usize,
        /// Write the cover, one clique per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Cover greedily: repeatedly grow a maximal clique around an uncovered
    /// edge.
    Greedy {
        #[command(flatten)]
        source: GraphSource,
        /// Write the cover, one clique per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Report the counting lower bound m / C(omega, 2) and its pieces.
    Bounds {
        #[command(flatten)]
        source: GraphSource,
    },

    /// Replay iteration 1 many times and compare per-edge survival to its
    /// calibrated target.
    Survival {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// Repetitions of the iteration replay.
        #[arg(long, default_value_t = 2000)]
        reps: u64,
        /// Edges to tally.
        #[arg(long, default_value_t = 50)]
        edges: usize,
        #[arg(long, default_value_t = DEFAULT_CLIQUE_BUDGET)]
        budget: u64,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },

    /// Run a grid of covers from a config file and write CSV/JSON results.
    Experiment {
        /// Flat key=value or JSON config file.
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("could not size thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(match err {
                Error::Domain(_) | Error::Precondition(_) => 2,
                Error::Sizing(_) => 3,
                Error::Parse { .. } => 4,
                Error::Io(_) => 1,
            })
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen { n, p, seed, out } => {
            let g = Graph::gnp(n, p, Seed(seed))?;
            match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    g.save(&mut w)?;
                    w.flush()?;
                }
                None => {
                    let stdout = io::stdout();
                    let mut w = BufWriter::new(stdout.lock());
                    g.save(&mut w)?;
                    w.flush()?;
                }
            }
            Ok(())
        }

        Command::Run {
            source,
            alpha,
            schedule,
            budget,
            out,
            csv,
            json,
        } => {
            let g = source.load()?;
            let mut params = CoverParams::new(source.p, Seed(source.seed));
            params.alpha = alpha;
            params.schedule_override = schedule;
            params.clique_budget = budget;
            let run = run_cover(&g, &params)?;

            let n = g.n();
            println!(
                "graph: n={} m={}  schedule: k={} sizes={:?}",
                n,
                g.m(),
                run.schedule.k,
                run.schedule.sizes
            );
            for rec in &run.records {
                println!(
                    "iteration {}: k_i={} cliques={} edges={} x*2={} x*3={} uncovered={} ({} ms)",
                    rec.i,
                    rec.k_i,
                    rec.cliques_added,
                    rec.edges_added,
                    rec.x_star_2,
                    rec.x_star_3,
                    rec.uncovered_after,
                    rec.elapsed_ms
                );
            }
            println!(
                "cover: {} cliques ({} dumped edges)",
                run.cover.len(),
                run.uncovered_final
            );

            if let Some(path) = out {
                let mut w = BufWriter::new(File::create(path)?);
                run.cover.save(&mut w)?;
                w.flush()?;
            }
            if let Some(path) = csv {
                let mut w = BufWriter::new(File::create(path)?);
                writeln!(w, "{ITERATION_CSV_HEADER}")?;
                for rec in &run.records {
                    writeln!(w, "{}", iteration_csv_row(n, source.p, alpha, source.seed, rec))?;
                }
                w.flush()?;
            }
            if let Some(path) = json {
                let bounds = lower_bound(&g)?;
                let greedy = greedy_cover(&g)?;
                let lnn = (n as f64).ln();
                let summary = RunSummary {
                    n,
                    p: source.p,
                    alpha,
                    seed: source.seed,
                    cover_size: run.cover.len() as u64,
                    ratio: run.cover.len() as f64 * lnn * lnn / (n as f64 * n as f64),
                    m: g.m() as u64,
                    lower: bounds.lower,
                    greedy_size: greedy.len() as u64,
                    predicted_yi: ecc_core::predicted_iteration_counts(
                        &run.schedule.sizes,
                        n,
                        source.p,
                    )?,
                    uncovered_final: run.uncovered_final,
                };
                write_json(&path, &summary)?;
            }
            Ok(())
        }

        Command::Verify { graph, cover } => {
            let g = Graph::load(&mut BufReader::new(File::open(graph)?))?;
            let c = CliqueCover::load(&mut BufReader::new(File::open(cover)?))?;
            let verdict = verify_cover(&g, &c);
            if verdict.is_valid() {
                println!("{verdict}: {} cliques cover {} edges", c.len(), g.m());
                Ok(())
            } else {
                Err(Error::Domain(format!("invalid cover: {verdict}")))
            }
        }

        Command::Exact { source, cap, out } => {
            let g = source.load()?;
            let cover = exact_theta1(&g, cap)?;
            println!("minimum cover: {} cliques for {} edges", cover.len(), g.m());
            if let Some(path) = out {
                let mut w = BufWriter::new(File::create(path)?);
                cover.save(&mut w)?;
                w.flush()?;
            }
            Ok(())
        }

        Command::Greedy { source, out } => {
            let g = source.load()?;
            let cover = greedy_cover(&g)?;
            println!("greedy cover: {} cliques for {} edges", cover.len(), g.m());
            if let Some(path) = out {
                let mut w = BufWriter::new(File::create(path)?);
                cover.save(&mut w)?;
                w.flush()?;
            }
            Ok(())
        }

        Command::Bounds { source } => {
            let g = source.load()?;
            let report = lower_bound(&g)?;
            println!(
                "m={} omega={} lower={} reference_c1={:.6}",
                report.m, report.omega, report.lower, report.c1_reference
            );
            Ok(())
        }

        Command::Survival {
            source,
            alpha,
            reps,
            edges,
            budget,
            json,
        } => {
            let g = source.load()?;
            let mut params = CoverParams::new(source.p, Seed(source.seed));
            params.alpha = alpha;
            params.clique_budget = budget;
            let report = estimate_survival(&g, &params, reps, edges)?;

            println!(
                "k1={} x*2={} reps={} target={:.6}",
                report.k1, report.x_star_2, report.reps, report.target
            );
            let sigma =
                (report.target * (1.0 - report.target) / report.reps as f64).sqrt();
            let mut worst = 0.0f64;
            let mut within = 0usize;
            for e in &report.edges {
                let dev = (e.frequency - report.target).abs();
                worst = worst.max(dev);
                if dev <= 4.0 * sigma {
                    within += 1;
                }
            }
            println!(
                "edges={} within 4 sigma: {}/{} (sigma={:.6}, worst deviation={:.6})",
                report.edges.len(),
                within,
                report.edges.len(),
                sigma,
                worst
            );
            if let Some(path) = json {
                write_json(&path, &report)?;
            }
            Ok(())
        }

        Command::Experiment { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = run_experiment(&cfg)?;
            for s in &report.summaries {
                println!(
                    "n={} seed={}: cover={} ratio={:.4} m={} lower={} greedy={}",
                    s.n, s.seed, s.cover_size, s.ratio, s.m, s.lower, s.greedy_size
                );
            }
            for f in &report.failures {
                println!("n={} seed={}: refused ({})", f.n, f.seed, f.error);
            }
            if let Some(table) = &report.scaling {
                println!("{table}");
            }
            println!("results in {}", report.output_dir.display());
            Ok(())
        }
    }
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::Domain(format!("could not encode JSON: {e}")))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
