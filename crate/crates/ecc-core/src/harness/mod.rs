//! Experiment orchestration: sweep a grid of (n, seed) cells, record per-run
//! and per-iteration results to disk, and summarize how normalized cover size
//! scales with n.
//!
//! Output files land in the config's `output_dir`:
//!
//! * `iterations.csv`: one row per nibble iteration across all runs, columns
//!   [`ITERATION_CSV_HEADER`].
//! * `summary.csv`: one row per run with the [`RunSummary`] fields; the
//!   predicted per-iteration clique counts are `;`-joined inside one column.
//! * `run_n{n}_seed{seed}.json`: the full record of one run.
//! * `scaling.csv`: the per-n aggregation from [`summarize_scaling`].
//! * `failures.csv`: cells refused by the clique budget guard, if any.
//!
//! Cells run in parallel but every output is written sequentially in grid
//! order, and all numbers are pure functions of the config, so file bodies
//! are byte-stable across thread counts (`elapsed_ms` is wall-clock and is
//! the one exception).

mod conditions;
mod config;
mod survival;

pub use conditions::{check_conditions, ConditionReport};
pub use config::{ExperimentConfig, DEFAULT_EXPERIMENT_BUDGET};
pub use survival::{
    estimate_selection, estimate_survival, CliqueSelection, EdgeSurvival, PairSurvival,
    SelectionReport, SurvivalReport,
};

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{greedy_cover, lower_bound};
use crate::cover::{run_cover, verify_cover, IterationRecord};
use crate::error::{Error, Result};
use crate::expected_count;
use crate::graph::Graph;
use crate::rng::Seed;

/// Header of `iterations.csv`. `Y_i` counts cliques selected in step A,
/// `Z_i` edges patched in step B.
pub const ITERATION_CSV_HEADER: &str =
    "n,p,alpha,seed,i,k_i,Y_i,Z_i,x_star_2,x_star_3,uncovered_after,elapsed_ms";

/// Formats one `iterations.csv` row for a record produced under the given
/// run parameters.
pub fn iteration_csv_row(n: usize, p: f64, alpha: f64, seed: u64, rec: &IterationRecord) -> String {
    format!(
        "{n},{p},{alpha},{seed},{},{},{},{},{},{},{},{}",
        rec.i,
        rec.k_i,
        rec.cliques_added,
        rec.edges_added,
        rec.x_star_2,
        rec.x_star_3,
        rec.uncovered_after,
        rec.elapsed_ms
    )
}

/// Everything recorded about one finished run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub seed: u64,
    /// Cliques in the produced cover, edge dump included.
    pub cover_size: u64,
    /// `cover_size * (ln n)^2 / n^2`, the quantity whose scaling is under
    /// study.
    pub ratio: f64,
    /// Edges of the input graph.
    pub m: u64,
    /// Counting lower bound for the same graph.
    pub lower: u64,
    /// Size of the greedy baseline's cover.
    pub greedy_size: u64,
    /// Model-predicted cliques selected per scheduled iteration,
    /// `c(0, k_i, i) / c(2, k_i, i)`; empty when the schedule is empty.
    #[serde(rename = "predicted_Yi")]
    pub predicted_yi: Vec<f64>,
    /// Active edges left when the schedule ended, all dumped as 2-cliques.
    pub uncovered_final: u64,
}

/// One run's full output document, as written to `run_n{n}_seed{seed}.json`.
#[derive(Serialize)]
struct RunDocument<'a> {
    summary: &'a RunSummary,
    schedule: &'a [u32],
    iterations: &'a [IterationRecord],
}

struct CellOutput {
    summary: RunSummary,
    schedule: Vec<u32>,
    records: Vec<IterationRecord>,
}

/// A grid cell the clique budget guard refused to run.
#[derive(Clone, Debug, Serialize)]
pub struct CellFailure {
    pub n: usize,
    pub seed: u64,
    /// The guard's message, naming the iteration and its predicted count.
    pub error: String,
}

/// The in-memory result of [`run_experiment`].
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    /// One summary per completed (n, seed) cell, in grid order (n-major).
    pub summaries: Vec<RunSummary>,
    /// Cells the budget guard refused; empty on a fully completed grid.
    pub failures: Vec<CellFailure>,
    /// The per-n aggregation of the completed summaries; present when they
    /// span two or more distinct n.
    pub scaling: Option<ScalingTable>,
    /// Directory the CSV and JSON files were written to.
    pub output_dir: PathBuf,
}

/// Runs every (n, seed) cell of the config's grid, writes the output files,
/// and returns the collected summaries and scaling table.
///
/// Cells are independent and run on the rayon pool. A cell refused by the
/// clique budget guard is recorded in `failures` (and `failures.csv`) and the
/// sweep continues; any other cell error fails the whole experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let cells: Vec<(usize, u64)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let results: Vec<(usize, u64, Result<CellOutput>)> = cells
        .par_iter()
        .map(|&(n, seed)| (n, seed, run_cell(cfg, n, seed)))
        .collect();
    let mut outputs: Vec<CellOutput> = Vec::with_capacity(results.len());
    let mut failures: Vec<CellFailure> = Vec::new();
    for (n, seed, result) in results {
        match result {
            Ok(cell) => outputs.push(cell),
            Err(e) if matches!(e, Error::Sizing(_)) => {
                failures.push(CellFailure { n, seed, error: e.to_string() });
            }
            Err(e) => return Err(e),
        }
    }

    let summaries: Vec<RunSummary> = outputs.iter().map(|c| c.summary.clone()).collect();
    let distinct_n = summaries
        .iter()
        .map(|s| s.n)
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let scaling = if distinct_n >= 2 {
        Some(summarize_scaling(&summaries)?)
    } else {
        None
    };

    fs::create_dir_all(&cfg.output_dir)?;
    let mut iter_csv = BufWriter::new(File::create(cfg.output_dir.join("iterations.csv"))?);
    writeln!(iter_csv, "{ITERATION_CSV_HEADER}")?;
    for cell in &outputs {
        let s = &cell.summary;
        for rec in &cell.records {
            writeln!(iter_csv, "{}", iteration_csv_row(s.n, s.p, s.alpha, s.seed, rec))?;
        }
    }
    iter_csv.flush()?;

    let mut sum_csv = BufWriter::new(File::create(cfg.output_dir.join("summary.csv"))?);
    writeln!(
        sum_csv,
        "n,p,alpha,seed,cover_size,ratio,m,lower,greedy_size,predicted_Yi,uncovered_final"
    )?;
    for s in &summaries {
        let predicted: Vec<String> = s.predicted_yi.iter().map(|y| y.to_string()).collect();
        writeln!(
            sum_csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            s.n,
            s.p,
            s.alpha,
            s.seed,
            s.cover_size,
            s.ratio,
            s.m,
            s.lower,
            s.greedy_size,
            predicted.join(";"),
            s.uncovered_final
        )?;
    }
    sum_csv.flush()?;

    for cell in &outputs {
        let s = &cell.summary;
        let path = cfg.output_dir.join(format!("run_n{}_seed{}.json", s.n, s.seed));
        let doc = RunDocument {
            summary: s,
            schedule: &cell.schedule,
            iterations: &cell.records,
        };
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, &doc)
            .map_err(|e| Error::Domain(format!("could not encode run document: {e}")))?;
        writeln!(w)?;
        w.flush()?;
    }

    let mut scale_csv = BufWriter::new(File::create(cfg.output_dir.join("scaling.csv"))?);
    writeln!(scale_csv, "n,runs,mean_ratio,stderr_ratio,mean_cover_frac,c1_reference")?;
    if let Some(table) = &scaling {
        for row in &table.rows {
            writeln!(
                scale_csv,
                "{},{},{},{},{},{}",
                row.n,
                row.runs,
                row.mean_ratio,
                row.stderr_ratio,
                row.mean_cover_frac,
                table.c1_reference
            )?;
        }
    }
    scale_csv.flush()?;

    if !failures.is_empty() {
        let mut fail_csv = BufWriter::new(File::create(cfg.output_dir.join("failures.csv"))?);
        writeln!(fail_csv, "n,p,alpha,seed,error")?;
        for f in &failures {
            let quoted = f.error.replace('"', "\"\"");
            writeln!(fail_csv, "{},{},{},{},\"{}\"", f.n, cfg.p, cfg.alpha, f.seed, quoted)?;
        }
        fail_csv.flush()?;
    }

    Ok(ExperimentReport {
        summaries,
        failures,
        scaling,
        output_dir: cfg.output_dir.clone(),
    })
}

/// Model-predicted cliques selected per scheduled iteration,
/// `c(0, k_i, i) / c(2, k_i, i)`: the expected whole-graph count over the
/// expected per-edge count, which is what selecting at rate `1/X*_2` aims
/// to keep. Empty for degenerate p.
pub fn predicted_iteration_counts(sizes: &[u32], n: usize, p: f64) -> Result<Vec<f64>> {
    let mut predicted = Vec::with_capacity(sizes.len());
    if p > 0.0 && p < 1.0 {
        for (idx, &k_i) in sizes.iter().enumerate() {
            let i = idx as u32 + 1;
            let whole = expected_count(0, k_i, i, n, p)?;
            let per_edge = expected_count(2, k_i, i, n, p)?;
            predicted.push(whole / per_edge);
        }
    }
    Ok(predicted)
}

fn run_cell(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<CellOutput> {
    let g = Graph::gnp(n, cfg.p, Seed(seed))?;
    let params = cfg.cover_params(seed);
    let run = run_cover(&g, &params)?;
    let verdict = verify_cover(&g, &run.cover);
    if !verdict.is_valid() {
        return Err(Error::Domain(format!(
            "internal: run (n={n}, seed={seed}) produced an invalid cover: {verdict:?}"
        )));
    }
    let bounds = lower_bound(&g)?;
    let greedy = greedy_cover(&g)?;
    let predicted = predicted_iteration_counts(&run.schedule.sizes, n, cfg.p)?;

    let lnn = (n as f64).ln();
    let summary = RunSummary {
        n,
        p: cfg.p,
        alpha: cfg.alpha,
        seed,
        cover_size: run.cover.len() as u64,
        ratio: run.cover.len() as f64 * lnn * lnn / (n as f64 * n as f64),
        m: g.m() as u64,
        lower: bounds.lower,
        greedy_size: greedy.len() as u64,
        predicted_yi: predicted,
        uncovered_final: run.uncovered_final,
    };
    Ok(CellOutput {
        summary,
        schedule: run.schedule.sizes,
        records: run.records,
    })
}

/// Aggregated runs at one vertex count.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    /// Runs aggregated into this row.
    pub runs: usize,
    /// Mean of `cover_size * (ln n)^2 / n^2` over those runs.
    pub mean_ratio: f64,
    /// Standard error of that mean (0 for a single run).
    pub stderr_ratio: f64,
    /// Mean of `cover_size / m`.
    pub mean_cover_frac: f64,
}

/// How the mean normalized ratio moves as n grows, judged pairwise on
/// consecutive rows with a small relative tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScalingTrend {
    Decreasing,
    Flat,
    Increasing,
    Mixed,
}

impl fmt::Display for ScalingTrend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            ScalingTrend::Decreasing => {
                "mean ratio decreases with n, consistent with an n^2/(ln n)^2 upper bound"
            }
            ScalingTrend::Flat => "mean ratio is flat across n",
            ScalingTrend::Increasing => "mean ratio increases with n",
            ScalingTrend::Mixed => "mean ratio is not monotone across n",
        };
        f.write_str(text)
    }
}

/// The per-n scaling aggregation.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingTable {
    /// One row per distinct n, ascending.
    pub rows: Vec<ScalingRow>,
    /// The dense-model coefficient `(ln(1/p))^2 * p / 2` the mean ratio is
    /// read against, from the summaries' shared p.
    pub c1_reference: f64,
    pub trend: ScalingTrend,
}

impl fmt::Display for ScalingTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6} {:>5} {:>12} {:>12} {:>12}", "n", "runs", "mean_ratio", "stderr", "cover/m")?;
        for row in &self.rows {
            writeln!(
                f,
                "{:>6} {:>5} {:>12.6} {:>12.6} {:>12.6}",
                row.n, row.runs, row.mean_ratio, row.stderr_ratio, row.mean_cover_frac
            )?;
        }
        writeln!(f, "reference coefficient: {:.6}", self.c1_reference)?;
        write!(f, "trend: {}", self.trend)
    }
}

/// Groups summaries by n and reports mean and spread of the normalized
/// ratio, plus a monotonicity verdict on the means.
///
/// Needs summaries at two or more distinct vertex counts; the reference
/// coefficient is computed from the first summary's p (0 when p is
/// degenerate).
pub fn summarize_scaling(summaries: &[RunSummary]) -> Result<ScalingTable> {
    let mut by_n: BTreeMap<usize, Vec<&RunSummary>> = BTreeMap::new();
    for s in summaries {
        by_n.entry(s.n).or_default().push(s);
    }
    if by_n.len() < 2 {
        return Err(Error::Precondition(format!(
            "scaling summary needs runs at two or more distinct vertex counts, got {}",
            by_n.len()
        )));
    }

    let mut rows = Vec::with_capacity(by_n.len());
    for (&n, group) in &by_n {
        let k = group.len() as f64;
        let mean = group.iter().map(|s| s.ratio).sum::<f64>() / k;
        let stderr = if group.len() > 1 {
            let var = group.iter().map(|s| (s.ratio - mean).powi(2)).sum::<f64>() / (k - 1.0);
            (var / k).sqrt()
        } else {
            0.0
        };
        let frac = group
            .iter()
            .map(|s| {
                if s.m == 0 {
                    0.0
                } else {
                    s.cover_size as f64 / s.m as f64
                }
            })
            .sum::<f64>()
            / k;
        rows.push(ScalingRow {
            n,
            runs: group.len(),
            mean_ratio: mean,
            stderr_ratio: stderr,
            mean_cover_frac: frac,
        });
    }

    let p = summaries[0].p;
    let c1_reference = if p > 0.0 && p < 1.0 {
        let b = 1.0 / p;
        b.ln() * b.ln() * p / 2.0
    } else {
        0.0
    };

    let mut saw_down = false;
    let mut saw_up = false;
    for pair in rows.windows(2) {
        let (a, b) = (pair[0].mean_ratio, pair[1].mean_ratio);
        let tol = 1e-9 * a.abs().max(b.abs());
        if b < a - tol {
            saw_down = true;
        } else if b > a + tol {
            saw_up = true;
        }
    }
    let trend = match (saw_down, saw_up) {
        (true, false) => ScalingTrend::Decreasing,
        (false, true) => ScalingTrend::Increasing,
        (false, false) => ScalingTrend::Flat,
        (true, true) => ScalingTrend::Mixed,
    };

    Ok(ScalingTable {
        rows,
        c1_reference,
        trend,
    })
}
