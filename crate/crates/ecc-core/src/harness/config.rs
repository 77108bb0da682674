//! Experiment configuration: a flat key=value file or its JSON mirror.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cover::{CoverParams, DEFAULT_ALPHA};
use crate::error::{Error, Result};
use crate::Seed;

/// Default enumeration budget for experiments, roomier than a single run's
/// default because grid cells at the large end are expected to be heavy.
pub const DEFAULT_EXPERIMENT_BUDGET: u64 = 20_000_000_000;

/// Everything a batch experiment needs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Vertex counts to sweep.
    pub n_grid: Vec<usize>,
    /// Edge probability for every cell.
    pub p: f64,
    /// Schedule exponent for every cell.
    pub alpha: f64,
    /// One run per (n, seed) pair.
    pub seeds: Vec<u64>,
    /// Fixed clique sizes instead of the derived schedule.
    pub schedule_override: Option<Vec<u32>>,
    /// Repetitions for survival estimation (the `survival` command).
    pub monte_carlo_reps: u64,
    /// Edges sampled for survival estimation (the `survival` command).
    pub sampled_edges: usize,
    /// Where result files land.
    pub output_dir: PathBuf,
    /// Enumeration budget per iteration.
    pub clique_budget: u64,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            n_grid: Vec::new(),
            p: 0.5,
            alpha: DEFAULT_ALPHA,
            seeds: Vec::new(),
            schedule_override: None,
            monte_carlo_reps: 2000,
            sampled_edges: 50,
            output_dir: PathBuf::from("experiment-out"),
            clique_budget: DEFAULT_EXPERIMENT_BUDGET,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Domain("n_grid must not be empty".into()));
        }
        if let Some(&n) = self.n_grid.iter().find(|&&n| n < 3) {
            return Err(Error::Domain(format!(
                "grid vertex counts must be at least 3, got {n}"
            )));
        }
        if self.seeds.is_empty() {
            return Err(Error::Domain("seeds must not be empty".into()));
        }
        if self.monte_carlo_reps == 0 {
            return Err(Error::Domain("monte_carlo_reps must be positive".into()));
        }
        if self.sampled_edges == 0 {
            return Err(Error::Domain("sampled_edges must be positive".into()));
        }
        self.cover_params(0).validate()
    }

    /// The per-run parameters this config induces.
    pub fn cover_params(&self, seed: u64) -> CoverParams {
        CoverParams {
            p: self.p,
            alpha: self.alpha,
            seed: Seed(seed),
            i0_override: None,
            schedule_override: self.schedule_override.clone(),
            clique_budget: self.clique_budget,
        }
    }

    /// Parses either a flat `key=value` file (one pair per line, `#` starts a
    /// comment, lists comma-separated) or a JSON object with the same fields.
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text)
                .map_err(|e| Error::parse(e.line(), format!("bad JSON config: {e}")));
        }
        let mut cfg = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(line_no, format!("expected key=value, got {line:?}")));
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "n_grid" => cfg.n_grid = parse_list(value, line_no, key)?,
                "p" => cfg.p = parse_one(value, line_no, key)?,
                "alpha" => cfg.alpha = parse_one(value, line_no, key)?,
                "seeds" => cfg.seeds = parse_list(value, line_no, key)?,
                "schedule_override" => {
                    cfg.schedule_override = if value.is_empty() {
                        None
                    } else {
                        Some(parse_list(value, line_no, key)?)
                    }
                }
                "monte_carlo_reps" => cfg.monte_carlo_reps = parse_one(value, line_no, key)?,
                "sampled_edges" => cfg.sampled_edges = parse_one(value, line_no, key)?,
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "clique_budget" => cfg.clique_budget = parse_one(value, line_no, key)?,
                other => {
                    return Err(Error::parse(line_no, format!("unknown key {other:?}")));
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::parse(&text)
    }
}

fn parse_one<T: FromStr>(value: &str, line_no: usize, key: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad value for {key}: {value:?}")))
}

fn parse_list<T: FromStr>(value: &str, line_no: usize, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse()
                .map_err(|_| Error::parse(line_no, format!("bad entry for {key}: {tok:?}")))
        })
        .collect()
}
