//! Edge clique covers of dense random graphs.
//!
//! The centerpiece is a semi-random "nibble" cover builder: over a short
//! schedule of shrinking clique sizes it samples large cliques at a rate tied
//! to the most-loaded edge, patches a calibrated fraction of the leftovers as
//! single edges, and finally dumps whatever survives. Around it sit the
//! supporting cast: a seeded G(n, p) generator, exact and sampled clique
//! counting, an exact minimum-cover solver and greedy baseline for small
//! graphs, and an experiment harness that sweeps grids and records how cover
//! size scales with n.
//!
//! All randomness is keyed: every decision is a pure function of the seed and
//! the decided object's identity, so outputs are bit-reproducible regardless
//! of thread count or evaluation order.

mod bits;
mod error;
mod rng;

pub mod baselines;
pub mod cliques;
pub mod cover;
pub mod graph;
pub mod harness;

pub use error::{Error, Result};
pub use rng::Seed;

pub use baselines::{exact_theta1, greedy_cover, lower_bound, BoundReport};
pub use cliques::{
    cliques_containing, count_per_edge, enumeration_budget_check, estimate_clique_count,
    expected_count, max_clique, maximal_cliques, Clique, CliqueCountEstimate, CliqueStats,
};
pub use cover::{
    derive_schedule, patch_probability, run_cover, step_a, step_b, verify_cover, CliqueCover,
    CoverParams, CoverRun, CoverState, CoverVerdict, IterationRecord, Schedule, StepAReport,
    DEFAULT_ALPHA, DEFAULT_CLIQUE_BUDGET,
};
pub use graph::{EdgeSet, Graph};
pub use harness::{
    check_conditions, estimate_selection, estimate_survival, iteration_csv_row,
    predicted_iteration_counts, run_experiment, summarize_scaling, CellFailure, CliqueSelection,
    ConditionReport, EdgeSurvival, ExperimentConfig, ExperimentReport, PairSurvival, RunSummary,
    ScalingRow, ScalingTable, ScalingTrend, SelectionReport, SurvivalReport,
    DEFAULT_EXPERIMENT_BUDGET, ITERATION_CSV_HEADER,
};
