//! Clique counting, enumeration, and extremal searches.
//!
//! The counting routines work relative to an *active* edge set: a clique
//! counts only if every one of its edges is still active. Counts are exact
//! and come back as a per-edge table (how many active j-cliques contain each
//! edge) plus the maxima and totals the cover builder needs.

mod count;
mod extremal;

pub use count::{cliques_containing, count_per_edge, CliqueStream};
pub use extremal::{max_clique, maximal_cliques, MAXIMAL_VERTEX_CAP};

pub(crate) use count::{select_cliques, ActiveAdj};

use crate::error::{Error, Result};
use crate::graph::{edge_index, Graph};
use crate::rng::{stream, KeyChain, KeyedRng, Seed};
use crate::EdgeSet;

use serde::Serialize;

/// A set of vertices, stored strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clique(Vec<u32>);

impl Clique {
    /// Builds a clique label from a vertex list, which must be nonempty and
    /// strictly increasing.
    pub fn new(vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Precondition("empty vertex list".into()));
        }
        for w in vertices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Precondition(format!(
                    "vertex list must be strictly increasing, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Clique(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Clique(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All unordered vertex pairs, each in canonical (low, high) order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let v = &self.0;
        (0..v.len()).flat_map(move |a| (a + 1..v.len()).map(move |b| (v[a], v[b])))
    }
}

impl std::fmt::Display for Clique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Exact census of the active j-cliques of a graph.
#[derive(Clone, Debug, Serialize)]
pub struct CliqueStats {
    /// Clique size the census was taken at.
    pub j: u32,
    /// Number of active j-cliques.
    pub n_cliques: u64,
    /// Active edges at census time.
    pub m_active: u64,
    /// Largest per-edge count.
    pub x_star_2: u32,
    /// Largest per-triangle count seen; exact for j <= 3, a probed lower
    /// bound for larger j (see [`count_per_edge`]).
    pub x_star_3: u32,
    /// Average per-edge count, `n_cliques * C(j,2) / m_active`.
    pub zeta: f64,
    #[serde(skip)]
    n: usize,
    #[serde(skip)]
    per_edge: Vec<u32>,
}

impl CliqueStats {
    /// Number of active j-cliques containing the edge (u, v).
    pub fn per_edge(&self, u: u32, v: u32) -> u32 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.per_edge[edge_index(self.n, a, b)]
    }

    pub(crate) fn per_edge_slice(&self) -> &[u32] {
        &self.per_edge
    }

    pub(crate) fn new(
        j: u32,
        n: usize,
        per_edge: Vec<u32>,
        n_cliques: u64,
        m_active: u64,
        x_star_3: u32,
    ) -> Self {
        let x_star_2 = per_edge.iter().copied().max().unwrap_or(0);
        let zeta = if m_active == 0 {
            0.0
        } else {
            n_cliques as f64 * binom2(j as u64) as f64 / m_active as f64
        };
        CliqueStats {
            j,
            n_cliques,
            m_active,
            x_star_2,
            x_star_3,
            zeta,
            n,
            per_edge,
        }
    }
}

pub(crate) fn binom2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// ln C(a, b) for nonnegative integers, with `b <= a`.
fn ln_binom(a: u64, b: u64) -> f64 {
    let b = b.min(a - b.min(a));
    if b == 0 {
        return 0.0;
    }
    if b <= 64 {
        let mut acc = 0.0f64;
        for t in 0..b {
            acc += ((a - t) as f64).ln() - ((t + 1) as f64).ln();
        }
        acc
    } else {
        ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b)
    }
}

fn ln_factorial(x: u64) -> f64 {
    statrs::function::gamma::ln_gamma(x as f64 + 1.0)
}

/// C(n, j) exactly, when it fits in a u128.
fn binom_exact(n: u64, j: u64) -> Option<u128> {
    if j > n {
        return Some(0);
    }
    let j = j.min(n - j);
    let mut acc: u128 = 1;
    for t in 0..j {
        acc = acc.checked_mul((n - t) as u128)?;
        acc /= (t + 1) as u128;
    }
    Some(acc)
}

/// Expected number of j-cliques extending a fixed s-clique at the start of
/// iteration `i`, in a model where every edge outside the fixed clique is
/// present independently with probability `p * e^{-(i-1)}`.
///
/// Iteration 1 is the fresh graph. The value is
/// `C(n-s, j-s) * (b * e^{i-1})^{C(s,2) - C(j,2)}` with `b = 1/p`, evaluated
/// in log space so nearby values stay accurate even when the count itself
/// overflows or underflows f64 range (those extremes round to `inf` / `0`).
///
/// Errors: `s > j`, `j > n`, or `i == 0` is a precondition error; `p` outside
/// (0, 1] is a domain error (at `p = 0` no clique has positive probability).
pub fn expected_count(s: u32, j: u32, i: u32, n: usize, p: f64) -> Result<f64> {
    if s > j {
        return Err(Error::Precondition(format!(
            "fixed clique size {s} exceeds target size {j}"
        )));
    }
    if j as usize > n {
        return Err(Error::Precondition(format!(
            "target size {j} exceeds vertex count {n}"
        )));
    }
    if i == 0 {
        return Err(Error::Precondition("iterations are numbered from 1".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "edge probability must be in (0, 1], got {p}"
        )));
    }
    if s == j {
        return Ok(1.0);
    }
    let ln_base = (1.0 / p).ln() + (i - 1) as f64;
    let pairs_gap = binom2(s as u64) as i64 - binom2(j as u64) as i64;
    let ln_count = ln_binom((n - s as usize) as u64, (j - s) as u64) + pairs_gap as f64 * ln_base;
    Ok(ln_count.exp())
}

/// A clique-count estimate from uniform subset sampling.
#[derive(Clone, Copy, Debug)]
pub struct CliqueCountEstimate {
    /// `C(n, j)` times the acceptance fraction.
    pub estimate: f64,
    /// Binomial standard error of the estimate.
    pub std_error: f64,
    /// Samples that formed an active clique.
    pub accepted: u64,
    /// Total samples drawn.
    pub samples: u64,
}

/// Estimates the number of active j-cliques by sampling uniform j-subsets of
/// the vertices and checking each for cliquehood in the active edge set.
///
/// Deterministic in (seed, j, samples). When every j-subset is a clique the
/// estimate is exact (the acceptance fraction is exactly 1 and `C(n, j)` is
/// computed as an integer whenever it fits).
pub fn estimate_clique_count(
    j: u32,
    g: &Graph,
    active: &EdgeSet,
    samples: u64,
    seed: Seed,
) -> Result<CliqueCountEstimate> {
    if active.n() != g.n() {
        return Err(Error::Precondition(
            "active edge set sized for a different graph".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    if j < 2 {
        return Err(Error::Precondition(format!(
            "clique size must be at least 2, got {j}"
        )));
    }
    let n = g.n();
    if j as usize > n {
        return Ok(CliqueCountEstimate {
            estimate: 0.0,
            std_error: 0.0,
            accepted: 0,
            samples,
        });
    }
    let j_us = j as usize;
    let mut accepted = 0u64;
    let base = KeyChain::new(seed).absorb(stream::SUBSET);
    let mut chosen: Vec<u32> = Vec::with_capacity(j_us);
    for s in 0..samples {
        let mut rng = KeyedRng::from_chain(base.absorb(s));
        chosen.clear();
        while chosen.len() < j_us {
            let v = rng.below(n as u64) as u32;
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        let ok = (0..j_us).all(|a| {
            (a + 1..j_us).all(|b| {
                let (x, y) = (chosen[a].min(chosen[b]), chosen[a].max(chosen[b]));
                active.contains(x, y)
            })
        });
        if ok {
            accepted += 1;
        }
    }
    let total = match binom_exact(n as u64, j as u64) {
        Some(c) if c < (1u128 << 100) => c as f64,
        _ => ln_binom(n as u64, j as u64).exp(),
    };
    let f = accepted as f64 / samples as f64;
    let estimate = total * f;
    let std_error = total * (f * (1.0 - f) / samples as f64).sqrt();
    Ok(CliqueCountEstimate {
        estimate,
        std_error,
        accepted,
        samples,
    })
}

const GUARD_SAMPLES: u64 = 50_000;

/// Refuses an enumeration that is predicted to exceed `budget` cliques.
///
/// Two predictions back each other up: the closed-form expectation for the
/// decayed-density model at iteration `i` (when `p` is nondegenerate), and a
/// quick subset-sampling estimate on the actual active set. If either lands
/// above the budget this returns a sizing error naming the iteration, the
/// clique size, and both figures.
pub fn enumeration_budget_check(
    j: u32,
    g: &Graph,
    active: &EdgeSet,
    iteration: u32,
    p: Option<f64>,
    budget: u64,
    seed: Seed,
) -> Result<()> {
    if j < 2 || j as usize > g.n() {
        return Ok(());
    }
    let predicted = match p {
        Some(p) if p > 0.0 && p < 1.0 => expected_count(0, j, iteration, g.n(), p)?,
        _ => 0.0,
    };
    let guard_seed = Seed(
        KeyChain::new(seed)
            .absorb(stream::GUARD)
            .absorb(iteration as u64)
            .value(),
    );
    let est = estimate_clique_count(j, g, active, GUARD_SAMPLES, guard_seed)?;
    let sampled = est.estimate;
    if predicted > budget as f64 || sampled > budget as f64 {
        return Err(Error::Sizing(format!(
            "iteration {iteration} with clique size {j} is over budget: \
             predicted {predicted:.3e}, sampled {sampled:.3e}, budget {budget:.3e}",
            budget = budget as f64
        )));
    }
    Ok(())
}
