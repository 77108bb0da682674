//! Monte Carlo replay of one cover iteration, measuring how often edges
//! survive it.
//!
//! The graph and its opening census are frozen; only the algorithmic
//! randomness varies. Each repetition derives a fresh sub-seed and replays
//! the keyed decisions of step A (is any clique containing the edge
//! selected?) and step B (is the edge patched?) without mutating anything.
//! Selection decisions are keyed by the clique's identity, so two sampled
//! edges sharing a clique automatically see the same draw, which is what
//! makes the joint pair frequencies meaningful.

use crate::cliques::{cliques_containing, count_per_edge, enumeration_budget_check, Clique};
use crate::cover::{derive_schedule, patch_probability, CoverParams};
use crate::error::{Error, Result};
use crate::graph::{edge_index, Graph};
use crate::rng::{hits, inverse_threshold, prob_threshold, stream, KeyChain, KeyedRng, Seed};
use crate::EdgeSet;

/// One sampled edge's survival tally.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EdgeSurvival {
    pub u: u32,
    pub v: u32,
    /// Cliques of the opening size containing this edge.
    pub x_u: u32,
    /// The step B patch probability this edge faces.
    pub patch_probability: f64,
    /// Repetitions the edge survived (unselected and unpatched).
    pub survived: u64,
    /// `survived / reps`.
    pub frequency: f64,
}

/// Joint survival of a fixed pair of sampled edges.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PairSurvival {
    pub first: (u32, u32),
    pub second: (u32, u32),
    pub joint: u64,
    pub frequency: f64,
}

/// One tracked clique's step A selection tally.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CliqueSelection {
    pub vertices: Vec<u32>,
    /// Repetitions in which this clique was selected.
    pub selected: u64,
    /// `selected / reps`.
    pub frequency: f64,
}

/// Step A selection marginals over a frozen opening census.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SelectionReport {
    /// Opening clique size replayed.
    pub k1: u32,
    /// Largest per-edge count in the frozen census.
    pub x_star_2: u32,
    pub reps: u64,
    /// The per-clique selection probability, `1/X*_2`.
    pub target: f64,
    pub cliques: Vec<CliqueSelection>,
}

/// A survival experiment's results.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SurvivalReport {
    /// Opening clique size replayed.
    pub k1: u32,
    /// Largest per-edge count in the frozen census.
    pub x_star_2: u32,
    pub reps: u64,
    /// The exact one-iteration survival probability, `e^-1 - 1/X*_2`.
    pub target: f64,
    /// Reference point for pair frequencies, `e^-2` (the true joint value
    /// carries a relative correction on the order of ln n / n).
    pub pair_target: f64,
    pub edges: Vec<EdgeSurvival>,
    /// Consecutive sampled edges, paired off.
    pub pairs: Vec<PairSurvival>,
}

/// Replays the first scheduled iteration `reps` times over a frozen census
/// and tallies per-edge (and pairwise) survival.
///
/// Deterministic in (params.seed, reps, sampled_edges). Errors: an empty
/// derived schedule or an empty opening census is a precondition error (there
/// is no iteration to replay); the budget guard applies as in a real run.
pub fn estimate_survival(
    g: &Graph,
    params: &CoverParams,
    reps: u64,
    sampled_edges: usize,
) -> Result<SurvivalReport> {
    params.validate()?;
    if reps == 0 {
        return Err(Error::Precondition("need at least one repetition".into()));
    }
    if sampled_edges == 0 {
        return Err(Error::Precondition("need at least one sampled edge".into()));
    }
    let schedule = derive_schedule(g.n(), params)?;
    let Some(&k1) = schedule.sizes.first() else {
        return Err(Error::Precondition(
            "derived schedule is empty; no iteration to replay".into(),
        ));
    };
    let active = EdgeSet::full(g);
    enumeration_budget_check(k1, g, &active, 1, model_p(params), params.clique_budget, params.seed)?;
    let stats = count_per_edge(k1, g, &active)?;
    if stats.x_star_2 == 0 {
        return Err(Error::Precondition(
            "opening census found no cliques; survival is undefined".into(),
        ));
    }
    let x2 = stats.x_star_2;
    let select_threshold = inverse_threshold(x2 as u64);
    let target = (-1.0f64).exp() - 1.0 / x2 as f64;

    let mut edges: Vec<(u32, u32)> = g.edges().collect();
    let take = sampled_edges.min(edges.len());
    let mut rng = KeyedRng::from_chain(KeyChain::new(params.seed).absorb(stream::EDGE_SAMPLE));
    for t in 0..take {
        let rest = (edges.len() - t) as u64;
        let pick = t + rng.below(rest) as usize;
        edges.swap(t, pick);
    }
    edges.truncate(take);

    let n = g.n();
    let mut clique_lists: Vec<Vec<Clique>> = Vec::with_capacity(take);
    let mut patch_thresholds: Vec<u128> = Vec::with_capacity(take);
    let mut rhos: Vec<f64> = Vec::with_capacity(take);
    for &(u, v) in &edges {
        let list: Vec<Clique> = cliques_containing(&[u, v], k1, g, &active)?.collect();
        debug_assert_eq!(list.len() as u32, stats.per_edge(u, v));
        clique_lists.push(list);
        let rho = patch_probability(stats.per_edge(u, v), x2);
        rhos.push(rho);
        patch_thresholds.push(prob_threshold(rho));
    }

    let rep_base = KeyChain::new(params.seed).absorb(stream::REP);
    let mut survived = vec![0u64; take];
    let mut joint = vec![0u64; take / 2];
    let mut alive = vec![false; take];
    for r in 0..reps {
        let sub = Seed(rep_base.absorb(r).value());
        let select_base = KeyChain::new(sub)
            .absorb(stream::SELECT)
            .absorb(1)
            .absorb(k1 as u64);
        let patch_base = KeyChain::new(sub).absorb(stream::PATCH).absorb(1);
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let mut gone = false;
            for clique in &clique_lists[idx] {
                let mut chain = select_base;
                for &w in clique.vertices() {
                    chain = chain.absorb(w as u64);
                }
                if hits(chain.value(), select_threshold) {
                    gone = true;
                    break;
                }
            }
            if !gone {
                let e = edge_index(n, u, v) as u64;
                if hits(patch_base.absorb(e).value(), patch_thresholds[idx]) {
                    gone = true;
                }
            }
            alive[idx] = !gone;
            if !gone {
                survived[idx] += 1;
            }
        }
        for pair in 0..take / 2 {
            if alive[2 * pair] && alive[2 * pair + 1] {
                joint[pair] += 1;
            }
        }
    }

    let edges_out: Vec<EdgeSurvival> = edges
        .iter()
        .enumerate()
        .map(|(idx, &(u, v))| EdgeSurvival {
            u,
            v,
            x_u: stats.per_edge(u, v),
            patch_probability: rhos[idx],
            survived: survived[idx],
            frequency: survived[idx] as f64 / reps as f64,
        })
        .collect();
    let pairs_out: Vec<PairSurvival> = (0..take / 2)
        .map(|pair| PairSurvival {
            first: edges[2 * pair],
            second: edges[2 * pair + 1],
            joint: joint[pair],
            frequency: joint[pair] as f64 / reps as f64,
        })
        .collect();

    Ok(SurvivalReport {
        k1,
        x_star_2: x2,
        reps,
        target,
        pair_target: (-2.0f64).exp(),
        edges: edges_out,
        pairs: pairs_out,
    })
}

/// Replays step A of the first scheduled iteration `reps` times and tallies
/// how often each of a fixed set of census cliques is selected. The expected
/// frequency for every clique is exactly `1/X*_2`.
///
/// The tracked cliques are a uniform reservoir sample of the frozen opening
/// census, keyed by the seed. Repetition `r` here and in [`estimate_survival`]
/// derive the same sub-seed, so the two reports describe the same simulated
/// runs. Deterministic in (params.seed, reps, sampled_cliques).
pub fn estimate_selection(
    g: &Graph,
    params: &CoverParams,
    reps: u64,
    sampled_cliques: usize,
) -> Result<SelectionReport> {
    params.validate()?;
    if reps == 0 {
        return Err(Error::Precondition("need at least one repetition".into()));
    }
    if sampled_cliques == 0 {
        return Err(Error::Precondition("need at least one sampled clique".into()));
    }
    let schedule = derive_schedule(g.n(), params)?;
    let Some(&k1) = schedule.sizes.first() else {
        return Err(Error::Precondition(
            "derived schedule is empty; no iteration to replay".into(),
        ));
    };
    let active = EdgeSet::full(g);
    enumeration_budget_check(k1, g, &active, 1, model_p(params), params.clique_budget, params.seed)?;
    let stats = count_per_edge(k1, g, &active)?;
    if stats.x_star_2 == 0 {
        return Err(Error::Precondition(
            "opening census found no cliques; selection is undefined".into(),
        ));
    }
    let x2 = stats.x_star_2;
    let select_threshold = inverse_threshold(x2 as u64);

    let mut sample: Vec<Clique> = Vec::with_capacity(sampled_cliques.min(64));
    let mut seen = 0u64;
    let mut rng = KeyedRng::from_chain(KeyChain::new(params.seed).absorb(stream::CLIQUE_SAMPLE));
    for clique in cliques_containing(&[], k1, g, &active)? {
        seen += 1;
        if sample.len() < sampled_cliques {
            sample.push(clique);
        } else {
            let slot = rng.below(seen) as usize;
            if slot < sampled_cliques {
                sample[slot] = clique;
            }
        }
    }
    sample.sort_by(|a, b| a.vertices().cmp(b.vertices()));

    let rep_base = KeyChain::new(params.seed).absorb(stream::REP);
    let mut selected = vec![0u64; sample.len()];
    for r in 0..reps {
        let sub = Seed(rep_base.absorb(r).value());
        let select_base = KeyChain::new(sub)
            .absorb(stream::SELECT)
            .absorb(1)
            .absorb(k1 as u64);
        for (idx, clique) in sample.iter().enumerate() {
            let mut chain = select_base;
            for &w in clique.vertices() {
                chain = chain.absorb(w as u64);
            }
            if hits(chain.value(), select_threshold) {
                selected[idx] += 1;
            }
        }
    }

    let cliques: Vec<CliqueSelection> = sample
        .iter()
        .enumerate()
        .map(|(idx, clique)| CliqueSelection {
            vertices: clique.vertices().to_vec(),
            selected: selected[idx],
            frequency: selected[idx] as f64 / reps as f64,
        })
        .collect();

    Ok(SelectionReport {
        k1,
        x_star_2: x2,
        reps,
        target: 1.0 / x2 as f64,
        cliques,
    })
}

fn model_p(params: &CoverParams) -> Option<f64> {
    if params.p > 0.0 && params.p < 1.0 {
        Some(params.p)
    } else {
        None
    }
}
