//! The semi-random nibble cover.
//!
//! A run works through a short schedule of clique sizes. At iteration i with
//! size k_i, every active k_i-clique is kept independently with probability
//! 1/X*_2, where X*_2 is the current largest per-edge clique count (step A);
//! each still-active edge is then patched as a 2-clique with a per-edge
//! probability calibrated so that one whole iteration leaves an edge active
//! with probability exactly e^-1 - 1/X*_2 (step B). Whatever outlives the
//! schedule is dumped as single edges.
//!
//! Every random decision is keyed by (seed, iteration, object), so a run is
//! reproducible bit for bit at any thread count, and the two phases can be
//! replayed independently of each other.

use std::io::{BufRead, Write};
use std::time::Instant;

use crate::cliques::{
    count_per_edge, enumeration_budget_check, select_cliques, Clique, CliqueStats,
};
use crate::error::{Error, Result};
use crate::graph::{edge_index, Graph};
use crate::rng::{inverse_threshold, prob_threshold, stream, KeyChain, Seed};
use crate::EdgeSet;

/// Default schedule exponent: the opening clique size is about
/// `alpha * log_b(n)` with `b = 1/p`.
pub const DEFAULT_ALPHA: f64 = 0.55;

/// Default ceiling on how many cliques a single enumeration pass may visit.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 100_000_000;

/// Tuning knobs for a cover run.
#[derive(Clone, Debug)]
pub struct CoverParams {
    /// Edge density the schedule formula assumes.
    pub p: f64,
    /// Schedule exponent; the opening size is `floor(alpha * log_b(n))`.
    pub alpha: f64,
    /// Seed for every keyed decision in the run.
    pub seed: Seed,
    /// Fixed iteration count, replacing `ceil(4 ln ln n)`.
    pub i0_override: Option<u32>,
    /// Fixed clique sizes, replacing the derived schedule entirely.
    pub schedule_override: Option<Vec<u32>>,
    /// Enumeration refuses to start an iteration predicted to visit more
    /// cliques than this.
    pub clique_budget: u64,
}

impl CoverParams {
    pub fn new(p: f64, seed: Seed) -> CoverParams {
        CoverParams {
            p,
            alpha: DEFAULT_ALPHA,
            seed,
            i0_override: None,
            schedule_override: None,
            clique_budget: DEFAULT_CLIQUE_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() || !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Domain(format!(
                "edge probability must be in [0, 1], got {}",
                self.p
            )));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::Domain(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if let Some(sizes) = &self.schedule_override {
            for w in sizes.windows(2) {
                if w[0] < w[1] {
                    return Err(Error::Domain(format!(
                        "schedule override must be non-increasing, got {} before {}",
                        w[0], w[1]
                    )));
                }
            }
            if let Some(&bad) = sizes.iter().find(|&&k| k < 3) {
                return Err(Error::Domain(format!(
                    "schedule override entries must be at least 3, got {bad}"
                )));
            }
        }
        Ok(())
    }
}

/// A derived (or overridden) iteration plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    /// Opening clique size.
    pub k: u32,
    /// Planned iteration count before truncation.
    pub i0: u32,
    /// Effective clique size per iteration: `floor(k / i)` while that stays
    /// at least 3, capped at `i0` entries.
    pub sizes: Vec<u32>,
}

impl Schedule {
    fn empty(i0: u32) -> Schedule {
        Schedule {
            k: 0,
            i0,
            sizes: Vec::new(),
        }
    }
}

/// Derives the iteration plan for an n-vertex graph.
///
/// The opening size is `k = floor(alpha * log_b(n))` with `b = 1/p`, the
/// planned length is `i0 = ceil(4 ln ln n)`, and iteration i runs at size
/// `floor(k / i)`; the effective schedule stops at the first size below 3.
/// Both small nudges (1e-9) keep exact integer boundaries like
/// `0.6 * log_2(1024) = 6` from rounding the wrong way.
///
/// A schedule override is returned verbatim (its first entry reported as k,
/// its length as i0). A degenerate density (p = 0 or 1) has no usable base
/// `b`, so the schedule is empty and a run just dumps edges. Without an
/// override, `i0` needs `ln ln n > 0`, so `n <= 2` is a sizing error.
pub fn derive_schedule(n: usize, params: &CoverParams) -> Result<Schedule> {
    params.validate()?;
    if let Some(sizes) = &params.schedule_override {
        return Ok(Schedule {
            k: sizes.first().copied().unwrap_or(0),
            i0: sizes.len() as u32,
            sizes: sizes.clone(),
        });
    }
    if params.p == 0.0 || params.p == 1.0 {
        return Ok(Schedule::empty(params.i0_override.unwrap_or(0)));
    }
    let i0 = match params.i0_override {
        Some(i0) => i0,
        None => {
            if n <= 2 {
                return Err(Error::Sizing(format!(
                    "iteration count ceil(4 ln ln n) needs n >= 3, got {n}"
                )));
            }
            let raw = 4.0 * (n as f64).ln().ln();
            (raw - 1e-9).ceil().max(0.0) as u32
        }
    };
    let ln_b = (1.0 / params.p).ln();
    let k = ((params.alpha * (n.max(1) as f64).ln() / ln_b) + 1e-9).floor() as u32;
    let mut sizes = Vec::new();
    for i in 1..=i0 {
        let k_i = k / i;
        if k_i < 3 {
            break;
        }
        sizes.push(k_i);
    }
    Ok(Schedule { k, i0, sizes })
}

/// Probability that a still-active edge is patched as a 2-clique in step B.
///
/// Solves `e^-1 - 1/X*_2 = (1 - 1/X*_2)^{X_u} * (1 - rho)` for rho, so that
/// clique selection and patching together leave the edge active with
/// probability exactly `e^-1 - 1/X*_2`. Clamped to [0, 1]: when `X*_2` is so
/// small that the target is unreachable (it goes negative at `X*_2 <= 2`),
/// every surviving edge is patched. `X*_2 <= 1` also patches outright.
pub fn patch_probability(x_u: u32, x_star_2: u32) -> f64 {
    if x_star_2 <= 1 {
        return 1.0;
    }
    let x2 = x_star_2 as f64;
    let target = (-1.0f64).exp() - 1.0 / x2;
    let keep = (x_u as f64 * (-1.0 / x2).ln_1p()).exp();
    (1.0 - target / keep).clamp(0.0, 1.0)
}

/// A list of cliques, typically covering a graph's edges.
#[derive(Clone, Debug, Default)]
pub struct CliqueCover {
    cliques: Vec<Clique>,
}

impl CliqueCover {
    pub fn new() -> CliqueCover {
        CliqueCover::default()
    }

    pub fn push(&mut self, clique: Clique) {
        self.cliques.push(clique);
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Clique> {
        self.cliques.iter()
    }

    pub fn as_slice(&self) -> &[Clique] {
        &self.cliques
    }

    /// Writes one clique per line, vertices increasing, space-separated.
    pub fn save<W: Write>(&self, w: &mut W) -> Result<()> {
        for c in &self.cliques {
            writeln!(w, "{c}")?;
        }
        Ok(())
    }

    /// Reads the format written by [`save`](CliqueCover::save). Blank lines
    /// are ignored; anything else must be a strictly increasing list of
    /// vertex ids, and a parse error names the offending 1-based line.
    pub fn load<R: BufRead>(r: &mut R) -> Result<CliqueCover> {
        let mut cover = CliqueCover::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut vertices = Vec::new();
            for tok in line.split_whitespace() {
                let v: u32 = tok.parse().map_err(|_| {
                    Error::parse(line_no, format!("expected a vertex id, got {tok:?}"))
                })?;
                vertices.push(v);
            }
            let clique = Clique::new(vertices)
                .map_err(|e| Error::parse(line_no, format!("bad clique: {e}")))?;
            cover.push(clique);
        }
        Ok(cover)
    }
}

/// The evolving state of a cover run: what is still uncovered, and what has
/// been emitted so far.
pub struct CoverState<'g> {
    graph: &'g Graph,
    params: CoverParams,
    iteration: u32,
    active: EdgeSet,
    cover: CliqueCover,
}

impl<'g> CoverState<'g> {
    /// Fresh state: every edge active, empty cover, iteration 1 next.
    pub fn new(graph: &'g Graph, params: CoverParams) -> Result<CoverState<'g>> {
        params.validate()?;
        Ok(CoverState {
            graph,
            params,
            iteration: 1,
            active: EdgeSet::full(graph),
            cover: CliqueCover::new(),
        })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn params(&self) -> &CoverParams {
        &self.params
    }

    /// 1-based index of the iteration the next step A belongs to.
    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn active(&self) -> &EdgeSet {
        &self.active
    }

    pub fn cover(&self) -> &CliqueCover {
        &self.cover
    }

    /// Marks the current iteration finished; subsequent steps key their
    /// decisions with the next index.
    pub fn advance_iteration(&mut self) {
        self.iteration += 1;
    }

    /// Emits every still-active edge as a 2-clique and returns how many.
    pub fn finalize(&mut self) -> u64 {
        let leftovers: Vec<(u32, u32)> = self.active.iter().collect();
        for &(u, v) in &leftovers {
            self.active.remove(u, v);
            self.cover.push(Clique::from_sorted(vec![u, v]));
        }
        leftovers.len() as u64
    }

    pub fn into_cover(self) -> CliqueCover {
        self.cover
    }
}

/// What step A saw and did.
pub struct StepAReport {
    /// The census taken before any clique was removed.
    pub stats: CliqueStats,
    /// Cliques appended to the cover.
    pub selected: u64,
    /// True when no active clique of the requested size exists; the state is
    /// untouched and the run should finalize.
    pub exhausted: bool,
}

/// Step A: census the active k_i-cliques, then keep each one independently
/// with probability 1/X*_2. Kept cliques join the cover and their edges leave
/// the active set. `k_i` must be at least 3.
pub fn step_a(state: &mut CoverState<'_>, k_i: u32) -> Result<StepAReport> {
    if k_i < 3 {
        return Err(Error::Precondition(format!(
            "scheduled clique size must be at least 3, got {k_i}"
        )));
    }
    let stats = count_per_edge(k_i, state.graph, &state.active)?;
    if stats.x_star_2 == 0 {
        return Ok(StepAReport {
            stats,
            selected: 0,
            exhausted: true,
        });
    }
    let threshold = inverse_threshold(stats.x_star_2 as u64);
    let chain = KeyChain::new(state.params.seed)
        .absorb(stream::SELECT)
        .absorb(state.iteration as u64)
        .absorb(k_i as u64);
    let picked = select_cliques(state.graph, &state.active, k_i, chain, threshold);
    for clique in &picked {
        for (u, v) in clique.pairs() {
            state.active.remove(u, v);
        }
    }
    let selected = picked.len() as u64;
    for clique in picked {
        state.cover.push(clique);
    }
    Ok(StepAReport {
        stats,
        selected,
        exhausted: false,
    })
}

/// Step B: patch each still-active edge as a 2-clique with probability
/// [`patch_probability`] of its pre-step-A count. Returns how many edges were
/// patched. Requires the census step A used, with `X*_2 >= 1`.
pub fn step_b(state: &mut CoverState<'_>, stats: &CliqueStats) -> Result<u64> {
    if stats.x_star_2 == 0 {
        return Err(Error::Precondition(
            "step B needs a census with at least one clique".into(),
        ));
    }
    let n = state.graph.n();
    let chain = KeyChain::new(state.params.seed)
        .absorb(stream::PATCH)
        .absorb(state.iteration as u64);
    let per_edge = stats.per_edge_slice();
    let mut patched: Vec<(u32, u32)> = Vec::new();
    for (u, v) in state.active.iter() {
        let idx = edge_index(n, u, v);
        let rho = patch_probability(per_edge[idx], stats.x_star_2);
        if crate::rng::hits(chain.absorb(idx as u64).value(), prob_threshold(rho)) {
            patched.push((u, v));
        }
    }
    for &(u, v) in &patched {
        state.active.remove(u, v);
        state.cover.push(Clique::from_sorted(vec![u, v]));
    }
    Ok(patched.len() as u64)
}

/// One scheduled iteration's tallies.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IterationRecord {
    /// 1-based iteration index.
    pub i: u32,
    /// Clique size this iteration ran at.
    pub k_i: u32,
    /// Cliques selected in step A.
    pub cliques_added: u64,
    /// Edges patched in step B.
    pub edges_added: u64,
    /// Largest per-edge count in the census.
    pub x_star_2: u32,
    /// Largest per-triangle count seen in the census.
    pub x_star_3: u32,
    /// Active edges after both steps.
    pub uncovered_after: u64,
    /// Wall-clock time for the iteration.
    pub elapsed_ms: u64,
}

/// A finished cover run.
#[derive(Debug)]
pub struct CoverRun {
    pub cover: CliqueCover,
    pub schedule: Schedule,
    pub records: Vec<IterationRecord>,
    /// Active edges remaining after the last iteration, every one of which
    /// was then dumped into the cover as a 2-clique.
    pub uncovered_final: u64,
}

/// Runs the full nibble: schedule, iterations, final dump.
///
/// Each iteration is budget-checked before it enumerates anything; a
/// prediction over `params.clique_budget` aborts the run with a sizing error.
/// If a census comes back empty the run finalizes early. Graphs with no
/// edges, and graphs too small for the schedule formula (n < 3 with no
/// override), run with an empty schedule: the cover is just the edge dump.
pub fn run_cover(g: &Graph, params: &CoverParams) -> Result<CoverRun> {
    params.validate()?;
    let formula_applies =
        g.n() >= 3 || params.schedule_override.is_some() || params.i0_override.is_some();
    let schedule = if g.m() == 0 {
        Schedule::empty(0)
    } else if formula_applies {
        derive_schedule(g.n(), params)?
    } else {
        Schedule::empty(0)
    };
    let mut state = CoverState::new(g, params.clone())?;
    let mut records = Vec::with_capacity(schedule.sizes.len());
    let model_p = if params.p > 0.0 && params.p < 1.0 {
        Some(params.p)
    } else {
        None
    };
    for &k_i in &schedule.sizes {
        let i = state.iteration();
        enumeration_budget_check(
            k_i,
            g,
            &state.active,
            i,
            model_p,
            params.clique_budget,
            params.seed,
        )?;
        let started = Instant::now();
        let report = step_a(&mut state, k_i)?;
        if report.exhausted {
            records.push(IterationRecord {
                i,
                k_i,
                cliques_added: 0,
                edges_added: 0,
                x_star_2: 0,
                x_star_3: report.stats.x_star_3,
                uncovered_after: state.active.len() as u64,
                elapsed_ms: started.elapsed().as_millis() as u64,
            });
            break;
        }
        let patched = step_b(&mut state, &report.stats)?;
        records.push(IterationRecord {
            i,
            k_i,
            cliques_added: report.selected,
            edges_added: patched,
            x_star_2: report.stats.x_star_2,
            x_star_3: report.stats.x_star_3,
            uncovered_after: state.active.len() as u64,
            elapsed_ms: started.elapsed().as_millis() as u64,
        });
        state.advance_iteration();
    }
    let uncovered_final = state.active.len() as u64;
    state.finalize();
    Ok(CoverRun {
        cover: state.into_cover(),
        schedule,
        records,
        uncovered_final,
    })
}

/// The outcome of checking a cover against a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverVerdict {
    Valid,
    /// A member has fewer than two vertices.
    MemberTooSmall { index: usize },
    /// A member names a vertex the graph does not have.
    VertexOutOfRange { index: usize, vertex: u32 },
    /// A member is not a clique: this edge of it is missing from the graph.
    MissingEdge { index: usize, u: u32, v: u32 },
    /// No member covers this graph edge.
    UncoveredEdge { u: u32, v: u32 },
}

impl CoverVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CoverVerdict::Valid)
    }
}

impl std::fmt::Display for CoverVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverVerdict::Valid => write!(f, "valid cover"),
            CoverVerdict::MemberTooSmall { index } => {
                write!(f, "cover member {index} has fewer than two vertices")
            }
            CoverVerdict::VertexOutOfRange { index, vertex } => {
                write!(f, "cover member {index} names missing vertex {vertex}")
            }
            CoverVerdict::MissingEdge { index, u, v } => {
                write!(f, "cover member {index} is not a clique: ({u}, {v}) is not an edge")
            }
            CoverVerdict::UncoveredEdge { u, v } => {
                write!(f, "edge ({u}, {v}) is not covered")
            }
        }
    }
}

/// Checks that every member is a clique of `g` with at least two vertices and
/// that every edge of `g` appears in some member. The first problem found (in
/// member order, then edge order) is the verdict.
pub fn verify_cover(g: &Graph, cover: &CliqueCover) -> CoverVerdict {
    let n = g.n();
    for (index, clique) in cover.iter().enumerate() {
        if clique.len() < 2 {
            return CoverVerdict::MemberTooSmall { index };
        }
        for &v in clique.vertices() {
            if v as usize >= n {
                return CoverVerdict::VertexOutOfRange { index, vertex: v };
            }
        }
        for (u, v) in clique.pairs() {
            if !g.has_edge(u, v) {
                return CoverVerdict::MissingEdge { index, u, v };
            }
        }
    }
    let mut covered = EdgeSet::new(n);
    for clique in cover.iter() {
        for (u, v) in clique.pairs() {
            covered.insert(u, v);
        }
    }
    for (u, v) in g.edges() {
        if !covered.contains(u, v) {
            return CoverVerdict::UncoveredEdge { u, v };
        }
    }
    CoverVerdict::Valid
}
