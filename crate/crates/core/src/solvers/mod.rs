//! Exact strip-swap and block-sorting distances.
//!
//! [`ssd_exact`] and [`bs_exact`] run iterative deepening with an admissible
//! heuristic: `max(ceil(rev/2), ceil((strips-1)/4))` for swaps, `rev` for
//! block moves. [`ssd_bfs_oracle`] and [`bs_bfs_oracle`] are plain
//! breadth-first searches that share nothing with the deepening code beyond
//! move application, and exist to cross-check it.

mod bfs;
mod greedy;
mod ida;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moves::{Schedule, ScheduleKind};
use crate::permutation::{rev_bound, rev_count, strip_bound, Permutation};

pub use bfs::{bs_bfs_oracle, ssd_bfs_oracle, BFS_MAX_N};
pub use greedy::{greedy_block_upper_bound, greedy_upper_bound};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no schedule of length <= {budget} (lower bound {lower_bound})")]
    BudgetExhausted { budget: usize, lower_bound: usize },
    #[error("distance exceeds cap {cap}")]
    CapExceeded { cap: usize },
    #[error("n = {n} exceeds the breadth-first guard of {max}")]
    StateSpaceGuard { n: usize, max: usize },
    #[error("node limit of {limit} expansions reached")]
    NodeLimit { limit: u64 },
    #[error("time limit of {limit_ms} ms reached")]
    TimeLimit { limit_ms: u64 },
}

impl SearchError {
    /// True for resource limits, as opposed to a definite "no schedule".
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            SearchError::NodeLimit { .. } | SearchError::TimeLimit { .. } | SearchError::StateSpaceGuard { .. }
        )
    }
}

/// Which primitive a search uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Swap,
    Block,
}

impl Metric {
    pub fn kind(self) -> ScheduleKind {
        match self {
            Metric::Swap => ScheduleKind::Swap,
            Metric::Block => ScheduleKind::Block,
        }
    }

    pub(crate) fn heuristic(self, elements: &[u32]) -> usize {
        match self {
            Metric::Swap => rev_bound(elements).max(strip_bound(elements)),
            Metric::Block => rev_count(elements),
        }
    }
}

/// The lower bound that determined the root heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundKind {
    /// `ceil(rev/2)` for swaps, `rev` for block moves.
    Rev,
    /// `ceil((strips-1)/4)`.
    Strips,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceResult {
    pub distance: usize,
    pub lower_bound: usize,
    #[serde(rename = "nodes")]
    pub nodes_expanded: u64,
    pub bound_used: LowerBoundKind,
    pub witness: Schedule,
}

/// Resource caps; `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchConfig {
    /// Longest schedule to look for; defaults to the greedy upper bound.
    pub budget: Option<usize>,
    pub limits: SearchLimits,
    /// Remember failed states within an iteration.
    pub transposition: bool,
}

impl SearchConfig {
    pub fn with_budget(budget: usize) -> Self {
        Self {
            budget: Some(budget),
            ..Self::default()
        }
    }
}

fn root_bound(metric: Metric, p: &Permutation) -> (usize, LowerBoundKind) {
    match metric {
        Metric::Swap => {
            let by_rev = rev_bound(p.as_slice());
            let by_strips = strip_bound(p.as_slice());
            if by_strips > by_rev {
                (by_strips, LowerBoundKind::Strips)
            } else {
                (by_rev, LowerBoundKind::Rev)
            }
        }
        Metric::Block => (rev_count(p.as_slice()), LowerBoundKind::Rev),
    }
}

/// Exact strip swap distance by iterative deepening.
pub fn ssd_exact(p: &Permutation, budget: Option<usize>) -> Result<DistanceResult, SearchError> {
    ssd_exact_with(
        p,
        &SearchConfig {
            budget,
            ..SearchConfig::default()
        },
    )
}

pub fn ssd_exact_with(p: &Permutation, config: &SearchConfig) -> Result<DistanceResult, SearchError> {
    exact(Metric::Swap, p, config, greedy_upper_bound(p))
}

/// Exact block sorting distance by iterative deepening.
pub fn bs_exact(p: &Permutation, budget: Option<usize>) -> Result<DistanceResult, SearchError> {
    bs_exact_with(
        p,
        &SearchConfig {
            budget,
            ..SearchConfig::default()
        },
    )
}

pub fn bs_exact_with(p: &Permutation, config: &SearchConfig) -> Result<DistanceResult, SearchError> {
    exact(Metric::Block, p, config, greedy_block_upper_bound(p))
}

fn exact(
    metric: Metric,
    p: &Permutation,
    config: &SearchConfig,
    upper: Schedule,
) -> Result<DistanceResult, SearchError> {
    let (lower_bound, bound_used) = root_bound(metric, p);
    let budget = config.budget.unwrap_or(upper.len());
    let mut search = ida::Ida::new(metric, config.limits, config.transposition);
    let mut bound = lower_bound;
    loop {
        if bound > budget {
            return Err(SearchError::BudgetExhausted { budget, lower_bound });
        }
        // Every schedule shorter than `bound` has been ruled out.
        if bound >= upper.len() {
            return Ok(DistanceResult {
                distance: upper.len(),
                lower_bound,
                nodes_expanded: search.nodes(),
                bound_used,
                witness: upper,
            });
        }
        match search.iterate(p.as_slice(), bound)? {
            ida::Iteration::Found(moves) => {
                let witness = Schedule::new(p.clone(), metric.kind(), moves).expect("search emits valid moves");
                return Ok(DistanceResult {
                    distance: witness.len(),
                    lower_bound,
                    nodes_expanded: search.nodes(),
                    bound_used,
                    witness,
                });
            }
            ida::Iteration::Exhausted(next) => bound = next,
        }
    }
}

/// Schedule of length at most `bound`, or `None` if none exists.
pub fn search_at_bound(
    metric: Metric,
    p: &Permutation,
    bound: usize,
    limits: SearchLimits,
) -> Result<(Option<Schedule>, u64), SearchError> {
    let mut search = ida::Ida::new(metric, limits, false);
    let found = match search.iterate(p.as_slice(), bound)? {
        ida::Iteration::Found(moves) => {
            Some(Schedule::new(p.clone(), metric.kind(), moves).expect("search emits valid moves"))
        }
        ida::Iteration::Exhausted(_) => None,
    };
    Ok((found, search.nodes()))
}

/// Outcome of the perfect block schedule test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectBlockVerdict {
    /// A block schedule of length `rev(p)`, each move removing one descent.
    pub witness: Option<Schedule>,
    pub nodes: u64,
}

impl PerfectBlockVerdict {
    pub fn holds(&self) -> bool {
        self.witness.is_some()
    }
}

/// True iff `bs(p) == rev(p)`.
pub fn has_perfect_block_schedule(p: &Permutation) -> Result<PerfectBlockVerdict, SearchError> {
    has_perfect_block_schedule_with(p, SearchLimits::default())
}

pub fn has_perfect_block_schedule_with(
    p: &Permutation,
    limits: SearchLimits,
) -> Result<PerfectBlockVerdict, SearchError> {
    let rev = rev_count(p.as_slice());
    let (witness, nodes) = search_at_bound(Metric::Block, p, rev, limits)?;
    if let Some(w) = &witness {
        debug_assert_eq!(w.len(), rev);
        debug_assert!(rev_deltas(w).iter().all(|&d| d == -1));
    }
    Ok(PerfectBlockVerdict { witness, nodes })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactSwapVerdict {
    /// `rev(p)` is odd, so no schedule can remove two descents per swap.
    NotApplicable { rev: usize },
    /// A schedule of `rev(p)/2` swaps, each removing exactly two descents.
    Exact { witness: Schedule, nodes: u64 },
    NotExact { nodes: u64 },
}

impl ExactSwapVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ExactSwapVerdict::Exact { .. })
    }

    pub fn witness(&self) -> Option<&Schedule> {
        match self {
            ExactSwapVerdict::Exact { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            ExactSwapVerdict::Exact { nodes, .. } | ExactSwapVerdict::NotExact { nodes } => *nodes,
            ExactSwapVerdict::NotApplicable { .. } => 0,
        }
    }
}

/// True iff `ssd(p) == rev(p) / 2` for even `rev(p)`.
pub fn has_exact_swap_schedule(p: &Permutation) -> Result<ExactSwapVerdict, SearchError> {
    has_exact_swap_schedule_with(p, SearchLimits::default())
}

pub fn has_exact_swap_schedule_with(p: &Permutation, limits: SearchLimits) -> Result<ExactSwapVerdict, SearchError> {
    let rev = rev_count(p.as_slice());
    if rev % 2 == 1 {
        return Ok(ExactSwapVerdict::NotApplicable { rev });
    }
    let (witness, nodes) = search_at_bound(Metric::Swap, p, rev / 2, limits)?;
    Ok(match witness {
        Some(witness) => {
            assert!(
                rev_deltas(&witness).iter().all(|&d| d == -2),
                "exact swap witness with a move other than -2: {witness:?}"
            );
            ExactSwapVerdict::Exact { witness, nodes }
        }
        None => ExactSwapVerdict::NotExact { nodes },
    })
}

/// Change in `rev` caused by each move of the schedule.
pub fn rev_deltas(schedule: &Schedule) -> Vec<i64> {
    let trace = schedule.trace().expect("schedule replays by construction");
    trace
        .windows(2)
        .map(|w| rev_count(w[1].as_slice()) as i64 - rev_count(w[0].as_slice()) as i64)
        .collect()
}
