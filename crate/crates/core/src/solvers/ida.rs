use std::collections::HashMap;
use std::time::Instant;

use super::{Metric, SearchError, SearchLimits};
use crate::moves::{block_into, block_moves_for, swap_into, swaps_for_count, Move};
use crate::permutation::{is_sorted_identity, strips_into};

pub(super) enum Iteration {
    Found(Vec<Move>),
    /// Smallest f-value that exceeded the bound, `usize::MAX` if none.
    Exhausted(usize),
}

/// Depth-first search bounded by `g + h <= bound`, explored in
/// lexicographic move order so results are reproducible.
pub(super) struct Ida {
    metric: Metric,
    limits: SearchLimits,
    started: Instant,
    nodes: u64,
    path: Vec<Move>,
    /// State -> smallest depth at which it was already fully explored.
    seen: Option<HashMap<Vec<u32>, usize>>,
}

impl Ida {
    pub fn new(metric: Metric, limits: SearchLimits, transposition: bool) -> Self {
        Self {
            metric,
            limits,
            started: Instant::now(),
            nodes: 0,
            path: Vec::new(),
            seen: transposition.then(HashMap::new),
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn iterate(&mut self, start: &[u32], bound: usize) -> Result<Iteration, SearchError> {
        self.path.clear();
        if let Some(seen) = &mut self.seen {
            seen.clear();
        }
        match self.dfs(start, 0, bound)? {
            None => Ok(Iteration::Found(std::mem::take(&mut self.path))),
            Some(next) => Ok(Iteration::Exhausted(next)),
        }
    }

    fn check_limits(&self) -> Result<(), SearchError> {
        if let Some(limit) = self.limits.max_nodes {
            if self.nodes > limit {
                return Err(SearchError::NodeLimit { limit });
            }
        }
        if let Some(limit) = self.limits.time_limit {
            // Checking the clock on every node is measurably slow.
            if self.nodes % 1024 == 0 && self.started.elapsed() > limit {
                return Err(SearchError::TimeLimit {
                    limit_ms: limit.as_millis() as u64,
                });
            }
        }
        Ok(())
    }

    /// `Ok(None)` when a solution is on `self.path`.
    fn dfs(&mut self, state: &[u32], g: usize, bound: usize) -> Result<Option<usize>, SearchError> {
        let f = g + self.metric.heuristic(state);
        if f > bound {
            return Ok(Some(f));
        }
        if is_sorted_identity(state) {
            return Ok(None);
        }
        if let Some(seen) = &self.seen {
            if seen.get(state).is_some_and(|&depth| depth <= g) {
                return Ok(Some(usize::MAX));
            }
        }
        self.nodes += 1;
        self.check_limits()?;

        let mut strips = Vec::new();
        strips_into(state, &mut strips);
        let mut child = Vec::with_capacity(state.len());
        let mut next = usize::MAX;
        let moves: Vec<Move> = match self.metric {
            Metric::Swap => swaps_for_count(strips.len()).map(Move::Swap).collect(),
            Metric::Block => block_moves_for(state.len(), &strips).map(Move::Block).collect(),
        };
        for m in moves {
            match m {
                Move::Swap(s) => swap_into(state, &strips, s, &mut child),
                Move::Block(b) => block_into(state, &strips, b, &mut child),
            }
            self.path.push(m);
            match self.dfs(&child, g + 1, bound)? {
                None => return Ok(None),
                Some(f) => next = next.min(f),
            }
            self.path.pop();
        }
        if let Some(seen) = &mut self.seen {
            seen.insert(state.to_vec(), g);
        }
        Ok(Some(next))
    }
}
