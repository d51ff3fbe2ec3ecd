use std::collections::HashMap;

use super::{DistanceResult, LowerBoundKind, Metric, SearchError};
use crate::moves::{apply_move, enumerate_block_moves, enumerate_strip_swaps, Move, Schedule};
use crate::permutation::{lower_bound_rev, lower_bound_strips, Permutation};

/// Largest `n` the breadth-first oracles accept (`9! = 362880` states).
pub const BFS_MAX_N: usize = 9;

/// Exact strip swap distance by breadth-first search; shortest witness.
pub fn ssd_bfs_oracle(p: &Permutation, cap: usize) -> Result<DistanceResult, SearchError> {
    bfs(Metric::Swap, p, cap)
}

/// Exact block sorting distance by breadth-first search.
pub fn bs_bfs_oracle(p: &Permutation, cap: usize) -> Result<DistanceResult, SearchError> {
    bfs(Metric::Block, p, cap)
}

fn successors(metric: Metric, p: &Permutation) -> Vec<Move> {
    match metric {
        Metric::Swap => enumerate_strip_swaps(p).into_iter().map(Move::Swap).collect(),
        Metric::Block => enumerate_block_moves(p).into_iter().map(Move::Block).collect(),
    }
}

fn bfs(metric: Metric, p: &Permutation, cap: usize) -> Result<DistanceResult, SearchError> {
    if p.len() > BFS_MAX_N {
        return Err(SearchError::StateSpaceGuard {
            n: p.len(),
            max: BFS_MAX_N,
        });
    }
    let (lower_bound, bound_used) = match metric {
        Metric::Swap => {
            let (r, s) = (lower_bound_rev(p), lower_bound_strips(p));
            if s > r {
                (s, LowerBoundKind::Strips)
            } else {
                (r, LowerBoundKind::Rev)
            }
        }
        Metric::Block => (p.rev().rev, LowerBoundKind::Rev),
    };

    // parent[state] = (predecessor, move); the start maps to None.
    let mut parent: HashMap<Permutation, Option<(Permutation, Move)>> = HashMap::new();
    parent.insert(p.clone(), None);
    let mut layer = vec![p.clone()];
    let mut nodes = 0u64;
    let mut depth = 0;
    let goal = loop {
        if let Some(found) = layer.iter().find(|q| q.is_identity()) {
            break found.clone();
        }
        if depth == cap || layer.is_empty() {
            return Err(SearchError::CapExceeded { cap });
        }
        let mut next = Vec::new();
        for state in &layer {
            nodes += 1;
            for m in successors(metric, state) {
                let child = apply_move(state, m).expect("enumerated moves are valid");
                if !parent.contains_key(&child) {
                    parent.insert(child.clone(), Some((state.clone(), m)));
                    next.push(child);
                }
            }
        }
        layer = next;
        depth += 1;
    };

    let mut moves = Vec::with_capacity(depth);
    let mut cursor = goal;
    while let Some(Some((prev, m))) = parent.get(&cursor) {
        moves.push(*m);
        cursor = prev.clone();
    }
    moves.reverse();
    let witness = Schedule::new(p.clone(), metric.kind(), moves).expect("bfs path replays");
    Ok(DistanceResult {
        distance: depth,
        lower_bound,
        nodes_expanded: nodes,
        bound_used,
        witness,
    })
}
