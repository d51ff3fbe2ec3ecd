use crate::moves::{block_into, block_moves_for, swap_into, swaps_for_count, Move, Schedule, ScheduleKind};
use crate::permutation::{rev_count, strip_count, strips_into, Permutation};

/// Greedy strip swap schedule that sorts `p`.
///
/// Only moves that strictly lower the strip count are eligible; among them
/// the largest drop in `rev` wins, then the largest drop in strips, then the
/// lexicographically first move. Such a move always exists while `p` is not
/// the identity, so the schedule has at most `#strips - 1` moves.
pub fn greedy_upper_bound(p: &Permutation) -> Schedule {
    greedy(p, ScheduleKind::Swap)
}

/// Same rule over block moves; also bounded by `#strips - 1`.
pub fn greedy_block_upper_bound(p: &Permutation) -> Schedule {
    greedy(p, ScheduleKind::Block)
}

fn greedy(p: &Permutation, kind: ScheduleKind) -> Schedule {
    let mut state = p.as_slice().to_vec();
    let mut moves = Vec::new();
    let mut strips = Vec::new();
    let mut child = Vec::with_capacity(state.len());
    while strip_count(&state) > 1 {
        strips_into(&state, &mut strips);
        let (rev, count) = (rev_count(&state), strips.len());
        let candidates: Vec<Move> = match kind {
            ScheduleKind::Swap => swaps_for_count(count).map(Move::Swap).collect(),
            ScheduleKind::Block => block_moves_for(state.len(), &strips).map(Move::Block).collect(),
        };
        // (rev drop, strip drop) maximised; first wins ties.
        let mut best: Option<((usize, usize), Move, Vec<u32>)> = None;
        for m in candidates {
            match m {
                Move::Swap(s) => swap_into(&state, &strips, s, &mut child),
                Move::Block(b) => block_into(&state, &strips, b, &mut child),
            }
            let after = strip_count(&child);
            if after >= count {
                continue;
            }
            let key = (rev.saturating_sub(rev_count(&child)), count - after);
            if best.as_ref().is_none_or(|(k, _, _)| key > *k) {
                best = Some((key, m, child.clone()));
            }
        }
        let (_, m, next) = best.expect("a strip-merging move exists for every non-identity permutation");
        moves.push(m);
        state = next;
    }
    Schedule::new(p.clone(), kind, moves).expect("greedy emits valid moves")
}
