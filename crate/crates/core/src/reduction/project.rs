//! Carrying schedules between `π†` and its source.
//!
//! Forward: swapping the two singleton strips `[a_i]` and `[a_{i+1}]` inside
//! each cage. Backward: a strip-swap schedule on `π†` in which every move
//! removes exactly two descents is mapped, move by move, to block moves on
//! the source that each remove the matching descent and nothing else.

use thiserror::Error;

use super::{Cage, GadgetInstance, GadgetToken};
use crate::moves::{apply_block_move, enumerate_block_moves, Move, Schedule, ScheduleKind, StripSwap};
use crate::permutation::{rev_count, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectionError {
    #[error("schedule starts at {found} but the instance is {expected}")]
    StartMismatch { expected: Permutation, found: Permutation },
    #[error("projection needs a strip swap schedule")]
    NotSwapSchedule,
    #[error("move {} changes rev by {delta}, not -2", .index + 1)]
    NotMinusTwo { index: usize, delta: i64 },
    #[error("move {} removes two descents but exchanges {}, not the two elements of one cage", .index + 1, describe(.swapped))]
    NotCageLocal { index: usize, swapped: Vec<Vec<GadgetToken>> },
    #[error("move {} resolves cage {boundary} ({left}, {right}) but no block move on {state} removes exactly that descent", .index + 1)]
    NoPerfectBlockMove {
        index: usize,
        boundary: usize,
        left: u32,
        right: u32,
        state: Permutation,
    },
    #[error("cage {0} does not exist")]
    UnknownCage(usize),
    #[error("cage {boundary}: element {element} is not a singleton strip")]
    NotSingleton { boundary: usize, element: u32 },
}

fn describe(swapped: &[Vec<GadgetToken>]) -> String {
    swapped
        .iter()
        .map(|strip| {
            let inner: Vec<String> = strip.iter().map(GadgetToken::label).collect();
            format!("[{}]", inner.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" <-> ")
}

impl ProjectionError {
    /// True when the failure is an instance where a `-2` swap does not
    /// correspond to a `-1` block move, as opposed to bad input.
    pub fn is_lemma_counterexample(&self) -> bool {
        matches!(
            self,
            ProjectionError::NotCageLocal { .. } | ProjectionError::NoPerfectBlockMove { .. }
        )
    }
}

/// Values of `π†` and the token at each position, replayed together.
struct TokenState {
    values: Vec<u32>,
    tokens: Vec<GadgetToken>,
}

impl TokenState {
    fn new(inst: &GadgetInstance) -> Self {
        Self {
            values: inst.pi_dagger.as_slice().to_vec(),
            tokens: inst.tokens.clone(),
        }
    }

    fn permutation(&self) -> Permutation {
        Permutation::from_vec_unchecked(self.values.clone())
    }

    fn apply(&mut self, m: StripSwap) -> Vec<Vec<GadgetToken>> {
        let p = self.permutation();
        let strips = p.strips();
        let (a, b) = (strips.strips()[m.left], strips.strips()[m.right]);
        let swapped = vec![self.tokens[a.range()].to_vec(), self.tokens[b.range()].to_vec()];
        self.values = exchange(&self.values, a.range(), b.range());
        self.tokens = exchange(&self.tokens, a.range(), b.range());
        swapped
    }
}

fn exchange<T: Copy>(xs: &[T], a: std::ops::Range<usize>, b: std::ops::Range<usize>) -> Vec<T> {
    let mut out = Vec::with_capacity(xs.len());
    out.extend_from_slice(&xs[..a.start]);
    out.extend_from_slice(&xs[b.clone()]);
    out.extend_from_slice(&xs[a.end..b.start]);
    out.extend_from_slice(&xs[a]);
    out.extend_from_slice(&xs[b.end..]);
    out
}

fn cage_tokens(inst: &GadgetInstance, cage: &Cage) -> (GadgetToken, GadgetToken) {
    (inst.tokens[cage.left_pos()], inst.tokens[cage.right_pos()])
}

/// Swaps `[a_i] <-> [a_{i+1}]` in the cages named by `boundaries`, in order.
pub fn cage_swap_schedule(inst: &GadgetInstance, boundaries: &[usize]) -> Result<Schedule, ProjectionError> {
    let cages = inst.cages();
    let mut state = TokenState::new(inst);
    let mut moves = Vec::with_capacity(boundaries.len());
    for &boundary in boundaries {
        let cage = cages
            .iter()
            .find(|c| c.boundary == boundary)
            .ok_or(ProjectionError::UnknownCage(boundary))?;
        let (lt, rt) = cage_tokens(inst, cage);
        let p = state.permutation();
        let strips = p.strips();
        let index_of = |token: GadgetToken, element: u32| {
            let pos = state.tokens.iter().position(|&t| t == token).expect("cage tokens persist");
            let idx = strips.strip_at(pos).unwrap();
            if strips.strips()[idx].len != 1 {
                return Err(ProjectionError::NotSingleton { boundary, element });
            }
            Ok(idx)
        };
        let m = StripSwap::new(index_of(lt, cage.left)?, index_of(rt, cage.right)?);
        state.apply(m);
        moves.push(Move::Swap(m));
    }
    Ok(Schedule::new(inst.pi_dagger.clone(), ScheduleKind::Swap, moves).expect("cage swaps replay"))
}

/// One cage swap per descent of the source, left to right.
pub fn forward_schedule(inst: &GadgetInstance) -> Result<Schedule, ProjectionError> {
    let boundaries: Vec<usize> = inst.cages().iter().map(|c| c.boundary).collect();
    cage_swap_schedule(inst, &boundaries)
}

/// Maps an exact strip-swap schedule on `π†` to a block schedule on the
/// source in which every move removes exactly one descent.
///
/// Each `-2` swap must exchange the two element tokens of one cage; the
/// cage's source descent `(a_i, a_{i+1})` is then removed by a block move
/// whose only effect on the set of descent pairs is dropping that pair.
/// When several such block moves exist the first one (lexicographically)
/// that lets the rest of the schedule project is used.
pub fn project_schedule(inst: &GadgetInstance, s: &Schedule) -> Result<Schedule, ProjectionError> {
    if s.start() != &inst.pi_dagger {
        return Err(ProjectionError::StartMismatch {
            expected: inst.pi_dagger.clone(),
            found: s.start().clone(),
        });
    }
    if s.kind() != ScheduleKind::Swap {
        return Err(ProjectionError::NotSwapSchedule);
    }
    let cages = inst.cages();
    let mut state = TokenState::new(inst);
    let mut resolved = Vec::with_capacity(s.len());
    for (index, &m) in s.moves().iter().enumerate() {
        let Move::Swap(m) = m else {
            return Err(ProjectionError::NotSwapSchedule);
        };
        let before = rev_count(&state.values);
        let swapped = state.apply(m);
        let delta = rev_count(&state.values) as i64 - before as i64;
        if delta != -2 {
            return Err(ProjectionError::NotMinusTwo { index, delta });
        }
        let cage = match (swapped[0].as_slice(), swapped[1].as_slice()) {
            (&[x], &[y]) => cages.iter().find(|c| {
                let (lt, rt) = cage_tokens(inst, c);
                (x, y) == (lt, rt) || (x, y) == (rt, lt)
            }),
            _ => None,
        };
        let Some(cage) = cage else {
            return Err(ProjectionError::NotCageLocal { index, swapped });
        };
        resolved.push(*cage);
    }

    let mut moves = Vec::with_capacity(resolved.len());
    match descend(&inst.source, &resolved, 0, &mut moves) {
        Ok(()) => Ok(Schedule::new(inst.source.clone(), ScheduleKind::Block, moves).expect("projected moves replay")),
        Err((depth, state)) => {
            let cage = resolved[depth];
            Err(ProjectionError::NoPerfectBlockMove {
                index: depth,
                boundary: cage.boundary,
                left: cage.left,
                right: cage.right,
                state,
            })
        }
    }
}

fn descent_pairs(p: &Permutation) -> Vec<(u32, u32)> {
    p.as_slice()
        .windows(2)
        .filter(|w| w[0] > w[1])
        .map(|w| (w[0], w[1]))
        .collect()
}

/// Depth-first choice of block moves; on failure returns the deepest index
/// reached and the source state there.
fn descend(
    state: &Permutation,
    cages: &[Cage],
    depth: usize,
    out: &mut Vec<Move>,
) -> Result<(), (usize, Permutation)> {
    let Some(cage) = cages.get(depth) else {
        return Ok(());
    };
    let pairs = descent_pairs(state);
    let target = (cage.left, cage.right);
    if !pairs.contains(&target) {
        return Err((depth, state.clone()));
    }
    let wanted: Vec<(u32, u32)> = pairs.iter().copied().filter(|&d| d != target).collect();
    let mut deepest = (depth, state.clone());
    for m in enumerate_block_moves(state) {
        let child = apply_block_move(state, m).expect("enumerated moves are valid");
        if descent_pairs(&child) != wanted {
            continue;
        }
        out.push(Move::Block(m));
        match descend(&child, cages, depth + 1, out) {
            Ok(()) => return Ok(()),
            Err(fail) => {
                if fail.0 > deepest.0 {
                    deepest = fail;
                }
            }
        }
        out.pop();
    }
    Err(deepest)
}
