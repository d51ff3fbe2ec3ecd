//! Strip swaps, block moves and replayable schedules.
//!
//! Moves address strips by their index in the *current* decomposition
//! (0-based in memory, 1-based in JSON). A strip swap exchanges two strips in
//! place and keeps any material between them in order; a block move lifts one
//! strip out and reinserts it into a gap of the remaining sequence.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::{Permutation, Strip, StripDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("strip index {index} out of range ({count} strips)")]
    StripOutOfRange { index: usize, count: usize },
    #[error("strip swap needs two distinct strips, got {0} twice")]
    SameStrip(usize),
    #[error("gap {gap} out of range (0..={max})")]
    GapOutOfRange { gap: usize, max: usize },
    #[error("block move of strip {strip} to gap {gap} leaves the permutation unchanged")]
    NoOp { strip: usize, gap: usize },
    #[error("move kind {found} does not match schedule kind {expected}")]
    WrongKind {
        expected: ScheduleKind,
        found: ScheduleKind,
    },
}

/// Exchange of two distinct strips, `left < right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StripSwap {
    pub left: usize,
    pub right: usize,
}

impl StripSwap {
    /// Normalises the pair so that `left < right`.
    pub fn new(a: usize, b: usize) -> Self {
        Self {
            left: a.min(b),
            right: a.max(b),
        }
    }
}

/// Removal of strip `strip` and reinsertion after `gap` elements of the
/// remaining sequence (`gap == 0` is the front).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockMove {
    pub strip: usize,
    pub gap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Swap(StripSwap),
    Block(BlockMove),
}

impl Move {
    pub fn kind(&self) -> ScheduleKind {
        match self {
            Move::Swap(_) => ScheduleKind::Swap,
            Move::Block(_) => ScheduleKind::Block,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Swap,
    Block,
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleKind::Swap => "swap",
            ScheduleKind::Block => "block",
        })
    }
}

pub(crate) fn swap_into(elements: &[u32], strips: &[Strip], m: StripSwap, out: &mut Vec<u32>) {
    let a = strips[m.left];
    let b = strips[m.right];
    out.clear();
    out.extend_from_slice(&elements[..a.start]);
    out.extend_from_slice(&elements[b.range()]);
    out.extend_from_slice(&elements[a.end()..b.start]);
    out.extend_from_slice(&elements[a.range()]);
    out.extend_from_slice(&elements[b.end()..]);
}

pub(crate) fn block_into(elements: &[u32], strips: &[Strip], m: BlockMove, out: &mut Vec<u32>) {
    let s = strips[m.strip];
    out.clear();
    // `gap` counts elements of the sequence with the strip removed.
    if m.gap <= s.start {
        out.extend_from_slice(&elements[..m.gap]);
        out.extend_from_slice(&elements[s.range()]);
        out.extend_from_slice(&elements[m.gap..s.start]);
        out.extend_from_slice(&elements[s.end()..]);
    } else {
        let cut = m.gap + s.len;
        out.extend_from_slice(&elements[..s.start]);
        out.extend_from_slice(&elements[s.end()..cut]);
        out.extend_from_slice(&elements[s.range()]);
        out.extend_from_slice(&elements[cut..]);
    }
}

fn check_swap(strips: &StripDecomposition, m: StripSwap) -> Result<(), MoveError> {
    let count = strips.count();
    for index in [m.left, m.right] {
        if index >= count {
            return Err(MoveError::StripOutOfRange { index, count });
        }
    }
    if m.left == m.right {
        return Err(MoveError::SameStrip(m.left));
    }
    Ok(())
}

fn check_block(n: usize, strips: &StripDecomposition, m: BlockMove) -> Result<(), MoveError> {
    let count = strips.count();
    let s = strips.get(m.strip).ok_or(MoveError::StripOutOfRange {
        index: m.strip,
        count,
    })?;
    let max = n - s.len;
    if m.gap > max {
        return Err(MoveError::GapOutOfRange { gap: m.gap, max });
    }
    if m.gap == s.start {
        return Err(MoveError::NoOp {
            strip: m.strip,
            gap: m.gap,
        });
    }
    Ok(())
}

pub fn apply_strip_swap(p: &Permutation, m: StripSwap) -> Result<Permutation, MoveError> {
    let strips = p.strips();
    let m = StripSwap::new(m.left, m.right);
    check_swap(&strips, m)?;
    let mut out = Vec::with_capacity(p.len());
    swap_into(p.as_slice(), strips.strips(), m, &mut out);
    Ok(Permutation::from_vec_unchecked(out))
}

pub fn apply_block_move(p: &Permutation, m: BlockMove) -> Result<Permutation, MoveError> {
    let strips = p.strips();
    check_block(p.len(), &strips, m)?;
    let mut out = Vec::with_capacity(p.len());
    block_into(p.as_slice(), strips.strips(), m, &mut out);
    Ok(Permutation::from_vec_unchecked(out))
}

pub fn apply_move(p: &Permutation, m: Move) -> Result<Permutation, MoveError> {
    match m {
        Move::Swap(s) => apply_strip_swap(p, s),
        Move::Block(b) => apply_block_move(p, b),
    }
}

/// All unordered strip pairs, lexicographic by `(left, right)`.
pub fn enumerate_strip_swaps(p: &Permutation) -> Vec<StripSwap> {
    swaps_for_count(p.strips().count()).collect()
}

pub(crate) fn swaps_for_count(count: usize) -> impl Iterator<Item = StripSwap> {
    (0..count).flat_map(move |left| (left + 1..count).map(move |right| StripSwap { left, right }))
}

/// All `(strip, gap)` pairs except the no-op gap, lexicographic.
pub fn enumerate_block_moves(p: &Permutation) -> Vec<BlockMove> {
    let strips = p.strips();
    block_moves_for(p.len(), strips.strips()).collect()
}

pub(crate) fn block_moves_for(n: usize, strips: &[Strip]) -> impl Iterator<Item = BlockMove> + '_ {
    strips.iter().enumerate().flat_map(move |(idx, s)| {
        (0..=n - s.len)
            .filter(move |&gap| gap != s.start)
            .map(move |gap| BlockMove { strip: idx, gap })
    })
}

/// A move that failed during replay, with its 0-based index in the schedule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {} of the schedule is invalid: {source}", .index + 1)]
pub struct ReplayError {
    pub index: usize,
    #[source]
    pub source: ReplayFault,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayFault {
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error("recorded first values {recorded:?} disagree with the strips being moved {actual:?}")]
    FirstValues { recorded: Vec<u32>, actual: Vec<u32> },
    #[error("strip index 0 is not valid in the 1-based interchange format")]
    ZeroIndex,
    #[error("start is not a permutation: {0}")]
    Start(crate::permutation::ParseError),
}

/// A homogeneous, validly replaying list of moves from a declared start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    start: Permutation,
    kind: ScheduleKind,
    moves: Vec<Move>,
}

impl Schedule {
    /// Validates that every move has the schedule's kind and replays.
    pub fn new(start: Permutation, kind: ScheduleKind, moves: Vec<Move>) -> Result<Self, ReplayError> {
        let schedule = Self { start, kind, moves };
        schedule.trace()?;
        Ok(schedule)
    }

    pub fn empty(start: Permutation, kind: ScheduleKind) -> Self {
        Self {
            start,
            kind,
            moves: Vec::new(),
        }
    }

    pub fn start(&self) -> &Permutation {
        &self.start
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every intermediate permutation, starting with `start`.
    pub fn trace(&self) -> Result<Vec<Permutation>, ReplayError> {
        let mut states = Vec::with_capacity(self.moves.len() + 1);
        states.push(self.start.clone());
        for (index, &m) in self.moves.iter().enumerate() {
            if m.kind() != self.kind {
                return Err(ReplayError {
                    index,
                    source: MoveError::WrongKind {
                        expected: self.kind,
                        found: m.kind(),
                    }
                    .into(),
                });
            }
            let next = apply_move(states.last().unwrap(), m).map_err(|e| ReplayError {
                index,
                source: e.into(),
            })?;
            states.push(next);
        }
        Ok(states)
    }

    pub fn finish(&self) -> Permutation {
        // Construction guarantees a valid replay.
        self.trace()
            .expect("schedule replays by construction")
            .pop()
            .unwrap()
    }

    pub fn to_record(&self) -> ScheduleRecord {
        let trace = self.trace().expect("schedule replays by construction");
        let moves = self
            .moves
            .iter()
            .zip(&trace)
            .map(|(&m, state)| MoveRecord::describe(state, m))
            .collect();
        ScheduleRecord {
            start: self.start.as_slice().to_vec(),
            kind: self.kind,
            moves,
        }
    }

    pub fn from_record(record: ScheduleRecord) -> Result<Self, ReplayError> {
        let start = Permutation::try_from(record.start.iter().map(|&v| u64::from(v)).collect::<Vec<_>>())
            .map_err(|e| ReplayError {
                index: 0,
                source: ReplayFault::Start(e),
            })?;
        let mut state = start.clone();
        let mut moves = Vec::with_capacity(record.moves.len());
        for (index, rec) in record.moves.iter().enumerate() {
            let fail = |source: ReplayFault| ReplayError { index, source };
            let m = rec.to_move().map_err(fail)?;
            if m.kind() != record.kind {
                return Err(fail(
                    MoveError::WrongKind {
                        expected: record.kind,
                        found: m.kind(),
                    }
                    .into(),
                ));
            }
            let strips = state.strips();
            let indices: Vec<usize> = match m {
                Move::Swap(s) => vec![s.left, s.right],
                Move::Block(b) => vec![b.strip],
            };
            let actual: Vec<u32> = indices
                .iter()
                .map(|&i| {
                    strips.get(i).map(|s| s.first).ok_or(MoveError::StripOutOfRange {
                        index: i,
                        count: strips.count(),
                    })
                })
                .collect::<Result<_, _>>()
                .map_err(|e| fail(e.into()))?;
            let recorded = rec.first_values();
            if recorded != actual {
                return Err(fail(ReplayFault::FirstValues { recorded, actual }));
            }
            state = apply_move(&state, m).map_err(|e| fail(e.into()))?;
            moves.push(m);
        }
        Ok(Self {
            start,
            kind: record.kind,
            moves,
        })
    }
}

impl Serialize for Schedule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let record = ScheduleRecord::deserialize(deserializer)?;
        Schedule::from_record(record).map_err(serde::de::Error::custom)
    }
}

/// Wire form of a [`Schedule`]; strip indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub start: Vec<u32>,
    pub kind: ScheduleKind,
    pub moves: Vec<MoveRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MoveRecord {
    Swap {
        strips: [usize; 2],
        first_values: [u32; 2],
    },
    Block {
        strip: usize,
        first_value: u32,
        gap: usize,
    },
}

impl MoveRecord {
    fn describe(state: &Permutation, m: Move) -> Self {
        let strips = state.strips();
        let first = |i: usize| strips.strips()[i].first;
        match m {
            Move::Swap(s) => MoveRecord::Swap {
                strips: [s.left + 1, s.right + 1],
                first_values: [first(s.left), first(s.right)],
            },
            Move::Block(b) => MoveRecord::Block {
                strip: b.strip + 1,
                first_value: first(b.strip),
                gap: b.gap,
            },
        }
    }

    fn to_move(&self) -> Result<Move, ReplayFault> {
        match *self {
            MoveRecord::Swap { strips: [a, b], .. } => {
                if a == 0 || b == 0 {
                    return Err(ReplayFault::ZeroIndex);
                }
                Ok(Move::Swap(StripSwap::new(a - 1, b - 1)))
            }
            MoveRecord::Block { strip, gap, .. } => {
                if strip == 0 {
                    return Err(ReplayFault::ZeroIndex);
                }
                Ok(Move::Block(BlockMove {
                    strip: strip - 1,
                    gap,
                }))
            }
        }
    }

    fn first_values(&self) -> Vec<u32> {
        match *self {
            MoveRecord::Swap {
                strips: [a, b],
                first_values: [fa, fb],
            } => {
                if a <= b {
                    vec![fa, fb]
                } else {
                    vec![fb, fa]
                }
            }
            MoveRecord::Block { first_value, .. } => vec![first_value],
        }
    }
}

/// Replays `moves` from `p`, reporting the first invalid move.
pub fn apply_schedule(p: &Permutation, moves: &[Move]) -> Result<Permutation, ReplayError> {
    let mut state = p.clone();
    for (index, &m) in moves.iter().enumerate() {
        state = apply_move(&state, m).map_err(|e| ReplayError {
            index,
            source: e.into(),
        })?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::parse_permutation;

    fn perm(text: &str) -> Permutation {
        parse_permutation(text).unwrap()
    }

    fn swap(a: usize, b: usize) -> Move {
        Move::Swap(StripSwap::new(a, b))
    }

    #[test]
    fn running_example_swaps() {
        let p = perm("2 5 6 3 7 8 9 4 1");
        let q = apply_strip_swap(&p, StripSwap::new(1, 2)).unwrap();
        assert_eq!(q, perm("2 3 5 6 7 8 9 4 1"));
        assert_eq!(q.strips().count(), 4);
        let r = apply_strip_swap(&q, StripSwap::new(1, 2)).unwrap();
        assert_eq!(r, perm("2 3 4 5 6 7 8 9 1"));
        assert_eq!(r.strips().count(), 2);
    }

    #[test]
    fn non_adjacent_swap_keeps_middle() {
        let p = perm("3 2 1");
        assert_eq!(apply_strip_swap(&p, StripSwap::new(0, 2)).unwrap(), perm("1 2 3"));
        let p = perm("4 2 5 3 1");
        assert_eq!(apply_strip_swap(&p, StripSwap::new(0, 4)).unwrap(), perm("1 2 5 3 4"));
    }

    #[test]
    fn swap_errors() {
        let p = perm("4 1 3 2");
        assert_eq!(
            apply_strip_swap(&p, StripSwap::new(0, 4)),
            Err(MoveError::StripOutOfRange { index: 4, count: 4 })
        );
        assert_eq!(
            apply_strip_swap(&p, StripSwap { left: 2, right: 2 }),
            Err(MoveError::SameStrip(2))
        );
    }

    #[test]
    fn block_moves() {
        let p = perm("4 1 3 2");
        assert_eq!(
            apply_block_move(&p, BlockMove { strip: 0, gap: 3 }).unwrap(),
            perm("1 3 2 4")
        );
        let q = perm("1 3 2 4");
        assert_eq!(
            apply_block_move(&q, BlockMove { strip: 2, gap: 1 }).unwrap(),
            perm("1 2 3 4")
        );
        assert_eq!(
            apply_block_move(&Permutation::identity(5), BlockMove { strip: 0, gap: 0 }),
            Err(MoveError::NoOp { strip: 0, gap: 0 })
        );
        assert_eq!(
            apply_block_move(&p, BlockMove { strip: 1, gap: 1 }),
            Err(MoveError::NoOp { strip: 1, gap: 1 })
        );
        assert_eq!(
            apply_block_move(&p, BlockMove { strip: 1, gap: 4 }),
            Err(MoveError::GapOutOfRange { gap: 4, max: 3 })
        );
    }

    #[test]
    fn block_move_with_long_strip() {
        // strips [3 4] [1 2] [5]: moving [3 4] after 1 2.
        let p = perm("3 4 1 2 5");
        assert_eq!(
            apply_block_move(&p, BlockMove { strip: 0, gap: 2 }).unwrap(),
            perm("1 2 3 4 5")
        );
        assert_eq!(
            apply_block_move(&p, BlockMove { strip: 2, gap: 0 }).unwrap(),
            perm("5 3 4 1 2")
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_strip_swaps(&perm("4 1 3 2")).len(), 6);
        assert!(enumerate_strip_swaps(&Permutation::identity(6)).is_empty());
        assert_eq!(enumerate_strip_swaps(&perm("2 5 6 3 7 8 9 4 1")).len(), 15);

        // Brute count over S_4 singleton strips: 4 strips x 3 non-trivial gaps.
        assert_eq!(enumerate_block_moves(&perm("4 1 3 2")).len(), 12);
        assert!(enumerate_block_moves(&Permutation::identity(4)).is_empty());
        assert!(enumerate_block_moves(&perm("1 3 2 4")).contains(&BlockMove { strip: 2, gap: 1 }));
        assert_eq!(enumerate_block_moves(&perm("2 5 6 3 7 8 9 4 1")).len(), 45);
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let swaps = enumerate_strip_swaps(&perm("4 1 3 2"));
        let mut sorted = swaps.clone();
        sorted.sort();
        assert_eq!(swaps, sorted);
        let blocks = enumerate_block_moves(&perm("4 1 3 2"));
        let mut sorted = blocks.clone();
        sorted.sort();
        assert_eq!(blocks, sorted);
    }

    #[test]
    fn schedule_replays_running_example() {
        let p = perm("2 5 6 3 7 8 9 4 1");
        let s = Schedule::new(p.clone(), ScheduleKind::Swap, vec![swap(1, 2), swap(1, 2), swap(0, 1)]).unwrap();
        let counts: Vec<usize> = s.trace().unwrap().iter().map(|q| q.strips().count()).collect();
        assert_eq!(counts, vec![6, 4, 2, 1]);
        assert!(s.finish().is_identity());
        assert_eq!(apply_schedule(&p, &[]).unwrap(), p);
    }

    #[test]
    fn schedule_on_4132() {
        // [4]<->[2] then [2]<->[1].
        let p = perm("4 1 3 2");
        let s = Schedule::new(p, ScheduleKind::Swap, vec![swap(0, 3), swap(0, 1)]).unwrap();
        let trace = s.trace().unwrap();
        assert_eq!(trace[1], perm("2 1 3 4"));
        assert!(trace[2].is_identity());
    }

    #[test]
    fn replay_reports_failing_index() {
        let p = perm("4 1 3 2");
        let err = Schedule::new(p.clone(), ScheduleKind::Swap, vec![swap(0, 1), swap(0, 9)]).unwrap_err();
        assert_eq!(err.index, 1);
        let err = Schedule::new(p, ScheduleKind::Swap, vec![Move::Block(BlockMove { strip: 0, gap: 3 })]).unwrap_err();
        assert!(matches!(err.source, ReplayFault::Move(MoveError::WrongKind { .. })));
    }

    #[test]
    fn schedule_json_shape() {
        let p = perm("4 1 3 2");
        let s = Schedule::new(p, ScheduleKind::Block, vec![Move::Block(BlockMove { strip: 0, gap: 3 })]).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "start": [4, 1, 3, 2],
                "kind": "block",
                "moves": [{"type": "block", "strip": 1, "first_value": 4, "gap": 3}]
            })
        );
        let back: Schedule = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn schedule_json_checks_first_values() {
        let bad = serde_json::json!({
            "start": [4, 1, 3, 2],
            "kind": "swap",
            "moves": [{"type": "swap", "strips": [1, 2], "first_values": [4, 3]}]
        });
        let err = Schedule::from_record(serde_json::from_value(bad).unwrap()).unwrap_err();
        assert!(matches!(err.source, ReplayFault::FirstValues { .. }));
        let zero = serde_json::json!({
            "start": [2, 1],
            "kind": "swap",
            "moves": [{"type": "swap", "strips": [0, 1], "first_values": [2, 1]}]
        });
        assert!(serde_json::from_value::<Schedule>(zero).is_err());
    }
}
