//! Sorting permutations by strip swaps and block moves.
//!
//! * [`permutation`]: one-line permutations, strips, descents and the two
//!   strip-swap lower bounds.
//! * [`moves`]: strip swaps, block moves and replayable [`moves::Schedule`]s.
//! * [`solvers`]: exact distances (iterative deepening and breadth-first
//!   oracles), the perfect/exact schedule predicates and a greedy bound.
//! * [`reduction`]: the cage/hinge construction from a permutation to a
//!   strip-swap instance, its verifier and the schedule projection back.
//! * [`harness`]: exhaustive and sampled sweeps that check the bounds and the
//!   claimed equivalence, with CSV/JSON reports.
//! * [`render`]: ASCII strip boxes and SVG gadget diagrams.

pub mod harness;
pub mod moves;
pub mod permutation;
pub mod reduction;
pub mod render;
pub mod solvers;

pub use moves::{BlockMove, Move, Schedule, ScheduleKind, StripSwap};
pub use permutation::{parse_permutation, ParseError, Permutation};
