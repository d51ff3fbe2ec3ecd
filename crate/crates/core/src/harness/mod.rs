//! Sweeps over `S_n` that check the lower bounds and the
//! perfect-block / exact-swap equivalence, plus the worked examples.
//!
//! Rows are computed in parallel and collected in enumeration order, so a
//! report depends only on its inputs (and, outside deterministic mode, on
//! which rows hit the wall-clock limit).

mod bounds;
mod sweep;
mod worked;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::permutation::Permutation;

pub use bounds::{check_bounds_exhaustive, BoundViolation, BoundsReport};
pub use sweep::{
    sweep_equivalence, CounterexampleBundle, LemmaTally, Outcome, RecheckError, SweepConfig, SweepError, SweepReport,
    SweepRow, SweepSummary, Verdict, CSV_HEADER,
};
pub use worked::{
    reproduce_worked_examples, running_example_schedule, NoInstanceReport, RunningExampleReport, WorkedExamplesReport,
    YesInstanceReport,
};

/// Largest `n` swept exhaustively.
pub const EXHAUSTIVE_MAX_N: usize = 6;
/// Largest `n` accepted at all (sampled).
pub const SAMPLED_MAX_N: usize = 8;

/// All of `S_n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    (1..=n as u32)
        .permutations(n)
        .map(|v| Permutation::new(v).expect("itertools yields permutations"))
        .collect()
}

/// `count` uniform samples of `S_n` (with replacement) from a ChaCha8 stream.
pub fn sample_permutations(n: usize, count: usize, seed: u64) -> Vec<Permutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut v: Vec<u32> = (1..=n as u32).collect();
            v.shuffle(&mut rng);
            Permutation::new(v).expect("a shuffle is a permutation")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_lexicographic() {
        let all = all_permutations(3);
        let text: Vec<String> = all.iter().map(|p| p.to_string()).collect();
        assert_eq!(text, ["1 2 3", "1 3 2", "2 1 3", "2 3 1", "3 1 2", "3 2 1"]);
        assert_eq!(all_permutations(1).len(), 1);
    }

    #[test]
    fn sampling_is_seeded() {
        assert_eq!(sample_permutations(7, 20, 9), sample_permutations(7, 20, 9));
        assert_ne!(sample_permutations(7, 20, 9), sample_permutations(7, 20, 10));
        assert_eq!(sample_permutations(7, 20, 9).len(), 20);
    }
}
