use rayon::prelude::*;
use serde::Serialize;

use super::{all_permutations, SweepError, EXHAUSTIVE_MAX_N};
use crate::moves::{apply_block_move, apply_strip_swap, enumerate_block_moves, enumerate_strip_swaps};
use crate::permutation::{lower_bound_rev, lower_bound_strips, Permutation};
use crate::solvers::{bs_exact, ssd_exact};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub perm: Permutation,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub permutations: usize,
    pub swap_moves_checked: usize,
    pub block_moves_checked: usize,
    pub violations: Vec<BoundViolation>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct PermCheck {
    swaps: usize,
    blocks: usize,
    violations: Vec<BoundViolation>,
}

fn check_one(p: &Permutation) -> PermCheck {
    let mut violations = Vec::new();
    let mut fail = |what: String| {
        violations.push(BoundViolation { perm: p.clone(), what });
    };
    let rev = p.rev().rev as i64;
    let strips = p.strips().count() as i64;

    match ssd_exact(p, None) {
        Ok(r) => {
            let (lr, ls) = (lower_bound_rev(p), lower_bound_strips(p));
            if r.distance < lr {
                fail(format!("ssd {} < ceil(rev/2) {lr}", r.distance));
            }
            if r.distance < ls {
                fail(format!("ssd {} < ceil((strips-1)/4) {ls}", r.distance));
            }
        }
        Err(e) => fail(format!("ssd search failed: {e}")),
    }
    match bs_exact(p, None) {
        Ok(r) if (r.distance as i64) < rev => fail(format!("bs {} < rev {rev}", r.distance)),
        Ok(_) => {}
        Err(e) => fail(format!("bs search failed: {e}")),
    }

    let swaps = enumerate_strip_swaps(p);
    for &m in &swaps {
        let q = apply_strip_swap(p, m).expect("enumerated moves are valid");
        let d_rev = q.rev().rev as i64 - rev;
        let d_strips = q.strips().count() as i64 - strips;
        if d_rev < -2 {
            fail(format!("swap {m:?} changes rev by {d_rev}"));
        }
        if d_strips < -4 {
            fail(format!("swap {m:?} changes strips by {d_strips}"));
        }
    }
    let blocks = enumerate_block_moves(p);
    for &m in &blocks {
        let q = apply_block_move(p, m).expect("enumerated moves are valid");
        let d_rev = q.rev().rev as i64 - rev;
        if d_rev < -1 {
            fail(format!("block move {m:?} changes rev by {d_rev}"));
        }
    }
    PermCheck {
        swaps: swaps.len(),
        blocks: blocks.len(),
        violations,
    }
}

/// Checks `ssd >= ceil(rev/2)`, `ssd >= ceil((strips-1)/4)` and `bs >= rev`
/// on all of `S_n`, and the per-move limits (`Δrev >= -2`, `Δstrips >= -4`
/// per swap, `Δrev >= -1` per block move) on every move from every state.
pub fn check_bounds_exhaustive(n: usize) -> Result<BoundsReport, SweepError> {
    if n == 0 {
        return Err(SweepError::Empty);
    }
    if n > EXHAUSTIVE_MAX_N {
        return Err(SweepError::TooLarge {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }
    let perms = all_permutations(n);
    let checks: Vec<PermCheck> = perms.par_iter().map(check_one).collect();
    let mut report = BoundsReport {
        n,
        permutations: perms.len(),
        swap_moves_checked: 0,
        block_moves_checked: 0,
        violations: Vec::new(),
    };
    for c in checks {
        report.swap_moves_checked += c.swaps;
        report.block_moves_checked += c.blocks;
        report.violations.extend(c.violations);
    }
    Ok(report)
}
