use serde::Serialize;

use crate::moves::{Move, Schedule, ScheduleKind, StripSwap};
use crate::permutation::{lower_bound_rev, lower_bound_strips, Permutation};
use crate::reduction::{build_dagger, project_schedule, verify_instance, GadgetInstance};
use crate::solvers::{
    bs_exact, has_exact_swap_schedule, rev_deltas, search_at_bound, ssd_bfs_oracle, ssd_exact, Metric, SearchLimits,
};

const YES_SOURCE: [u32; 4] = [4, 1, 3, 2];
const NO_SOURCE: [u32; 8] = [7, 2, 6, 5, 8, 3, 1, 4];
const RUNNING_START: [u32; 9] = [2, 5, 6, 3, 7, 8, 9, 4, 1];
/// Swaps allowed when testing whether `π_N†` needs more than `R` of them.
const NO_BUDGET: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct YesInstanceReport {
    pub source: Permutation,
    #[serde(rename = "R")]
    pub r: usize,
    pub pi_dagger: Permutation,
    pub exact_schedule: Option<Schedule>,
    pub swap_deltas: Vec<i64>,
    pub projected: Option<Schedule>,
    pub projected_deltas: Vec<i64>,
    pub projection_error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoInstanceReport {
    pub source: Permutation,
    #[serde(rename = "R")]
    pub r: usize,
    pub source_bs: usize,
    pub structural_checks_passed: bool,
    pub budget: usize,
    /// Strip-swap schedule on `π†` of at most `budget` moves, if any.
    pub within_budget: Option<Schedule>,
    pub witness_deltas: Vec<i64>,
    pub nodes: u64,
    /// Whether every strip-swap schedule of `π†` needs more than `budget` moves.
    pub claim_holds: bool,
    pub verdict: String,
    pub projected: Option<Schedule>,
    pub projection_error: Option<String>,
    /// Replayable bundle: the instance the witness runs on.
    pub instance: GadgetInstance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunningExampleReport {
    pub schedule: Schedule,
    pub strip_counts: Vec<usize>,
    pub reaches_identity: bool,
    pub rev: usize,
    pub strips: usize,
    pub lb_rev: usize,
    pub lb_strips: usize,
    pub ssd_bfs: usize,
    pub ssd_ida: usize,
    /// Answer to "can it be sorted in fewer than three swaps?".
    pub fewer_than_three: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkedExamplesReport {
    pub yes_instance: YesInstanceReport,
    pub no_instance: NoInstanceReport,
    pub running_example: RunningExampleReport,
}

/// The three-swap schedule `[5 6]<->[3]`, `[5 6 7 8 9]<->[4]`,
/// `[2 .. 9]<->[1]` on `2 5 6 3 7 8 9 4 1`.
pub fn running_example_schedule() -> Schedule {
    let start = Permutation::new(RUNNING_START.to_vec()).expect("constant is a permutation");
    let moves = [(1, 2), (1, 2), (0, 1)]
        .into_iter()
        .map(|(a, b)| Move::Swap(StripSwap::new(a, b)))
        .collect();
    Schedule::new(start, ScheduleKind::Swap, moves).expect("constant schedule replays")
}

fn yes_instance() -> YesInstanceReport {
    let source = Permutation::new(YES_SOURCE.to_vec()).expect("constant is a permutation");
    let inst = build_dagger(&source);
    let verdict = has_exact_swap_schedule(&inst.pi_dagger).expect("no limits set");
    let exact = verdict.witness().cloned();
    let swap_deltas = exact.as_ref().map(rev_deltas).unwrap_or_default();
    let (projected, projection_error) = match exact.as_ref().map(|w| project_schedule(&inst, w)) {
        Some(Ok(b)) => (Some(b), None),
        Some(Err(e)) => (None, Some(e.to_string())),
        None => (None, None),
    };
    let projected_deltas = projected.as_ref().map(rev_deltas).unwrap_or_default();
    let passed = exact.as_ref().is_some_and(|w| w.len() == 2)
        && swap_deltas.iter().all(|&d| d == -2)
        && projected.as_ref().is_some_and(|b| b.len() == 2 && b.finish().is_identity())
        && projected_deltas.iter().all(|&d| d == -1);
    YesInstanceReport {
        r: inst.r,
        pi_dagger: inst.pi_dagger.clone(),
        source,
        exact_schedule: exact,
        swap_deltas,
        projected,
        projected_deltas,
        projection_error,
        passed,
    }
}

fn no_instance() -> NoInstanceReport {
    let source = Permutation::new(NO_SOURCE.to_vec()).expect("constant is a permutation");
    let inst = build_dagger(&source);
    let source_bs = bs_exact(&source, None).expect("no limits set").distance;
    let (within_budget, nodes) =
        search_at_bound(Metric::Swap, &inst.pi_dagger, NO_BUDGET, SearchLimits::default()).expect("no limits set");
    let witness_deltas = within_budget.as_ref().map(rev_deltas).unwrap_or_default();
    let claim_holds = within_budget.is_none();
    let verdict = match &within_budget {
        None => format!("confirmed: no strip-swap schedule of length <= {NO_BUDGET} sorts the instance"),
        Some(w) => format!(
            "claim does not hold: a {}-swap schedule sorts the instance (rev changes {:?})",
            w.len(),
            witness_deltas
        ),
    };
    let (projected, projection_error) = match within_budget.as_ref().map(|w| project_schedule(&inst, w)) {
        Some(Ok(b)) => (Some(b), None),
        Some(Err(e)) => (None, Some(e.to_string())),
        None => (None, None),
    };
    NoInstanceReport {
        r: inst.r,
        source,
        source_bs,
        structural_checks_passed: verify_instance(&inst).passed(),
        budget: NO_BUDGET,
        within_budget,
        witness_deltas,
        nodes,
        claim_holds,
        verdict,
        projected,
        projection_error,
        instance: inst,
    }
}

fn running_example() -> RunningExampleReport {
    let schedule = running_example_schedule();
    let start = schedule.start().clone();
    let strip_counts = schedule
        .trace()
        .expect("constant schedule replays")
        .iter()
        .map(|q| q.strips().count())
        .collect();
    let ssd_bfs = ssd_bfs_oracle(&start, 10).expect("within the oracle guard").distance;
    let ssd_ida = ssd_exact(&start, None).expect("no limits set").distance;
    RunningExampleReport {
        reaches_identity: schedule.finish().is_identity(),
        strip_counts,
        rev: start.rev().rev,
        strips: start.strips().count(),
        lb_rev: lower_bound_rev(&start),
        lb_strips: lower_bound_strips(&start),
        ssd_bfs,
        ssd_ida,
        fewer_than_three: ssd_bfs < 3,
        schedule,
    }
}

/// The YES instance `4 1 3 2`, the NO instance `7 2 6 5 8 3 1 4` searched
/// with a budget of four swaps, and the three-swap running example.
pub fn reproduce_worked_examples() -> WorkedExamplesReport {
    WorkedExamplesReport {
        yes_instance: yes_instance(),
        no_instance: no_instance(),
        running_example: running_example(),
    }
}
