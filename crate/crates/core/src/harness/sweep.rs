use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{all_permutations, sample_permutations, EXHAUSTIVE_MAX_N, SAMPLED_MAX_N};
use crate::moves::Schedule;
use crate::permutation::{lower_bound_rev, lower_bound_strips, Permutation};
use crate::reduction::{build_dagger_with, forward_schedule, project_schedule, verify_instance, GadgetInstance, HingeLayout};
use crate::solvers::{
    bs_exact_with, has_exact_swap_schedule, has_exact_swap_schedule_with, has_perfect_block_schedule,
    has_perfect_block_schedule_with, rev_deltas, ssd_exact_with, ExactSwapVerdict, SearchConfig, SearchError,
    SearchLimits,
};

pub const CSV_HEADER: [&str; 12] = [
    "perm",
    "rev",
    "strips",
    "bs",
    "ssd",
    "lb_rev",
    "lb_strips",
    "perfect_bs",
    "exact_ssd_dagger",
    "verdict",
    "nodes",
    "ms",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    /// Number of uniform samples; `None` sweeps all of `S_n`.
    pub sample: Option<usize>,
    pub seed: u64,
    /// Node caps instead of wall-clock limits, and no timings in the output.
    pub deterministic: bool,
    #[serde(skip)]
    pub time_limit: Duration,
    pub node_limit: u64,
    pub hinge_layout: HingeLayout,
}

impl SweepConfig {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            sample: None,
            seed: 0,
            deterministic: false,
            time_limit: Duration::from_secs(10),
            node_limit: 50_000_000,
            hinge_layout: HingeLayout::Figure,
        }
    }

    fn limits(&self, started: Instant) -> SearchLimits {
        if self.deterministic {
            SearchLimits {
                max_nodes: Some(self.node_limit),
                time_limit: None,
            }
        } else {
            SearchLimits {
                max_nodes: None,
                time_limit: Some(self.time_limit.saturating_sub(started.elapsed()).max(Duration::from_millis(1))),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("n must be at least 1")]
    Empty,
    #[error("n = {n} is above the sweep limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("n = {n} is too large to sweep exhaustively; pass a sample count")]
    SampleRequired { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Yes,
    No,
    /// A node or time limit was hit before the question was settled.
    Budget,
}

impl Outcome {
    fn of(holds: Result<bool, SearchError>) -> Self {
        match holds {
            Ok(true) => Outcome::Yes,
            Ok(false) => Outcome::No,
            Err(_) => Outcome::Budget,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Budget => "budget",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Agree,
    Counterexample,
    Budget,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Agree => "agree",
            Verdict::Counterexample => "counterexample",
            Verdict::Budget => "budget",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub perm: Permutation,
    pub rev: usize,
    pub strips: usize,
    /// `None` when the search hit its limit.
    pub bs: Option<usize>,
    pub ssd: Option<usize>,
    pub lb_rev: usize,
    pub lb_strips: usize,
    pub perfect_bs: Outcome,
    pub exact_ssd_dagger: Outcome,
    pub verdict: Verdict,
    pub nodes: u64,
    pub ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub checked: usize,
    pub failed: usize,
    /// `"<perm>: <reason>"` for each failure.
    pub failures: Vec<String>,
}

impl LemmaTally {
    fn record(&mut self, perm: &Permutation, result: Option<Result<(), String>>) {
        match result {
            None => {}
            Some(Ok(())) => self.checked += 1,
            Some(Err(reason)) => {
                self.checked += 1;
                self.failed += 1;
                self.failures.push(format!("{perm}: {reason}"));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<usize>,
    /// Only meaningful (and only recorded) for sampled sweeps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub deterministic: bool,
    pub hinge_layout: HingeLayout,
    pub rows: usize,
    pub agree: usize,
    pub counterexamples: usize,
    pub budget_exhausted: usize,
    pub perfect_bs: usize,
    pub exact_ssd_dagger: usize,
    /// Instances failing [`verify_instance`].
    pub structural_failures: Vec<String>,
    pub forward_lemma: LemmaTally,
    pub projection_lemma: LemmaTally,
    pub counterexample_perms: Vec<String>,
    pub nodes_total: u64,
    /// Omitted in deterministic mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

/// Everything needed to replay one disagreement between the two predicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleBundle {
    pub source: Permutation,
    pub rev: usize,
    pub bs: Option<usize>,
    pub perfect_bs: bool,
    pub exact_ssd_dagger: bool,
    pub instance: GadgetInstance,
    /// Exact strip-swap schedule on `π†`, when one was found.
    pub swap_witness: Option<Schedule>,
    /// Perfect block schedule on the source, when one was found.
    pub block_witness: Option<Schedule>,
    /// Why the swap witness did not project, if it did not.
    pub projection_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecheckError {
    #[error("stored instance differs from a fresh construction of the source")]
    InstanceMismatch,
    #[error("stored witness is invalid: {0}")]
    BadWitness(String),
    #[error("search limit hit while rechecking: {0}")]
    Search(#[from] SearchError),
    #[error("predicates now give perfect_bs = {perfect_bs}, exact_ssd_dagger = {exact_ssd_dagger}; the disagreement does not reproduce")]
    NotReproduced { perfect_bs: bool, exact_ssd_dagger: bool },
}

impl CounterexampleBundle {
    /// Rebuilds `π†`, checks the stored witnesses and re-runs both
    /// predicates, succeeding only if the recorded disagreement reappears.
    pub fn recheck(&self) -> Result<(), RecheckError> {
        if build_dagger_with(&self.source, self.instance.layout) != self.instance {
            return Err(RecheckError::InstanceMismatch);
        }
        let r = self.instance.r;
        if let Some(w) = &self.swap_witness {
            let ok = w.start() == &self.instance.pi_dagger
                && w.len() == r
                && w.finish().is_identity()
                && rev_deltas(w).iter().all(|&d| d == -2);
            if !ok {
                return Err(RecheckError::BadWitness("swap witness is not an exact schedule on the instance".into()));
            }
        }
        if let Some(w) = &self.block_witness {
            let ok = w.start() == &self.source && w.len() == r && w.finish().is_identity();
            if !ok {
                return Err(RecheckError::BadWitness("block witness is not a perfect schedule on the source".into()));
            }
        }
        let perfect_bs = has_perfect_block_schedule(&self.source)?.holds();
        let exact_ssd_dagger = has_exact_swap_schedule(&self.instance.pi_dagger)?.holds();
        if perfect_bs != self.perfect_bs || exact_ssd_dagger != self.exact_ssd_dagger || perfect_bs == exact_ssd_dagger {
            return Err(RecheckError::NotReproduced {
                perfect_bs,
                exact_ssd_dagger,
            });
        }
        Ok(())
    }

    pub fn file_name(&self) -> String {
        let joined: Vec<String> = self.source.as_slice().iter().map(u32::to_string).collect();
        format!("counterexample_{}.json", joined.join("-"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
    pub counterexamples: Vec<CounterexampleBundle>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    perm: String,
    rev: usize,
    strips: usize,
    bs: Option<usize>,
    ssd: Option<usize>,
    lb_rev: usize,
    lb_strips: usize,
    perfect_bs: &'a Outcome,
    exact_ssd_dagger: &'a Outcome,
    verdict: &'a Verdict,
    nodes: u64,
    ms: u64,
}

impl SweepReport {
    /// One line per row under [`CSV_HEADER`]; limits leave `bs`/`ssd` empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("writing to memory");
        for r in &self.rows {
            w.serialize(CsvRow {
                perm: r.perm.to_string(),
                rev: r.rev,
                strips: r.strips,
                bs: r.bs,
                ssd: r.ssd,
                lb_rev: r.lb_rev,
                lb_strips: r.lb_strips,
                perfect_bs: &r.perfect_bs,
                exact_ssd_dagger: &r.exact_ssd_dagger,
                verdict: &r.verdict,
                nodes: r.nodes,
                ms: r.ms,
            })
            .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes") + "\n"
    }

    /// Writes one JSON file per counterexample into `dir`.
    pub fn write_bundles(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.counterexamples
            .iter()
            .map(|b| {
                let path = dir.join(b.file_name());
                let json = serde_json::to_string_pretty(b).expect("bundle serializes");
                std::fs::write(&path, json + "\n")?;
                Ok(path)
            })
            .collect()
    }
}

struct RowResult {
    row: SweepRow,
    structural: Option<String>,
    forward: Option<Result<(), String>>,
    projection: Option<Result<(), String>>,
    bundle: Option<CounterexampleBundle>,
}

fn check_forward(inst: &GadgetInstance) -> Result<(), String> {
    let s = forward_schedule(inst).map_err(|e| e.to_string())?;
    if s.len() != inst.r {
        return Err(format!("{} cage swaps for R = {}", s.len(), inst.r));
    }
    if !s.finish().is_identity() {
        return Err(format!("cage swaps end at {}", s.finish()));
    }
    if let Some(d) = rev_deltas(&s).into_iter().find(|&d| d != -2) {
        return Err(format!("a cage swap changes rev by {d}"));
    }
    Ok(())
}

fn check_projection(inst: &GadgetInstance, witness: &Schedule) -> Result<(), String> {
    let b = project_schedule(inst, witness).map_err(|e| e.to_string())?;
    if b.len() != inst.r || !b.finish().is_identity() {
        return Err(format!("projected schedule of length {} ends at {}", b.len(), b.finish()));
    }
    if let Some(d) = rev_deltas(&b).into_iter().find(|&d| d != -1) {
        return Err(format!("a projected block move changes rev by {d}"));
    }
    Ok(())
}

fn compute_row(p: &Permutation, config: &SweepConfig) -> RowResult {
    let started = Instant::now();
    let rev = p.rev().rev;
    let mut nodes = 0u64;

    let search = SearchConfig {
        budget: None,
        limits: config.limits(started),
        transposition: false,
    };
    let bs = bs_exact_with(p, &search).ok().map(|r| {
        nodes += r.nodes_expanded;
        r.distance
    });
    let search = SearchConfig {
        limits: config.limits(started),
        ..search
    };
    let ssd = ssd_exact_with(p, &search).ok().map(|r| {
        nodes += r.nodes_expanded;
        r.distance
    });

    let perfect = has_perfect_block_schedule_with(p, config.limits(started));
    if let Ok(v) = &perfect {
        nodes += v.nodes;
    }
    let inst = build_dagger_with(p, config.hinge_layout);
    let report = verify_instance(&inst);
    let structural = (!report.passed()).then(|| {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        format!("{p}: {}", names.join(", "))
    });
    let exact = has_exact_swap_schedule_with(&inst.pi_dagger, config.limits(started));
    nodes += exact.as_ref().map_or(0, ExactSwapVerdict::nodes);

    let perfect_bs = Outcome::of(perfect.as_ref().map(|v| v.holds()).map_err(Clone::clone));
    let exact_ssd_dagger = Outcome::of(exact.as_ref().map(|v| v.holds()).map_err(Clone::clone));
    let verdict = match (perfect_bs, exact_ssd_dagger) {
        (Outcome::Budget, _) | (_, Outcome::Budget) => Verdict::Budget,
        (a, b) if a == b => Verdict::Agree,
        _ => Verdict::Counterexample,
    };

    let forward = (perfect_bs == Outcome::Yes).then(|| check_forward(&inst));
    let swap_witness = exact.as_ref().ok().and_then(|v| v.witness().cloned());
    let projection = swap_witness.as_ref().map(|w| check_projection(&inst, w));

    let bundle = (verdict == Verdict::Counterexample).then(|| CounterexampleBundle {
        source: p.clone(),
        rev,
        bs,
        perfect_bs: perfect_bs == Outcome::Yes,
        exact_ssd_dagger: exact_ssd_dagger == Outcome::Yes,
        block_witness: perfect.as_ref().ok().and_then(|v| v.witness.clone()),
        swap_witness: swap_witness.clone(),
        projection_error: projection.clone().and_then(Result::err),
        instance: inst.clone(),
    });

    let ms = if config.deterministic {
        0
    } else {
        started.elapsed().as_millis() as u64
    };
    RowResult {
        row: SweepRow {
            perm: p.clone(),
            rev,
            strips: p.strips().count(),
            bs,
            ssd,
            lb_rev: lower_bound_rev(p),
            lb_strips: lower_bound_strips(p),
            perfect_bs,
            exact_ssd_dagger,
            verdict,
            nodes,
            ms,
        },
        structural,
        forward,
        projection,
        bundle,
    }
}

/// Tests `bs(p) == rev(p)` against "π† has an exact strip-swap schedule"
/// over all of `S_n` (n ≤ 6) or `sample` seeded draws (n ≤ 8).
///
/// Limits are recorded per row as [`Outcome::Budget`]; the sweep never
/// aborts on them.
pub fn sweep_equivalence(config: &SweepConfig) -> Result<SweepReport, SweepError> {
    let n = config.n;
    if n == 0 {
        return Err(SweepError::Empty);
    }
    if n > SAMPLED_MAX_N {
        return Err(SweepError::TooLarge { n, max: SAMPLED_MAX_N });
    }
    let perms = match config.sample {
        Some(count) => sample_permutations(n, count, config.seed),
        None if n <= EXHAUSTIVE_MAX_N => all_permutations(n),
        None => return Err(SweepError::SampleRequired { n }),
    };

    let started = Instant::now();
    let results: Vec<RowResult> = perms.par_iter().map(|p| compute_row(p, config)).collect();

    let mut summary = SweepSummary {
        n,
        mode: if config.sample.is_some() { "sampled" } else { "exhaustive" },
        sample: config.sample,
        seed: config.sample.map(|_| config.seed),
        deterministic: config.deterministic,
        hinge_layout: config.hinge_layout,
        rows: results.len(),
        agree: 0,
        counterexamples: 0,
        budget_exhausted: 0,
        perfect_bs: 0,
        exact_ssd_dagger: 0,
        structural_failures: Vec::new(),
        forward_lemma: LemmaTally::default(),
        projection_lemma: LemmaTally::default(),
        counterexample_perms: Vec::new(),
        nodes_total: 0,
        runtime_ms: None,
    };
    let mut rows = Vec::with_capacity(results.len());
    let mut counterexamples = Vec::new();
    for r in results {
        match r.row.verdict {
            Verdict::Agree => summary.agree += 1,
            Verdict::Counterexample => {
                summary.counterexamples += 1;
                summary.counterexample_perms.push(r.row.perm.to_string());
            }
            Verdict::Budget => summary.budget_exhausted += 1,
        }
        summary.perfect_bs += usize::from(r.row.perfect_bs == Outcome::Yes);
        summary.exact_ssd_dagger += usize::from(r.row.exact_ssd_dagger == Outcome::Yes);
        summary.nodes_total += r.row.nodes;
        summary.structural_failures.extend(r.structural);
        summary.forward_lemma.record(&r.row.perm, r.forward);
        summary.projection_lemma.record(&r.row.perm, r.projection);
        counterexamples.extend(r.bundle);
        rows.push(r.row);
    }
    if !config.deterministic {
        summary.runtime_ms = Some(started.elapsed().as_millis() as u64);
    }
    Ok(SweepReport {
        rows,
        summary,
        counterexamples,
    })
}
