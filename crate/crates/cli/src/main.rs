//! `stripswap` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 search budget
//! exhausted, 4 property violation found (verify, project, sweep).

mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use stripswap::harness::{check_bounds_exhaustive, reproduce_worked_examples, sweep_equivalence, SweepConfig};
use stripswap::permutation::{lower_bound_rev, lower_bound_strips};
use stripswap::reduction::{build_dagger_with, project_schedule, verify_instance, HingeLayout};
use stripswap::render::{ascii_instance, ascii_strips, ascii_trace, svg_instance, svg_permutation, svg_trace};
use stripswap::solvers::{
    bs_bfs_oracle, bs_exact, has_exact_swap_schedule, ssd_bfs_oracle, ssd_exact, DistanceResult, SearchError,
};
use input::{load_instance, load_permutation, load_schedule, read_input, Target};

#[derive(Parser)]
#[command(name = "stripswap", version, about = "Sort permutations by strip swaps and block moves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Longest schedule a solver may return.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Seed for sampled sweeps; a random one is chosen and reported if absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Node caps instead of wall-clock limits; no timings in reports.
    #[arg(long, global = true)]
    deterministic: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output directory for report files (sweep, repro).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = HingeLayout::Figure)]
    hinge_layout: HingeLayout,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Iterative deepening with the strip and descent bounds.
    Ida,
    /// Breadth-first oracle (n <= 9).
    Bfs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    /// Perfect block schedule vs exact strip-swap schedule of the gadget.
    Equivalence,
    /// Lower bounds and per-move limits.
    Bounds,
}

/// Permutations are given inline ("4 1 3 2"), as a file path, or `-` for stdin.
#[derive(Subcommand)]
enum Command {
    /// Strips, descents and lower bounds.
    Analyze { permutation: String },
    /// Exact strip swap distance with a shortest schedule.
    SolveSsd {
        permutation: String,
        #[arg(long, value_enum, default_value_t = Method::Ida)]
        method: Method,
    },
    /// Exact block sorting distance with a shortest schedule.
    SolveBs {
        permutation: String,
        #[arg(long, value_enum, default_value_t = Method::Ida)]
        method: Method,
    },
    /// Build the cage/hinge instance of a permutation.
    Reduce { permutation: String },
    /// Map an exact strip-swap schedule on an instance to block moves on its source.
    Project {
        instance: String,
        /// Schedule JSON; searched for when omitted.
        schedule: Option<String>,
    },
    /// Check the structural invariants of an instance.
    Verify { instance: String },
    /// Replay a schedule and report the states it passes through.
    Replay { schedule: String },
    /// Sweep S_n exhaustively or by seeded sampling.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, value_enum, default_value_t = SweepMode::Equivalence)]
        mode: SweepMode,
        /// Per-search node cap in deterministic mode.
        #[arg(long)]
        node_limit: Option<u64>,
        /// Per-row wall-clock limit outside deterministic mode.
        #[arg(long)]
        time_limit_ms: Option<u64>,
    },
    /// Re-run the worked examples (YES instance, NO instance, three-swap schedule).
    Repro,
    /// Draw a permutation, instance JSON or schedule JSON.
    Render { target: String },
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
    Budget(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

struct Output {
    payload: String,
    /// Set when a property violation was found; the payload is still printed.
    violation: Option<String>,
}

impl Output {
    fn ok(payload: String) -> Self {
        Self {
            payload,
            violation: None,
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn pick(global: &Global, allowed: &[Format], command: &str) -> Result<Format, Failure> {
    let format = global.format.unwrap_or(allowed[0]);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        let names: Vec<String> = allowed
            .iter()
            .map(|f| f.to_possible_value().expect("no skipped variants").get_name().to_string())
            .collect();
        Err(Failure::Usage(format!("{command} supports --format {}", names.join("|"))))
    }
}

fn no_out(global: &Global, command: &str) -> Result<(), Failure> {
    match global.out {
        Some(_) => Err(Failure::Usage(format!("--out is not used by {command}"))),
        None => Ok(()),
    }
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::StateSpaceGuard { .. } => Failure::Data(e.into()),
        other => Failure::Budget(other.to_string()),
    }
}

fn analyze(global: &Global, text: &str) -> Result<Output, Failure> {
    let format = pick(global, &[Format::Json, Format::Ascii, Format::Svg], "analyze")?;
    let p = load_permutation(text)?;
    let profile = p.rev();
    Ok(Output::ok(match format {
        Format::Ascii => format!(
            "{}\nstrips={} rev={} lb_rev={} lb_strips={}\n",
            ascii_strips(&p),
            p.strips().count(),
            profile.rev,
            lower_bound_rev(&p),
            lower_bound_strips(&p)
        ),
        Format::Svg => svg_permutation(&p),
        _ => {
            let strips: Vec<&[u32]> = p.strips().strips().iter().map(|s| &p.as_slice()[s.range()]).collect();
            let descents: Vec<usize> = profile.descent_positions.iter().map(|i| i + 1).collect();
            pretty(&json!({
                "permutation": p,
                "n": p.len(),
                "strips": strips,
                "strip_count": strips.len(),
                "rev": profile.rev,
                "descent_positions": descents,
                "lb_rev": lower_bound_rev(&p),
                "lb_strips": lower_bound_strips(&p),
                "ascii": ascii_strips(&p),
            }))
        }
    }))
}

fn solve(global: &Global, text: &str, method: Method, swaps: bool) -> Result<Output, Failure> {
    let command = if swaps { "solve-ssd" } else { "solve-bs" };
    let format = pick(global, &[Format::Json, Format::Ascii, Format::Svg], command)?;
    let p = load_permutation(text)?;
    let result: DistanceResult = match (method, swaps) {
        (Method::Ida, true) => ssd_exact(&p, global.budget),
        (Method::Ida, false) => bs_exact(&p, global.budget),
        (Method::Bfs, true) => ssd_bfs_oracle(&p, global.budget.unwrap_or(usize::MAX)),
        (Method::Bfs, false) => bs_bfs_oracle(&p, global.budget.unwrap_or(usize::MAX)),
    }
    .map_err(search_failure)?;
    Ok(Output::ok(match format {
        Format::Ascii => format!(
            "distance={} lower_bound={} nodes={}\n{}",
            result.distance,
            result.lower_bound,
            result.nodes_expanded,
            ascii_trace(&result.witness)
        ),
        Format::Svg => svg_trace(&result.witness),
        _ => {
            let method = match method {
                Method::Ida => "ida",
                Method::Bfs => "bfs",
            };
            let mut value = serde_json::to_value(&result).expect("result serializes");
            value["method"] = json!(method);
            pretty(&value)
        }
    }))
}

fn reduce(global: &Global, text: &str) -> Result<Output, Failure> {
    let format = pick(global, &[Format::Json, Format::Ascii, Format::Svg], "reduce")?;
    let p = load_permutation(text)?;
    let inst = build_dagger_with(&p, global.hinge_layout);
    Ok(Output::ok(match format {
        Format::Ascii => format!(
            "source {}  R={}  N={}\n{}",
            inst.source,
            inst.r,
            inst.len(),
            ascii_instance(&inst)
        ),
        Format::Svg => svg_instance(&inst),
        _ => pretty(&inst),
    }))
}

fn verify(global: &Global, text: &str) -> Result<Output, Failure> {
    let format = pick(global, &[Format::Json, Format::Ascii], "verify")?;
    let inst = load_instance(text)?;
    let report = verify_instance(&inst);
    let payload = match format {
        Format::Ascii => report
            .checks
            .iter()
            .map(|c| {
                if c.passed {
                    format!("PASS {}\n", c.name)
                } else {
                    format!("FAIL {}: {}\n", c.name, c.detail)
                }
            })
            .collect(),
        _ => pretty(&json!({ "passed": report.passed(), "checks": report.checks })),
    };
    let violation = (!report.passed()).then(|| {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        format!("invariants failed: {}", names.join(", "))
    });
    Ok(Output { payload, violation })
}

fn project(global: &Global, instance: &str, schedule: Option<&str>) -> Result<Output, Failure> {
    let format = pick(global, &[Format::Json, Format::Ascii], "project")?;
    let inst = load_instance(instance)?;
    let swaps = match schedule {
        Some(text) => load_schedule(text)?,
        None => has_exact_swap_schedule(&inst.pi_dagger)
            .map_err(search_failure)?
            .witness()
            .cloned()
            .ok_or_else(|| Failure::Data(anyhow::anyhow!("the instance has no exact strip-swap schedule to project")))?,
    };
    match project_schedule(&inst, &swaps) {
        Ok(blocks) => Ok(Output::ok(match format {
            Format::Ascii => ascii_trace(&blocks),
            _ => pretty(&blocks),
        })),
        Err(e) if e.is_lemma_counterexample() => Ok(Output {
            payload: pretty(&json!({ "projected": false, "error": e.to_string(), "schedule": swaps })),
            violation: Some(e.to_string()),
        }),
        Err(e) => Err(Failure::Data(e.into())),
    }
}

fn replay(global: &Global, text: &str) -> Result<Output, Failure> {
    let format = pick(global, &[Format::Json, Format::Ascii, Format::Svg], "replay")?;
    let s = load_schedule(text)?;
    let trace = s.trace().context("schedule does not replay")?;
    Ok(Output::ok(match format {
        Format::Ascii => ascii_trace(&s),
        Format::Svg => svg_trace(&s),
        _ => {
            let strip_counts: Vec<usize> = trace.iter().map(|q| q.strips().count()).collect();
            let rev_counts: Vec<usize> = trace.iter().map(|q| q.rev().rev).collect();
            let finish = trace.last().expect("trace includes the start");
            pretty(&json!({
                "start": s.start(),
                "kind": s.kind(),
                "moves": s.len(),
                "final": finish,
                "reaches_identity": finish.is_identity(),
                "strip_counts": strip_counts,
                "rev_counts": rev_counts,
            }))
        }
    }))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Data)
}

fn sweep(
    global: &Global,
    n: usize,
    sample: Option<usize>,
    mode: SweepMode,
    node_limit: Option<u64>,
    time_limit_ms: Option<u64>,
) -> Result<Output, Failure> {
    if mode == SweepMode::Bounds {
        let format = pick(global, &[Format::Json], "sweep --mode bounds")?;
        debug_assert!(format == Format::Json);
        if sample.is_some() {
            return Err(Failure::Usage("--mode bounds is exhaustive; drop --sample".into()));
        }
        let report = check_bounds_exhaustive(n).map_err(|e| Failure::Usage(e.to_string()))?;
        let payload = pretty(&report);
        if let Some(dir) = &global.out {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write_file(&dir.join("bounds.json"), &payload)?;
        }
        let violation = (!report.passed()).then(|| format!("{} bound violations", report.violations.len()));
        return Ok(Output { payload, violation });
    }

    let format = pick(global, &[Format::Json, Format::Csv], "sweep")?;
    let mut config = SweepConfig::new(n);
    config.sample = sample;
    config.deterministic = global.deterministic;
    config.hinge_layout = global.hinge_layout;
    if let Some(limit) = node_limit {
        config.node_limit = limit;
    }
    if let Some(ms) = time_limit_ms {
        config.time_limit = std::time::Duration::from_millis(ms);
    }
    if sample.is_some() {
        config.seed = global.seed.unwrap_or_else(|| {
            let seed = rand::random();
            eprintln!("no --seed given; using {seed}");
            seed
        });
    }
    let report = sweep_equivalence(&config).map_err(|e| Failure::Usage(e.to_string()))?;
    let (csv, summary) = (report.to_csv(), report.summary_json());
    if let Some(dir) = &global.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_file(&dir.join("sweep.csv"), &csv)?;
        write_file(&dir.join("summary.json"), &summary)?;
        report
            .write_bundles(&dir.join("counterexamples"))
            .context("writing counterexample bundles")?;
    }
    let s = &report.summary;
    let mut problems = Vec::new();
    if s.counterexamples > 0 {
        let shown: Vec<&str> = s.counterexample_perms.iter().take(3).map(String::as_str).collect();
        let more = if s.counterexamples > shown.len() { "; ..." } else { "" };
        problems.push(format!("{} counterexamples ({}{more})", s.counterexamples, shown.join("; ")));
    }
    if !s.structural_failures.is_empty() {
        problems.push(format!("{} instances fail verification", s.structural_failures.len()));
    }
    for (name, tally) in [("forward", &s.forward_lemma), ("projection", &s.projection_lemma)] {
        if tally.failed > 0 {
            problems.push(format!("{name} lemma failed {} of {} times", tally.failed, tally.checked));
        }
    }
    Ok(Output {
        payload: if format == Format::Csv { csv } else { summary },
        violation: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

fn repro(global: &Global) -> Result<Output, Failure> {
    pick(global, &[Format::Json], "repro")?;
    let report = reproduce_worked_examples();
    let payload = pretty(&report);
    if let Some(dir) = &global.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_file(&dir.join("worked_examples.json"), &payload)?;
        let no = &report.no_instance;
        if let Some(witness) = &no.within_budget {
            write_file(&dir.join("no_instance_instance.json"), &pretty(&no.instance))?;
            write_file(&dir.join("no_instance_schedule.json"), &pretty(witness))?;
        }
    }
    for (name, line) in [
        ("yes instance", if report.yes_instance.passed { "pass" } else { "FAIL" }.to_string()),
        ("no instance", report.no_instance.verdict.clone()),
        (
            "three-swap schedule",
            format!(
                "strip counts {:?}, exact distance {}",
                report.running_example.strip_counts, report.running_example.ssd_bfs
            ),
        ),
    ] {
        eprintln!("{name}: {line}");
    }
    Ok(Output::ok(payload))
}

fn render(global: &Global, text: &str) -> Result<Output, Failure> {
    let format = pick(global, &[Format::Ascii, Format::Svg], "render")?;
    let target = Target::detect(text)?;
    Ok(Output::ok(match (target, format) {
        (Target::Permutation(p), Format::Svg) => svg_permutation(&p),
        (Target::Permutation(p), _) => ascii_strips(&p) + "\n",
        (Target::Instance(inst), Format::Svg) => svg_instance(&inst),
        (Target::Instance(inst), _) => ascii_instance(&inst),
        (Target::Schedule(s), Format::Svg) => svg_trace(&s),
        (Target::Schedule(s), _) => ascii_trace(&s),
    }))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    let stdin_uses = match &cli.command {
        Command::Project { instance, schedule } => {
            usize::from(instance == "-") + usize::from(schedule.as_deref() == Some("-"))
        }
        _ => 0,
    };
    if stdin_uses > 1 {
        return Err(Failure::Usage("only one input can be read from stdin".into()));
    }
    match &cli.command {
        Command::Sweep { .. } | Command::Repro => {}
        Command::Analyze { .. } => no_out(g, "analyze")?,
        Command::SolveSsd { .. } => no_out(g, "solve-ssd")?,
        Command::SolveBs { .. } => no_out(g, "solve-bs")?,
        Command::Reduce { .. } => no_out(g, "reduce")?,
        Command::Project { .. } => no_out(g, "project")?,
        Command::Verify { .. } => no_out(g, "verify")?,
        Command::Replay { .. } => no_out(g, "replay")?,
        Command::Render { .. } => no_out(g, "render")?,
    }
    match &cli.command {
        Command::Analyze { permutation } => analyze(g, &read_input(permutation)?),
        Command::SolveSsd { permutation, method } => solve(g, &read_input(permutation)?, *method, true),
        Command::SolveBs { permutation, method } => solve(g, &read_input(permutation)?, *method, false),
        Command::Reduce { permutation } => reduce(g, &read_input(permutation)?),
        Command::Project { instance, schedule } => {
            let schedule = schedule.as_deref().map(read_input).transpose()?;
            project(g, &read_input(instance)?, schedule.as_deref())
        }
        Command::Verify { instance } => verify(g, &read_input(instance)?),
        Command::Replay { schedule } => replay(g, &read_input(schedule)?),
        Command::Sweep {
            n,
            sample,
            mode,
            node_limit,
            time_limit_ms,
        } => sweep(g, *n, *sample, *mode, *node_limit, *time_limit_ms),
        Command::Repro => repro(g),
        Command::Render { target } => render(g, &read_input(target)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.payload.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            match out.violation {
                Some(msg) => {
                    eprintln!("violation: {msg}");
                    ExitCode::from(4)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exhausted: {msg}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn unsupported_format_is_a_usage_error() {
        let cli = Cli::try_parse_from(["stripswap", "verify", "x", "--format", "svg"]).unwrap();
        assert!(matches!(run(cli), Err(Failure::Usage(_))));
    }

    #[test]
    fn permutation_round_trips_through_render() {
        let p: stripswap::Permutation = "2 5 6 3 7 8 9 4 1".parse().unwrap();
        let cli = Cli::try_parse_from(["stripswap", "render", "2 5 6 3 7 8 9 4 1"]).unwrap();
        let Ok(out) = run(cli) else { panic!("render failed") };
        assert_eq!(out.payload, "[2] [5 6] [3] [7 8 9] [4] [1]\n");
        assert_eq!(stripswap::render::parse_ascii_strips(&out.payload).unwrap(), p);
    }
}
