//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so every line is printed; exits non-zero if any check fails.

use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::Value;

use stripswap::harness::{
    all_permutations, check_bounds_exhaustive, running_example_schedule, sample_permutations, CounterexampleBundle,
};
use stripswap::reduction::{build_dagger, project_schedule, verify_instance, GadgetInstance};
use stripswap::solvers::{bs_bfs_oracle, bs_exact, has_exact_swap_schedule, rev_deltas, ssd_bfs_oracle, ssd_exact};
use stripswap::{parse_permutation, Schedule};

type Check = Result<String, String>;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stripswap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Result<Value, String> {
    serde_json::from_slice(&out.stdout).map_err(|e| format!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stderr)))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn replay_running_example() -> Check {
    let started = Instant::now();
    let s = running_example_schedule();
    let counts: Vec<usize> = s.trace().map_err(|e| e.to_string())?.iter().map(|q| q.strips().count()).collect();
    let elapsed = started.elapsed();
    ensure(s.len() == 3 && s.finish().is_identity(), || format!("ends at {}", s.finish()))?;
    ensure(counts == [6, 4, 2, 1], || format!("strip counts {counts:?}"))?;
    ensure(elapsed < Duration::from_millis(1), || format!("replay took {elapsed:?}"))?;

    let file = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
    std::fs::write(file.path(), serde_json::to_string(&s).unwrap()).map_err(|e| e.to_string())?;
    let out = bin(&["replay", file.path().to_str().unwrap()]);
    let v = json_stdout(&out)?;
    ensure(out.status.code() == Some(0) && v["reaches_identity"] == true && v["strip_counts"] == serde_json::json!([6, 4, 2, 1]), || {
        format!("cli replay gave {v}")
    })?;
    Ok(format!("identity in 3 swaps, strips 6 -> 4 -> 2 -> 1, replay {elapsed:?}"))
}

fn lower_bounds_and_distance() -> Check {
    let out = bin(&["analyze", "2 5 6 3 7 8 9 4 1"]);
    let v = json_stdout(&out)?;
    let got = (v["rev"].as_u64(), v["strip_count"].as_u64(), v["lb_rev"].as_u64(), v["lb_strips"].as_u64());
    ensure(got == (Some(3), Some(6), Some(2), Some(2)), || format!("analyze gave {got:?}"))?;

    let started = Instant::now();
    let p = parse_permutation("2 5 6 3 7 8 9 4 1").unwrap();
    let bfs = ssd_bfs_oracle(&p, 10).map_err(|e| e.to_string())?.distance;
    let ida = ssd_exact(&p, None).map_err(|e| e.to_string())?.distance;
    within(Duration::from_secs(1), started, "oracles")?;
    ensure(bfs == ida, || format!("bfs {bfs} vs iterative deepening {ida}"))?;
    ensure(bfs == 2 || bfs == 3, || format!("distance {bfs}"))?;
    let verdict = if bfs < 3 { "yes, fewer than three" } else { "no, three swaps are optimal" };
    Ok(format!("rev=3 strips=6 bounds 2/2; exact distance {bfs} by both searches ({verdict})"))
}

fn bound_soundness() -> Check {
    let started = Instant::now();
    let mut swaps = 0;
    let mut blocks = 0;
    for n in 1..=6 {
        let report = check_bounds_exhaustive(n).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("n={n}: {:?}", &report.violations[..report.violations.len().min(3)]))?;
        swaps += report.swap_moves_checked;
        blocks += report.block_moves_checked;
    }
    within(Duration::from_secs(600), started, "bounds sweep")?;
    Ok(format!(
        "S_1..S_6: 0 violations over {swaps} swaps and {blocks} block moves in {:?}",
        started.elapsed()
    ))
}

fn oracle_equivalence() -> Check {
    let mut perms = all_permutations(5);
    perms.extend(sample_permutations(7, 500, 20_231));
    let bad: Vec<String> = perms
        .par_iter()
        .filter_map(|p| {
            let s = (ssd_exact(p, None).ok()?.distance, ssd_bfs_oracle(p, usize::MAX).ok()?.distance);
            let b = (bs_exact(p, None).ok()?.distance, bs_bfs_oracle(p, usize::MAX).ok()?.distance);
            (s.0 != s.1 || b.0 != b.1).then(|| format!("{p}: ssd {s:?} bs {b:?}"))
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} mismatches, e.g. {:?}", bad.len(), bad.first()))?;
    Ok(format!("{} permutations (all of S_5, 500 seeded S_7), 0 mismatches", perms.len()))
}

fn reduction_structure() -> Check {
    let mut count = 0;
    for n in 1..=6 {
        for p in all_permutations(n) {
            let inst = build_dagger(&p);
            let report = verify_instance(&inst);
            let r = p.rev().rev;
            ensure(report.passed(), || format!("{p}: {:?}", report.failures().collect::<Vec<_>>()))?;
            ensure(inst.pi_dagger.rev().rev == 2 * r && inst.len() <= n + 5 * r, || format!("{p}: size or rev"))?;
            count += 1;
        }
    }
    Ok(format!("{count} instances: rev = 2R, descents cage-internal, N <= n + 5R"))
}

fn yes_instance() -> Check {
    let started = Instant::now();
    let p = parse_permutation("4 1 3 2").unwrap();
    let inst = build_dagger(&p);
    ensure(inst.r == 2, || format!("R = {}", inst.r))?;
    let verdict = has_exact_swap_schedule(&inst.pi_dagger).map_err(|e| e.to_string())?;
    let w = verdict.witness().ok_or("no exact schedule")?;
    ensure(rev_deltas(w) == [-2, -2], || format!("witness deltas {:?}", rev_deltas(w)))?;
    let b = project_schedule(&inst, w).map_err(|e| e.to_string())?;
    ensure(b.len() == 2 && b.finish().is_identity() && rev_deltas(&b) == [-1, -1], || {
        format!("projection {:?}", rev_deltas(&b))
    })?;
    within(Duration::from_secs(1), started, "yes instance")?;
    Ok(format!("R=2, exact 2-swap schedule on {}, projects to a perfect 2-move block schedule", inst.pi_dagger))
}

fn no_instance() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let started = Instant::now();
    let out = bin(&["repro", "--out", dir.path().to_str().unwrap()]);
    within(Duration::from_secs(300), started, "bounded search")?;
    ensure(out.status.code() == Some(0), || format!("repro exited {:?}", out.status.code()))?;
    let v = json_stdout(&out)?;
    let no = &v["no_instance"];
    ensure(no["R"] == 4 && no["budget"] == 4, || format!("R = {}, budget = {}", no["R"], no["budget"]))?;
    let claim = no["claim_holds"].as_bool().ok_or("no verdict")?;
    if !claim {
        // The bundle must replay: a schedule of at most four swaps sorting the stored instance.
        let inst: GadgetInstance = read_json(&dir.path().join("no_instance_instance.json"))?;
        let s: Schedule = read_json(&dir.path().join("no_instance_schedule.json"))?;
        ensure(inst == build_dagger(&parse_permutation("7 2 6 5 8 3 1 4").unwrap()), || "bundle instance differs".into())?;
        ensure(s.start() == &inst.pi_dagger && s.len() <= 4 && s.finish().is_identity(), || "bundle schedule does not sort the instance".into())?;
    }
    Ok(format!("definite verdict in {:?}: {}", started.elapsed(), no["verdict"].as_str().unwrap_or("?")))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn theorem_sweep() -> Check {
    let mut notes = Vec::new();
    for n in 1..=5 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let n_arg = n.to_string();
        let out = bin(&["sweep", "--n", &n_arg, "--deterministic", "--out", dir.path().to_str().unwrap()]);
        let s = json_stdout(&out)?;
        let (rows, agree, cex, budget) = (
            s["rows"].as_u64().unwrap_or(0),
            s["agree"].as_u64().unwrap_or(0),
            s["counterexamples"].as_u64().unwrap_or(0),
            s["budget_exhausted"].as_u64().unwrap_or(u64::MAX),
        );
        ensure(budget == 0 && agree + cex == rows, || format!("n={n}: {s}"))?;
        let expected_code = if cex == 0 { 0 } else { 4 };
        ensure(out.status.code() == Some(expected_code), || format!("n={n}: exit {:?}", out.status.code()))?;
        let bundles: Vec<_> = std::fs::read_dir(dir.path().join("counterexamples"))
            .map_err(|e| e.to_string())?
            .map(|e| e.unwrap().path())
            .collect();
        ensure(bundles.len() as u64 == cex, || format!("n={n}: {} bundles for {cex} counterexamples", bundles.len()))?;
        for path in &bundles {
            let bundle: CounterexampleBundle = read_json(path)?;
            bundle.recheck().map_err(|e| format!("{}: {e}", path.display()))?;
            ensure(bundle.bs.is_some_and(|bs| bs > bundle.rev), || format!("{}: bs <= rev", bundle.source))?;
        }
        let imperfect = all_permutations(n)
            .iter()
            .filter(|p| bs_exact(p, None).is_ok_and(|r| r.distance > p.rev().rev))
            .count() as u64;
        ensure(imperfect == cex, || format!("n={n}: {cex} counterexamples but {imperfect} permutations with bs > rev"))?;
        notes.push(format!("n={n} {agree}/{rows}"));
    }
    Ok(format!(
        "agreement {}; every disagreement has a replaying bundle (they are exactly the permutations with bs > rev)",
        notes.join(", ")
    ))
}

fn determinism() -> Check {
    let run = |tag: &str| -> Result<(Vec<u8>, Vec<u8>, Vec<u8>, Vec<u8>), String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let args = ["sweep", "--n", "7", "--sample", "120", "--seed", "42", "--deterministic"];
        let json = bin(&[&args[..], &["--out", dir.path().to_str().unwrap()]].concat());
        let csv = bin(&[&args[..], &["--format", "csv"]].concat());
        let read = |name: &str| std::fs::read(dir.path().join(name)).map_err(|e| format!("{tag} {name}: {e}"));
        Ok((json.stdout, csv.stdout, read("sweep.csv")?, read("summary.json")?))
    };
    let (a, b) = (run("first")?, run("second")?);
    ensure(!a.1.is_empty() && !a.0.is_empty(), || "empty output".into())?;
    ensure(a == b, || "outputs differ between runs".into())?;
    ensure(a.1 == a.2, || "stdout CSV differs from sweep.csv".into())?;
    Ok(format!("two seeded runs: {} CSV bytes and {} JSON bytes identical", a.2.len(), a.3.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("three-swap schedule replay", replay_running_example),
        ("lower bounds and exact distance", lower_bounds_and_distance),
        ("bound soundness, n <= 6", bound_soundness),
        ("oracle equivalence", oracle_equivalence),
        ("reduction structure, n <= 6", reduction_structure),
        ("YES instance 4 1 3 2", yes_instance),
        ("NO instance 7 2 6 5 8 3 1 4", no_instance),
        ("equivalence sweep, n <= 5", theorem_sweep),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail}", idx + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
