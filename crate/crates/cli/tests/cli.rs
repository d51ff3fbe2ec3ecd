use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stripswap"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn analyze_running_example() {
    let out = run(&["analyze", "2 5 6 3 7 8 9 4 1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["strip_count"], 6);
    assert_eq!(v["rev"], 3);
    assert_eq!(v["lb_rev"], 2);
    assert_eq!(v["lb_strips"], 2);
    assert_eq!(v["ascii"], "[2] [5 6] [3] [7 8 9] [4] [1]");
    assert_eq!(v["descent_positions"], serde_json::json!([3, 7, 8]));
}

#[test]
fn permutation_from_stdin_and_json_array() {
    let out = run(&["analyze", "-", "--format", "ascii"], Some(b"3 1 2\n"));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[3] [1 2]\nstrips=2 rev=1 lb_rev=1 lb_strips=1\n");
    let out = run(&["analyze", "[3, 1, 2]"], None);
    assert_eq!(json(&out)["rev"], 1);
}

#[test]
fn reduce_then_verify_through_a_pipe() {
    let reduced = run(&["reduce", "4 1 3 2"], None);
    assert_eq!(reduced.status.code(), Some(0));
    assert_eq!(json(&reduced)["permutation"], serde_json::json!([1, 4, 3, 2, 5, 6, 9, 8, 7, 10]));
    let verified = run(&["verify", "-"], Some(&reduced.stdout));
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(json(&verified)["passed"], true);
}

#[test]
fn corrupted_instance_exits_with_violation() {
    let reduced = run(&["reduce", "4 1 3 2"], None);
    let mut v = json(&reduced);
    // Swap the values of U1 and L3 (positions 5 and 6).
    v["permutation"][4] = 6.into();
    v["permutation"][5] = 5.into();
    v["tokens"][4]["value"] = 6.into();
    v["tokens"][5]["value"] = 5.into();
    let out = run(&["verify", "-", "--format", "ascii"], Some(v.to_string().as_bytes()));
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL cross_boundary_ascending"), "{text}");
}

#[test]
fn solve_and_replay() {
    let out = run(&["solve-ssd", "2 5 6 3 7 8 9 4 1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["distance"], 3);
    let witness = v["witness"].to_string();
    let replayed = run(&["replay", "-"], Some(witness.as_bytes()));
    let r = json(&replayed);
    assert_eq!(r["reaches_identity"], true);
    assert_eq!(r["moves"], 3);

    let bfs = run(&["solve-bs", "2 4 1 3", "--method", "bfs"], None);
    assert_eq!(json(&bfs)["distance"], 2);
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = run(&["solve-ssd", "2 5 6 3 7 8 9 4 1", "--budget", "2"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(run(&["sweep"], None).status.code(), Some(1));
    assert_eq!(run(&["render", "1 2", "--format", "csv"], None).status.code(), Some(1));
    assert_eq!(run(&["analyze", "1 2", "--out", "x"], None).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--n", "9"], None).status.code(), Some(1));
    assert_eq!(run(&["analyze", "1 3"], None).status.code(), Some(2));
    assert_eq!(run(&["verify", "{not json"], None).status.code(), Some(2));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
}

#[test]
fn tampered_schedule_is_a_data_error() {
    let out = run(&["solve-ssd", "4 1 3 2"], None);
    let mut w = json(&out)["witness"].clone();
    w["moves"][0]["first_values"][0] = 1.into();
    let replayed = run(&["replay", "-"], Some(w.to_string().as_bytes()));
    assert_eq!(replayed.status.code(), Some(2));
}

#[test]
fn project_searches_and_reports_counterexamples() {
    let yes = run(&["reduce", "4 1 3 2"], None);
    let out = run(&["project", "-"], Some(&yes.stdout));
    assert_eq!(out.status.code(), Some(0));
    let b = json(&out);
    assert_eq!(b["kind"], "block");
    assert_eq!(b["moves"].as_array().unwrap().len(), 2);

    // 2 4 1 3 needs two block moves although it has one descent.
    let odd = run(&["reduce", "2 4 1 3"], None);
    let out = run(&["project", "-"], Some(&odd.stdout));
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["projected"], false);
}

#[test]
fn render_targets() {
    let strips = run(&["render", "1 2 3"], None);
    assert_eq!(String::from_utf8(strips.stdout).unwrap(), "[1 2 3]\n");
    let inst = run(&["reduce", "4 1 3 2"], None);
    let table = run(&["render", "-"], Some(&inst.stdout));
    assert_eq!(
        String::from_utf8(table.stdout).unwrap(),
        "token L1 4 m1 1 U1 L3 3 m3 2 U3\nvalue  1 4  3 2  5  6 9  8 7 10\n"
    );
    let svg = run(&["render", "-", "--format", "svg"], Some(&inst.stdout));
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    let reduce_svg = run(&["reduce", "4 1 3 2", "--format", "svg"], None);
    assert_eq!(String::from_utf8(reduce_svg.stdout).unwrap(), text);
}

#[test]
fn text_hinge_layout() {
    let out = run(&["reduce", "3 2 1", "--hinge-layout", "text", "--format", "ascii"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("U1 hL2 hR2 L2"), "{text}");
    assert_eq!(run(&["reduce", "3 2 1", "--hinge-layout", "diagonal"], None).status.code(), Some(1));
}

#[test]
fn sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--n", "4", "--deterministic", "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(4));
    let summary = json(&out);
    assert_eq!(summary["rows"], 24);
    assert_eq!(summary["counterexample_perms"], serde_json::json!(["2 4 1 3"]));
    assert!(summary.get("runtime_ms").is_none());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 25);
    assert!(csv.contains("\n2 4 1 3,1,4,2,2,1,1,no,yes,counterexample,"));
    assert!(dir.path().join("counterexamples/counterexample_2-4-1-3.json").is_file());

    let clean = run(&["sweep", "--n", "3", "--format", "csv"], None);
    assert_eq!(clean.status.code(), Some(0));
    let text = String::from_utf8(clean.stdout).unwrap();
    assert!(text.starts_with("perm,rev,strips,bs,ssd,lb_rev,lb_strips,perfect_bs,exact_ssd_dagger,verdict,nodes,ms\n"));

    let bounds = run(&["sweep", "--n", "5", "--mode", "bounds"], None);
    assert_eq!(bounds.status.code(), Some(0));
    assert_eq!(json(&bounds)["violations"], serde_json::json!([]));
}

#[test]
fn unseeded_sample_reports_its_seed() {
    let out = run(&["sweep", "--n", "7", "--sample", "3", "--deterministic"], None);
    let summary = json(&out);
    let seed = summary["seed"].as_u64().expect("seed recorded");
    assert!(String::from_utf8_lossy(&out.stderr).contains(&seed.to_string()));
    assert_eq!(summary["rows"], 3);
}
