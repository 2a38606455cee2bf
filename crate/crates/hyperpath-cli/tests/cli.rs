//! End-to-end checks of the command-line surface: exit codes, file
//! round-trips, determinism, and the reduction pipelines.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperpath"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TWO_EDGE: &str = "3 4 2 directed\n0 1 2\n1 2 3\n";

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "two.hg", TWO_EDGE);

    let yes = run(&["solve", "path", path_str(&file), "--k", "4"]);
    assert_eq!(yes.status.code(), Some(0), "{}", stdout(&yes));

    let no = run(&["solve", "path", path_str(&file), "--k", "5"]);
    assert_eq!(no.status.code(), Some(1));

    let bad = write(&dir, "bad.hg", "not a header\n");
    let err = run(&["solve", "path", path_str(&bad), "--k", "3"]);
    assert_eq!(err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&err.stderr).contains("malformed header"));
}

#[test]
fn solve_oracle_flag_matches() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "two.hg", TWO_EDGE);
    let a = run(&["solve", "path", path_str(&file), "--k", "4", "--oracle"]);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&["solve", "cycle", path_str(&file), "--k", "4", "--oracle"]);
    assert_eq!(b.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic_modulo_wall_time() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "two.hg", TWO_EDGE);
    let args = ["solve", "path", path_str(&file), "--k", "4", "--json", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    let mut ja: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let mut jb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert!(ja["wall_time_ms"].as_f64().is_some());
    ja["wall_time_ms"] = 0.into();
    jb["wall_time_ms"] = 0.into();
    assert_eq!(ja, jb);
    assert_eq!(ja["schema"], 1);
}

#[test]
fn witness_pipeline_verifies() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "two.hg", TWO_EDGE);
    let solved = run(&["solve", "path", path_str(&file), "--k", "4", "--witness", "--json"]);
    assert_eq!(solved.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&solved)).unwrap();
    let witness: Vec<u64> =
        report["witness"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    let ids: Vec<String> = witness.iter().map(u64::to_string).collect();
    let cert = write(&dir, "w.cert", &format!("{}\n", ids.join(" ")));

    let ok = run(&["verify", "path", path_str(&file), path_str(&cert), "--k", "4"]);
    assert_eq!(ok.status.code(), Some(0));

    // one vertex swapped: invalid
    let broken = write(&dir, "bad.cert", "0 2 1 3\n");
    let bad = run(&["verify", "path", path_str(&file), path_str(&broken)]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_cover_certificates() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "cover.exc", "4 3\n0 1\n2 3\n1 2\n");
    let good = write(&dir, "good.cert", "0 1\n");
    let overlap = write(&dir, "overlap.cert", "0 2\n");
    assert_eq!(run(&["verify", "cover", path_str(&inst), path_str(&good)]).status.code(), Some(0));
    assert_eq!(
        run(&["verify", "cover", path_str(&inst), path_str(&overlap)]).status.code(),
        Some(1)
    );
    let bad = write(&dir, "bad.cert", "zero one\n");
    assert_eq!(run(&["verify", "cover", path_str(&inst), path_str(&bad)]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_solvable() {
    let dir = TempDir::new().unwrap();
    let out1 = dir.path().join("p1.hg");
    let out2 = dir.path().join("p2.hg");
    let gen_args = |out: &Path| {
        vec![
            "gen".to_string(),
            "planted-path".to_string(),
            "--r=3".to_string(),
            "--n=30".to_string(),
            "--k=16".to_string(),
            "--extra-edges=20".to_string(),
            format!("--out={}", out.display()),
            "--seed=5".to_string(),
        ]
    };
    let a = bin().args(gen_args(&out1)).output().unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = bin().args(gen_args(&out2)).output().unwrap();
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());

    // the plant sidecar is a valid witness for the solver's yes
    let solved = run(&["solve", "path", path_str(&out1), "--k", "16"]);
    assert_eq!(solved.status.code(), Some(0));
    let plant = out1.with_extension("plant");
    let verify = run(&["verify", "path", path_str(&out1), path_str(&plant), "--k", "16"]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn reduce_exc_to_khp_pipeline() {
    let dir = TempDir::new().unwrap();
    // canonical instance: two disjoint six-element sets
    let inst = write(&dir, "canon.exc", "12 2\n0 1 2 3 4 5\n6 7 8 9 10 11\n");
    let out_dir = dir.path().join("out");
    let reduced = run(&[
        "reduce",
        "exc-to-khp",
        path_str(&inst),
        "--out-dir",
        path_str(&out_dir),
        "--r",
        "3",
    ]);
    assert_eq!(reduced.status.code(), Some(0), "{}", String::from_utf8_lossy(&reduced.stderr));
    let text = stdout(&reduced);
    assert!(text.contains("k = 29"), "{text}");
    assert!(text.contains("30 vertices"), "{text}");

    // outputs are re-parseable by the CLI
    let khp = out_dir.join("canon.khp");
    let gadget_json = out_dir.join("canon.gadget.json");
    assert!(gadget_json.exists());
    let solved = run(&["solve", "path", path_str(&khp), "--k", "29", "--oracle", "--force"]);
    assert_eq!(solved.status.code(), Some(0), "gadget of a yes-instance must have a path");

    // and the non-cover variant has none
    let bad = write(&dir, "bad.exc", "12 2\n0 1 2 3 4 5\n5 6 7 8 9 10\n");
    let reduced = run(&[
        "reduce",
        "exc-to-khp",
        path_str(&bad),
        "--out-dir",
        path_str(&out_dir),
        "--r",
        "3",
    ]);
    assert_eq!(reduced.status.code(), Some(0));
    let solved = run(&[
        "solve",
        "path",
        path_str(&out_dir.join("bad.khp")),
        "--k",
        "29",
        "--oracle",
        "--force",
    ]);
    assert_eq!(solved.status.code(), Some(1));
}

#[test]
fn reduce_rejects_assumption1_violations() {
    let dir = TempDir::new().unwrap();
    let small_set = write(&dir, "v.exc", "12 2\n0 1 2 3\n4 5 6 7\n");
    let out = run(&[
        "reduce",
        "exc-to-khp",
        path_str(&small_set),
        "--out-dir",
        path_str(&dir.path().join("o")),
        "--r",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Assumption 1") && err.contains("|S_0| = 4 < 2r"), "{err}");
}

#[test]
fn reduce_pad_and_color_coding_counts() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "small.exc", "10 3\n0 1 2\n3 4\n5 6 7 8 9\n");
    let out_dir = dir.path().join("padded");
    let padded = run(&[
        "reduce",
        "pad-exc",
        path_str(&inst),
        "--out-dir",
        path_str(&out_dir),
        "--r",
        "3",
    ]);
    assert_eq!(padded.status.code(), Some(0));
    assert!(stdout(&padded).contains("kappa = 12"), "{}", stdout(&padded));
    let files: Vec<_> = std::fs::read_dir(&out_dir).unwrap().collect();
    assert_eq!(files.len(), 6); // 2r instances

    let sp = write(&dir, "sp.exc", "10 4 2\n0 1 2 3 4\n5 6 7 8 9\n0 1 2\n3 4\n");
    let cc_dir = dir.path().join("cc");
    let colored =
        run(&["reduce", "sp-to-exc", path_str(&sp), "--out-dir", path_str(&cc_dir), "--seed", "3"]);
    assert_eq!(colored.status.code(), Some(0));
    assert!(stdout(&colored).contains("160 instances"), "{}", stdout(&colored));
    let produced: Vec<_> = std::fs::read_dir(&cc_dir).unwrap().collect();
    assert_eq!(produced.len(), 160); // n·2^(2t) = 10·16
}

#[test]
fn reduce_subset_closure() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "sc.exc", "3 2\n0 1\n1 2\n");
    let out_dir = dir.path().join("closed");
    let out = run(&[
        "reduce",
        "sc-to-sp",
        path_str(&inst),
        "--out-dir",
        path_str(&out_dir),
        "--bound",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("6 subsets generated"), "{}", stdout(&out));
    // the closure admits the partition {0,1} + {2}
    let closed = out_dir.join("sc.closure.exc");
    let text = std::fs::read_to_string(&closed).unwrap();
    assert!(text.lines().any(|l| l.trim() == "2"));
}

#[test]
fn bench_guard_and_single_row() {
    let refused = run(&["bench", "--k-min", "40", "--k-max", "40"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("2^k"), "memory formula missing");

    let one = run(&[
        "bench",
        "--k-min",
        "8",
        "--k-max",
        "8",
        "--samples",
        "1",
        "--trials",
        "1",
        "--json",
    ]);
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&one)).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["ratio"].is_null());
    assert!(rows[0]["memory_estimate_bytes"].as_u64().unwrap() > 0);
}
