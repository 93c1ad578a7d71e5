use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn write_field(dir: &Path, name: &str, src: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, src).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filippov")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn analyze_reports_the_verdict_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let unique = write_field(dir.path(), "u.field", "on (-inf, inf): 1 + abs(x)^0.5");
    let escaping = write_field(dir.path(), "e.field", "on (-inf, inf): abs(x)^0.5");

    let out = run(&["analyze", unique.to_str().unwrap(), "--window", "-2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], "unique");
    assert_eq!(doc["condition_A"]["status"], "holds");
    assert!(doc["condition_B"].as_array().unwrap().is_empty());

    let out = run(&["analyze", escaping.to_str().unwrap(), "--window", "-2", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], "non_unique");
    let b = &doc["condition_B"][0];
    assert_eq!(b["point"], 0.0);
    assert_eq!(b["status"], "not_osgood");
    assert_eq!(b["failing_side"], "right");
    assert!(b["local_form"].is_object());
    assert_eq!(doc["zero_set"][0]["lo"], 0.0);
}

#[test]
fn malformed_input_is_an_operational_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_field(dir.path(), "bad.field", "on (-inf, inf): 1 +");
    let out = run(&["analyze", bad.to_str().unwrap(), "--window", "-1", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let out = run(&["analyze", "/nonexistent.field", "--window", "-1", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_prints_the_piecewise_linear_decay() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "m.field", "on (-inf, inf): 0 - sign(x)");
    let out = run(&[
        "solve",
        f.to_str().unwrap(),
        "--window",
        "-2",
        "2",
        "--x0",
        "1",
        "--t-end",
        "2",
        "--dt-out",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let want = [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0), (1.5, 0.0), (2.0, 0.0)];
    assert_eq!(rows.len(), want.len());
    for (row, (t, x)) in rows.iter().zip(want) {
        assert_eq!(row[0], t);
        assert!((row[1] - x).abs() < 1e-9, "row {row:?}");
    }
}

#[test]
fn solve_refuses_nonunique_fields_without_flags() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "h.field", "on (-inf, 0): 0; on [0, inf): 1");
    let out = run(&[
        "solve", f.to_str().unwrap(), "--window", "-1", "1", "--x0", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("witness"), "stderr should point at the witness command: {err}");

    let out = run(&[
        "solve", f.to_str().unwrap(), "--window", "-1", "1", "--x0", "0", "--force",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert!(rows.iter().all(|r| r[1] == 0.0), "forced solution sticks at the zero");
}

#[test]
fn solve_writes_csv_with_an_events_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "m.field", "on (-inf, inf): 0 - sign(x)");
    let target = dir.path().join("run.csv");
    let out = run(&[
        "solve",
        f.to_str().unwrap(),
        "--window",
        "-2",
        "2",
        "--x0",
        "1",
        "--t-end",
        "2",
        "--dt-out",
        "0.5",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    assert!(target.exists());
    let events: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.events.json")).unwrap())
            .unwrap();
    let kinds: Vec<&str> =
        events.as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["arrival-at-zero", "stick"]);
}

#[test]
fn solve_json_carries_samples_and_events_in_one_document() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "m.field", "on (-inf, inf): 0 - sign(x)");
    let out = run(&[
        "solve",
        f.to_str().unwrap(),
        "--window",
        "-2",
        "2",
        "--x0",
        "1",
        "--t-end",
        "2",
        "--dt-out",
        "0.5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["samples"][0][1], 1.0);
    assert_eq!(doc["events"][0]["kind"], "arrival-at-zero");
    assert_eq!(doc["meta"]["method"], "filippov-exact");
}

#[test]
fn witness_emits_the_escape_family_and_refuses_unique_fields() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "e.field", "on (-inf, inf): abs(x)^0.5");
    let out = run(&[
        "witness",
        f.to_str().unwrap(),
        "--window",
        "-2",
        "2",
        "--x0",
        "0",
        "--t-end",
        "1.5",
        "--count",
        "3",
        "--dt-out",
        "0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.5);
    assert_eq!(last[1], 0.0);
    assert!((last[2] - 0.25).abs() < 1e-9, "X_half at 1.5: {}", last[2]);
    assert!((last[3] - 0.0625).abs() < 1e-9, "X_one at 1.5: {}", last[3]);

    let u = write_field(dir.path(), "u.field", "on (-inf, inf): 1 + abs(x)^0.5");
    let out = run(&[
        "witness", u.to_str().unwrap(), "--window", "-2", "2", "--x0", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("no witnesses exist"));
}

#[test]
fn witness_on_a_fat_jump_segment_takes_the_two_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(
        dir.path(),
        "d.field",
        "dense on [0, 1]: {1, 2} measure builtin-fat-cantor; on (-inf, 0): 1; on (1, inf): 2",
    );
    let out = run(&[
        "witness",
        f.to_str().unwrap(),
        "--window",
        "-1",
        "2",
        "--t-end",
        "0.5",
        "--count",
        "2",
        "--dt-out",
        "0.125",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ws = doc["witnesses"].as_array().unwrap();
    assert_eq!(ws.len(), 2);
    // slopes 1 and 2 from the segment's left edge
    assert_eq!(ws[0]["samples"][2][1], 0.25);
    assert_eq!(ws[1]["samples"][2][1], 0.5);
}

#[test]
fn envelope_includes_breakpoints_as_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "s.field", "on (-inf, inf): sign(x)");
    let out = run(&["envelope", f.to_str().unwrap(), "--window", "-1", "1", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert!(rows.contains(&vec![0.0, -1.0, 1.0]), "{rows:?}");
}

#[test]
fn oracle_funnel_covers_the_repelling_cone() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "s.field", "on (-inf, inf): sign(x)");
    let out = run(&[
        "oracle",
        f.to_str().unwrap(),
        "--window",
        "-2",
        "2",
        "--x0",
        "0",
        "--t-end",
        "1",
        "--oracle-dt",
        "0.125",
        "--oracle-dx",
        "0.125",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.0);
    assert!((last[1] + 1.0).abs() < 1e-12 && (last[2] - 1.0).abs() < 1e-12, "{last:?}");
}
