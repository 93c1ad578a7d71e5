//! Document shaping: the verdict JSON layout and plot-ready CSV. All
//! numbers print with Rust's shortest round-trip formatting, period as
//! the decimal separator, LF line endings.

use filippov::uniqueness::ZeroCheck;
use filippov::{Trajectory, UniquenessVerdict, ZeroRegion};
use serde_json::{json, Value};

pub fn verdict_document(v: &UniquenessVerdict, zeros: &[ZeroRegion]) -> Value {
    let condition_b: Vec<Value> = v.zero_points_checked.iter().map(b_entry).collect();
    json!({
        "condition_A": v.condition_a,
        "condition_B": condition_b,
        "verdict": v.status,
        "zero_set": zeros,
    })
}

fn b_entry(zc: &ZeroCheck) -> Value {
    // prefer the form on the side the escape goes through
    let local_form = zc
        .verdict
        .evidence
        .iter()
        .find(|ev| Some(ev.side) == zc.verdict.failing_side && ev.form.is_some())
        .or_else(|| zc.verdict.evidence.iter().find(|ev| ev.form.is_some()))
        .and_then(|ev| ev.form.as_ref());
    json!({
        "point": zc.point,
        "status": zc.verdict.status,
        "failing_side": zc.verdict.failing_side,
        "local_form": local_form,
    })
}

pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = String::from("t,x\n");
    for &(t, x) in &tr.samples {
        out.push_str(&format!("{t},{x}\n"));
    }
    out
}

/// One column per witness. Witnesses share the output grid; a trajectory
/// truncated by a window exit leaves its later cells empty.
pub fn witness_csv(ws: &[Trajectory]) -> String {
    let mut out = String::from("t");
    for k in 0..ws.len() {
        out.push_str(&format!(",w{k}"));
    }
    out.push('\n');
    let times: &[(f64, f64)] =
        ws.iter().map(|w| w.samples.as_slice()).max_by_key(|s| s.len()).unwrap_or(&[]);
    for (i, &(t, _)) in times.iter().enumerate() {
        out.push_str(&format!("{t}"));
        for w in ws {
            match w.samples.get(i) {
                Some(&(_, x)) => out.push_str(&format!(",{x}")),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

pub fn envelope_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("x,m,M\n");
    for &(x, m, big_m) in rows {
        out.push_str(&format!("{x},{m},{big_m}\n"));
    }
    out
}

pub fn witness_events(ws: &[Trajectory]) -> Value {
    let map: serde_json::Map<String, Value> =
        ws.iter().enumerate().map(|(k, w)| (format!("w{k}"), json!(w.events))).collect();
    Value::Object(map)
}
