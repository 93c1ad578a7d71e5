//! Event-driven integration of the flow.
//!
//! There is no time stepping anywhere: a trajectory is a chain of legs, one
//! per span section, each solved by inverting its cumulative travel time.
//! Arrivals at envelope zeros in finite time stick there; divergent
//! approaches saturate asymptotically; breakpoint crossings, arrivals, and
//! window exits are reported as events alongside the samples.

mod quad;
mod tof;

pub use tof::{time_of_flight, TimeOfFlight};

use serde::Serialize;

use crate::dsl::{render, Side};
use crate::envelope::{envelope, zero_set, ZeroRegion};
use crate::field::{Field, FieldEvalError};
use crate::uniqueness::{
    check_condition_a, check_condition_b, uniqueness_verdict, ConditionA, OsgoodStatus,
    UniquenessStatus,
};

use tof::{Leg, LegFlow, LegTotal, TOL_PIECE};

#[derive(Debug, thiserror::Error)]
pub enum FlowError {
    #[error("x = {x} is outside the window")]
    OutsideWindow { x: f64 },
    #[error("{0}")]
    BadInput(String),
    #[error("uniqueness verdict on the reachable window is {status:?}; pass force to integrate the sticking solution anyway")]
    NotUnique { status: UniquenessStatus },
    #[error("the envelope vanishes at x = {x}, strictly between {a} and {b}")]
    InteriorZero { x: f64, a: f64, b: f64 },
    #[error("could not resolve the flow between {a} and {b}")]
    Unresolved { a: f64, b: f64 },
    #[error("no certified escape at x0 = {x0}: witnesses do not exist there")]
    ConditionBHolds { x0: f64 },
    #[error("escape condition not certified to hold at x = {point}; no canonical selection")]
    SelectionUnavailable { point: f64 },
    #[error("no one-signed dense segment witnesses a fat jump set")]
    NoFatJumpSegment,
    #[error("x0 = {x0} is outside the dense segment [{lo}, {hi})")]
    OutsideSegment { x0: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodTag {
    FilippovExact,
    ClassicalSelected,
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    BreakpointCrossing,
    ArrivalAtZero,
    Stick,
    WindowExit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub x0: f64,
    pub field: String,
    pub method: MethodTag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// (t, x) pairs on the requested output grid, truncated at a window
    /// exit. Time is strictly increasing.
    pub samples: Vec<(f64, f64)>,
    pub events: Vec<Event>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    /// Linear interpolation of the recorded samples.
    pub fn position(&self, t: f64) -> Option<f64> {
        let s = &self.samples;
        if s.is_empty() || t < s[0].0 || t > s[s.len() - 1].0 {
            return None;
        }
        let i = match s.partition_point(|&(ts, _)| ts <= t) {
            0 => 0,
            n => n - 1,
        };
        if i + 1 >= s.len() {
            return Some(s[i].1);
        }
        let (t0, x0) = s[i];
        let (t1, x1) = s[i + 1];
        if t1 <= t0 {
            return Some(x1);
        }
        Some(x0 + (x1 - x0) * (t - t0) / (t1 - t0))
    }
}

fn check_grid(grid: &[f64], t_end: f64) -> Result<(), FlowError> {
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(FlowError::BadInput(format!("t_end = {t_end} must be finite and nonnegative")));
    }
    let mut prev = 0.0;
    for &g in grid {
        if !g.is_finite() || g < 0.0 || g < prev {
            return Err(FlowError::BadInput(
                "output grid must be finite, nonnegative, and nondecreasing".into(),
            ));
        }
        prev = g;
    }
    Ok(())
}

fn span_toward(field: &Field, x: f64, dir: f64) -> Option<usize> {
    let idx = field.span_index_at(x)?;
    if dir < 0.0 && idx > 0 && x <= field.spans()[idx].lo {
        return Some(idx - 1);
    }
    Some(idx)
}

fn next_zero_boundary(regions: &[ZeroRegion], x: f64, dir: f64, res: f64) -> Option<f64> {
    let slack = 4.0 * res;
    if dir > 0.0 {
        regions
            .iter()
            .map(|r| r.lo)
            .filter(|&b| b > x + slack)
            .min_by(f64::total_cmp)
    } else {
        regions
            .iter()
            .map(|r| r.hi)
            .filter(|&b| b < x - slack)
            .max_by(f64::total_cmp)
    }
}

/// The marching core shared by every solver. `depart` forces the initial
/// direction and skips the stick check, letting a trajectory leave a zero
/// through a side whose escape integral converges.
fn integrate_field(
    field: &Field,
    x0: f64,
    t_end: f64,
    grid: &[f64],
    method: MethodTag,
    depart: Option<Side>,
) -> Result<Trajectory, FlowError> {
    let win = field.window();
    if !win.contains(x0) {
        return Err(FlowError::OutsideWindow { x: x0 });
    }
    check_grid(grid, t_end)?;
    let res = win.resolution();
    let tol_x = 1e-12 * win.width();
    let regions = zero_set(field);
    let meta = TrajectoryMeta { x0, field: render(field.spec()), method };
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    let mut events: Vec<Event> = Vec::new();
    let mut gi = 0;
    while gi < grid.len() && grid[gi] <= 0.0 {
        samples.push((grid[gi], x0));
        gi += 1;
    }
    let mut t = 0.0;
    let mut x = x0;

    let dir = match depart {
        Some(side) => side.sign(),
        None => {
            let env = envelope(field, x0).ok_or(FlowError::Unresolved { a: x0, b: x0 })?;
            if env.contains(0.0) {
                events.push(Event { t: 0.0, kind: EventKind::Stick, x: x0 });
                while gi < grid.len() && grid[gi] <= t_end {
                    samples.push((grid[gi], x0));
                    gi += 1;
                }
                return Ok(Trajectory { samples, events, meta });
            }
            if env.lo > 0.0 {
                1.0
            } else {
                -1.0
            }
        }
    };

    loop {
        let si = span_toward(field, x, dir).ok_or(FlowError::OutsideWindow { x })?;
        let span = &field.spans()[si];
        let edge = if dir > 0.0 { span.hi } else { span.lo };
        let (target, at_zero) = match next_zero_boundary(&regions, x, dir, res) {
            Some(z) if (dir > 0.0 && z <= edge) || (dir < 0.0 && z >= edge) => (z, true),
            _ => (edge, false),
        };
        let at_window = !at_zero && (target == win.lo || target == win.hi);

        if target == x {
            if at_window {
                events.push(Event { t, kind: EventKind::WindowExit, x });
                return Ok(Trajectory { samples, events, meta });
            }
            if at_zero {
                events.push(Event { t, kind: EventKind::ArrivalAtZero, x });
                events.push(Event { t, kind: EventKind::Stick, x });
                while gi < grid.len() && grid[gi] <= t_end {
                    samples.push((grid[gi], x));
                    gi += 1;
                }
                return Ok(Trajectory { samples, events, meta });
            }
            return Err(FlowError::Unresolved { a: x, b: target });
        }

        let leg = Leg::new(field, x, target, at_zero)?;
        let cap = (t_end - t) * (1.0 + 1e-12) + 1e-300;
        let lf = LegFlow::build(leg, cap, TOL_PIECE);
        match lf.total {
            LegTotal::Within { t: tl, .. } if t + tl <= t_end => {
                let t1 = t + tl;
                while gi < grid.len() && grid[gi] <= t1 {
                    let s = lf.position_at(grid[gi] - t, tol_x);
                    let xx = if s >= lf.leg.len { lf.leg.to } else { x + dir * s };
                    samples.push((grid[gi], xx));
                    gi += 1;
                }
                t = t1;
                x = lf.leg.to;
                if at_zero {
                    events.push(Event { t, kind: EventKind::ArrivalAtZero, x });
                    events.push(Event { t, kind: EventKind::Stick, x });
                    while gi < grid.len() && grid[gi] <= t_end {
                        samples.push((grid[gi], x));
                        gi += 1;
                    }
                    return Ok(Trajectory { samples, events, meta });
                }
                if at_window {
                    events.push(Event { t, kind: EventKind::WindowExit, x });
                    return Ok(Trajectory { samples, events, meta });
                }
                events.push(Event { t, kind: EventKind::BreakpointCrossing, x });
            }
            LegTotal::Within { .. } | LegTotal::Beyond => {
                while gi < grid.len() && grid[gi] <= t_end {
                    let s = lf.position_at(grid[gi] - t, tol_x);
                    let xx = if s >= lf.leg.len { lf.leg.to } else { x + dir * s };
                    samples.push((grid[gi], xx));
                    gi += 1;
                }
                return Ok(Trajectory { samples, events, meta });
            }
            LegTotal::Unknown => return Err(FlowError::Unresolved { a: x, b: target }),
        }
    }
}

/// Uniqueness status restricted to what the flow can reach from `x0` in
/// time `t_end` (conservatively, speed bound times horizon).
fn reachable_status(field: &Field, x0: f64, t_end: f64) -> UniquenessStatus {
    let v = uniqueness_verdict(field);
    if v.status == UniquenessStatus::Unique {
        return UniquenessStatus::Unique;
    }
    let win = field.window();
    let r = field.range_bound().mag() * t_end;
    let lo = (x0 - r).max(win.lo);
    let hi = (x0 + r).min(win.hi);
    let mut status = UniquenessStatus::Unique;
    match &v.condition_a {
        ConditionA::Holds => {}
        ConditionA::Fails { region } => {
            if region.1 > lo && region.0 < hi {
                return UniquenessStatus::NonUnique;
            }
        }
        ConditionA::Inconclusive { .. } => status = UniquenessStatus::Inconclusive,
    }
    for zc in &v.zero_points_checked {
        if zc.point < lo || zc.point > hi {
            continue;
        }
        match zc.verdict.status {
            OsgoodStatus::NotOsgood => return UniquenessStatus::NonUnique,
            OsgoodStatus::Inconclusive => status = UniquenessStatus::Inconclusive,
            OsgoodStatus::Osgood => {}
        }
    }
    status
}

/// The unique solution through `x0`, sampled on `grid`. Requires a
/// `Unique` verdict on the reachable part of the window unless `force` is
/// set, in which case the maximal-delay solution (stick at every zero) is
/// integrated regardless.
pub fn solve_filippov(
    field: &Field,
    x0: f64,
    t_end: f64,
    grid: &[f64],
    force: bool,
) -> Result<Trajectory, FlowError> {
    if !force {
        match reachable_status(field, x0, t_end) {
            UniquenessStatus::Unique => {}
            status => return Err(FlowError::NotUnique { status }),
        }
    }
    integrate_field(field, x0, t_end, grid, MethodTag::FilippovExact, None)
}

/// The single-valued selection `b~`: zero on the zero set of the envelope,
/// the measure-weighted dense traversal on two-valued spans, the piece
/// value elsewhere. Only exists when every zero is inescapable.
pub struct SelectedField<'a> {
    base: &'a Field,
    zeros: Vec<ZeroRegion>,
}

impl<'a> SelectedField<'a> {
    pub fn base(&self) -> &'a Field {
        self.base
    }

    pub fn zero_regions(&self) -> &[ZeroRegion] {
        &self.zeros
    }

    /// Pointwise selected value. Two-valued spans have no pointwise value
    /// off the zero set.
    pub fn value(&self, x: f64) -> Result<f64, FieldEvalError> {
        if self.zeros.iter().any(|r| r.contains(x)) {
            return Ok(0.0);
        }
        self.base.value_ae(x)
    }
}

pub fn classical_select(field: &Field) -> Result<SelectedField<'_>, FlowError> {
    for zc in check_condition_b(field) {
        if zc.verdict.status != OsgoodStatus::Osgood {
            return Err(FlowError::SelectionUnavailable { point: zc.point });
        }
    }
    Ok(SelectedField { base: field, zeros: zero_set(field) })
}

/// Integrate the selected single-valued field. Same marching core as
/// `solve_filippov`; the selection is what justifies running it when the
/// jump set is fat but every zero still holds.
pub fn solve_classical(
    sf: &SelectedField<'_>,
    x0: f64,
    t_end: f64,
    grid: &[f64],
) -> Result<Trajectory, FlowError> {
    integrate_field(sf.base, x0, t_end, grid, MethodTag::ClassicalSelected, None)
}

fn constant_trajectory(field: &Field, x: f64, t_end: f64, grid: &[f64]) -> Trajectory {
    let samples = grid.iter().filter(|&&tg| tg <= t_end).map(|&tg| (tg, x)).collect();
    Trajectory {
        samples,
        events: vec![Event { t: 0.0, kind: EventKind::Stick, x }],
        meta: TrajectoryMeta { x0: x, field: render(field.spec()), method: MethodTag::Witness },
    }
}

/// Distinct solutions through a zero whose escape integral converges: the
/// constant solution, plus one delayed departure per requested offset.
pub fn witnesses_condition_b(
    field: &Field,
    x0: f64,
    offsets: &[f64],
    t_end: f64,
    grid: &[f64],
) -> Result<Vec<Trajectory>, FlowError> {
    check_grid(grid, t_end)?;
    for &c in offsets {
        if !c.is_finite() || c < 0.0 {
            return Err(FlowError::BadInput(format!("offset {c} must be finite and nonnegative")));
        }
    }
    let res = field.window().resolution();
    let checks = check_condition_b(field);
    let zc = checks
        .iter()
        .find(|zc| zc.region.contains(x0) || (zc.point - x0).abs() <= 8.0 * res)
        .ok_or(FlowError::ConditionBHolds { x0 })?;
    if zc.verdict.status != OsgoodStatus::NotOsgood {
        return Err(FlowError::ConditionBHolds { x0 });
    }

    match zc.verdict.failing_side {
        Some(side) => {
            let z0 = zc.point;
            let mut out = vec![constant_trajectory(field, z0, t_end, grid)];
            for &c in offsets {
                let sub_grid: Vec<f64> =
                    grid.iter().filter(|&&tg| tg > c).map(|&tg| tg - c).collect();
                let esc = integrate_field(
                    field,
                    z0,
                    (t_end - c).max(0.0),
                    &sub_grid,
                    MethodTag::Witness,
                    Some(side),
                )?;
                let mut samples: Vec<(f64, f64)> = grid
                    .iter()
                    .take_while(|&&tg| tg <= c)
                    .map(|&tg| (tg, z0))
                    .collect();
                samples.extend(esc.samples.iter().map(|&(ts, xs)| (ts + c, xs)));
                let mut events = Vec::new();
                if c > 0.0 {
                    events.push(Event { t: 0.0, kind: EventKind::Stick, x: z0 });
                }
                events.extend(esc.events.iter().map(|e| Event { t: e.t + c, ..*e }));
                out.push(Trajectory {
                    samples,
                    events,
                    meta: TrajectoryMeta {
                        x0: z0,
                        field: render(field.spec()),
                        method: MethodTag::Witness,
                    },
                });
            }
            Ok(out)
        }
        None => {
            // straddling two-valued segment: resting is a solution, and so
            // is drifting with the upper selection until the segment ends
            let z0 = if zc.region.contains(x0) { x0 } else { zc.point };
            let seg = field
                .dense_spans()
                .find(|(lo, hi, _)| *lo < zc.region.hi && *hi > zc.region.lo)
                .map(|(lo, hi, d)| (lo, hi, d.values.0.max(d.values.1)));
            let (_, seg_hi, vdrift) = seg.ok_or(FlowError::ConditionBHolds { x0 })?;
            let mut out = vec![constant_trajectory(field, z0, t_end, grid)];
            for &c in offsets {
                let t_edge = c + (seg_hi - z0) / vdrift;
                let samples: Vec<(f64, f64)> = grid
                    .iter()
                    .filter(|&&tg| tg <= t_end)
                    .map(|&tg| {
                        let xx = if tg <= c { z0 } else { (z0 + vdrift * (tg - c)).min(seg_hi) };
                        (tg, xx)
                    })
                    .collect();
                let mut events = vec![Event { t: 0.0, kind: EventKind::Stick, x: z0 }];
                if t_edge <= t_end {
                    events.push(Event { t: t_edge, kind: EventKind::Stick, x: seg_hi });
                }
                out.push(Trajectory {
                    samples,
                    events,
                    meta: TrajectoryMeta {
                        x0: z0,
                        field: render(field.spec()),
                        method: MethodTag::Witness,
                    },
                });
            }
            Ok(out)
        }
    }
}

fn selection_trajectory(
    field: &Field,
    x0: f64,
    slope: f64,
    seg_lo: f64,
    seg_hi: f64,
    t_end: f64,
    grid: &[f64],
) -> Result<Trajectory, FlowError> {
    let (exit_x, t_exit) = if slope > 0.0 {
        (seg_hi, (seg_hi - x0) / slope)
    } else {
        (seg_lo, (seg_lo - x0) / slope)
    };
    let mut samples: Vec<(f64, f64)> = grid
        .iter()
        .filter(|&&tg| tg <= t_exit.min(t_end))
        .map(|&tg| (tg, x0 + slope * tg))
        .collect();
    let mut events = Vec::new();
    let meta =
        TrajectoryMeta { x0, field: render(field.spec()), method: MethodTag::Witness };
    if t_exit > t_end {
        return Ok(Trajectory { samples, events, meta });
    }
    events.push(Event { t: t_exit, kind: EventKind::BreakpointCrossing, x: exit_x });
    let sub_grid: Vec<f64> = grid.iter().filter(|&&tg| tg > t_exit).map(|&tg| tg - t_exit).collect();
    let cont = integrate_field(
        field,
        exit_x,
        t_end - t_exit,
        &sub_grid,
        MethodTag::Witness,
        None,
    )?;
    samples.extend(cont.samples.iter().map(|&(ts, xs)| (ts + t_exit, xs)));
    events.extend(cont.events.iter().map(|e| Event { t: e.t + t_exit, ..*e }));
    Ok(Trajectory { samples, events, meta })
}

fn fat_segment(field: &Field) -> Result<(f64, f64, (f64, f64)), FlowError> {
    let region = match check_condition_a(field) {
        ConditionA::Fails { region } => region,
        _ => return Err(FlowError::NoFatJumpSegment),
    };
    let seg = field
        .dense_spans()
        .find(|(lo, hi, _)| *lo < region.1 && *hi > region.0)
        .map(|(lo, hi, d)| (lo, hi, d.values));
    let (seg_lo, seg_hi, (va, vb)) = seg.ok_or(FlowError::NoFatJumpSegment)?;
    let (v_lo, v_hi) = if va <= vb { (va, vb) } else { (vb, va) };
    Ok((seg_lo, seg_hi, (v_lo, v_hi)))
}

/// The two extreme constant selections through a one-signed dense segment,
/// continued by the ordinary flow once they leave it. `x0` defaults to the
/// left endpoint of the segment.
pub fn witnesses_condition_a(
    field: &Field,
    x0: Option<f64>,
    t_end: f64,
    grid: &[f64],
) -> Result<[Trajectory; 2], FlowError> {
    let pair = witnesses_condition_a_many(field, x0, 2, t_end, grid)?;
    Ok(pair.try_into().expect("two slopes requested"))
}

/// `count` constant selections with evenly spread slopes between the two
/// extremes, each a distinct solution through the same point.
pub fn witnesses_condition_a_many(
    field: &Field,
    x0: Option<f64>,
    count: usize,
    t_end: f64,
    grid: &[f64],
) -> Result<Vec<Trajectory>, FlowError> {
    check_grid(grid, t_end)?;
    let (seg_lo, seg_hi, (v_lo, v_hi)) = fat_segment(field)?;
    let x0 = x0.unwrap_or(seg_lo);
    if !(seg_lo..seg_hi).contains(&x0) {
        return Err(FlowError::OutsideSegment { x0, lo: seg_lo, hi: seg_hi });
    }
    let slopes: Vec<f64> = if count <= 1 {
        vec![v_lo]
    } else {
        (0..count)
            .map(|k| v_lo + (v_hi - v_lo) * k as f64 / (count - 1) as f64)
            .collect()
    };
    slopes
        .into_iter()
        .map(|s| selection_trajectory(field, x0, s, seg_lo, seg_hi, t_end, grid))
        .collect()
}
