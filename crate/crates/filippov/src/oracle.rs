//! Brute-force validation machinery, independent of the travel-time
//! solver by design: interval funnels over-approximate the reachable set,
//! explicit Euler selections under-approximate it, and a pointwise check
//! confirms that a trajectory's difference quotients stay inside the
//! velocity hull. Agreement with the solver is evidence precisely because
//! nothing here shares its code.

use serde::Serialize;

use crate::dsl::render;
use crate::envelope::{envelope, envelope_hull};
use crate::field::{Field, FieldEvalError};
use crate::flow::{Event, EventKind, MethodTag, Trajectory, TrajectoryMeta};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("reachable interval left the window at t = {t}")]
    WindowExceeded { t: f64 },
    #[error("{0}")]
    BadInput(String),
    #[error("no single-valued field value at x = {x}; use an envelope rule inside dense segments")]
    AeValueUnavailable { x: f64 },
    #[error("trajectory grid does not advance at t = {t}")]
    DegenerateGrid { t: f64 },
}

/// Interval tube containing every solution's value at each grid time.
/// Built by pure interval propagation: no tolerance is added anywhere, so
/// enclosure of true solutions holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Funnel {
    pub times: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub dt: f64,
    pub dx: f64,
}

impl Funnel {
    pub fn end_width(&self) -> f64 {
        self.intervals.last().map(|&(lo, hi)| hi - lo).unwrap_or(0.0)
    }

    /// Whether `x` lies inside the tube at time `t`, up to `slack` for the
    /// sample's own numerical error. Between grid times the hull of the
    /// bracketing intervals is the sound bound, since propagation is
    /// linear within a step.
    pub fn encloses(&self, t: f64, x: f64, slack: f64) -> bool {
        let n = self.times.len();
        if n == 0 || t < self.times[0] || t > self.times[n - 1] {
            return false;
        }
        let i = match self.times.partition_point(|&tk| tk <= t) {
            0 => 0,
            k => k - 1,
        };
        let (mut lo, mut hi) = self.intervals[i];
        if i + 1 < n && self.times[i] < t {
            let (l2, h2) = self.intervals[i + 1];
            lo = lo.min(l2);
            hi = hi.max(h2);
        }
        lo - slack <= x && x <= hi + slack
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,lo,hi\n");
        for (k, &t) in self.times.iter().enumerate() {
            let (lo, hi) = self.intervals[k];
            out.push_str(&format!("{t},{lo},{hi}\n"));
        }
        out
    }
}

fn check_resolution(dt: f64, t_end: f64) -> Result<(), OracleError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(OracleError::BadInput(format!("dt = {dt} must be positive")));
    }
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(OracleError::BadInput(format!(
            "t_end = {t_end} must be finite and nonnegative"
        )));
    }
    Ok(())
}

/// Propagate the reachable interval forward: each step moves the lower
/// edge by the least lower-envelope value over the dx-inflated interval
/// and the upper edge by the greatest upper-envelope value, both bounded
/// by interval arithmetic per piece. Dense segments contribute their
/// value hull.
pub fn reachable_funnel(
    field: &Field,
    x0: f64,
    t_end: f64,
    dt: f64,
    dx: f64,
) -> Result<Funnel, OracleError> {
    let win = field.window();
    if !win.contains(x0) {
        return Err(OracleError::BadInput(format!("x0 = {x0} is outside the window")));
    }
    check_resolution(dt, t_end)?;
    if !dx.is_finite() || dx < 0.0 {
        return Err(OracleError::BadInput(format!("dx = {dx} must be nonnegative")));
    }
    let mut times = vec![0.0];
    let mut intervals = vec![(x0, x0)];
    let (mut lo, mut hi) = (x0, x0);
    let mut k = 0u64;
    loop {
        let t_prev = times[times.len() - 1];
        if t_prev >= t_end {
            break;
        }
        k += 1;
        let t = (k as f64 * dt).min(t_end);
        let h = t - t_prev;
        if h <= 0.0 {
            break;
        }
        let look = envelope_hull(field, win.clamp(lo - dx), win.clamp(hi + dx));
        lo += h * look.lo;
        hi += h * look.hi;
        if lo < win.lo || hi > win.hi {
            return Err(OracleError::WindowExceeded { t });
        }
        times.push(t);
        intervals.push((lo, hi));
    }
    Ok(Funnel { times, intervals, dt, dx })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionRule {
    MinEnvelope,
    MaxEnvelope,
    AeValue,
}

/// Forward Euler under an explicit selection of the inclusion: the lower
/// envelope, the upper envelope, or the literal piece value. Truncates
/// with a window-exit event if a step would leave the window.
pub fn euler_selection(
    field: &Field,
    rule: SelectionRule,
    x0: f64,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory, OracleError> {
    let win = field.window();
    if !win.contains(x0) {
        return Err(OracleError::BadInput(format!("x0 = {x0} is outside the window")));
    }
    check_resolution(dt, t_end)?;
    let meta = TrajectoryMeta { x0, field: render(field.spec()), method: MethodTag::Witness };
    let mut samples = vec![(0.0, x0)];
    let mut events = Vec::new();
    let mut x = x0;
    let mut k = 0u64;
    loop {
        let t_prev = samples[samples.len() - 1].0;
        if t_prev >= t_end {
            break;
        }
        k += 1;
        let t = (k as f64 * dt).min(t_end);
        let h = t - t_prev;
        if h <= 0.0 {
            break;
        }
        let s = match rule {
            SelectionRule::MinEnvelope => envelope(field, x).map(|e| e.lo),
            SelectionRule::MaxEnvelope => envelope(field, x).map(|e| e.hi),
            SelectionRule::AeValue => match field.value_ae(x) {
                Ok(v) => Some(v),
                Err(FieldEvalError::TwoValued { x }) => {
                    return Err(OracleError::AeValueUnavailable { x })
                }
                Err(_) => None,
            },
        };
        let Some(s) = s else {
            return Err(OracleError::BadInput(format!("no usable velocity at x = {x}")));
        };
        let next = x + h * s;
        if !win.contains(next) {
            events.push(Event { t, kind: EventKind::WindowExit, x: win.clamp(next) });
            break;
        }
        x = next;
        samples.push((t, x));
    }
    Ok(Trajectory { samples, events, meta })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// (midpoint time, distance of the difference quotient from the
    /// velocity hull) for every step that lands outside it.
    pub violations: Vec<(f64, f64)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check each adjacent sample pair's difference quotient against the hull
/// of envelope values along the spanned segment, inflated by `tol`.
pub fn validate_trajectory(
    field: &Field,
    traj: &Trajectory,
    tol: f64,
) -> Result<ValidationReport, OracleError> {
    let mut violations = Vec::new();
    for w in traj.samples.windows(2) {
        let (t0, x0) = w[0];
        let (t1, x1) = w[1];
        if t1 <= t0 {
            return Err(OracleError::DegenerateGrid { t: t1 });
        }
        let q = (x1 - x0) / (t1 - t0);
        let hull = envelope_hull(field, x0, x1);
        let gap = if q < hull.lo {
            hull.lo - q
        } else if q > hull.hi {
            q - hull.hi
        } else {
            0.0
        };
        if gap > tol {
            violations.push((0.5 * (t0 + t1), gap));
        }
    }
    Ok(ValidationReport { violations })
}
