//! Travel times along the flow.
//!
//! A `Leg` is one traversal of (part of) a span. Its speed is positive in
//! the interior; what happens at the two endpoints is classified
//! symbolically into a `Head`, so that an arrival at a zero is either
//! integrated in closed form, transformed into a regular integral, or
//! certified divergent by the reciprocal-integral rule rather than by
//! numeric overflow. `LegFlow` accumulates a knot table of cumulative
//! times over the leg and inverts it for sampling.

use std::sync::Arc;

use serde::Serialize;

use crate::dsl::{signed_form, Expr, Side, SignedForm};
use crate::envelope::zero_set;
use crate::field::{Field, MeasureOracle, SpanBody};
use crate::uniqueness::reciprocal_integral_diverges;

use super::quad;
use super::FlowError;

/// Signed travel time between two points of the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeOfFlight {
    Finite { value: f64, error: f64 },
    PlusInfinity,
    Inconclusive,
}

impl TimeOfFlight {
    pub fn finite(&self) -> Option<f64> {
        match self {
            TimeOfFlight::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

pub(crate) const TOL_PIECE: f64 = 1e-12;
const TOL_MEASURE_REL: f64 = 1e-13;

/// Endpoint behavior of a leg's speed, in the distance variable z >= 0
/// measured from that endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Head {
    /// Speed bounded away from zero; plain quadrature suffices.
    Regular,
    /// Speed identically zero along the ray.
    Plateau,
    /// Reciprocal integral certified divergent from the leading form.
    Divergent,
    /// Exact power speed c z^alpha, alpha < 1: closed-form time.
    ClosedPow { c: f64, alpha: f64 },
    /// Leading power alpha < 1: substitution z = u^{1/(1-alpha)} makes the
    /// transformed integrand bounded.
    Subst { alpha: f64 },
    /// alpha == 1 with beta > 1: convergent but only logarithmically;
    /// shells plus an analytic tail from the form.
    LogTail { c: f64, beta: f64 },
    /// Nothing symbolic; puncture the endpoint and watch the partial
    /// integrals. Never certifies divergence.
    Probe,
}

impl Head {
    fn is_regular(&self) -> bool {
        matches!(self, Head::Regular)
    }
}

#[derive(Clone)]
pub(crate) enum LegBody {
    Expr(Expr),
    Dense {
        v1: f64,
        v2: f64,
        oracle: Arc<dyn MeasureOracle>,
    },
}

#[derive(Clone)]
pub(crate) struct Leg {
    pub from: f64,
    pub to: f64,
    pub dir: f64,
    pub len: f64,
    /// Sign of the field along the leg; 0.0 marks a plateau.
    pub sigma: f64,
    body: LegBody,
    start: Head,
    end: Head,
}

fn probe_sign(e: &Expr, from: f64, dir: f64, len: f64) -> Result<f64, FlowError> {
    let mut sign = 0.0;
    let mut saw_zero = false;
    for q in [0.5, 0.25, 0.75, 0.125, 0.875, 0.0625, 0.9375] {
        let x = from + dir * q * len;
        match e.eval(x) {
            Ok(v) if v > 0.0 => {
                if sign < 0.0 {
                    return Err(FlowError::InteriorZero { x, a: from, b: from + dir * len });
                }
                sign = 1.0;
            }
            Ok(v) if v < 0.0 => {
                if sign > 0.0 {
                    return Err(FlowError::InteriorZero { x, a: from, b: from + dir * len });
                }
                sign = -1.0;
            }
            Ok(_) => saw_zero = true,
            Err(_) => {}
        }
    }
    if sign != 0.0 {
        Ok(sign)
    } else if saw_zero {
        Ok(0.0)
    } else {
        Err(FlowError::Unresolved { a: from, b: from + dir * len })
    }
}

/// Classify the endpoint `p` of a leg whose (sign-corrected) expression is
/// `es`, approached from `side` relative to `p`.
fn classify_end(es: &Expr, p: f64, side: Side, len: f64) -> Head {
    match signed_form(es, p, side) {
        SignedForm::Zero => Head::Plateau,
        SignedForm::Lead { c, alpha, beta, exact } => {
            if c <= 0.0 {
                Head::Probe
            } else if alpha == 0.0 && beta >= 0.0 {
                Head::Regular
            } else if reciprocal_integral_diverges(alpha, beta) {
                Head::Divergent
            } else if exact && beta == 0.0 {
                Head::ClosedPow { c, alpha }
            } else if alpha == 1.0 {
                Head::LogTail { c, beta }
            } else {
                Head::Subst { alpha }
            }
        }
        SignedForm::Unknown => {
            let s = side.sign();
            let mut vals = [0.0f64; 3];
            for (i, k) in [10i32, 20, 30].iter().enumerate() {
                match es.eval(p + s * len * (2f64).powi(-k)) {
                    Ok(v) if v.is_finite() && v > 0.0 => vals[i] = v,
                    _ => return Head::Probe,
                }
            }
            let mx = vals.iter().cloned().fold(f64::MIN, f64::max);
            let mn = vals.iter().cloned().fold(f64::MAX, f64::min);
            if mx / mn < 8.0 {
                Head::Regular
            } else {
                Head::Probe
            }
        }
    }
}

/// A zero endpoint found by root search carries a few ulps of slop, which
/// blinds the symbolic classifier (it sees a tiny constant lead). When the
/// endpoint classifies as `Probe`, nearby round coordinates are tried; the
/// first one that classifies definitely and plausibly sits on a zero
/// becomes the leg endpoint.
fn reanchor(field: &Field, es: &Expr, p: f64, side: Side, len: f64) -> (f64, Head) {
    let h = classify_end(es, p, side, len);
    if !matches!(h, Head::Probe) {
        return (p, h);
    }
    let snap = 16.0 * field.window().resolution();
    let scale_v = es
        .eval(p + side.sign() * 0.5 * len)
        .map(f64::abs)
        .unwrap_or(1.0)
        .max(1e-12);
    for k in 0..=12 {
        let m = 10f64.powi(k);
        let cand = (p * m).round() / m;
        if cand == p || (cand - p).abs() > snap {
            continue;
        }
        let plausible = match es.eval(cand) {
            Ok(v) => v.abs() <= 1e-3 * scale_v,
            Err(_) => true,
        };
        if !plausible {
            continue;
        }
        let h2 = classify_end(es, cand, side, len);
        if !matches!(h2, Head::Probe) {
            return (cand, h2);
        }
    }
    (p, h)
}

impl Leg {
    /// A leg from `from` to `to`, both inside one span. With `anchor` set,
    /// a fuzzy zero endpoint may be moved by a few resolutions onto a
    /// cleaner coordinate (the adjusted endpoint is in `self.to`).
    pub(crate) fn new(field: &Field, from: f64, to: f64, anchor: bool) -> Result<Leg, FlowError> {
        let dir = if to > from { 1.0 } else { -1.0 };
        let len = (to - from).abs();
        let mid = 0.5 * (from + to);
        let idx = field
            .span_index_at(mid)
            .ok_or(FlowError::OutsideWindow { x: mid })?;
        let span = &field.spans()[idx];
        match &span.body {
            SpanBody::Dense(d) => {
                let (v1, v2) = d.values;
                if v1 * v2 <= 0.0 {
                    return Err(FlowError::InteriorZero { x: mid, a: from, b: to });
                }
                Ok(Leg {
                    from,
                    to,
                    dir,
                    len,
                    sigma: v1.signum(),
                    body: LegBody::Dense { v1, v2, oracle: d.oracle.clone() },
                    start: Head::Regular,
                    end: Head::Regular,
                })
            }
            SpanBody::Expr(e) => {
                let sigma = probe_sign(e, from, dir, len)?;
                if sigma == 0.0 {
                    return Ok(Leg {
                        from,
                        to,
                        dir,
                        len,
                        sigma,
                        body: LegBody::Expr(e.clone()),
                        start: Head::Plateau,
                        end: Head::Plateau,
                    });
                }
                let es = if sigma > 0.0 {
                    e.clone()
                } else {
                    Expr::Neg(Box::new(e.clone()))
                };
                let start_side = if dir > 0.0 { Side::Right } else { Side::Left };
                let end_side = start_side.opposite();
                let start = classify_end(&es, from, start_side, len);
                let (to, end) = if anchor {
                    reanchor(field, &es, to, end_side, len)
                } else {
                    (to, classify_end(&es, to, end_side, len))
                };
                let len = (to - from).abs();
                if len == 0.0 {
                    return Err(FlowError::Unresolved { a: from, b: to });
                }
                Ok(Leg {
                    from,
                    to,
                    dir,
                    len,
                    sigma,
                    body: LegBody::Expr(es),
                    start,
                    end,
                })
            }
        }
    }

    /// Positive speed at distance `s` from `from`; NaN where undefined.
    /// Only meaningful for expression legs.
    fn speed(&self, s: f64) -> f64 {
        match &self.body {
            LegBody::Expr(es) => match es.eval(self.from + self.dir * s) {
                Ok(v) => v,
                Err(_) => f64::NAN,
            },
            LegBody::Dense { .. } => f64::NAN,
        }
    }

    /// Time to traverse distances `[s_a, s_b]`, 0 <= s_a < s_b <= len.
    pub(crate) fn segment_time(&self, s_a: f64, s_b: f64, tol: f64) -> TimeOfFlight {
        if s_b <= s_a {
            return TimeOfFlight::Finite { value: 0.0, error: 0.0 };
        }
        match &self.body {
            LegBody::Dense { v1, v2, oracle } => {
                let x_a = self.from + self.dir * s_a;
                let x_b = self.from + self.dir * s_b;
                let (lo, hi) = if x_a < x_b { (x_a, x_b) } else { (x_b, x_a) };
                let d = s_b - s_a;
                let tol_m = TOL_MEASURE_REL * d + 1e-300;
                let mu = oracle.measure(lo, hi, tol_m).clamp(0.0, d);
                let w1 = self.sigma * v1;
                let w2 = self.sigma * v2;
                let value = mu / w1 + (d - mu) / w2;
                let error = tol_m * (1.0 / w1 - 1.0 / w2).abs() + 1e-15 * value.abs();
                TimeOfFlight::Finite { value, error }
            }
            LegBody::Expr(_) => {
                if self.sigma == 0.0 {
                    return TimeOfFlight::PlusInfinity;
                }
                let zone = self.len / 16.0;
                if s_b <= zone && !self.start.is_regular() {
                    let w = |z: f64| self.speed(z);
                    head_time(&self.start, &w, s_a, s_b, tol)
                } else if s_a >= self.len - zone && !self.end.is_regular() {
                    let w = |z: f64| self.speed(self.len - z);
                    head_time(&self.end, &w, self.len - s_b, self.len - s_a, tol)
                } else {
                    let w = |s: f64| self.speed(s);
                    plain_quad(&w, s_a, s_b, tol)
                }
            }
        }
    }

    fn singular_start(&self) -> bool {
        !self.start.is_regular()
    }

    fn singular_end(&self) -> bool {
        !self.end.is_regular()
    }
}

fn plain_quad(w: &dyn Fn(f64) -> f64, z_lo: f64, z_hi: f64, tol: f64) -> TimeOfFlight {
    match quad::integrate(&|z| 1.0 / w(z), z_lo, z_hi, tol) {
        Some(r) => TimeOfFlight::Finite { value: r.value, error: r.error },
        None => TimeOfFlight::Inconclusive,
    }
}

/// Time spent over distances `[z_lo, z_hi]` from a singular endpoint with
/// speed `w(z)`.
fn head_time(head: &Head, w: &dyn Fn(f64) -> f64, z_lo: f64, z_hi: f64, tol: f64) -> TimeOfFlight {
    match head {
        Head::Plateau => TimeOfFlight::PlusInfinity,
        Head::ClosedPow { c, alpha } => {
            let a1 = 1.0 - alpha;
            let value = (z_hi.powf(a1) - z_lo.powf(a1)) / (c * a1);
            TimeOfFlight::Finite { value, error: 1e-15 * value.abs() }
        }
        Head::Divergent => {
            if z_lo == 0.0 {
                TimeOfFlight::PlusInfinity
            } else {
                plain_quad(w, z_lo, z_hi, tol)
            }
        }
        Head::Regular => plain_quad(w, z_lo, z_hi, tol),
        Head::Subst { alpha } => {
            if z_lo > 0.0 {
                return plain_quad(w, z_lo, z_hi, tol);
            }
            let p = 1.0 / (1.0 - alpha);
            let ub = z_hi.powf(1.0 / p);
            let g = |u: f64| p * u.powf(p - 1.0) / w(u.powf(p));
            match quad::integrate(&g, 0.0, ub, tol) {
                Some(r) => TimeOfFlight::Finite { value: r.value, error: r.error },
                None => TimeOfFlight::Inconclusive,
            }
        }
        Head::LogTail { c, beta } => {
            if z_lo > 0.0 {
                return plain_quad(w, z_lo, z_hi, tol);
            }
            let zc = z_hi * (2f64).powi(-40);
            let lt = -zc.ln();
            let tail = lt.powf(1.0 - beta) / (c * (beta - 1.0));
            // error bar from how far the speed sits from its model at the cut
            let model = c * zc * lt.powf(*beta);
            let wm = w(zc);
            let delta = if wm.is_finite() && wm > 0.0 && model > 0.0 {
                (wm / model - 1.0).abs()
            } else {
                0.5
            };
            match plain_quad(w, zc, z_hi, tol) {
                TimeOfFlight::Finite { value, error } => TimeOfFlight::Finite {
                    value: value + tail,
                    error: error + (2.0 * delta + 0.01) * tail.abs(),
                },
                other => other,
            }
        }
        Head::Probe => {
            if z_lo > 0.0 {
                return plain_quad(w, z_lo, z_hi, tol);
            }
            let mut zc = z_hi * 0.25;
            let mut acc = match quad::integrate(&|z| 1.0 / w(z), zc, z_hi, tol) {
                Some(r) => r,
                None => return TimeOfFlight::Inconclusive,
            };
            for _ in 0..18 {
                let nz = zc * 0.25;
                let piece = match quad::integrate(&|z| 1.0 / w(z), nz, zc, tol) {
                    Some(r) => r,
                    None => return TimeOfFlight::Inconclusive,
                };
                acc.value += piece.value;
                acc.error += piece.error;
                zc = nz;
                if piece.value.abs() < tol {
                    // shells shrink geometrically for any integrable power;
                    // bound the rest by a few more of the last one
                    return TimeOfFlight::Finite {
                        value: acc.value,
                        error: acc.error + 4.0 * piece.value.abs(),
                    };
                }
            }
            TimeOfFlight::Inconclusive
        }
    }
}

/// Whether a leg finishes within the time cap, and the knot table to
/// invert time into distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LegTotal {
    Within { t: f64, err: f64 },
    Beyond,
    Unknown,
}

pub(crate) struct LegFlow {
    pub leg: Leg,
    knots_s: Vec<f64>,
    knots_t: Vec<f64>,
    complete: bool,
    pub total: LegTotal,
}

impl LegFlow {
    pub(crate) fn build(leg: Leg, cap: f64, tol: f64) -> LegFlow {
        if let LegBody::Dense { .. } = &leg.body {
            let total_t = leg.segment_time(0.0, leg.len, tol);
            let (knots_s, knots_t, complete, total) = match total_t {
                TimeOfFlight::Finite { value, error } => {
                    if value <= cap {
                        (vec![0.0, leg.len], vec![0.0, value], true, LegTotal::Within { t: value, err: error })
                    } else {
                        (vec![0.0, leg.len], vec![0.0, value], true, LegTotal::Beyond)
                    }
                }
                _ => (vec![0.0], vec![0.0], false, LegTotal::Unknown),
            };
            return LegFlow { leg, knots_s, knots_t, complete, total };
        }

        let len = leg.len;
        let mut ks: Vec<f64> = (0..=8).map(|i| len * i as f64 / 8.0).collect();
        if leg.singular_start() {
            for k in 4..=52 {
                ks.push(len * (2f64).powi(-k));
            }
        }
        if leg.singular_end() {
            for k in 4..=52 {
                ks.push(len - len * (2f64).powi(-k));
            }
        }
        ks.sort_by(f64::total_cmp);
        let mut knots_s = vec![0.0];
        for &s in &ks {
            if s - knots_s.last().unwrap() > 1e-14 * len {
                knots_s.push(s);
            }
        }
        if *knots_s.last().unwrap() < len {
            knots_s.push(len);
        }

        let mut knots_t = vec![0.0];
        let mut err = 0.0;
        let mut status = None;
        for i in 1..knots_s.len() {
            match leg.segment_time(knots_s[i - 1], knots_s[i], tol) {
                TimeOfFlight::Finite { value, error } => {
                    let t = knots_t.last().unwrap() + value.max(0.0);
                    knots_t.push(t);
                    err += error;
                    if t > cap {
                        status = Some(LegTotal::Beyond);
                        break;
                    }
                }
                TimeOfFlight::PlusInfinity => {
                    status = Some(LegTotal::Beyond);
                    break;
                }
                TimeOfFlight::Inconclusive => {
                    status = Some(LegTotal::Unknown);
                    break;
                }
            }
        }
        knots_s.truncate(knots_t.len());
        let complete = status.is_none();
        let total = match status {
            Some(s) => s,
            None => LegTotal::Within { t: *knots_t.last().unwrap(), err },
        };
        LegFlow { leg, knots_s, knots_t, complete, total }
    }

    /// Distance along the leg after positive time `tau`. Beyond the built
    /// table the position clamps (asymptotic approach or truncation).
    pub(crate) fn position_at(&self, tau: f64, tol_x: f64) -> f64 {
        let tl = *self.knots_t.last().unwrap();
        if tau <= 0.0 {
            return 0.0;
        }
        if tau >= tl {
            return if self.complete { self.leg.len } else { *self.knots_s.last().unwrap() };
        }
        let i = match self.knots_t.partition_point(|&t| t <= tau) {
            0 => 0,
            n => n - 1,
        };
        let (s0, s1) = (self.knots_s[i], self.knots_s[i + 1]);
        let (t0, t1) = (self.knots_t[i], self.knots_t[i + 1]);
        if t1 <= t0 {
            return s1;
        }
        let want = tau - t0;
        // monotone bisection against the same panel integrator the table
        // was built with
        let (mut lo, mut hi) = (s0, s1);
        for _ in 0..64 {
            if hi - lo <= tol_x {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let t_mid = match self.leg.segment_time(s0, mid, TOL_PIECE) {
                TimeOfFlight::Finite { value, .. } => value,
                _ => break,
            };
            if t_mid < want {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut s = 0.5 * (lo + hi);
        // Newton polish: dT/ds is the reciprocal speed, so two corrections
        // take the bisection result to machine accuracy wherever the speed
        // is regular
        for _ in 0..2 {
            let w = self.leg.speed(s);
            if !w.is_finite() || w <= 0.0 {
                break;
            }
            let t_s = match self.leg.segment_time(s0, s, TOL_PIECE) {
                TimeOfFlight::Finite { value, .. } => value,
                _ => break,
            };
            let next = s - (t_s - want) * w;
            if !next.is_finite() || next < s0 || next > s1 {
                break;
            }
            s = next;
        }
        s
    }
}

/// Signed travel time of the flow from `a` to `b_pt`: the reciprocal-speed
/// integral over the ordered interval assembled span by span, with dense
/// spans contributing through their set measure and singular endpoints
/// handled by the head classification. `PlusInfinity` is only ever
/// certified symbolically. Fails on zeros of the envelope strictly between
/// the two points.
pub fn time_of_flight(field: &Field, a: f64, b_pt: f64) -> Result<TimeOfFlight, FlowError> {
    let win = field.window();
    if !win.contains(a) {
        return Err(FlowError::OutsideWindow { x: a });
    }
    if !win.contains(b_pt) {
        return Err(FlowError::OutsideWindow { x: b_pt });
    }
    if a == b_pt {
        return Ok(TimeOfFlight::Finite { value: 0.0, error: 0.0 });
    }
    let (lo, hi) = if a < b_pt { (a, b_pt) } else { (b_pt, a) };
    let slack = 8.0 * win.resolution();
    for r in zero_set(field) {
        let olo = r.lo.max(lo);
        let ohi = r.hi.min(hi);
        if olo > ohi {
            continue;
        }
        if olo < hi - slack && ohi > lo + slack {
            return Err(FlowError::InteriorZero { x: 0.5 * (olo + ohi), a, b: b_pt });
        }
    }
    let dir = if b_pt > a { 1.0 } else { -1.0 };
    let mut value = 0.0;
    let mut error = 0.0;
    let mut infinite = false;
    let mut unresolved = false;
    for span in field.spans() {
        let olo = span.lo.max(lo);
        let ohi = span.hi.min(hi);
        if ohi <= olo {
            continue;
        }
        let (from, to) = if dir > 0.0 { (olo, ohi) } else { (ohi, olo) };
        let leg = Leg::new(field, from, to, false)?;
        let lf = LegFlow::build(leg, f64::INFINITY, TOL_PIECE);
        match lf.total {
            LegTotal::Within { t, err } => {
                value += lf.leg.dir * lf.leg.sigma * t;
                error += err;
            }
            LegTotal::Beyond => infinite = true,
            LegTotal::Unknown => unresolved = true,
        }
    }
    if infinite {
        Ok(TimeOfFlight::PlusInfinity)
    } else if unresolved {
        Ok(TimeOfFlight::Inconclusive)
    } else {
        Ok(TimeOfFlight::Finite { value, error })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_field;
    use crate::field::{build_field, Window};

    fn field(src: &str, lo: f64, hi: f64) -> Field {
        let spec = parse_field(src).unwrap();
        build_field(&spec, Window::new(lo, hi)).unwrap()
    }

    #[test]
    fn constant_speed_is_distance_over_speed() {
        let f = field("on [0, 2]: 1", 0.0, 2.0);
        match time_of_flight(&f, 0.0, 2.0).unwrap() {
            TimeOfFlight::Finite { value, .. } => assert!((value - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        // reversed query gives the signed integral
        match time_of_flight(&f, 2.0, 0.0).unwrap() {
            TimeOfFlight::Finite { value, .. } => assert!((value + 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn leaving_a_linear_zero_is_certified_divergent() {
        let f = field("on [-1, 1]: x", -1.0, 1.0);
        assert_eq!(time_of_flight(&f, 0.0, 1.0).unwrap(), TimeOfFlight::PlusInfinity);
    }

    #[test]
    fn regular_modulus_speed_matches_the_antiderivative() {
        // speed 1 + sqrt(y): d/dy [2 sqrt(y) - 2 log(1 + sqrt(y))] = 1/(1+sqrt(y))
        let f = field("on [-2, 2]: 1 + abs(x)^0.5", -2.0, 2.0);
        let want = 2.0 - 2.0 * (2f64).ln();
        match time_of_flight(&f, 0.0, 1.0).unwrap() {
            TimeOfFlight::Finite { value, error } => {
                assert!((value - want).abs() < 1e-9, "{value} vs {want}");
                assert!(error < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_root_speed_uses_the_closed_form() {
        let f = field("on [-1, 1]: abs(x)^0.5", -1.0, 1.0);
        match time_of_flight(&f, 0.0, 0.04).unwrap() {
            TimeOfFlight::Finite { value, error } => {
                assert!((value - 0.4).abs() < 1e-12, "{value}");
                assert!(error < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interior_zero_is_rejected() {
        let f = field("on [-1, 1]: x", -1.0, 1.0);
        assert!(matches!(
            time_of_flight(&f, -0.5, 0.5),
            Err(FlowError::InteriorZero { .. })
        ));
    }

    #[test]
    fn dense_time_weights_the_two_speeds_by_measure() {
        let f = field(
            "on [-1, 0): 1; dense on [0, 1): {1, 2} measure builtin-fat-cantor; on [1, 2]: 2",
            -1.0,
            2.0,
        );
        let mu = f
            .dense_spans()
            .next()
            .map(|(lo, hi, d)| d.oracle.measure(lo, hi, 1e-13))
            .unwrap();
        let want = mu / 1.0 + (1.0 - mu) / 2.0;
        match time_of_flight(&f, 0.0, 1.0).unwrap() {
            TimeOfFlight::Finite { value, .. } => {
                assert!((value - want).abs() < 1e-9, "{value} vs {want}")
            }
            other => panic!("{other:?}"),
        }
    }
}
