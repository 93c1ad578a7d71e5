//! The set-valued envelope of a field and its zero set.
//!
//! At every point the envelope `K(x) = [lo, hi]` is the hull of the
//! essential one-sided cluster values of the field. It is blind to
//! modifications on null sets: point overrides never enter it, and on a
//! dense two-valued segment it is the hull of both segment velocities.
//! Solutions of the differential inclusion `dX/dt ∈ K(X)` are exactly the
//! limits of classical approximations, so everything downstream (uniqueness
//! verdicts, sticking, funnels) is phrased against `K`.

use crate::dsl::{one_sided_limit_form, Expr, LimitOutcome, Side};
use crate::field::{Field, Span, SpanBody};
use crate::interval::Interval;
use crate::roots::zero_spans;

/// Envelope value `K(x) = [lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Envelope {
    pub lo: f64,
    pub hi: f64,
}

impl Envelope {
    pub fn point(v: f64) -> Envelope {
        Envelope { lo: v, hi: v }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lo, self.hi)
    }

    fn from_interval(iv: Interval) -> Envelope {
        Envelope { lo: iv.lo, hi: iv.hi }
    }
}

/// Certified enclosure of the one-sided essential limit set of `e` at `p`.
///
/// The structural limit engine settles almost every field; when it cannot,
/// geometrically shrinking one-sided shells are evaluated with interval
/// arithmetic until their range contracts below `tol`. A stalled shell
/// sequence returns the hull of the last few shells with margin, which
/// over-approximates the cluster set rather than guessing a point.
pub(crate) fn side_limit(e: &Expr, p: f64, side: Side, scale: f64) -> Interval {
    match one_sided_limit_form(e, p, side) {
        LimitOutcome::Finite(v) => return Interval::point(v),
        LimitOutcome::PlusInfinity => return Interval::new(f64::MAX / 4.0, f64::MAX / 4.0),
        LimitOutcome::MinusInfinity => return Interval::new(-f64::MAX / 4.0, -f64::MAX / 4.0),
        LimitOutcome::Unknown => {}
    }
    let s = side.sign();
    let h0 = (scale / 4.0).min(1e-3).max(1e-12);
    let mut recent: Vec<Interval> = Vec::new();
    for k in 0..46 {
        let h = h0 * (2f64).powi(-k);
        let (a, b) = if s > 0.0 { (p + h / 2.0, p + h) } else { (p - h, p - h / 2.0) };
        if let Ok(r) = e.range(Interval::new(a, b)) {
            if r.width() < 1e-9 * (1.0 + r.mag()) {
                return r;
            }
            recent.push(r);
            if recent.len() > 6 {
                recent.remove(0);
            }
        }
    }
    match recent.iter().copied().reduce(|x, y| x.hull(y)) {
        Some(h) => h.widen(0.5 * h.width()),
        None => Interval::point(f64::NAN),
    }
}

fn side_enclosure(span: &Span, x: f64, side: Side, scale: f64) -> Interval {
    match &span.body {
        SpanBody::Dense(d) => {
            Interval::point(d.values.0).hull(Interval::point(d.values.1))
        }
        SpanBody::Expr(e) => side_limit(e, x, side, scale),
    }
}

/// Envelope of the field at `x`, or `None` outside the window.
pub fn envelope(field: &Field, x: f64) -> Option<Envelope> {
    let win = field.window();
    if !win.contains(x) {
        return None;
    }
    let res = win.resolution();
    let scale = win.width();
    let spans = field.spans();
    // a point within resolution of a span edge is treated as that edge
    let near_edge = spans
        .iter()
        .flat_map(|s| [s.lo, s.hi])
        .find(|&edge| (x - edge).abs() <= res);
    let at = near_edge.unwrap_or(x);
    let idx = field.span_index_at(at)?;
    let interior = near_edge.is_none() && spans[idx].lo < at && at < spans[idx].hi;
    if interior {
        return Some(match &spans[idx].body {
            SpanBody::Dense(d) => Envelope::from_interval(
                Interval::point(d.values.0).hull(Interval::point(d.values.1)),
            ),
            SpanBody::Expr(e) => match e.eval(at) {
                Ok(v) => Envelope::point(v),
                // isolated evaluation failure inside a span: use both sides
                Err(_) => Envelope::from_interval(
                    side_limit(e, at, Side::Left, scale)
                        .hull(side_limit(e, at, Side::Right, scale)),
                ),
            },
        });
    }
    // span edge: hull the essential approach values from both sides
    let mut acc: Option<Interval> = None;
    let right = spans.get(idx).filter(|s| s.lo == at || (s.lo < at && at < s.hi));
    if let Some(s) = right {
        let iv = side_enclosure(s, at, Side::Right, scale);
        acc = Some(iv);
    }
    if idx > 0 && spans[idx - 1].hi == at {
        let iv = side_enclosure(&spans[idx - 1], at, Side::Left, scale);
        acc = Some(match acc {
            Some(a) => a.hull(iv),
            None => iv,
        });
    } else if spans[idx].hi == at {
        // upper window edge: the last span approaches from the left
        let iv = side_enclosure(&spans[idx], at, Side::Left, scale);
        acc = Some(match acc {
            Some(a) => a.hull(iv),
            None => iv,
        });
    }
    acc.map(|iv| Envelope::from_interval(iv))
}

/// Whether the essential limits from both sides agree on a single value, so
/// the field is (essentially) continuous at `x`.
pub fn is_continuity_point(field: &Field, x: f64) -> bool {
    match envelope(field, x) {
        Some(k) => k.hi - k.lo <= 1e-9 * (1.0 + k.lo.abs().max(k.hi.abs())),
        None => false,
    }
}

/// Hull of the envelope over `[a, b]` intersected with the window.
pub fn envelope_hull(field: &Field, a: f64, b: f64) -> Interval {
    let mut acc = field.bound_on(a, b);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    for bp in field.breakpoints() {
        if lo <= bp.x && bp.x <= hi {
            if let Some(k) = envelope(field, bp.x) {
                acc = acc.hull(k.as_interval());
            }
        }
    }
    acc
}

/// A maximal closed region where the envelope straddles or touches zero.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ZeroRegion {
    pub lo: f64,
    pub hi: f64,
}

impl ZeroRegion {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// All maximal regions of the window where `0 ∈ K(x)`.
///
/// Expression spans contribute their certified zero sets, dense segments
/// contribute their whole extent when the two velocities straddle or touch
/// zero, and breakpoints contribute isolated points when the envelope there
/// captures zero. Touching regions merge.
pub fn zero_set(field: &Field) -> Vec<ZeroRegion> {
    let res = field.window().resolution();
    let mut regions: Vec<ZeroRegion> = Vec::new();
    for span in field.spans() {
        match &span.body {
            SpanBody::Expr(e) => {
                for z in zero_spans(e, span.lo, span.hi, res) {
                    regions.push(ZeroRegion { lo: z.lo, hi: z.hi });
                }
            }
            SpanBody::Dense(d) => {
                let (v1, v2) = d.values;
                if v1.min(v2) <= 0.0 && 0.0 <= v1.max(v2) {
                    regions.push(ZeroRegion { lo: span.lo, hi: span.hi });
                }
            }
        }
    }
    for bp in field.breakpoints() {
        if let Some(k) = envelope(field, bp.x) {
            if k.contains(0.0) {
                regions.push(ZeroRegion { lo: bp.x, hi: bp.x });
            }
        }
    }
    regions.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    let mut merged: Vec<ZeroRegion> = Vec::new();
    for r in regions {
        match merged.last_mut() {
            Some(prev) if r.lo <= prev.hi + 8.0 * res => {
                prev.hi = prev.hi.max(r.hi);
            }
            _ => merged.push(r),
        }
    }
    merged
}
