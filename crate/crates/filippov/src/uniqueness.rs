//! Uniqueness analysis for the differential inclusion `dX/dt ∈ K(X)`.
//!
//! Forward uniqueness holds exactly when two independent conditions do:
//!
//! * condition A: the set of points where the field jumps while its envelope
//!   misses zero is null. Isolated jumps are always fine; only a dense
//!   two-valued segment whose velocities share a strict sign can violate it.
//! * condition B: every zero of the envelope is inescapable. Per side of a
//!   zero, the outward positive part `g` either vanishes identically, or the
//!   reciprocal integral `∫ dz / g(z)` diverges; a convergent integral means
//!   a solution leaves the zero in finite time while the constant solution
//!   stays, so uniqueness fails.
//!
//! Classification that cannot be settled is reported as `Inconclusive` and
//! never silently upgraded to a definite verdict.

use crate::dsl::{numeric_local_form, signed_form, Expr, LocalForm, Side, SignedForm};
use crate::envelope::{zero_set, ZeroRegion};
use crate::field::{Field, SpanBody};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OsgoodStatus {
    Osgood,
    NotOsgood,
    Inconclusive,
}

/// How one side of a zero behaves with respect to escape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideStatus {
    /// reciprocal integral diverges (or `g ≡ 0`): no finite-time escape
    Divergent,
    /// certified or estimated finite escape time through this side
    Escapes,
    /// neither settled; blocks any Unique verdict
    Undecided,
    /// the window ends here, escape is unobservable
    Edge,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SideEvidence {
    pub side: Side,
    pub status: SideStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<LocalForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escape_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OsgoodVerdict {
    pub status: OsgoodStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_side: Option<Side>,
    pub evidence: Vec<SideEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl OsgoodVerdict {
    fn dense_straddle(note: String, status: OsgoodStatus) -> OsgoodVerdict {
        OsgoodVerdict { status, failing_side: None, evidence: Vec::new(), note: Some(note) }
    }
}

/// A checked element of the zero set together with its escape verdict.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ZeroCheck {
    pub region: ZeroRegion,
    /// representative coordinate: the failing endpoint when escape succeeds
    pub point: f64,
    pub verdict: OsgoodVerdict,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionA {
    Holds,
    Fails { region: (f64, f64) },
    Inconclusive { note: String },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonUniquenessCause {
    ConditionAFails { region: (f64, f64) },
    ConditionBFails { point: f64, verdict: OsgoodVerdict },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessStatus {
    Unique,
    NonUnique,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct UniquenessVerdict {
    pub status: UniquenessStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cause: Option<NonUniquenessCause>,
    pub zero_points_checked: Vec<ZeroCheck>,
    pub condition_a: ConditionA,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl UniquenessVerdict {
    pub fn is_unique(&self) -> bool {
        self.status == UniquenessStatus::Unique
    }
}

/// One side of a zero, packaged for [`osgood_classify`].
#[derive(Debug, Clone)]
pub enum SideHandle {
    /// Outward-oriented expression: positive values move away from the zero.
    /// For the left side pass the negated field expression.
    Outward { expr: Expr, at: f64, radius: f64 },
    /// Adjacent two-valued segment; `speeds` are outward velocities.
    DenseNeighbor { speeds: (f64, f64), reach: f64 },
    /// The window boundary sits immediately on this side.
    WindowEdge,
}

const DIVERGENT_ALPHA_MARGIN: f64 = 0.05;

pub(crate) fn reciprocal_integral_diverges(alpha: f64, beta: f64) -> bool {
    alpha > 1.0 || (alpha == 1.0 && beta <= 1.0)
}

/// Escape time through a side with `g(z) = c z^alpha |log z|^beta`, out to
/// distance `r`. Geometric shells; converges when the integral does.
fn form_escape_time(c: f64, alpha: f64, beta: f64, r: f64) -> f64 {
    if beta == 0.0 && alpha < 1.0 {
        return r.powf(1.0 - alpha) / (c * (1.0 - alpha));
    }
    let mut t = 0.0;
    for k in 0..2000 {
        let hi = r * (2f64).powi(-k);
        let lo = hi / 2.0;
        let n = 8;
        let w = (hi - lo) / n as f64;
        let mut shell = 0.0;
        for j in 0..n {
            let z: f64 = lo + (j as f64 + 0.5) * w;
            shell += w / (c * z.powf(alpha) * z.ln().abs().powf(beta));
        }
        t += shell;
        if shell < 1e-14 * t {
            break;
        }
    }
    t
}

/// Interval-certified upper bound for `∫_0^radius dz / max(0, e(at + s z))`:
/// shell sums plus a tail where the integrand's denominator is bounded away
/// from zero over a whole left neighborhood of the origin. `None` when no
/// finite bound is certifiable.
fn certified_escape_bound(expr: &Expr, at: f64, side: Side, radius: f64) -> Option<f64> {
    let g = Expr::Max(
        Box::new(Expr::Const(0.0)),
        Box::new(expr.shifted(at, side.sign())),
    );
    let mut total = 0.0;
    for k in 0..=46 {
        let hi = radius * (2f64).powi(-k);
        if let Ok(r) = g.range(Interval::new(0.0, hi)) {
            if r.lo > 0.0 {
                return Some(total + hi / r.lo);
            }
        }
        let lo = hi / 2.0;
        match g.range(Interval::new(lo, hi)) {
            Ok(r) if r.lo > 0.0 => total += (hi - lo) / r.lo,
            _ => return None,
        }
    }
    None
}

/// A non-exact constant lead can be a cancellation artifact of analyzing a
/// hair off the true zero. Confirm the samples are actually flat at the
/// claimed level before trusting it.
fn probe_flat(expr: &Expr, at: f64, side: Side, radius: f64, c: f64) -> bool {
    let s = side.sign();
    [6, 12].iter().all(|&k| {
        match expr.eval(at + s * radius * (2f64).powi(-k)) {
            Ok(v) => (v - c).abs() <= 0.1 * c.abs(),
            Err(_) => false,
        }
    })
}

fn classify_numeric(expr: &Expr, at: f64, side: Side, radius: f64) -> SideEvidence {
    let ev = |status, form, escape_time| SideEvidence { side, status, form, escape_time };
    let s = side.sign();
    let fitted = numeric_local_form(|z| expr.eval(at + s * z).ok(), radius);
    match fitted {
        LocalForm::PositiveLimit { limit } => {
            ev(SideStatus::Escapes, Some(fitted), Some(radius / limit))
        }
        LocalForm::PowerLog { c, alpha, beta }
            if (alpha - 1.0).abs() >= DIVERGENT_ALPHA_MARGIN =>
        {
            // a fitted exponent this far from the boundary is decisive
            if alpha > 1.0 {
                ev(SideStatus::Divergent, Some(fitted), None)
            } else {
                ev(
                    SideStatus::Escapes,
                    Some(fitted),
                    Some(form_escape_time(c, alpha, beta, radius)),
                )
            }
        }
        // fitted exponent too close to the divergence boundary, or no fit at
        // all: only an interval certificate may decide
        _ => match certified_escape_bound(expr, at, side, radius) {
            Some(bound) => ev(SideStatus::Escapes, Some(fitted), Some(bound)),
            None => ev(SideStatus::Undecided, Some(fitted), None),
        },
    }
}

fn classify_outward(expr: &Expr, at: f64, side: Side, radius: f64) -> SideEvidence {
    let ev = |status, form, escape_time| SideEvidence { side, status, form, escape_time };
    match signed_form(expr, at, side) {
        SignedForm::Zero => ev(SideStatus::Divergent, Some(LocalForm::Zero), None),
        SignedForm::Lead { c, .. } if c < 0.0 => {
            // field points back toward the zero: outward part vanishes
            ev(SideStatus::Divergent, Some(LocalForm::Zero), None)
        }
        SignedForm::Lead { c, alpha, beta, exact } => {
            if alpha == 0.0 && beta == 0.0 {
                if !exact && !probe_flat(expr, at, side, radius, c) {
                    return classify_numeric(expr, at, side, radius);
                }
                let form = LocalForm::PositiveLimit { limit: c };
                ev(SideStatus::Escapes, Some(form), Some(radius / c))
            } else if reciprocal_integral_diverges(alpha, beta) {
                ev(SideStatus::Divergent, Some(LocalForm::PowerLog { c, alpha, beta }), None)
            } else {
                let form = LocalForm::PowerLog { c, alpha, beta };
                ev(SideStatus::Escapes, Some(form), Some(form_escape_time(c, alpha, beta, radius)))
            }
        }
        SignedForm::Unknown => classify_numeric(expr, at, side, radius),
    }
}

fn classify_handle(handle: &SideHandle, side: Side) -> SideEvidence {
    match handle {
        SideHandle::WindowEdge => SideEvidence { side, status: SideStatus::Edge, form: None, escape_time: None },
        SideHandle::DenseNeighbor { speeds, reach } => {
            let (a, b) = *speeds;
            if a.min(b) > 0.0 {
                SideEvidence {
                    side,
                    status: SideStatus::Escapes,
                    form: None,
                    escape_time: Some(reach / a.min(b)),
                }
            } else if a.max(b) <= 0.0 {
                SideEvidence { side, status: SideStatus::Divergent, form: Some(LocalForm::Zero), escape_time: None }
            } else {
                SideEvidence { side, status: SideStatus::Undecided, form: None, escape_time: None }
            }
        }
        SideHandle::Outward { expr, at, radius } => classify_outward(expr, *at, side, *radius),
    }
}

/// Escape verdict at a single zero from its two one-sided handles.
pub fn osgood_classify(left: &SideHandle, right: &SideHandle) -> OsgoodVerdict {
    let l = classify_handle(left, Side::Left);
    let r = classify_handle(right, Side::Right);
    let escapes = |e: &SideEvidence| e.status == SideStatus::Escapes;
    let failing = match (escapes(&l), escapes(&r)) {
        (false, false) => None,
        (true, false) => Some(Side::Left),
        (false, true) => Some(Side::Right),
        (true, true) => {
            // both escape: report the faster route
            let tl = l.escape_time.unwrap_or(f64::INFINITY);
            let tr = r.escape_time.unwrap_or(f64::INFINITY);
            Some(if tl < tr { Side::Left } else { Side::Right })
        }
    };
    let status = if failing.is_some() {
        OsgoodStatus::NotOsgood
    } else if l.status == SideStatus::Undecided || r.status == SideStatus::Undecided {
        OsgoodStatus::Inconclusive
    } else {
        OsgoodStatus::Osgood
    };
    OsgoodVerdict { status, failing_side: failing, evidence: vec![l, r], note: None }
}

enum OutwardDir {
    LeftOf,
    RightOf,
}

fn outward_handle(
    field: &Field,
    regions: &[ZeroRegion],
    region_idx: usize,
    dir: OutwardDir,
    p: f64,
) -> SideHandle {
    let win = field.window();
    let res = win.resolution();
    match dir {
        OutwardDir::LeftOf if p <= win.lo + res => return SideHandle::WindowEdge,
        OutwardDir::RightOf if p >= win.hi - res => return SideHandle::WindowEdge,
        _ => {}
    }
    let spans = field.spans();
    let idx = match field.span_index_at(p) {
        Some(i) => i,
        None => return SideHandle::WindowEdge,
    };
    let (span, avail) = match dir {
        OutwardDir::LeftOf => {
            if spans[idx].lo >= p - res && idx > 0 {
                (&spans[idx - 1], spans[idx - 1].hi - spans[idx - 1].lo)
            } else {
                (&spans[idx], p - spans[idx].lo)
            }
        }
        OutwardDir::RightOf => (&spans[idx], spans[idx].hi - p),
    };
    // keep numeric probes clear of the neighboring zero region
    let guard = match dir {
        OutwardDir::RightOf => regions
            .get(region_idx + 1)
            .map(|r| 0.9 * (r.lo - p))
            .unwrap_or(f64::INFINITY),
        OutwardDir::LeftOf => region_idx
            .checked_sub(1)
            .and_then(|i| regions.get(i))
            .map(|r| 0.9 * (p - r.hi))
            .unwrap_or(f64::INFINITY),
    };
    let radius = (1e-2 * win.width())
        .min(avail)
        .min(guard)
        .max(1e-9 * win.width());
    match &span.body {
        SpanBody::Dense(d) => {
            let s = match dir {
                OutwardDir::LeftOf => -1.0,
                OutwardDir::RightOf => 1.0,
            };
            SideHandle::DenseNeighbor {
                speeds: (s * d.values.0, s * d.values.1),
                reach: avail.max(res),
            }
        }
        SpanBody::Expr(e) => {
            let expr = match dir {
                OutwardDir::LeftOf => Expr::Neg(Box::new(e.clone())),
                OutwardDir::RightOf => e.clone(),
            };
            SideHandle::Outward { expr, at: p, radius }
        }
    }
}

/// The jump-set condition: a dense two-valued segment whose velocities share
/// a strict sign puts a fat set of jumps where the envelope misses zero.
pub fn check_condition_a(field: &Field) -> ConditionA {
    let mut unsure: Option<String> = None;
    for (lo, hi, d) in field.dense_spans() {
        let (v1, v2) = d.values;
        let misses_zero = v1.min(v2) > 0.0 || v1.max(v2) < 0.0;
        if !misses_zero {
            continue;
        }
        if d.rudin {
            return ConditionA::Fails { region: (lo, hi) };
        }
        unsure.get_or_insert_with(|| {
            format!(
                "dense segment [{lo}, {hi}] avoids zero but its measure oracle \
                 does not certify two-sided density on every subinterval"
            )
        });
    }
    match unsure {
        Some(note) => ConditionA::Inconclusive { note },
        None => ConditionA::Holds,
    }
}

/// Escape analysis at every element of the zero set.
pub fn check_condition_b(field: &Field) -> Vec<ZeroCheck> {
    let res = field.window().resolution();
    let regions = zero_set(field);
    let mut out = Vec::with_capacity(regions.len());
    for (i, region) in regions.iter().enumerate() {
        // a straddling dense segment inside the region decides it outright
        let straddle = field.dense_spans().find(|(lo, hi, d)| {
            let (v1, v2) = d.values;
            v1.min(v2) <= 0.0
                && 0.0 <= v1.max(v2)
                && region.lo.max(*lo) < region.hi.min(*hi)
        });
        if let Some((dlo, dhi, d)) = straddle {
            let mid = 0.5 * (region.lo.max(dlo) + region.hi.min(dhi));
            let verdict = if d.rudin {
                OsgoodVerdict::dense_straddle(
                    format!(
                        "velocities {:?} straddle zero on a fat subset of [{dlo}, {dhi}]: \
                         every interior point carries both a resting and a drifting solution",
                        d.values
                    ),
                    OsgoodStatus::NotOsgood,
                )
            } else {
                OsgoodVerdict::dense_straddle(
                    format!(
                        "dense segment [{dlo}, {dhi}] straddles zero but its measure oracle \
                         does not certify two-sided density"
                    ),
                    OsgoodStatus::Inconclusive,
                )
            };
            out.push(ZeroCheck { region: *region, point: mid, verdict });
            continue;
        }
        // interval arithmetic may return a thin enclosure rather than the
        // exact zero; analyzing at an off-center coordinate manufactures
        // bogus constant forms, so snap to a structural breakpoint inside
        // the enclosure (or its midpoint) first
        let snap = |a: f64, b: f64| {
            field
                .breakpoints()
                .iter()
                .map(|bp| bp.x)
                .find(|x| a - res <= *x && *x <= b + res)
        };
        let (lo_pt, hi_pt) = if region.hi - region.lo <= 16.0 * res {
            let p = snap(region.lo, region.hi).unwrap_or(0.5 * (region.lo + region.hi));
            (p, p)
        } else {
            (
                snap(region.lo - 8.0 * res, region.lo + 8.0 * res).unwrap_or(region.lo),
                snap(region.hi - 8.0 * res, region.hi + 8.0 * res).unwrap_or(region.hi),
            )
        };
        let left = outward_handle(field, &regions, i, OutwardDir::LeftOf, lo_pt);
        let right = outward_handle(field, &regions, i, OutwardDir::RightOf, hi_pt);
        let verdict = osgood_classify(&left, &right);
        let point = match verdict.failing_side {
            Some(Side::Left) => lo_pt,
            Some(Side::Right) => hi_pt,
            None => lo_pt,
        };
        out.push(ZeroCheck { region: *region, point, verdict });
    }
    out
}

/// Combined verdict. A certified failure of either condition wins; otherwise
/// any unresolved sub-result keeps the verdict at `Inconclusive`.
pub fn uniqueness_verdict(field: &Field) -> UniquenessVerdict {
    let condition_a = check_condition_a(field);
    let checks = check_condition_b(field);
    if let ConditionA::Fails { region } = condition_a {
        return UniquenessVerdict {
            status: UniquenessStatus::NonUnique,
            cause: Some(NonUniquenessCause::ConditionAFails { region }),
            zero_points_checked: checks,
            condition_a,
            note: None,
        };
    }
    if let Some(bad) = checks
        .iter()
        .find(|c| c.verdict.status == OsgoodStatus::NotOsgood)
    {
        let cause = NonUniquenessCause::ConditionBFails {
            point: bad.point,
            verdict: bad.verdict.clone(),
        };
        return UniquenessVerdict {
            status: UniquenessStatus::NonUnique,
            cause: Some(cause),
            zero_points_checked: checks,
            condition_a,
            note: None,
        };
    }
    let mut notes: Vec<String> = Vec::new();
    if let ConditionA::Inconclusive { note } = &condition_a {
        notes.push(note.clone());
    }
    for c in &checks {
        if c.verdict.status == OsgoodStatus::Inconclusive {
            notes.push(format!("zero at {} not classified", c.point));
        }
    }
    if !notes.is_empty() {
        return UniquenessVerdict {
            status: UniquenessStatus::Inconclusive,
            cause: None,
            zero_points_checked: checks,
            condition_a,
            note: Some(notes.join("; ")),
        };
    }
    UniquenessVerdict {
        status: UniquenessStatus::Unique,
        cause: None,
        zero_points_checked: checks,
        condition_a,
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_field;
    use crate::field::{build_field, build_field_with, OracleRegistry, SvcSet, Window};
    use std::sync::Arc;

    fn verdict(src: &str, lo: f64, hi: f64) -> UniquenessVerdict {
        let f = build_field(&parse_field(src).unwrap(), Window::new(lo, hi)).unwrap();
        uniqueness_verdict(&f)
    }

    #[test]
    fn stable_sign_jump_is_unique() {
        let v = verdict("on (-inf, inf): -sign(x)", -2.0, 2.0);
        assert_eq!(v.status, UniquenessStatus::Unique, "{v:?}");
        assert_eq!(v.zero_points_checked.len(), 1);
        let z = &v.zero_points_checked[0];
        assert_eq!(z.verdict.status, OsgoodStatus::Osgood);
        for e in &z.verdict.evidence {
            assert_eq!(e.status, SideStatus::Divergent);
            assert_eq!(e.form, Some(LocalForm::Zero));
        }
    }

    #[test]
    fn heaviside_fails_escape_on_the_right_of_zero() {
        let v = verdict("on (-inf, 0): 0; on [0, inf): 1", -1.0, 1.0);
        assert_eq!(v.status, UniquenessStatus::NonUnique);
        match v.cause {
            Some(NonUniquenessCause::ConditionBFails { point, ref verdict }) => {
                assert!((point - 0.0).abs() < 1e-9);
                assert_eq!(verdict.failing_side, Some(Side::Right));
                let r = verdict.evidence.iter().find(|e| e.side == Side::Right).unwrap();
                assert_eq!(r.form, Some(LocalForm::PositiveLimit { limit: 1.0 }));
                assert!(r.escape_time.unwrap() > 0.0);
            }
            ref other => panic!("wrong cause: {other:?}"),
        }
    }

    #[test]
    fn square_root_field_escapes_zero() {
        let v = verdict("on (-inf, inf): abs(x)^0.5", -2.0, 2.0);
        assert_eq!(v.status, UniquenessStatus::NonUnique);
        match v.cause {
            Some(NonUniquenessCause::ConditionBFails { point, ref verdict }) => {
                assert!(point.abs() < 1e-6, "point {point}");
                assert_eq!(verdict.failing_side, Some(Side::Right));
                let r = verdict.evidence.iter().find(|e| e.side == Side::Right).unwrap();
                match r.form {
                    Some(LocalForm::PowerLog { c, alpha, beta }) => {
                        assert!((c - 1.0).abs() < 1e-9);
                        assert!((alpha - 0.5).abs() < 1e-9);
                        assert!(beta.abs() < 1e-9);
                    }
                    ref other => panic!("wrong form: {other:?}"),
                }
                // ∫_0^r z^{-1/2} dz = 2 sqrt(r)
                let r_used: f64 = 0.04;
                let want = 2.0 * r_used.sqrt();
                assert!((r.escape_time.unwrap() - want).abs() < 1e-6 * want.max(1.0));
            }
            ref other => panic!("wrong cause: {other:?}"),
        }
    }

    #[test]
    fn shifted_root_with_osgood_modulus_is_unique() {
        let v = verdict("on (-inf, inf): -x * log(abs(x))", -2.0, 2.0);
        assert_eq!(v.status, UniquenessStatus::Unique, "{v:?}");
        assert_eq!(v.zero_points_checked.len(), 3);
        let origin = &v.zero_points_checked[1];
        assert!(origin.region.lo.abs() < 1e-9);
        let right = origin.verdict.evidence.iter().find(|e| e.side == Side::Right).unwrap();
        assert_eq!(right.status, SideStatus::Divergent);
        assert_eq!(
            right.form,
            Some(LocalForm::PowerLog { c: 1.0, alpha: 1.0, beta: 1.0 })
        );
    }

    #[test]
    fn regular_modulus_above_constant_is_unique_without_zeros() {
        let v = verdict("on (-inf, inf): 1 + abs(x)^0.5", -2.0, 2.0);
        assert_eq!(v.status, UniquenessStatus::Unique);
        assert!(v.zero_points_checked.is_empty());
        assert_eq!(v.condition_a, ConditionA::Holds);
    }

    #[test]
    fn one_signed_dense_jumps_fail_the_fat_set_condition() {
        let v = verdict(
            "dense on [0, 1]: {1, 2} measure builtin-fat-cantor; on (-inf, 0): 1; on (1, inf): 2",
            -1.0, 2.0,
        );
        assert_eq!(v.status, UniquenessStatus::NonUnique);
        match v.cause {
            Some(NonUniquenessCause::ConditionAFails { region }) => {
                assert_eq!(region, (0.0, 1.0));
            }
            ref other => panic!("wrong cause: {other:?}"),
        }
        assert!(v.zero_points_checked.is_empty());
    }

    #[test]
    fn straddling_dense_segment_fails_escape_in_its_interior() {
        let v = verdict(
            "dense on [-1, 1]: {-1, 1} measure builtin-fat-cantor; on (-inf, -1): 1; on (1, inf): -1",
            -2.0, 2.0,
        );
        assert_eq!(v.status, UniquenessStatus::NonUnique);
        match v.cause {
            Some(NonUniquenessCause::ConditionBFails { point, ref verdict }) => {
                assert!(point.abs() < 1e-9);
                assert_eq!(verdict.status, OsgoodStatus::NotOsgood);
                assert!(verdict.failing_side.is_none());
                assert!(verdict.note.is_some());
            }
            ref other => panic!("wrong cause: {other:?}"),
        }
    }

    #[test]
    fn uncertified_density_yields_inconclusive_not_unique() {
        let mut reg = OracleRegistry::default();
        reg.register("thin-cantor", Arc::new(SvcSet::new(0.0, 1.0, 0.5)));
        let spec = parse_field(
            "dense on [0, 1]: {1, 2} measure thin-cantor; on (-inf, 0): 1; on (1, inf): 2",
        )
        .unwrap();
        let f = build_field_with(&spec, Window::new(-1.0, 2.0), &reg).unwrap();
        let v = uniqueness_verdict(&f);
        assert_eq!(v.status, UniquenessStatus::Inconclusive, "{v:?}");
        assert!(v.note.is_some());
    }
}
