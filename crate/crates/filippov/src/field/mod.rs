//! Concrete velocity fields over a compact analysis window.
//!
//! [`build_field`] turns a parsed [`FieldSpec`] into a [`Field`]: the window
//! is carved into maximal open spans on which the field is a single smooth
//! expression or a single dense two-valued segment, separated by breakpoints
//! (piece boundaries, dense boundaries, and zeros of structurally critical
//! subexpressions such as `sign` arguments or denominators). Building fails
//! if the window is not fully covered, an oracle is unknown, or the field is
//! essentially unbounded somewhere on the window.

mod measure;

pub use measure::{FatCantorUnion, MeasureOracle, SvcSet};

use crate::dsl::{
    signed_form, CriticalKind, DenseSegment, Expr, FieldSpec, OracleName, PointOverride,
    RawInterval, Side, SignedForm,
};
use crate::interval::Interval;
use crate::roots::zero_spans;
use std::collections::HashMap;
use std::sync::Arc;

/// Compact interval on which all analyses run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Window {
        Window { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Resolution used for root isolation and breakpoint merging.
    pub(crate) fn resolution(&self) -> f64 {
        1e-12 * self.width()
    }
}

/// Why a point separates two spans, ordered by merge priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakpointKind {
    WindowEdge,
    PieceBoundary,
    DenseBoundary,
    /// Zero of a `sign` argument.
    Jump,
    /// Zero of a denominator, `log`, `sqrt`, or negative-power argument.
    DomainEdge,
    /// Zero of an `abs`, `min`/`max` difference, or fractional-power base.
    Kink,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Breakpoint {
    pub x: f64,
    pub kind: BreakpointKind,
}

/// Dense two-valued payload: velocity `values.0` on the oracle's set,
/// `values.1` off it, within the declared segment.
#[derive(Clone)]
pub struct DenseBody {
    pub values: (f64, f64),
    pub oracle: Arc<dyn MeasureOracle>,
    pub oracle_name: OracleName,
    pub rudin: bool,
    /// Declared segment, which may extend beyond the window.
    pub declared: RawInterval,
}

impl std::fmt::Debug for DenseBody {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DenseBody")
            .field("values", &self.values)
            .field("oracle", &self.oracle_name)
            .field("rudin", &self.rudin)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum SpanBody {
    Expr(Expr),
    Dense(DenseBody),
}

/// Maximal open interval between adjacent breakpoints with a single body.
#[derive(Debug, Clone)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub body: SpanBody,
    /// Enclosure of the essential range of the field on this span.
    pub bound: Interval,
}

impl Span {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.body, SpanBody::Dense(_))
    }
}

/// Pointwise evaluation failure of a built field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldEvalError {
    #[error("x = {x} lies outside the analysis window")]
    Outside { x: f64 },
    #[error("x = {x} lies in a dense two-valued segment with no pointwise value")]
    TwoValued { x: f64 },
    #[error("the field has no finite value at x = {x}")]
    Undefined { x: f64 },
}

/// What went wrong while building a [`Field`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("analysis window [{lo}, {hi}] is not a nonempty finite interval")]
    InvalidWindow { lo: f64, hi: f64 },
    #[error("field description is inconsistent: {0}")]
    InvalidSpec(String),
    #[error("window is not covered on [{lo}, {hi}]")]
    CoverageGap { lo: f64, hi: f64 },
    #[error("no piece, segment, or override defines the field at x = {x}")]
    PointHole { x: f64 },
    #[error("no measure oracle registered under \"{name}\"")]
    UnknownOracle { name: String },
    #[error("field is essentially unbounded near x = {near}; analyses need an essentially bounded field")]
    Unbounded { near: f64 },
}

/// Named measure oracles resolvable from a field description. The builtin
/// fat Cantor union needs no registration.
#[derive(Default)]
pub struct OracleRegistry {
    named: HashMap<String, Arc<dyn MeasureOracle>>,
}

impl OracleRegistry {
    pub fn register(&mut self, name: impl Into<String>, oracle: Arc<dyn MeasureOracle>) {
        self.named.insert(name.into(), oracle);
    }

    fn resolve(
        &self,
        name: &OracleName,
        declared: &RawInterval,
    ) -> Result<Arc<dyn MeasureOracle>, BuildError> {
        match name {
            OracleName::BuiltinFatCantor => {
                Ok(Arc::new(FatCantorUnion::new(declared.lo, declared.hi)))
            }
            OracleName::Named(n) => self
                .named
                .get(n)
                .cloned()
                .ok_or_else(|| BuildError::UnknownOracle { name: n.clone() }),
        }
    }
}

/// One clipped covering item, remembering the original endpoint closedness
/// for pointwise lookups.
#[derive(Debug, Clone)]
struct CoverItem {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
    body: CoverBody,
}

#[derive(Debug, Clone)]
enum CoverBody {
    Piece(usize),
    Dense(usize),
}

impl CoverItem {
    fn contains(&self, x: f64) -> bool {
        (self.lo < x || (self.lo == x && self.lo_closed))
            && (x < self.hi || (x == self.hi && self.hi_closed))
    }
}

/// A velocity field resolved against a window, ready for envelope,
/// uniqueness, and flow analyses.
pub struct Field {
    window: Window,
    spans: Vec<Span>,
    breakpoints: Vec<Breakpoint>,
    cover: Vec<CoverItem>,
    overrides: Vec<PointOverride>,
    bound: Interval,
    spec: FieldSpec,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("window", &self.window)
            .field("spans", &self.spans.len())
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

/// Build with the default (builtin-only) oracle registry.
pub fn build_field(spec: &FieldSpec, window: Window) -> Result<Field, BuildError> {
    build_field_with(spec, window, &OracleRegistry::default())
}

pub fn build_field_with(
    spec: &FieldSpec,
    window: Window,
    registry: &OracleRegistry,
) -> Result<Field, BuildError> {
    if !(window.lo.is_finite() && window.hi.is_finite() && window.lo < window.hi) {
        return Err(BuildError::InvalidWindow { lo: window.lo, hi: window.hi });
    }
    crate::dsl::parse::validate(spec).map_err(BuildError::InvalidSpec)?;

    let cover = clip_cover(spec, window);
    check_coverage(&cover, spec, window)?;
    let breakpoints = discover_breakpoints(&cover, spec, window);
    let spans = assemble_spans(&cover, spec, &breakpoints, registry)?;
    let bound = spans
        .iter()
        .map(|s| s.bound)
        .reduce(|a, b| a.hull(b))
        .expect("window has positive width, so at least one span exists");

    let mut overrides: Vec<PointOverride> = spec
        .overrides
        .iter()
        .filter(|o| window.contains(o.x))
        .cloned()
        .collect();
    overrides.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());

    Ok(Field {
        window,
        spans,
        breakpoints,
        cover,
        overrides,
        bound,
        spec: spec.clone(),
    })
}

fn clip_cover(spec: &FieldSpec, window: Window) -> Vec<CoverItem> {
    let mut cover: Vec<CoverItem> = Vec::new();
    let mut push = |iv: &RawInterval, body: CoverBody| {
        let lo = iv.lo.max(window.lo);
        let hi = iv.hi.min(window.hi);
        if lo > hi {
            return;
        }
        let lo_closed = if lo == iv.lo { iv.lo_closed } else { true };
        let hi_closed = if hi == iv.hi { iv.hi_closed } else { true };
        if lo == hi && !(lo_closed && hi_closed) {
            return;
        }
        cover.push(CoverItem { lo, hi, lo_closed, hi_closed, body });
    };
    for (i, piece) in spec.pieces.iter().enumerate() {
        push(&piece.interval, CoverBody::Piece(i));
    }
    for (i, seg) in spec.dense.iter().enumerate() {
        push(&seg.interval, CoverBody::Dense(i));
    }
    cover.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    cover
}

fn check_coverage(cover: &[CoverItem], spec: &FieldSpec, window: Window) -> Result<(), BuildError> {
    let mut covered_to = window.lo;
    for item in cover {
        if item.lo > covered_to {
            return Err(BuildError::CoverageGap { lo: covered_to, hi: item.lo });
        }
        covered_to = covered_to.max(item.hi);
    }
    if covered_to < window.hi {
        return Err(BuildError::CoverageGap { lo: covered_to, hi: window.hi });
    }
    // closures cover the window; single uncovered points can remain at
    // open-open contacts and window edges, and need an override
    let mut candidates: Vec<f64> = vec![window.lo, window.hi];
    candidates.extend(cover.iter().flat_map(|c| [c.lo, c.hi]));
    for x in candidates {
        if !window.contains(x) {
            continue;
        }
        let pointwise = cover.iter().any(|c| c.contains(x))
            || spec.overrides.iter().any(|o| o.x == x);
        if !pointwise {
            return Err(BuildError::PointHole { x });
        }
    }
    Ok(())
}

fn discover_breakpoints(cover: &[CoverItem], spec: &FieldSpec, window: Window) -> Vec<Breakpoint> {
    let res = window.resolution();
    let mut pts: Vec<Breakpoint> = vec![
        Breakpoint { x: window.lo, kind: BreakpointKind::WindowEdge },
        Breakpoint { x: window.hi, kind: BreakpointKind::WindowEdge },
    ];
    for item in cover {
        let kind = match item.body {
            CoverBody::Piece(_) => BreakpointKind::PieceBoundary,
            CoverBody::Dense(_) => BreakpointKind::DenseBoundary,
        };
        for x in [item.lo, item.hi] {
            if window.lo < x && x < window.hi {
                pts.push(Breakpoint { x, kind });
            }
        }
        if let CoverBody::Piece(i) = item.body {
            if item.lo < item.hi {
                let mut args = Vec::new();
                spec.pieces[i].expr.critical_args(&mut args);
                for arg in &args {
                    let kind = match arg.kind {
                        CriticalKind::Jump => BreakpointKind::Jump,
                        CriticalKind::Kink => BreakpointKind::Kink,
                        CriticalKind::DomainEdge => BreakpointKind::DomainEdge,
                    };
                    for z in zero_spans(&arg.expr, item.lo, item.hi, res) {
                        for x in [z.lo, z.hi] {
                            if window.lo < x && x < window.hi {
                                pts.push(Breakpoint { x, kind });
                            }
                        }
                    }
                }
            }
        }
    }
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.kind.cmp(&b.kind)));
    // merge near-coincident points, keeping the highest-priority kind and
    // its coordinate
    let merge_tol = 8.0 * res;
    let mut merged: Vec<Breakpoint> = Vec::with_capacity(pts.len());
    for p in pts {
        match merged.last_mut() {
            Some(prev) if p.x - prev.x <= merge_tol => {
                if p.kind < prev.kind {
                    *prev = p;
                }
            }
            _ => merged.push(p),
        }
    }
    merged
}

fn assemble_spans(
    cover: &[CoverItem],
    spec: &FieldSpec,
    breakpoints: &[Breakpoint],
    registry: &OracleRegistry,
) -> Result<Vec<Span>, BuildError> {
    let mut oracles: HashMap<usize, (Arc<dyn MeasureOracle>, &DenseSegment)> = HashMap::new();
    for item in cover {
        if let CoverBody::Dense(i) = item.body {
            let seg = &spec.dense[i];
            let oracle = registry.resolve(&seg.oracle, &seg.interval)?;
            oracles.insert(i, (oracle, seg));
        }
    }
    let mut spans = Vec::new();
    for pair in breakpoints.windows(2) {
        let (lo, hi) = (pair[0].x, pair[1].x);
        if !(lo < hi) {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let item = cover
            .iter()
            .find(|c| c.lo <= mid && mid <= c.hi)
            .expect("coverage was checked, so every span midpoint is covered");
        let (body, bound) = match item.body {
            CoverBody::Piece(i) => {
                let expr = spec.pieces[i].expr.clone();
                let bound = span_bound(&expr, lo, hi)
                    .map_err(|near| BuildError::Unbounded { near })?;
                (SpanBody::Expr(expr), bound)
            }
            CoverBody::Dense(i) => {
                let (oracle, seg) = &oracles[&i];
                let body = DenseBody {
                    values: seg.values,
                    oracle: oracle.clone(),
                    oracle_name: seg.oracle.clone(),
                    rudin: oracle.rudin_dense(),
                    declared: seg.interval,
                };
                let bound = Interval::point(seg.values.0).hull(Interval::point(seg.values.1));
                (SpanBody::Dense(body), bound)
            }
        };
        spans.push(Span { lo, hi, body, bound });
    }
    Ok(spans)
}

/// Enclose the range of `e` over `(lo, hi)`, treating the endpoints as the
/// only possible singular points (interior critical points already split
/// spans). Fails with the offending location if the field blows up.
fn span_bound(e: &Expr, lo: f64, hi: f64) -> Result<Interval, f64> {
    if let Ok(r) = e.range(Interval::new(lo, hi)) {
        return Ok(r);
    }
    let mut acc: Option<Interval> = None;
    fn take(acc: &mut Option<Interval>, iv: Interval) {
        *acc = Some(match acc {
            Some(a) => a.hull(iv),
            None => iv,
        });
    }
    for (p, side) in [(lo, Side::Right), (hi, Side::Left)] {
        match signed_form(e, p, side) {
            SignedForm::Zero => take(&mut acc, Interval::point(0.0)),
            SignedForm::Lead { c, alpha, beta, .. } => {
                if alpha < 0.0 || (alpha == 0.0 && beta > 0.0) {
                    return Err(p);
                }
                if alpha == 0.0 && beta == 0.0 {
                    take(&mut acc, Interval::point(c));
                } else {
                    take(&mut acc, Interval::point(0.0));
                }
            }
            SignedForm::Unknown => {
                // probe geometrically shrinking offsets; sustained growth
                // toward the endpoint means an essential blow-up
                let delta = (hi - lo) / 16.0;
                let mut vals = Vec::new();
                for k in 0..50 {
                    let z = delta * (2f64).powi(-k);
                    if let Ok(v) = e.eval(p + side.sign() * z) {
                        vals.push(v.abs());
                        take(&mut acc, Interval::point(v));
                    }
                }
                if vals.len() < 10 {
                    return Err(p);
                }
                let tail_max = vals[vals.len() - 5..].iter().cloned().fold(0.0, f64::max);
                let head_max = vals[..vals.len() - 5].iter().cloned().fold(0.0, f64::max);
                if tail_max > 10.0 * head_max.max(1.0) {
                    return Err(p);
                }
                // widen the sampled hull; the endpoint behavior resisted
                // classification, so leave margin
                if let Some(a) = acc {
                    let w = a.widen(0.5 * a.mag().max(1e-9));
                    take(&mut acc, w);
                }
            }
        }
    }
    // interior: a plain cell decomposition with geometric refinement toward
    // both endpoints, all by certified interval evaluation; modest uniform
    // subdivision keeps interval dependence from inflating the hull
    let delta = (hi - lo) / 16.0;
    let mut cells: Vec<(f64, f64, u32)> = Vec::new();
    let (mid_lo, mid_hi) = (lo + delta, hi - delta);
    for t in 0..64 {
        let a = mid_lo + (mid_hi - mid_lo) * (t as f64) / 64.0;
        let b = mid_lo + (mid_hi - mid_lo) * ((t + 1) as f64) / 64.0;
        cells.push((a, b, 0));
    }
    for k in 1..=54 {
        let w = delta * (2f64).powi(-(k - 1));
        let inner = delta * (2f64).powi(-k);
        cells.push((lo + inner, lo + w, 0));
        cells.push((hi - w, hi - inner, 0));
    }
    while let Some((a, b, depth)) = cells.pop() {
        if !(a < b) {
            continue;
        }
        match e.range(Interval::new(a, b)) {
            Ok(r) => take(&mut acc, r),
            Err(_) if depth < 14 => {
                let m = 0.5 * (a + b);
                cells.push((a, m, depth + 1));
                cells.push((m, b, depth + 1));
            }
            Err(_) => {
                // interval arithmetic kept failing on a tiny cell; fall back
                // to a sampled enclosure with margin
                let mut any = false;
                for t in 0..=4 {
                    let x = a + (b - a) * (t as f64) / 4.0;
                    if let Ok(v) = e.eval(x) {
                        take(&mut acc, Interval::point(v).widen(1e-6 * v.abs().max(1.0)));
                        any = true;
                    }
                }
                if !any {
                    return Err(0.5 * (a + b));
                }
            }
        }
    }
    Ok(acc.expect("at least the interior cell contributes"))
}

impl Field {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn overrides(&self) -> &[PointOverride] {
        &self.overrides
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Enclosure of the essential range over the whole window.
    pub fn range_bound(&self) -> Interval {
        self.bound
    }

    /// Index of the span containing `x`, preferring the right span at
    /// breakpoints; the last span owns the window's upper edge.
    pub fn span_index_at(&self, x: f64) -> Option<usize> {
        if !self.window.contains(x) || self.spans.is_empty() {
            return None;
        }
        let idx = self.spans.partition_point(|s| s.hi <= x);
        Some(idx.min(self.spans.len() - 1))
    }

    pub fn span_at(&self, x: f64) -> Option<&Span> {
        self.span_index_at(x).map(|i| &self.spans[i])
    }

    /// The almost-everywhere value of the field at `x`: point overrides are
    /// invisible, dense segments have none.
    pub fn value_ae(&self, x: f64) -> Result<f64, FieldEvalError> {
        let span = self.span_at(x).ok_or(FieldEvalError::Outside { x })?;
        match &span.body {
            SpanBody::Dense(_) => Err(FieldEvalError::TwoValued { x }),
            SpanBody::Expr(e) => e.eval(x).map_err(|_| FieldEvalError::Undefined { x }),
        }
    }

    /// The literal pointwise value at `x`, honoring overrides and endpoint
    /// closedness of the declared pieces.
    pub fn value_pointwise(&self, x: f64) -> Result<f64, FieldEvalError> {
        if !self.window.contains(x) {
            return Err(FieldEvalError::Outside { x });
        }
        if let Ok(i) = self.overrides.binary_search_by(|o| o.x.partial_cmp(&x).unwrap()) {
            return Ok(self.overrides[i].value);
        }
        for item in &self.cover {
            if item.contains(x) {
                return match &item.body {
                    CoverBody::Dense(_) => Err(FieldEvalError::TwoValued { x }),
                    CoverBody::Piece(i) => self.spec.pieces[*i]
                        .expr
                        .eval(x)
                        .map_err(|_| FieldEvalError::Undefined { x }),
                };
            }
        }
        Err(FieldEvalError::Undefined { x })
    }

    /// Enclosure of the essential range of the field over `[a, b]`
    /// intersected with the window. Cached span bounds serve full overlaps;
    /// partial overlaps retry a direct interval evaluation and fall back to
    /// the span bound where that fails.
    pub fn bound_on(&self, a: f64, b: f64) -> Interval {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (a, b) = (self.window.clamp(lo), self.window.clamp(hi));
        let mut acc: Option<Interval> = None;
        for s in &self.spans {
            if s.hi <= a || s.lo >= b {
                continue;
            }
            let piece = if s.lo >= a && s.hi <= b {
                s.bound
            } else {
                let (clo, chi) = (s.lo.max(a), s.hi.min(b));
                match &s.body {
                    SpanBody::Expr(e) => {
                        e.range(Interval::new(clo, chi)).unwrap_or(s.bound)
                    }
                    SpanBody::Dense(_) => s.bound,
                }
            };
            acc = Some(match acc {
                Some(h) => h.hull(piece),
                None => piece,
            });
        }
        acc.unwrap_or_else(|| Interval::point(0.0))
    }

    /// Dense spans with their clipped extents.
    pub fn dense_spans(&self) -> impl Iterator<Item = (f64, f64, &DenseBody)> {
        self.spans.iter().filter_map(|s| match &s.body {
            SpanBody::Dense(d) => Some((s.lo, s.hi, d)),
            SpanBody::Expr(_) => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_field;

    fn field(src: &str, lo: f64, hi: f64) -> Field {
        build_field(&parse_field(src).unwrap(), Window::new(lo, hi)).unwrap()
    }

    #[test]
    fn sign_field_splits_at_the_jump() {
        let f = field("on (-inf, inf): -sign(x)", -2.0, 2.0);
        assert_eq!(f.spans().len(), 2);
        assert!(f.breakpoints().iter().any(|b| b.x == 0.0 && b.kind == BreakpointKind::Jump));
        assert_eq!(f.value_ae(1.0).unwrap(), -1.0);
        assert_eq!(f.value_ae(-1.0).unwrap(), 1.0);
    }

    #[test]
    fn piece_boundaries_and_overrides_resolve_pointwise() {
        let f = field("on [-1, 0): 1; on (0, 1]: -1; at 0: 0", -1.0, 1.0);
        assert_eq!(f.value_pointwise(0.0).unwrap(), 0.0);
        assert_eq!(f.value_pointwise(-0.5).unwrap(), 1.0);
        assert_eq!(f.value_pointwise(1.0).unwrap(), -1.0);
        // the a.e. view never sees the override
        assert!(matches!(f.value_ae(0.0), Ok(v) if v == 1.0 || v == -1.0));
    }

    #[test]
    fn missing_override_is_a_point_hole() {
        let err = build_field(
            &parse_field("on [-1, 0): 1; on (0, 1]: -1").unwrap(),
            Window::new(-1.0, 1.0),
        )
        .unwrap_err();
        assert_eq!(err, BuildError::PointHole { x: 0.0 });
    }

    #[test]
    fn coverage_gaps_are_rejected() {
        let err = build_field(
            &parse_field("on [-1, 0]: 1; on [0.5, 1]: -1").unwrap(),
            Window::new(-1.0, 1.0),
        )
        .unwrap_err();
        assert!(matches!(err, BuildError::CoverageGap { .. }));
    }

    #[test]
    fn unbounded_field_is_rejected_with_location() {
        let err = build_field(
            &parse_field("on (0, 1]: 1/x; on [-1, 0]: 1").unwrap(),
            Window::new(-1.0, 1.0),
        )
        .unwrap_err();
        match err {
            BuildError::Unbounded { near } => assert!(near.abs() < 1e-9),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn log_slope_field_is_accepted_and_bounded() {
        // x log|x| vanishes at 0 even though interval arithmetic cannot see it
        let f = field("on (-inf, inf): -x*log(abs(x))", -2.0, 2.0);
        let b = f.range_bound();
        assert!(b.lo > -2.0 && b.hi < 2.0, "bound {b:?}");
        assert!(f.breakpoints().iter().any(|p| p.x == 0.0));
    }

    #[test]
    fn kink_of_min_becomes_a_breakpoint() {
        let f = field("on [-2, 2]: min(x, 0)", -2.0, 2.0);
        assert!(f
            .breakpoints()
            .iter()
            .any(|b| b.x.abs() < 1e-9 && b.kind == BreakpointKind::Kink));
        assert_eq!(f.value_ae(1.0).unwrap(), 0.0);
        assert_eq!(f.value_ae(-1.0).unwrap(), -1.0);
    }

    #[test]
    fn dense_segment_spans_carry_their_oracle() {
        let f = field(
            "dense on [0, 1]: {1, 2} measure builtin-fat-cantor; on (-inf, 0): 1; on (1, inf): 2",
            -1.0, 2.0,
        );
        let dense: Vec<_> = f.dense_spans().collect();
        assert_eq!(dense.len(), 1);
        let (lo, hi, body) = &dense[0];
        assert_eq!((*lo, *hi), (0.0, 1.0));
        assert!(body.rudin);
        let m = body.oracle.measure(0.0, 1.0, 1e-9);
        assert!(m > 0.0 && m < 1.0);
        assert!(matches!(f.value_ae(0.5), Err(FieldEvalError::TwoValued { .. })));
    }

    #[test]
    fn unknown_oracle_fails_the_build() {
        let err = build_field(
            &parse_field("dense on [0, 1]: {1, 2} measure my-oracle; on (-inf, 0): 1; on (1, inf): 2")
                .unwrap(),
            Window::new(-1.0, 2.0),
        )
        .unwrap_err();
        assert_eq!(err, BuildError::UnknownOracle { name: "my-oracle".into() });
    }

    #[test]
    fn span_lookup_prefers_the_right_side_of_a_breakpoint() {
        let f = field("on (-inf, 0): 1; on [0, inf): x", -1.0, 1.0);
        let s = f.span_at(0.0).unwrap();
        assert!(s.lo == 0.0 && s.hi == 1.0);
        assert_eq!(f.span_at(1.0).unwrap().lo, 0.0);
        assert!(f.span_at(1.5).is_none());
    }

    #[test]
    fn bound_on_partial_overlap_is_tighter_than_full_span() {
        let f = field("on (-inf, inf): x", -8.0, 8.0);
        let b = f.bound_on(-1.0, 1.0);
        assert!(b.lo >= -1.0 - 1e-12 && b.hi <= 1.0 + 1e-12, "bound {b:?}");
    }
}
