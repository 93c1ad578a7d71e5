//! One-sided asymptotic classification of expressions near a point.
//!
//! The central object is the signed leading form of `e(p + s*z)` as
//! `z -> 0+`: either exactly zero on a punctured neighborhood, or
//! `c * z^alpha * |log z|^beta` with `c != 0`, or unknown. Forms are computed
//! structurally; where structure gives out, a log-log regression over
//! geometrically shrinking samples takes over.
//!
//! [`local_form`] classifies the positive part `max(0, e)` on a side, which
//! is the shape the sticking analysis consumes: reciprocal integrals
//! `∫ dz / g(z)` over such forms are decidably divergent or convergent.

use super::expr::Expr;
use super::Side;
use std::cmp::Ordering;

/// Classification of a nonnegative one-sided function `g(z)`, `z -> 0+`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalForm {
    /// `g` vanishes identically on a punctured one-sided neighborhood.
    Zero,
    /// `g(z) ~ c * z^alpha * |log z|^beta` with `c > 0`.
    PowerLog { c: f64, alpha: f64, beta: f64 },
    /// `g(z) -> limit > 0`.
    PositiveLimit { limit: f64 },
    /// No classification; never silently coerced into one of the others.
    Unknown,
}

/// Signed leading behavior of `e(p + s*z)` as `z -> 0+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignedForm {
    /// Exactly zero on a punctured one-sided neighborhood.
    Zero,
    /// `~ c * z^alpha * |log z|^beta`, `c != 0`. `exact` means equality,
    /// not just leading order.
    Lead { c: f64, alpha: f64, beta: f64, exact: bool },
    Unknown,
}

use SignedForm::{Lead, Unknown as FormUnknown, Zero as FormZero};

fn lead(c: f64, alpha: f64, beta: f64, exact: bool) -> SignedForm {
    debug_assert!(c != 0.0);
    if !(c.is_finite() && alpha.is_finite() && beta.is_finite()) {
        return FormUnknown;
    }
    Lead { c, alpha, beta, exact }
}

/// Compare asymptotic magnitudes `z^a1 |log z|^b1` vs `z^a2 |log z|^b2`
/// as `z -> 0+`. `Less` means the first is eventually smaller.
fn mag_cmp(a1: f64, b1: f64, a2: f64, b2: f64) -> Ordering {
    // larger power of z vanishes faster
    match a1.partial_cmp(&a2).unwrap() {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => b1.partial_cmp(&b2).unwrap(),
    }
}

/// Signed leading form of the tree `e` in the local variable `z`.
/// The tree must already be shifted so that `Var` denotes `z`.
fn form_of(e: &Expr) -> SignedForm {
    match e {
        Expr::Const(c) => {
            if *c == 0.0 {
                FormZero
            } else {
                lead(*c, 0.0, 0.0, true)
            }
        }
        Expr::Var => lead(1.0, 1.0, 0.0, true),
        Expr::Neg(a) => match form_of(a) {
            Lead { c, alpha, beta, exact } => lead(-c, alpha, beta, exact),
            other => other,
        },
        Expr::Add(a, b) => add_forms(form_of(a), form_of(b)),
        Expr::Sub(a, b) => add_forms(
            form_of(a),
            match form_of(b) {
                Lead { c, alpha, beta, exact } => lead(-c, alpha, beta, exact),
                other => other,
            },
        ),
        Expr::Mul(a, b) => match (form_of(a), form_of(b)) {
            (FormZero, _) | (_, FormZero) => FormZero,
            (Lead { c: c1, alpha: a1, beta: b1, exact: e1 },
             Lead { c: c2, alpha: a2, beta: b2, exact: e2 }) => {
                lead(c1 * c2, a1 + a2, b1 + b2, e1 && e2)
            }
            _ => FormUnknown,
        },
        Expr::Div(a, b) => match (form_of(a), form_of(b)) {
            (_, FormZero) | (_, FormUnknown) => FormUnknown,
            (FormZero, Lead { .. }) => FormZero,
            (Lead { c: c1, alpha: a1, beta: b1, exact: e1 },
             Lead { c: c2, alpha: a2, beta: b2, exact: e2 }) => {
                lead(c1 / c2, a1 - a2, b1 - b2, e1 && e2)
            }
            (FormUnknown, _) => FormUnknown,
        },
        Expr::Pow(a, q) => {
            let k = match **q {
                Expr::Const(k) => k,
                _ => return FormUnknown,
            };
            match form_of(a) {
                FormZero => {
                    if k > 0.0 {
                        FormZero
                    } else if k == 0.0 {
                        lead(1.0, 0.0, 0.0, true)
                    } else {
                        FormUnknown
                    }
                }
                Lead { c, alpha, beta, exact } => {
                    let int_exp = k.fract() == 0.0 && k.abs() < 9.0e15;
                    let new_c = if int_exp { c.powf(k) } else { c.abs().powf(k) };
                    if new_c == 0.0 || !new_c.is_finite() {
                        return FormUnknown;
                    }
                    lead(new_c, alpha * k, beta * k, exact)
                }
                FormUnknown => FormUnknown,
            }
        }
        Expr::Abs(a) => match form_of(a) {
            Lead { c, alpha, beta, exact } => lead(c.abs(), alpha, beta, exact),
            other => other,
        },
        Expr::Sign(a) => match form_of(a) {
            FormZero => FormZero,
            // the sign of the leading coefficient is the eventual sign
            Lead { c, .. } => lead(c.signum(), 0.0, 0.0, true),
            FormUnknown => FormUnknown,
        },
        Expr::Log(a) => match form_of(a) {
            FormZero | FormUnknown => FormUnknown,
            Lead { c, alpha, beta, exact } => {
                if c < 0.0 {
                    return FormUnknown;
                }
                if alpha == 0.0 && beta == 0.0 {
                    if c == 1.0 {
                        return if exact { FormZero } else { log_near_one(a) };
                    }
                    return lead(c.ln(), 0.0, 0.0, exact);
                }
                if alpha != 0.0 {
                    // log(c z^alpha |log z|^beta) ~ alpha*log z = -alpha*|log z|
                    return lead(-alpha, 0.0, 1.0, false);
                }
                FormUnknown
            }
        },
        Expr::Exp(a) => match form_of(a) {
            FormZero => lead(1.0, 0.0, 0.0, true),
            Lead { c, alpha, beta, exact } => {
                if alpha > 0.0 || (alpha == 0.0 && beta < 0.0) {
                    // argument vanishes
                    lead(1.0, 0.0, 0.0, false)
                } else if alpha == 0.0 && beta == 0.0 {
                    lead(c.exp(), 0.0, 0.0, exact)
                } else {
                    // argument diverges: growth is outside the form language
                    FormUnknown
                }
            }
            FormUnknown => FormUnknown,
        },
        Expr::Sqrt(a) => match form_of(a) {
            FormZero => FormZero,
            Lead { c, alpha, beta, exact } => {
                if c < 0.0 {
                    FormUnknown
                } else {
                    lead(c.sqrt(), alpha / 2.0, beta / 2.0, exact)
                }
            }
            FormUnknown => FormUnknown,
        },
        Expr::Min(a, b) => extremum(form_of(a), form_of(b), true),
        Expr::Max(a, b) => extremum(form_of(a), form_of(b), false),
    }
}

/// Form of `log(a)` when `a -> 1` with an unknown-rate remainder:
/// `log(a) ~ a - 1`, provided the remainder itself has a classifiable
/// vanishing form. Outer absolute values around an eventually positive
/// argument are transparent.
fn log_near_one(a: &Expr) -> SignedForm {
    let mut inner: Expr = a.clone();
    loop {
        match inner {
            Expr::Abs(x) => match form_of(&x) {
                Lead { c, .. } if c > 0.0 => inner = *x,
                Lead { c, .. } if c < 0.0 => inner = Expr::Neg(x),
                _ => {
                    inner = Expr::Abs(x);
                    break;
                }
            },
            _ => break,
        }
    }
    let u = Expr::Sub(Box::new(inner), Box::new(Expr::Const(1.0))).fold();
    match form_of(&u) {
        FormZero => FormZero,
        Lead { c, alpha, beta, .. } if alpha > 0.0 || (alpha == 0.0 && beta < 0.0) => {
            lead(c, alpha, beta, false)
        }
        _ => FormUnknown,
    }
}

fn add_forms(f: SignedForm, g: SignedForm) -> SignedForm {
    match (f, g) {
        (FormZero, other) | (other, FormZero) => other,
        (Lead { c: c1, alpha: a1, beta: b1, exact: e1 },
         Lead { c: c2, alpha: a2, beta: b2, exact: e2 }) => {
            match mag_cmp(a1, b1, a2, b2) {
                Ordering::Greater => lead(c1, a1, b1, false),
                Ordering::Less => lead(c2, a2, b2, false),
                Ordering::Equal => {
                    let c = c1 + c2;
                    if c == 0.0 {
                        if e1 && e2 {
                            FormZero
                        } else {
                            FormUnknown
                        }
                    } else {
                        lead(c, a1, b1, e1 && e2)
                    }
                }
            }
        }
        _ => FormUnknown,
    }
}

/// Leading form of `min` (`want_min`) or `max` of two branches, decided by
/// eventual pointwise comparison near `z = 0+`.
fn extremum(f: SignedForm, g: SignedForm, want_min: bool) -> SignedForm {
    let pick = |w: SignedForm| w;
    match (f, g) {
        (FormUnknown, _) | (_, FormUnknown) => FormUnknown,
        (FormZero, FormZero) => FormZero,
        (FormZero, Lead { c, .. }) | (Lead { c, .. }, FormZero) => {
            let the_lead = if matches!(f, Lead { .. }) { f } else { g };
            // a lead with positive coefficient is eventually above zero
            if (c > 0.0) == want_min {
                pick(FormZero)
            } else {
                pick(the_lead)
            }
        }
        (Lead { c: c1, alpha: a1, beta: b1, exact: e1 },
         Lead { c: c2, alpha: a2, beta: b2, exact: e2 }) => {
            if c1 > 0.0 && c2 < 0.0 {
                return pick(if want_min { g } else { f });
            }
            if c1 < 0.0 && c2 > 0.0 {
                return pick(if want_min { f } else { g });
            }
            let positive = c1 > 0.0;
            // same eventual sign: compare values; for negatives the larger
            // magnitude is the smaller value
            let first_is_smaller_value = if positive {
                match mag_cmp(a1, b1, a2, b2) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => c1 <= c2,
                }
            } else {
                match mag_cmp(a1, b1, a2, b2) {
                    Ordering::Less => false,
                    Ordering::Greater => true,
                    Ordering::Equal => c1 <= c2,
                }
            };
            let same_order = mag_cmp(a1, b1, a2, b2) == Ordering::Equal && c1 == c2;
            let winner = if first_is_smaller_value == want_min { f } else { g };
            match winner {
                Lead { c, alpha, beta, exact } => {
                    // identical exact leads stay exact; otherwise the winner's
                    // exactness survives only if the comparison was strict
                    let ex = exact && (!same_order || (e1 && e2));
                    lead(c, alpha, beta, ex)
                }
                other => other,
            }
        }
    }
}

/// Signed leading form of `e` approached from `side` of `point`.
pub fn signed_form(e: &Expr, point: f64, side: Side) -> SignedForm {
    form_of(&e.shifted(point, side.sign()))
}

/// Classify the positive part `z -> max(0, e(point + side*z))` near the
/// point. Symbolic analysis first; if it cannot decide, a log-log fit over
/// samples within `radius` of the point. `Zero` is only ever produced by the
/// symbolic path.
pub fn local_form_with_radius(e: &Expr, point: f64, side: Side, radius: f64) -> LocalForm {
    match signed_form(e, point, side) {
        FormZero => LocalForm::Zero,
        Lead { c, alpha, beta, .. } => {
            if c < 0.0 {
                // eventually negative, so the positive part vanishes
                LocalForm::Zero
            } else if alpha == 0.0 && beta == 0.0 {
                LocalForm::PositiveLimit { limit: c }
            } else {
                LocalForm::PowerLog { c, alpha, beta }
            }
        }
        FormUnknown => {
            let s = side.sign();
            numeric_local_form(|z| e.eval(point + s * z).ok(), radius)
        }
    }
}

/// [`local_form_with_radius`] with a default sampling radius of `1e-2`.
pub fn local_form(e: &Expr, point: f64, side: Side) -> LocalForm {
    local_form_with_radius(e, point, side, 1e-2)
}

/// Fit `log g = log c + alpha*log z + beta*log|log z|` on samples
/// `z_k = radius * 2^-k`, `k = 4..=40`. Requires every sample positive and
/// `R^2 >= 0.999`; otherwise `Unknown`.
pub fn numeric_local_form(g: impl Fn(f64) -> Option<f64>, radius: f64) -> LocalForm {
    let mut pts: Vec<(f64, f64, f64)> = Vec::with_capacity(37);
    for k in 4..=40 {
        let z = radius * (2f64).powi(-k);
        let v = match g(z) {
            Some(v) if v > 0.0 && v.is_finite() => v,
            _ => return LocalForm::Unknown,
        };
        pts.push((z.ln(), z.ln().abs().ln(), v.ln()));
    }
    let n = pts.len() as f64;
    let mean_y = pts.iter().map(|p| p.2).sum::<f64>() / n;
    let sst: f64 = pts.iter().map(|p| (p.2 - mean_y).powi(2)).sum();
    if sst < 1e-18 {
        // flat samples: a positive constant
        return LocalForm::PositiveLimit { limit: mean_y.exp() };
    }
    // normal equations for [1, u, v] -> y
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(u, v, y) in &pts {
        let row = [1.0, u, v];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * y;
        }
    }
    let sol = match solve3(m, rhs) {
        Some(s) => s,
        None => return LocalForm::Unknown,
    };
    let (a0, alpha, beta) = (sol[0], sol[1], sol[2]);
    let sse: f64 = pts
        .iter()
        .map(|&(u, v, y)| (y - a0 - alpha * u - beta * v).powi(2))
        .sum();
    let r2 = 1.0 - sse / sst;
    if r2 < 0.999 {
        return LocalForm::Unknown;
    }
    let c = a0.exp();
    if !c.is_finite() || c <= 0.0 {
        return LocalForm::Unknown;
    }
    if alpha.abs() < 0.02 && beta.abs() < 0.05 {
        LocalForm::PositiveLimit { limit: c }
    } else {
        LocalForm::PowerLog { c, alpha, beta }
    }
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
        })?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Outcome of a one-sided limit computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LimitOutcome {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
    Unknown,
}

use LimitOutcome::{Finite, MinusInfinity, PlusInfinity, Unknown as LimUnknown};

fn limit_from_form(f: SignedForm) -> LimitOutcome {
    match f {
        FormZero => Finite(0.0),
        Lead { c, alpha, beta, .. } => {
            if alpha > 0.0 || (alpha == 0.0 && beta < 0.0) {
                Finite(0.0)
            } else if alpha == 0.0 && beta == 0.0 {
                Finite(c)
            } else if c > 0.0 {
                PlusInfinity
            } else {
                MinusInfinity
            }
        }
        FormUnknown => LimUnknown,
    }
}

/// Structural one-sided limit of `e` at `point` from `side`. Falls back to
/// the signed form on indeterminate combinations; numeric refinement is the
/// caller's business when this returns `Unknown`.
pub(crate) fn one_sided_limit_form(e: &Expr, point: f64, side: Side) -> LimitOutcome {
    let tree = e.shifted(point, side.sign());
    limit_of(&tree)
}

fn limit_of(e: &Expr) -> LimitOutcome {
    let structural = match e {
        Expr::Const(c) => Finite(*c),
        Expr::Var => Finite(0.0),
        Expr::Neg(a) => match limit_of(a) {
            Finite(v) => Finite(-v),
            PlusInfinity => MinusInfinity,
            MinusInfinity => PlusInfinity,
            LimUnknown => LimUnknown,
        },
        Expr::Add(a, b) => match (limit_of(a), limit_of(b)) {
            (Finite(u), Finite(v)) => Finite(u + v),
            (PlusInfinity, Finite(_)) | (Finite(_), PlusInfinity) | (PlusInfinity, PlusInfinity) => {
                PlusInfinity
            }
            (MinusInfinity, Finite(_)) | (Finite(_), MinusInfinity)
            | (MinusInfinity, MinusInfinity) => MinusInfinity,
            _ => LimUnknown,
        },
        Expr::Sub(a, b) => {
            return limit_of(&Expr::Add(
                Box::new((**a).clone()),
                Box::new(Expr::Neg(b.clone())),
            ))
        }
        Expr::Mul(a, b) => match (limit_of(a), limit_of(b)) {
            (Finite(u), Finite(v)) => Finite(u * v),
            (Finite(u), inf) | (inf, Finite(u))
                if u != 0.0 && matches!(inf, PlusInfinity | MinusInfinity) =>
            {
                let pos = (u > 0.0) == matches!(inf, PlusInfinity);
                if pos { PlusInfinity } else { MinusInfinity }
            }
            (PlusInfinity, PlusInfinity) | (MinusInfinity, MinusInfinity) => PlusInfinity,
            (PlusInfinity, MinusInfinity) | (MinusInfinity, PlusInfinity) => MinusInfinity,
            _ => LimUnknown,
        },
        Expr::Div(a, b) => match (limit_of(a), limit_of(b)) {
            (Finite(u), Finite(v)) if v != 0.0 => Finite(u / v),
            (Finite(_), PlusInfinity) | (Finite(_), MinusInfinity) => Finite(0.0),
            _ => LimUnknown,
        },
        Expr::Pow(a, q) => {
            let k = match **q {
                Expr::Const(k) => k,
                _ => return limit_from_form(form_of(e)),
            };
            match limit_of(a) {
                Finite(v) => {
                    if v == 0.0 && k < 0.0 {
                        // sign depends on how the base approaches zero
                        limit_from_form(form_of(e))
                    } else {
                        match super::expr::pow_value(v, k, f64::NAN) {
                            Ok(w) if w.is_finite() => Finite(w),
                            _ => LimUnknown,
                        }
                    }
                }
                PlusInfinity => {
                    if k > 0.0 {
                        PlusInfinity
                    } else if k == 0.0 {
                        Finite(1.0)
                    } else {
                        Finite(0.0)
                    }
                }
                MinusInfinity => {
                    let int_exp = k.fract() == 0.0 && k.abs() < 9.0e15;
                    if k > 0.0 {
                        if int_exp && (k as i64) % 2 == 1 {
                            MinusInfinity
                        } else {
                            PlusInfinity
                        }
                    } else if k == 0.0 {
                        Finite(1.0)
                    } else {
                        Finite(0.0)
                    }
                }
                LimUnknown => LimUnknown,
            }
        }
        Expr::Abs(a) => match limit_of(a) {
            Finite(v) => Finite(v.abs()),
            PlusInfinity | MinusInfinity => PlusInfinity,
            LimUnknown => LimUnknown,
        },
        Expr::Sign(a) => match limit_of(a) {
            Finite(v) if v > 0.0 => Finite(1.0),
            Finite(v) if v < 0.0 => Finite(-1.0),
            Finite(_) => match form_of(a) {
                FormZero => Finite(0.0),
                Lead { c, .. } => Finite(c.signum()),
                FormUnknown => LimUnknown,
            },
            PlusInfinity => Finite(1.0),
            MinusInfinity => Finite(-1.0),
            LimUnknown => LimUnknown,
        },
        Expr::Log(a) => match limit_of(a) {
            Finite(v) if v > 0.0 => Finite(v.ln()),
            Finite(v) if v == 0.0 => MinusInfinity,
            Finite(_) => LimUnknown,
            PlusInfinity => PlusInfinity,
            MinusInfinity | LimUnknown => LimUnknown,
        },
        Expr::Exp(a) => match limit_of(a) {
            Finite(v) => Finite(v.exp()),
            PlusInfinity => PlusInfinity,
            MinusInfinity => Finite(0.0),
            LimUnknown => LimUnknown,
        },
        Expr::Sqrt(a) => match limit_of(a) {
            Finite(v) if v >= 0.0 => Finite(v.sqrt()),
            PlusInfinity => PlusInfinity,
            _ => LimUnknown,
        },
        Expr::Min(a, b) => combine_minmax(limit_of(a), limit_of(b), true),
        Expr::Max(a, b) => combine_minmax(limit_of(a), limit_of(b), false),
    };
    match structural {
        LimUnknown => limit_from_form(form_of(e)),
        Finite(v) if !v.is_finite() => limit_from_form(form_of(e)),
        done => done,
    }
}

fn combine_minmax(a: LimitOutcome, b: LimitOutcome, want_min: bool) -> LimitOutcome {
    let rank = |l: &LimitOutcome| match l {
        MinusInfinity => 0,
        Finite(_) => 1,
        PlusInfinity => 2,
        LimUnknown => 3,
    };
    if rank(&a) == 3 || rank(&b) == 3 {
        return LimUnknown;
    }
    let first = match (a, b) {
        (Finite(u), Finite(v)) => {
            return Finite(if want_min { u.min(v) } else { u.max(v) })
        }
        _ => {
            let a_low = match (&a, &b) {
                (MinusInfinity, _) => true,
                (_, MinusInfinity) => false,
                (Finite(_), PlusInfinity) => true,
                (PlusInfinity, Finite(_)) => false,
                _ => true,
            };
            if a_low == want_min { a } else { b }
        }
    };
    first
}
