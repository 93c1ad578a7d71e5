//! Expression trees over a single real variable.
//!
//! Powers with fractional exponents are taken on the absolute value of the
//! base, so `x^0.5` means `|x|^0.5`; integer exponents act on the signed
//! base. `log` is the natural logarithm. `sign` maps to -1, 0, +1.

use crate::interval::{Interval, RangeError};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    Sign(Box<Expr>),
    Log(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("log of nonpositive value at x = {x}")]
    LogNonPositive { x: f64 },
    #[error("sqrt of negative value at x = {x}")]
    SqrtNegative { x: f64 },
    #[error("zero raised to a negative power at x = {x}")]
    ZeroToNegativePower { x: f64 },
    #[error("evaluation overflowed at x = {x}")]
    NonFinite { x: f64 },
}

/// `true` when `p` represents a mathematical integer small enough that
/// `powf` computes it exactly as a repeated product.
fn is_integer_exp(p: f64) -> bool {
    p.fract() == 0.0 && p.abs() < 9.0e15
}

pub(crate) fn pow_value(base: f64, p: f64, x: f64) -> Result<f64, EvalError> {
    if base == 0.0 && p < 0.0 {
        return Err(EvalError::ZeroToNegativePower { x });
    }
    let v = if is_integer_exp(p) {
        base.powf(p)
    } else {
        base.abs().powf(p)
    };
    Ok(v)
}

impl Expr {
    /// Pointwise evaluation. Domain violations are reported, never silently
    /// mapped to NaN; a finite result is guaranteed on success.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = self.eval_raw(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }

    fn eval_raw(&self, x: f64) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval_raw(x)?,
            Expr::Add(a, b) => a.eval_raw(x)? + b.eval_raw(x)?,
            Expr::Sub(a, b) => a.eval_raw(x)? - b.eval_raw(x)?,
            Expr::Mul(a, b) => a.eval_raw(x)? * b.eval_raw(x)?,
            Expr::Div(a, b) => {
                let d = b.eval_raw(x)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero { x });
                }
                a.eval_raw(x)? / d
            }
            Expr::Pow(a, b) => pow_value(a.eval_raw(x)?, b.eval_raw(x)?, x)?,
            Expr::Abs(a) => a.eval_raw(x)?.abs(),
            Expr::Sign(a) => {
                let v = a.eval_raw(x)?;
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Expr::Log(a) => {
                let v = a.eval_raw(x)?;
                if v <= 0.0 {
                    return Err(EvalError::LogNonPositive { x });
                }
                v.ln()
            }
            Expr::Exp(a) => a.eval_raw(x)?.exp(),
            Expr::Sqrt(a) => {
                let v = a.eval_raw(x)?;
                if v < 0.0 {
                    return Err(EvalError::SqrtNegative { x });
                }
                v.sqrt()
            }
            Expr::Min(a, b) => a.eval_raw(x)?.min(b.eval_raw(x)?),
            Expr::Max(a, b) => a.eval_raw(x)?.max(b.eval_raw(x)?),
        })
    }

    /// Interval extension: the result encloses every value the expression
    /// attains on `x` (where defined). Boxes that straddle poles or domain
    /// boundaries report [`RangeError`] instead of producing loose infinities.
    pub fn range(&self, x: Interval) -> Result<Interval, RangeError> {
        Ok(match self {
            Expr::Const(c) => Interval::point(*c),
            Expr::Var => x,
            Expr::Neg(a) => a.range(x)?.neg(),
            Expr::Add(a, b) => a.range(x)?.add(b.range(x)?)?,
            Expr::Sub(a, b) => a.range(x)?.sub(b.range(x)?)?,
            Expr::Mul(a, b) => a.range(x)?.mul(b.range(x)?)?,
            Expr::Div(a, b) => a.range(x)?.div(b.range(x)?)?,
            Expr::Pow(a, b) => a.range(x)?.pow_iv(b.range(x)?)?,
            Expr::Abs(a) => a.range(x)?.abs(),
            Expr::Sign(a) => a.range(x)?.sign(),
            Expr::Log(a) => a.range(x)?.log()?,
            Expr::Exp(a) => a.range(x)?.exp()?,
            Expr::Sqrt(a) => a.range(x)?.sqrt()?,
            Expr::Min(a, b) => a.range(x)?.min_iv(b.range(x)?),
            Expr::Max(a, b) => a.range(x)?.max_iv(b.range(x)?),
        })
    }

    /// Substitute `x := p + s * z`, producing a tree in the variable `z`.
    /// Used by one-sided analysis around the point `p`; the result is
    /// constant-folded so that pure shifts stay visible to the asymptotic
    /// rules (`x - 1` around `p = 1` becomes plain `z`).
    pub fn shifted(&self, p: f64, s: f64) -> Expr {
        let rep = match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => Expr::Add(
                Box::new(Expr::Const(p)),
                Box::new(Expr::Mul(Box::new(Expr::Const(s)), Box::new(Expr::Var))),
            ),
            Expr::Neg(a) => Expr::Neg(Box::new(a.shifted(p, s))),
            Expr::Add(a, b) => Expr::Add(Box::new(a.shifted(p, s)), Box::new(b.shifted(p, s))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.shifted(p, s)), Box::new(b.shifted(p, s))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.shifted(p, s)), Box::new(b.shifted(p, s))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.shifted(p, s)), Box::new(b.shifted(p, s))),
            Expr::Pow(a, b) => Expr::Pow(Box::new(a.shifted(p, s)), Box::new(b.shifted(p, s))),
            Expr::Abs(a) => Expr::Abs(Box::new(a.shifted(p, s))),
            Expr::Sign(a) => Expr::Sign(Box::new(a.shifted(p, s))),
            Expr::Log(a) => Expr::Log(Box::new(a.shifted(p, s))),
            Expr::Exp(a) => Expr::Exp(Box::new(a.shifted(p, s))),
            Expr::Sqrt(a) => Expr::Sqrt(Box::new(a.shifted(p, s))),
            Expr::Min(a, b) => Expr::Min(Box::new(a.shifted(p, s)), Box::new(b.shifted(p, s))),
            Expr::Max(a, b) => Expr::Max(Box::new(a.shifted(p, s)), Box::new(b.shifted(p, s))),
        };
        rep.fold()
    }

    /// Light constant folding: children first, then constant subtrees and
    /// arithmetic identities. `0 * e -> 0` is sound here because analysis
    /// only ever asks about punctured one-sided neighborhoods where `e` is
    /// defined.
    pub fn fold(&self) -> Expr {
        use Expr::*;
        let e = match self {
            Const(c) => return Const(*c),
            Var => return Var,
            Neg(a) => Neg(Box::new(a.fold())),
            Add(a, b) => Add(Box::new(a.fold()), Box::new(b.fold())),
            Sub(a, b) => Sub(Box::new(a.fold()), Box::new(b.fold())),
            Mul(a, b) => Mul(Box::new(a.fold()), Box::new(b.fold())),
            Div(a, b) => Div(Box::new(a.fold()), Box::new(b.fold())),
            Pow(a, b) => Pow(Box::new(a.fold()), Box::new(b.fold())),
            Abs(a) => Abs(Box::new(a.fold())),
            Sign(a) => Sign(Box::new(a.fold())),
            Log(a) => Log(Box::new(a.fold())),
            Exp(a) => Exp(Box::new(a.fold())),
            Sqrt(a) => Sqrt(Box::new(a.fold())),
            Min(a, b) => Min(Box::new(a.fold()), Box::new(b.fold())),
            Max(a, b) => Max(Box::new(a.fold()), Box::new(b.fold())),
        };
        // fold a fully constant node through ordinary evaluation
        if e.is_const_tree() {
            if let Ok(v) = e.eval(0.0) {
                return Const(v);
            }
        }
        match e {
            Neg(a) => {
                let (c, rest) = Self::split_const(*a);
                match rest {
                    None => Const(-c),
                    Some(Neg(inner)) if c == 0.0 => *inner,
                    Some(r) if c == 0.0 => Neg(Box::new(r)),
                    Some(r) => {
                        let nr = Neg(Box::new(r)).fold();
                        Self::with_const_offset(-c, Some(nr))
                    }
                }
            }
            Add(a, b) => {
                let (ca, ra) = Self::split_const(*a);
                let (cb, rb) = Self::split_const(*b);
                Self::with_const_offset(ca + cb, Self::join_add(ra, rb))
            }
            Sub(a, b) => {
                let (ca, ra) = Self::split_const(*a);
                let (cb, rb) = Self::split_const(*b);
                let rest = match (ra, rb) {
                    (lhs, None) => lhs,
                    (None, Some(r)) => Some(Neg(Box::new(r)).fold()),
                    (Some(l), Some(r)) => Some(Sub(Box::new(l), Box::new(r))),
                };
                Self::with_const_offset(ca - cb, rest)
            }
            Mul(a, b) => match (*a, *b) {
                (Const(c), _) | (_, Const(c)) if c == 0.0 => Const(0.0),
                (Const(c), rhs) if c == 1.0 => rhs,
                (lhs, Const(c)) if c == 1.0 => lhs,
                (Const(c), rhs) if c == -1.0 => Neg(Box::new(rhs)).fold(),
                (lhs, Const(c)) if c == -1.0 => Neg(Box::new(lhs)).fold(),
                (lhs, rhs) => Mul(Box::new(lhs), Box::new(rhs)),
            },
            Div(a, b) => match (*a, *b) {
                (lhs, Const(c)) if c == 1.0 => lhs,
                (lhs, rhs) => Div(Box::new(lhs), Box::new(rhs)),
            },
            Pow(a, b) => match (*a, *b) {
                (lhs, Const(c)) if c == 1.0 => lhs,
                (lhs, rhs) => Pow(Box::new(lhs), Box::new(rhs)),
            },
            other => other,
        }
    }

    /// View an already folded tree as `constant + rest`, looking through the
    /// top of the additive spine so translations cancel exactly.
    fn split_const(e: Expr) -> (f64, Option<Expr>) {
        use Expr::*;
        match e {
            Const(c) => (c, None),
            Add(a, b) => match (*a, *b) {
                (Const(c), r) => (c, Some(r)),
                (r, Const(c)) => (c, Some(r)),
                (a, b) => (0.0, Some(Add(Box::new(a), Box::new(b)))),
            },
            Sub(a, b) => match (*a, *b) {
                (r, Const(c)) => (-c, Some(r)),
                (Const(c), r) => (c, Some(Neg(Box::new(r)).fold())),
                (a, b) => (0.0, Some(Sub(Box::new(a), Box::new(b)))),
            },
            other => (0.0, Some(other)),
        }
    }

    fn join_add(a: Option<Expr>, b: Option<Expr>) -> Option<Expr> {
        match (a, b) {
            (None, r) | (r, None) => r,
            (Some(l), Some(r)) => Some(Expr::Add(Box::new(l), Box::new(r))),
        }
    }

    fn with_const_offset(c: f64, rest: Option<Expr>) -> Expr {
        match rest {
            None => Expr::Const(c),
            Some(r) if c == 0.0 => r,
            Some(r) => Expr::Add(Box::new(Expr::Const(c)), Box::new(r)),
        }
    }

    fn is_const_tree(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(a)
            | Expr::Abs(a)
            | Expr::Sign(a)
            | Expr::Log(a)
            | Expr::Exp(a)
            | Expr::Sqrt(a) => a.is_const_tree(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b)
            | Expr::Min(a, b)
            | Expr::Max(a, b) => a.is_const_tree() && b.is_const_tree(),
        }
    }

    /// Collect subexpressions whose zeros are structurally relevant:
    /// arguments of `sign` (jumps), `abs` and fractional powers (kinks),
    /// `min`/`max` argument differences (kinks), denominators and `log`/
    /// `sqrt` arguments (domain boundaries).
    pub fn critical_args(&self, out: &mut Vec<CriticalArg>) {
        match self {
            Expr::Const(_) | Expr::Var => {}
            Expr::Neg(a) | Expr::Abs(a) | Expr::Exp(a) => {
                if matches!(self, Expr::Abs(_)) {
                    out.push(CriticalArg { expr: (**a).clone(), kind: CriticalKind::Kink });
                }
                a.critical_args(out);
            }
            Expr::Sign(a) => {
                out.push(CriticalArg { expr: (**a).clone(), kind: CriticalKind::Jump });
                a.critical_args(out);
            }
            Expr::Log(a) | Expr::Sqrt(a) => {
                out.push(CriticalArg { expr: (**a).clone(), kind: CriticalKind::DomainEdge });
                a.critical_args(out);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.critical_args(out);
                b.critical_args(out);
            }
            Expr::Div(a, b) => {
                out.push(CriticalArg { expr: (**b).clone(), kind: CriticalKind::DomainEdge });
                a.critical_args(out);
                b.critical_args(out);
            }
            Expr::Pow(a, b) => {
                let frac = matches!(**b, Expr::Const(p) if !is_integer_exp(p));
                let neg_exp = matches!(**b, Expr::Const(p) if p < 0.0);
                if frac || neg_exp {
                    let kind = if neg_exp { CriticalKind::DomainEdge } else { CriticalKind::Kink };
                    out.push(CriticalArg { expr: (**a).clone(), kind });
                }
                a.critical_args(out);
                b.critical_args(out);
            }
            Expr::Min(a, b) | Expr::Max(a, b) => {
                out.push(CriticalArg {
                    expr: Expr::Sub(a.clone(), b.clone()),
                    kind: CriticalKind::Kink,
                });
                a.critical_args(out);
                b.critical_args(out);
            }
        }
    }
}

/// A subexpression whose zero set marks a structural point of the parent.
#[derive(Debug, Clone)]
pub struct CriticalArg {
    pub expr: Expr,
    pub kind: CriticalKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    /// Discontinuity of the parent possible (sign argument).
    Jump,
    /// Parent stays continuous but loses smoothness.
    Kink,
    /// Parent may be undefined or unbounded across the zero.
    DomainEdge,
}

// precedence levels for rendering: additive 1, multiplicative 2, unary 3, power 4
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Const(c) if *c < 0.0 => 3,
        _ => 5,
    }
}

fn write_at(e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(e);
    let parens = p < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Const(c) => write!(f, "{c}")?,
        Expr::Var => write!(f, "x")?,
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_at(a, 3, f)?;
        }
        Expr::Add(a, b) => {
            write_at(a, 1, f)?;
            write!(f, " + ")?;
            write_at(b, 2, f)?;
        }
        Expr::Sub(a, b) => {
            write_at(a, 1, f)?;
            write!(f, " - ")?;
            write_at(b, 2, f)?;
        }
        Expr::Mul(a, b) => {
            write_at(a, 2, f)?;
            write!(f, "*")?;
            write_at(b, 3, f)?;
        }
        Expr::Div(a, b) => {
            write_at(a, 2, f)?;
            write!(f, "/")?;
            write_at(b, 3, f)?;
        }
        Expr::Pow(a, b) => {
            write_at(a, 5, f)?;
            write!(f, "^")?;
            write_at(b, 3, f)?;
        }
        Expr::Abs(a) => write_call(f, "abs", a)?,
        Expr::Sign(a) => write_call(f, "sign", a)?,
        Expr::Log(a) => write_call(f, "log", a)?,
        Expr::Exp(a) => write_call(f, "exp", a)?,
        Expr::Sqrt(a) => write_call(f, "sqrt", a)?,
        Expr::Min(a, b) => write_call2(f, "min", a, b)?,
        Expr::Max(a, b) => write_call2(f, "max", a, b)?,
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, a: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    write_at(a, 0, f)?;
    write!(f, ")")
}

fn write_call2(f: &mut fmt::Formatter<'_>, name: &str, a: &Expr, b: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    write_at(a, 0, f)?;
    write!(f, ", ")?;
    write_at(b, 0, f)?;
    write!(f, ")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}
