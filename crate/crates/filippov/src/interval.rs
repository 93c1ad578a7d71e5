//! Closed interval arithmetic over finite `f64` endpoints.
//!
//! Used for range bounding of piece expressions (boundedness checks, funnel
//! propagation, root isolation). Endpoints are always finite; operations that
//! cannot produce a finite enclosure report why, so callers can subdivide or
//! hand the box to the asymptotic machinery instead.
//!
//! Rounding is round-to-nearest, not directed. Callers that need a strict
//! outer enclosure apply [`Interval::widen`] on top.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Why a finite range bound could not be produced for a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeError {
    /// The operation is undefined on the whole box (log of a nonpositive
    /// range, sqrt of a negative range, ...). Subdividing cannot help.
    Domain,
    /// The box straddles a pole or a domain boundary; subdividing away from
    /// it may produce finite bounds.
    Indeterminate,
    /// Exponent is a non-degenerate interval over a base touching zero or
    /// negative values; no bounding rule is implemented.
    VariableExponent,
    /// An endpoint overflowed to infinity or NaN.
    NonFinite,
}

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeError::Domain => write!(f, "operation undefined on the whole box"),
            RangeError::Indeterminate => write!(f, "box straddles a pole or domain boundary"),
            RangeError::VariableExponent => {
                write!(f, "variable exponent over a base touching zero or negatives")
            }
            RangeError::NonFinite => write!(f, "range endpoint overflowed"),
        }
    }
}

fn fin(lo: f64, hi: f64) -> Result<Interval, RangeError> {
    if lo.is_finite() && hi.is_finite() {
        Ok(Interval { lo, hi })
    } else {
        Err(RangeError::NonFinite)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn hull(&self, other: Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Largest absolute value attained on the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Symmetric absolute inflation, for callers that need strict outer
    /// enclosures on top of round-to-nearest arithmetic.
    pub fn widen(&self, eps: f64) -> Interval {
        Interval::new(self.lo - eps, self.hi + eps)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn add(&self, o: Interval) -> Result<Interval, RangeError> {
        fin(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(&self, o: Interval) -> Result<Interval, RangeError> {
        fin(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn mul(&self, o: Interval) -> Result<Interval, RangeError> {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let mut lo = c[0];
        let mut hi = c[0];
        for v in &c[1..] {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        fin(lo, hi)
    }

    pub fn div(&self, o: Interval) -> Result<Interval, RangeError> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return Err(RangeError::Indeterminate);
        }
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let mut lo = c[0];
        let mut hi = c[0];
        for v in &c[1..] {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        fin(lo, hi)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval::new(0.0, self.mag())
        }
    }

    /// Range of the sign step function over the box. Zero is attained when
    /// the box touches zero, so the enclosure includes it then.
    pub fn sign(&self) -> Interval {
        let lo = if self.lo < 0.0 {
            -1.0
        } else if self.lo == 0.0 {
            0.0
        } else {
            1.0
        };
        let hi = if self.hi > 0.0 {
            1.0
        } else if self.hi == 0.0 {
            0.0
        } else {
            -1.0
        };
        Interval::new(lo, hi)
    }

    pub fn log(&self) -> Result<Interval, RangeError> {
        if self.hi <= 0.0 {
            Err(RangeError::Domain)
        } else if self.lo <= 0.0 {
            Err(RangeError::Indeterminate)
        } else {
            fin(self.lo.ln(), self.hi.ln())
        }
    }

    pub fn exp(&self) -> Result<Interval, RangeError> {
        fin(self.lo.exp(), self.hi.exp())
    }

    pub fn sqrt(&self) -> Result<Interval, RangeError> {
        if self.hi < 0.0 {
            Err(RangeError::Domain)
        } else if self.lo < 0.0 {
            Err(RangeError::Indeterminate)
        } else {
            fin(self.lo.sqrt(), self.hi.sqrt())
        }
    }

    pub fn min_iv(&self, o: Interval) -> Interval {
        Interval::new(self.lo.min(o.lo), self.hi.min(o.hi))
    }

    pub fn max_iv(&self, o: Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    /// Power with a constant exponent. Integer exponents act on the signed
    /// base; fractional exponents act on `|base|`, matching pointwise
    /// evaluation of the expression language.
    pub fn powc(&self, p: f64) -> Result<Interval, RangeError> {
        let is_int = p.fract() == 0.0 && p.abs() < 9.0e15;
        if is_int {
            let n = p as i64;
            if n == 0 {
                return Ok(Interval::point(1.0));
            }
            if n < 0 {
                let rec = self.powc(-p)?;
                return Interval::point(1.0).div(rec);
            }
            if n % 2 == 1 {
                return fin(powi_f(self.lo, n), powi_f(self.hi, n));
            }
            // even power: minimum at the point closest to zero
            let a = self.abs();
            return fin(powi_f(a.lo, n), powi_f(a.hi, n));
        }
        let a = self.abs();
        if p > 0.0 {
            fin(a.lo.powf(p), a.hi.powf(p))
        } else if a.lo <= 0.0 {
            Err(RangeError::Indeterminate)
        } else {
            fin(a.hi.powf(p), a.lo.powf(p))
        }
    }

    /// Power with an interval exponent: only defined for strictly positive
    /// bases, via `exp(q * log(base))`.
    pub fn pow_iv(&self, q: Interval) -> Result<Interval, RangeError> {
        if q.is_point() {
            return self.powc(q.lo);
        }
        if self.lo <= 0.0 {
            return Err(RangeError::VariableExponent);
        }
        self.log()?.mul(q)?.exp()
    }
}

fn powi_f(base: f64, n: i64) -> f64 {
    if n.unsigned_abs() <= u32::MAX as u64 {
        base.powi(n as i32)
    } else {
        base.powf(n as f64)
    }
}
