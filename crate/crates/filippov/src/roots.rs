//! Interval-certified zero isolation and scalar root refinement.

use crate::dsl::Expr;
use crate::interval::Interval;

/// A maximal connected subset of `{x : e(x) = 0}` found on a search
/// interval. Points are reported with `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ZeroSpan {
    pub lo: f64,
    pub hi: f64,
    /// Certified by an exact `[0, 0]` range enclosure rather than by
    /// bisection down to resolution.
    pub exact: bool,
}

impl ZeroSpan {
    #[cfg(test)]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// Isolate the zero set of `e` on `[lo, hi]` to width `res`.
///
/// Interval evaluation drives a bisection worklist: cells whose range
/// excludes zero are discarded, cells with an exact `[0, 0]` enclosure are
/// kept whole, everything else is split down to `res` and the surviving
/// cells are merged. Merged clusters that look like isolated roots are
/// sharpened by bracketed refinement. Cells where evaluation fails are kept
/// conservatively, so the result over-approximates rather than misses.
pub(crate) fn zero_spans(e: &Expr, lo: f64, hi: f64, res: f64) -> Vec<ZeroSpan> {
    debug_assert!(res > 0.0);
    if !(lo < hi) {
        if lo == hi {
            return match e.eval(lo) {
                Ok(v) if v == 0.0 => vec![ZeroSpan { lo, hi, exact: true }],
                _ => Vec::new(),
            };
        }
        return Vec::new();
    }
    #[derive(Clone, Copy)]
    enum Cell {
        Exact(f64, f64),
        Maybe(f64, f64),
    }
    let mut out: Vec<Cell> = Vec::new();
    let mut work = vec![(lo, hi)];
    while let Some((a, b)) = work.pop() {
        match e.range(Interval::new(a, b)) {
            Ok(r) if !r.contains(0.0) => continue,
            Ok(r) if r.lo == 0.0 && r.hi == 0.0 => {
                out.push(Cell::Exact(a, b));
                continue;
            }
            _ => {}
        }
        if b - a <= res {
            out.push(Cell::Maybe(a, b));
            continue;
        }
        let m = 0.5 * (a + b);
        work.push((m, b));
        work.push((a, m));
    }
    if out.is_empty() {
        return Vec::new();
    }
    out.sort_by(|x, y| {
        let lx = match x {
            Cell::Exact(l, _) | Cell::Maybe(l, _) => *l,
        };
        let ly = match y {
            Cell::Exact(l, _) | Cell::Maybe(l, _) => *l,
        };
        lx.partial_cmp(&ly).unwrap()
    });
    // merge touching cells into clusters; a cluster is exact if any part is
    let mut clusters: Vec<ZeroSpan> = Vec::new();
    for c in out {
        let (l, h, ex) = match c {
            Cell::Exact(l, h) => (l, h, true),
            Cell::Maybe(l, h) => (l, h, false),
        };
        match clusters.last_mut() {
            Some(prev) if l <= prev.hi + res * 0.5 => {
                prev.hi = prev.hi.max(h);
                prev.exact |= ex;
            }
            _ => clusters.push(ZeroSpan { lo: l, hi: h, exact: ex }),
        }
    }
    for cl in &mut clusters {
        if cl.exact || cl.hi - cl.lo > 8.0 * res {
            continue;
        }
        // isolated root candidate: sharpen by a sign bracket just outside
        let a = (cl.lo - 2.0 * res).max(lo);
        let b = (cl.hi + 2.0 * res).min(hi);
        let (fa, fb) = match (e.eval(a), e.eval(b)) {
            (Ok(u), Ok(v)) => (u, v),
            _ => {
                let m = 0.5 * (cl.lo + cl.hi);
                *cl = ZeroSpan { lo: m, hi: m, exact: false };
                continue;
            }
        };
        let r = if fa == 0.0 {
            a
        } else if fb == 0.0 {
            b
        } else if fa.signum() != fb.signum() {
            brent(|x| e.eval(x).unwrap_or(f64::NAN), a, b, fa, fb, res * 1e-3)
        } else {
            // tangential zero: settle for the cluster midpoint
            0.5 * (cl.lo + cl.hi)
        };
        *cl = ZeroSpan { lo: r, hi: r, exact: false };
    }
    clusters
}

/// Brent root refinement on a bracket `[a, b]` with `f(a) = fa`, `f(b) = fb`
/// of opposite signs. Returns a point within `tol` of a sign change.
pub(crate) fn brent(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: f64,
) -> f64 {
    debug_assert!(fa.signum() != fb.signum());
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() < tol {
            return b;
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo_lim = (3.0 * a + b) / 4.0;
        let between = s > lo_lim.min(b) && s < lo_lim.max(b);
        let step_ok = if bisected {
            (s - b).abs() < 0.5 * (b - c).abs() && (b - c).abs() > tol
        } else {
            (s - b).abs() < 0.5 * (c - d).abs() && (c - d).abs() > tol
        };
        if !between || !step_ok || !s.is_finite() {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let mut fs = f(s);
        if !fs.is_finite() {
            s = 0.5 * (a + b);
            fs = f(s);
            if !fs.is_finite() {
                return b;
            }
        }
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_field;

    fn expr_of(src: &str) -> Expr {
        parse_field(&format!("on (-inf, inf): {src}")).unwrap().pieces[0].expr.clone()
    }

    #[test]
    fn isolates_simple_roots_sharply() {
        let e = expr_of("x^3 - x");
        let zs = zero_spans(&e, -2.0, 2.0, 1e-12);
        assert_eq!(zs.len(), 3);
        for (z, want) in zs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!(z.is_point());
            assert!((z.lo - want).abs() < 1e-9, "root {} vs {}", z.lo, want);
        }
    }

    #[test]
    fn reports_plateau_zero_as_interval() {
        let e = expr_of("min(x, 0)");
        let zs = zero_spans(&e, -2.0, 2.0, 1e-10);
        assert_eq!(zs.len(), 1);
        let z = zs[0];
        assert!(z.exact);
        assert!(z.lo.abs() < 1e-9 && (z.hi - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tangential_zero_collapses_to_a_point() {
        let e = expr_of("x^2");
        let zs = zero_spans(&e, -1.0, 1.0, 1e-12);
        assert_eq!(zs.len(), 1);
        assert!(zs[0].is_point());
        assert!(zs[0].lo.abs() < 1e-6);
    }

    #[test]
    fn certifies_absence_of_zeros() {
        let e = expr_of("x^2 + 1");
        assert!(zero_spans(&e, -3.0, 3.0, 1e-12).is_empty());
    }

    #[test]
    fn brent_refines_transcendental_root() {
        let f = |x: f64| x.exp() - 2.0;
        let r = brent(f, 0.0, 1.0, f(0.0), f(1.0), 1e-14);
        assert!((r - 2f64.ln()).abs() < 1e-12);
    }
}
