//! Measure oracles backing dense two-valued segments.
//!
//! A dense segment assigns one of two velocities depending on membership in
//! a measurable set `S`. The analysis never enumerates `S`; it only asks an
//! oracle for `|S ∩ [a, b]|` to a requested accuracy, plus whether `S` and
//! its complement both meet every subinterval with positive measure.

/// Measurable-set interface used by dense segments.
pub trait MeasureOracle: Send + Sync {
    /// Lebesgue measure of the oracle's set intersected with `[a, b]`,
    /// accurate to `tol` absolutely. `a > b` yields `0`.
    fn measure(&self, a: f64, b: f64, tol: f64) -> f64;

    /// True when both the set and its complement intersect every
    /// subinterval of the segment in positive measure, so that both segment
    /// velocities are essential everywhere.
    fn rudin_dense(&self) -> bool;
}

/// Fat Cantor set on `[lo, hi]` retaining a `ratio` fraction of its span.
///
/// At step `k` each of the `2^k` surviving intervals loses a centered open
/// gap of length `2 (1 - ratio) 4^-(k+1)` times the span, which is feasible
/// for every `ratio` in `(0, 1)` and leaves exactly `ratio * span` in the
/// limit. Measure queries descend the construction tree; only nodes
/// straddling a query endpoint recurse, so the cost is linear in the depth
/// cap.
#[derive(Debug, Clone, Copy)]
pub struct SvcSet {
    lo: f64,
    hi: f64,
    ratio: f64,
}

const MAX_DEPTH: u32 = 64;

impl SvcSet {
    pub fn new(lo: f64, hi: f64, ratio: f64) -> SvcSet {
        assert!(lo.is_finite() && hi.is_finite() && lo < hi);
        assert!(ratio > 0.0 && ratio < 1.0);
        SvcSet { lo, hi, ratio }
    }

    pub fn span(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn total_measure(&self) -> f64 {
        self.ratio * (self.hi - self.lo)
    }

    /// Centered gap length at construction step `depth`, in absolute units.
    fn gap_len(&self, depth: u32) -> f64 {
        2.0 * (1.0 - self.ratio) * 0.25f64.powi(depth as i32 + 1) * (self.hi - self.lo)
    }

    /// Exact set measure inside one depth-`d` construction node.
    fn node_measure(&self, depth: u32) -> f64 {
        self.total_measure() * (2f64).powi(-(depth as i32))
    }

    fn descend(&self, x0: f64, x1: f64, depth: u32, a: f64, b: f64) -> f64 {
        if b <= x0 || a >= x1 {
            return 0.0;
        }
        if a <= x0 && x1 <= b {
            return self.node_measure(depth);
        }
        if depth >= MAX_DEPTH {
            let overlap = (b.min(x1) - a.max(x0)).max(0.0);
            return self.node_measure(depth) * overlap / (x1 - x0);
        }
        let c = 0.5 * (x0 + x1);
        let half_gap = 0.5 * self.gap_len(depth);
        self.descend(x0, c - half_gap, depth + 1, a, b)
            + self.descend(c + half_gap, x1, depth + 1, a, b)
    }

    /// Interval of the rank-`r` gap in breadth-first order over the
    /// construction tree (rank 0 is the root's centered gap).
    fn gap_by_rank(&self, rank: u64) -> (f64, f64) {
        let depth = (64 - (rank + 1).leading_zeros() - 1) as u32;
        let index = rank + 1 - (1u64 << depth);
        let (mut x0, mut x1) = (self.lo, self.hi);
        for level in 0..depth {
            let bit = (index >> (depth - 1 - level)) & 1;
            let c = 0.5 * (x0 + x1);
            let half_gap = 0.5 * self.gap_len(level);
            if bit == 0 {
                x1 = c - half_gap;
            } else {
                x0 = c + half_gap;
            }
        }
        let c = 0.5 * (x0 + x1);
        let half_gap = 0.5 * self.gap_len(depth);
        (c - half_gap, c + half_gap)
    }
}

impl MeasureOracle for SvcSet {
    fn measure(&self, a: f64, b: f64, _tol: f64) -> f64 {
        if !(a < b) {
            return 0.0;
        }
        self.descend(self.lo, self.hi, 0, a, b)
    }

    fn rudin_dense(&self) -> bool {
        // the complement is dense but the set itself misses every gap
        false
    }
}

/// Countable union of fat Cantor sets packed so that both the union and its
/// complement meet every subinterval of `[lo, hi]` in positive measure.
///
/// Placement is a deterministic breadth-first schedule over free intervals:
/// the `i`-th placed set occupies the middle half of its free interval with
/// retention ratio `2^-(i+2)`, and the two side quarters plus every gap of
/// the new set re-enter the queue. Decreasing ratios keep the union's local
/// density strictly below one everywhere while the schedule's density puts
/// some set inside every subinterval.
///
/// The sets are pairwise disjoint, so the union's measure is the sum of
/// per-set measures. Truncating after `n` sets leaves a tail of at most
/// `span * 2^-(n+1)`, which picks the truncation depth for a tolerance.
pub struct FatCantorUnion {
    lo: f64,
    hi: f64,
    min_sets: usize,
    sets: Vec<SvcSet>,
}

enum Slot {
    Free(f64, f64),
    Gap { set: usize, rank: u64 },
}

/// Any tolerance above `span * 2^-65` is served from this many sets.
const SCHEDULE_LEN: usize = 64;

impl FatCantorUnion {
    pub fn new(lo: f64, hi: f64) -> FatCantorUnion {
        FatCantorUnion::with_min_sets(lo, hi, 0)
    }

    /// Same union, but never truncated below `n` sets regardless of the
    /// query tolerance. Useful for probing truncation insensitivity.
    pub fn with_min_sets(lo: f64, hi: f64, n: usize) -> FatCantorUnion {
        assert!(lo.is_finite() && hi.is_finite() && lo < hi);
        let sets = schedule(lo, hi, SCHEDULE_LEN.max(n));
        FatCantorUnion { lo, hi, min_sets: n, sets }
    }

    fn sets_for_tol(&self, tol: f64) -> usize {
        let span = self.hi - self.lo;
        let mut n = 1usize;
        while span * (2f64).powi(-(n as i32 + 1)) > 0.5 * tol && n < self.sets.len() {
            n += 1;
        }
        n.max(self.min_sets).min(self.sets.len())
    }
}

/// First `n` sets of the deterministic placement schedule on `[lo, hi]`.
fn schedule(lo: f64, hi: f64, n: usize) -> Vec<SvcSet> {
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(Slot::Free(lo, hi));
    let mut sets: Vec<SvcSet> = Vec::with_capacity(n);
    while sets.len() < n {
        match queue.pop_front().expect("schedule queue never drains") {
            Slot::Free(lo, hi) => {
                let q = 0.25 * (hi - lo);
                let idx = sets.len();
                let ratio = (2f64).powi(-(idx as i32 + 2)).max(1e-18);
                sets.push(SvcSet::new(lo + q, hi - q, ratio));
                queue.push_back(Slot::Free(lo, lo + q));
                queue.push_back(Slot::Free(hi - q, hi));
                queue.push_back(Slot::Gap { set: idx, rank: 0 });
            }
            Slot::Gap { set, rank } => {
                let (glo, ghi) = sets[set].gap_by_rank(rank);
                queue.push_back(Slot::Free(glo, ghi));
                queue.push_back(Slot::Gap { set, rank: rank + 1 });
            }
        }
    }
    sets
}

impl MeasureOracle for FatCantorUnion {
    fn measure(&self, a: f64, b: f64, tol: f64) -> f64 {
        if !(a < b) {
            return 0.0;
        }
        let n = self.sets_for_tol(tol);
        self.sets[..n].iter().map(|s| s.measure(a, b, tol)).sum()
    }

    fn rudin_dense(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_half_ratio_set_has_half_measure() {
        let s = SvcSet::new(0.0, 1.0, 0.5);
        assert_eq!(s.measure(0.0, 1.0, 1e-12), 0.5);
        assert_eq!(s.total_measure(), 0.5);
    }

    #[test]
    fn half_query_splits_symmetrically() {
        let s = SvcSet::new(0.0, 1.0, 0.5);
        let left = s.measure(0.0, 0.5, 1e-12);
        let right = s.measure(0.5, 1.0, 1e-12);
        assert!((left - 0.25).abs() < 1e-12);
        assert!((right - 0.25).abs() < 1e-12);
    }

    #[test]
    fn central_gap_is_empty() {
        // ratio 1/2 removes (3/8, 5/8) first
        let s = SvcSet::new(0.0, 1.0, 0.5);
        assert_eq!(s.measure(0.4, 0.6, 1e-12), 0.0);
    }

    #[test]
    fn measure_is_additive_across_a_cut() {
        let s = SvcSet::new(-1.0, 3.0, 0.3);
        for cut in [-0.7, 0.0, 0.31, 2.9] {
            let whole = s.measure(-1.0, 3.0, 1e-12);
            let split = s.measure(-1.0, cut, 1e-12) + s.measure(cut, 3.0, 1e-12);
            assert!((whole - split).abs() < 1e-10, "cut {cut}");
        }
    }

    #[test]
    fn union_is_positive_on_small_subintervals_but_never_full() {
        let u = FatCantorUnion::new(0.0, 1.0);
        for (a, b) in [(0.0, 1.0), (0.01, 0.02), (0.3, 0.35), (0.6, 0.7), (0.875, 0.9)] {
            let m = u.measure(a, b, 1e-10);
            assert!(m > 0.0, "empty on [{a}, {b}]");
            assert!(m < 0.9 * (b - a), "almost full on [{a}, {b}]: {m}");
        }
    }

    #[test]
    fn union_truncation_depth_does_not_move_the_answer() {
        let shallow = FatCantorUnion::new(0.0, 2.0);
        let deep = FatCantorUnion::with_min_sets(0.0, 2.0, 48);
        for (a, b) in [(0.0, 2.0), (0.3, 1.1), (1.9, 2.0)] {
            let tol = 1e-9;
            let d = (shallow.measure(a, b, tol) - deep.measure(a, b, tol)).abs();
            assert!(d <= tol, "drift {d} on [{a}, {b}]");
        }
    }

    #[test]
    fn gap_ranks_enumerate_disjoint_intervals() {
        let s = SvcSet::new(0.0, 1.0, 0.25);
        let gaps: Vec<_> = (0..15).map(|r| s.gap_by_rank(r)).collect();
        for (i, g) in gaps.iter().enumerate() {
            assert!(g.0 < g.1, "gap {i} inverted");
            assert!(s.measure(g.0, g.1, 1e-12) < 1e-12, "gap {i} meets the set");
            for h in &gaps[i + 1..] {
                assert!(g.1 <= h.0 || h.1 <= g.0, "gaps overlap");
            }
        }
    }
}
