use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lower edge of the default evaluation window used for sign scans and
/// residual sweeps on half-lines.
pub const WINDOW_LO: f64 = 1e-6;
/// Upper edge of the default evaluation window; every eigenfunction in
/// [`crate::potentials`] is negligible beyond it for default parameters.
pub const WINDOW_HI: f64 = 60.0;

/// Open interval `(lo, hi)`; `hi` may be `+∞`. Endpoints are never evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) || lo == T::infinity() {
            return Err(Error::Domain(format!("invalid interval ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    /// `(0, ∞)`.
    pub fn half_line() -> Self {
        Self {
            lo: T::zero(),
            hi: T::infinity(),
        }
    }

    /// The default evaluation window `[1e-6, 60]`.
    pub fn default_window() -> Self {
        Self {
            lo: T::lit(WINDOW_LO),
            hi: T::lit(WINDOW_HI),
        }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn span(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Self { lo, hi })
    }

    /// Whether a sample grid on this interval should be logarithmic: the
    /// interval sits on the positive axis and spans two decades or more.
    pub fn prefers_log_spacing(&self) -> bool {
        self.lo > T::zero() && self.hi.is_finite() && self.hi / self.lo >= T::lit(100.0)
    }

    /// `n` strictly interior points (cell midpoints), uniform or logarithmic.
    /// The interval must be bounded.
    pub fn grid(&self, n: usize) -> Vec<T> {
        if n == 0 || !self.is_bounded() {
            return Vec::new();
        }
        let nt = T::count(n);
        let half = T::lit(0.5);
        if self.prefers_log_spacing() {
            let (a, b) = (self.lo.ln(), self.hi.ln());
            let step = (b - a) / nt;
            (0..n)
                .map(|i| (a + (T::count(i) + half) * step).exp())
                .collect()
        } else {
            let step = self.span() / nt;
            (0..n)
                .map(|i| self.lo + (T::count(i) + half) * step)
                .collect()
        }
    }
}

/// Ordered union of pairwise disjoint open intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain<T> {
    intervals: Vec<Interval<T>>,
}

impl<T: Real> Domain<T> {
    /// Sorts the intervals by `lo` and rejects overlaps. Touching endpoints
    /// are allowed; the shared point belongs to neither interval.
    pub fn new(mut intervals: Vec<Interval<T>>) -> Result<Self> {
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("interval bounds are not NaN"));
        for pair in intervals.windows(2) {
            if pair[0].hi > pair[1].lo {
                return Err(Error::Domain(format!(
                    "overlapping intervals ({}, {}) and ({}, {})",
                    pair[0].lo, pair[0].hi, pair[1].lo, pair[1].hi
                )));
            }
        }
        Ok(Self { intervals })
    }

    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
        }
    }

    pub fn single(lo: T, hi: T) -> Result<Self> {
        Ok(Self {
            intervals: vec![Interval::new(lo, hi)?],
        })
    }

    pub fn half_line() -> Self {
        Self {
            intervals: vec![Interval::half_line()],
        }
    }

    pub fn intervals(&self) -> &[Interval<T>] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, x: T) -> bool {
        self.component(x).is_some()
    }

    /// The interval containing `x`, if any.
    pub fn component(&self, x: T) -> Option<&Interval<T>> {
        self.intervals.iter().find(|iv| iv.contains(x))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        out.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("interval bounds are not NaN"));
        Self { intervals: out }
    }

    /// Intersection with a single window, e.g. to make every piece bounded.
    pub fn clip(&self, window: &Interval<T>) -> Self {
        Self {
            intervals: self
                .intervals
                .iter()
                .filter_map(|iv| iv.intersect(window))
                .collect(),
        }
    }

    /// Removes `[p - guard, p + guard]` around every point `p`. Pieces that
    /// vanish are dropped. With `guard = 0` the points are simply split out.
    pub fn excise(&self, points: &[T], guard: T) -> Self {
        let mut pieces = self.intervals.clone();
        for &p in points {
            let mut next = Vec::with_capacity(pieces.len() + 1);
            for iv in pieces {
                if p + guard <= iv.lo || p - guard >= iv.hi {
                    next.push(iv);
                    continue;
                }
                if iv.lo < p - guard {
                    next.push(Interval {
                        lo: iv.lo,
                        hi: p - guard,
                    });
                }
                if p + guard < iv.hi {
                    next.push(Interval {
                        lo: p + guard,
                        hi: iv.hi,
                    });
                }
            }
            pieces = next;
        }
        Self { intervals: pieces }
    }

    /// `n` interior sample points spread over the domain clipped to `window`.
    /// Points are shared out evenly between the clipped pieces.
    pub fn grid(&self, n: usize, window: &Interval<T>) -> Vec<T> {
        let clipped = self.clip(window);
        let m = clipped.intervals.len();
        if m == 0 || n == 0 {
            return Vec::new();
        }
        let base = n / m;
        let extra = n % m;
        clipped
            .intervals
            .iter()
            .enumerate()
            .flat_map(|(i, iv)| iv.grid(base + usize::from(i < extra)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_rejects_reversed_bounds() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn domain_sorts_and_rejects_overlap() {
        let d = Domain::new(vec![
            Interval::new(2.0, 3.0).unwrap(),
            Interval::new(0.0, 1.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(d.intervals()[0].lo(), 0.0);
        assert!(Domain::new(vec![
            Interval::new(0.0, 2.0).unwrap(),
            Interval::new(1.0, 3.0).unwrap()
        ])
        .is_err());
        // touching is fine: both are open
        assert!(Domain::new(vec![
            Interval::new(0.0, 1.0).unwrap(),
            Interval::new(1.0, 3.0).unwrap()
        ])
        .is_ok());
    }

    #[test]
    fn excision_splits_with_guard_band() {
        let d = Domain::<f64>::half_line().excise(&[1.0, 5.0], 0.1);
        let ivs = d.intervals();
        assert_eq!(ivs.len(), 3);
        assert_eq!(ivs[0].hi(), 0.9);
        assert_eq!(ivs[1].lo(), 1.1);
        assert_eq!(ivs[1].hi(), 4.9);
        assert!(!d.contains(1.05));
        assert!(d.contains(3.0));
    }

    #[test]
    fn grids_stay_interior() {
        let d = Domain::<f64>::half_line().excise(&[1.0], 1e-4);
        let w = Interval::default_window();
        let g = d.grid(500, &w);
        assert_eq!(g.len(), 500);
        assert!(g.iter().all(|&x| d.contains(x) && w.contains(x)));
        // log spacing on (1e-6, 1 - 1e-4)
        assert!(g[0] < 1e-5);
    }

    #[test]
    fn intersection_of_domains() {
        let a = Domain::single(0.0, 2.0).unwrap();
        let b = Domain::new(vec![
            Interval::new(-1.0, 0.5).unwrap(),
            Interval::new(1.0, 3.0).unwrap(),
        ])
        .unwrap();
        let c = a.intersect(&b);
        assert_eq!(c.len(), 2);
        assert_eq!(c.intervals()[1], Interval::new(1.0, 2.0).unwrap());
    }
}
