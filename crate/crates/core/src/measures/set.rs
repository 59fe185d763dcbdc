use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A closed bounded interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Invalid("interval endpoints must be finite"));
        }
        if lo > hi {
            return Err(Error::Invalid("interval has lo > hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi == self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Length of `[lo, hi] ∩ (a, b)`.
    pub fn overlap(&self, a: f64, b: f64) -> f64 {
        (self.hi.min(b) - self.lo.max(a)).max(0.0)
    }
}

/// A finite union of pairwise disjoint closed intervals, stored in increasing
/// order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SetUnion {
    intervals: Vec<Interval>,
}

impl SetUnion {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        for w in intervals.windows(2) {
            if w[0].hi >= w[1].lo {
                return Err(Error::Invalid(
                    "intervals must be disjoint and strictly increasing",
                ));
            }
        }
        Ok(Self { intervals })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let intervals = pairs
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![Interval::new(lo, hi)?])
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure.
    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// `|E ∩ (a, b)|`, exact.
    pub fn measure_within(&self, a: f64, b: f64) -> f64 {
        self.intervals.iter().map(|i| i.overlap(a, b)).sum()
    }

    pub fn hull(&self) -> Option<Interval> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some(Interval { lo: first.lo, hi: last.hi })
    }

    /// Bounded components of the complement, as open intervals `(a, b)`.
    pub fn gaps(&self) -> Vec<Interval> {
        self.intervals
            .windows(2)
            .map(|w| Interval { lo: w[0].hi, hi: w[1].lo })
            .collect()
    }

    /// Drops zero-length intervals.
    pub fn without_points(&self) -> Self {
        Self {
            intervals: self
                .intervals
                .iter()
                .copied()
                .filter(|i| !i.is_degenerate())
                .collect(),
        }
    }

    /// Image under `t ↦ s·t + c` (`s ≠ 0`).
    pub fn affine(&self, s: f64, c: f64) -> Result<Self> {
        if s == 0.0 || !s.is_finite() {
            return Err(Error::Domain("affine scale must be nonzero"));
        }
        let mut out: Vec<Interval> = self
            .intervals
            .iter()
            .map(|i| {
                let (a, b) = (s * i.lo + c, s * i.hi + c);
                Interval { lo: a.min(b), hi: a.max(b) }
            })
            .collect();
        if s < 0.0 {
            out.reverse();
        }
        Self::new(out)
    }

    /// Interior sample points: `per_interval` equispaced points per interval,
    /// kept a relative `margin` away from the endpoints.
    pub fn interior_grid(&self, per_interval: usize, margin: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for i in &self.intervals {
            if i.is_degenerate() || per_interval == 0 {
                continue;
            }
            let lo = i.lo + margin * i.len();
            let hi = i.hi - margin * i.len();
            if per_interval == 1 {
                out.push(i.center());
                continue;
            }
            let step = (hi - lo) / (per_interval - 1) as f64;
            out.extend((0..per_interval).map(|k| lo + step * k as f64));
        }
        out
    }
}
