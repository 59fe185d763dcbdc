//! Transforms of interval unions against bounded step functions.

use alloc::vec::Vec;

use super::set::SetUnion;
use crate::error::{Error, Result};
use crate::limit::{extrapolate_real, Limit, Schedule};
#[allow(unused_imports)]
use num_traits::Float;

/// Piecewise-constant `θ: ℝ → [-1, 1]` vanishing outside `[breaks[0], breaks[last]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedFn {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl BoundedFn {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() + 1 != breaks.len() {
            return Err(Error::Invalid("step function needs one value per gap between breaks"));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("step function breaks must be finite and increasing"));
        }
        if values.iter().any(|v| !(v.abs() <= 1.0)) {
            return Err(Error::Invalid("step function values must lie in [-1, 1]"));
        }
        Ok(Self { breaks, values })
    }

    pub fn zero() -> Self {
        Self { breaks: alloc::vec![0.0], values: Vec::new() }
    }

    /// `v` on `[lo, hi]`, zero elsewhere.
    pub fn constant_on(lo: f64, hi: f64, v: f64) -> Result<Self> {
        Self::new(alloc::vec![lo, hi], alloc::vec![v])
    }

    /// `sign(t - x0)` on `[lo, hi]`, zero elsewhere.
    pub fn sign_about(x0: f64, lo: f64, hi: f64) -> Result<Self> {
        if x0 <= lo {
            Self::constant_on(lo, hi, 1.0)
        } else if x0 >= hi {
            Self::constant_on(lo, hi, -1.0)
        } else {
            Self::new(alloc::vec![lo, x0, hi], alloc::vec![-1.0, 1.0])
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = self.breaks.partition_point(|b| *b <= t);
        if i == 0 || i == self.breaks.len() {
            // right endpoint belongs to the last piece
            if i == self.breaks.len() && t == self.breaks[i - 1] && !self.values.is_empty() {
                return self.values[i - 2];
            }
            return 0.0;
        }
        self.values[i - 1]
    }

    /// Segments `(p, q, v)` on which `θ χ_E` equals the nonzero constant `v`.
    pub fn segments_on(&self, e: &SetUnion) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        for iv in e.intervals() {
            for (k, &v) in self.values.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                let p = iv.lo.max(self.breaks[k]);
                let q = iv.hi.min(self.breaks[k + 1]);
                if p < q {
                    out.push((p, q, v));
                }
            }
        }
        out
    }

    /// Reflection `t ↦ 2x - t`.
    pub fn reflect(&self, x: f64) -> Self {
        Self {
            breaks: self.breaks.iter().rev().map(|b| 2.0 * x - b).collect(),
            values: self.values.iter().rev().copied().collect(),
        }
    }
}

/// `|E ∩ (x - h, x + h)| / 2h`.
pub fn lebesgue_density(e: &SetUnion, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain("window half-width must be positive"));
    }
    Ok(e.measure_within(x - h, x + h) / (2.0 * h))
}

/// `∫_{y < |t - x| ≤ 1} θ(t) χ_E(t) / (t - x) dt`, summed in closed form.
pub fn truncated_hilbert(e: &SetUnion, theta: &BoundedFn, x: f64, y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::Domain("truncation radius must lie in (0, 1]"));
    }
    let windows = [(x - 1.0, x - y), (x + y, x + 1.0)];
    let mut total = 0.0;
    for (p, q, v) in theta.segments_on(e) {
        for &(a, b) in &windows {
            let (lo, hi) = (p.max(a), q.min(b));
            if lo < hi {
                total += v * ((hi - x).abs().ln() - (lo - x).abs().ln());
            }
        }
    }
    Ok(total)
}

/// The regularized integral `∫_E ((t-x)/((t-x)² + y²) - t/(t²+1)) θ(t) dt`.
pub fn tilde_hilbert_at(e: &SetUnion, theta: &BoundedFn, x: f64, y: f64) -> f64 {
    let y2 = y * y;
    theta
        .segments_on(e)
        .iter()
        .map(|&(p, q, v)| {
            let poisson = 0.5 * (((q - x).powi(2) + y2) / ((p - x).powi(2) + y2)).ln();
            let shift = 0.5 * ((q * q + 1.0) / (p * p + 1.0)).ln();
            v * (poisson - shift)
        })
        .sum()
}

/// Result of the `y → 0+` limit defining the regularized Hilbert transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TildeHilbert {
    Finite(Limit),
    Divergent(Limit),
}

impl TildeHilbert {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Finite(l) => Some(l.value.re),
            Self::Divergent(_) => None,
        }
    }
}

pub fn tilde_hilbert(e: &SetUnion, theta: &BoundedFn, x: f64, schedule: &Schedule) -> TildeHilbert {
    let lim = extrapolate_real(schedule, |y| tilde_hilbert_at(e, theta, x, y));
    if lim.converged {
        TildeHilbert::Finite(lim)
    } else {
        TildeHilbert::Divergent(lim)
    }
}

/// `∫_{x-1}^{x+1} χ_E(t) / |t - x| dt` in closed form (possibly `+∞`).
pub fn inverse_distance_integral(e: &SetUnion, x: f64) -> f64 {
    let mut total = 0.0;
    for iv in e.intervals() {
        for (a, b) in [(x - 1.0, x), (x, x + 1.0)] {
            let (lo, hi) = (iv.lo.max(a), iv.hi.min(b));
            if lo >= hi {
                continue;
            }
            let (near, far) = if (lo - x).abs() < (hi - x).abs() { (lo, hi) } else { (hi, lo) };
            if near == x {
                return f64::INFINITY;
            }
            total += ((far - x).abs() / (near - x).abs()).ln();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_bands() -> SetUnion {
        SetUnion::from_pairs(&[(-2.0, -1.0), (1.0, 2.0)]).unwrap()
    }

    #[test]
    fn density_examples() {
        let unit = SetUnion::from_pairs(&[(0.0, 1.0)]).unwrap();
        assert_eq!(lebesgue_density(&unit, 0.0, 0.5).unwrap(), 0.5);
        assert_eq!(lebesgue_density(&two_bands(), 0.0, 0.5).unwrap(), 0.0);
        assert!((lebesgue_density(&unit, 0.5, 0.1).unwrap() - 1.0).abs() < 1e-15);
        assert!(lebesgue_density(&unit, 0.5, 0.0).is_err());
    }

    #[test]
    fn truncated_hilbert_examples() {
        let sym = SetUnion::from_pairs(&[(-1.0, 1.0)]).unwrap();
        let one = BoundedFn::constant_on(-1.0, 1.0, 1.0).unwrap();
        for y in [1.0, 0.3, 1e-6] {
            assert!(truncated_hilbert(&sym, &one, 0.0, y).unwrap().abs() < 1e-15);
        }
        let unit = SetUnion::from_pairs(&[(0.0, 1.0)]).unwrap();
        let v = truncated_hilbert(&unit, &one, 0.0, 0.1).unwrap();
        assert!((v - 10f64.ln()).abs() < 1e-14);
        let sign = BoundedFn::sign_about(0.0, -2.0, 2.0).unwrap();
        let v = truncated_hilbert(&two_bands(), &sign, 0.0, 0.5).unwrap();
        // window reaches only to |t| ≤ 1, which touches the bands in a null set
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn tilde_hilbert_examples() {
        let s = Schedule::default();
        let sym = SetUnion::from_pairs(&[(-1.0, 1.0)]).unwrap();
        let one = BoundedFn::constant_on(-5.0, 5.0, 1.0).unwrap();
        assert!(tilde_hilbert(&sym, &one, 0.0, &s).value().unwrap().abs() < 1e-12);
        let unit = SetUnion::from_pairs(&[(0.0, 1.0)]).unwrap();
        assert!(matches!(tilde_hilbert(&unit, &one, 0.0, &s), TildeHilbert::Divergent(_)));
        assert_eq!(tilde_hilbert(&SetUnion::empty(), &one, 0.0, &s).value(), Some(0.0));
    }

    #[test]
    fn inverse_distance_examples() {
        assert!(inverse_distance_integral(&two_bands(), 0.0).is_finite());
        let full = SetUnion::from_pairs(&[(-2.0, 2.0)]).unwrap();
        assert_eq!(inverse_distance_integral(&full, 0.0), f64::INFINITY);
        let unit = SetUnion::from_pairs(&[(0.0, 1.0)]).unwrap();
        assert_eq!(inverse_distance_integral(&unit, 0.0), f64::INFINITY);
        let far = SetUnion::from_pairs(&[(0.5, 3.0)]).unwrap();
        assert!((inverse_distance_integral(&far, 0.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn bounded_fn_eval() {
        let s = BoundedFn::sign_about(0.0, -1.0, 1.0).unwrap();
        assert_eq!(s.eval(-0.5), -1.0);
        assert_eq!(s.eval(0.5), 1.0);
        assert_eq!(s.eval(1.0), 1.0);
        assert_eq!(s.eval(2.0), 0.0);
        assert!(BoundedFn::constant_on(0.0, 1.0, 2.0).is_err());
    }
}
