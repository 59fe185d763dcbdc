use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Golden-mean frequency `(√5 - 1)/2` split as a double plus its rounding
/// error.
const GOLDEN_HI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_LO: f64 = -5.432_115_203_682_506e-17;

/// Rotation number of a quasiperiodic potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    Golden,
    Value(f64),
}

impl Frequency {
    pub fn value(&self) -> f64 {
        match self {
            Self::Golden => GOLDEN_HI,
            Self::Value(v) => *v,
        }
    }

    fn split(&self) -> (f64, f64) {
        match self {
            Self::Golden => (GOLDEN_HI, GOLDEN_LO),
            Self::Value(v) => (*v, 0.0),
        }
    }

    /// Fractional part of `α n + θ`, keeping the rounding error of `α n`.
    pub fn phase(&self, n: u64, theta: f64) -> f64 {
        let (hi, lo) = self.split();
        let nf = n as f64;
        let p = hi * nf;
        let e = libm::fma(hi, nf, -p) + lo * nf;
        let s = (p - p.floor()) + (theta - theta.floor()) + e;
        s - s.floor()
    }
}

/// Source of Jacobi coefficients `a(n) > 0`, `b(n)` for `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Free,
    Periodic { a: Vec<f64>, b: Vec<f64> },
    Quasiperiodic { lambda: f64, alpha: Frequency, theta: f64 },
    Random { seed: u64, a_range: (f64, f64), b_range: (f64, f64) },
    /// Explicit `a(1..=L)`, `b(1..=L)` continued by the free tail.
    Table { a: Vec<f64>, b: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffModel {
    kind: ModelKind,
    bound: f64,
}

fn check_a(a: &[f64]) -> Result<()> {
    if a.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Invalid("off-diagonal coefficients must be positive and finite"));
    }
    Ok(())
}

fn check_b(b: &[f64]) -> Result<()> {
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("diagonal coefficients must be finite"));
    }
    Ok(())
}

/// Smallest `C` with `(C+1)⁻¹ ≤ a ≤ C+1` and `|b| ≤ C` over the given ranges.
fn bound_of(a_min: f64, a_max: f64, b_abs: f64) -> f64 {
    b_abs.max(a_max - 1.0).max(1.0 / a_min - 1.0).max(0.0)
}

fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl CoeffModel {
    pub fn free() -> Self {
        Self { kind: ModelKind::Free, bound: 0.0 }
    }

    pub fn periodic(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Invalid("periodic tables must be nonempty and of equal length"));
        }
        check_a(&a)?;
        check_b(&b)?;
        let bound = Self::table_bound(&a, &b);
        Ok(Self { kind: ModelKind::Periodic { a, b }, bound })
    }

    pub fn quasiperiodic(lambda: f64, alpha: Frequency, theta: f64) -> Result<Self> {
        if !lambda.is_finite() || !alpha.value().is_finite() || !theta.is_finite() {
            return Err(Error::Invalid("quasiperiodic parameters must be finite"));
        }
        Ok(Self {
            kind: ModelKind::Quasiperiodic { lambda, alpha, theta },
            bound: 2.0 * lambda.abs(),
        })
    }

    pub fn random(seed: u64, a_range: (f64, f64), b_range: (f64, f64)) -> Result<Self> {
        let (alo, ahi) = a_range;
        let (blo, bhi) = b_range;
        if !(alo > 0.0 && alo <= ahi && ahi.is_finite()) {
            return Err(Error::Invalid("random a-range must satisfy 0 < lo ≤ hi"));
        }
        if !(blo <= bhi && blo.is_finite() && bhi.is_finite()) {
            return Err(Error::Invalid("random b-range must satisfy lo ≤ hi"));
        }
        Ok(Self {
            kind: ModelKind::Random { seed, a_range, b_range },
            bound: bound_of(alo, ahi, blo.abs().max(bhi.abs())),
        })
    }

    pub fn table(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Invalid("table a and b must have equal length"));
        }
        check_a(&a)?;
        check_b(&b)?;
        let bound = Self::table_bound(&a, &b);
        Ok(Self { kind: ModelKind::Table { a, b }, bound })
    }

    fn table_bound(a: &[f64], b: &[f64]) -> f64 {
        let a_min = a.iter().copied().fold(1.0, f64::min);
        let a_max = a.iter().copied().fold(1.0, f64::max);
        let b_abs = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        bound_of(a_min, a_max, b_abs)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Uniform bound `C` on the coefficients.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `(a(n), b(n))`; `n = 0` gives `(1, 0)`.
    pub fn coeffs(&self, n: u64) -> (f64, f64) {
        if n == 0 {
            return (1.0, 0.0);
        }
        match &self.kind {
            ModelKind::Free => (1.0, 0.0),
            ModelKind::Periodic { a, b } => {
                let i = ((n - 1) % a.len() as u64) as usize;
                (a[i], b[i])
            }
            ModelKind::Quasiperiodic { lambda, alpha, theta } => {
                (1.0, 2.0 * lambda * (TAU * alpha.phase(n, *theta)).cos())
            }
            ModelKind::Random { seed, a_range, b_range } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_word_pos(4 * n as u128);
                let ua = unit(rng.next_u64());
                let ub = unit(rng.next_u64());
                (
                    a_range.0 + (a_range.1 - a_range.0) * ua,
                    b_range.0 + (b_range.1 - b_range.0) * ub,
                )
            }
            ModelKind::Table { a, b } => match a.get(n as usize - 1) {
                Some(&av) => (av, b[n as usize - 1]),
                None => (1.0, 0.0),
            },
        }
    }

    pub fn a(&self, n: u64) -> f64 {
        self.coeffs(n).0
    }

    pub fn b(&self, n: u64) -> f64 {
        self.coeffs(n).1
    }

    /// Coefficients for `n = 1..=count`.
    pub fn coeff_table(&self, count: usize) -> (Vec<f64>, Vec<f64>) {
        (1..=count as u64).map(|n| self.coeffs(n)).unzip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        assert_eq!(CoeffModel::free().coeffs(7), (1.0, 0.0));
        let p = CoeffModel::periodic(alloc::vec![1.0, 1.0], alloc::vec![1.0, -1.0]).unwrap();
        assert_eq!(p.coeffs(3), (1.0, 1.0));
        assert_eq!(p.coeffs(4), (1.0, -1.0));
        let q = CoeffModel::quasiperiodic(1.0, Frequency::Golden, 0.0).unwrap();
        let (a, b) = q.coeffs(1);
        assert_eq!(a, 1.0);
        assert!((b + 1.474_737_756_156_639_8).abs() < 1e-12);
        assert_eq!(q.coeffs(0), (1.0, 0.0));
    }

    #[test]
    fn golden_phase_is_accurate_far_out() {
        // α·10⁹ mod 1 from the exact value α = (√5 - 1)/2
        let phase = Frequency::Golden.phase(1_000_000_000, 0.0);
        assert!((phase - 0.749_894_848_204_586_8).abs() < 1e-9, "{phase}");
    }

    #[test]
    fn random_is_reproducible_and_in_range() {
        let m = CoeffModel::random(42, (0.5, 1.5), (-1.0, 1.0)).unwrap();
        let again = CoeffModel::random(42, (0.5, 1.5), (-1.0, 1.0)).unwrap();
        let other = CoeffModel::random(43, (0.5, 1.5), (-1.0, 1.0)).unwrap();
        for n in 1..200 {
            let (a, b) = m.coeffs(n);
            assert_eq!((a, b), again.coeffs(n));
            assert!((0.5..=1.5).contains(&a) && (-1.0..=1.0).contains(&b));
        }
        assert_ne!(m.coeffs(5), other.coeffs(5));
        assert!(m.bound() >= 1.0);
    }

    #[test]
    fn table_has_free_tail() {
        let t = CoeffModel::table(alloc::vec![2.0, 0.5], alloc::vec![0.3, -0.3]).unwrap();
        assert_eq!(t.coeffs(2), (0.5, -0.3));
        assert_eq!(t.coeffs(3), (1.0, 0.0));
        assert_eq!(t.bound(), 1.0);
        assert!(CoeffModel::table(alloc::vec![0.0], alloc::vec![0.0]).is_err());
    }
}
