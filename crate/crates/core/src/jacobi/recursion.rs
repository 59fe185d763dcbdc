use alloc::vec::Vec;
use core::f64::consts::LN_2;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::model::CoeffModel;
use crate::error::{Error, Result};

/// Real or complex spectral parameter.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Sub<f64, Output = Self>
    + core::fmt::Debug
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

const RESCALE_BITS: i32 = 512;
const RESCALE_AT: f64 = 1.340_780_792_994_259_7e154; // 2^512

/// `f(0..=N+1)` stored as mantissa times `2^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace<S> {
    mantissa: Vec<S>,
    exponent: Vec<i32>,
}

impl<S: Scalar> SolutionTrace<S> {
    /// Index of the last stored entry (`N + 1`).
    pub fn last(&self) -> usize {
        self.mantissa.len() - 1
    }

    pub fn mantissa(&self, n: usize) -> S {
        self.mantissa[n]
    }

    pub fn exponent(&self, n: usize) -> i32 {
        self.exponent[n]
    }

    /// Unscaled value; may overflow for long traces.
    pub fn value(&self, n: usize) -> S {
        self.mantissa[n] * libm::ldexp(1.0, self.exponent[n])
    }

    /// `ln |f(n)|` from the scaled representation.
    pub fn log_abs(&self, n: usize) -> f64 {
        self.mantissa[n].modulus().ln() + self.exponent[n] as f64 * LN_2
    }

    /// Entry `n` expressed with exponent `e`.
    fn at_exponent(&self, n: usize, e: i32) -> S {
        self.mantissa[n] * libm::ldexp(1.0, self.exponent[n] - e)
    }

    /// Largest relative residual of `a(n)f(n+1) + a(n-1)f(n-1) + b(n)f(n) = z f(n)`
    /// over `1 ≤ n ≤ N`.
    pub fn recursion_residual(&self, model: &CoeffModel, z: S) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 1..self.last() {
            let e = self.exponent[n];
            let (an, bn) = model.coeffs(n as u64);
            let am = model.a(n as u64 - 1);
            let up = self.at_exponent(n + 1, e) * an;
            let down = self.at_exponent(n - 1, e) * am;
            let mid = (z - bn) * self.mantissa[n];
            let scale = up.modulus() + down.modulus() + mid.modulus();
            if scale > 0.0 {
                worst = worst.max((up + down - mid).modulus() / scale);
            }
        }
        worst
    }
}

impl SolutionTrace<f64> {
    /// Sign changes along `f(1..=N+1)`, zeros skipped.
    pub fn sign_changes(&self) -> usize {
        let mut count = 0;
        let mut prev = 0.0_f64;
        for &m in &self.mantissa[1..] {
            if m == 0.0 {
                continue;
            }
            if prev != 0.0 && (m < 0.0) != (prev < 0.0) {
                count += 1;
            }
            prev = m;
        }
        count
    }

    /// True when some `f(k)`, `1 ≤ k ≤ N+1`, vanishes.
    pub fn hits_root(&self) -> bool {
        self.mantissa[1..].iter().any(|m| *m == 0.0)
    }
}

/// Solution of `J f = z f` with `f(0) = 0`, `f(1) = 1`, traced to `n = N+1`.
pub fn fminus<S: Scalar>(model: &CoeffModel, z: S, n_max: usize) -> Result<SolutionTrace<S>> {
    if n_max == 0 {
        return Err(Error::Domain("trace length N must be at least 1"));
    }
    let mut mantissa = Vec::with_capacity(n_max + 2);
    let mut exponent = Vec::with_capacity(n_max + 2);
    mantissa.push(S::zero());
    exponent.push(0);
    mantissa.push(S::one());
    exponent.push(0);
    let (mut prev, mut cur, mut e) = (S::zero(), S::one(), 0_i32);
    let mut a_prev = model.a(0);
    for n in 1..=n_max as u64 {
        let (an, bn) = model.coeffs(n);
        let next = ((z - bn) * cur - prev * a_prev) * (1.0 / an);
        prev = cur;
        cur = next;
        a_prev = an;
        if cur.modulus().max(prev.modulus()) > RESCALE_AT {
            let s = libm::ldexp(1.0, -RESCALE_BITS);
            prev = prev * s;
            cur = cur * s;
            e += RESCALE_BITS;
        } else if cur.modulus().max(prev.modulus()) < 1.0 / RESCALE_AT
            && cur.modulus().max(prev.modulus()) > 0.0
        {
            let s = libm::ldexp(1.0, RESCALE_BITS);
            prev = prev * s;
            cur = cur * s;
            e -= RESCALE_BITS;
        }
        mantissa.push(cur);
        exponent.push(e);
    }
    Ok(SolutionTrace { mantissa, exponent })
}

/// `ln |f_-(N+1, z)|` without storing the trace.
pub fn log_abs_end<S: Scalar>(model: &CoeffModel, z: S, n_max: usize) -> Result<f64> {
    if n_max == 0 {
        return Err(Error::Domain("trace length N must be at least 1"));
    }
    let (mut prev, mut cur, mut e) = (S::zero(), S::one(), 0_i64);
    let mut a_prev = model.a(0);
    for n in 1..=n_max as u64 {
        let (an, bn) = model.coeffs(n);
        let next = ((z - bn) * cur - prev * a_prev) * (1.0 / an);
        prev = cur;
        cur = next;
        a_prev = an;
        let size = cur.modulus().max(prev.modulus());
        if size > RESCALE_AT {
            let s = libm::ldexp(1.0, -RESCALE_BITS);
            prev = prev * s;
            cur = cur * s;
            e += RESCALE_BITS as i64;
        } else if size < 1.0 / RESCALE_AT && size > 0.0 {
            let s = libm::ldexp(1.0, RESCALE_BITS);
            prev = prev * s;
            cur = cur * s;
            e -= RESCALE_BITS as i64;
        }
    }
    Ok(cur.modulus().ln() + e as f64 * LN_2)
}

/// Polar form `f_- = R e^{iφ}` with `R(1) = 1`, `φ(1) = 0` and increments in
/// `(0, π)`. Index `k` of the vectors holds `n = k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PruferTrace {
    pub log_r: Vec<f64>,
    pub phi: Vec<f64>,
}

impl PruferTrace {
    pub fn log_r_at(&self, n: usize) -> f64 {
        self.log_r[n - 1]
    }

    pub fn phi_at(&self, n: usize) -> f64 {
        self.phi[n - 1]
    }
}

pub fn prufer_minus(model: &CoeffModel, z: Complex64, n_max: usize) -> Result<PruferTrace> {
    if !(z.im > 0.0) {
        return Err(Error::Domain("Prüfer phases need Im z > 0"));
    }
    let trace = fminus(model, z, n_max)?;
    let mut log_r = Vec::with_capacity(n_max + 1);
    let mut phi = Vec::with_capacity(n_max + 1);
    log_r.push(0.0);
    phi.push(0.0);
    for n in 1..=n_max {
        let shift = trace.exponent(n + 1) - trace.exponent(n);
        let ratio = trace.mantissa(n + 1) / trace.mantissa(n) * libm::ldexp(1.0, shift);
        if !(ratio.im > 0.0) {
            return Err(Error::Internal("Prüfer increment left (0, π)"));
        }
        let last = phi[phi.len() - 1];
        phi.push(last + ratio.arg());
        log_r.push(trace.log_abs(n + 1));
    }
    Ok(PruferTrace { log_r, phi })
}
