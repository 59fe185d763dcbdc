//! Density of states, Lyapunov exponents and the identities linking them to
//! m-functions and Green function averages.

mod approx;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub use approx::{
    approx_derivative, check_dap_gamma, max_window_mass, regularity_profiles, ApproxDerivative,
    DapPlan, DapReport, GridFn, RegularityReport,
};

use crate::error::{Error, Result};
use crate::jacobi::{log_abs_end, prufer_minus, right_m_sequence, truncate, CoeffModel, Scalar};
use crate::measures::Measure;

/// Highest power used by the moment identity.
pub const MOMENT_ORDER: u32 = 8;

/// Normalized eigenvalue counting measure of `J_N` with the geometric mean of
/// `a(1..=N)`.
#[derive(Debug, Clone)]
pub struct DosResult {
    dk: Measure,
    eigenvalues: Vec<f64>,
    a_mean: f64,
    n: usize,
}

impl DosResult {
    pub fn dk(&self) -> &Measure {
        &self.dk
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `A = (a(1)⋯a(N))^{1/N}`.
    pub fn a_mean(&self) -> f64 {
        self.a_mean
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `k_N(t) = dk_N((-∞, t])`.
    pub fn k(&self, t: f64) -> f64 {
        self.dk.cdf(t)
    }
}

fn log_a_sum(model: &CoeffModel, n: usize) -> f64 {
    (1..=n as u64).map(|k| model.a(k).ln()).sum()
}

/// `dk_N` from eigenvalues computed to full floating-point precision.
pub fn dos_measure(model: &CoeffModel, n: usize) -> Result<DosResult> {
    dos_measure_with_tol(model, n, 0.0)
}

pub fn dos_measure_with_tol(model: &CoeffModel, n: usize, tol: f64) -> Result<DosResult> {
    if n == 0 {
        return Err(Error::Domain("truncation size N must be at least 1"));
    }
    let eigenvalues = truncate(model, n).eigenvalues(tol)?;
    dos_from_eigenvalues(model, eigenvalues)
}

/// Builds the result from precomputed eigenvalues of `J_N`.
pub fn dos_from_eigenvalues(model: &CoeffModel, eigenvalues: Vec<f64>) -> Result<DosResult> {
    let n = eigenvalues.len();
    if n == 0 {
        return Err(Error::Domain("truncation size N must be at least 1"));
    }
    let w = 1.0 / n as f64;
    let dk = Measure::from_atoms(eigenvalues.iter().map(|&x| (x, w)).collect())?;
    let a_mean = (log_a_sum(model, n) / n as f64).exp();
    Ok(DosResult { dk, eigenvalues, a_mean, n })
}

/// `γ_N(z) = (1/N) ln |f_-(N+1, z)|`; `-∞` when `z` is a root.
pub fn lyapunov<S: Scalar>(model: &CoeffModel, z: S, n: usize) -> Result<f64> {
    Ok(log_abs_end(model, z, n)? / n as f64)
}

/// `-ln A + ∫ ln|t - z| dk_N(t)`.
pub fn thouless_rhs(d: &DosResult, z: Complex64) -> Result<f64> {
    Ok(-d.a_mean.ln() + d.dk.log_potential(z)?)
}

/// Averages `w_± = (1/N) Σ ln[a(n) m_±(n, z)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WPair {
    pub z: Complex64,
    pub w_plus: Complex64,
    pub w_minus: Complex64,
    /// Weyl-disk bound on the tail m-function (zero for exact tails).
    pub tail_error: f64,
}

impl WPair {
    /// `|w_+ + w_- - iπ|`.
    pub fn sum_residual(&self) -> f64 {
        (self.w_plus + self.w_minus - Complex64::new(0.0, PI)).norm()
    }
}

fn w_plus_from(model: &CoeffModel, right: &[Complex64], n: usize) -> Complex64 {
    let sum: Complex64 = (1..=n)
        .map(|k| (right[k] * model.a(k as u64)).ln())
        .sum();
    sum / n as f64
}

pub fn w_plus(model: &CoeffModel, z: Complex64, n: usize, depth: usize) -> Result<(Complex64, f64)> {
    if n == 0 {
        return Err(Error::Domain("average needs N ≥ 1"));
    }
    let (right, err) = right_m_sequence(model, z, n + 1, depth)?;
    Ok((w_plus_from(model, &right, n), err))
}

pub fn w_minus(model: &CoeffModel, z: Complex64, n: usize) -> Result<Complex64> {
    let p = prufer_minus(model, z, n)?;
    Ok(Complex64::new(p.log_r_at(n + 1), p.phi_at(n + 1)) / n as f64)
}

pub fn w_pair(model: &CoeffModel, z: Complex64, n: usize, depth: usize) -> Result<WPair> {
    let (wp, tail_error) = w_plus(model, z, n, depth)?;
    let wm = w_minus(model, z, n)?;
    Ok(WPair { z, w_plus: wp, w_minus: wm, tail_error })
}

/// `max_{n ≤ 8} |∫ tⁿ dk_N - (1/N) tr J_Nⁿ|`.
pub fn moment_residual(model: &CoeffModel, d: &DosResult) -> Result<f64> {
    let j = truncate(model, d.n);
    let mut worst: f64 = 0.0;
    for p in 0..=MOMENT_ORDER {
        let lhs = d.dk.moment(p)?;
        let rhs = j.trace_power(p) / d.n as f64;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Residuals of the finite-`N` identities at one `(z, N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityRow {
    pub z: Complex64,
    pub n: usize,
    /// `|w_+ + w_- - iπ|`.
    pub sum: f64,
    /// `|g_N(z) - w_+'(z)|` with a central difference.
    pub derivative: f64,
    /// Moment identity residual (independent of `z`).
    pub moment: f64,
}

pub const DERIVATIVE_STEP: f64 = 1e-4;

pub fn check_identities(
    model: &CoeffModel,
    grid: &[Complex64],
    ns: &[usize],
    depth: usize,
) -> Result<Vec<IdentityRow>> {
    if grid.iter().any(|z| z.im < 0.5) {
        return Err(Error::Domain("identity grid needs Im z ≥ 0.5"));
    }
    let mut rows = Vec::with_capacity(grid.len() * ns.len());
    for &n in ns {
        let d = dos_measure(model, n)?;
        let moment = moment_residual(model, &d)?;
        for &z in grid {
            rows.push(identity_row(model, z, n, depth, moment)?);
        }
    }
    Ok(rows)
}

/// One grid point of [`check_identities`] with a precomputed moment residual.
pub fn identity_row(
    model: &CoeffModel,
    z: Complex64,
    n: usize,
    depth: usize,
    moment: f64,
) -> Result<IdentityRow> {
    let pair = w_pair(model, z, n, depth)?;
    let h = DERIVATIVE_STEP;
    let (wp_hi, _) = w_plus(model, z + h, n, depth)?;
    let (wp_lo, _) = w_plus(model, z - h, n, depth)?;
    let derivative = (wp_hi - wp_lo) / (2.0 * h);
    let g = crate::jacobi::green_avg(model, z, n, depth)?;
    Ok(IdentityRow {
        z,
        n,
        sum: pair.sum_residual(),
        derivative: (g.value - derivative).norm(),
        moment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::Frequency;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_small_dos() {
        let d = dos_measure(&CoeffModel::free(), 3).unwrap();
        let s2 = 2f64.sqrt();
        for (e, x) in d.eigenvalues().iter().zip([-s2, 0.0, s2]) {
            assert!((e - x).abs() < 1e-15);
        }
        assert_eq!(d.a_mean(), 1.0);
        let rhs = thouless_rhs(&d, c(3.0, 0.0)).unwrap();
        assert!((rhs - 21f64.ln() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn lyapunov_free_outside_and_inside() {
        let g = lyapunov(&CoeffModel::free(), 3.0, 2000).unwrap();
        assert!((g - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-3);
        let g = lyapunov(&CoeffModel::free(), 0.5, 10_000).unwrap();
        assert!(g.abs() <= 5e-3);
        let g = lyapunov(&CoeffModel::free(), 1.0, 2).unwrap();
        assert_eq!(g, f64::NEG_INFINITY);
    }

    #[test]
    fn finite_thouless_identity() {
        let m = CoeffModel::random(7, (0.5, 1.5), (-1.0, 1.0)).unwrap();
        let d = dos_measure(&m, 200).unwrap();
        for z in [c(0.3, 0.1), c(-1.0, 2.0), c(2.5, 0.4)] {
            let lhs = lyapunov(&m, z, 200).unwrap();
            let rhs = thouless_rhs(&d, z).unwrap();
            assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn w_pair_free() {
        let p = w_pair(&CoeffModel::free(), c(0.0, 1.0), 500, 0).unwrap();
        assert!(p.sum_residual() < 0.02);
        assert!((p.w_plus.re + 0.481_211_825_059_603_4).abs() < 1e-12);
        assert!(p.w_plus.im > 0.0 && p.w_plus.im < PI);
    }

    #[test]
    fn w_pair_quasiperiodic_uses_tail_bound() {
        let m = CoeffModel::quasiperiodic(1.5, Frequency::Golden, 0.1).unwrap();
        let p = w_pair(&m, c(0.2, 1.0), 300, 600).unwrap();
        assert!(p.tail_error < 1e-10);
        assert!(p.w_plus.im > 0.0 && p.w_minus.im > 0.0);
    }

    #[test]
    fn identities_free() {
        let rows = check_identities(&CoeffModel::free(), &[c(0.0, 1.0)], &[1000], 0).unwrap();
        let r = rows[0];
        assert!(r.sum <= 0.02 && r.derivative <= 0.02 && r.moment <= 1e-8, "{r:?}");
    }
}
