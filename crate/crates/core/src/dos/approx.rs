use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{lyapunov, DosResult};
use crate::error::{Error, Result};
use crate::herglotz::boundary_value;
use crate::jacobi::{CoeffModel, GreenAverage};
use crate::limit::{Limit, Schedule};
use crate::measures::Measure;

/// Samples `values[k] = f(x0 + k dx)` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl GridFn {
    pub fn sample(x0: f64, dx: f64, count: usize, f: impl FnMut(f64) -> f64) -> Self {
        let values = (0..count).map(|k| x0 + dx * k as f64).map(f).collect();
        Self { x0, dx, values }
    }

    pub fn point(&self, k: usize) -> f64 {
        self.x0 + self.dx * k as f64
    }

    pub fn end(&self) -> f64 {
        self.point(self.values.len().saturating_sub(1))
    }

    /// Linear interpolation inside the grid.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let s = (x - self.x0) / self.dx;
        if s < -1e-9 || s > (self.values.len() - 1) as f64 + 1e-9 {
            return None;
        }
        let k = (s.floor().max(0.0) as usize).min(self.values.len() - 1);
        let frac = s - k as f64;
        if frac.abs() < 1e-9 || k + 1 == self.values.len() {
            return Some(self.values[k]);
        }
        Some(self.values[k] * (1.0 - frac) + self.values[k + 1] * frac)
    }

    /// Grid indices with `0 < |t - x| < h`.
    fn window(&self, x: f64, h: f64) -> impl Iterator<Item = usize> + '_ {
        (0..self.values.len()).filter(move |&k| {
            let d = (self.point(k) - x).abs();
            d > 0.5 * self.dx * 1e-6 && d < h
        })
    }
}

/// Outcome of the approximate-derivative test.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxDerivative {
    /// Accepted derivative, `None` when the deviation densities do not settle.
    pub value: Option<f64>,
    /// Median difference quotient on the smallest window.
    pub candidate: f64,
    /// `(h, ε, density of {|Δf/Δt - d| ≥ ε} in (x-h, x+h))`.
    pub densities: Vec<(f64, f64, f64)>,
}

/// Densities must stay below this on the trailing windows.
pub const DENSITY_THRESHOLD: f64 = 0.1;
/// Number of trailing (smallest) windows that must pass.
pub const TRAILING_WINDOWS: usize = 3;

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

/// Approximate derivative at `x` from grid samples: the median difference
/// quotient is accepted when, for each `ε`, the relative measure of the
/// points deviating by at least `ε` falls below [`DENSITY_THRESHOLD`] on the
/// last [`TRAILING_WINDOWS`] half-widths of the decreasing schedule `hs`.
pub fn approx_derivative(f: &GridFn, x: f64, eps: &[f64], hs: &[f64]) -> Result<ApproxDerivative> {
    if hs.is_empty() || hs.iter().any(|h| !(*h > 0.0)) || hs.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Invalid("window schedule must be positive and decreasing"));
    }
    if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Invalid("deviation thresholds must be positive"));
    }
    let h_max = hs[0];
    let h_min = hs[hs.len() - 1];
    if !(f.dx <= h_min / 16.0) {
        return Err(Error::Resolution("grid spacing must not exceed h_min/16"));
    }
    if f.x0 > x - h_max + f.dx || f.end() < x + h_max - f.dx {
        return Err(Error::Resolution("grid does not cover the largest window"));
    }
    let fx = f.eval(x).ok_or(Error::Resolution("point lies outside the grid"))?;
    let quotient = |k: usize| (f.values[k] - fx) / (f.point(k) - x);
    let candidate = median(f.window(x, h_min).map(quotient).collect());
    let mut densities = Vec::with_capacity(hs.len() * eps.len());
    let mut accepted = candidate.is_finite();
    let trailing = hs.len().saturating_sub(TRAILING_WINDOWS);
    for (i, &h) in hs.iter().enumerate() {
        let qs: Vec<f64> = f.window(x, h).map(quotient).collect();
        for &e in eps {
            let bad = qs.iter().filter(|q| !((*q - candidate).abs() < e)).count();
            let density = bad as f64 / qs.len().max(1) as f64;
            densities.push((h, e, density));
            if i >= trailing && density >= DENSITY_THRESHOLD {
                accepted = false;
            }
        }
    }
    Ok(ApproxDerivative { value: accepted.then_some(candidate), candidate, densities })
}

/// Parameters of the `D_ap γ = -Re g` check.
#[derive(Debug, Clone, PartialEq)]
pub struct DapPlan {
    /// Truncation for the Lyapunov samples.
    pub n_gamma: usize,
    /// Averaging length of the Green function.
    pub n_green: usize,
    pub depth: usize,
    pub hs: Vec<f64>,
    pub eps: Vec<f64>,
    pub schedule: Schedule,
}

impl Default for DapPlan {
    fn default() -> Self {
        Self {
            n_gamma: 1 << 20,
            n_green: 1 << 17,
            depth: 1 << 18,
            hs: alloc::vec![0.125, 0.0625, 0.03125, 0.015625],
            eps: alloc::vec![0.05, 0.01],
            schedule: Schedule::default().with_floor(1e-3).with_tol(1e-6),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DapReport {
    pub x: f64,
    pub derivative: ApproxDerivative,
    pub minus_re_g: f64,
    pub g_limit: Limit,
    /// `|D_ap γ(x) + Re g(x)|`, measured from the median quotient when the
    /// derivative was not accepted.
    pub difference: f64,
}

/// Samples `γ_N` on the grid `x0 + k·dx` (`k < count`).
pub fn gamma_grid(model: &CoeffModel, n: usize, x0: f64, dx: f64, count: usize) -> Result<GridFn> {
    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        values.push(lyapunov(model, x0 + dx * k as f64, n)?);
    }
    Ok(GridFn { x0, dx, values })
}

/// Grid centred on `x` wide enough for the plan's largest window.
pub fn dap_grid_layout(x: f64, plan: &DapPlan) -> (f64, f64, usize) {
    let h_max = plan.hs.first().copied().unwrap_or(0.125);
    let h_min = plan.hs.last().copied().unwrap_or(h_max);
    let dx = h_min / 16.0;
    let half = (h_max / dx).ceil() as usize + 1;
    (x - dx * half as f64, dx, 2 * half + 1)
}

pub fn check_dap_gamma(model: &CoeffModel, x: f64, plan: &DapPlan) -> Result<DapReport> {
    let (x0, dx, count) = dap_grid_layout(x, plan);
    let grid = gamma_grid(model, plan.n_gamma, x0, dx, count)?;
    check_dap_gamma_on(model, x, &grid, plan)
}

/// As [`check_dap_gamma`] with a precomputed `γ` grid.
pub fn check_dap_gamma_on(
    model: &CoeffModel,
    x: f64,
    grid: &GridFn,
    plan: &DapPlan,
) -> Result<DapReport> {
    let derivative = approx_derivative(grid, x, &plan.eps, &plan.hs)?;
    let g = GreenAverage { model, n: plan.n_green, depth: plan.depth };
    let g_limit = boundary_value(&g, x, &plan.schedule);
    if !g_limit.value.re.is_finite() {
        return Err(Error::Singular("Green function average failed near the axis"));
    }
    let minus_re_g = -g_limit.value.re;
    let d = derivative.value.unwrap_or(derivative.candidate);
    Ok(DapReport { x, minus_re_g, g_limit, difference: (d - minus_re_g).abs(), derivative })
}

/// `sup_t μ((t, t+h])`, attained in the limit at atoms or piece points.
pub fn max_window_mass(mu: &Measure, h: f64) -> f64 {
    let mut candidates: Vec<f64> = mu.atoms().iter().map(|a| a.0).collect();
    if !mu.pieces().is_empty() {
        if let Some(hull) = mu.support_hull() {
            let step = hull.len() / 4095.0;
            candidates.extend((0..4096).map(|k| hull.lo + step * k as f64));
        }
    }
    candidates
        .iter()
        .map(|&s| {
            let right_open = mu.cdf_left(s + h) - mu.cdf_left(s);
            let left_open = mu.cdf(s) - mu.cdf(s - h);
            right_open.max(left_open)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    /// `(h, sup_t (k(t+h) - k(t)) · (-ln h))`.
    pub log_holder: Vec<(f64, f64)>,
    /// `(h, |A(x, ε; γ) ∩ (x-h, x+h)| / 2h)` measured on the grid.
    pub deviation: Vec<(f64, f64)>,
}

impl RegularityReport {
    pub fn max_log_holder(&self) -> f64 {
        self.log_holder.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

pub fn regularity_profiles(
    d: &DosResult,
    gamma: &GridFn,
    x: f64,
    eps: f64,
    hs: &[f64],
) -> Result<RegularityReport> {
    if hs.iter().any(|h| !(*h > 0.0 && *h <= 0.5)) || hs.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Invalid("window schedule must be decreasing within (0, 1/2]"));
    }
    let log_holder = hs
        .iter()
        .map(|&h| (h, max_window_mass(d.dk(), h) * -h.ln()))
        .collect();
    let gx = gamma.eval(x).ok_or(Error::Resolution("point lies outside the grid"))?;
    let mut deviation = Vec::with_capacity(hs.len());
    for &h in hs {
        let (mut total, mut bad) = (0usize, 0usize);
        for k in 0..gamma.values.len() {
            if (gamma.point(k) - x).abs() < h {
                total += 1;
                if !((gamma.values[k] - gx).abs() < eps) {
                    bad += 1;
                }
            }
        }
        deviation.push((h, if total == 0 { f64::NAN } else { bad as f64 / total as f64 }));
    }
    Ok(RegularityReport { log_holder, deviation })
}
