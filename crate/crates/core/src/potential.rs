//! Logarithmic capacity and equilibrium measures of finite interval unions.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dos::DosResult;
use crate::error::{Error, Result};
use crate::measures::{kolmogorov, Interval, Measure, Piece, SetUnion};
use crate::quad;

pub const DEFAULT_NODES: usize = 48;
/// Smooth factors below `-NEGATIVE_TOL · max` at a node count as negative.
const NEGATIVE_TOL: f64 = 1e-10;

/// Equilibrium measure with its Robin constant `ln cap(E)`.
#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    pub omega: Measure,
    pub robin: f64,
    /// Largest `|U^ω(t) - robin|` over interior probes off the collocation nodes.
    pub residual: f64,
    pub nodes_per_interval: usize,
}

impl EquilibriumResult {
    pub fn capacity(&self) -> f64 {
        self.robin.exp()
    }
}

/// `∫_{-1}^{1} T_k(u) ln|u - ζ| / sqrt(1 - u²) du`.
fn log_moment(k: usize, w: Complex64) -> f64 {
    if k == 0 {
        PI * (-w.norm().ln() - LN_2)
    } else {
        -PI / k as f64 * w.powu(k as u32).re
    }
}

fn joukowski_inverse(zeta: f64) -> Complex64 {
    let z = Complex64::new(zeta, 0.0);
    z - quad::joukowski_root(z)
}

fn solve(e: &SetUnion, n: usize) -> Result<(Vec<Vec<f64>>, f64)> {
    let ivs = e.intervals();
    let m = ivs.len();
    let size = n * m + 1;
    let nodes = quad::chebyshev_nodes(n);
    let mut a = DMatrix::<f64>::zeros(size, size);
    let mut rhs = DVector::<f64>::zeros(size);
    for (i, iv) in ivs.iter().enumerate() {
        for (r, &u) in nodes.iter().enumerate() {
            let row = i * n + r;
            let t = iv.center() + iv.half_width() * u;
            for (j, jv) in ivs.iter().enumerate() {
                let zeta = if i == j { u } else { (t - jv.center()) / jv.half_width() };
                let w = joukowski_inverse(zeta);
                for k in 0..n {
                    let mut v = log_moment(k, w);
                    if k == 0 {
                        v += PI * jv.half_width().ln();
                    }
                    a[(row, j * n + k)] = v;
                }
            }
            a[(row, size - 1)] = -1.0;
        }
    }
    for j in 0..m {
        a[(size - 1, j * n)] = PI;
    }
    rhs[size - 1] = 1.0;
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("equilibrium system is singular"))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("equilibrium system is singular"));
    }
    let coeffs = (0..m).map(|j| sol.rows(j * n, n).iter().copied().collect()).collect();
    Ok((coeffs, sol[size - 1]))
}

/// Most negative smooth-factor sample, relative to the largest.
fn worst_negative(coeffs: &[Vec<f64>], n: usize) -> Option<(f64, f64)> {
    let nodes = quad::chebyshev_nodes(n);
    let mut scale: f64 = 0.0;
    let mut worst: Option<(f64, f64)> = None;
    for c in coeffs {
        for &u in &nodes {
            let v = quad::clenshaw(c, u);
            scale = scale.max(v.abs());
            if v < worst.map_or(0.0, |w| w.1) {
                worst = Some((u, v));
            }
        }
    }
    worst.filter(|w| w.1 < -NEGATIVE_TOL * scale)
}

/// Equilibrium measure of `E` with `nodes` Chebyshev coefficients per interval;
/// refines once to twice the nodes when the density comes out negative.
pub fn equilibrium(e: &SetUnion, nodes: usize) -> Result<EquilibriumResult> {
    let e = e.without_points();
    if e.is_empty() {
        return Err(Error::Domain("set must have positive length"));
    }
    if nodes == 0 {
        return Err(Error::Invalid("need at least one node per interval"));
    }
    let mut n = nodes;
    let (mut coeffs, mut robin) = solve(&e, n)?;
    if worst_negative(&coeffs, n).is_some() {
        n *= 2;
        (coeffs, robin) = solve(&e, n)?;
        if let Some((u, v)) = worst_negative(&coeffs, n) {
            return Err(Error::NegativeDensity { at: u, value: v });
        }
    }
    let pieces = e
        .intervals()
        .iter()
        .zip(&coeffs)
        .map(|(iv, c)| Piece::edge_singular_from_coeffs(*iv, c))
        .collect::<Result<Vec<_>>>()?;
    let omega = Measure::new(Vec::new(), pieces)?;
    let probes = probe_points(&e, n);
    let mut residual: f64 = 0.0;
    for t in probes {
        residual = residual.max((omega.log_potential_real(t)? - robin).abs());
    }
    Ok(EquilibriumResult { omega, robin, residual, nodes_per_interval: n })
}

/// Interior points interleaved with the Chebyshev collocation nodes.
fn probe_points(e: &SetUnion, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for iv in e.intervals() {
        for k in 0..n.saturating_sub(1) {
            let u = -((k as f64 + 1.0) * PI / n as f64).cos();
            out.push(iv.center() + iv.half_width() * u);
        }
    }
    out
}

/// `cap(E)`; closed form `(hi - lo)/4` for a single interval.
pub fn capacity(e: &SetUnion) -> Result<f64> {
    let e = e.without_points();
    match e.intervals() {
        [] => Ok(0.0),
        [iv] => Ok(iv.len() / 4.0),
        _ => Ok(equilibrium(&e, DEFAULT_NODES)?.capacity()),
    }
}

/// `max |U^ω(t) - robin|` over `probes`.
pub fn frostman_residual(r: &EquilibriumResult, probes: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in probes {
        worst = worst.max((r.omega.log_potential_real(t)? - r.robin).abs());
    }
    Ok(worst)
}

/// Comparison of `dk_N` with the equilibrium measure of its support.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCheck {
    pub kolmogorov: f64,
    pub capacity: f64,
    pub a_mean: f64,
    /// Predicted constant value `ln(cap/A)` of `γ` on the support.
    pub alpha: f64,
    /// `max |γ_N(t) - α|` over the interior grid.
    pub max_gamma_deviation: f64,
    pub kolmogorov_tol: f64,
    pub gamma_tol: f64,
    pub pass: bool,
}

/// `dk = ω_K` and `γ ≡ ln(cap K / A)` on `K`, measured at finite `N`.
pub fn check_dos_equilibrium(
    d: &DosResult,
    support: &SetUnion,
    grid: &[f64],
    kolmogorov_tol: f64,
    gamma_tol: f64,
) -> Result<EquilibriumCheck> {
    let eq = equilibrium(support, DEFAULT_NODES)?;
    let cap = match support.without_points().intervals() {
        [iv] => iv.len() / 4.0,
        _ => eq.capacity(),
    };
    let dist = kolmogorov(d.dk(), &eq.omega);
    let alpha = (cap / d.a_mean()).ln();
    let mut dev: f64 = 0.0;
    for &t in grid {
        let g = crate::dos::thouless_rhs(d, Complex64::new(t, 0.0))?;
        dev = dev.max((g - alpha).abs());
    }
    Ok(EquilibriumCheck {
        kolmogorov: dist,
        capacity: cap,
        a_mean: d.a_mean(),
        alpha,
        max_gamma_deviation: dev,
        kolmogorov_tol,
        gamma_tol,
        pass: dist <= kolmogorov_tol && dev <= gamma_tol,
    })
}

/// `cap(Z) ≤ A ≤ cap(K)` and `|Z| ≤ 4A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityBounds {
    pub cap_z: f64,
    pub a_mean: f64,
    pub cap_k: f64,
    pub len_z: f64,
    pub four_a: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub length_ok: bool,
}

impl CapacityBounds {
    pub fn pass(&self) -> bool {
        self.lower_ok && self.upper_ok && self.length_ok
    }
}

pub fn check_capacity_bounds(
    d: &DosResult,
    z: &SetUnion,
    k: &SetUnion,
    tol: f64,
) -> Result<CapacityBounds> {
    let cap_z = capacity(z)?;
    let cap_k = capacity(k)?;
    let a = d.a_mean();
    let len_z = z.total_length();
    Ok(CapacityBounds {
        cap_z,
        a_mean: a,
        cap_k,
        len_z,
        four_a: 4.0 * a,
        lower_ok: cap_z <= a * (1.0 + tol),
        upper_ok: a <= cap_k * (1.0 + tol),
        length_ok: len_z <= 4.0 * a * (1.0 + tol),
    })
}

/// The smallest interval containing `E`, as a set.
pub fn hull_set(e: &SetUnion) -> SetUnion {
    e.hull()
        .map(|Interval { lo, hi }| SetUnion::from_pairs(&[(lo, hi)]).unwrap_or_default())
        .unwrap_or_default()
}
