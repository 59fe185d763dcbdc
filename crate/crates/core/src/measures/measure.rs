use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::set::Interval;
use crate::error::{Error, Result};
use crate::quad;
#[allow(unused_imports)]
use num_traits::Float;

/// Nodes per density piece unless a caller asks otherwise.
pub const DEFAULT_DEGREE: usize = 64;
/// Highest moment order accepted by [`Measure::moment`].
pub const MAX_MOMENT: u32 = 20;
/// Absolute distance under which a point counts as sitting on an atom.
pub const ATOM_TOL: f64 = 1e-12;

/// An absolutely continuous piece of a measure on one interval.
///
/// Without the edge flag the density is a polynomial interpolant sampled at
/// Gauss–Legendre nodes. With it the stored samples are a smooth factor `f`
/// at Chebyshev points and the density is `f(t) / sqrt((t - lo)(hi - t))`.
#[derive(Debug, Clone)]
pub struct Piece {
    interval: Interval,
    edge_singular: bool,
    nodes: Vec<f64>,
    values: Vec<f64>,
    local_nodes: Vec<f64>,
    weights: Vec<f64>,
    coeffs: Vec<f64>,
    deriv: Vec<f64>,
    deriv2: Vec<f64>,
    anti: Vec<f64>,
}

fn standard_nodes(n: usize, edge_singular: bool) -> (Vec<f64>, Vec<f64>) {
    if edge_singular {
        (quad::chebyshev_nodes(n), alloc::vec![PI / n as f64; n])
    } else {
        quad::gauss_legendre(n)
    }
}

impl Piece {
    /// Samples `density` (or the smooth factor when `edge_singular`) at the
    /// standard nodes of the piece.
    pub fn from_fn(
        interval: Interval,
        degree: usize,
        edge_singular: bool,
        density: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Invalid("piece needs at least one node"));
        }
        let (c, h) = (interval.center(), interval.half_width());
        let (local, _) = standard_nodes(degree, edge_singular);
        let values: Vec<f64> = local.iter().map(|u| density(c + h * u)).collect();
        Self::build(interval, edge_singular, values)
    }

    /// Builds a piece from samples at arbitrary nodes inside the interval. When
    /// the nodes are not the standard ones they are resampled through the
    /// barycentric interpolant.
    pub fn from_samples(
        interval: Interval,
        nodes: &[f64],
        values: &[f64],
        edge_singular: bool,
    ) -> Result<Self> {
        if nodes.len() != values.len() || nodes.is_empty() {
            return Err(Error::Invalid("piece nodes and values must match and be nonempty"));
        }
        let n = nodes.len();
        let (c, h) = (interval.center(), interval.half_width());
        let (local, _) = standard_nodes(n, edge_singular);
        let matches = local
            .iter()
            .zip(nodes)
            .all(|(u, t)| (c + h * u - t).abs() <= 1e-9 * (1.0 + h));
        if matches {
            return Self::build(interval, edge_singular, values.to_vec());
        }
        let w = quad::barycentric_weights(nodes);
        let resampled = local
            .iter()
            .map(|u| quad::barycentric_eval(nodes, &w, values, c + h * u))
            .collect();
        Self::build(interval, edge_singular, resampled)
    }

    /// Edge-singular piece whose smooth factor is `Σ coeffs[k] T_k(u)`.
    pub fn edge_singular_from_coeffs(interval: Interval, coeffs: &[f64]) -> Result<Self> {
        let n = coeffs.len().max(1);
        let local = quad::chebyshev_nodes(n);
        let values = local.iter().map(|&u| quad::clenshaw(coeffs, u)).collect();
        Self::build(interval, true, values)
    }

    fn build(interval: Interval, edge_singular: bool, mut values: Vec<f64>) -> Result<Self> {
        if interval.is_degenerate() {
            return Err(Error::Invalid("density piece needs positive length"));
        }
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for v in &mut values {
            if !v.is_finite() {
                return Err(Error::Invalid("density sample is not finite"));
            }
            if *v < 0.0 {
                if *v < -1e-13 * scale.max(1e-300) {
                    return Err(Error::Invalid("density must be nonnegative at nodes"));
                }
                *v = 0.0;
            }
        }
        let n = values.len();
        let (local, rule) = standard_nodes(n, edge_singular);
        let (c, h) = (interval.center(), interval.half_width());
        let coeffs = if edge_singular {
            quad::chebyshev_coeffs(&values)
        } else {
            let w = quad::barycentric_weights(&local);
            let at_cheb: Vec<f64> = quad::chebyshev_nodes(n)
                .iter()
                .map(|&u| quad::barycentric_eval(&local, &w, &values, u))
                .collect();
            quad::chebyshev_coeffs(&at_cheb)
        };
        let coeffs = chop(coeffs);
        let deriv = quad::chebyshev_derivative(&coeffs);
        let deriv2 = quad::chebyshev_derivative(&deriv);
        let anti = quad::chebyshev_integral(&coeffs);
        let weights = if edge_singular {
            rule
        } else {
            rule.iter().map(|w| w * h).collect()
        };
        Ok(Self {
            interval,
            edge_singular,
            nodes: local.iter().map(|u| c + h * u).collect(),
            values,
            local_nodes: local,
            weights,
            coeffs,
            deriv,
            deriv2,
            anti,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn edge_singular(&self) -> bool {
        self.edge_singular
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Chebyshev coefficients of the sampled function in the local variable.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn local(&self, t: f64) -> f64 {
        (t - self.interval.center()) / self.interval.half_width()
    }

    fn local_complex(&self, z: Complex64) -> Complex64 {
        (z - self.interval.center()) / self.interval.half_width()
    }

    /// True when plain Gauss–Legendre is accurate to roughly machine precision
    /// for kernels analytic off `[-1, 1]`, judged by the Bernstein ellipse
    /// parameter of `ζ`.
    fn far(&self, zeta: Complex64) -> bool {
        let w = zeta - quad::joukowski_root(zeta);
        let rho = 1.0 / w.norm();
        rho.ln() * 2.0 * self.local_nodes.len() as f64 >= 16.0 * core::f64::consts::LN_10
    }

    pub fn mass(&self) -> f64 {
        if self.edge_singular {
            PI * self.coeffs[0]
        } else {
            self.weights.iter().zip(&self.values).map(|(w, v)| w * v).sum()
        }
    }

    /// Density at `t`, zero off the interval.
    pub fn density(&self, t: f64) -> f64 {
        if !self.interval.contains(t) {
            return 0.0;
        }
        let u = self.local(t);
        let f = quad::clenshaw(&self.coeffs, u);
        if self.edge_singular {
            f / ((t - self.interval.lo) * (self.interval.hi - t)).sqrt()
        } else {
            f
        }
    }

    /// `Σ_k W_k g(t_k)` approximating `∫ g dρ`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&t, w), v)| w * v * g(t))
            .sum()
    }

    /// `∫ ρ(t) / (t - z) dt`, closed form in the local variable.
    pub fn cauchy(&self, z: Complex64) -> Complex64 {
        let zeta = self.local_complex(z);
        if self.edge_singular {
            let s = quad::joukowski_root(zeta);
            let w = zeta - s;
            let series = horner(&self.coeffs, w);
            -series * PI / (s * self.interval.half_width())
        } else if self.far(zeta) {
            let h = self.interval.half_width();
            self.local_nodes
                .iter()
                .zip(&self.weights)
                .zip(&self.values)
                .map(|((&u, &w), &v)| w / h * v / (u - zeta))
                .sum()
        } else {
            let p = quad::clenshaw_complex(&self.coeffs, zeta);
            let mut acc = p * log_ratio(zeta);
            for (&u, &wk) in self.local_nodes.iter().zip(&self.weights) {
                let wk = wk / self.interval.half_width();
                let d = u - zeta;
                let q = if d.norm() < 1e-7 {
                    quad::clenshaw_complex(&self.deriv, zeta)
                        + quad::clenshaw_complex(&self.deriv2, zeta) * d * 0.5
                } else {
                    (quad::clenshaw(&self.coeffs, u) - p) / d
                };
                acc += q * wk;
            }
            acc
        }
    }

    /// `∫ ρ(t) ln|t - z| dt`, closed form in the local variable.
    pub fn log_potential(&self, z: Complex64) -> f64 {
        let h = self.interval.half_width();
        let zeta = self.local_complex(z);
        if self.edge_singular {
            let s = quad::joukowski_root(zeta);
            let w = zeta - s;
            let mut total = PI * self.coeffs[0] * (h.ln() - w.norm().ln() - LN_2);
            let mut wk = Complex64::new(1.0, 0.0);
            for (k, &ck) in self.coeffs.iter().enumerate().skip(1) {
                wk *= w;
                total -= PI * ck * wk.re / k as f64;
            }
            total
        } else if self.far(zeta) {
            self.integrate(|t| (z - t).norm().ln())
        } else {
            self.mass() * h.ln() + h * self.local_log_integral(zeta)
        }
    }

    /// `∫_{-1}^{1} p(u) ln|u - ζ| du` by parts against the antiderivative.
    fn local_log_integral(&self, zeta: Complex64) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let p_end = quad::clenshaw(&self.anti, 1.0);
        // anchor the antiderivative at the endpoint nearer to ζ
        let anchor_right = (zeta - one).norm() < (zeta + one).norm();
        let shift = if anchor_right { p_end } else { 0.0 };
        let big_p = |u: f64| quad::clenshaw(&self.anti, u) - shift;
        let boundary = if anchor_right {
            -big_p(-1.0) * (-one - zeta).norm().ln()
        } else {
            big_p(1.0) * (one - zeta).norm().ln()
        };
        let p_zeta = quad::clenshaw_complex(&self.anti, zeta) - shift;
        let near_anchor = if anchor_right {
            (zeta - one).norm() < 1e-15
        } else {
            (zeta + one).norm() < 1e-15
        };
        let mut k = if near_anchor {
            Complex64::new(0.0, 0.0)
        } else {
            p_zeta * log_ratio(zeta)
        };
        let h = self.interval.half_width();
        for (&u, &wk) in self.local_nodes.iter().zip(&self.weights) {
            let wk = wk / h;
            let d = u - zeta;
            let q = if d.norm() < 1e-7 {
                quad::clenshaw_complex(&self.coeffs, zeta)
                    + quad::clenshaw_complex(&self.deriv, zeta) * d * 0.5
            } else {
                (big_p(u) - p_zeta) / d
            };
            k += q * wk;
        }
        boundary - k.re
    }

    /// Mass of the piece in `(-∞, t]`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= self.interval.lo {
            return 0.0;
        }
        if t >= self.interval.hi {
            return self.mass();
        }
        let u = self.local(t).clamp(-1.0, 1.0);
        if self.edge_singular {
            let theta = u.acos();
            let mut total = self.coeffs[0] * (PI - theta);
            for (k, &ck) in self.coeffs.iter().enumerate().skip(1) {
                total -= ck * (k as f64 * theta).sin() / k as f64;
            }
            total
        } else {
            self.interval.half_width() * quad::clenshaw(&self.anti, u)
        }
    }

    /// Quadrature rule (points, weights against ρ) for integrating functions
    /// with logarithmic endpoint behaviour.
    fn outer_rule(&self) -> Vec<(f64, f64)> {
        let (c, h) = (self.interval.center(), self.interval.half_width());
        let mut out = Vec::new();
        if self.edge_singular {
            let m = 2 * self.coeffs.len().max(32);
            for u in quad::chebyshev_nodes(m) {
                out.push((c + h * u, PI / m as f64 * quad::clenshaw(&self.coeffs, u)));
            }
        } else {
            let (gx, gw) = quad::gauss_legendre(16);
            let mut breaks = Vec::new();
            for k in (1..=40).rev() {
                breaks.push(-1.0 + (0.5f64).powi(k));
            }
            breaks.insert(0, -1.0);
            let mirrored: Vec<f64> = breaks.iter().rev().map(|b| -b).collect();
            breaks.extend(mirrored);
            for w in breaks.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b <= a {
                    continue;
                }
                let (pc, ph) = (0.5 * (a + b), 0.5 * (b - a));
                for (x, wt) in gx.iter().zip(&gw) {
                    let u = pc + ph * x;
                    out.push((c + h * u, h * ph * wt * quad::clenshaw(&self.coeffs, u)));
                }
            }
        }
        out
    }
}

/// Drops trailing coefficients below the rounding level of the series.
fn chop(mut c: Vec<f64>) -> Vec<f64> {
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    while c.len() > 1 && c.last().is_some_and(|v| v.abs() <= 1e-15 * scale) {
        c.pop();
    }
    c
}

fn horner(c: &[f64], w: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * w + ck)
}

/// `∫_{-1}^{1} du / (u - ζ) = ln(1 - ζ) - ln(-1 - ζ)`.
fn log_ratio(zeta: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (one - zeta).ln() - (-one - zeta).ln()
}

/// A finite positive measure on ℝ: atoms plus absolutely continuous pieces.
#[derive(Debug, Clone, Default)]
pub struct Measure {
    atoms: Vec<(f64, f64)>,
    prefix: Vec<f64>,
    pieces: Vec<Piece>,
}

impl Measure {
    pub fn new(mut atoms: Vec<(f64, f64)>, pieces: Vec<Piece>) -> Result<Self> {
        for &(x, w) in &atoms {
            if !x.is_finite() || !(w.is_finite() && w > 0.0) {
                return Err(Error::Invalid("atoms need finite position and positive weight"));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        let mut prefix = Vec::with_capacity(merged.len() + 1);
        prefix.push(0.0);
        // Neumaier summation keeps `N` atoms of weight `1/N` at mass 1.
        let (mut acc, mut comp) = (0.0_f64, 0.0_f64);
        for &(_, w) in &merged {
            let t = acc + w;
            comp += if acc.abs() >= w.abs() { (acc - t) + w } else { (w - t) + acc };
            acc = t;
            prefix.push(acc + comp);
        }
        Ok(Self { atoms: merged, prefix, pieces })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new()).unwrap_or_default()
    }

    pub fn atom(x: f64, w: f64) -> Result<Self> {
        Self::new(alloc::vec![(x, w)], Vec::new())
    }

    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(atoms, Vec::new())
    }

    /// Probability measure `dt / (π sqrt((t - lo)(hi - t)))`.
    pub fn arcsine(lo: f64, hi: f64) -> Result<Self> {
        let piece = Piece::from_fn(Interval::new(lo, hi)?, DEFAULT_DEGREE, true, |_| 1.0 / PI)?;
        Self::new(Vec::new(), alloc::vec![piece])
    }

    /// Normalized Lebesgue measure on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        let i = Interval::new(lo, hi)?;
        let d = 1.0 / i.len();
        let piece = Piece::from_fn(i, DEFAULT_DEGREE, false, |_| d)?;
        Self::new(Vec::new(), alloc::vec![piece])
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn total_mass(&self) -> f64 {
        self.prefix.last().copied().unwrap_or(0.0)
            + self.pieces.iter().map(Piece::mass).sum::<f64>()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.pieces.iter().all(|p| p.mass() == 0.0)
    }

    /// Smallest interval containing the closed support.
    pub fn support_hull(&self) -> Option<Interval> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if let (Some(first), Some(last)) = (self.atoms.first(), self.atoms.last()) {
            lo = first.0;
            hi = last.0;
        }
        for p in &self.pieces {
            lo = lo.min(p.interval.lo);
            hi = hi.max(p.interval.hi);
        }
        (lo <= hi).then_some(Interval { lo, hi })
    }

    fn nearest_atom_distance(&self, x: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.0 < x);
        let mut best = f64::INFINITY;
        if i < self.atoms.len() {
            best = best.min((self.atoms[i].0 - x).abs());
        }
        if i > 0 {
            best = best.min((self.atoms[i - 1].0 - x).abs());
        }
        best
    }

    /// `∫ g dμ` with atoms summed exactly and pieces by their quadrature rule.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|&(x, w)| w * g(x)).sum();
        atoms + self.pieces.iter().map(|p| p.integrate(&g)).sum::<f64>()
    }

    fn stieltjes(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, w) in &self.atoms {
            acc += w / (x - z);
        }
        for p in &self.pieces {
            acc += p.cauchy(z);
        }
        acc
    }

    /// Cauchy transform `∫ dμ(t) / (t - z)` on the open upper half plane.
    pub fn cauchy_transform(&self, z: Complex64) -> Result<Complex64> {
        if self.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if !(z.im > 0.0) {
            return Err(Error::Domain("Cauchy transform needs Im z > 0"));
        }
        Ok(self.stieltjes(z))
    }

    /// Cauchy transform at a real point off the closed support (a real number).
    pub fn cauchy_transform_real(&self, x: f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if self.nearest_atom_distance(x) <= ATOM_TOL
            || self.pieces.iter().any(|p| p.interval.contains(x))
        {
            return Err(Error::Domain("real point lies on the support"));
        }
        Ok(self.stieltjes(Complex64::new(x, 0.0)).re)
    }

    /// Logarithmic potential `∫ ln|t - z| dμ(t)`. Returns `-∞` when `z` sits on
    /// an atom.
    pub fn log_potential(&self, z: Complex64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if z.im.abs() <= ATOM_TOL && self.nearest_atom_distance(z.re) <= ATOM_TOL {
            return Ok(f64::NEG_INFINITY);
        }
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|&(x, w)| w * (z - x).norm().ln())
            .sum();
        Ok(atoms + self.pieces.iter().map(|p| p.log_potential(z)).sum::<f64>())
    }

    pub fn log_potential_real(&self, x: f64) -> Result<f64> {
        self.log_potential(Complex64::new(x, 0.0))
    }

    /// Logarithmic energy `∫∫ ln|s - t| dμ(s) dμ(t)`; `-∞` in the presence of
    /// atoms.
    pub fn energy(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if !self.atoms.is_empty() {
            return Ok(f64::NEG_INFINITY);
        }
        let mut total = 0.0;
        for p in &self.pieces {
            for (t, w) in p.outer_rule() {
                if w != 0.0 {
                    total += w * self.log_potential_real(t)?;
                }
            }
        }
        Ok(total)
    }

    pub fn moment(&self, n: u32) -> Result<f64> {
        if n > MAX_MOMENT {
            return Err(Error::Domain("moment order exceeds the configured maximum"));
        }
        if self.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        Ok(self.integrate(|t| t.powi(n as i32)))
    }

    /// Right-continuous distribution function `μ((-∞, t])`.
    pub fn cdf(&self, t: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.0 <= t);
        self.prefix[i] + self.pieces.iter().map(|p| p.cdf(t)).sum::<f64>()
    }

    /// Left limit `μ((-∞, t))`.
    pub fn cdf_left(&self, t: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.0 < t);
        self.prefix[i] + self.pieces.iter().map(|p| p.cdf(t)).sum::<f64>()
    }

    /// Density of the absolutely continuous part.
    pub fn density(&self, t: f64) -> f64 {
        self.pieces.iter().map(|p| p.density(t)).sum()
    }

    /// Push-forward under `t ↦ s t + c`.
    pub fn affine(&self, s: f64, c: f64) -> Result<Self> {
        if s == 0.0 {
            return Err(Error::Domain("affine scale must be nonzero"));
        }
        let atoms = self.atoms.iter().map(|&(x, w)| (s * x + c, w)).collect();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let (a, b) = (s * p.interval.lo + c, s * p.interval.hi + c);
            let interval = Interval::new(a.min(b), a.max(b))?;
            // the local variable flips with s < 0: T_k(-u) = (-1)^k T_k(u)
            let coeffs: Vec<f64> = p
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, v)| if s < 0.0 && k % 2 == 1 { -v } else { *v })
                .collect();
            let piece = if p.edge_singular {
                Piece::edge_singular_from_coeffs(interval, &coeffs)?
            } else {
                let scale = 1.0 / s.abs();
                let n = p.values.len();
                let (local, _) = quad::gauss_legendre(n);
                let values = local.iter().map(|&u| scale * quad::clenshaw(&coeffs, u)).collect();
                Piece::build(interval, false, values)?
            };
            pieces.push(piece);
        }
        Self::new(atoms, pieces)
    }
}

/// Sup-distance between two distribution functions, evaluated on atoms, piece
/// endpoints and a uniform grid of `10⁴` points over the joint hull.
pub fn kolmogorov(a: &Measure, b: &Measure) -> f64 {
    const GRID: usize = 10_000;
    let mut points: Vec<f64> = Vec::new();
    for m in [a, b] {
        points.extend(m.atoms.iter().map(|x| x.0));
        for p in &m.pieces {
            points.push(p.interval.lo);
            points.push(p.interval.hi);
        }
    }
    let hull = match (a.support_hull(), b.support_hull()) {
        (Some(x), Some(y)) => Some(Interval { lo: x.lo.min(y.lo), hi: x.hi.max(y.hi) }),
        (x, y) => x.or(y),
    };
    if let Some(h) = hull {
        let step = h.len() / (GRID - 1) as f64;
        points.extend((0..GRID).map(|k| h.lo + step * k as f64));
    }
    points
        .iter()
        .map(|&t| {
            let right = (a.cdf(t) - b.cdf(t)).abs();
            let left = (a.cdf_left(t) - b.cdf_left(t)).abs();
            right.max(left)
        })
        .fold(0.0, f64::max)
}
