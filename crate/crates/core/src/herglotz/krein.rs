use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::Herglotz;
use crate::error::{Error, Result};
use crate::measures::{inverse_distance_integral, SetUnion};
#[allow(unused_imports)]
use num_traits::Float;

/// Piecewise-constant `ξ: ℝ → [0, 1]`. `values[0]` holds on `(-∞, breaks[0])`,
/// `values[i]` on `(breaks[i-1], breaks[i])` and the last value on the right
/// tail.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinFn {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl KreinFn {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::Invalid("Krein function needs one value per piece, tails included"));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("Krein function breaks must be finite and increasing"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Invalid("Krein function values must lie in [0, 1]"));
        }
        let (left, right) = (values[0], values[values.len() - 1]);
        let unit = |v: f64| v == 0.0 || v == 1.0;
        if !(left == right || (unit(left) && unit(right))) {
            return Err(Error::Invalid("Krein function tails must lie in {0, 1} or agree"));
        }
        Ok(Self { breaks, values }.merged())
    }

    pub fn constant(v: f64) -> Result<Self> {
        Self::new(Vec::new(), alloc::vec![v])
    }

    /// `χ_{(x, ∞)}`.
    pub fn step_at(x: f64) -> Result<Self> {
        Self::new(alloc::vec![x], alloc::vec![0.0, 1.0])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn merged(self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut values = alloc::vec![self.values[0]];
        for (b, &v) in self.breaks.iter().zip(&self.values[1..]) {
            if v != *values.last().unwrap_or(&f64::NAN) {
                breaks.push(*b);
                values.push(v);
            }
        }
        Self { breaks, values }
    }

    /// Value at `t`; at a break the right-hand value is returned.
    pub fn eval(&self, t: f64) -> f64 {
        self.values[self.breaks.partition_point(|b| *b <= t)]
    }

    /// True when `t` is not a jump of `ξ`.
    pub fn is_continuity_point(&self, t: f64) -> bool {
        let i = self.breaks.partition_point(|b| *b < t);
        i == self.breaks.len() || self.breaks[i] != t
    }

    /// `ξ ≡ 0` or `ξ ≡ 1`, for which the generated function is a real constant.
    pub fn is_degenerate(&self) -> bool {
        self.values.len() == 1 && (self.values[0] == 0.0 || self.values[0] == 1.0)
    }

    /// Bounded pieces `(p, q, v)` with `v ≠ 0`.
    fn bounded_pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks
            .windows(2)
            .zip(&self.values[1..])
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// Segments `(p, q, v)` of `ξ` restricted to `(a, b)`.
    pub fn segments_within(&self, a: f64, b: f64) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        let mut lo = a;
        let start = self.breaks.partition_point(|x| *x <= a);
        for k in start..=self.breaks.len() {
            let hi = if k < self.breaks.len() { self.breaks[k].min(b) } else { b };
            if hi > lo {
                out.push((lo, hi, self.values[k]));
            }
            lo = hi;
            if lo >= b {
                break;
            }
        }
        out
    }

    /// `∫_a^b ξ dt`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.segments_within(a, b)
            .iter()
            .map(|(p, q, v)| v * (q - p))
            .sum()
    }

    /// `ln G(z) - c = ∫ ξ(t) (1/(t-z) - t/(t²+1)) dt`, summed in closed form.
    pub fn log_integral(&self, z: Complex64) -> Complex64 {
        let log = |x: f64| (Complex64::new(x, 0.0) - z).ln();
        let half_ln = |x: f64| 0.5 * (x * x + 1.0).ln();
        let (first, last) = match (self.breaks.first(), self.breaks.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => (0.0, 0.0),
        };
        let left = self.values[0];
        let right = self.values[self.values.len() - 1];
        let mut acc = Complex64::new(0.0, 0.0);
        if left != 0.0 {
            acc += (log(first) - half_ln(first) + Complex64::new(0.0, PI)) * left;
        }
        if right != 0.0 {
            acc += (half_ln(last) - log(last)) * right;
        }
        for (p, q, v) in self.bounded_pieces() {
            if v != 0.0 {
                acc += (log(q) - log(p) - (half_ln(q) - half_ln(p))) * v;
            }
        }
        acc
    }
}

/// The Herglotz function `G = exp(c + ∫ ξ(t)(1/(t-z) - t/(t²+1)) dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinHerglotz {
    xi: KreinFn,
    c: f64,
}

impl KreinHerglotz {
    pub fn xi(&self) -> &KreinFn {
        &self.xi
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    /// Real-constant output (`ξ ≡ 0` or `ξ ≡ 1`).
    pub fn is_degenerate(&self) -> bool {
        self.xi.is_degenerate()
    }
}

impl Herglotz for KreinHerglotz {
    fn value(&self, z: Complex64) -> Complex64 {
        self.log_value(z).exp()
    }

    fn log_value(&self, z: Complex64) -> Complex64 {
        self.xi.log_integral(z) + self.c
    }
}

/// Exponential representation with additive constant `c`.
pub fn from_krein(xi: &KreinFn, c: f64) -> KreinHerglotz {
    KreinHerglotz { xi: xi.clone(), c }
}

/// Exponential representation normalized so that `|G(i)| = modulus`.
pub fn from_krein_calibrated(xi: &KreinFn, modulus: f64) -> Result<KreinHerglotz> {
    if !(modulus > 0.0 && modulus.is_finite()) {
        return Err(Error::Domain("calibration modulus must be positive"));
    }
    let at_i = xi.log_integral(Complex64::new(0.0, 1.0)).re;
    Ok(from_krein(xi, modulus.ln() - at_i))
}

/// `∫_a^b ξ(t) / (t - x) dt` for `x ∉ [a, b]`, in closed form.
pub fn kernel_integral(xi: &KreinFn, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Invalid("kernel integral needs a < b"));
    }
    if (a..=b).contains(&x) {
        return Err(Error::Domain("kernel point must lie outside [a, b]"));
    }
    Ok(xi
        .segments_within(a, b)
        .iter()
        .filter(|s| s.2 != 0.0)
        .map(|&(p, q, v)| v * ((q - x) / (p - x)).ln())
        .sum())
}

/// The rearranged comparison function `χ_{(a, a+c)}` on `(a, b)` with
/// `c = ∫_a^b ξ`, as a Krein function vanishing elsewhere.
pub fn rearranged(xi: &KreinFn, a: f64, b: f64) -> Result<KreinFn> {
    let c = xi.integral(a, b);
    if c <= 0.0 {
        return KreinFn::constant(0.0);
    }
    KreinFn::new(alloc::vec![a, a + c], alloc::vec![0.0, 1.0, 0.0])
}

/// True when some `μ ∈ R(E)` can carry an atom at `x`, i.e.
/// `∫_{x-1}^{x+1} χ_E(t)/|t-x| dt < ∞`.
pub fn pointmass_possible(e: &SetUnion, x: f64) -> bool {
    inverse_distance_integral(e, x).is_finite()
}

/// `ξ = ½ χ_E + χ_{E^c ∩ (x, ∞)}`, whose Herglotz function is reflectionless
/// on `E` with an atom at `x`.
pub fn atom_constructor(e: &SetUnion, x: f64) -> Result<KreinFn> {
    if !pointmass_possible(e, x) {
        return Err(Error::NoAtomPossible);
    }
    let e = e.without_points();
    let mut breaks: Vec<f64> = e.intervals().iter().flat_map(|i| [i.lo, i.hi]).collect();
    breaks.push(x);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let value = |t: f64| {
        if e.contains(t) {
            0.5
        } else if t > x {
            1.0
        } else {
            0.0
        }
    };
    let mut values = Vec::with_capacity(breaks.len() + 1);
    values.push(value(breaks[0] - 1.0));
    for w in breaks.windows(2) {
        values.push(value(0.5 * (w[0] + w[1])));
    }
    values.push(value(breaks[breaks.len() - 1] + 1.0));
    KreinFn::new(breaks, values)
}

/// `∫_{x-1}^{x+1} |ξ(t) - χ_{(x,∞)}(t)| / |t-x| dt`, finite exactly when the
/// generated measure has an atom at `x`.
pub fn atom_integral(xi: &KreinFn, x: f64) -> f64 {
    let mut total = 0.0;
    let left = xi.segments_within(x - 1.0, x).into_iter().map(|(p, q, v)| (q, p, v.abs()));
    let right = xi.segments_within(x, x + 1.0).into_iter().map(|(p, q, v)| (p, q, (1.0 - v).abs()));
    for (near, far, d) in left.chain(right) {
        if d == 0.0 {
            continue;
        }
        if near == x {
            return f64::INFINITY;
        }
        total += d * ((far - x) / (near - x)).abs().ln();
    }
    total
}

/// Replaces `ξ` on each bounded gap `(a, b)` of `E` by `χ_{(a, a+c)}` with
/// `c = ∫_a^b ξ`, sets `½` on `E` and `1` on unbounded gaps.
pub fn xi_naught(xi: &KreinFn, e: &SetUnion, tol: f64) -> Result<KreinFn> {
    let e = e.without_points();
    for iv in e.intervals() {
        for (p, q, v) in xi.segments_within(iv.lo, iv.hi) {
            if (v - 0.5).abs() > tol {
                return Err(Error::NotHalfOnSet { at: 0.5 * (p + q), value: v });
            }
        }
    }
    let ivs = e.intervals();
    if ivs.is_empty() {
        return KreinFn::constant(1.0);
    }
    let mut breaks = Vec::new();
    let mut values = alloc::vec![1.0];
    for (k, iv) in ivs.iter().enumerate() {
        breaks.push(iv.lo);
        values.push(0.5);
        breaks.push(iv.hi);
        if let Some(next) = ivs.get(k + 1) {
            let c = xi.integral(iv.hi, next.lo);
            if c > 0.0 && iv.hi + c < next.lo {
                values.push(1.0);
                breaks.push(iv.hi + c);
                values.push(0.0);
            } else if c > 0.0 {
                values.push(1.0);
            } else {
                values.push(0.0);
            }
        } else {
            values.push(1.0);
        }
    }
    KreinFn::new(breaks, values)
}
