use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::model::{CoeffModel, ModelKind};
use crate::error::{Error, Result};
use crate::herglotz::Herglotz;

/// `m(z) = (-z + √(z²-4))/2` on the Herglotz branch.
pub fn m_free(z: Complex64) -> Complex64 {
    let s = (z - 2.0).sqrt() * (z + 2.0).sqrt();
    (s - z) * 0.5
}

/// Möbius map `w ↦ (A w + B)/(C w + D)` stored as `[A, B, C, D]`.
#[derive(Debug, Clone, Copy)]
struct Mobius([Complex64; 4]);

impl Mobius {
    fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self([o, z, z, o])
    }

    /// One backward step `w ↦ 1/(b - z - a² w)`.
    fn step(a: f64, b: f64, z: Complex64) -> Self {
        let (o, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self([zero, o, Complex64::new(-a * a, 0.0), b - z])
    }

    fn then(self, inner: Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = inner.0;
        let m = Self([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h]);
        m.normalized()
    }

    fn normalized(self) -> Self {
        let s = self.0.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        if s > 0.0 && s.is_finite() {
            Self(self.0.map(|v| v / s))
        } else {
            self
        }
    }

    fn apply(&self, w: Complex64) -> Complex64 {
        let [a, b, c, d] = self.0;
        (a * w + b) / (c * w + d)
    }

    /// Center and radius of the image of the closed upper half plane.
    fn weyl_disk(&self) -> (Complex64, f64) {
        let [_, _, c, d] = self.0;
        if c.norm() == 0.0 {
            return (Complex64::new(f64::NAN, f64::NAN), f64::INFINITY);
        }
        let pole = -d / c;
        let center = self.apply(pole.conj());
        let radius = (self.apply(Complex64::new(0.0, 0.0)) - center).norm();
        (center, radius)
    }

    /// Fixed point in the upper half plane.
    fn fixed_point(&self) -> Option<Complex64> {
        let [a, b, c, d] = self.0;
        if c.norm() == 0.0 {
            return None;
        }
        let disc = ((d - a) * (d - a) + b * c * 4.0).sqrt();
        let r1 = (a - d + disc) / (c * 2.0);
        let r2 = (a - d - disc) / (c * 2.0);
        let best = if r1.im >= r2.im { r1 } else { r2 };
        (best.im > 0.0).then_some(best)
    }
}

/// An m-function value together with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MValue {
    pub value: Complex64,
    pub error: f64,
    pub depth: usize,
}

/// Index past which the model's tail is known exactly, with the tail value
/// of the right m-function there. `None` for tails without a closed form.
fn exact_tail(model: &CoeffModel, z: Complex64, at_least: usize) -> Option<(usize, Complex64)> {
    match model.kind() {
        ModelKind::Free => Some((at_least.max(1), m_free(z))),
        ModelKind::Table { a, .. } => Some(((a.len() + 1).max(at_least), m_free(z))),
        ModelKind::Periodic { a, b } => {
            let p = a.len();
            let mut m = Mobius::identity();
            for k in 0..p {
                m = m.then(Mobius::step(a[k], b[k], z));
            }
            let fixed = m.fixed_point()?;
            // r(1 + j p) = r(1); pick the first such index ≥ at_least
            let j = at_least.saturating_sub(1).div_ceil(p);
            Some((1 + j * p, fixed))
        }
        _ => None,
    }
}

/// `r(k)` for `k = 1..=upto`, where `r(k) = ⟨δ_k, (J_k - z)⁻¹ δ_k⟩` for the
/// operator restricted to `[k, ∞)`. Models without an exact tail are cut at
/// `depth` and the Weyl-disk radius at `upto` is returned as error.
pub fn right_m_sequence(
    model: &CoeffModel,
    z: Complex64,
    upto: usize,
    depth: usize,
) -> Result<(Vec<Complex64>, f64)> {
    if !(z.im > 0.0) {
        return Err(Error::Domain("m-functions need Im z > 0"));
    }
    let upto = upto.max(1);
    let (start, mut r, error) = match exact_tail(model, z, upto) {
        Some((k, r)) => (k, r, 0.0),
        None => {
            let depth = depth.max(upto);
            let mut m = Mobius::identity();
            for k in (upto..=depth).rev() {
                let (a, b) = model.coeffs(k as u64);
                m = Mobius::step(a, b, z).then(m);
            }
            let (center, radius) = m.weyl_disk();
            (upto, center, radius)
        }
    };
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); upto];
    let mut k = start;
    while k > upto {
        k -= 1;
        let (a, b) = model.coeffs(k as u64);
        r = 1.0 / (b - z - r * (a * a));
    }
    // r now holds r(upto)
    out[upto - 1] = r;
    for k in (1..upto).rev() {
        let (a, b) = model.coeffs(k as u64);
        r = 1.0 / (b - z - r * (a * a));
        out[k - 1] = r;
    }
    if out.iter().any(|v| !(v.im > 0.0) || !v.re.is_finite()) {
        return Err(Error::Internal("m-function left the upper half plane"));
    }
    Ok((out, error))
}

/// `m₊(z) = ⟨δ₁, (J - z)⁻¹ δ₁⟩`.
pub fn m_plus(model: &CoeffModel, z: Complex64, depth: usize) -> Result<MValue> {
    if !(z.im > 0.0) {
        return Err(Error::Domain("m-functions need Im z > 0"));
    }
    match exact_tail(model, z, 1) {
        Some(_) => {
            let (seq, _) = right_m_sequence(model, z, 1, depth)?;
            Ok(MValue { value: seq[0], error: 0.0, depth: 0 })
        }
        None => {
            let depth = depth.max(1);
            let mut m = Mobius::identity();
            for k in (1..=depth).rev() {
                let (a, b) = model.coeffs(k as u64);
                m = Mobius::step(a, b, z).then(m);
            }
            let (value, error) = m.weyl_disk();
            if !(value.im > 0.0) {
                return Err(Error::Internal("m-function left the upper half plane"));
            }
            Ok(MValue { value, error, depth })
        }
    }
}

/// `g_N(z) = (1/N) Σ_{n≤N} ⟨δ_n, (J - z)⁻¹ δ_n⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenValue {
    pub value: Complex64,
    pub error: f64,
}

pub fn green_avg(model: &CoeffModel, z: Complex64, n: usize, depth: usize) -> Result<GreenValue> {
    if n == 0 {
        return Err(Error::Domain("average needs N ≥ 1"));
    }
    let (right, error) = right_m_sequence(model, z, n + 1, depth)?;
    let mut left = Complex64::new(0.0, 0.0);
    let mut a_prev = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        let (a, b) = model.coeffs(k as u64);
        let base = b - z - left * (a_prev * a_prev);
        let denom = base - right[k] * (a * a);
        if !(denom.norm() > 1e-300) || !denom.re.is_finite() {
            return Err(Error::Singular("resolvent diagonal is singular"));
        }
        sum += 1.0 / denom;
        left = 1.0 / base;
        a_prev = a;
    }
    Ok(GreenValue { value: sum / n as f64, error })
}

/// `z ↦ g_N(z)` as a Herglotz function, for boundary limits.
#[derive(Debug, Clone)]
pub struct GreenAverage<'a> {
    pub model: &'a CoeffModel,
    pub n: usize,
    pub depth: usize,
}

impl Herglotz for GreenAverage<'_> {
    fn value(&self, z: Complex64) -> Complex64 {
        green_avg(self.model, z, self.n, self.depth)
            .map(|g| g.value)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}
