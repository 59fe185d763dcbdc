//! Herglotz functions: evaluation, boundary limits, Krein functions and the
//! reflectionless constructions built from them.

mod krein;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

pub use krein::{
    atom_constructor, atom_integral, from_krein, from_krein_calibrated, kernel_integral,
    pointmass_possible, rearranged, xi_naught, KreinFn, KreinHerglotz,
};

use crate::error::{Error, Result};
use crate::limit::{extrapolate, extrapolate_real, Limit, Schedule};
use crate::measures::Measure;
#[allow(unused_imports)]
use num_traits::Float;

/// A holomorphic self-map of the upper half plane.
///
/// `value` is evaluated without domain checks; use [`eval`] for the checked
/// entry point.
pub trait Herglotz {
    fn value(&self, z: Complex64) -> Complex64;

    /// Principal logarithm, imaginary part in `[0, π]`.
    fn log_value(&self, z: Complex64) -> Complex64 {
        self.value(z).ln()
    }
}

impl<T: Herglotz + ?Sized> Herglotz for &T {
    fn value(&self, z: Complex64) -> Complex64 {
        (**self).value(z)
    }

    fn log_value(&self, z: Complex64) -> Complex64 {
        (**self).log_value(z)
    }
}

/// The Cauchy transform `∫ dμ(t)/(t-z)`.
impl Herglotz for Measure {
    fn value(&self, z: Complex64) -> Complex64 {
        self.cauchy_transform(z)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

pub fn eval<F: Herglotz + ?Sized>(f: &F, z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain("Herglotz evaluation needs Im z > 0"));
    }
    Ok(f.value(z))
}

/// `F(z) = a + bz + ∫ (1/(t-z) - t/(t²+1)) dμ(t)`.
#[derive(Debug, Clone)]
pub struct HerglotzRep {
    a: f64,
    b: f64,
    mu: Measure,
    shift: f64,
}

impl HerglotzRep {
    pub fn new(a: f64, b: f64, mu: Measure) -> Result<Self> {
        if !a.is_finite() || !(b >= 0.0 && b.is_finite()) {
            return Err(Error::Invalid("representation needs finite a and b ≥ 0"));
        }
        let shift = mu.integrate(|t| t / (t * t + 1.0));
        Ok(Self { a, b, mu, shift })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn measure(&self) -> &Measure {
        &self.mu
    }
}

impl Herglotz for HerglotzRep {
    fn value(&self, z: Complex64) -> Complex64 {
        let mut v = z * self.b + self.a - self.shift;
        if !self.mu.is_empty() {
            v += self.mu.value(z);
        }
        v
    }
}

/// Either form of an evaluable Herglotz function.
#[derive(Debug, Clone)]
pub enum HerglotzEval {
    Rep(HerglotzRep),
    Krein(KreinHerglotz),
}

impl Herglotz for HerglotzEval {
    fn value(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Rep(r) => r.value(z),
            Self::Krein(k) => k.value(z),
        }
    }

    fn log_value(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Rep(r) => r.log_value(z),
            Self::Krein(k) => k.log_value(z),
        }
    }
}

impl From<HerglotzRep> for HerglotzEval {
    fn from(r: HerglotzRep) -> Self {
        Self::Rep(r)
    }
}

impl From<KreinHerglotz> for HerglotzEval {
    fn from(k: KreinHerglotz) -> Self {
        Self::Krein(k)
    }
}

/// `lim_{y→0+} F(x + iy)`; non-convergence is reported in the returned limit.
pub fn boundary_value<F: Herglotz + ?Sized>(f: &F, x: f64, schedule: &Schedule) -> Limit {
    extrapolate(schedule, |y| f.value(Complex64::new(x, y)))
}

/// Boundary value of the Krein function `ξ(x) = (1/π) lim Im ln F(x + iy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KreinValue {
    pub xi: f64,
    pub limit: Limit,
    /// Non-convergent limit or an excursion outside `[0, 1]` beyond `1e-6`.
    pub flagged: bool,
}

pub const XI_CLAMP: f64 = 1e-6;

pub fn krein_xi<F: Herglotz + ?Sized>(f: &F, x: f64, schedule: &Schedule) -> KreinValue {
    let limit = extrapolate_real(schedule, |y| f.log_value(Complex64::new(x, y)).im / PI);
    let raw = limit.value.re;
    let excursion = (-raw).max(raw - 1.0);
    KreinValue {
        xi: raw.clamp(0.0, 1.0),
        limit,
        flagged: !limit.converged || excursion > XI_CLAMP || raw.is_nan(),
    }
}

/// `μ({x}) = lim_{y→0+} y Im F(x + iy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub mass: f64,
    pub limit: Limit,
}

pub fn point_mass<F: Herglotz + ?Sized>(f: &F, x: f64, schedule: &Schedule) -> PointMass {
    let limit = extrapolate_real(schedule, |y| y * f.value(Complex64::new(x, y)).im);
    PointMass { mass: limit.value.re.max(0.0), limit }
}

/// Grid test of `Re F(t) = 0` on a set.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionlessReport {
    pub max_abs_re: f64,
    pub worst_x: f64,
    pub tol: f64,
    pub points: usize,
    /// Grid points whose boundary limit did not converge.
    pub nonconvergent: Vec<f64>,
    pub pass: bool,
}

pub fn is_reflectionless<F: Herglotz + ?Sized>(
    f: &F,
    grid: &[f64],
    tol: f64,
    schedule: &Schedule,
) -> ReflectionlessReport {
    let mut report = ReflectionlessReport {
        max_abs_re: 0.0,
        worst_x: f64::NAN,
        tol,
        points: grid.len(),
        nonconvergent: Vec::new(),
        pass: true,
    };
    for &x in grid {
        let lim = boundary_value(f, x, schedule);
        if !lim.converged {
            report.nonconvergent.push(x);
        }
        let re = lim.value.re.abs();
        if !(re <= report.max_abs_re) {
            report.max_abs_re = re;
            report.worst_x = x;
        }
    }
    report.pass = report.max_abs_re <= tol;
    report
}
