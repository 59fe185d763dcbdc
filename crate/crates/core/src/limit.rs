//! Limits `y → 0+` along a geometric schedule with Richardson extrapolation.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Geometric schedule `y_k = ratio^-k`, `k = 1..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub ratio: f64,
    pub steps: u32,
    pub tol: f64,
    /// Smallest `y` the schedule is allowed to reach.
    pub floor: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { ratio: 2.0, steps: 40, tol: 1e-8, floor: 0.0 }
    }
}

impl Schedule {
    pub fn with_floor(self, floor: f64) -> Self {
        Self { floor, ..self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Self { tol, ..self }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let floor = self.floor;
        (1..=self.steps as i32)
            .map(move |k| self.ratio.powi(-k))
            .take_while(move |&y| y >= floor)
    }
}

/// Outcome of an extrapolated limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limit {
    pub value: Complex64,
    /// Raw value at the smallest `y` evaluated.
    pub last_raw: Complex64,
    pub last_y: f64,
    /// Largest of the final two extrapolant differences.
    pub diff: f64,
    pub converged: bool,
}

/// Two-point Richardson extrapolation assuming an `O(y)` error. Convergence
/// means three successive extrapolants agree to `tol · max(1, |R|)`.
pub fn extrapolate(schedule: &Schedule, mut f: impl FnMut(f64) -> Complex64) -> Limit {
    let mut prev: Option<Complex64> = None;
    let mut rich: [Option<Complex64>; 3] = [None; 3];
    let mut out = Limit {
        value: Complex64::new(f64::NAN, f64::NAN),
        last_raw: Complex64::new(f64::NAN, f64::NAN),
        last_y: f64::NAN,
        diff: f64::INFINITY,
        converged: false,
    };
    let r = schedule.ratio;
    for y in schedule.points() {
        let v = f(y);
        out.last_raw = v;
        out.last_y = y;
        if !(v.re.is_finite() && v.im.is_finite()) {
            out.converged = false;
            out.value = v;
            return out;
        }
        if let Some(p) = prev {
            let ext = (v * r - p) / (r - 1.0);
            rich = [rich[1], rich[2], Some(ext)];
            out.value = ext;
            if let [Some(a), Some(b), Some(c)] = rich {
                let d = (c - b).norm().max((b - a).norm());
                out.diff = d;
                if d < schedule.tol * c.norm().max(1.0) {
                    out.converged = true;
                    return out;
                }
            }
        } else {
            out.value = v;
        }
        prev = Some(v);
    }
    out
}

/// Real-valued variant of [`extrapolate`].
pub fn extrapolate_real(schedule: &Schedule, mut f: impl FnMut(f64) -> f64) -> Limit {
    extrapolate(schedule, |y| Complex64::new(f(y), 0.0))
}
