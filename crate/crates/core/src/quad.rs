//! Quadrature rules and Chebyshev series helpers shared by the measure and
//! potential code.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Gauss–Legendre nodes (ascending) and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Chebyshev points of the first kind, ascending: `-cos((2k+1)π/(2n))`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -((2 * k + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

/// Angles θ_k with `chebyshev_nodes(n)[k] = cos θ_k`.
fn chebyshev_angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| PI - (2 * k + 1) as f64 * PI / (2 * n) as f64)
        .collect()
}

/// Coefficients `c` with `f = Σ c_j T_j` from samples at [`chebyshev_nodes`].
pub fn chebyshev_coeffs(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let theta = chebyshev_angles(n);
    (0..n)
        .map(|j| {
            let s: f64 = values
                .iter()
                .zip(&theta)
                .map(|(v, t)| v * (j as f64 * t).cos())
                .sum();
            if j == 0 {
                s / n as f64
            } else {
                2.0 * s / n as f64
            }
        })
        .collect()
}

/// Clenshaw summation of `Σ c_j T_j(x)` for real arguments.
pub fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// Clenshaw summation of `Σ c_j T_j(z)` for complex arguments.
pub fn clenshaw_complex(c: &[f64], z: Complex64) -> Complex64 {
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = z * b1 * 2.0 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    z * b1 - b2 + c.first().copied().unwrap_or(0.0)
}

/// Chebyshev coefficients of the antiderivative vanishing at -1.
pub fn chebyshev_integral(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let at = |k: usize| c.get(k).copied().unwrap_or(0.0);
    let mut out = vec![0.0; n + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = if k == 1 {
            at(0) - at(2) / 2.0
        } else {
            (at(k - 1) - at(k + 1)) / (2.0 * k as f64)
        };
    }
    // T_k(-1) = (-1)^k
    let at_minus_one: f64 = out
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
        .sum();
    out[0] = -at_minus_one;
    out
}

/// Chebyshev coefficients of the derivative.
pub fn chebyshev_derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n + 1];
    for k in (0..n - 1).rev() {
        d[k] = d[k + 2] + 2.0 * (k + 1) as f64 * c[k + 1];
    }
    d[0] /= 2.0;
    d.truncate(n - 1);
    d
}

/// Barycentric weights for interpolation through arbitrary distinct nodes.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if j != k {
                w[j] /= nodes[j] - nodes[k];
            }
        }
    }
    // rescale to avoid overflow for large n
    let scale = w.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale > 0.0 {
        for v in &mut w {
            *v /= scale;
        }
    }
    w
}

/// Evaluates the barycentric interpolant at `x`.
pub fn barycentric_eval(nodes: &[f64], weights: &[f64], values: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&t, &w), &v) in nodes.iter().zip(weights).zip(values) {
        let d = x - t;
        if d == 0.0 {
            return v;
        }
        num += w * v / d;
        den += w / d;
    }
    num / den
}

/// Principal square-root branch of `sqrt(ζ² - 1)` behaving like ζ at infinity,
/// cut along [-1, 1] and taking the upper-half-plane limit on the cut.
pub fn joukowski_root(zeta: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (zeta - one).sqrt() * (zeta + one).sqrt()
}
