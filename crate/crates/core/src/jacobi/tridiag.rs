use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::model::CoeffModel;
use crate::error::{Error, Result};

/// Relative size of the substitute for an exactly vanishing pivot.
const PIVOT_EPS: f64 = 1e-14;

/// Symmetric tridiagonal matrix with diagonal `b(1..=N)` and off-diagonal
/// `a(1..N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// `J_N`: the model restricted to `{1, …, N}` with Dirichlet ends.
pub fn truncate(model: &CoeffModel, n: usize) -> Tridiagonal {
    let (a, b) = model.coeff_table(n);
    Tridiagonal { diag: b, off: a[..n.saturating_sub(1)].to_vec() }
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Invalid("tridiagonal needs N ≥ 1 diagonal and N-1 off-diagonal entries"));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("tridiagonal entries must be finite"));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `t`, from the pivots of
    /// `LDLᵀ = J - t`.
    pub fn sturm_count(&self, t: f64) -> usize {
        sturm_block(&self.diag, &self.off, t)
    }

    /// All eigenvalues in ascending order by bisection on the Sturm count.
    /// Bisection stops once the bracket is below `tol` or can no longer be
    /// split in floating point, so `tol = 0` yields full precision.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        self.eigenvalue_range(0..self.len(), tol)
    }

    /// Eigenvalues with ascending indices in `range`.
    pub fn eigenvalue_range(&self, range: core::ops::Range<usize>, tol: f64) -> Result<Vec<f64>> {
        if !(tol >= 0.0) {
            return Err(Error::Domain("eigenvalue tolerance must be nonnegative"));
        }
        if range.end > self.len() {
            return Err(Error::Domain("eigenvalue index out of range"));
        }
        // split at vanishing couplings; block spectra are merged at the end
        let mut blocks = Vec::new();
        let mut start = 0;
        for (i, a) in self.off.iter().enumerate() {
            if *a == 0.0 {
                blocks.push((start, i + 1));
                start = i + 1;
            }
        }
        blocks.push((start, self.len()));
        if blocks.len() > 1 {
            let mut all = Vec::with_capacity(self.len());
            for (s, e) in blocks {
                let sub = Tridiagonal { diag: self.diag[s..e].to_vec(), off: self.off[s..e - 1].to_vec() };
                all.extend(sub.bisect(0..e - s, tol));
            }
            all.sort_by(f64::total_cmp);
            return Ok(all[range].to_vec());
        }
        Ok(self.bisect(range, tol))
    }

    fn bisect(&self, range: core::ops::Range<usize>, tol: f64) -> Vec<f64> {
        let (glo, ghi) = self.gershgorin();
        let pad = 1e-12 * (1.0 + glo.abs().max(ghi.abs()));
        let (glo, ghi) = (glo - pad, ghi + pad);
        let n = self.len();
        let off2: Vec<f64> = self.off.iter().map(|a| a * a).collect();
        // lower[k]: largest known t with count(t) ≤ k; upper[k]: smallest with count(t) > k
        let mut lower = alloc::vec![glo; n];
        let mut upper = alloc::vec![ghi; n];
        let mut out = Vec::with_capacity(range.len());
        let indices: Vec<usize> = range.collect();
        // independent shifts share one pass so the pivot divisions pipeline
        for chunk in indices.chunks(LANES) {
            let mut lo = [0.0; LANES];
            let mut hi = [0.0; LANES];
            let mut active = [false; LANES];
            for (l, &j) in chunk.iter().enumerate() {
                (lo[l], hi[l], active[l]) = (lower[j], upper[j], true);
            }
            loop {
                let mut mids = [0.0; LANES];
                for (l, &j) in chunk.iter().enumerate() {
                    lo[l] = lo[l].max(lower[j]);
                    hi[l] = hi[l].min(upper[j]);
                    let mid = 0.5 * (lo[l] + hi[l]);
                    if hi[l] - lo[l] <= tol || mid <= lo[l] || mid >= hi[l] {
                        active[l] = false;
                    }
                    mids[l] = mid;
                }
                if !active.iter().any(|a| *a) {
                    break;
                }
                let counts = sturm_lanes(&self.diag, &self.off, &off2, &mids);
                for (l, &j) in chunk.iter().enumerate() {
                    if !active[l] {
                        continue;
                    }
                    let (mid, c) = (mids[l], counts[l]);
                    if c > j {
                        hi[l] = mid;
                        for u in &mut upper[j..c] {
                            *u = u.min(mid);
                        }
                    } else {
                        lo[l] = mid;
                        for v in &mut lower[c.max(j)..] {
                            if *v < mid {
                                *v = mid;
                            } else {
                                break;
                            }
                        }
                    }
                }
            }
            out.extend((0..chunk.len()).map(|l| 0.5 * (lo[l] + hi[l])));
        }
        out
    }

    /// `tr Jⁿ` for `n ≤ 8`, from banded powers.
    pub fn trace_power(&self, power: u32) -> f64 {
        let n = self.len();
        if power == 0 {
            return n as f64;
        }
        let band = power as usize;
        let width = 2 * band + 1;
        // row i of Jᵏ stored at columns i-band..=i+band
        let mut cur = alloc::vec![0.0; n * width];
        for i in 0..n {
            cur[i * width + band] = 1.0;
        }
        for _ in 0..power {
            let mut next = alloc::vec![0.0; n * width];
            for i in 0..n {
                for d in 0..width {
                    let v = cur[i * width + d];
                    if v == 0.0 {
                        continue;
                    }
                    // column j = i + d - band; multiply by column j of J
                    let j = i as isize + d as isize - band as isize;
                    if j < 0 || j as usize >= n {
                        continue;
                    }
                    let j = j as usize;
                    let mut add = |col: usize, w: f64| {
                        let dd = col as isize - i as isize + band as isize;
                        if (0..width as isize).contains(&dd) {
                            next[i * width + dd as usize] += v * w;
                        }
                    };
                    add(j, self.diag[j]);
                    if j > 0 {
                        add(j - 1, self.off[j - 1]);
                    }
                    if j + 1 < n {
                        add(j + 1, self.off[j]);
                    }
                }
            }
            cur = next;
        }
        (0..n).map(|i| cur[i * width + band]).sum()
    }
}

const LANES: usize = 8;

/// [`sturm_block`] for `LANES` shifts at once; `off2` holds the squared couplings.
fn sturm_lanes(diag: &[f64], off: &[f64], off2: &[f64], ts: &[f64; LANES]) -> [usize; LANES] {
    let mut counts = [0usize; LANES];
    let mut d = [1.0f64; LANES];
    for (i, &b) in diag.iter().enumerate() {
        let a2 = if i == 0 { 0.0 } else { off2[i - 1] };
        for l in 0..LANES {
            let shifted = b - ts[l];
            let mut v = shifted - a2 / d[l];
            if v == 0.0 {
                let scale = shifted.abs()
                    + if i > 0 { off[i - 1].abs() } else { 0.0 }
                    + off.get(i).map_or(0.0, |a| a.abs());
                v = PIVOT_EPS * scale.max(f64::MIN_POSITIVE);
            }
            counts[l] += (v < 0.0) as usize;
            d[l] = v;
        }
    }
    counts
}

fn sturm_block(diag: &[f64], off: &[f64], t: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, &b) in diag.iter().enumerate() {
        let shifted = b - t;
        d = if i == 0 {
            shifted
        } else {
            let a = off[i - 1];
            shifted - a * a / d
        };
        if d == 0.0 {
            let scale = shifted.abs()
                + if i > 0 { off[i - 1].abs() } else { 0.0 }
                + off.get(i).map_or(0.0, |a| a.abs());
            d = PIVOT_EPS * scale.max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}
