//! Exact integrals of the hat functions of a unit-spaced mesh against the
//! weakly singular kernel `z^{-a}`, `0 ≤ a < 1`.
//!
//! For cell `[k, k+1]` we need
//!
//! ```text
//! left(k)  = ∫₀¹ (1 − s)(k + s)^{-a} ds
//! right(k) = ∫₀¹ s (k + s)^{-a} ds
//! ```
//!
//! The closed forms lose about `k²·ε` relative accuracy to cancellation, so
//! cells with `k ≥ SERIES_FROM` use the binomial series of `(1 + s/k)^{-a}`
//! instead, which converges like `k^{-n}`.

const SERIES_FROM: usize = 4;

#[derive(Debug, Clone)]
pub(crate) struct CellMoments {
    left: Vec<f64>,
    right: Vec<f64>,
}

impl CellMoments {
    /// Moments for cells `k = 0..n_cells`.
    pub(crate) fn new(a: f64, n_cells: usize) -> Self {
        debug_assert!((0.0..1.0).contains(&a));
        let (left, right) = (0..n_cells).map(|k| cell(a, k)).unzip();
        Self { left, right }
    }

    #[inline]
    pub(crate) fn left(&self, k: usize) -> f64 {
        self.left[k]
    }

    #[inline]
    pub(crate) fn right(&self, k: usize) -> f64 {
        self.right[k]
    }
}

fn cell(a: f64, k: usize) -> (f64, f64) {
    if k == 0 {
        return (1.0 / ((1.0 - a) * (2.0 - a)), 1.0 / (2.0 - a));
    }
    if k < SERIES_FROM {
        let kf = k as f64;
        let total = ((kf + 1.0).powf(1.0 - a) - kf.powf(1.0 - a)) / (1.0 - a);
        let right = ((kf + 1.0).powf(2.0 - a) - kf.powf(2.0 - a)) / (2.0 - a) - kf * total;
        return (total - right, right);
    }
    let inv_k = 1.0 / k as f64;
    let mut coeff = 1.0; // binom(-a, n) k^{-n}
    let (mut left, mut right) = (0.0, 0.0);
    for n in 0..64 {
        let nf = n as f64;
        let dl = coeff / ((nf + 1.0) * (nf + 2.0));
        let dr = coeff / (nf + 2.0);
        left += dl;
        right += dr;
        if dr.abs() < 1e-18 * right.abs() {
            break;
        }
        coeff *= (-a - nf) / (nf + 1.0) * inv_k;
    }
    let scale = (k as f64).powf(-a);
    (left * scale, right * scale)
}

/// `∫_lo^hi (c0 + c1 z) z^{-a} dz` for `0 ≤ lo ≤ hi`.
pub(crate) fn linear_against_power(lo: f64, hi: f64, a: f64, c0: f64, c1: f64) -> f64 {
    let m0 = (hi.powf(1.0 - a) - lo.powf(1.0 - a)) / (1.0 - a);
    let m1 = (hi.powf(2.0 - a) - lo.powf(2.0 - a)) / (2.0 - a);
    c0 * m0 + c1 * m1
}
