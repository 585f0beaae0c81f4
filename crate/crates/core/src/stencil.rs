//! Closed-form row weights of the discrete flux operator.
//!
//! Row `i` (interior node) of the assembled operator touches columns
//! `0..=i+1`:
//!
//! * `T_k` on column `i − k`, `1 ≤ k < i`: the stationary part of the `K`
//!   kernel, identical for every row (Toeplitz).
//! * column 0: the `J` weight `α x_i^{-α-1}/Γ(1−α)` plus the truncated last
//!   hat of the `K` integral.
//! * the slope `p` enters with multiplier `P_i` through the chosen
//!   [`SlopeRule`].
//! * an optional boundary-layer correction `γ_i β_i(u)` with
//!   `β_i(u) = u_0 − u_i + x_i p − κ_i δ²u_i` that makes the row exact on
//!   `x^α`, the profile every solution develops at `x = 0`. With
//!   `κ_i = x_i²/2`, `β_i` vanishes on quadratics, so smooth data barely
//!   feel it. It shifts the column-0 weight by `γ_i`, the slope multiplier
//!   by `γ_i x_i` and puts `−γ_i κ_i/h²` on both neighbours.
//!
//! The diagonal is minus the sum of the off-diagonal entries.

use crate::grid::Grid1D;
use crate::moments::CellMoments;
use crate::operator::SlopeRule;
use crate::order::FracOrder;

#[derive(Debug, Clone)]
pub(crate) struct Stencil {
    h: f64,
    alpha: f64,
    /// `toeplitz[k] = T_k`; index 0 unused.
    toeplitz: Vec<f64>,
    /// Weight on `u_0` from `J` and the truncated hat, per row.
    col0: Vec<f64>,
    /// Slope multiplier `P_i`, per row.
    slope: Vec<f64>,
    moments: CellMoments,
}

impl Stencil {
    pub(crate) fn new(grid: &Grid1D, order: &FracOrder) -> Self {
        let n = grid.n_cells();
        let h = grid.spacing();
        let a = order.alpha();
        let moments = CellMoments::new(a, n);
        let scale = order.c_alpha() * h.powf(1.0 - a);
        // right moment of the cell ending at node k; cell 0 carries q(h) as a constant
        let right = |k: usize| {
            if k == 1 {
                1.0 / (1.0 - a)
            } else {
                moments.right(k - 1)
            }
        };
        let mut toeplitz = vec![0.0; n];
        for (k, t) in toeplitz.iter_mut().enumerate().skip(1) {
            let z = k as f64 * h;
            *t = scale * (right(k) + moments.left(k)) / (z * z);
        }
        let mut col0 = vec![0.0; n];
        let mut slope = vec![0.0; n];
        let mut running = 0.0; // Σ_{k<i} full hat / (k h)
        for i in 1..n {
            let x = grid.node(i);
            let j0 = a * x.powf(-a - 1.0) / order.gamma_1ma();
            let trunc = scale * right(i);
            col0[i] = j0 + trunc / (x * x);
            let jp = (a + 1.0) * x.powf(-a) / order.gamma_1ma();
            slope[i] = jp + scale * running + trunc / x;
            let z = i as f64 * h;
            running += (right(i) + moments.left(i.min(n - 1))) / z;
        }
        Self {
            h,
            alpha: a,
            toeplitz,
            col0,
            slope,
            moments,
        }
    }

    #[inline]
    pub(crate) fn toeplitz(&self) -> &[f64] {
        &self.toeplitz
    }

    #[inline]
    pub(crate) fn col0(&self, i: usize) -> f64 {
        self.col0[i]
    }

    #[inline]
    pub(crate) fn moments(&self) -> &CellMoments {
        &self.moments
    }

    /// Extra weights `(lower, upper)` the slope and the correction `gamma`
    /// put on columns `i−1`, `i+1`.
    #[inline]
    pub(crate) fn slope_weights(&self, i: usize, rule: SlopeRule, gamma: f64) -> (f64, f64) {
        let x = self.x(i);
        let p = self.slope[i] + gamma * x;
        let curv = -gamma * curvature_weight(i, self.h) / (self.h * self.h);
        match rule {
            SlopeRule::Centered => (curv - p / (2.0 * self.h), curv + p / (2.0 * self.h)),
            SlopeRule::Forward => (curv, curv + p / self.h),
        }
    }

    #[inline]
    fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Off-diagonal entry `(i, j)`, `j ≤ i + 1`, of a row with correction
    /// `gamma`.
    pub(crate) fn entry(&self, i: usize, j: usize, rule: SlopeRule, gamma: f64) -> f64 {
        debug_assert!(j != i && j <= i + 1);
        let (lower, upper) = self.slope_weights(i, rule, gamma);
        if j == i + 1 {
            return upper;
        }
        let mut w = if j == 0 {
            self.col0[i] + gamma
        } else {
            self.toeplitz[i - j]
        };
        if j + 1 == i {
            w += lower;
        }
        w
    }

    /// Whether the row has nonnegative off-diagonal weights. `T_k` is
    /// nonnegative by construction, so only columns 0 and `i ± 1` can fail.
    pub(crate) fn row_is_monotone(&self, i: usize, rule: SlopeRule, gamma: f64) -> bool {
        self.entry(i, 0, rule, gamma) >= 0.0
            && self.entry(i, i - 1, rule, gamma) >= 0.0
            && self.entry(i, i + 1, rule, gamma) >= 0.0
    }

    /// Correction coefficient of row `i` given the uncorrected value of the
    /// row on `x^α`; 0 when the corrected row would lose monotonicity that
    /// the uncorrected row had.
    pub(crate) fn correction(&self, i: usize, rule: SlopeRule, layer_flux: f64) -> f64 {
        let x = self.x(i);
        let a = self.alpha;
        let phi = |k: usize| (k as f64 * self.h).powf(a);
        let slope = match rule {
            SlopeRule::Centered => (phi(i + 1) - phi(i - 1)) / (2.0 * self.h),
            SlopeRule::Forward => (phi(i + 1) - phi(i)) / self.h,
        };
        let curv = (phi(i + 1) - 2.0 * phi(i) + phi(i - 1)) / (self.h * self.h);
        // β(x^α) < 0 by concavity
        let norm = x * slope - phi(i) - curvature_weight(i, self.h) * curv;
        let gamma = -layer_flux / norm;
        if !gamma.is_finite() {
            return 0.0;
        }
        // column 0 carries no slope weight, so keeping it nonnegative
        // preserves the maximum principle at points of zero slope
        let col0_ok = self.col0[i] + gamma >= 0.0;
        if col0_ok && (self.row_is_monotone(i, rule, gamma) || !self.row_is_monotone(i, rule, 0.0)) {
            gamma
        } else {
            0.0
        }
    }
}

/// `β_i(u) = u_0 − u_i + x_i p_i − κ_i δ²u_i`: zero on quadratics, the
/// direction in which the correction moves row `i`.
#[inline]
pub(crate) fn correction_functional(u: &[f64], i: usize, h: f64, rule: SlopeRule) -> f64 {
    let curv = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    u[0] - u[i] + i as f64 * h * rule.slope(u, i, h) - curvature_weight(i, h) * curv
}

/// `κ_i = x_i²/2`, except on row 1 where the three-point `β_1` would vanish
/// identically; there the curvature term is dropped and `β_1` is exact on
/// affine data only.
#[inline]
fn curvature_weight(i: usize, h: f64) -> f64 {
    if i == 1 {
        0.0
    } else {
        let x = i as f64 * h;
        0.5 * x * x
    }
}
