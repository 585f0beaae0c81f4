//! The space-fractional flux operator `(D^α_x u)_x` and its building blocks.
//!
//! The flux divergence is evaluated in its decomposed form
//!
//! ```text
//! (D^α u)_x(x) = J[u, p](x) + K_(0,x)[u, p](x),     p = u'(x)
//! J[u, p](x)   = [α(u(0) − u(x)) + (α + 1) p x] / (x^{α+1} Γ(1 − α))
//! K_(a,b)[u, p](x) = c_α ∫_a^b [u(x − z) − u(x) + p z] z^{-α-2} dz
//! ```
//!
//! On a grid the integrand of `K` is handled through
//! `q(z) = [u(x − z) − u(x) + p z] / z²`, which is smooth when `u` is. `q` is
//! sampled at the nodes `z = k h`, reconstructed piecewise linearly (constant
//! `q(h)` on the first cell) and integrated exactly against `z^{-α}`. The
//! reconstruction is exact for quadratics, so the singular first cell needs
//! no cutoff.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::grid::{Field, Grid1D};
use crate::stencil::{correction_functional, Stencil};
use crate::moments::{linear_against_power, CellMoments};
use crate::order::FracOrder;
use crate::special::{gamma_unchecked, rgamma};

/// Discrete slope used for `p` at an interior node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlopeRule {
    /// `(u_{i+1} − u_{i-1}) / 2h`
    Centered,
    /// `(u_{i+1} − u_i) / h`, upwind for the transport part of the operator.
    Forward,
}

impl SlopeRule {
    #[inline]
    pub fn slope(self, u: &[f64], i: usize, h: f64) -> f64 {
        match self {
            SlopeRule::Centered => (u[i + 1] - u[i - 1]) / (2.0 * h),
            SlopeRule::Forward => (u[i + 1] - u[i]) / h,
        }
    }
}

/// Integration window `0 ≤ a < b ≤ x` of `K_(a,b)` evaluated at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSlice {
    a: f64,
    b: f64,
    x: f64,
}

impl KernelSlice {
    pub fn new(a: f64, b: f64, x: f64) -> Result<Self> {
        if !(a >= 0.0 && a < b && b <= x) || !x.is_finite() {
            return domain(format!("kernel window must satisfy 0 <= a < b <= x, got a={a}, b={b}, x={x}"));
        }
        Ok(Self { a, b, x })
    }

    /// The full window `(0, x)`.
    pub fn full(x: f64) -> Result<Self> {
        Self::new(0.0, x, x)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// Exact Caputo derivative of a power: `D^α x^β = Γ(β+1)/Γ(β−α+1) x^{β−α}`.
///
/// `β = 0` gives 0 (constants are annihilated). At `x = 0` with `β < α` the
/// value is unbounded and `+∞` is returned.
pub fn power_rule(beta: f64, order: &FracOrder, x: f64) -> Result<f64> {
    if !(beta > -1.0) {
        return domain(format!("power rule requires beta > -1, got {beta}"));
    }
    if !(x >= 0.0) {
        return domain(format!("power rule requires x >= 0, got {x}"));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    let alpha = order.alpha();
    let coeff = gamma_unchecked(beta + 1.0) * rgamma(beta - alpha + 1.0);
    if x == 0.0 {
        return Ok(if beta < alpha {
            if coeff == 0.0 { 0.0 } else { f64::INFINITY }
        } else if beta == alpha {
            coeff
        } else {
            0.0
        });
    }
    Ok(coeff * x.powf(beta - alpha))
}

/// Exact flux divergence of a power, `d/dx D^α x^β`, for `x > 0`.
pub fn power_rule_flux(beta: f64, order: &FracOrder, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("flux of a power needs x > 0, got {x}"));
    }
    let d = power_rule(beta, order, x)?;
    Ok(d * (beta - order.alpha()) / x)
}

/// L1 discretisation of the Caputo derivative. Node 0 carries 0.
pub fn caputo_l1(u: &Field, order: &FracOrder) -> Field {
    let grid = u.grid().clone();
    let h = grid.spacing();
    let a = order.alpha();
    let n = grid.n_cells();
    let b: Vec<f64> = (0..n)
        .map(|k| ((k + 1) as f64).powf(1.0 - a) - (k as f64).powf(1.0 - a))
        .collect();
    let v = u.values();
    let scale = h.powf(-a) / order.gamma_2ma();
    let mut out = vec![0.0; n + 1];
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for k in 0..m {
            acc += b[k] * (v[m - k] - v[m - k - 1]);
        }
        *slot = scale * acc;
    }
    Field::new(grid, out).expect("finite input gives finite output")
}

/// `J[u, p](x)` in closed form.
pub fn j_operator(u0: f64, ux: f64, p: f64, x: f64, order: &FracOrder) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("J operator needs x > 0, got {x}"));
    }
    let a = order.alpha();
    Ok((a * (u0 - ux) + (a + 1.0) * p * x) / (x.powf(a + 1.0) * order.gamma_1ma()))
}

/// `K_(a,b)[u, p](x)` for a grid function; `x` must be a grid node.
pub fn k_operator(u: &Field, p: f64, window: &KernelSlice, order: &FracOrder) -> Result<f64> {
    let grid = u.grid();
    let i = grid
        .node_index(window.x())
        .ok_or_else(|| Error::Domain(format!("K operator evaluates at grid nodes only, got x={}", window.x())))?;
    let moments = CellMoments::new(order.alpha(), i);
    Ok(k_integral(u.values(), i, grid.spacing(), p, window.a(), window.b(), order, &moments))
}

/// Sample of `q` at `z = k h` for the expansion point `x_i`.
#[inline]
fn q_at(u: &[f64], i: usize, h: f64, p: f64, k: usize) -> f64 {
    let z = k as f64 * h;
    (u[i - k] - u[i] + p * z) / (z * z)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn k_integral(
    u: &[f64],
    i: usize,
    h: f64,
    p: f64,
    a: f64,
    b: f64,
    order: &FracOrder,
    moments: &CellMoments,
) -> f64 {
    let alpha = order.alpha();
    let (za, zb) = (a / h, (b / h).min(i as f64));
    let first = za.floor() as usize;
    let last = (zb.ceil() as usize).min(i);
    let mut acc = 0.0;
    for k in first..last {
        let (lo, hi) = (za.max(k as f64), zb.min((k + 1) as f64));
        if hi <= lo {
            continue;
        }
        let full = lo == k as f64 && hi == (k + 1) as f64;
        if k == 0 {
            let q1 = q_at(u, i, h, p, 1);
            acc += q1 * linear_against_power(lo, hi, alpha, 1.0, 0.0);
            continue;
        }
        let (ql, qr) = (q_at(u, i, h, p, k), q_at(u, i, h, p, k + 1));
        if full {
            acc += ql * moments.left(k) + qr * moments.right(k);
        } else {
            let kf = k as f64;
            let c0 = ql * (kf + 1.0) - qr * kf;
            let c1 = qr - ql;
            acc += linear_against_power(lo, hi, alpha, c0, c1);
        }
    }
    order.c_alpha() * h.powf(1.0 - alpha) * acc
}

/// `(D^α u)_x` at interior nodes using the centered slope; boundary nodes
/// carry 0.
pub fn flux_divergence(u: &Field, order: &FracOrder) -> Result<Field> {
    flux_divergence_with(u, order, |_| SlopeRule::Centered)
}

/// Flux divergence with a per-row slope rule.
///
/// Linear reconstruction resolves the `x^α` layer at the left boundary only
/// to `O(h^{1+α})`, and not at all in the first few rows. Each row therefore
/// adds `γ_i β_i(u)`, with `γ_i` fitted so the row maps `x^α`
/// to 0. The term vanishes on quadratics and is skipped where it would
/// cost the row its sign structure.
pub fn flux_divergence_with(
    u: &Field,
    order: &FracOrder,
    rule: impl Fn(usize) -> SlopeRule + Sync,
) -> Result<Field> {
    let grid = u.grid();
    let n = grid.n_cells();
    if grid.n_nodes() < 3 {
        return domain("flux divergence needs at least 3 nodes");
    }
    let stencil = Stencil::new(grid, order);
    let layer: Vec<f64> = grid.nodes().iter().map(|x| x.powf(order.alpha())).collect();
    let raw = raw_flux(u.values(), grid, order, &stencil, &rule)?;
    let layer_flux = raw_flux(&layer, grid, order, &stencil, &rule)?;
    let h = grid.spacing();
    let v = u.values();
    let mut out = raw;
    for i in 1..n {
        let r = rule(i);
        let gamma = stencil.correction(i, r, layer_flux[i]);
        if gamma != 0.0 {
            out[i] += gamma * correction_functional(v, i, h, r);
        }
    }
    Field::new(grid.clone(), out)
}

/// `J + K` per interior row without the boundary-layer correction.
fn raw_flux(
    v: &[f64],
    grid: &Grid1D,
    order: &FracOrder,
    stencil: &Stencil,
    rule: &(impl Fn(usize) -> SlopeRule + Sync),
) -> Result<Vec<f64>> {
    let n = grid.n_cells();
    let h = grid.spacing();
    let mut out = vec![0.0; n + 1];
    out[1..n]
        .par_iter_mut()
        .enumerate()
        .try_for_each(|(off, slot)| -> Result<()> {
            let i = off + 1;
            let x = grid.node(i);
            let p = rule(i).slope(v, i, h);
            let j = j_operator(v[0], v[i], p, x, order)?;
            let k = k_integral(v, i, h, p, 0.0, x, order, stencil.moments());
            *slot = j + k;
            Ok(())
        })?;
    Ok(out)
}

/// Riemann–Liouville integral `J^s g(x) = Γ(s)^{-1} ∫₀ˣ g(y)(x − y)^{s−1} dy`
/// with `g` reconstructed piecewise linearly. `s = 1` is the trapezoidal
/// running integral.
pub fn rl_integral(g: &Field, s: f64) -> Result<Field> {
    if !(s > 0.0 && s <= 1.0) {
        return domain(format!("Riemann-Liouville order must lie in (0, 1], got {s}"));
    }
    let grid = g.grid().clone();
    let n = grid.n_cells();
    let h = grid.spacing();
    let moments = CellMoments::new(1.0 - s, n);
    let v = g.values();
    let scale = h.powf(s) / gamma_unchecked(s);
    let mut out = vec![0.0; n + 1];
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        // node j = 0 sits at distance m, node m at distance 0
        let mut acc = moments.right(m - 1) * v[0];
        for (j, vj) in v.iter().enumerate().take(m).skip(1) {
            let d = m - j;
            acc += (moments.right(d - 1) + moments.left(d)) * vj;
        }
        acc += moments.left(0) * v[m];
        *slot = scale * acc;
    }
    Field::new(grid, out)
}
