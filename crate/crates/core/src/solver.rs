//! Monotone explicit scheme for `u_t = (D^α u)_x + f`.
//!
//! The flux operator is assembled once per `(grid, α)` into
//! [`OperatorWeights`]. Row `i` holds nonnegative weights on columns
//! `0..=i+1` and a nonpositive diagonal, so forward Euler with
//! `Δt ≤ 1/max|W_ii|` writes every new value as a nonnegative combination of
//! old values. That is the discrete form of the comparison principle.

use std::fmt;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::grid::{Field, Grid1D};
use crate::operator::SlopeRule;
use crate::order::FracOrder;
use crate::problem::ProblemSpec;
use crate::stencil::Stencil;

/// Toeplitz offsets applied directly in the fast path; the rest goes
/// through the FFT. Keeping the large near-field weights out of the
/// transform keeps its rounding far below the result.
const NEAR_BAND: usize = 32;
/// Grid size from which [`ApplyMode::Auto`] switches to the FFT path.
const AUTO_FAST_FROM: usize = 2048;

/// How `W·u` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApplyMode {
    /// Row-by-row sums, `O(N²)`.
    Naive,
    /// Toeplitz convolution by FFT plus banded corrections, `O(N log N)`.
    Fast,
    /// Naive on small grids, fast on large ones.
    Auto,
}

impl ApplyMode {
    pub fn name(self) -> &'static str {
        match self {
            ApplyMode::Naive => "naive",
            ApplyMode::Fast => "fast",
            ApplyMode::Auto => "auto",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "naive" => Some(ApplyMode::Naive),
            "fast" => Some(ApplyMode::Fast),
            "auto" => Some(ApplyMode::Auto),
            _ => None,
        }
    }

    fn uses_fft(self, n_cells: usize) -> bool {
        match self {
            ApplyMode::Naive => false,
            ApplyMode::Fast => true,
            ApplyMode::Auto => n_cells >= AUTO_FAST_FROM,
        }
    }
}

/// Slope rules used across the rows of an assembled operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum SlopeMode {
    /// Centered slope in every row.
    Centered,
    /// Forward slope in every row.
    Upwind,
    /// Forward slope in `upwind_rows` rows where the centered row was not
    /// monotone, centered elsewhere.
    Mixed { upwind_rows: usize },
}

impl fmt::Display for SlopeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeMode::Centered => f.write_str("centered"),
            SlopeMode::Upwind => f.write_str("upwind"),
            SlopeMode::Mixed { upwind_rows } => write!(f, "mixed({upwind_rows} upwind rows)"),
        }
    }
}

/// FFT of the far Toeplitz tail.
struct FarField {
    len: usize,
    spectrum: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Assembled, monotonicity-certified flux operator.
pub struct OperatorWeights {
    grid: Grid1D,
    order: FracOrder,
    stencil: Stencil,
    rules: Vec<SlopeRule>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    gamma: Vec<f64>,
    diag: Vec<f64>,
    diag_max: f64,
    slope_mode: SlopeMode,
    corrected_rows: usize,
    mode: ApplyMode,
    build_time: Duration,
    far: OnceLock<FarField>,
}

impl fmt::Debug for OperatorWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorWeights")
            .field("n_cells", &self.grid.n_cells())
            .field("alpha", &self.order.alpha())
            .field("diag_max", &self.diag_max)
            .field("slope_mode", &self.slope_mode)
            .field("corrected_rows", &self.corrected_rows)
            .field("mode", &self.mode)
            .finish()
    }
}

/// Assembles the operator on `grid`.
///
/// Each row uses the centered slope when that keeps its weights
/// nonnegative and falls back to the forward slope otherwise. Rows that
/// cannot be certified either way are an error.
pub fn build_weights(grid: &Grid1D, order: &FracOrder) -> Result<OperatorWeights> {
    let start = Instant::now();
    let n = grid.n_cells();
    if grid.n_nodes() < 3 {
        return domain("operator assembly needs at least 3 nodes");
    }
    let stencil = Stencil::new(grid, order);
    if let Some(k) = stencil.toeplitz().iter().position(|&t| !(t >= 0.0)) {
        return Err(Error::NotMonotone {
            row: k,
            col: 0,
            weight: stencil.toeplitz()[k],
        });
    }

    // uncorrected rows applied to x^α, split into the slope-free part and
    // the two slope columns
    let layer: Vec<f64> = grid.nodes().iter().map(|x| x.powf(order.alpha())).collect();
    let t = stencil.toeplitz();
    let plans: Vec<(SlopeRule, f64)> = (0..=n)
        .into_par_iter()
        .map(|i| -> Result<(SlopeRule, f64)> {
            if i == 0 || i == n {
                return Ok((SlopeRule::Centered, 0.0));
            }
            let pi = layer[i];
            let mut fixed = stencil.col0(i) * (layer[0] - pi);
            for j in 1..i {
                fixed += t[i - j] * (layer[j] - pi);
            }
            let flux = |rule| {
                let (lo, up) = stencil.slope_weights(i, rule, 0.0);
                fixed + lo * (layer[i - 1] - pi) + up * (layer[i + 1] - pi)
            };
            let plan = |rule| {
                let g = stencil.correction(i, rule, flux(rule));
                (rule, g, stencil.row_is_monotone(i, rule, g))
            };
            let candidates = [plan(SlopeRule::Centered), plan(SlopeRule::Forward)];
            candidates
                .iter()
                .find(|(_, g, ok)| *ok && *g != 0.0)
                .or_else(|| candidates.iter().find(|(_, _, ok)| *ok))
                .map(|&(r, g, _)| (r, g))
                .ok_or_else(|| {
                    let (r, g, _) = candidates[1];
                    let col = if stencil.entry(i, 0, r, g) < 0.0 { 0 } else { i + 1 };
                    Error::NotMonotone {
                        row: i,
                        col,
                        weight: stencil.entry(i, col, r, g),
                    }
                })
        })
        .collect::<Result<_>>()?;

    let rules: Vec<SlopeRule> = plans.iter().map(|p| p.0).collect();
    let gamma: Vec<f64> = plans.iter().map(|p| p.1).collect();
    let mut lower = vec![0.0; n + 1];
    let mut upper = vec![0.0; n + 1];
    for i in 1..n {
        (lower[i], upper[i]) = stencil.slope_weights(i, rules[i], gamma[i]);
    }
    let upwind_rows = rules[1..n].iter().filter(|&&r| r == SlopeRule::Forward).count();
    let corrected_rows = gamma.iter().filter(|&&g| g != 0.0).count();

    let mut w = OperatorWeights {
        grid: grid.clone(),
        order: *order,
        stencil,
        rules,
        lower,
        upper,
        gamma,
        diag: vec![0.0; n + 1],
        diag_max: 0.0,
        slope_mode: match upwind_rows {
            0 => SlopeMode::Centered,
            r if r == n - 1 => SlopeMode::Upwind,
            r => SlopeMode::Mixed { upwind_rows: r },
        },
        corrected_rows,
        mode: ApplyMode::Auto,
        build_time: Duration::ZERO,
        far: OnceLock::new(),
    };

    let diag: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|i| {
            if i == 0 || i == n {
                return 0.0;
            }
            let mut sum = 0.0;
            for j in 0..=i + 1 {
                if j != i {
                    sum += w.offdiag(i, j);
                }
            }
            -sum
        })
        .collect();
    w.diag = diag;

    w.certify()?;
    w.diag_max = w.diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    w.build_time = start.elapsed();
    Ok(w)
}

impl OperatorWeights {
    /// Selects the evaluation path of [`OperatorWeights::apply`].
    pub fn with_mode(mut self, mode: ApplyMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn order(&self) -> &FracOrder {
        &self.order
    }

    pub fn mode(&self) -> ApplyMode {
        self.mode
    }

    /// `max_i |W_ii|`.
    pub fn diag_max(&self) -> f64 {
        self.diag_max
    }

    pub fn slope_mode(&self) -> SlopeMode {
        self.slope_mode
    }

    /// Slope rule of row `i`.
    pub fn slope_rule(&self, i: usize) -> SlopeRule {
        self.rules[i]
    }

    /// Number of rows carrying the `x^α` boundary-layer correction.
    ///
    /// The correction is fitted so the row maps `x^α` to 0.
    pub fn corrected_rows(&self) -> usize {
        self.corrected_rows
    }

    pub fn build_time(&self) -> Duration {
        self.build_time
    }

    /// Stationary kernel weights `T_k`, `k ≥ 1` (index 0 is unused).
    pub fn toeplitz_tail(&self) -> &[f64] {
        self.stencil.toeplitz()
    }

    /// `W_ij`; zero outside the interior rows and above `j = i + 1`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let n = self.grid.n_cells();
        if i == 0 || i >= n || j > i + 1 {
            0.0
        } else if j == i {
            self.diag[i]
        } else {
            self.offdiag(i, j)
        }
    }

    #[inline]
    fn offdiag(&self, i: usize, j: usize) -> f64 {
        if j == i + 1 {
            return self.upper[i];
        }
        let base = if j == 0 {
            self.stencil.col0(i) + self.gamma[i]
        } else {
            self.stencil.toeplitz()[i - j]
        };
        if j + 1 == i {
            base + self.lower[i]
        } else {
            base
        }
    }

    fn certify(&self) -> Result<()> {
        let n = self.grid.n_cells();
        for i in 1..n {
            // every other column is a Toeplitz weight, checked at assembly
            for j in [0, i - 1, i + 1] {
                let w = self.offdiag(i, j);
                if !(w >= 0.0) {
                    return Err(Error::NotMonotone { row: i, col: j, weight: w });
                }
            }
            if !(self.diag[i] <= 0.0) {
                return Err(Error::NotMonotone {
                    row: i,
                    col: i,
                    weight: self.diag[i],
                });
            }
        }
        Ok(())
    }

    /// `W·u` with the configured mode.
    pub fn apply(&self, u: &Field) -> Result<Field> {
        if self.mode.uses_fft(self.grid.n_cells()) {
            self.apply_fast(u)
        } else {
            self.apply_naive(u)
        }
    }

    /// `W·u` row by row in the difference form `Σ_j W_ij (u_j − u_i)`,
    /// ascending `j`. Constants map to exactly 0.
    pub fn apply_naive(&self, u: &Field) -> Result<Field> {
        self.check_grid(u)?;
        Field::new(self.grid.clone(), self.apply_naive_slice(u.values()))
    }

    fn apply_naive_slice(&self, v: &[f64]) -> Vec<f64> {
        let n = self.grid.n_cells();
        let mut out = vec![0.0; n + 1];
        out[1..n].par_iter_mut().enumerate().for_each(|(off, slot)| {
            let i = off + 1;
            let ui = v[i];
            let mut acc = 0.0;
            for (j, &uj) in v.iter().enumerate().take(i + 2) {
                if j != i {
                    acc += self.offdiag(i, j) * (uj - ui);
                }
            }
            *slot = acc;
        });
        out
    }

    /// `W·u` through an FFT convolution of the far Toeplitz tail plus the
    /// banded near field and the slope columns.
    pub fn apply_fast(&self, u: &Field) -> Result<Field> {
        self.check_grid(u)?;
        let n = self.grid.n_cells();
        let vals = u.values();
        let u0 = vals[0];
        // row sums vanish, so shifting by u_0 removes column 0
        let v: Vec<f64> = vals.iter().map(|x| x - u0).collect();
        let far = self.far_field();
        let mut buf: Vec<Complex<f64>> = (0..far.len)
            .map(|j| Complex::new(if j < n { v[j] } else { 0.0 }, 0.0))
            .collect();
        far.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&far.spectrum) {
            *b *= s;
        }
        far.inverse.process(&mut buf);
        let scale = 1.0 / far.len as f64;
        let t = self.stencil.toeplitz();
        let mut out = vec![0.0; n + 1];
        out[1..n].par_iter_mut().enumerate().for_each(|(off, slot)| {
            let i = off + 1;
            let mut acc = buf[i].re * scale;
            for k in 1..=NEAR_BAND.min(i - 1) {
                acc += t[k] * v[i - k];
            }
            if i >= 2 {
                acc += self.lower[i] * v[i - 1];
            }
            acc += self.upper[i] * v[i + 1] + self.diag[i] * v[i];
            *slot = acc;
        });
        Field::new(self.grid.clone(), out)
    }

    fn far_field(&self) -> &FarField {
        self.far.get_or_init(|| {
            let n = self.grid.n_cells();
            let len = (2 * n).next_power_of_two();
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(len);
            let inverse = planner.plan_fft_inverse(len);
            let t = self.stencil.toeplitz();
            let mut spectrum: Vec<Complex<f64>> = (0..len)
                .map(|k| {
                    let w = if k > NEAR_BAND && k < n { t[k] } else { 0.0 };
                    Complex::new(w, 0.0)
                })
                .collect();
            forward.process(&mut spectrum);
            FarField {
                len,
                spectrum,
                forward,
                inverse,
            }
        })
    }

    fn check_grid(&self, u: &Field) -> Result<()> {
        if u.len() != self.grid.n_nodes() {
            return Err(Error::LengthMismatch {
                expected: self.grid.n_nodes(),
                got: u.len(),
            });
        }
        Ok(())
    }
}

/// Largest monotone time step times `safety`.
pub fn stable_dt(w: &OperatorWeights, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return domain(format!("dt safety factor must lie in (0, 1], got {safety}"));
    }
    if !(w.diag_max > 0.0) {
        return Err(Error::Degenerate("operator has a zero diagonal".into()));
    }
    Ok(safety / w.diag_max)
}

/// One forward Euler step from `t` to `t + dt`; `f` is sampled at `t` and
/// the boundary nodes take `g(·, t + dt)`.
///
/// On the naive path the update is evaluated as
/// `(1 + dt W_ii) u_i + Σ_{j≠i} dt W_ij u_j + dt f_i` with every coefficient
/// nonnegative, so ordered inputs stay ordered even after rounding.
pub fn step(u: &Field, t: f64, dt: f64, w: &OperatorWeights, spec: &ProblemSpec) -> Result<Field> {
    w.check_grid(u)?;
    let bound = 1.0 / w.diag_max;
    if !(dt > 0.0) {
        return domain(format!("time step must be positive, got {dt}"));
    }
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::Unstable { dt, bound });
    }
    let grid = &w.grid;
    let n = grid.n_cells();
    let v = u.values();
    let mut out = vec![0.0; n + 1];
    if w.mode.uses_fft(n) {
        let wu = w.apply_fast(u)?;
        for i in 1..n {
            out[i] = v[i] + dt * (wu[i] + spec.f(grid.node(i), t));
        }
    } else {
        out[1..n].par_iter_mut().enumerate().for_each(|(off, slot)| {
            let i = off + 1;
            let mut acc = 0.0;
            for (j, &uj) in v.iter().enumerate().take(i + 2) {
                let c = if j == i {
                    (1.0 + dt * w.diag[i]).max(0.0)
                } else {
                    dt * w.offdiag(i, j)
                };
                acc += c * uj;
            }
            *slot = acc + dt * spec.f(grid.node(i), t);
        });
    }
    out[0] = spec.g(0.0, t + dt);
    out[n] = spec.g(grid.length(), t + dt);
    Field::new(grid.clone(), out)
}

/// Run metadata stored with a [`SolutionRecord`].
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub problem: String,
    pub alpha: f64,
    pub length: f64,
    pub horizon: f64,
    pub n_cells: usize,
    pub n_steps: usize,
    pub dt: f64,
    pub dt_safety: f64,
    pub scheme: String,
    pub slope_mode: String,
    pub corrected_rows: usize,
    pub apply_mode: ApplyMode,
    pub weight_build_seconds: f64,
}

/// Time levels `0 = t_0 < … < t_M = T` and the field at each.
#[derive(Debug, Clone)]
pub struct SolutionRecord {
    grid: Grid1D,
    times: Vec<f64>,
    frames: Vec<Field>,
    meta: RunMeta,
}

impl SolutionRecord {
    /// Assembles a record from matching time levels and frames.
    pub fn new(grid: Grid1D, times: Vec<f64>, frames: Vec<Field>, meta: RunMeta) -> Result<Self> {
        if times.len() != frames.len() || times.is_empty() {
            return Err(Error::LengthMismatch {
                expected: times.len(),
                got: frames.len(),
            });
        }
        if let Some(f) = frames.iter().find(|f| f.len() != grid.n_nodes()) {
            return Err(Error::LengthMismatch {
                expected: grid.n_nodes(),
                got: f.len(),
            });
        }
        Ok(Self {
            grid,
            times,
            frames,
            meta,
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn frames(&self) -> &[Field] {
        &self.frames
    }

    pub fn meta(&self) -> &RunMeta {
        &self.meta
    }

    pub fn last(&self) -> &Field {
        self.frames.last().expect("a record holds at least the initial frame")
    }

    /// `max |u|` over all frames.
    pub fn sup_norm(&self) -> f64 {
        self.frames.iter().fold(0.0f64, |m, f| m.max(f.max_abs()))
    }
}

/// Uniform time levels with the last step shortened to land on `horizon`.
pub fn time_levels(horizon: f64, dt: f64) -> Vec<f64> {
    let steps = (horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let mut times: Vec<f64> = (0..steps).map(|m| m as f64 * dt).collect();
    times.push(horizon);
    times
}

/// Solves to the horizon with freshly assembled weights in auto mode.
pub fn solve(spec: &ProblemSpec, grid: &Grid1D, dt_safety: f64) -> Result<SolutionRecord> {
    let w = build_weights(grid, spec.order())?;
    solve_with(spec, &w, dt_safety)
}

/// Solves to the horizon with pre-assembled weights.
///
/// `dt_safety > 1` is passed through so that [`step`] rejects it with the
/// bound attached.
pub fn solve_with(spec: &ProblemSpec, w: &OperatorWeights, dt_safety: f64) -> Result<SolutionRecord> {
    if !(dt_safety > 0.0 && dt_safety.is_finite()) {
        return domain(format!("dt safety factor must be positive, got {dt_safety}"));
    }
    let dt = dt_safety * stable_dt(w, 1.0)?;
    let mut rec = solve_with_dt(spec, w, dt)?;
    rec.meta.dt_safety = dt_safety;
    Ok(rec)
}

/// Solves to the horizon with a prescribed step; the last step is shortened
/// to land on `T`.
pub fn solve_with_dt(spec: &ProblemSpec, w: &OperatorWeights, dt: f64) -> Result<SolutionRecord> {
    if (spec.alpha() - w.order.alpha()).abs() > 0.0 {
        return domain("weights were assembled for a different order");
    }
    if (spec.length() - w.grid.length()).abs() > 1e-12 * spec.length() {
        return domain("weights were assembled for a different domain length");
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return domain(format!("time step must be positive, got {dt}"));
    }
    let times = time_levels(spec.horizon(), dt);
    let grid = w.grid.clone();
    let mut frames = Vec::with_capacity(times.len());
    frames.push(grid.sample(|x| spec.g(x, 0.0))?);
    for m in 0..times.len() - 1 {
        let (t0, t1) = (times[m], times[m + 1]);
        let next = step(&frames[m], t0, t1 - t0, w, spec)?;
        frames.push(next);
    }
    let meta = RunMeta {
        problem: spec.name().to_string(),
        alpha: spec.alpha(),
        length: spec.length(),
        horizon: spec.horizon(),
        n_cells: grid.n_cells(),
        n_steps: times.len() - 1,
        dt,
        dt_safety: dt * w.diag_max,
        scheme: "explicit-euler/monotone-flux".into(),
        slope_mode: w.slope_mode.to_string(),
        corrected_rows: w.corrected_rows,
        apply_mode: w.mode,
        weight_build_seconds: w.build_time.as_secs_f64(),
    };
    Ok(SolutionRecord {
        grid,
        times,
        frames,
        meta,
    })
}
