//! Probes that check the qualitative theory on discrete solutions: maximum
//! principle, contraction, the `α → 0` and `α → 1` limits, Riemann–Liouville
//! limits, regularity bounds and the barrier sandwich.
//!
//! Every probe returns a [`ProbeReport`] of named quantities, each compared
//! with a bound, and can write it as a CSV `quantity,value,bound,passed`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::barriers::regularity_constants;
use crate::error::{domain, Error, Result};
use crate::grid::{Field, Grid1D};
use crate::operator::{flux_divergence, flux_divergence_with, rl_integral};
use crate::order::FracOrder;
use crate::problem::ProblemSpec;
use crate::solver::{build_weights, solve_with_dt, stable_dt, time_levels, SolutionRecord};

/// Decimal float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v == 0.0 {
        // no signed zero in output
        format!("{:.16e}", 0.0)
    } else {
        format!("{v:.16e}")
    }
}

/// One checked (or informational) number of a probe.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    /// `value ≤ bound` is required unless the quantity is informational.
    pub bound: f64,
    pub informational: bool,
}

impl Quantity {
    pub fn passed(&self) -> bool {
        self.informational || self.value <= self.bound
    }
}

/// Outcome of a probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub name: String,
    pub quantities: Vec<Quantity>,
    /// Default tolerance the bounds were built with.
    pub tolerance: f64,
    /// Set when the probe's precondition did not hold; such a probe asserts
    /// nothing.
    pub skipped: Option<String>,
    pub artifacts: Vec<PathBuf>,
}

impl ProbeReport {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            quantities: Vec::new(),
            tolerance,
            skipped: None,
            artifacts: Vec::new(),
        }
    }

    /// Adds a checked quantity `value ≤ bound`.
    pub fn check(&mut self, name: impl Into<String>, value: f64, bound: f64) -> &mut Self {
        self.quantities.push(Quantity {
            name: name.into(),
            value,
            bound,
            informational: false,
        });
        self
    }

    /// Adds a quantity that is reported but not judged.
    pub fn info(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.quantities.push(Quantity {
            name: name.into(),
            value,
            bound: f64::NAN,
            informational: true,
        });
        self
    }

    /// Adds a pass/fail flag as a quantity `0 ≤ 0` or `1 ≤ 0`.
    pub fn flag(&mut self, name: impl Into<String>, ok: bool) -> &mut Self {
        self.check(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.quantities.iter().all(Quantity::passed)
    }

    pub fn quantity(&self, name: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|q| q.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.quantity(name).map(|q| q.value)
    }

    /// CSV text with header `quantity,value,bound,passed`; informational
    /// rows carry `info` in the last column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value,bound,passed\n");
        for q in &self.quantities {
            let passed = if q.informational {
                "info"
            } else if q.passed() {
                "true"
            } else {
                "false"
            };
            out.push_str(&format!(
                "{},{},{},{}\n",
                q.name,
                format_float(q.value),
                format_float(q.bound),
                passed
            ));
        }
        out
    }

    /// Writes `<dir>/<name>.csv` and records the path.
    pub fn write_csv(&mut self, dir: &Path) -> std::io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.name));
        let mut f = fs::File::create(&path)?;
        f.write_all(self.to_csv().as_bytes())?;
        self.artifacts.push(path.clone());
        Ok(path)
    }
}

/// Flux at an interior maximum.
///
/// The checked value uses the slope rules of the assembled monotone
/// operator; the all-centered flux is reported alongside. If the maximum is
/// not attained at an interior node the probe is skipped.
pub fn max_principle_probe(u: &Field, order: &FracOrder) -> Result<ProbeReport> {
    const TOL: f64 = 1e-8;
    let mut report = ProbeReport::new("max_principle", TOL);
    let Some(j) = interior_argmax(u) else {
        report.skipped = Some("maximum is attained on the boundary only".into());
        return Ok(report);
    };
    let w = build_weights(u.grid(), order)?;
    let scheme = flux_divergence_with(u, order, |i| w.slope_rule(i))?;
    let centered = flux_divergence(u, order)?;
    report
        .info("argmax_x", u.grid().node(j))
        .check("flux_at_argmax", scheme[j], TOL)
        .info("centered_flux_at_argmax", centered[j]);
    Ok(report)
}

/// First node where `u` attains its maximum, if that node is interior.
pub fn interior_argmax(u: &Field) -> Option<usize> {
    let v = u.values();
    let n = u.grid().n_cells();
    let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let j = v.iter().position(|&x| x == top)?;
    (j > 0 && j < n).then_some(j)
}

/// `−a (x − c)² + ε Σ_m r_m sin(mπx/l)` with random `a ∈ [0.5, 5]`,
/// `c ∈ [0.2l, 0.8l]`, `ε ∈ [0, 0.1 a l²]` and `r_m ∈ [−1, 1]`, `m ≤ 4`.
pub fn concave_field<R: Rng + ?Sized>(grid: &Grid1D, rng: &mut R) -> Result<Field> {
    let l = grid.length();
    let a = rng.random_range(0.5..=5.0);
    let c = rng.random_range(0.2 * l..=0.8 * l);
    let eps = rng.random_range(0.0..=0.1 * a * l * l);
    let r: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
    grid.sample(|x| {
        let wiggle: f64 = r
            .iter()
            .enumerate()
            .map(|(m, rm)| rm * ((m + 1) as f64 * std::f64::consts::PI * x / l).sin())
            .sum();
        -a * (x - c) * (x - c) + eps * wiggle
    })
}

/// Maximum-principle check over `samples` random fields from
/// [`concave_field`], seeded with `seed`. Fields whose maximum sits on the
/// boundary are drawn again.
pub fn max_principle_sweep(grid: &Grid1D, order: &FracOrder, samples: usize, seed: u64) -> Result<ProbeReport> {
    const TOL: f64 = 1e-8;
    let w = build_weights(grid, order)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut worst_centered, mut redrawn) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0usize);
    let mut taken = 0;
    while taken < samples {
        let u = concave_field(grid, &mut rng)?;
        let Some(j) = interior_argmax(&u) else {
            redrawn += 1;
            continue;
        };
        let scheme = flux_divergence_with(&u, order, |i| w.slope_rule(i))?;
        worst = worst.max(scheme[j]);
        worst_centered = worst_centered.max(flux_divergence(&u, order)?[j]);
        taken += 1;
    }
    let mut report = ProbeReport::new("max_principle", TOL);
    report
        .info("samples", samples as f64)
        .info("redrawn", redrawn as f64)
        .check("max_flux_at_argmax", worst, TOL)
        .info("max_centered_flux_at_argmax", worst_centered);
    Ok(report)
}

/// `sup (u₁ − u₂)⁺` against the boundary gap plus the integrated forcing gap.
pub fn contraction_probe(
    spec1: &ProblemSpec,
    spec2: &ProblemSpec,
    grid: &Grid1D,
    dt_safety: f64,
) -> Result<ProbeReport> {
    const TOL: f64 = 1e-10;
    if spec1.alpha() != spec2.alpha()
        || spec1.horizon() != spec2.horizon()
        || spec1.length() != spec2.length()
    {
        return domain("contraction needs two problems with the same order, domain and horizon");
    }
    let w = build_weights(grid, spec1.order())?;
    let dt = dt_safety * stable_dt(&w, 1.0)?;
    let r1 = solve_with_dt(spec1, &w, dt)?;
    let r2 = solve_with_dt(spec2, &w, dt)?;
    let c = contraction_terms(&r1, &r2, spec1, spec2);
    let mut report = ProbeReport::new("contraction", TOL);
    report
        .info("boundary_gap", c.boundary)
        .info("forcing_gap", c.forcing)
        .check("sup_positive_difference", c.lhs, c.boundary + c.forcing + TOL)
        .info("sup_positive_difference_swapped", c.lhs_swapped)
        .check(
            "swapped_slack",
            c.lhs_swapped - (c.boundary_swapped + c.forcing_swapped),
            TOL,
        );
    Ok(report)
}

/// Both sides of the contraction estimate for two records on the same
/// grid and time levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionTerms {
    pub lhs: f64,
    pub boundary: f64,
    pub forcing: f64,
    pub lhs_swapped: f64,
    pub boundary_swapped: f64,
    pub forcing_swapped: f64,
}

pub fn contraction_terms(
    r1: &SolutionRecord,
    r2: &SolutionRecord,
    spec1: &ProblemSpec,
    spec2: &ProblemSpec,
) -> ContractionTerms {
    let grid = r1.grid();
    let n = grid.n_cells();
    let times = r1.times();
    let (mut lhs, mut lhs_s) = (0.0f64, 0.0f64);
    let (mut bnd, mut bnd_s) = (0.0f64, 0.0f64);
    for (m, (a, b)) in r1.frames().iter().zip(r2.frames()).enumerate() {
        for j in 0..=n {
            let d = a[j] - b[j];
            lhs = lhs.max(d);
            lhs_s = lhs_s.max(-d);
            if m == 0 || j == 0 || j == n {
                bnd = bnd.max(d);
                bnd_s = bnd_s.max(-d);
            }
        }
    }
    let (mut frc, mut frc_s) = (0.0, 0.0);
    for m in 0..times.len() - 1 {
        let (t, dt) = (times[m], times[m + 1] - times[m]);
        let (mut up, mut down) = (0.0f64, 0.0f64);
        for i in 1..n {
            let x = grid.node(i);
            let d = spec1.f(x, t) - spec2.f(x, t);
            up = up.max(d);
            down = down.max(-d);
        }
        frc += dt * up;
        frc_s += dt * down;
    }
    ContractionTerms {
        lhs,
        boundary: bnd,
        forcing: frc,
        lhs_swapped: lhs_s,
        boundary_swapped: bnd_s,
        forcing_swapped: frc_s,
    }
}

/// Limit equation approached as `α → 0` or `α → 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitReference {
    /// `u_t = u_x + f`, forward upwind differences, inflow at `x = l`.
    Advection,
    /// `u_t = u_xx + f`, three-point explicit scheme.
    Heat,
}

impl LimitReference {
    pub fn name(self) -> &'static str {
        match self {
            LimitReference::Advection => "advection",
            LimitReference::Heat => "heat",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "advection" => Some(LimitReference::Advection),
            "heat" => Some(LimitReference::Heat),
            _ => None,
        }
    }

    /// Largest monotone step of the reference scheme.
    fn dt_bound(self, h: f64) -> f64 {
        match self {
            LimitReference::Advection => h,
            LimitReference::Heat => 0.5 * h * h,
        }
    }
}

/// Space-time window `[x0, x1] × [t0, T]` as fractions of `l` and `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x: (f64, f64),
    pub t0: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self { x: (0.2, 0.8), t0: 0.2 }
    }
}

/// Reference solution of the limit equation on the given time levels.
pub fn reference_solution(
    spec: &ProblemSpec,
    grid: &Grid1D,
    times: &[f64],
    reference: LimitReference,
) -> Result<Vec<Field>> {
    let n = grid.n_cells();
    let h = grid.spacing();
    let bound = reference.dt_bound(h);
    let mut frames = Vec::with_capacity(times.len());
    frames.push(grid.sample(|x| spec.g(x, 0.0))?);
    for m in 0..times.len() - 1 {
        let (t, dt) = (times[m], times[m + 1] - times[m]);
        if dt > bound * (1.0 + 1e-12) {
            return Err(Error::Unstable { dt, bound });
        }
        let u = frames[m].values();
        let mut next = vec![0.0; n + 1];
        for i in 1..n {
            let op = match reference {
                LimitReference::Advection => (u[i + 1] - u[i]) / h,
                LimitReference::Heat => (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h),
            };
            next[i] = u[i] + dt * (op + spec.f(grid.node(i), t));
        }
        next[0] = spec.g(0.0, t + dt);
        next[n] = spec.g(grid.length(), t + dt);
        frames.push(Field::new(grid.clone(), next)?);
    }
    Ok(frames)
}

/// Interior-window distance between fractional solutions and the limit
/// equation along a sequence of orders; passes when the distances strictly
/// decrease (or all vanish).
pub fn alpha_limit_probe(
    template: &ProblemSpec,
    alphas: &[f64],
    reference: LimitReference,
    grid: &Grid1D,
    window: Window,
    dt_safety: f64,
) -> Result<ProbeReport> {
    const ZERO: f64 = 1e-14;
    if alphas.len() < 2 {
        return domain("the limit probe needs at least two orders");
    }
    if !(dt_safety > 0.0 && dt_safety.is_finite()) {
        return domain(format!("dt safety factor must be positive, got {dt_safety}"));
    }
    let orders: Vec<FracOrder> = alphas.iter().map(|&a| FracOrder::new(a)).collect::<Result<_>>()?;
    let weights = orders
        .par_iter()
        .map(|o| build_weights(grid, o))
        .collect::<Result<Vec<_>>>()?;
    let mut dt = reference.dt_bound(grid.spacing());
    for w in &weights {
        dt = dt.min(stable_dt(w, 1.0)?);
    }
    dt *= dt_safety;
    let times = time_levels(template.horizon(), dt);
    let reference_frames = reference_solution(template, grid, &times, reference)?;
    let errors = weights
        .par_iter()
        .zip(&orders)
        .map(|(w, o)| {
            let spec = template.with_order(*o);
            let rec = solve_with_dt(&spec, w, dt)?;
            Ok(window_distance(&rec, &reference_frames, template, window))
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut report = ProbeReport::new(format!("alpha_limit_{}", reference.name()), 0.0);
    report.info("dt", dt);
    for (a, e) in alphas.iter().zip(&errors) {
        report.info(format!("error_alpha_{a}"), *e);
    }
    let trivial = errors.iter().all(|&e| e <= ZERO);
    let decreasing = errors.windows(2).all(|p| p[1] < p[0]);
    report.flag("strictly_decreasing", trivial || decreasing);
    Ok(report)
}

fn window_distance(rec: &SolutionRecord, reference: &[Field], spec: &ProblemSpec, window: Window) -> f64 {
    let grid = rec.grid();
    let (x0, x1) = (window.x.0 * spec.length(), window.x.1 * spec.length());
    let t0 = window.t0 * spec.horizon();
    let mut worst = 0.0f64;
    for (m, (u, r)) in rec.frames().iter().zip(reference).enumerate() {
        if rec.times()[m] < t0 {
            continue;
        }
        for (j, &x) in grid.nodes().iter().enumerate() {
            if x >= x0 && x <= x1 {
                worst = worst.max((u[j] - r[j]).abs());
            }
        }
    }
    worst
}

/// Test function for the Riemann–Liouville limits, given through its
/// second derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlFunction {
    /// `f = x³`, `f″ = 6x`.
    Cubic,
    /// `f = x²`, `f″ = 2`; `f′` is only linear at 0, so the sweep is
    /// reported without a verdict.
    Square,
    /// `f = 0`.
    Zero,
}

impl RlFunction {
    pub fn name(self) -> &'static str {
        match self {
            RlFunction::Cubic => "cubic",
            RlFunction::Square => "square",
            RlFunction::Zero => "zero",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "cubic" => Some(RlFunction::Cubic),
            "square" => Some(RlFunction::Square),
            "zero" => Some(RlFunction::Zero),
            _ => None,
        }
    }

    fn second_derivative(self, x: f64) -> f64 {
        match self {
            RlFunction::Cubic => 6.0 * x,
            RlFunction::Square => 2.0,
            RlFunction::Zero => 0.0,
        }
    }
}

/// `‖J^{1−α} f″ − J¹ f″‖` along `to_zero` and `‖J^{1−α} f″ − f″‖` along
/// `to_one`; each must decrease monotonically.
pub fn rl_limit_probe(
    function: RlFunction,
    grid: &Grid1D,
    to_zero: &[f64],
    to_one: &[f64],
) -> Result<ProbeReport> {
    let g = grid.sample(|x| function.second_derivative(x))?;
    let running = rl_integral(&g, 1.0)?;
    let dist = |a: f64, target: &Field| -> Result<f64> {
        FracOrder::new(a)?;
        let j = rl_integral(&g, 1.0 - a)?;
        Ok(j.values()
            .iter()
            .zip(target.values())
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs())))
    };
    let d0: Vec<f64> = to_zero.iter().map(|&a| dist(a, &running)).collect::<Result<_>>()?;
    let d1: Vec<f64> = to_one.iter().map(|&a| dist(a, &g)).collect::<Result<_>>()?;
    let mut report = ProbeReport::new(format!("rl_limit_{}", function.name()), 0.0);
    for (a, d) in to_zero.iter().zip(&d0) {
        report.info(format!("to_running_integral_alpha_{a}"), *d);
    }
    for (a, d) in to_one.iter().zip(&d1) {
        report.info(format!("to_identity_alpha_{a}"), *d);
    }
    let monotone = |d: &[f64]| d.windows(2).all(|p| p[1] <= p[0]);
    if function == RlFunction::Square {
        report.info("monotone_to_zero", f64::from(u8::from(monotone(&d0))));
        report.info("monotone_to_one", f64::from(u8::from(monotone(&d1))));
    } else {
        report.flag("monotone_to_zero", monotone(&d0));
        report.flag("monotone_to_one", monotone(&d1));
    }
    Ok(report)
}

/// Regularity estimates for Lipschitz data, checked at every node:
///
/// * `|u(x,t) − u(0,t)| ≤ L₁ x^α`
/// * `|u(x,t) − u(l,t)| ≤ L₂ (l − x)`
/// * `|u(x,t) − u(x,0)| ≤ L t`
/// * `|u(x,t_{m+1}) − u(x,t_m)| ≤ L Δt`
///
/// Each is reported as the largest excess over its bound and passes when
/// that excess is at most `tolerance`. The log-log slope of
/// `|u(x,T) − u(0,T)|` over the first ten nodes is reported as well.
pub fn regularity_probe(record: &SolutionRecord, spec: &ProblemSpec, tolerance: f64) -> Result<ProbeReport> {
    let k = regularity_constants(spec)?;
    let grid = record.grid();
    let n = grid.n_cells();
    let a = spec.alpha();
    let l = spec.length();
    let first = &record.frames()[0];
    let (mut holder, mut right, mut initial, mut lipschitz) =
        (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let frames = record.frames();
    let times = record.times();
    for (m, u) in frames.iter().enumerate() {
        let t = times[m];
        let next = frames.get(m + 1);
        for (j, &x) in grid.nodes().iter().enumerate() {
            holder = holder.max((u[j] - u[0]).abs() - k.l1 * x.powf(a));
            right = right.max((u[j] - u[n]).abs() - k.l2 * (l - x));
            initial = initial.max((u[j] - first[j]).abs() - k.time_lipschitz * t);
            if let Some(v) = next {
                let dt = times[m + 1] - t;
                lipschitz = lipschitz.max((v[j] - u[j]).abs() - k.time_lipschitz * dt);
            }
        }
    }
    let mut report = ProbeReport::new("regularity", tolerance);
    report
        .info("L1", k.l1)
        .info("L2", k.l2)
        .info("L", k.time_lipschitz)
        .check("holder_at_0_excess", holder, tolerance)
        .check("lipschitz_at_l_excess", right, tolerance)
        .check("time_from_initial_excess", initial, tolerance)
        .check("time_lipschitz_excess", lipschitz, tolerance)
        .info("holder_slope_fit", holder_slope(record.last(), 10));
    Ok(report)
}

/// Least-squares slope of `log |u(x) − u(0)|` against `log x` over nodes
/// `1..=count`; NaN when the differences vanish.
pub fn holder_slope(u: &Field, count: usize) -> f64 {
    let grid = u.grid();
    let pts: Vec<(f64, f64)> = (1..=count.min(grid.n_cells()))
        .filter_map(|j| {
            let d = (u[j] - u[0]).abs();
            (d > 0.0).then(|| (grid.node(j).ln(), d.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(n, d), p| (n + (p.0 - mx) * (p.1 - my), d + (p.0 - mx).powi(2)));
    num / den
}

/// `lower − tol ≤ u ≤ upper + tol` at every node of the record.
pub fn envelope_probe(record: &SolutionRecord, lower: &SolutionRecord, upper: &SolutionRecord) -> Result<ProbeReport> {
    const TOL: f64 = 1e-8;
    if lower.frames().len() != record.frames().len() || upper.frames().len() != record.frames().len() {
        return Err(Error::LengthMismatch {
            expected: record.frames().len(),
            got: lower.frames().len().min(upper.frames().len()),
        });
    }
    let (mut below, mut above) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for ((u, lo), up) in record.frames().iter().zip(lower.frames()).zip(upper.frames()) {
        if u.len() != lo.len() || u.len() != up.len() {
            return Err(Error::LengthMismatch {
                expected: u.len(),
                got: lo.len(),
            });
        }
        for j in 0..u.len() {
            below = below.max(lo[j] - u[j]);
            above = above.max(u[j] - up[j]);
        }
    }
    let mut report = ProbeReport::new("envelope", TOL);
    report
        .check("lower_minus_solution", below, TOL)
        .check("solution_minus_upper", above, TOL);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Preset;

    #[test]
    fn floats_have_17_significant_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_float(f64::NAN), "nan");
    }

    #[test]
    fn csv_has_header_and_verdicts() {
        let mut r = ProbeReport::new("demo", 0.0);
        r.check("a", 1.0, 2.0).check("b", 3.0, 2.0).info("c", 4.0);
        assert!(!r.passed());
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "quantity,value,bound,passed");
        assert!(lines[1].ends_with(",true"));
        assert!(lines[2].ends_with(",false"));
        assert!(lines[3].ends_with(",info"));
    }

    #[test]
    fn parabola_satisfies_max_principle() {
        let g = Grid1D::new(1.0, 128).unwrap();
        let u = g.sample(|x| -(x - 0.5) * (x - 0.5)).unwrap();
        let r = max_principle_probe(&u, &FracOrder::new(0.5).unwrap()).unwrap();
        assert!(r.passed() && r.skipped.is_none());
        let v = g.sample(|x| x).unwrap();
        let r = max_principle_probe(&v, &FracOrder::new(0.5).unwrap()).unwrap();
        assert!(r.skipped.is_some());
    }

    #[test]
    fn random_sweep_is_reproducible() {
        let g = Grid1D::new(1.0, 64).unwrap();
        let o = FracOrder::new(0.3).unwrap();
        let a = max_principle_sweep(&g, &o, 10, 3).unwrap();
        let b = max_principle_sweep(&g, &o, 10, 3).unwrap();
        assert!(a.passed());
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn identical_specs_contract_trivially() {
        let o = FracOrder::new(0.5).unwrap();
        let s = Preset::LipschitzHat.build(o, 1.0, 0.05).unwrap();
        let g = Grid1D::new(1.0, 32).unwrap();
        let r = contraction_probe(&s, &s, &g, 0.9).unwrap();
        assert!(r.passed());
        assert_eq!(r.value("sup_positive_difference"), Some(0.0));
    }

    #[test]
    fn rl_limits_for_cubic() {
        let g = Grid1D::new(1.0, 128).unwrap();
        let r = rl_limit_probe(RlFunction::Cubic, &g, &[0.2, 0.1, 0.05], &[0.8, 0.9, 0.95]).unwrap();
        assert!(r.passed(), "{r:?}");
        let z = rl_limit_probe(RlFunction::Zero, &g, &[0.2, 0.1], &[0.8, 0.9]).unwrap();
        assert!(z.quantities.iter().filter(|q| q.informational).all(|q| q.value == 0.0));
    }

    #[test]
    fn holder_slope_of_power() {
        let g = Grid1D::new(1.0, 100).unwrap();
        let u = g.sample(|x| 2.0 * x.powf(0.3)).unwrap();
        assert!((holder_slope(&u, 10) - 0.3).abs() < 1e-12);
    }
}
