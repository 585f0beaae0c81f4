//! Explicit barriers built from `ρ` and `σ`, and a finite Perron envelope.
//!
//! ```text
//! ρ⁰(x) = −x^{1+α}/Γ(2+α) + C x^α/Γ(1+α)          (D^α ρ)_x = −1
//! ρˡ(x) = −(x^{1+α} − l^{1+α})/Γ(2+α)             (D^α ρ)_x = −1
//! σʸ(x) = y^{1+α}/α − (1+α)/α · y x^α + x^{1+α}    (D^α σ)_x = Γ(2+α)
//! ```
//!
//! The lateral barriers vanish at `x = 0` or `x = l` and pin the solution to
//! the lateral data; `σʸ` has a double zero at `y` and pins the initial data.
//!
//! Constants are calibrated against an operator model: either the exact
//! operator (fluxes `−1` and `Γ(2+α)`) or an assembled [`OperatorWeights`],
//! in which case every barrier is a subsolution or supersolution of the
//! scheme itself and the envelope provably brackets the numerical solution.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::grid::{Field, Grid1D};
use crate::order::FracOrder;
use crate::problem::ProblemSpec;
use crate::solver::{ApplyMode, OperatorWeights, RunMeta, SolutionRecord};

/// Safety factor applied to sampled suprema.
const SAFETY: f64 = 1.05;
/// Points of the refined lattice used for sampled suprema.
const REFINED: usize = 2048;
/// Upper bound on lateral time anchors per side.
const MAX_TIME_ANCHORS: usize = 64;

/// Which end of `[0, l]` a lateral barrier is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// `C = 2l/(1+α)`, comfortably above the admissibility threshold `l/(1+α)`.
pub fn default_rho_c(order: &FracOrder, l: f64) -> f64 {
    2.0 * l / (1.0 + order.alpha())
}

/// `ρ⁰` or `ρˡ` at `x`; both vanish at their anchor and are positive
/// elsewhere on `[0, l]`.
pub fn rho(side: Side, c: f64, order: &FracOrder, l: f64, x: f64) -> Result<f64> {
    if !(l > 0.0) {
        return domain(format!("domain length must be positive, got {l}"));
    }
    if !(0.0..=l).contains(&x) {
        return domain(format!("rho is defined on [0, {l}], got x={x}"));
    }
    let a = order.alpha();
    match side {
        Side::Left => {
            if !(c > l / (1.0 + a)) {
                return Err(Error::Constraint(format!(
                    "rho at x=0 needs C > l/(1+alpha) = {}, got {c}",
                    l / (1.0 + a)
                )));
            }
            Ok(-x.powf(1.0 + a) / order.gamma_2pa() + c * x.powf(a) / order.gamma_1pa())
        }
        Side::Right => Ok(-(x.powf(1.0 + a) - l.powf(1.0 + a)) / order.gamma_2pa()),
    }
}

/// `σʸ(x)`, nonnegative with its only zero at `x = y`.
pub fn sigma(y: f64, order: &FracOrder, l: f64, x: f64) -> Result<f64> {
    if !(y > 0.0 && y < l) {
        return domain(format!("sigma anchor must lie in (0, {l}), got y={y}"));
    }
    if !(0.0..=l).contains(&x) {
        return domain(format!("sigma is defined on [0, {l}], got x={x}"));
    }
    let a = order.alpha();
    Ok(y.powf(1.0 + a) / a - (1.0 + a) / a * y * x.powf(a) + x.powf(1.0 + a))
}

/// The barrier families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BarrierKind {
    /// `g(y,s) − 2ε − Aρʸ(x) − M₂|t−s|`, subsolution.
    LateralXi1,
    /// `g(y,s) + 2ε + Aρʸ(x) + M₂|t−s|`, supersolution.
    LateralEta1,
    /// `g(y,0) − 2ε − N₁σʸ(x) − (N₂+‖f‖)t`, subsolution.
    BottomXi2,
    /// `g(y,0) + 2ε + N₁σʸ(x) + (N₂+‖f‖)t`, supersolution.
    BottomEta2,
    /// `g(y,s) ∓ ((1+1/c)L_g+‖f‖)ρ(x) ∓ L_g|t−s|`.
    RegularityLateral,
    /// `g(y,0) ∓ 2ε ∓ N₁σʸ(x) ∓ (L_g+N₂+‖f‖)t`.
    RegularityBottom,
}

impl BarrierKind {
    pub fn name(self) -> &'static str {
        match self {
            BarrierKind::LateralXi1 => "lateral_xi1",
            BarrierKind::LateralEta1 => "lateral_eta1",
            BarrierKind::BottomXi2 => "bottom_xi2",
            BarrierKind::BottomEta2 => "bottom_eta2",
            BarrierKind::RegularityLateral => "regularity_lateral",
            BarrierKind::RegularityBottom => "regularity_bottom",
        }
    }
}

/// How the space profile is shaped.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Profile {
    Rho(Side),
    Sigma(f64),
}

/// One calibrated barrier
/// `b(x,t) = base + sign·(2ε + amplitude·profile(x) + rate·τ(t))`, with
/// `τ(t) = |t − s|` for lateral and `τ(t) = t` for bottom barriers and
/// `sign = −1` for subsolutions.
#[derive(Clone)]
pub struct BarrierFamily {
    kind: BarrierKind,
    order: FracOrder,
    length: f64,
    upper: bool,
    anchor: (f64, f64),
    eps: f64,
    base: f64,
    profile: Profile,
    rho_c: f64,
    amplitude: f64,
    rate: f64,
    constants: BTreeMap<&'static str, f64>,
}

impl fmt::Debug for BarrierFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BarrierFamily")
            .field("kind", &self.kind)
            .field("upper", &self.upper)
            .field("anchor", &self.anchor)
            .field("eps", &self.eps)
            .field("constants", &self.constants)
            .finish()
    }
}

impl BarrierFamily {
    pub fn kind(&self) -> BarrierKind {
        self.kind
    }

    /// True for supersolutions.
    pub fn is_upper(&self) -> bool {
        self.upper
    }

    /// `(y, s)`; bottom barriers have `s = 0`.
    pub fn anchor(&self) -> (f64, f64) {
        self.anchor
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn order(&self) -> &FracOrder {
        &self.order
    }

    /// Named constants: `M1`, `M2`, `N1`, `N2`, `C`, `c`, `L_g`, `f_sup` and
    /// the derived `amplitude`, `rate` where they apply.
    pub fn constants(&self) -> &BTreeMap<&'static str, f64> {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }

    /// The space profile `ρ(x)` or `σʸ(x)`.
    pub fn profile(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.length);
        match self.profile {
            Profile::Rho(side) => rho(side, self.rho_c, &self.order, self.length, x).unwrap_or(f64::NAN),
            Profile::Sigma(y) => sigma(y, &self.order, self.length, x).unwrap_or(f64::NAN),
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.eval_with_profile(self.profile(x), t)
    }

    fn eval_with_profile(&self, profile: f64, t: f64) -> f64 {
        let tau = match self.kind {
            BarrierKind::LateralXi1 | BarrierKind::LateralEta1 | BarrierKind::RegularityLateral => {
                (t - self.anchor.1).abs()
            }
            _ => t,
        };
        let bump = 2.0 * self.eps + self.amplitude * profile + self.rate * tau;
        if self.upper {
            self.base + bump
        } else {
            self.base - bump
        }
    }

    /// Samples `b(·, t)` on `grid`.
    pub fn sample(&self, grid: &Grid1D, t: f64) -> Result<Field> {
        grid.sample(|x| self.eval(x, t))
    }
}

/// Operator data a calibration is measured against.
#[derive(Debug, Clone)]
pub struct Calibration {
    order: FracOrder,
    /// `min_i −(Wρ⁰)_i` and `min_i −(Wρˡ)_i`.
    rho_margin: (f64, f64),
    /// `W x^α` and `W x^{1+α}` on the grid, for `Wσʸ` by linearity.
    layer_flux: Option<(Vec<f64>, Vec<f64>)>,
    xs: Vec<f64>,
    ts: Vec<f64>,
    horizon: f64,
}

impl Calibration {
    /// Exact operator: `(D^α ρ)_x = −1`, `(D^α σ)_x = Γ(2+α)`; suprema are
    /// sampled on a uniform lattice.
    pub fn continuum(spec: &ProblemSpec) -> Self {
        let l = spec.length();
        let horizon = spec.horizon();
        Self {
            order: *spec.order(),
            rho_margin: (1.0, 1.0),
            layer_flux: None,
            xs: lattice(l, REFINED),
            ts: lattice(horizon, REFINED),
            horizon,
        }
    }

    /// Assembled operator: the barrier amplitudes are raised until the
    /// sampled barriers are sub/supersolutions of the scheme. Suprema are
    /// sampled on the grid, the time levels and a uniform lattice.
    pub fn discrete(spec: &ProblemSpec, w: &OperatorWeights, times: &[f64]) -> Result<Self> {
        let grid = w.grid();
        if (grid.length() - spec.length()).abs() > 1e-12 * spec.length() {
            return domain("weights and problem live on different domains");
        }
        let order = *spec.order();
        let l = spec.length();
        let a = order.alpha();
        let c = default_rho_c(&order, l);
        let apply = |f: &dyn Fn(f64) -> f64| -> Result<Vec<f64>> {
            let u = grid.sample(f)?;
            Ok(w.apply(&u)?.into_values())
        };
        let r0 = apply(&|x| rho(Side::Left, c, &order, l, x).unwrap_or(0.0))?;
        let rl = apply(&|x| rho(Side::Right, c, &order, l, x).unwrap_or(0.0))?;
        let n = grid.n_cells();
        let margin = |v: &[f64]| v[1..n].iter().fold(f64::INFINITY, |m, &r| m.min(-r));
        let rho_margin = (margin(&r0), margin(&rl));
        if !(rho_margin.0 > 0.0 && rho_margin.1 > 0.0) {
            return Err(Error::Constraint(format!(
                "the assembled operator does not keep rho a strict supersolution (margins {:e}, {:e})",
                rho_margin.0, rho_margin.1
            )));
        }
        let xa = apply(&|x| x.powf(a))?;
        let xa1 = apply(&|x| x.powf(1.0 + a))?;
        let mut xs = grid.nodes().to_vec();
        xs.extend(lattice(l, REFINED));
        let mut ts = times.to_vec();
        ts.extend(lattice(spec.horizon(), REFINED));
        Ok(Self {
            order,
            rho_margin,
            layer_flux: Some((xa, xa1)),
            xs,
            ts,
            horizon: spec.horizon(),
        })
    }

    /// `min −(Wρ)` for the given side; 1 for the exact operator.
    pub fn rho_margin(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.rho_margin.0,
            Side::Right => self.rho_margin.1,
        }
    }

    /// `max (Wσʸ)`; `Γ(2+α)` for the exact operator.
    pub fn sigma_flux_max(&self, y: f64) -> f64 {
        let a = self.order.alpha();
        let exact = self.order.gamma_2pa();
        match &self.layer_flux {
            None => exact,
            Some((xa, xa1)) => {
                let k = (1.0 + a) / a * y;
                let n = xa.len() - 1;
                (1..n).fold(exact, |m, i| m.max(xa1[i] - k * xa[i]))
            }
        }
    }
}

fn lattice(len: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| len * k as f64 / n as f64).collect()
}

fn lateral_point(side: Side, l: f64) -> f64 {
    match side {
        Side::Left => 0.0,
        Side::Right => l,
    }
}

/// `sup_{x ≠ y} (ω(|x−y|) − ε)⁺ / p(x)` over the calibration lattice.
fn space_sup(cal: &Calibration, spec: &ProblemSpec, y: f64, eps: f64, p: impl Fn(f64) -> f64) -> f64 {
    cal.xs
        .iter()
        .filter(|&&x| x != y)
        .map(|&x| {
            let num = (spec.modulus().eval((x - y).abs()) - eps).max(0.0);
            if num == 0.0 {
                0.0
            } else {
                num / p(x)
            }
        })
        .fold(0.0, f64::max)
}

/// `sup_{t ≠ s} (ω(|t−s|) − ε)⁺ / |t−s|` over the calibration lattice.
fn time_sup(cal: &Calibration, spec: &ProblemSpec, s: f64, eps: f64) -> f64 {
    cal.ts
        .iter()
        .filter(|&&t| t != s && t < cal.horizon + 1e-15)
        .map(|&t| {
            let d = (t - s).abs();
            (spec.modulus().eval(d) - eps).max(0.0) / d
        })
        .fold(0.0, f64::max)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return domain(format!("epsilon must be positive, got {eps}"));
    }
    Ok(())
}

fn lateral(
    spec: &ProblemSpec,
    cal: &Calibration,
    side: Side,
    s: f64,
    eps: f64,
    upper: bool,
) -> Result<BarrierFamily> {
    check_eps(eps)?;
    if !(s >= 0.0 && s < spec.horizon()) {
        return domain(format!("lateral anchor time must lie in [0, T), got {s}"));
    }
    let order = *spec.order();
    let l = spec.length();
    let c = default_rho_c(&order, l);
    let y = lateral_point(side, l);
    let f_sup = spec.f_sup();
    let m1 = SAFETY * space_sup(cal, spec, y, eps, |x| rho(side, c, &order, l, x).unwrap_or(f64::NAN));
    let m2 = SAFETY * time_sup(cal, spec, s, eps);
    let d = cal.rho_margin(side);
    let amplitude = (m1 + m2 + f_sup).max((m2 + f_sup) / d);
    let constants = BTreeMap::from([
        ("M1", m1),
        ("M2", m2),
        ("C", c),
        ("f_sup", f_sup),
        ("rho_margin", d),
        ("amplitude", amplitude),
        ("rate", m2),
    ]);
    Ok(BarrierFamily {
        kind: if upper {
            BarrierKind::LateralEta1
        } else {
            BarrierKind::LateralXi1
        },
        order,
        length: l,
        upper,
        anchor: (y, s),
        eps,
        base: spec.g(y, s),
        profile: Profile::Rho(side),
        rho_c: c,
        amplitude,
        rate: m2,
        constants,
    })
}

fn bottom(spec: &ProblemSpec, cal: &Calibration, y: f64, eps: f64, upper: bool) -> Result<BarrierFamily> {
    check_eps(eps)?;
    let order = *spec.order();
    let l = spec.length();
    sigma(y, &order, l, 0.0)?;
    let f_sup = spec.f_sup();
    let n1 = SAFETY * space_sup(cal, spec, y, eps, |x| sigma(y, &order, l, x).unwrap_or(f64::NAN));
    let analytic_n2 = SAFETY * time_sup(cal, spec, 0.0, eps);
    // the σ term contributes +N₁(D^α σ)_x = N₁Γ(2+α) to the residual
    let n2 = analytic_n2.max(n1 * cal.sigma_flux_max(y));
    let rate = n2 + f_sup;
    let constants = BTreeMap::from([
        ("N1", n1),
        ("N2", n2),
        ("f_sup", f_sup),
        ("sigma_flux_max", cal.sigma_flux_max(y)),
        ("amplitude", n1),
        ("rate", rate),
    ]);
    Ok(BarrierFamily {
        kind: if upper {
            BarrierKind::BottomEta2
        } else {
            BarrierKind::BottomXi2
        },
        order,
        length: l,
        upper,
        anchor: (y, 0.0),
        eps,
        base: spec.g(y, 0.0),
        profile: Profile::Sigma(y),
        rho_c: default_rho_c(&order, l),
        amplitude: n1,
        rate,
        constants,
    })
}

/// Lateral subsolution anchored at `(y, s)`, `y ∈ {0, l}`.
pub fn xi1(spec: &ProblemSpec, cal: &Calibration, side: Side, s: f64, eps: f64) -> Result<BarrierFamily> {
    lateral(spec, cal, side, s, eps, false)
}

/// Lateral supersolution anchored at `(y, s)`, `y ∈ {0, l}`.
pub fn eta1(spec: &ProblemSpec, cal: &Calibration, side: Side, s: f64, eps: f64) -> Result<BarrierFamily> {
    lateral(spec, cal, side, s, eps, true)
}

/// Bottom subsolution anchored at `(y, 0)`, `0 < y < l`.
pub fn xi2(spec: &ProblemSpec, cal: &Calibration, y: f64, eps: f64) -> Result<BarrierFamily> {
    bottom(spec, cal, y, eps, false)
}

/// Bottom supersolution anchored at `(y, 0)`, `0 < y < l`.
pub fn eta2(spec: &ProblemSpec, cal: &Calibration, y: f64, eps: f64) -> Result<BarrierFamily> {
    bottom(spec, cal, y, eps, true)
}

/// Constants of the regularity estimates for Lipschitz data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityConstants {
    pub lipschitz: f64,
    pub f_sup: f64,
    /// `C` of `ρ⁰`.
    pub rho_c: f64,
    /// `c = ρ⁰(l)/l` and `c = ρˡ(0)/l`.
    pub c_left: f64,
    pub c_right: f64,
    /// `|u(x,t) − u(0,t)| ≤ L₁ x^α`.
    pub l1: f64,
    /// `|u(x,t) − u(l,t)| ≤ L₂ |l − x|`.
    pub l2: f64,
    /// `N₂ = L_g`, enough for `sup_t (L_g t − ε)⁺/t`.
    pub n2: f64,
    /// `|u(x,t) − u(x,s)| ≤ L |t − s|` with `L = L_g + ‖f‖ + N₂`.
    pub time_lipschitz: f64,
}

/// Constants of the lateral and initial regularity barriers.
pub fn regularity_constants(spec: &ProblemSpec) -> Result<RegularityConstants> {
    let lg = spec.lipschitz().ok_or_else(|| {
        Error::Constraint("regularity bounds need a Lipschitz constant for g".into())
    })?;
    let order = spec.order();
    let l = spec.length();
    let a = order.alpha();
    let c = default_rho_c(order, l);
    let c_left = rho(Side::Left, c, order, l, l)? / l;
    let c_right = rho(Side::Right, c, order, l, 0.0)? / l;
    let f_sup = spec.f_sup();
    let l1 = ((1.0 + 1.0 / c_left) * lg + f_sup) * c / order.gamma_1pa();
    let l2 = ((1.0 + 1.0 / c_right) * lg + f_sup) * (1.0 + a) * l.powf(a) / order.gamma_2pa();
    let n2 = lg;
    Ok(RegularityConstants {
        lipschitz: lg,
        f_sup,
        rho_c: c,
        c_left,
        c_right,
        l1,
        l2,
        n2,
        time_lipschitz: lg + f_sup + n2,
    })
}

/// The lateral regularity barrier `ξ^{y,s}` (or `η^{y,s}` when `upper`).
pub fn regularity_barrier_lateral(
    spec: &ProblemSpec,
    side: Side,
    s: f64,
    upper: bool,
) -> Result<(BarrierFamily, RegularityConstants)> {
    let k = regularity_constants(spec)?;
    if !(s >= 0.0 && s < spec.horizon()) {
        return domain(format!("lateral anchor time must lie in [0, T), got {s}"));
    }
    let l = spec.length();
    let y = lateral_point(side, l);
    let c = match side {
        Side::Left => k.c_left,
        Side::Right => k.c_right,
    };
    let amplitude = (1.0 + 1.0 / c) * k.lipschitz + k.f_sup;
    let constants = BTreeMap::from([
        ("C", k.rho_c),
        ("c", c),
        ("L_g", k.lipschitz),
        ("f_sup", k.f_sup),
        ("L1", k.l1),
        ("L2", k.l2),
        ("amplitude", amplitude),
        ("rate", k.lipschitz),
    ]);
    let family = BarrierFamily {
        kind: BarrierKind::RegularityLateral,
        order: *spec.order(),
        length: l,
        upper,
        anchor: (y, s),
        eps: 0.0,
        base: spec.g(y, s),
        profile: Profile::Rho(side),
        rho_c: k.rho_c,
        amplitude,
        rate: k.lipschitz,
        constants,
    };
    Ok((family, k))
}

/// The initial-layer regularity barrier anchored at `(y, 0)`.
pub fn regularity_barrier_bottom(
    spec: &ProblemSpec,
    cal: &Calibration,
    y: f64,
    eps: f64,
    upper: bool,
) -> Result<BarrierFamily> {
    let k = regularity_constants(spec)?;
    check_eps(eps)?;
    let order = *spec.order();
    let l = spec.length();
    sigma(y, &order, l, 0.0)?;
    let n1 = SAFETY * space_sup(cal, spec, y, eps, |x| sigma(y, &order, l, x).unwrap_or(f64::NAN));
    let rate = k.lipschitz + k.n2 + k.f_sup;
    let constants = BTreeMap::from([
        ("N1", n1),
        ("N2", k.n2),
        ("L_g", k.lipschitz),
        ("f_sup", k.f_sup),
        ("L", k.time_lipschitz),
        ("amplitude", n1),
        ("rate", rate),
    ]);
    Ok(BarrierFamily {
        kind: BarrierKind::RegularityBottom,
        order,
        length: l,
        upper,
        anchor: (y, 0.0),
        eps,
        base: spec.g(y, 0.0),
        profile: Profile::Sigma(y),
        rho_c: default_rho_c(&order, l),
        amplitude: n1,
        rate,
        constants,
    })
}

/// Largest violation of the discrete sub/supersolution inequality,
/// `±[(b^{m+1} − b^m)/Δt − W b^m − f]` over interior nodes; `≤ 0` means the
/// barrier is a sub- (or super-) solution of the scheme.
pub fn scheme_residual(
    barrier: &BarrierFamily,
    spec: &ProblemSpec,
    w: &OperatorWeights,
    times: &[f64],
) -> Result<f64> {
    let grid = w.grid();
    let n = grid.n_cells();
    let sign = if barrier.is_upper() { -1.0 } else { 1.0 };
    let mut worst = f64::NEG_INFINITY;
    let mut cur = barrier.sample(grid, times[0])?;
    for m in 0..times.len() - 1 {
        let (t0, t1) = (times[m], times[m + 1]);
        let next = barrier.sample(grid, t1)?;
        let wb = w.apply(&cur)?;
        for i in 1..n {
            let x = grid.node(i);
            let r = (next[i] - cur[i]) / (t1 - t0) - wb[i] - spec.f(x, t0);
            worst = worst.max(sign * r);
        }
        cur = next;
    }
    Ok(worst)
}

/// Anchor sampling of [`barrier_envelope`].
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeOptions {
    /// Every `space_stride`-th interior node anchors a bottom barrier.
    pub space_stride: usize,
    /// Every `time_stride`-th time level anchors lateral barriers; `None`
    /// picks a stride of at least 4 that keeps at most 64 anchors per side.
    pub time_stride: Option<usize>,
    /// `ε` values as multiples of `‖g‖_∞` (absolute when `g ≡ 0`).
    pub eps_factors: Vec<f64>,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        Self {
            space_stride: 4,
            time_stride: None,
            eps_factors: vec![1.0, 0.1, 0.01],
        }
    }
}

/// All barriers used by [`barrier_envelope`]: `(subsolutions, supersolutions)`.
pub fn envelope_barriers(
    spec: &ProblemSpec,
    cal: &Calibration,
    grid: &Grid1D,
    times: &[f64],
    opts: &EnvelopeOptions,
) -> Result<(Vec<BarrierFamily>, Vec<BarrierFamily>)> {
    if opts.space_stride == 0 || opts.time_stride == Some(0) || opts.eps_factors.is_empty() {
        return domain("envelope strides must be positive and at least one epsilon is needed");
    }
    let scale = if spec.g_sup() > 0.0 { spec.g_sup() } else { 1.0 };
    let eps: Vec<f64> = opts.eps_factors.iter().map(|f| f * scale).collect();
    let anchors_t: Vec<f64> = {
        let levels: Vec<f64> = times.iter().copied().filter(|&t| t < spec.horizon()).collect();
        let stride = opts
            .time_stride
            .unwrap_or_else(|| 4.max(levels.len().div_ceil(MAX_TIME_ANCHORS)));
        levels.into_iter().step_by(stride).collect()
    };
    let anchors_y: Vec<f64> = (1..grid.n_cells())
        .step_by(opts.space_stride)
        .map(|j| grid.node(j))
        .collect();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for &e in &eps {
        for side in [Side::Left, Side::Right] {
            for &s in &anchors_t {
                lower.push(xi1(spec, cal, side, s, e)?);
                upper.push(eta1(spec, cal, side, s, e)?);
            }
        }
        for &y in &anchors_y {
            lower.push(xi2(spec, cal, y, e)?);
            upper.push(eta2(spec, cal, y, e)?);
        }
    }
    Ok((lower, upper))
}

/// Pointwise max of the sampled subsolutions and min of the sampled
/// supersolutions on `grid × times`, calibrated against `w`.
pub fn barrier_envelope(
    spec: &ProblemSpec,
    w: &OperatorWeights,
    times: &[f64],
    opts: &EnvelopeOptions,
) -> Result<(SolutionRecord, SolutionRecord)> {
    let grid = w.grid();
    let cal = Calibration::discrete(spec, w, times)?;
    let (subs, sups) = envelope_barriers(spec, &cal, grid, times, opts)?;
    // profiles on the grid once per barrier; the time dependence is affine
    let profiles = |set: &[BarrierFamily]| -> Vec<Vec<f64>> {
        set.par_iter()
            .map(|b| grid.nodes().iter().map(|&x| b.profile(x)).collect())
            .collect()
    };
    let (p_sub, p_sup) = (profiles(&subs), profiles(&sups));
    let frame = |t: f64, set: &[BarrierFamily], prof: &[Vec<f64>], upper: bool| -> Result<Field> {
        let init = if upper { f64::INFINITY } else { f64::NEG_INFINITY };
        let mut vals = vec![init; grid.n_nodes()];
        for (b, p) in set.iter().zip(prof) {
            for (v, &px) in vals.iter_mut().zip(p) {
                let e = b.eval_with_profile(px, t);
                *v = if upper { v.min(e) } else { v.max(e) };
            }
        }
        Field::new(grid.clone(), vals)
    };
    let lower: Vec<Field> = times
        .par_iter()
        .map(|&t| frame(t, &subs, &p_sub, false))
        .collect::<Result<_>>()?;
    let upper: Vec<Field> = times
        .par_iter()
        .map(|&t| frame(t, &sups, &p_sup, true))
        .collect::<Result<_>>()?;
    let meta = |name: &str| RunMeta {
        problem: format!("{} ({name})", spec.name()),
        alpha: spec.alpha(),
        length: spec.length(),
        horizon: spec.horizon(),
        n_cells: grid.n_cells(),
        n_steps: times.len() - 1,
        dt: times.get(1).map_or(0.0, |t| t - times[0]),
        dt_safety: f64::NAN,
        scheme: "barrier-envelope".into(),
        slope_mode: w.slope_mode().to_string(),
        corrected_rows: w.corrected_rows(),
        apply_mode: ApplyMode::Naive,
        weight_build_seconds: w.build_time().as_secs_f64(),
    };
    Ok((
        SolutionRecord::new(grid.clone(), times.to_vec(), lower, meta("lower envelope"))?,
        SolutionRecord::new(grid.clone(), times.to_vec(), upper, meta("upper envelope"))?,
    ))
}
