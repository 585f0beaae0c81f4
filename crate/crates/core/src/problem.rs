//! Problem data: order, cylinder `(0, l) × (0, T)`, source `f` and boundary
//! data `g` on the parabolic boundary.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::order::FracOrder;

/// A function of `(x, t)`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Resolution of the sampling lattice used for `sup |f|` and data checks.
const SAMPLES: usize = 257;
/// Random boundary pairs drawn when validating a Lipschitz constant.
const LIPSCHITZ_PAIRS: usize = 4096;

/// Continuity modulus `ω` of `g` on the parabolic boundary, measured in
/// `|x − y| + |t − s|`.
#[derive(Clone)]
pub enum Modulus {
    /// `ω(r) = L r`.
    Lipschitz(f64),
    /// Any nondecreasing `ω` with `ω(0) = 0`.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Modulus {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Modulus::Lipschitz(l) => l * r,
            Modulus::Custom(w) => w(r),
        }
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Lipschitz(l) => write!(f, "Lipschitz({l})"),
            Modulus::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Data of `u_t = (D^α u)_x + f` in `(0, l) × (0, T)`, `u = g` on the
/// parabolic boundary.
#[derive(Clone)]
pub struct ProblemSpec {
    name: String,
    order: FracOrder,
    length: f64,
    horizon: f64,
    source: SpaceTimeFn,
    boundary: SpaceTimeFn,
    lipschitz: Option<f64>,
    f_sup: f64,
    g_sup: f64,
    modulus: Modulus,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("alpha", &self.order.alpha())
            .field("length", &self.length)
            .field("horizon", &self.horizon)
            .field("lipschitz", &self.lipschitz)
            .field("f_sup", &self.f_sup)
            .field("g_sup", &self.g_sup)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl ProblemSpec {
    /// Builds a spec; `sup |f|` and `sup |g|` are sampled on a lattice and the
    /// modulus of `g` is estimated as a sampled Lipschitz constant.
    pub fn new(
        order: FracOrder,
        length: f64,
        horizon: f64,
        source: SpaceTimeFn,
        boundary: SpaceTimeFn,
    ) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return domain(format!("domain length must be positive, got {length}"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return domain(format!("horizon must be positive, got {horizon}"));
        }
        let mut spec = Self {
            name: "custom".into(),
            order,
            length,
            horizon,
            source,
            boundary,
            lipschitz: None,
            f_sup: 0.0,
            g_sup: 0.0,
            modulus: Modulus::Lipschitz(0.0),
        };
        spec.f_sup = spec.sample_f_sup()?;
        spec.g_sup = spec.sample_g_sup()?;
        spec.modulus = Modulus::Lipschitz(1.05 * spec.sampled_lipschitz());
        Ok(spec)
    }

    /// Declares `L_g` and checks it on random pairs of boundary points.
    pub fn with_lipschitz(mut self, lg: f64) -> Result<Self> {
        if !(lg >= 0.0 && lg.is_finite()) {
            return domain(format!("Lipschitz constant must be nonnegative, got {lg}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..LIPSCHITZ_PAIRS {
            let (x, t) = self.random_boundary_point(&mut rng);
            let (y, s) = self.random_boundary_point(&mut rng);
            let d = (x - y).abs() + (t - s).abs();
            let gap = (self.g(x, t) - self.g(y, s)).abs();
            if gap > lg * d * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::Constraint(format!(
                    "g is not {lg}-Lipschitz: |g({x},{t}) - g({y},{s})| = {gap:e} > {:e}",
                    lg * d
                )));
            }
        }
        self.lipschitz = Some(lg);
        self.modulus = Modulus::Lipschitz(lg);
        Ok(self)
    }

    /// Replaces the sampled `sup |f|` by a known value.
    pub fn with_f_sup(mut self, f_sup: f64) -> Result<Self> {
        if !(f_sup >= 0.0 && f_sup.is_finite()) {
            return domain(format!("sup |f| must be nonnegative, got {f_sup}"));
        }
        self.f_sup = f_sup;
        Ok(self)
    }

    pub fn with_modulus(mut self, modulus: Modulus) -> Self {
        self.modulus = modulus;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same data with the source replaced.
    pub fn with_source(&self, source: SpaceTimeFn) -> Result<Self> {
        let mut out = self.clone();
        out.source = source;
        out.f_sup = out.sample_f_sup()?;
        Ok(out)
    }

    /// Same data with a different order.
    pub fn with_order(&self, order: FracOrder) -> Self {
        let mut out = self.clone();
        out.order = order;
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> &FracOrder {
        &self.order
    }

    pub fn alpha(&self) -> f64 {
        self.order.alpha()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    /// `‖f‖_∞`.
    pub fn f_sup(&self) -> f64 {
        self.f_sup
    }

    /// `‖g‖_∞` over the parabolic boundary.
    pub fn g_sup(&self) -> f64 {
        self.g_sup
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn source(&self) -> &SpaceTimeFn {
        &self.source
    }

    pub fn boundary(&self) -> &SpaceTimeFn {
        &self.boundary
    }

    #[inline]
    pub fn f(&self, x: f64, t: f64) -> f64 {
        (self.source)(x, t)
    }

    #[inline]
    pub fn g(&self, x: f64, t: f64) -> f64 {
        (self.boundary)(x, t)
    }

    fn sample_f_sup(&self) -> Result<f64> {
        let mut sup = 0.0f64;
        for a in 0..SAMPLES {
            let x = self.length * a as f64 / (SAMPLES - 1) as f64;
            for b in 0..SAMPLES {
                let t = self.horizon * b as f64 / (SAMPLES - 1) as f64;
                let v = self.f(x, t);
                if !v.is_finite() {
                    return domain(format!("source is not finite at ({x}, {t})"));
                }
                sup = sup.max(v.abs());
            }
        }
        Ok(sup)
    }

    fn sample_g_sup(&self) -> Result<f64> {
        let mut sup = 0.0f64;
        for (x, t) in self.boundary_lattice() {
            let v = self.g(x, t);
            if !v.is_finite() {
                return domain(format!("boundary data is not finite at ({x}, {t})"));
            }
            sup = sup.max(v.abs());
        }
        Ok(sup)
    }

    fn sampled_lipschitz(&self) -> f64 {
        let pts = self.boundary_lattice();
        let mut lip = 0.0f64;
        for (a, &(x, t)) in pts.iter().enumerate() {
            for &(y, s) in &pts[a + 1..] {
                let d = (x - y).abs() + (t - s).abs();
                if d > 0.0 {
                    lip = lip.max((self.g(x, t) - self.g(y, s)).abs() / d);
                }
            }
        }
        lip
    }

    /// Lattice on the bottom and both lateral sides.
    fn boundary_lattice(&self) -> Vec<(f64, f64)> {
        let m = SAMPLES - 1;
        let mut pts = Vec::with_capacity(3 * SAMPLES);
        for a in 0..=m {
            pts.push((self.length * a as f64 / m as f64, 0.0));
        }
        for b in 1..=m {
            let t = self.horizon * b as f64 / m as f64;
            pts.push((0.0, t));
            pts.push((self.length, t));
        }
        pts
    }

    fn random_boundary_point(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        match rng.random_range(0..3u8) {
            0 => (rng.random_range(0.0..=self.length), 0.0),
            1 => (0.0, rng.random_range(0.0..=self.horizon)),
            _ => (self.length, rng.random_range(0.0..=self.horizon)),
        }
    }
}

/// Named data sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `f = 0`, `g = 0`.
    Zero,
    /// `f = 1`, `g = 0`.
    ConstantForce,
    /// `f = 0`, `g(x, t) = 1 − |2x/l − 1|`.
    LipschitzHat,
    /// `f = 0`, `g(x, t) = sin(πx/l)`.
    SmoothSine,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Zero,
        Preset::ConstantForce,
        Preset::LipschitzHat,
        Preset::SmoothSine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Zero => "zero",
            Preset::ConstantForce => "constant-force",
            Preset::LipschitzHat => "lipschitz-hat",
            Preset::SmoothSine => "smooth-sine",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Instantiates the preset; all presets carry an exact `L_g`.
    pub fn build(self, order: FracOrder, length: f64, horizon: f64) -> Result<ProblemSpec> {
        if !(length > 0.0) {
            return domain(format!("domain length must be positive, got {length}"));
        }
        let l = length;
        let (f, g, lg): (SpaceTimeFn, SpaceTimeFn, f64) = match self {
            Preset::Zero => (Arc::new(|_, _| 0.0), Arc::new(|_, _| 0.0), 0.0),
            Preset::ConstantForce => (Arc::new(|_, _| 1.0), Arc::new(|_, _| 0.0), 0.0),
            Preset::LipschitzHat => (
                Arc::new(|_, _| 0.0),
                Arc::new(move |x, _| 1.0 - (2.0 * x / l - 1.0).abs()),
                2.0 / l,
            ),
            Preset::SmoothSine => (
                Arc::new(|_, _| 0.0),
                Arc::new(move |x, _| {
                    // exact zeros at both ends
                    if x <= 0.0 || x >= l {
                        0.0
                    } else {
                        (std::f64::consts::PI * x / l).sin()
                    }
                }),
                std::f64::consts::PI / l,
            ),
        };
        ProblemSpec::new(order, length, horizon, f, g)?
            .with_lipschitz(lg)
            .map(|s| s.with_name(self.name()))
    }
}
