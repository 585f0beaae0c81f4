//! One-dimensional space-fractional diffusion
//!
//! ```text
//! u_t = (D^α_x u)_x + f   in (0, l) × (0, T),     u = g on the parabolic boundary,
//! ```
//!
//! where `D^α_x` is the Caputo derivative anchored at `x = 0`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod barriers;
pub mod cli;
pub mod config;
pub mod error;
pub mod expr;
pub mod grid;
pub mod operator;
pub mod order;
pub mod problem;
pub mod solver;
pub mod special;

mod moments;
mod stencil;

pub use barriers::{
    barrier_envelope, default_rho_c, envelope_barriers, eta1, eta2, regularity_barrier_bottom,
    regularity_barrier_lateral, regularity_constants, rho, scheme_residual, sigma, xi1, xi2,
    BarrierFamily, BarrierKind, Calibration, EnvelopeOptions, RegularityConstants, Side,
};
pub use config::{ConfigError, ProbeKind, RunConfig};
pub use error::{Error, Result};
pub use expr::{Expr, ExprError};
pub use grid::{Field, Grid1D};
pub use operator::{
    caputo_l1, flux_divergence, flux_divergence_with, j_operator, k_operator, power_rule,
    power_rule_flux, rl_integral, KernelSlice, SlopeRule,
};
pub use order::FracOrder;
pub use problem::{Modulus, Preset, ProblemSpec, SpaceTimeFn};
pub use solver::{
    build_weights, solve, solve_with, solve_with_dt, stable_dt, step, time_levels, ApplyMode, OperatorWeights, RunMeta,
    SlopeMode, SolutionRecord,
};
pub use special::gamma_fn;
pub use analysis::{
    alpha_limit_probe, contraction_probe, contraction_terms, envelope_probe, format_float, holder_slope,
    concave_field, interior_argmax, max_principle_probe, max_principle_sweep, reference_solution, regularity_probe, rl_limit_probe, ContractionTerms, LimitReference,
    ProbeReport, Quantity, RlFunction, Window,
};
