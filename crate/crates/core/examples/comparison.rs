//! Ordered data give ordered solutions, and the gap is bounded by the gap
//! of the data.

use std::sync::Arc;

use fracdiff::{contraction_probe, FracOrder, Grid1D, ProblemSpec, Result};

fn main() -> Result<()> {
    let order = FracOrder::new(0.5)?;
    let lower = ProblemSpec::new(order, 1.0, 0.25, Arc::new(|x, _| x), Arc::new(|x, _| x * (1.0 - x)))?;
    let upper = ProblemSpec::new(
        order,
        1.0,
        0.25,
        Arc::new(|x, t| x + 0.5 * t),
        Arc::new(|x, t| x * (1.0 - x) + 0.1 * t),
    )?;
    let report = contraction_probe(&upper, &lower, &Grid1D::new(1.0, 128)?, 0.9)?;
    print!("{}", report.to_csv());
    Ok(())
}
