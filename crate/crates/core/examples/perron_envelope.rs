//! The envelope of all boundary barriers brackets the solution.

use fracdiff::{barrier_envelope, build_weights, envelope_probe, solve_with, EnvelopeOptions, FracOrder, Grid1D, Preset, Result};

fn main() -> Result<()> {
    let order = FracOrder::new(0.5)?;
    let spec = Preset::LipschitzHat.build(order, 1.0, 0.25)?;
    let w = build_weights(&Grid1D::new(1.0, 128)?, &order)?;
    let rec = solve_with(&spec, &w, 0.9)?;
    let (lower, upper) = barrier_envelope(&spec, &w, rec.times(), &EnvelopeOptions::default())?;
    let mid = rec.grid().n_cells() / 2;
    for m in [1, rec.times().len() / 2, rec.times().len() - 1] {
        println!(
            "t = {:.4}: {:.4} <= u(1/2) = {:.4} <= {:.4}",
            rec.times()[m],
            lower.frames()[m][mid],
            rec.frames()[m][mid],
            upper.frames()[m][mid]
        );
    }
    print!("{}", envelope_probe(&rec, &lower, &upper)?.to_csv());
    Ok(())
}
