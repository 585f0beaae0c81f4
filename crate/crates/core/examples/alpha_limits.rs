//! As `α → 0` solutions approach the transport equation `u_t = u_x`, as
//! `α → 1` the heat equation.

use fracdiff::{alpha_limit_probe, FracOrder, Grid1D, LimitReference, Preset, Result, Window};

fn main() -> Result<()> {
    let spec = Preset::SmoothSine.build(FracOrder::new(0.5)?, 1.0, 0.25)?;
    let grid = Grid1D::new(1.0, 128)?;
    for (alphas, reference) in [
        ([0.2, 0.1, 0.05], LimitReference::Advection),
        ([0.8, 0.9, 0.95], LimitReference::Heat),
    ] {
        let report = alpha_limit_probe(&spec, &alphas, reference, &grid, Window::default(), 0.9)?;
        print!("{}\n{}", reference.name(), report.to_csv());
    }
    Ok(())
}
