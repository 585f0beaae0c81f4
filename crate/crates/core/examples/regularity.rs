//! Hölder and Lipschitz estimates for the hat problem. The spatial bounds
//! hold; the time bounds do not hold for kinked data near `t = 0`.

use fracdiff::{regularity_probe, solve, FracOrder, Grid1D, Preset, Result};

fn main() -> Result<()> {
    for alpha in [0.25, 0.5, 0.75] {
        let spec = Preset::LipschitzHat.build(FracOrder::new(alpha)?, 1.0, 0.25)?;
        let rec = solve(&spec, &Grid1D::new(1.0, 256)?, 0.9)?;
        let report = regularity_probe(&rec, &spec, 1e-6)?;
        print!("alpha = {alpha}\n{}", report.to_csv());
    }
    Ok(())
}
