//! At an interior maximum the discrete flux divergence is nonpositive.

use fracdiff::{max_principle_sweep, FracOrder, Grid1D, Result};

fn main() -> Result<()> {
    let grid = Grid1D::new(1.0, 256)?;
    for alpha in [0.1, 0.5, 0.9] {
        let report = max_principle_sweep(&grid, &FracOrder::new(alpha)?, 100, 42)?;
        print!("alpha = {alpha}\n{}", report.to_csv());
    }
    Ok(())
}
