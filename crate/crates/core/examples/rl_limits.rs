//! Riemann–Liouville integrals `J^{1−α} f″` tend to the running integral as
//! `α → 0` and to `f″` itself as `α → 1`.

use fracdiff::{rl_limit_probe, Grid1D, Result, RlFunction};

fn main() -> Result<()> {
    let grid = Grid1D::new(1.0, 256)?;
    for f in [RlFunction::Cubic, RlFunction::Square] {
        let r = rl_limit_probe(f, &grid, &[0.2, 0.1, 0.05, 0.02, 0.01], &[0.8, 0.9, 0.95, 0.98, 0.99])?;
        print!("{}\n{}", f.name(), r.to_csv());
    }
    Ok(())
}
