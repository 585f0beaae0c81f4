//! Solves the hat problem and prints a few snapshots of the solution.

use fracdiff::{solve, FracOrder, Grid1D, Preset, Result};

fn main() -> Result<()> {
    let order = FracOrder::new(0.5)?;
    let spec = Preset::LipschitzHat.build(order, 1.0, 0.25)?;
    let grid = Grid1D::new(1.0, 128)?;
    let rec = solve(&spec, &grid, 0.9)?;
    let meta = rec.meta();
    println!("{} steps of dt = {:.3e}, slopes {}", meta.n_steps, meta.dt, meta.slope_mode);
    let picks = [0, rec.times().len() / 4, rec.times().len() / 2, rec.times().len() - 1];
    for m in picks {
        let u = &rec.frames()[m];
        let row: Vec<String> = [0.0, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&x| format!("{:.4}", u.interpolate(x)))
            .collect();
        println!("t = {:.4}: u(0, 1/4, 1/2, 3/4, 1) = {}", rec.times()[m], row.join(", "));
    }
    Ok(())
}
