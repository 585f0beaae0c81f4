//! Operator application through the FFT against the direct sum.

use std::time::Instant;

use fracdiff::{build_weights, Field, FracOrder, Grid1D, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let order = FracOrder::new(0.5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [1024, 4096, 16384] {
        let grid = Grid1D::new(1.0, n)?;
        let w = build_weights(&grid, &order)?;
        let u = Field::new(grid, (0..=n).map(|_| rng.random_range(-1.0..=1.0)).collect())?;
        let start = Instant::now();
        let slow = w.apply_naive(&u)?;
        let t_naive = start.elapsed();
        let start = Instant::now();
        let fast = w.apply_fast(&u)?;
        let t_fast = start.elapsed();
        let gap = slow
            .values()
            .iter()
            .zip(fast.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / slow.max_abs();
        println!("N = {n:>5}: naive {t_naive:>10.2?}  fast {t_fast:>10.2?}  relative gap {gap:.2e}");
    }
    Ok(())
}
