//! Discrete flux divergence of `x^β` against the exact power rule, with the
//! observed convergence order under refinement.

use fracdiff::{flux_divergence, power_rule_flux, FracOrder, Grid1D, Result};

fn max_rel_error(beta: f64, order: &FracOrder, n: usize) -> Result<f64> {
    let grid = Grid1D::new(1.0, n)?;
    let u = grid.sample(|x| x.powf(beta))?;
    let d = flux_divergence(&u, order)?;
    let mut worst = 0.0f64;
    for j in 1..n {
        let x = grid.node(j);
        if x >= 0.1 {
            let exact = power_rule_flux(beta, order, x)?;
            worst = worst.max(((d[j] - exact) / exact).abs());
        }
    }
    Ok(worst)
}

fn main() -> Result<()> {
    println!("{:>5} {:>5} {:>11} {:>11} {:>11} {:>6}", "alpha", "beta", "N=128", "N=256", "N=512", "order");
    for alpha in [0.25, 0.5, 0.75] {
        let order = FracOrder::new(alpha)?;
        for beta in [1.0 + alpha, 2.5, 3.0] {
            let e: Vec<f64> = [128, 256, 512]
                .into_iter()
                .map(|n| max_rel_error(beta, &order, n))
                .collect::<Result<_>>()?;
            let rate = (e[0] / e[2]).log2() / 2.0;
            println!("{alpha:>5} {beta:>5} {:>11.3e} {:>11.3e} {:>11.3e} {rate:>6.2}", e[0], e[1], e[2]);
        }
    }
    Ok(())
}
