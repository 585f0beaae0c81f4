//! The barrier profiles `ρ⁰`, `ρˡ` and `σ^y` and their discrete fluxes, which
//! should be close to −1, −1 and Γ(2+α) away from the endpoints.

use fracdiff::{default_rho_c, flux_divergence, rho, sigma, FracOrder, Grid1D, Result, Side};

fn main() -> Result<()> {
    let grid = Grid1D::new(1.0, 512)?;
    for alpha in [0.25, 0.5, 0.75] {
        let order = FracOrder::new(alpha)?;
        let c = default_rho_c(&order, 1.0);
        let r0 = flux_divergence(&grid.sample(|x| rho(Side::Left, c, &order, 1.0, x).unwrap())?, &order)?;
        let rl = flux_divergence(&grid.sample(|x| rho(Side::Right, c, &order, 1.0, x).unwrap())?, &order)?;
        let s = flux_divergence(&grid.sample(|x| sigma(0.5, &order, 1.0, x).unwrap())?, &order)?;
        let target = order.gamma_2pa();
        let (mut e0, mut el, mut es) = (0.0f64, 0.0f64, 0.0f64);
        for j in 1..grid.n_cells() {
            let x = grid.node(j);
            if (0.1..=0.9).contains(&x) {
                e0 = e0.max((r0[j] + 1.0).abs());
                el = el.max((rl[j] + 1.0).abs());
                es = es.max((s[j] - target).abs());
            }
        }
        println!("alpha = {alpha}: |W rho0 + 1| = {e0:.2e}, |W rhol + 1| = {el:.2e}, |W sigma - G(2+a)| = {es:.2e}");
    }
    Ok(())
}
