//! Randomised invariants of the operator, the step and the parser.

mod common;

use std::sync::Arc;

use fracdiff::{build_weights, flux_divergence, step, Expr, Field, FracOrder, Grid1D, ProblemSpec};
use proptest::prelude::*;

fn field(n: usize, values: Vec<f64>) -> Field {
    Field::new(Grid1D::new(1.0, n).unwrap(), values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn affine_data_are_exact(alpha in 0.05f64..0.95, a in -5.0f64..5.0, b in -5.0f64..5.0, n in 8usize..200) {
        let grid = Grid1D::new(1.0, n).unwrap();
        let order = FracOrder::new(alpha).unwrap();
        let c = flux_divergence(&grid.sample(|_| a).unwrap(), &order).unwrap();
        prop_assert!(c.values().iter().all(|&v| v == 0.0));
        let d = flux_divergence(&grid.sample(|x| a + b * x).unwrap(), &order).unwrap();
        for j in 1..n {
            let x = grid.node(j);
            let exact = b * x.powf(-alpha) / common::gamma(1.0 - alpha);
            let scale = (a.abs() + b.abs()).max(1.0) * (n as f64).powf(1.0 + alpha);
            prop_assert!((d[j] - exact).abs() <= 1e-12 * scale, "{} vs {exact}", d[j]);
        }
    }

    #[test]
    fn fast_and_naive_apply_agree(alpha in 0.05f64..0.95, n in 40usize..300, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u = field(n, (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect());
        let w = build_weights(u.grid(), &FracOrder::new(alpha).unwrap()).unwrap();
        let (a, b) = (w.apply_naive(&u).unwrap(), w.apply_fast(&u).unwrap());
        let gap = a.values().iter().zip(b.values()).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        prop_assert!(gap <= 1e-11 * a.max_abs().max(1.0));
    }

    #[test]
    fn step_preserves_order(alpha in 0.05f64..0.95, n in 8usize..100, seed in any::<u64>(), safety in 0.1f64..1.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let lo: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let hi: Vec<f64> = lo.iter().map(|v| v + rng.random_range(0.0..0.5)).collect();
        let order = FracOrder::new(alpha).unwrap();
        let spec = ProblemSpec::new(order, 1.0, 1.0, Arc::new(|x, _| x.sin()), Arc::new(|_, _| 0.0)).unwrap();
        let w = build_weights(&Grid1D::new(1.0, n).unwrap(), &order).unwrap();
        let dt = safety / w.diag_max();
        let a = step(&field(n, lo), 0.0, dt, &w, &spec).unwrap();
        let b = step(&field(n, hi), 0.0, dt, &w, &spec).unwrap();
        for j in 0..=n {
            prop_assert!(a[j] <= b[j]);
        }
    }

    #[test]
    fn printed_expressions_parse_back(a in -10.0f64..10.0, b in 0.1f64..5.0, x in 0.0f64..1.0, t in 0.0f64..1.0) {
        let text = format!("max({a} * x, t) - abs(x - {b})^2 / {b} + sin(pi*t)");
        let e = Expr::parse(&text).unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(e.eval(x, t).to_bits(), again.eval(x, t).to_bits());
    }
}
