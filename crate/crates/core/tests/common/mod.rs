//! Oracles written independently of the library: closed forms evaluated
//! with their own Gamma function.

#![allow(dead_code)]

/// Lanczos approximation (g = 7, 9 terms), accurate to about 1e-15 on the
/// positive reals.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (k, c) in C.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `d/dx D^α x^β = Γ(β+1)/Γ(β+1−α) (β−α) x^{β−α−1}`.
pub fn power_flux(beta: f64, alpha: f64, x: f64) -> f64 {
    gamma(beta + 1.0) / gamma(beta + 1.0 - alpha) * (beta - alpha) * x.powf(beta - alpha - 1.0)
}

/// Left-anchored profile with flux −1: `−x^{1+α}/Γ(2+α) + C x^α/Γ(1+α)`.
pub fn rho_left(alpha: f64, c: f64, x: f64) -> f64 {
    -x.powf(1.0 + alpha) / gamma(2.0 + alpha) + c * x.powf(alpha) / gamma(1.0 + alpha)
}

/// Bottom profile with flux `Γ(2+α)` and its zero at `y`.
pub fn sigma(alpha: f64, y: f64, x: f64) -> f64 {
    y.powf(1.0 + alpha) / alpha - (1.0 + alpha) / alpha * y * x.powf(alpha) + x.powf(1.0 + alpha)
}

/// `J^s (6x) = 6 x^{1+s}/Γ(2+s)`.
pub fn rl_of_linear(s: f64, x: f64) -> f64 {
    6.0 * x.powf(1.0 + s) / gamma(2.0 + s)
}

/// Sup of `|a − b|`.
pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
}

#[test]
fn oracle_gamma_matches_known_values() {
    assert!((gamma(1.0) - 1.0).abs() < 1e-14);
    assert!((gamma(5.0) - 24.0).abs() < 1e-12);
    assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    assert!((gamma(2.5) - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
}
