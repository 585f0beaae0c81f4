use crate::error::{domain, Result};
use crate::special::gamma_unchecked;

/// Fractional order α ∈ (0, 1) with the Gamma values every operator needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    gamma_1ma: f64,
    gamma_2ma: f64,
    gamma_1pa: f64,
    gamma_2pa: f64,
    c_alpha: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("fractional order must lie in (0, 1), got {alpha}"));
        }
        let gamma_1ma = gamma_unchecked(1.0 - alpha);
        Ok(Self {
            alpha,
            gamma_1ma,
            gamma_2ma: gamma_unchecked(2.0 - alpha),
            gamma_1pa: gamma_unchecked(1.0 + alpha),
            gamma_2pa: gamma_unchecked(2.0 + alpha),
            c_alpha: alpha * (alpha + 1.0) / gamma_1ma,
        })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Γ(1 − α)
    #[inline]
    pub fn gamma_1ma(&self) -> f64 {
        self.gamma_1ma
    }

    /// Γ(2 − α)
    #[inline]
    pub fn gamma_2ma(&self) -> f64 {
        self.gamma_2ma
    }

    /// Γ(1 + α)
    #[inline]
    pub fn gamma_1pa(&self) -> f64 {
        self.gamma_1pa
    }

    /// Γ(2 + α)
    #[inline]
    pub fn gamma_2pa(&self) -> f64 {
        self.gamma_2pa
    }

    /// α(α + 1)/Γ(1 − α), the prefactor of the singular integral.
    #[inline]
    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_fn;

    #[test]
    fn rejects_endpoints() {
        for a in [0.0, 1.0, -0.2, 1.3, f64::NAN] {
            assert!(FracOrder::new(a).is_err(), "alpha = {a}");
        }
    }

    #[test]
    fn cached_values_match_fresh_evaluation() {
        for k in 1..100 {
            let a = k as f64 / 100.0;
            let o = FracOrder::new(a).unwrap();
            let g1 = gamma_fn(1.0 - a).unwrap();
            assert!(((o.gamma_1ma() - g1) / g1).abs() < 1e-14);
            let g2 = gamma_fn(2.0 - a).unwrap();
            assert!(((o.gamma_2ma() - g2) / g2).abs() < 1e-14);
            assert!(o.c_alpha() > 0.0 && o.gamma_1ma() > 0.0);
        }
    }
}
