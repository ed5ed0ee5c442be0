//! Chernoff-type tail bounds for sums of Ber(p) indicators. They hold for
//! independent indicators and, unchanged, for negatively associated ones.

/// `Pr(X > μ + λ) < exp[-λ² / (2(μ + λ/3))]`.
pub fn chernoff_upper(mu: f64, lam: f64) -> f64 {
    if lam <= 0.0 {
        return 1.0;
    }
    (-lam * lam / (2.0 * (mu + lam / 3.0))).exp()
}

/// `Pr(X < μ - λ) < exp[-λ² / (2μ)]`; zero when `μ = 0` and `λ > 0`.
pub fn chernoff_lower(mu: f64, lam: f64) -> f64 {
    if lam <= 0.0 {
        return 1.0;
    }
    if mu <= 0.0 {
        return 0.0;
    }
    (-lam * lam / (2.0 * mu)).exp()
}

/// `Pr(X > Kμ) < [e^{K-1} K^{-K}]^μ` for `K > 1`.
pub fn chernoff_mult(mu: f64, k: f64) -> f64 {
    debug_assert!(k > 1.0);
    (mu * (k - 1.0 - k * k.ln())).exp()
}

/// The multiplicative bound when only `E X = ρ ≤ μ` is known. The value is
/// the same as [`chernoff_mult`]`(μ, K)`; the exact bound obtained by
/// rescaling to `ρ`, `e^{Kμ-ρ} K^{-Kμ} (μ/ρ)^{-Kμ}`, is returned alongside
/// and is never larger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxedBound {
    pub value: f64,
    pub rescaled: f64,
}

pub fn chernoff_mult_relaxed(rho: f64, mu: f64, k: f64) -> RelaxedBound {
    debug_assert!(rho <= mu);
    let value = chernoff_mult(mu, k);
    let rescaled = if rho <= 0.0 {
        0.0
    } else {
        let km = k * mu;
        (km - rho - km * k.ln() - km * (mu / rho).ln()).exp()
    };
    RelaxedBound { value, rescaled }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let up = chernoff_upper(100.0, 30.0);
        assert!((up - (-900.0f64 / 220.0).exp()).abs() < 1e-15);
        assert!((up - 1.67e-2).abs() < 1e-4);
        let m = chernoff_mult(10.0, 2.0);
        assert!((m - (std::f64::consts::E / 4.0).powi(10)).abs() < 1e-15);
        assert!((m - 2.1e-2).abs() < 1e-3);
        assert_eq!(chernoff_upper(5.0, 0.0), 1.0);
        assert_eq!(chernoff_lower(0.0, 1.0), 0.0);
        assert!((chernoff_lower(50.0, 10.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn relaxed_bound_collapses_at_rho_equal_mu() {
        let r = chernoff_mult_relaxed(7.0, 7.0, 3.0);
        assert!((r.value - r.rescaled).abs() < 1e-15);
    }

    #[test]
    fn relaxed_rescaled_is_decreasing_in_mu() {
        let rho = 4.0;
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let mu = rho + 0.25 * i as f64;
            let r = chernoff_mult_relaxed(rho, mu, 2.5);
            assert!(r.rescaled <= prev);
            assert!(r.rescaled <= r.value * (1.0 + 1e-12));
            prev = r.rescaled;
        }
    }
}
