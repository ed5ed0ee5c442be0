//! Intersection probability of two independent uniform k-subsets of `[n]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::combin::falling_factorial_big;
use crate::error::{Error, Result};

fn check(n: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    if n < 2 * k {
        return Err(Error::domain(format!(
            "need n >= 2k for two disjoint {k}-sets to fit in [{n}]"
        )));
    }
    Ok(())
}

/// `ϑ = (n-k)_k / (n)_k`, the probability that two independent uniform
/// k-sets are disjoint, as a reduced fraction.
pub fn disjoint_probability_exact(n: u64, k: u64) -> Result<BigRational> {
    check(n, k)?;
    Ok(BigRational::new(
        BigInt::from(falling_factorial_big(n - k, k)),
        BigInt::from(falling_factorial_big(n, k)),
    ))
}

/// `q = 1 - ϑ` as a reduced fraction.
pub fn intersection_probability_exact(n: u64, k: u64) -> Result<BigRational> {
    Ok(BigRational::one() - disjoint_probability_exact(n, k)?)
}

/// `ln ϑ = Σ_{i<k} ln(1 - k/(n-i))`.
fn ln_theta(n: u64, k: u64) -> f64 {
    (0..k)
        .map(|i| (-(k as f64) / (n - i) as f64).ln_1p())
        .sum()
}

pub fn disjoint_probability(n: u64, k: u64) -> Result<f64> {
    check(n, k)?;
    Ok(ln_theta(n, k).exp())
}

/// `q` in floating point. Computed as `-expm1(ln ϑ)` so that small `q`
/// (the `k ≪ √n` regime) keeps full relative precision.
pub fn intersection_probability(n: u64, k: u64) -> Result<f64> {
    check(n, k)?;
    Ok(-ln_theta(n, k).exp_m1())
}

/// Like [`intersection_probability`] but returns `q = 1` for `n < 2k`
/// (no disjoint pair exists) instead of a domain error.
pub fn intersection_probability_degenerate(n: u64, k: u64) -> Result<f64> {
    if k > 0 && n < 2 * k && n >= k {
        return Ok(1.0);
    }
    intersection_probability(n, k)
}

/// `ln(1/q)`, accurate both for `q` near 0 and `q` near 1.
pub fn log_inv_q(n: u64, k: u64) -> Result<f64> {
    check(n, k)?;
    let lt = ln_theta(n, k);
    // ln(1/q) = -ln(1 - ϑ)
    Ok(-(-lt.exp()).ln_1p())
}

/// Upper bound on the probability that a uniform k-set `A` meets `B \ W`,
/// conditioned on the trace `A ∩ W`, for `|W| = w_size`:
/// `(1 + 2k²w / (q n²)) q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedBound {
    pub value: f64,
    /// Set when `w_size · ln n ≥ n`, outside the range where the bound is
    /// meant to be close to `q`.
    pub large_w: bool,
}

pub fn perturbed_intersection_bound(n: u64, k: u64, w_size: u64) -> Result<PerturbedBound> {
    let q = intersection_probability(n, k)?;
    let nf = n as f64;
    let kf = k as f64;
    let wf = w_size as f64;
    let value = if w_size == 0 {
        q
    } else {
        (1.0 + 2.0 * kf * kf * wf / (q * nf * nf)) * q
    };
    Ok(PerturbedBound {
        value,
        large_w: wf * nf.ln() >= nf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn frac(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn small_exact_values() {
        assert_eq!(intersection_probability_exact(4, 2).unwrap(), frac(5, 6));
        assert_eq!(intersection_probability_exact(6, 3).unwrap(), frac(19, 20));
    }

    #[test]
    fn n_equal_2k_is_strictly_below_one() {
        for k in 1..8 {
            let q = intersection_probability_exact(2 * k, k).unwrap();
            assert!(q < BigRational::one());
            assert!(intersection_probability(2 * k, k).unwrap() < 1.0);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            intersection_probability(5, 3),
            Err(Error::Domain(_))
        ));
        assert!(intersection_probability_exact(3, 0).is_err());
        assert_eq!(intersection_probability_degenerate(5, 3).unwrap(), 1.0);
    }

    #[test]
    fn float_agrees_with_exact() {
        for (n, k) in [(9, 2), (20, 5), (50, 7)] {
            let exact = intersection_probability_exact(n, k).unwrap();
            let e = exact.to_f64().unwrap();
            assert!((intersection_probability(n, k).unwrap() - e).abs() < 1e-14);
        }
    }

    #[test]
    fn small_k_regime_tracks_k2_over_n() {
        // q ~ k²/n when k ≪ √n
        let n = 1_000_000;
        let q = intersection_probability(n, 10).unwrap();
        assert!((q / (100.0 / n as f64) - 1.0).abs() < 0.01);
        let liq = log_inv_q(n, 10).unwrap();
        assert!((liq + q.ln()).abs() < 1e-12);
    }

    #[test]
    fn perturbed_bound_zero_w_is_q() {
        let b = perturbed_intersection_bound(30, 3, 0).unwrap();
        assert_eq!(b.value, intersection_probability(30, 3).unwrap());
        assert!(!b.large_w);
        assert!(perturbed_intersection_bound(12, 3, 10).unwrap().large_w);
    }
}
