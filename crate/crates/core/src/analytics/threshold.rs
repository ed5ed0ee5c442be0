//! Finite-n estimate of the EKR threshold in expected-degree units.
//!
//! At a given φ the generic-clique condition is evaluated at the typical
//! maximum degree: with α₁(φ) the a.s. lower bracket for Δ, the condition
//! holds when `Λ'_φ(α₁(φ)) ≤ ε_thr`, i.e. when α₁ ≤ 2 or α₁ ≥ α₂. The
//! threshold is the least φ₀ above which the condition holds everywhere
//! (the non-monotone region below is skipped, as for `f_{n,k}(p) ≥ 1/2`).

use serde::{Deserialize, Serialize};

use super::degree::{alpha2_f64, last_tail_index_at_least, DegreeLaw, LawKind};
use super::intersection::{intersection_probability, log_inv_q};
use crate::combin::{binomial_u64, ln_binomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub n: u64,
    pub k: u64,
    pub eps_thr: f64,
    pub psi: f64,
    pub phi0: f64,
    /// `ln n / ln(1/q)`.
    pub reference: f64,
    /// Degree law used at φ₀.
    pub law: LawKind,
}

/// Evaluates the condition at single φ values for fixed `(n, k)`.
#[derive(Debug, Clone)]
pub struct GenericCondition {
    n: u64,
    k: u64,
    q: f64,
    psi: f64,
    eps_thr: f64,
    m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionAt {
    pub alpha1: u64,
    pub alpha2: u64,
    pub holds: bool,
}

impl GenericCondition {
    pub fn new(n: u64, k: u64, psi: f64, eps_thr: f64) -> Result<Self> {
        if n <= 2 * k {
            return Err(Error::domain(format!("need n > 2k, got n={n}, k={k}")));
        }
        if !(eps_thr > 0.0 && eps_thr < 1.0) || psi <= 0.0 {
            return Err(Error::domain("need 0 < eps_thr < 1 and psi > 0"));
        }
        let q = intersection_probability(n, k)?;
        let m = match binomial_u64(n - 1, k - 1) {
            Some(m) => m as f64,
            None => ln_binomial((n - 1) as f64, (k - 1) as f64).exp(),
        };
        Ok(Self {
            n,
            k,
            q,
            psi,
            eps_thr,
            m,
        })
    }

    /// Largest admissible φ (`p = 1`).
    pub fn phi_max(&self) -> f64 {
        self.m
    }

    fn law(&self, phi: f64) -> DegreeLaw {
        if self.m.is_finite() {
            DegreeLaw::Binomial {
                m: self.m,
                p: (phi / self.m).min(1.0),
            }
        } else {
            DegreeLaw::Poisson { mean: phi }
        }
    }

    pub fn at(&self, phi: f64) -> ConditionAt {
        let tails = self.law(phi).tails_f64();
        let alpha1 = last_tail_index_at_least(&tails, self.psi / self.n as f64);
        let mbar = phi * self.n as f64 / self.k as f64;
        let alpha2 = alpha2_f64(mbar, self.q, self.eps_thr);
        ConditionAt {
            alpha1,
            alpha2,
            holds: alpha1 <= 2 || alpha1 >= alpha2,
        }
    }
}

const GRID_RATIO: f64 = 1.01;
const REL_TOL: f64 = 1e-6;

pub fn threshold_estimate(n: u64, k: u64, eps_thr: f64) -> Result<ThresholdEstimate> {
    threshold_estimate_with(n, k, eps_thr, (n as f64).ln())
}

pub fn threshold_estimate_with(
    n: u64,
    k: u64,
    eps_thr: f64,
    psi: f64,
) -> Result<ThresholdEstimate> {
    let cond = GenericCondition::new(n, k, psi, eps_thr)?;
    let liq = log_inv_q(n, k)?;
    if liq <= 0.0 {
        return Err(Error::Degenerate("q = 1".into()));
    }
    let reference = (n as f64).ln() / liq;
    let phi_max = cond.phi_max();

    // geometric scan for the last failing grid point
    let lo_start = 1e-3 * reference.min(1.0);
    let mut hi = (16.0 * reference.max(1.0)).min(phi_max);
    let mut last_fail: Option<f64> = None;
    let mut phi = lo_start;
    loop {
        while phi <= hi {
            if !cond.at(phi).holds {
                last_fail = Some(phi);
            }
            phi *= GRID_RATIO;
        }
        // the top of the scan must hold before we stop extending it
        match last_fail {
            Some(f) if f * GRID_RATIO > hi && hi < phi_max => hi = (2.0 * hi).min(phi_max),
            _ => break,
        }
    }

    let phi0 = match last_fail {
        None => 0.0,
        Some(fail) => {
            let mut bad = fail;
            let mut good = (fail * GRID_RATIO).min(phi_max);
            while good - bad > REL_TOL * good {
                let mid = 0.5 * (bad + good);
                if cond.at(mid).holds {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        }
    };
    Ok(ThresholdEstimate {
        n,
        k,
        eps_thr,
        psi,
        phi0,
        reference,
        law: if phi_max.is_finite() {
            LawKind::Binomial
        } else {
            LawKind::Poisson
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_value_formula() {
        let t = threshold_estimate(30, 3, 0.1).unwrap();
        let q = intersection_probability(30, 3).unwrap();
        assert!((t.reference - 30f64.ln() / (1.0 / q).ln()).abs() < 1e-12);
        assert!(t.phi0 > 0.0);
    }

    #[test]
    fn condition_holds_just_above_and_fails_just_below() {
        let t = threshold_estimate(60, 3, 0.1).unwrap();
        let c = GenericCondition::new(60, 3, 60f64.ln(), 0.1).unwrap();
        assert!(c.at(t.phi0).holds);
        assert!(!c.at(t.phi0 * (1.0 - 1e-5)).holds);
    }

    #[test]
    fn rejects_bad_domain() {
        assert!(threshold_estimate(6, 3, 0.1).is_err());
        assert!(threshold_estimate(30, 3, 1.5).is_err());
    }
}
