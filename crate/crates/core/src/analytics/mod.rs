//! Closed-form quantities of the random k-graph `H_k(n, p)`: intersection
//! probability, expected generic-clique counts, degree brackets, regime
//! parameters, tail bounds and the threshold estimate.

pub mod chernoff;
pub mod degree;
pub mod intersection;
pub mod lambda;
pub mod threshold;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial_big, binomial_u64, ln_binomial};
use crate::error::{Error, Result};

pub use chernoff::{chernoff_lower, chernoff_mult, chernoff_mult_relaxed, chernoff_upper};
pub use degree::{beta_star_bound, compute_alpha_beta, compute_alpha_beta_with, AlphaBeta, BetaStar};
pub use intersection::{
    intersection_probability, intersection_probability_exact, log_inv_q,
    perturbed_intersection_bound,
};
pub use lambda::{lambda_peak, lambda_prime_t, lambda_t};
pub use threshold::{threshold_estimate, threshold_estimate_with, ThresholdEstimate};

/// Cutoffs between exact rational and floating-point evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticConfig {
    /// Exact `q` and `Λ` when `C(n, k)` is at most this.
    pub exact_set_cutoff: u64,
    /// Exact binomial degree tails when `M = C(n-1, k-1)` is at most this.
    pub exact_degree_cutoff: u64,
}

impl Default for ArithmeticConfig {
    fn default() -> Self {
        Self {
            exact_set_cutoff: 1_000_000,
            exact_degree_cutoff: 200,
        }
    }
}

/// Edge density, given either as `p` or as the expected degree
/// `φ = p · C(n-1, k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    P(f64),
    Phi(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u64,
    pub k: u64,
    pub density: Density,
    /// Slowly growing auxiliary; defaults to `ln n`.
    pub psi: f64,
    /// Finite-n stand-in for the vanishing tolerances.
    pub eps_thr: f64,
    /// Regime constant `c < 1/4`; `ε = 1/4 - c`.
    pub c_regime: f64,
}

pub const DEFAULT_EPS_THR: f64 = 0.1;
pub const DEFAULT_C_REGIME: f64 = 0.2;

impl ModelParams {
    fn new(n: u64, k: u64, density: Density) -> Result<Self> {
        let params = Self {
            n,
            k,
            density,
            psi: (n as f64).ln(),
            eps_thr: DEFAULT_EPS_THR,
            c_regime: DEFAULT_C_REGIME,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_phi(n: u64, k: u64, phi: f64) -> Result<Self> {
        Self::new(n, k, Density::Phi(phi))
    }

    pub fn with_p(n: u64, k: u64, p: f64) -> Result<Self> {
        Self::new(n, k, Density::P(p))
    }

    pub fn psi(mut self, psi: f64) -> Self {
        self.psi = psi;
        self
    }

    pub fn eps_thr(mut self, eps: f64) -> Self {
        self.eps_thr = eps;
        self
    }

    pub fn c_regime(mut self, c: f64) -> Self {
        self.c_regime = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::domain("k must be positive"));
        }
        if self.n <= 2 * self.k {
            return Err(Error::domain(format!(
                "need n > 2k, got n={} k={}",
                self.n, self.k
            )));
        }
        if !(self.psi > 0.0 && self.psi.is_finite()) {
            return Err(Error::domain("psi must be positive"));
        }
        if !(self.eps_thr > 0.0 && self.eps_thr < 1.0) {
            return Err(Error::domain("eps_thr must lie in (0, 1)"));
        }
        if !(self.c_regime > 0.0 && self.c_regime < 0.25) {
            return Err(Error::domain("c_regime must lie in (0, 1/4)"));
        }
        match self.density {
            Density::P(p) if !(0.0..=1.0).contains(&p) => {
                Err(Error::domain(format!("p = {p} outside [0, 1]")))
            }
            Density::Phi(phi) if !(phi >= 0.0 && phi.is_finite()) => {
                Err(Error::domain(format!("phi = {phi} must be finite and >= 0")))
            }
            Density::Phi(phi) if phi > self.m_f64() * (1.0 + 1e-12) => Err(Error::domain(
                format!("phi = {phi} exceeds C(n-1,k-1) (p > 1)"),
            )),
            _ => Ok(()),
        }
    }

    /// `ε = 1/4 - c`.
    pub fn eps(&self) -> f64 {
        0.25 - self.c_regime
    }

    /// `M = C(n-1, k-1)` when it fits in a `u64`.
    pub fn m_u64(&self) -> Option<u64> {
        binomial_u64(self.n - 1, self.k - 1)
    }

    pub fn m_big(&self) -> BigUint {
        binomial_big(self.n - 1, self.k - 1)
    }

    pub fn ln_m(&self) -> f64 {
        match self.m_u64() {
            Some(m) => (m as f64).ln(),
            None => ln_binomial((self.n - 1) as f64, (self.k - 1) as f64),
        }
    }

    /// `M` as a float; infinite when it overflows.
    pub fn m_f64(&self) -> f64 {
        match self.m_u64() {
            Some(m) => m as f64,
            None => self.ln_m().exp(),
        }
    }

    pub fn phi(&self) -> f64 {
        match self.density {
            Density::Phi(phi) => phi,
            Density::P(p) => p * self.m_f64(),
        }
    }

    pub fn p(&self) -> f64 {
        match self.density {
            Density::P(p) => p,
            Density::Phi(phi) => (phi / self.m_f64()).min(1.0),
        }
    }

    pub fn p_exact(&self) -> BigRational {
        match self.density {
            Density::P(p) => BigRational::from_float(p).expect("finite p"),
            Density::Phi(phi) => {
                BigRational::from_float(phi).expect("finite phi")
                    / BigRational::from_integer(BigInt::from(self.m_big()))
            }
        }
    }

    pub fn phi_exact(&self) -> BigRational {
        match self.density {
            Density::Phi(phi) => BigRational::from_float(phi).expect("finite phi"),
            Density::P(_) => self.p_exact() * BigRational::from_integer(BigInt::from(self.m_big())),
        }
    }

    /// `m̄ = φ n / k`, the expected number of edges.
    pub fn mbar(&self) -> f64 {
        self.phi() * self.n as f64 / self.k as f64
    }

    pub fn mbar_exact(&self) -> BigRational {
        self.phi_exact() * BigRational::new(BigInt::from(self.n), BigInt::from(self.k))
    }

    pub(crate) fn exact_sets_ok(&self, config: &ArithmeticConfig) -> bool {
        binomial_u64(self.n, self.k).is_some_and(|c| c <= config.exact_set_cutoff)
    }
}

/// Quantities derived directly from `(n, k, φ, ψ)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivedQuantities {
    /// `C(n-1, k-1)` in decimal.
    #[serde(rename = "M")]
    pub m: String,
    pub mbar: f64,
    pub theta: f64,
    pub q: f64,
    /// Exact `q` as `"num/den"` when `C(n, k)` is under the exact cutoff.
    pub q_exact: Option<String>,
    pub m0: f64,
    pub w: f64,
    pub qhat: f64,
}

pub fn derived_quantities(params: &ModelParams) -> Result<DerivedQuantities> {
    derived_quantities_with(params, &ArithmeticConfig::default())
}

pub fn derived_quantities_with(
    params: &ModelParams,
    config: &ArithmeticConfig,
) -> Result<DerivedQuantities> {
    params.validate()?;
    let (n, k) = (params.n, params.k);
    let q = intersection_probability(n, k)?;
    let theta = intersection::disjoint_probability(n, k)?;
    let q_exact = if params.exact_sets_ok(config) {
        Some(intersection_probability_exact(n, k)?.to_string())
    } else {
        None
    };
    let mbar = params.mbar();
    let phi = params.phi();
    let nf = n as f64;
    let kf = k as f64;
    let w = (phi * phi * kf * kf / nf).max(6.0 * nf.ln());
    let qhat = (1.0 + 2.0 * kf * kf * w / (q * nf * nf)) * q;
    Ok(DerivedQuantities {
        m: params.m_big().to_string(),
        mbar,
        theta,
        q,
        q_exact,
        m0: mbar + params.psi * mbar.sqrt(),
        w,
        qhat,
    })
}

/// Regime parameters of the small-φ analysis and its large-φ reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    /// `ln³n / ln(1/q)`.
    pub phi_star: f64,
    pub alpha: u64,
    /// `min{α, φ*/3}`.
    pub gamma: f64,
    /// `(1 - ε)γ`.
    pub tau: f64,
    /// `max{√(ln n)/ln(1/q), 2√(ln n/ln(1/q))}`.
    pub lambda: f64,
    /// `ln(1/q) / (2 ln n)`.
    pub xi: f64,
    /// `ξφ`.
    pub r0: f64,
    /// `γ/ε`, the cap on the number of degree-3 vertices.
    pub zeta_cap: f64,
    pub eps: f64,
}

/// Regime parameters from raw inputs (`ln n` and `ln(1/q)` given directly,
/// so astronomically large `n` can be handled).
pub fn regime_from(ln_n: f64, log_inv_q: f64, alpha: u64, phi: f64, eps: f64) -> Result<RegimeParams> {
    if !log_inv_q.is_finite() || log_inv_q <= 0.0 {
        return Err(Error::Degenerate("q = 1 makes ln(1/q) vanish".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("eps must lie in (0, 1)"));
    }
    let phi_star = ln_n.powi(3) / log_inv_q;
    let gamma = (alpha as f64).min(phi_star / 3.0);
    let xi = log_inv_q / (2.0 * ln_n);
    Ok(RegimeParams {
        phi_star,
        alpha,
        gamma,
        tau: (1.0 - eps) * gamma,
        lambda: (ln_n.sqrt() / log_inv_q).max(2.0 * (ln_n / log_inv_q).sqrt()),
        xi,
        r0: xi * phi,
        zeta_cap: gamma / eps,
        eps,
    })
}

pub fn regime_params(params: &ModelParams) -> Result<RegimeParams> {
    let ab = compute_alpha_beta(params)?;
    regime_params_with_alpha(params, ab.alpha)
}

pub fn regime_params_with_alpha(params: &ModelParams, alpha: u64) -> Result<RegimeParams> {
    params.validate()?;
    regime_from(
        (params.n as f64).ln(),
        log_inv_q(params.n, params.k)?,
        alpha,
        params.phi(),
        params.eps(),
    )
}

/// One row of the Λ table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub t: u64,
    pub lambda: f64,
    pub lambda_prime: f64,
}

/// Flat analytic report; field names follow the usual symbols.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub n: u64,
    pub k: u64,
    pub p: f64,
    pub phi: f64,
    pub psi: f64,
    pub eps_thr: f64,
    pub c_regime: f64,
    #[serde(rename = "M")]
    pub m: String,
    pub mbar: f64,
    pub q: f64,
    pub q_exact: Option<String>,
    pub theta: f64,
    pub m0: f64,
    pub w: f64,
    pub qhat: f64,
    pub lambda_t: Vec<LambdaRow>,
    pub lambda_peak: u64,
    pub alpha1: u64,
    pub alpha2: u64,
    pub alpha: u64,
    pub beta: u64,
    pub alpha_le_beta: bool,
    pub degree_law: degree::LawKind,
    pub exact_thresholds: bool,
    pub beta_star: u64,
    pub eta: f64,
    pub phi_star: f64,
    pub gamma: f64,
    pub tau: f64,
    pub lambda: f64,
    pub xi: f64,
    pub r0: f64,
    pub zeta_cap: f64,
    pub phi0: Option<f64>,
    pub phi0_reference: f64,
}

/// Everything the analytics module knows about one parameter point.
/// `lambda_rows` bounds the Λ table; `with_threshold` adds the (slower)
/// threshold search.
pub fn analytic_report(
    params: &ModelParams,
    lambda_rows: u64,
    with_threshold: bool,
) -> Result<AnalyticReport> {
    let d = derived_quantities(params)?;
    let ab = compute_alpha_beta(params)?;
    let regime = regime_params_with_alpha(params, ab.alpha)?;
    let bs = beta_star_bound(params.phi(), params.n as f64, params.psi);
    let lambda_t: Vec<LambdaRow> = lambda::LambdaSeq::new(d.mbar, d.q)
        .take(lambda_rows as usize + 1)
        .enumerate()
        .map(|(t, v)| LambdaRow {
            t: t as u64,
            lambda: v.value(),
            lambda_prime: if t <= 2 { 0.0 } else { v.value() },
        })
        .collect();
    let threshold = if with_threshold {
        Some(threshold_estimate_with(
            params.n,
            params.k,
            params.eps_thr,
            params.psi,
        )?)
    } else {
        None
    };
    let phi0_reference = (params.n as f64).ln() / log_inv_q(params.n, params.k)?;
    Ok(AnalyticReport {
        n: params.n,
        k: params.k,
        p: params.p(),
        phi: params.phi(),
        psi: params.psi,
        eps_thr: params.eps_thr,
        c_regime: params.c_regime,
        m: d.m,
        mbar: d.mbar,
        q: d.q,
        q_exact: d.q_exact,
        theta: d.theta,
        m0: d.m0,
        w: d.w,
        qhat: d.qhat,
        lambda_t,
        lambda_peak: if d.mbar > 0.0 { lambda_peak(d.mbar, d.q) } else { 0 },
        alpha1: ab.alpha1,
        alpha2: ab.alpha2,
        alpha: ab.alpha,
        beta: ab.beta,
        alpha_le_beta: ab.ordered,
        degree_law: ab.law,
        exact_thresholds: ab.exact,
        beta_star: bs.beta_star,
        eta: bs.eta,
        phi_star: regime.phi_star,
        gamma: regime.gamma,
        tau: regime.tau,
        lambda: regime.lambda,
        xi: regime.xi,
        r0: regime.r0,
        zeta_cap: regime.zeta_cap,
        phi0: threshold.map(|t| t.phi0),
        phi0_reference,
    })
}
