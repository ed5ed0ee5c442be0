//! Vertex-degree law `d_v ~ Bin(M, p)` with `M = C(n-1, k-1)`, and the
//! degree brackets α₁, α₂, α, β, β* built from it.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lambda::LambdaSeq;
use super::{ArithmeticConfig, ModelParams};
use crate::error::Result;

/// Which arithmetic produced a degree tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    /// Exact rational binomial sums.
    Exact,
    /// Binomial pmf summed in log space.
    Binomial,
    /// `M` overflows `f64`; Poisson(φ) limit of `Bin(M, φ/M)`.
    Poisson,
}

#[derive(Debug, Clone)]
pub enum DegreeLaw {
    Exact { m: u64, p: BigRational },
    Binomial { m: f64, p: f64 },
    Poisson { mean: f64 },
}

impl DegreeLaw {
    pub fn for_model(params: &ModelParams, config: &ArithmeticConfig) -> Self {
        match params.m_u64() {
            Some(m) if m <= config.exact_degree_cutoff => DegreeLaw::Exact {
                m,
                p: params.p_exact(),
            },
            _ => {
                let m = params.m_f64();
                if m.is_finite() {
                    DegreeLaw::Binomial { m, p: params.p() }
                } else {
                    DegreeLaw::Poisson { mean: params.phi() }
                }
            }
        }
    }

    pub fn kind(&self) -> LawKind {
        match self {
            DegreeLaw::Exact { .. } => LawKind::Exact,
            DegreeLaw::Binomial { .. } => LawKind::Binomial,
            DegreeLaw::Poisson { .. } => LawKind::Poisson,
        }
    }

    /// `tails[t] = Pr(d ≥ t)` for `t` up to the point where the tail is
    /// negligible; later entries are zero.
    pub fn tails_f64(&self) -> Vec<f64> {
        match self {
            DegreeLaw::Exact { .. } => self
                .tails_exact()
                .expect("exact law")
                .iter()
                .map(|r| r.to_f64().unwrap_or(0.0))
                .collect(),
            DegreeLaw::Binomial { m, p } => log_space_tails(Some(*m), *p, m * p),
            DegreeLaw::Poisson { mean } => log_space_tails(None, 0.0, *mean),
        }
    }

    pub fn tails_exact(&self) -> Option<Vec<BigRational>> {
        let DegreeLaw::Exact { m, p } = self else {
            return None;
        };
        let m = *m;
        let one = BigRational::one();
        let mut pmf = Vec::with_capacity(m as usize + 1);
        if p.is_zero() {
            pmf.push(one.clone());
        } else if *p == one {
            pmf.resize(m as usize, BigRational::zero());
            pmf.push(one.clone());
        } else {
            let q = &one - p;
            let odds = p / &q;
            let mut term = num_traits::pow::pow(q, m as usize);
            for j in 0..=m {
                pmf.push(term.clone());
                if j < m {
                    term = term * BigRational::from_integer((m - j).into())
                        / BigRational::from_integer((j + 1).into())
                        * &odds;
                }
            }
        }
        let mut tails = vec![BigRational::zero(); pmf.len()];
        let mut acc = BigRational::zero();
        for j in (0..pmf.len()).rev() {
            acc += &pmf[j];
            tails[j] = acc.clone();
        }
        Some(tails)
    }
}

// Pr(d >= t) from a log-space pmf walk; `m = None` means Poisson(mean).
fn log_space_tails(m: Option<f64>, p: f64, mean: f64) -> Vec<f64> {
    if mean <= 0.0 {
        return vec![1.0];
    }
    if let Some(m) = m {
        if p >= 1.0 {
            return vec![1.0; m as usize + 1];
        }
    }
    let (mut lp, step_const) = match m {
        Some(m) => (m * (-p).ln_1p(), p.ln() - (-p).ln_1p()),
        None => (-mean, mean.ln()),
    };
    let mut logs = Vec::new();
    let mut lmax = f64::NEG_INFINITY;
    let mut j = 0f64;
    loop {
        logs.push(lp);
        lmax = lmax.max(lp);
        if let Some(m) = m {
            if j >= m {
                break;
            }
        }
        if j > mean && lp < lmax - 800.0 {
            break;
        }
        let ratio = match m {
            Some(m) => ((m - j) / (j + 1.0)).ln(),
            None => -(j + 1.0).ln(),
        };
        lp += ratio + step_const;
        j += 1.0;
    }
    let mut tails = vec![0.0; logs.len()];
    let mut acc = 0.0;
    for i in (0..logs.len()).rev() {
        acc += (logs[i] - lmax).exp();
        tails[i] = acc;
    }
    let total = tails[0];
    for t in tails.iter_mut() {
        *t /= total;
    }
    tails
}

fn tail_at(tails: &[f64], t: usize) -> f64 {
    tails.get(t).copied().unwrap_or(0.0)
}

/// `max{t : Pr(d ≥ t) ≥ level}`, or 0 when only `t = 0` qualifies.
///
/// Serves both brackets: α₁ uses `level = ψ/n`, and since the tail is
/// nonincreasing, `β = min{t : Pr(d > t) < 1/(nψ)}` is the same index taken
/// at `level = 1/(nψ)`.
pub fn last_tail_index_at_least(tails: &[f64], level: f64) -> u64 {
    let mut t = 0usize;
    while tail_at(tails, t + 1) >= level {
        t += 1;
    }
    t as u64
}

/// `min{t : Λ(t) ≤ eps}` in floating point.
pub fn alpha2_f64(mbar: f64, q: f64, eps: f64) -> u64 {
    let mut seq = LambdaSeq::new(mbar, q);
    loop {
        let t = seq.position();
        let v = seq.next().expect("infinite sequence");
        if v.at_most(eps) {
            return t;
        }
    }
}

/// `min{t : Λ(t) ≤ eps}` in exact arithmetic.
pub fn alpha2_exact(mbar: &BigRational, q: &BigRational, eps: &BigRational) -> u64 {
    // Λ(t) = Λ(t-1) · (m̄-t+1)/t · q^{t-1}
    let mut value = BigRational::one();
    let mut t = 0u64;
    loop {
        if value <= *eps {
            return t;
        }
        t += 1;
        let tt = BigRational::from_integer(t.into());
        value = value * (mbar - &tt + BigRational::one()) / tt
            * num_traits::pow::pow(q.clone(), (t - 1) as usize);
        debug_assert!(t > 1 || value == *mbar);
        if value.is_negative() || value.is_zero() {
            return t;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaBeta {
    pub alpha1: u64,
    pub alpha2: u64,
    pub alpha: u64,
    pub beta: u64,
    /// `α ≤ β`.
    pub ordered: bool,
    pub law: LawKind,
    /// All four thresholds were decided in exact arithmetic.
    pub exact: bool,
}

/// Degree brackets:
/// α₁ = max{t : Pr(d_v ≥ t) ≥ ψ/n}, α₂ = min{t : Λ(t) ≤ ε_thr},
/// α = max{α₁, α₂}, β = min{t : Pr(d_v > t) < 1/(nψ)}.
pub fn compute_alpha_beta(params: &ModelParams) -> Result<AlphaBeta> {
    compute_alpha_beta_with(params, &ArithmeticConfig::default())
}

pub fn compute_alpha_beta_with(
    params: &ModelParams,
    config: &ArithmeticConfig,
) -> Result<AlphaBeta> {
    params.validate()?;
    let n = params.n as f64;
    let law = DegreeLaw::for_model(params, config);
    let exact_sets = params.exact_sets_ok(config);

    let (alpha1, beta, exact_law) = match law.tails_exact() {
        Some(tails) => {
            let hi = BigRational::from_float(params.psi / n).expect("finite");
            let lo = BigRational::from_float(1.0 / (n * params.psi)).expect("finite");
            let zero = BigRational::zero();
            let last_at_least = |level: &BigRational| {
                let mut t = 0usize;
                while tails.get(t + 1).unwrap_or(&zero) >= level {
                    t += 1;
                }
                t as u64
            };
            (last_at_least(&hi), last_at_least(&lo), true)
        }
        None => {
            let tails = law.tails_f64();
            (
                last_tail_index_at_least(&tails, params.psi / n),
                last_tail_index_at_least(&tails, 1.0 / (n * params.psi)),
                false,
            )
        }
    };

    let (alpha2, exact_lambda) = if exact_law && exact_sets {
        let q = super::intersection::intersection_probability_exact(params.n, params.k)?;
        let eps = BigRational::from_float(params.eps_thr).expect("finite");
        (alpha2_exact(&params.mbar_exact(), &q, &eps), true)
    } else {
        let q = super::intersection::intersection_probability(params.n, params.k)?;
        (alpha2_f64(params.mbar(), q, params.eps_thr), false)
    };

    let alpha = alpha1.max(alpha2);
    Ok(AlphaBeta {
        alpha1,
        alpha2,
        alpha,
        beta,
        ordered: alpha <= beta,
        law: law.kind(),
        exact: exact_law && exact_lambda,
    })
}

/// The closed-form upper bracket `β* = ⌈φ + η⌉`, where `η` is the positive
/// root of `x = √(2(φ + x/3)L)` with `L = ln n + ln ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaStar {
    pub beta_star: u64,
    pub eta: f64,
    /// `exp[-η²/(2(φ+η/3))]`, equal to `1/(nψ)` up to rounding.
    pub tail_bound: f64,
}

pub fn beta_star_bound(phi: f64, n: f64, psi: f64) -> BetaStar {
    beta_star_from_log(phi, n.ln() + psi.ln())
}

/// [`beta_star_bound`] with `L = ln(nψ)` supplied directly.
pub fn beta_star_from_log(phi: f64, l: f64) -> BetaStar {
    // x² - (2L/3)x - 2φL = 0
    let eta = l / 3.0 + (l * l / 9.0 + 2.0 * phi * l).sqrt();
    let tail_bound = if eta == 0.0 {
        1.0
    } else {
        (-eta * eta / (2.0 * (phi + eta / 3.0))).exp()
    };
    BetaStar {
        beta_star: (phi + eta).ceil() as u64,
        eta,
        tail_bound,
    }
}
