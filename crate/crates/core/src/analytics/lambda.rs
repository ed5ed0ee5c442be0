//! The expected generic-clique count `Λ(t) = C(m̄, t) q^{C(t,2)}` and the
//! truncated `Λ'(t)`, which vanishes for `t ≤ 2`.
//!
//! `m̄` is real, so `C(m̄, t) = (m̄)_t / t!` and `Λ(t)` goes negative once
//! `t > m̄ + 1` with non-integer `m̄`. Signed values are returned as-is.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// `Λ(t)` kept as `sign · exp(ln_abs)` so large `m̄` does not overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// -1, 0 or 1.
    pub sign: i8,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog {
        sign: 1,
        ln_abs: 0.0,
    };
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => s as f64 * self.ln_abs.exp(),
        }
    }

    /// `self ≤ x` for a positive threshold `x`.
    pub fn at_most(&self, x: f64) -> bool {
        debug_assert!(x > 0.0);
        self.sign <= 0 || self.ln_abs <= x.ln()
    }
}

/// Walks `Λ(0), Λ(1), ...` using `Λ(t)/Λ(t-1) = ((m̄-t+1)/t) q^{t-1}`.
#[derive(Debug, Clone)]
pub struct LambdaSeq {
    mbar: f64,
    ln_q: f64,
    t: u64,
    current: SignedLog,
}

impl LambdaSeq {
    pub fn new(mbar: f64, q: f64) -> Self {
        Self {
            mbar,
            ln_q: q.ln(),
            t: 0,
            current: SignedLog::ONE,
        }
    }

    /// Index of the value the next call to `next` returns.
    pub fn position(&self) -> u64 {
        self.t
    }
}

impl Iterator for LambdaSeq {
    type Item = SignedLog;

    fn next(&mut self) -> Option<SignedLog> {
        let out = self.current;
        self.t += 1;
        let t = self.t as f64;
        if self.current.sign != 0 {
            let factor = self.mbar - t + 1.0;
            let q_part = if self.t == 1 { 0.0 } else { (t - 1.0) * self.ln_q };
            if factor == 0.0 || q_part == f64::NEG_INFINITY {
                self.current = SignedLog::ZERO;
            } else {
                let sign = if factor < 0.0 {
                    -self.current.sign
                } else {
                    self.current.sign
                };
                self.current = SignedLog {
                    sign,
                    ln_abs: self.current.ln_abs + factor.abs().ln() - t.ln() + q_part,
                };
            }
        }
        Some(out)
    }
}

pub fn ln_lambda_t(mbar: f64, q: f64, t: u64) -> SignedLog {
    let mut seq = LambdaSeq::new(mbar, q);
    let mut out = SignedLog::ONE;
    for _ in 0..=t {
        out = seq.next().expect("infinite sequence");
    }
    out
}

pub fn lambda_t(mbar: f64, q: f64, t: u64) -> f64 {
    ln_lambda_t(mbar, q, t).value()
}

pub fn lambda_prime_t(mbar: f64, q: f64, t: u64) -> f64 {
    if t <= 2 {
        0.0
    } else {
        lambda_t(mbar, q, t)
    }
}

/// Exact `Λ(t)` for rational `m̄` and `q`.
pub fn lambda_t_exact(mbar: &BigRational, q: &BigRational, t: u64) -> BigRational {
    let mut binom = BigRational::one();
    for i in 0..t {
        let i = BigRational::from_integer(i.into());
        binom = binom * (mbar - &i) / (i + BigRational::one());
    }
    if binom.is_zero() {
        return binom;
    }
    let pairs = t * t.saturating_sub(1) / 2;
    binom * num_traits::pow::pow(q.clone(), pairs as usize)
}

pub fn lambda_prime_t_exact(mbar: &BigRational, q: &BigRational, t: u64) -> BigRational {
    if t <= 2 {
        BigRational::zero()
    } else {
        lambda_t_exact(mbar, q, t)
    }
}

/// Largest maximiser `t₀` of `Λ(t)` over integers `t ≥ 0`.
///
/// The step ratio `((m̄-t+1)/t) q^{t-1}` is decreasing in `t`, so `Λ` rises
/// while the ratio is at least 1 and falls afterwards; ties go to the larger
/// `t`.
pub fn lambda_peak(mbar: f64, q: f64) -> u64 {
    let ln_q = q.ln();
    let mut t0 = 0u64;
    loop {
        let t = (t0 + 1) as f64;
        let factor = mbar - t + 1.0;
        if factor <= 0.0 {
            return t0;
        }
        let q_part = if t0 == 0 { 0.0 } else { (t - 1.0) * ln_q };
        let ln_ratio = factor.ln() - t.ln() + q_part;
        if ln_ratio.is_nan() || ln_ratio < 0.0 {
            return t0;
        }
        t0 += 1;
    }
}
