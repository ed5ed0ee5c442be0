//! Seeded trial engine: samples `H_k(n, p)`, decides EKR, and aggregates
//! frequencies with Wilson intervals.
//!
//! Trial `i` of a batch with master seed `s` draws from stream `i` of the
//! generator keyed by `s`, so a batch gives the same records on any number
//! of workers.

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{
    compute_alpha_beta, intersection_probability, lambda_t, regime_params_with_alpha, ModelParams,
    RegimeParams,
};
use crate::combin::binomial_u64;
use crate::error::{Error, Result};
use crate::hypergraph::{
    check_event_r, degree_stats, sample_bernoulli_with, sample_conditioned_with, sample_independent_with,
    EventRParams, EventRReport, Hypergraph, SamplerConfig,
};
use crate::kset::KSet;
use crate::rng::{derive_seed, trial_rng};
use crate::verifier::{verify_ekr_with, VerifierConfig};
use crate::witnesses::{classify_nontrivial_clique, is_generic_clique, EventClass};

pub const SCHEMA_VERSION: u32 = 1;

/// Wilson score interval at 95%.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMode {
    /// Every k-set independently with probability p.
    Bernoulli,
    /// `|H| ~ Bin(C(n,k), p)`, then that many distinct uniform k-sets.
    Conditioned,
    /// `|H|` drawn as for `Conditioned`, then i.i.d. uniform k-sets;
    /// repeats are merged before verification.
    Independent,
}

impl std::str::FromStr for SamplerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bernoulli" => Ok(Self::Bernoulli),
            "conditioned" => Ok(Self::Conditioned),
            "independent" => Ok(Self::Independent),
            _ => Err(Error::argument(format!("unknown sampler {s:?}"))),
        }
    }
}

impl SamplerMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::Conditioned => "conditioned",
            Self::Independent => "independent",
        }
    }
}

/// Everything a batch of trials needs besides the seed.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub params: ModelParams,
    pub sampler: SamplerMode,
    pub verifier: VerifierConfig,
    pub sampler_config: SamplerConfig,
    /// Worker threads; `1` runs on the calling thread.
    pub workers: usize,
}

/// Node budget per trial used unless overridden; a trial that exhausts it
/// is reported as undecided.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

impl TrialConfig {
    pub fn new(params: ModelParams, sampler: SamplerMode) -> Self {
        Self {
            params,
            sampler,
            verifier: VerifierConfig {
                node_budget: Some(DEFAULT_NODE_BUDGET),
                ..Default::default()
            },
            sampler_config: SamplerConfig::default(),
            workers: 1,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// Shape of the failing witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// All members but one share a vertex that the remaining one avoids.
    Hm,
    /// Maximum degree ≤ 3 with at most ζ vertices of degree 3.
    Generic,
    Other,
}

impl WitnessKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Hm => "hm",
            Self::Generic => "generic",
            Self::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed: u64,
    pub m: usize,
    pub m_in_window: bool,
    pub delta: usize,
    /// `None` when the trial was undecided.
    pub omega: Option<usize>,
    pub ekr_holds: Option<bool>,
    pub lambda_of_delta: f64,
    pub lambda_prime_of_delta: f64,
    pub event_r: EventRReport,
    pub witness_kind: Option<WitnessKind>,
    pub event_class: Option<String>,
    pub error: Option<String>,
    pub runtime_ms: f64,
}

/// Per-batch constants derived once from the model parameters.
struct BatchContext {
    mbar: f64,
    q: f64,
    total_sets: Option<u64>,
    event_r: EventRParams,
    regime: Option<RegimeParams>,
}

impl BatchContext {
    fn new(params: &ModelParams) -> Result<Self> {
        let ab = compute_alpha_beta(params)?;
        Ok(Self {
            mbar: params.mbar(),
            q: intersection_probability(params.n, params.k)?,
            total_sets: binomial_u64(params.n, params.k),
            event_r: EventRParams::from_model(params)?,
            regime: regime_params_with_alpha(params, ab.alpha).ok(),
        })
    }
}

fn hm_shaped(edges: &[KSet]) -> bool {
    // some member B0 and a vertex x ∉ B0 shared by all the others
    edges.len() >= 3
        && (0..edges.len()).any(|i| {
            let others = edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, e)| *e);
            let common = others.fold(KSet::full(crate::kset::MAX_N), |a, e| a.intersection(&e));
            !common.difference(&edges[i]).is_empty()
        })
}

fn draw<R: Rng>(cfg: &TrialConfig, ctx: &BatchContext, rng: &mut R) -> Result<(Hypergraph, bool)> {
    let p = &cfg.params;
    let (n, k, prob) = (p.n as usize, p.k as usize, p.p());
    let window = |m: usize| {
        let half = p.psi * ctx.mbar.sqrt();
        if ctx.mbar == 0.0 {
            m == 0
        } else {
            (m as f64) > ctx.mbar - half && (m as f64) < ctx.mbar + half
        }
    };
    match cfg.sampler {
        SamplerMode::Bernoulli => {
            let h = sample_bernoulli_with(n, k, prob, rng, &cfg.sampler_config)?;
            let w = window(h.len());
            Ok((h, w))
        }
        SamplerMode::Conditioned => {
            // same window convention as the Bernoulli and independent modes
            let (h, _) = sample_conditioned_with(n, k, prob, p.psi, rng, &cfg.sampler_config)?;
            let w = window(h.len());
            Ok((h, w))
        }
        SamplerMode::Independent => {
            let m = match ctx.total_sets {
                Some(total) => Binomial::new(total, prob).expect("p in [0,1]").sample(rng),
                None if ctx.mbar > 0.0 => Poisson::new(ctx.mbar).expect("positive mean").sample(rng) as u64,
                None => 0,
            };
            let h = sample_independent_with(n, k, m as usize, rng)?;
            Ok((h.dedup(), window(m as usize)))
        }
    }
}

fn run_one(cfg: &TrialConfig, ctx: &BatchContext, seed: u64, index: u64) -> TrialRecord {
    let start = Instant::now();
    let mut rng = trial_rng(seed, index);
    let mut rec = TrialRecord {
        trial_index: index,
        seed,
        m: 0,
        m_in_window: false,
        delta: 0,
        omega: None,
        ekr_holds: None,
        lambda_of_delta: f64::NAN,
        lambda_prime_of_delta: f64::NAN,
        event_r: EventRReport {
            m_window: false,
            delta_le_beta: false,
            delta_ge_alpha: false,
            pair_degree_ok: false,
            w_ok: false,
        },
        witness_kind: None,
        event_class: None,
        error: None,
        runtime_ms: 0.0,
    };
    let (h, in_window) = match draw(cfg, ctx, &mut rng) {
        Ok(x) => x,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let delta = degree_stats(&h).delta;
    rec.m = h.len();
    rec.m_in_window = in_window;
    rec.delta = delta;
    rec.lambda_of_delta = lambda_t(ctx.mbar, ctx.q, delta as u64);
    rec.lambda_prime_of_delta = if delta <= 2 { 0.0 } else { rec.lambda_of_delta };
    rec.event_r = check_event_r(&h, &ctx.event_r);
    match verify_ekr_with(&h, &cfg.verifier) {
        Ok(v) => {
            rec.omega = Some(v.omega);
            rec.ekr_holds = Some(v.holds);
            if let Some(w) = &v.witness {
                let sets: Vec<KSet> = w.iter().map(|&i| h.edges()[i]).collect();
                let zeta = ctx.regime.map_or(0.0, |r| r.zeta_cap);
                rec.witness_kind = Some(if hm_shaped(&sets) {
                    WitnessKind::Hm
                } else if is_generic_clique(&sets, zeta).unwrap_or(false) {
                    WitnessKind::Generic
                } else {
                    WitnessKind::Other
                });
                if let Some(regime) = &ctx.regime {
                    rec.event_class = classify_nontrivial_clique(&h, w, regime)
                        .ok()
                        .map(|c| c.tag().to_string());
                }
            }
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::argument(format!("thread pool: {e}")))
}

/// Runs `trials` independent trials; records come back sorted by index.
pub fn run_trials(cfg: &TrialConfig, trials: u64, seed: u64) -> Result<Vec<TrialRecord>> {
    let ctx = BatchContext::new(&cfg.params)?;
    if cfg.workers <= 1 {
        return Ok((0..trials).map(|i| run_one(cfg, &ctx, seed, i)).collect());
    }
    let mut recs: Vec<TrialRecord> =
        pool(cfg.workers)?.install(|| (0..trials).into_par_iter().map(|i| run_one(cfg, &ctx, seed, i)).collect());
    recs.sort_by_key(|r| r.trial_index);
    Ok(recs)
}

/// 95% Wilson score interval for `successes` out of `n`; `(0, 1)` when
/// `n = 0`.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let phat = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let centre = (phat + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// One aggregated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub k: u64,
    pub phi: f64,
    pub p: f64,
    pub trials: u64,
    pub holds: u64,
    pub fails: u64,
    pub undecided: u64,
    pub f_hat: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub mean_delta: f64,
    pub mean_omega: f64,
    /// Empirical `Pr(Λ'(Δ) > eps_thr)` over all trials.
    pub pr_lambda_prime_gt_eps: f64,
    pub witness_hm: u64,
    pub witness_generic: u64,
    pub witness_other: u64,
    pub event_a: u64,
    pub event_b: u64,
    pub event_c: u64,
    pub event_none: u64,
}

impl SweepRow {
    pub fn from_records(params: &ModelParams, recs: &[TrialRecord]) -> Self {
        let count = |f: &dyn Fn(&TrialRecord) -> bool| recs.iter().filter(|r| f(r)).count() as u64;
        let holds = count(&|r| r.ekr_holds == Some(true));
        let fails = count(&|r| r.ekr_holds == Some(false));
        let decided = holds + fails;
        let (f_lo, f_hi) = wilson_interval(holds, decided);
        let omegas: Vec<f64> = recs.iter().filter_map(|r| r.omega).map(|o| o as f64).collect();
        let mean = |v: &[f64]| if v.is_empty() { f64::NAN } else { v.iter().sum::<f64>() / v.len() as f64 };
        let deltas: Vec<f64> = recs.iter().map(|r| r.delta as f64).collect();
        let wk = |k: WitnessKind| count(&|r| r.witness_kind == Some(k));
        let ev = |t: &str| count(&|r| r.event_class.as_deref() == Some(t));
        let trials = recs.len() as u64;
        SweepRow {
            n: params.n,
            k: params.k,
            phi: params.phi(),
            p: params.p(),
            trials,
            holds,
            fails,
            undecided: trials - decided,
            f_hat: if decided == 0 { f64::NAN } else { holds as f64 / decided as f64 },
            f_lo,
            f_hi,
            mean_delta: mean(&deltas),
            mean_omega: mean(&omegas),
            pr_lambda_prime_gt_eps: if trials == 0 {
                f64::NAN
            } else {
                count(&|r| r.lambda_prime_of_delta > params.eps_thr) as f64 / trials as f64
            },
            witness_hm: wk(WitnessKind::Hm),
            witness_generic: wk(WitnessKind::Generic),
            witness_other: wk(WitnessKind::Other),
            event_a: ev(EventClass::A { x: 0 }.tag()),
            event_b: ev(EventClass::B { x: 0, y: 0 }.tag()),
            event_c: ev(EventClass::C.tag()),
            event_none: ev(EventClass::None.tag()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub schema: u32,
    pub seed: u64,
    pub sampler: SamplerMode,
    pub trials: u64,
    pub rows: Vec<SweepRow>,
}

/// One batch per grid value of φ, in input order. Row `i` uses the child
/// seed `derive_seed(seed, i)`.
pub fn estimate_ekr_curve(base: &TrialConfig, phi_grid: &[f64], trials: u64, seed: u64) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(phi_grid.len());
    for (i, &phi) in phi_grid.iter().enumerate() {
        let mut cfg = base.clone();
        cfg.params = ModelParams {
            density: crate::analytics::Density::Phi(phi),
            ..base.params.clone()
        };
        cfg.params.validate()?;
        let recs = run_trials(&cfg, trials, derive_seed(seed, i as u64))?;
        rows.push(SweepRow::from_records(&cfg.params, &recs));
    }
    Ok(SweepTable {
        schema: SCHEMA_VERSION,
        seed,
        sampler: base.sampler,
        trials,
        rows,
    })
}

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

impl SweepTable {
    pub const CSV_HEADER: [&'static str; 23] = [
        "schema", "n", "k", "phi", "p", "trials", "holds", "fails", "undecided", "f_hat", "f_lo", "f_hi",
        "mean_delta", "mean_omega", "pr_lambda_prime_gt_eps", "witness_hm", "witness_generic",
        "witness_other", "event_a", "event_b", "event_c", "event_none", "seed",
    ];

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                self.schema.to_string(),
                r.n.to_string(),
                r.k.to_string(),
                fmt_f64(r.phi),
                fmt_f64(r.p),
                r.trials.to_string(),
                r.holds.to_string(),
                r.fails.to_string(),
                r.undecided.to_string(),
                fmt_f64(r.f_hat),
                fmt_f64(r.f_lo),
                fmt_f64(r.f_hi),
                fmt_f64(r.mean_delta),
                fmt_f64(r.mean_omega),
                fmt_f64(r.pr_lambda_prime_gt_eps),
                r.witness_hm.to_string(),
                r.witness_generic.to_string(),
                r.witness_other.to_string(),
                r.event_a.to_string(),
                r.event_b.to_string(),
                r.event_c.to_string(),
                r.event_none.to_string(),
                self.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv is utf-8"))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub const TRIAL_CSV_HEADER: [&str; 19] = [
    "schema", "trial_index", "seed", "m", "m_in_window", "delta", "omega", "ekr_holds", "lambda_of_delta",
    "lambda_prime_of_delta", "r_m_window", "r_delta_le_beta", "r_delta_ge_alpha", "r_pair_degree_ok",
    "r_w_ok", "witness_kind", "event_class", "error", "runtime_ms",
];

/// One record per line. Runtimes vary between runs, so they are written
/// only on request; the default output is reproducible byte for byte.
pub fn write_trials_csv<W: Write>(recs: &[TrialRecord], out: W, with_runtime: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let cols = if with_runtime { 19 } else { 18 };
    w.write_record(&TRIAL_CSV_HEADER[..cols])?;
    for r in recs {
        let opt = |o: Option<String>| o.unwrap_or_default();
        let mut row = vec![
            SCHEMA_VERSION.to_string(),
            r.trial_index.to_string(),
            r.seed.to_string(),
            r.m.to_string(),
            r.m_in_window.to_string(),
            r.delta.to_string(),
            opt(r.omega.map(|o| o.to_string())),
            opt(r.ekr_holds.map(|b| b.to_string())),
            fmt_f64(r.lambda_of_delta),
            fmt_f64(r.lambda_prime_of_delta),
            r.event_r.m_window.to_string(),
            r.event_r.delta_le_beta.to_string(),
            r.event_r.delta_ge_alpha.to_string(),
            r.event_r.pair_degree_ok.to_string(),
            r.event_r.w_ok.to_string(),
            opt(r.witness_kind.map(|k| k.name().to_string())),
            opt(r.event_class.clone()),
            opt(r.error.clone()),
        ];
        if with_runtime {
            row.push(format!("{:.3}", r.runtime_ms));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// 2×2 table of the degree condition `Λ'(Δ) ≤ eps_thr` against EKR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NandsSummary {
    pub schema: u32,
    pub n: u64,
    pub k: u64,
    pub phi: f64,
    pub eps_thr: f64,
    pub trials: u64,
    pub undecided: u64,
    /// Condition holds and EKR holds.
    pub cond_and_holds: u64,
    pub cond_and_fails: u64,
    pub not_cond_and_holds: u64,
    pub not_cond_and_fails: u64,
    /// Fraction of decided trials where condition and EKR agree.
    pub agreement: f64,
    pub agreement_lo: f64,
    pub agreement_hi: f64,
}

pub fn estimate_condition_nands(cfg: &TrialConfig, trials: u64, seed: u64) -> Result<NandsSummary> {
    let recs = run_trials(cfg, trials, seed)?;
    let eps = cfg.params.eps_thr;
    let mut t = [[0u64; 2]; 2];
    let mut undecided = 0;
    for r in &recs {
        match r.ekr_holds {
            Some(h) => t[usize::from(r.lambda_prime_of_delta > eps)][usize::from(!h)] += 1,
            None => undecided += 1,
        }
    }
    let decided = trials - undecided;
    let agree = t[0][0] + t[1][1];
    let (lo, hi) = wilson_interval(agree, decided);
    Ok(NandsSummary {
        schema: SCHEMA_VERSION,
        n: cfg.params.n,
        k: cfg.params.k,
        phi: cfg.params.phi(),
        eps_thr: eps,
        trials,
        undecided,
        cond_and_holds: t[0][0],
        cond_and_fails: t[0][1],
        not_cond_and_holds: t[1][0],
        not_cond_and_fails: t[1][1],
        agreement: if decided == 0 { f64::NAN } else { agree as f64 / decided as f64 },
        agreement_lo: lo,
        agreement_hi: hi,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Frequency {
    pub fn new(hits: u64, trials: u64) -> Self {
        let (lo, hi) = wilson_interval(hits, trials);
        Self {
            hits,
            trials,
            estimate: if trials == 0 { f64::NAN } else { hits as f64 / trials as f64 },
            lo,
            hi,
        }
    }
}

/// Empirical law of the maximum degree Δ against the brackets α, α₂, β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaLaw {
    pub schema: u32,
    /// `histogram[d]` = number of trials with Δ = d.
    pub histogram: Vec<u64>,
    pub alpha: u64,
    pub alpha2: u64,
    pub beta: u64,
    pub ge_alpha: Frequency,
    pub ge_alpha2: Frequency,
    pub le_beta: Frequency,
    /// Desk-scale warnings: `Pr(Δ ≤ β) < 0.9` or `Pr(Δ ≥ α₂) < 0.9`.
    pub flags: Vec<String>,
}

/// Level below which the Δ brackets are flagged. A finite-n reporting
/// constant, not a derived one.
pub const DELTA_FLAG_LEVEL: f64 = 0.9;

pub fn estimate_delta_law(cfg: &TrialConfig, trials: u64, seed: u64) -> Result<DeltaLaw> {
    let ctx = BatchContext::new(&cfg.params)?;
    let ab = compute_alpha_beta(&cfg.params)?;
    let one = |i: u64| -> Result<usize> {
        let mut rng = trial_rng(seed, i);
        Ok(degree_stats(&draw(cfg, &ctx, &mut rng)?.0).delta)
    };
    let deltas: Vec<usize> = if cfg.workers <= 1 {
        (0..trials).map(one).collect::<Result<_>>()?
    } else {
        pool(cfg.workers)?.install(|| (0..trials).into_par_iter().map(one).collect::<Result<_>>())?
    };
    let mut histogram = vec![0u64; deltas.iter().copied().max().map_or(1, |d| d + 1)];
    for &d in &deltas {
        histogram[d] += 1;
    }
    let count = |f: &dyn Fn(u64) -> bool| deltas.iter().filter(|&&d| f(d as u64)).count() as u64;
    let ge_alpha = Frequency::new(count(&|d| d >= ab.alpha), trials);
    let ge_alpha2 = Frequency::new(count(&|d| d >= ab.alpha2), trials);
    let le_beta = Frequency::new(count(&|d| d <= ab.beta), trials);
    let mut flags = Vec::new();
    if le_beta.estimate < DELTA_FLAG_LEVEL {
        flags.push(format!("Pr(Delta <= beta) = {:.4} < {DELTA_FLAG_LEVEL}", le_beta.estimate));
    }
    if ge_alpha2.estimate < DELTA_FLAG_LEVEL {
        flags.push(format!("Pr(Delta >= alpha2) = {:.4} < {DELTA_FLAG_LEVEL}", ge_alpha2.estimate));
    }
    Ok(DeltaLaw {
        schema: SCHEMA_VERSION,
        histogram,
        alpha: ab.alpha,
        alpha2: ab.alpha2,
        beta: ab.beta,
        ge_alpha,
        ge_alpha2,
        le_beta,
        flags,
    })
}
