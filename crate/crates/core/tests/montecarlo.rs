use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ekrlab::analytics::ModelParams;
use ekrlab::hypergraph::{sample_bernoulli_with, SamplerConfig};
use ekrlab::montecarlo::{
    estimate_condition_nands, estimate_delta_law, estimate_ekr_curve, run_trials, wilson_interval, write_trials_csv,
    SamplerMode, TrialConfig, DELTA_FLAG_LEVEL,
};
use ekrlab::rng::trial_rng;
use ekrlab::verifier::brute_force_ekr;

fn cfg(n: u64, k: u64, phi: f64, mode: SamplerMode) -> TrialConfig {
    TrialConfig::new(ModelParams::with_phi(n, k, phi).unwrap(), mode)
}

#[test]
fn empty_and_complete_models_always_hold() {
    for mode in [SamplerMode::Bernoulli, SamplerMode::Conditioned, SamplerMode::Independent] {
        let recs = run_trials(&cfg(9, 3, 0.0, mode), 50, 1).unwrap();
        assert!(recs.iter().all(|r| r.ekr_holds == Some(true) && r.delta == 0 && r.omega == Some(0)));
    }
    let full = TrialConfig::new(ModelParams::with_p(7, 3, 1.0).unwrap(), SamplerMode::Bernoulli);
    assert!(run_trials(&full, 20, 2).unwrap().iter().all(|r| r.ekr_holds == Some(true)));
}

#[test]
fn estimate_matches_brute_force_on_the_same_draws() {
    let (n, k, p, trials, seed) = (5usize, 2usize, 0.9, 10_000u64, 17u64);
    let c = TrialConfig::new(ModelParams::with_p(n as u64, k as u64, p).unwrap(), SamplerMode::Bernoulli).workers(4);
    let recs = run_trials(&c, trials, seed).unwrap();
    let fast = recs.iter().filter(|r| r.ekr_holds == Some(true)).count();
    let slow = (0..trials)
        .filter(|&i| {
            let h = sample_bernoulli_with(n, k, p, &mut trial_rng(seed, i), &SamplerConfig::default()).unwrap();
            brute_force_ekr(&h).unwrap().holds
        })
        .count();
    assert_eq!(fast, slow);
}

#[test]
fn record_invariants() {
    for mode in [SamplerMode::Bernoulli, SamplerMode::Conditioned, SamplerMode::Independent] {
        let recs = run_trials(&cfg(16, 3, 3.0, mode).workers(3), 200, 5).unwrap();
        for (i, r) in recs.iter().enumerate() {
            assert_eq!(r.trial_index, i as u64);
            assert!(r.error.is_none());
            assert_eq!(r.lambda_prime_of_delta == 0.0, r.delta <= 2);
            let omega = r.omega.unwrap();
            assert!(omega >= r.delta);
            if r.ekr_holds == Some(true) {
                assert_eq!(omega, r.delta);
                assert!(r.witness_kind.is_none());
            } else {
                assert!(r.witness_kind.is_some());
            }
        }
    }
}

#[test]
fn curve_endpoints_and_invariants() {
    let base = cfg(7, 3, 1.0, SamplerMode::Bernoulli);
    let table = estimate_ekr_curve(&base, &[0.0, 15.0], 100, 3).unwrap();
    assert_eq!(table.rows[1].p, 1.0);
    for row in &table.rows {
        assert_eq!(row.f_hat, 1.0);
        assert_eq!(row.holds + row.fails + row.undecided, row.trials);
    }
    let grid = [0.5, 2.0, 4.0, 1.0];
    let t = estimate_ekr_curve(&cfg(12, 3, 1.0, SamplerMode::Conditioned), &grid, 80, 4).unwrap();
    assert_eq!(t.rows.iter().map(|r| r.phi).collect::<Vec<_>>(), grid);
    for r in &t.rows {
        assert!(0.0 <= r.f_lo && r.f_lo <= r.f_hat && r.f_hat <= r.f_hi && r.f_hi <= 1.0);
        assert_eq!(r.holds + r.fails + r.undecided, r.trials);
        let w = r.witness_hm + r.witness_generic + r.witness_other;
        assert_eq!(w, r.fails);
    }
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    for mode in [SamplerMode::Bernoulli, SamplerMode::Conditioned, SamplerMode::Independent] {
        let render = |workers: usize| {
            let recs = run_trials(&cfg(12, 3, 2.5, mode).workers(workers), 120, 8).unwrap();
            let mut out = Vec::new();
            write_trials_csv(&recs, &mut out, false).unwrap();
            let t = estimate_ekr_curve(&cfg(12, 3, 1.0, mode).workers(workers), &[1.0, 3.0], 60, 8).unwrap();
            (out, t.to_csv_string().unwrap(), t.to_json_string().unwrap())
        };
        let one = render(1);
        assert_eq!(one, render(1));
        assert_eq!(one, render(4));
        assert_eq!(one, render(7));
    }
}

#[test]
fn nands_at_zero_density_is_all_agreement() {
    let s = estimate_condition_nands(&cfg(24, 3, 0.0, SamplerMode::Bernoulli), 100, 1).unwrap();
    assert_eq!(s.cond_and_holds, 100);
    assert_eq!(s.agreement, 1.0);
}

#[test]
fn nands_far_below_threshold_is_reported() {
    // descriptive only: the table must account for every trial
    let s = estimate_condition_nands(&cfg(24, 3, 1.0, SamplerMode::Conditioned), 300, 2).unwrap();
    assert_eq!(
        s.cond_and_holds + s.cond_and_fails + s.not_cond_and_holds + s.not_cond_and_fails + s.undecided,
        300
    );
}

#[test]
fn delta_law_matches_closed_form_when_sparse() {
    let (n, k, p) = (7u64, 3u64, 0.01);
    let c = TrialConfig::new(ModelParams::with_p(n, k, p).unwrap(), SamplerMode::Bernoulli);
    let trials = 20_000u64;
    let law = estimate_delta_law(&c, trials, 9).unwrap();
    let nonempty = 1.0 - law.histogram[0] as f64 / trials as f64;
    let exact = 1.0 - (1.0 - p).powi(35);
    let sd = (exact * (1.0 - exact) / trials as f64).sqrt();
    assert!((nonempty - exact).abs() <= 3.0 * sd, "{nonempty} vs {exact}");
}

#[test]
fn delta_upper_bracket_at_desk_scale() {
    // β is built from Pr(d_v > β) < 1/(nψ), so a union bound only promises
    // Pr(Δ ≤ β) ≥ 1 - 1/ψ
    let c = cfg(60, 3, 3.0, SamplerMode::Bernoulli).workers(4);
    let law = estimate_delta_law(&c, 4000, 10).unwrap();
    let floor = 1.0 - 1.0 / c.params.psi;
    let sd = (floor * (1.0 - floor) / 4000.0).sqrt();
    assert!(law.le_beta.estimate >= floor - 3.0 * sd, "{:?}", law.le_beta);
    assert_eq!(law.histogram.iter().sum::<u64>(), 4000);
    let flagged = law.flags.iter().any(|f| f.contains("beta"));
    assert_eq!(flagged, law.le_beta.estimate < DELTA_FLAG_LEVEL);
}

/// Exact coverage of the Wilson interval at `(p, n)` from the binomial pmf.
fn exact_coverage(p: f64, n: u64) -> f64 {
    let mut pmf = (1.0 - p).powi(n as i32);
    let mut cov = 0.0;
    for s in 0..=n {
        if s > 0 {
            pmf *= (n - s + 1) as f64 / s as f64 * p / (1.0 - p);
        }
        let (lo, hi) = wilson_interval(s, n);
        if lo <= p && p <= hi {
            cov += pmf;
        }
    }
    cov
}

#[test]
fn wilson_interval_coverage() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let reps = 1000;
    for &(p, n) in &[(0.5, 50u64), (0.1, 100), (0.9, 200), (0.03, 400), (0.3, 60)] {
        let exact = exact_coverage(p, n);
        assert!(exact >= 0.93, "p={p} n={n}: exact coverage {exact}");
        let covered = (0..reps)
            .filter(|_| {
                let s = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
                let (lo, hi) = wilson_interval(s, n);
                lo <= p && p <= hi
            })
            .count() as f64
            / reps as f64;
        let sd = (exact * (1.0 - exact) / reps as f64).sqrt();
        assert!(covered >= exact - 3.0 * sd, "p={p} n={n}: {covered} vs exact {exact}");
    }
}

#[test]
fn wilson_width_shrinks_like_root_n() {
    for &p in &[0.2, 0.5, 0.7] {
        let n = 10_000u64;
        let (a, b) = wilson_interval((p * n as f64) as u64, n);
        let (c, d) = wilson_interval((p * 2.0 * n as f64) as u64, 2 * n);
        let ratio = (b - a) / (d - c);
        assert!((ratio / 2f64.sqrt() - 1.0).abs() <= 0.1, "ratio {ratio}");
    }
}
