use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ekrlab::analytics::{
    analytic_report, intersection::disjoint_probability, intersection_probability,
    intersection_probability_exact, regime_params, Density, ModelParams,
};
use ekrlab::hypergraph::{sample_bernoulli_with, sample_conditioned_with, sample_independent_with, SamplerConfig};
use ekrlab::montecarlo::{
    estimate_condition_nands, estimate_delta_law, estimate_ekr_curve, run_trials, write_trials_csv, SamplerMode,
    TrialConfig,
};
use ekrlab::rng::trial_rng;
use ekrlab::verifier::{verify_ekr_with, VerifierConfig};
use ekrlab::witnesses::{classify_nontrivial_clique, find_generic_clique_with, find_hilton_milner, WitnessJson};
use ekrlab::{Error, Hypergraph};

/// Exact and Monte Carlo experiments on the EKR property of random
/// k-uniform hypergraphs.
#[derive(Parser)]
#[command(name = "ekrlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic report for one parameter point (JSON).
    Calc(CalcArgs),
    /// Decide EKR for a hypergraph file (verdict JSON).
    Verify(VerifyArgs),
    /// Draw one hypergraph and write it in the text format.
    Sample(SampleArgs),
    /// EKR frequency over a grid of expected degrees.
    Sweep(SweepArgs),
    /// Search a hypergraph file for a structured witness (JSON).
    Witness(WitnessArgs),
    /// Raw per-trial records at one parameter point (CSV).
    Trials(TrialsArgs),
    /// Degree condition against EKR: 2x2 table and agreement rate (JSON).
    Nands(TrialsArgs),
    /// Empirical law of the maximum degree against its brackets (JSON).
    DeltaLaw(TrialsArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Edge probability; conflicts with --phi.
    #[arg(long, conflicts_with = "phi")]
    p: Option<f64>,
    /// Expected vertex degree p·C(n-1,k-1) [default: 1].
    #[arg(long)]
    phi: Option<f64>,
    /// Auxiliary slowly growing function [default: ln n].
    #[arg(long)]
    psi: Option<f64>,
    /// Finite-n tolerance for the Λ conditions.
    #[arg(long, default_value_t = ekrlab::analytics::DEFAULT_EPS_THR)]
    eps_thr: f64,
    /// Regime constant c < 1/4.
    #[arg(long, default_value_t = ekrlab::analytics::DEFAULT_C_REGIME)]
    c_regime: f64,
}

impl ModelArgs {
    fn density(&self) -> Density {
        match (self.p, self.phi) {
            (Some(p), _) => Density::P(p),
            (None, phi) => Density::Phi(phi.unwrap_or(1.0)),
        }
    }

    fn params(&self) -> ekrlab::Result<ModelParams> {
        let mut params = match self.density() {
            Density::P(p) => ModelParams::with_p(self.n, self.k, p)?,
            Density::Phi(phi) => ModelParams::with_phi(self.n, self.k, phi)?,
        };
        if let Some(psi) = self.psi {
            params = params.psi(psi);
        }
        params = params.eps_thr(self.eps_thr).c_regime(self.c_regime);
        params.validate()?;
        Ok(params)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeedArgs {
    /// Master seed.
    #[arg(long, env = "EKRLAB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CapArgs {
    /// Largest hypergraph the verifier accepts.
    #[arg(long, default_value_t = ekrlab::verifier::DEFAULT_MAX_EDGES)]
    max_edges: usize,
    /// Branch-and-bound node budget per search; exhausted searches are
    /// resource errors (or undecided trials).
    #[arg(long)]
    node_budget: Option<u64>,
    /// Largest C(n,k) the enumerating samplers accept.
    #[arg(long, default_value_t = ekrlab::hypergraph::DEFAULT_ENUMERATION_CAP)]
    enumeration_cap: u64,
    /// Disable the classical extremal-size caps in the verifier.
    #[arg(long)]
    no_classical_bounds: bool,
}

impl CapArgs {
    fn verifier(&self, default_budget: Option<u64>) -> VerifierConfig {
        VerifierConfig {
            max_edges: self.max_edges,
            node_budget: self.node_budget.or(default_budget),
            classical_bounds: !self.no_classical_bounds,
        }
    }

    fn sampler(&self) -> SamplerConfig {
        SamplerConfig {
            enumeration_cap: self.enumeration_cap,
        }
    }
}

#[derive(Args)]
struct CalcArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Rows of the Λ table (t = 0..=rows).
    #[arg(long, default_value_t = 10)]
    lambda_rows: u64,
    /// Skip the threshold search.
    #[arg(long)]
    no_threshold: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Hypergraph file.
    #[arg(long)]
    input: PathBuf,
    /// Merge repeated edges before deciding.
    #[arg(long)]
    dedup: bool,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum SamplerArg {
    Bernoulli,
    Conditioned,
    Independent,
}

impl From<SamplerArg> for SamplerMode {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Bernoulli => SamplerMode::Bernoulli,
            SamplerArg::Conditioned => SamplerMode::Conditioned,
            SamplerArg::Independent => SamplerMode::Independent,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value_t = SamplerArg::Bernoulli)]
    sampler: SamplerArg,
    /// Edge count for the independent sampler [default: round(p·C(n,k))].
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum Scale {
    Linear,
    Log,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// First grid value of φ.
    #[arg(long)]
    start: f64,
    /// Last grid value of φ.
    #[arg(long)]
    stop: f64,
    #[arg(long, default_value_t = 12)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    scale: Scale,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Bernoulli)]
    sampler: SamplerArg,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TrialsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Bernoulli)]
    sampler: SamplerArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Add a runtime_ms column (not reproducible byte for byte).
    #[arg(long)]
    with_runtime: bool,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum WitnessKindArg {
    /// Hilton–Milner family with at least --d petals.
    Hm,
    /// Generic clique of --size members.
    Generic,
    /// Classify the verifier's failure witness by the event taxonomy.
    Classify,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: WitnessKindArg,
    /// Petal count for --kind hm.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Clique size for --kind generic.
    #[arg(long)]
    size: Option<usize>,
    /// Cap on degree-3 vertices for --kind generic [default: γ/ε from the model].
    #[arg(long)]
    zeta_cap: Option<f64>,
    /// Density for the regime parameters used by --kind classify and the
    /// default ζ cap [default: φ = 1].
    #[arg(long, conflicts_with = "phi")]
    p: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
    #[arg(long, default_value_t = ekrlab::analytics::DEFAULT_EPS_THR)]
    eps_thr: f64,
    #[arg(long, default_value_t = ekrlab::analytics::DEFAULT_C_REGIME)]
    c_regime: f64,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn emit(output: &OutputArgs, text: &str) -> ekrlab::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> ekrlab::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct BoundaryReport {
    n: u64,
    k: u64,
    q: f64,
    q_exact: String,
    theta: f64,
}

fn calc(args: &CalcArgs) -> ekrlab::Result<()> {
    let m = &args.model;
    if m.k > 0 && m.n == 2 * m.k {
        // q is still defined at n = 2k; report it before refusing the rest
        let report = BoundaryReport {
            n: m.n,
            k: m.k,
            q: intersection_probability(m.n, m.k)?,
            q_exact: intersection_probability_exact(m.n, m.k)?.to_string(),
            theta: disjoint_probability(m.n, m.k)?,
        };
        emit(&args.output, &json(&report)?)?;
    }
    let params = m.params()?;
    let report = analytic_report(&params, args.lambda_rows, !args.no_threshold)?;
    emit(&args.output, &json(&report)?)
}

fn read_input(path: &PathBuf) -> ekrlab::Result<Hypergraph> {
    let text = fs::read_to_string(path)?;
    Hypergraph::parse(&text)
}

fn verify(args: &VerifyArgs) -> ekrlab::Result<()> {
    let mut h = read_input(&args.input)?;
    if args.dedup {
        h = h.dedup();
    }
    let v = verify_ekr_with(&h, &args.caps.verifier(None))?;
    emit(&args.output, &json(&v.to_json(&h))?)
}

fn sample(args: &SampleArgs) -> ekrlab::Result<()> {
    let params = args.model.params()?;
    let (n, k) = (params.n as usize, params.k as usize);
    let mut rng = trial_rng(args.seed.seed, 0);
    let h = match SamplerMode::from(args.sampler) {
        SamplerMode::Bernoulli => sample_bernoulli_with(n, k, params.p(), &mut rng, &args.caps.sampler())?,
        SamplerMode::Conditioned => {
            sample_conditioned_with(n, k, params.p(), params.psi, &mut rng, &args.caps.sampler())?.0
        }
        SamplerMode::Independent => {
            let m = args.m.unwrap_or_else(|| params.mbar().round() as usize);
            sample_independent_with(n, k, m, &mut rng)?
        }
    };
    emit(&args.output, &h.to_text())
}

fn grid(args: &SweepArgs) -> ekrlab::Result<Vec<f64>> {
    if args.points == 0 {
        return Err(Error::Argument("--points must be at least 1".into()));
    }
    if args.points == 1 {
        return Ok(vec![args.start]);
    }
    let last = (args.points - 1) as f64;
    match args.scale {
        Scale::Linear => Ok((0..args.points)
            .map(|i| args.start + (args.stop - args.start) * i as f64 / last)
            .collect()),
        Scale::Log => {
            if args.start <= 0.0 || args.stop <= 0.0 {
                return Err(Error::Domain("log grid needs positive --start and --stop".into()));
            }
            let (a, b) = (args.start.ln(), args.stop.ln());
            Ok((0..args.points).map(|i| (a + (b - a) * i as f64 / last).exp()).collect())
        }
    }
}

fn trial_config(model: &ModelArgs, sampler: SamplerArg, workers: usize, caps: &CapArgs) -> ekrlab::Result<TrialConfig> {
    let mut cfg = TrialConfig::new(model.params()?, sampler.into()).workers(workers);
    cfg.verifier = caps.verifier(cfg.verifier.node_budget);
    cfg.sampler_config = caps.sampler();
    Ok(cfg)
}

fn sweep(args: &SweepArgs) -> ekrlab::Result<()> {
    if args.trials == 0 {
        return Err(Error::Argument("--trials must be at least 1".into()));
    }
    let phis = grid(args)?;
    let mut model = args.model.clone();
    model.p = None;
    model.phi = Some(phis[0]);
    let cfg = trial_config(&model, args.sampler, args.workers, &args.caps)?;
    let table = estimate_ekr_curve(&cfg, &phis, args.trials, args.seed.seed)?;
    let text = match args.format {
        Format::Csv => table.to_csv_string()?,
        Format::Json => json(&table)?,
    };
    emit(&args.output, &text)
}

fn trials(args: &TrialsArgs) -> ekrlab::Result<()> {
    let cfg = trial_config(&args.model, args.sampler, args.workers, &args.caps)?;
    let recs = run_trials(&cfg, args.trials, args.seed.seed)?;
    let mut buf = Vec::new();
    write_trials_csv(&recs, &mut buf, args.with_runtime)?;
    emit(&args.output, &String::from_utf8(buf).expect("utf-8"))
}

fn nands(args: &TrialsArgs) -> ekrlab::Result<()> {
    let cfg = trial_config(&args.model, args.sampler, args.workers, &args.caps)?;
    emit(&args.output, &json(&estimate_condition_nands(&cfg, args.trials, args.seed.seed)?)?)
}

fn delta_law(args: &TrialsArgs) -> ekrlab::Result<()> {
    let cfg = trial_config(&args.model, args.sampler, args.workers, &args.caps)?;
    emit(&args.output, &json(&estimate_delta_law(&cfg, args.trials, args.seed.seed)?)?)
}

fn witness(args: &WitnessArgs) -> ekrlab::Result<()> {
    let h = read_input(&args.input)?;
    let model = ModelArgs {
        n: h.n() as u64,
        k: h.k() as u64,
        p: args.p,
        phi: args.phi,
        psi: args.psi,
        eps_thr: args.eps_thr,
        c_regime: args.c_regime,
    };
    let config = args.caps.verifier(None);
    let out: Option<WitnessJson> = match args.kind {
        WitnessKindArg::Hm => find_hilton_milner(&h, args.d)?.map(|w| WitnessJson::hm(&h, &w)),
        WitnessKindArg::Generic => {
            let size = args
                .size
                .ok_or_else(|| Error::Argument("--kind generic needs --size".into()))?;
            let zeta = match args.zeta_cap {
                Some(z) => z,
                None => regime_params(&model.params()?)?.zeta_cap,
            };
            find_generic_clique_with(&h, size, zeta, &config)?.map(|c| WitnessJson::generic(&h, &c))
        }
        WitnessKindArg::Classify => {
            let regime = regime_params(&model.params()?)?;
            let verdict = verify_ekr_with(&h, &config)?;
            match verdict.witness {
                Some(w) => {
                    let class = classify_nontrivial_clique(&h, &w, &regime)?;
                    Some(WitnessJson::event(&h, &w, &class))
                }
                None => None,
            }
        }
    };
    emit(&args.output, &json(&out)?)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Degenerate(_) | Error::Argument(_) => 2,
        Error::Resource { .. } | Error::Budget { .. } => 3,
        Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => 4,
        Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Calc(a) => calc(a),
        Command::Verify(a) => verify(a),
        Command::Sample(a) => sample(a),
        Command::Sweep(a) => sweep(a),
        Command::Witness(a) => witness(a),
        Command::Trials(a) => trials(a),
        Command::Nands(a) => nands(a),
        Command::DeltaLaw(a) => delta_law(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ekrlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
