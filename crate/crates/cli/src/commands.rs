use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hil_core::tuning::{eta_star_full, params_noloc, regret_bound_full, regret_bound_noloc};
use hil_core::{
    fixed_theta_optimum, run_experiment, ExperimentPlan, HilF, LambdaMinSource, LearningRate, PolicyKind,
    SweepParams, Trace64,
};

use crate::error::{CliError, Result};
use crate::grid::parse_grid;
use crate::oracle::{brute_force_fixed_theta, riemann_q_full};
use crate::output::{fixed6, write_curve, write_records, write_table, Record};
use crate::synthetic::{generate_trace, Calibration, ConfidenceDist, SyntheticSpec};
use crate::trace_file::{read_trace, write_trace, write_trace_file};

/// Environment variable holding the default master seed.
pub const SEED_ENV: &str = "HIL_SEED";

#[derive(Debug, Parser)]
#[command(name = "hil", version, about = "Online offloading learners: trace replay, sweeps and tuning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay one policy over a trace and report cost and regret.
    Run(RunArgs),
    /// Run several policies over a grid of offloading costs.
    Sweep(SweepArgs),
    /// Print bound-optimal parameters and the regret bound they guarantee.
    Tune(TuneArgs),
    /// Generate a synthetic trace.
    Gen(GenArgs),
    /// Cross-check the library against brute-force reference computations.
    Oracle(OracleArgs),
}

/// `--lambda-min` accepts a number or `exact` (smallest gap in the trace).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaArg {
    Value(f64),
    Exact,
}

fn parse_lambda(s: &str) -> std::result::Result<LambdaArg, String> {
    if s == "exact" {
        return Ok(LambdaArg::Exact);
    }
    s.parse().map(LambdaArg::Value).map_err(|_| format!("`{s}` is neither a number nor `exact`"))
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    /// Smallest confidence gap, or `exact` to measure it on the trace.
    /// Defaults to 1/(n+1).
    #[arg(long, value_parser = parse_lambda)]
    pub lambda_min: Option<LambdaArg>,
    /// Confidences are quantized to this many bits; implies lambda_min = 2^-bits.
    #[arg(long)]
    pub quant_bits: Option<u32>,
}

impl LambdaArgs {
    fn source(&self) -> LambdaMinSource<f64> {
        let explicit = match self.lambda_min {
            Some(LambdaArg::Value(v)) => Some(v),
            _ => None,
        };
        LambdaMinSource::select(explicit, self.quant_bits, self.lambda_min == Some(LambdaArg::Exact))
    }
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Fixed learning rate; defaults to the bound-optimal value.
    #[arg(long, conflicts_with = "eta_schedule")]
    pub eta: Option<f64>,
    /// Use the decaying schedule eta_t = 1/sqrt(t+1) instead of a fixed rate.
    #[arg(long)]
    pub eta_schedule: bool,
    /// HIL-N exploration rate; defaults to the bound-optimal value.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    pub lambda: LambdaArgs,
    /// Confidences closer than this to an existing boundary are merged.
    #[arg(long, default_value_t = 0.0)]
    pub delta_min: f64,
    /// Trace-order randomizations.
    #[arg(long, default_value_t = 10)]
    pub shuffles: usize,
    /// Decision-randomness repetitions per order.
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Replay the trace in file order for every randomization.
    #[arg(long)]
    pub keep_order: bool,
}

impl ExperimentArgs {
    fn params(&self, lambda_min: f64) -> SweepParams<f64> {
        let learning_rate = if self.eta_schedule {
            Some(LearningRate::InverseSqrt)
        } else {
            self.eta.map(LearningRate::Fixed)
        };
        SweepParams {
            shuffles: self.shuffles,
            repetitions: self.reps,
            master_seed: self.seed,
            shuffle_order: !self.keep_order,
            delta_min: self.delta_min,
            lambda_min,
            learning_rate,
            epsilon: self.epsilon,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub policy: PolicyKind,
    #[arg(long)]
    pub beta: f64,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Machine-readable record file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-round cumulative regret, averaged over runs.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// `start:step:stop` (inclusive) or a comma list.
    #[arg(long, default_value = "0:0.05:0.95")]
    pub betas: String,
    #[arg(long, value_delimiter = ',', default_value = "hilf,hiln,genie,fixed,full,none")]
    pub policies: Vec<PolicyKind>,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TuneMode {
    Full,
    Noloc,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long, conflicts_with = "lambda_min")]
    pub quant_bits: Option<u32>,
    #[arg(long, value_enum)]
    pub mode: TuneMode,
    /// Evaluate the bound at this learning rate instead of the optimum.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Evaluate the HIL-N bound at this exploration rate.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Uniform,
    Bimodal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CalibrationKind {
    Perfect,
    Logistic,
    Constant,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// TOML spec file; the flags below are ignored except `--seed`.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "uniform")]
    pub dist: DistKind,
    #[arg(long, default_value_t = 0.5)]
    pub mix: f64,
    #[arg(long, default_value_t = 0.3)]
    pub lo: f64,
    #[arg(long, default_value_t = 0.9)]
    pub hi: f64,
    #[arg(long)]
    pub quant_bits: Option<u32>,
    #[arg(long, value_enum, default_value = "perfect")]
    pub calibration: CalibrationKind,
    #[arg(long, default_value_t = 10.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.5)]
    pub b: f64,
    #[arg(long, default_value_t = 0.1)]
    pub e: f64,
    /// Overrides the spec file's seed when given.
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl GenArgs {
    fn spec(&self) -> Result<SyntheticSpec> {
        let mut spec = match &self.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                SyntheticSpec::from_toml(&text)?
            }
            None => SyntheticSpec {
                n: self.n.unwrap_or_default(),
                distribution: match self.dist {
                    DistKind::Uniform => ConfidenceDist::Uniform,
                    DistKind::Bimodal => ConfidenceDist::Bimodal { mix: self.mix, lo: self.lo, hi: self.hi },
                },
                quant_bits: self.quant_bits,
                calibration: match self.calibration {
                    CalibrationKind::Perfect => Calibration::Perfect,
                    CalibrationKind::Logistic => Calibration::Logistic { a: self.a, b: self.b },
                    CalibrationKind::Constant => Calibration::Constant { e: self.e },
                },
                seed: 0,
            },
        };
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub beta: f64,
    /// Learning rate for the q_t comparison; defaults to the bound optimum.
    #[arg(long)]
    pub eta: Option<f64>,
    #[command(flatten)]
    pub lambda: LambdaArgs,
    /// Rounds of q_t to integrate.
    #[arg(long, default_value_t = 200)]
    pub rounds: usize,
    /// Riemann cells on (0, 1].
    #[arg(long, default_value_t = 1 << 16)]
    pub cells: usize,
    /// Uniform threshold grid size for the brute-force search.
    #[arg(long, default_value_t = 100_000)]
    pub theta_grid: usize,
    /// Per-round q_t dump.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs `cli`, writing human-readable output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(args, out),
        Command::Sweep(args) => sweep(args, out),
        Command::Tune(args) => tune(args, out),
        Command::Gen(args) => gen(args, out),
        Command::Oracle(args) => oracle(args, out),
    }
}

fn stdout_error(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn csv_to_cli(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

fn write_header(
    out: &mut dyn Write,
    path: &Path,
    trace: &Trace64,
    lambda: f64,
    source: LambdaMinSource<f64>,
    exp: &ExperimentArgs,
) -> std::io::Result<()> {
    writeln!(out, "# trace {} (n = {}, errors = {})", path.display(), trace.n(), trace.error_count())?;
    writeln!(out, "# lambda_min = {} [{source}]", fixed6(lambda))?;
    writeln!(
        out,
        "# seed = {}, shuffles = {}, repetitions = {}, order = {}, delta_min = {}",
        exp.seed,
        exp.shuffles,
        exp.reps,
        if exp.keep_order { "file" } else { "shuffled" },
        fixed6(exp.delta_min)
    )
}

fn run(args: RunArgs, out: &mut dyn Write) -> Result<()> {
    let trace = read_trace(&args.trace)?;
    let source = args.experiment.lambda.source();
    let lambda = source.resolve(trace.samples())?;
    let params = args.experiment.params(lambda);
    let config = params.config(args.policy, trace.n(), args.beta)?;

    let mut plan = ExperimentPlan::new(trace.clone(), args.policy, config)
        .with_runs(params.shuffles, params.repetitions)
        .with_master_seed(params.master_seed)
        .with_lambda_min(lambda);
    plan.shuffle_order = params.shuffle_order;
    plan.track_curve = args.curve.is_some();
    let report = run_experiment(&plan)?;

    write_header(out, &args.trace, &trace, lambda, source, &args.experiment).map_err(stdout_error)?;
    if let Some(bound) = &report.bound {
        writeln!(out, "# regret bound: total = {}, average = {}", fixed6(bound.regret_bound_total), fixed6(bound.regret_bound_average))
            .map_err(stdout_error)?;
    }
    if let (Some(path), Some(curve)) = (&args.curve, &report.per_round_cumulative_regret) {
        write_curve(create(path)?, curve).map_err(|e| csv_to_cli(path, e))?;
    }
    let learner = args.policy.is_learner();
    let record = Record {
        policy: args.policy,
        beta: args.beta,
        eta: if learner { config.learning_rate.fixed() } else { None },
        epsilon: (args.policy == PolicyKind::HilN).then_some(config.epsilon),
        lambda_min: lambda,
        report,
    };
    write_table(&mut *out, std::slice::from_ref(&record)).map_err(stdout_error)?;
    if let Some(path) = &args.out {
        write_records(create(path)?, &[record]).map_err(|e| csv_to_cli(path, e))?;
    }
    Ok(())
}

fn sweep(args: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let betas = parse_grid(&args.betas)?;
    let trace = read_trace(&args.trace)?;
    let source = args.experiment.lambda.source();
    let lambda = source.resolve(trace.samples())?;
    let params = args.experiment.params(lambda);
    let rows = hil_core::beta_sweep(&trace, &betas, &args.policies, &params)?;

    let records: Vec<Record> = rows
        .into_iter()
        .map(|row| Record {
            policy: row.policy,
            beta: row.beta,
            eta: row.eta,
            epsilon: row.epsilon,
            lambda_min: lambda,
            report: row.report,
        })
        .collect();
    write_header(out, &args.trace, &trace, lambda, source, &args.experiment).map_err(stdout_error)?;
    write_table(&mut *out, &records).map_err(stdout_error)?;
    if let Some(path) = &args.out {
        write_records(create(path)?, &records).map_err(|e| csv_to_cli(path, e))?;
    }
    Ok(())
}

fn tune(args: TuneArgs, out: &mut dyn Write) -> Result<()> {
    let (lambda, source) = match (args.lambda_min, args.quant_bits) {
        (Some(v), _) => (v, LambdaMinSource::Explicit(v)),
        (None, Some(bits)) => (LambdaMinSource::<f64>::Quantized(bits).resolve(&[])?, LambdaMinSource::Quantized(bits)),
        (None, None) => {
            let source = LambdaMinSource::Default;
            (hil_core::tuning::lambda_min_default(args.n), source)
        }
    };
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(CliError::Usage(format!(
            "lambda_min = {lambda} must lie in (0, 1); at 1 the optimal learning rate is 0 and nothing is learned"
        )));
    }
    let n = args.n;
    let mut lines = vec![
        ("mode", format!("{:?}", args.mode).to_lowercase()),
        ("n", n.to_string()),
        ("lambda_min", format!("{} [{source}]", fixed6(lambda))),
    ];
    match args.mode {
        TuneMode::Full => {
            let eta = args.eta.unwrap_or_else(|| eta_star_full(n, lambda));
            if !(eta > 0.0) {
                return Err(CliError::Usage(format!("eta = {eta} must be positive")));
            }
            let total = regret_bound_full(n, eta, lambda);
            lines.push(("eta", fixed6(eta)));
            lines.push(("regret_bound_total", fixed6(total)));
            lines.push(("regret_bound_average", fixed6(total / n as f64)));
        }
        TuneMode::Noloc => {
            let tuned = params_noloc(n, args.beta, lambda)?;
            let eta = args.eta.unwrap_or(tuned.eta);
            let epsilon = args.epsilon.unwrap_or(tuned.epsilon);
            if !(eta > 0.0) || !(epsilon > 0.0 && epsilon <= 1.0) {
                return Err(CliError::Usage("eta must be positive and epsilon must lie in (0, 1]".into()));
            }
            let total = regret_bound_noloc(n, args.beta, eta, epsilon, lambda);
            lines.push(("beta", fixed6(args.beta)));
            lines.push(("eta", fixed6(eta)));
            lines.push(("epsilon", fixed6(epsilon)));
            lines.push(("clamped", (args.epsilon.is_none() && tuned.clamped).to_string()));
            lines.push(("regret_bound_total", fixed6(total)));
            lines.push(("regret_bound_average", fixed6(total / n as f64)));
        }
    }
    for (key, value) in lines {
        writeln!(out, "{key} = {value}").map_err(stdout_error)?;
    }
    Ok(())
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Result<()> {
    let trace = generate_trace(&args.spec()?)?;
    match &args.out {
        Some(path) => write_trace_file(path, &trace),
        None => write_trace(out, &trace).map_err(stdout_error),
    }
}

fn oracle(args: OracleArgs, out: &mut dyn Write) -> Result<()> {
    let trace = read_trace(&args.trace)?;
    let samples = trace.samples();
    if args.cells == 0 || args.theta_grid == 0 {
        return Err(CliError::Usage("--cells and --theta-grid must be positive".into()));
    }
    let source = args.lambda.source();
    let lambda = source.resolve(samples)?;
    let eta = args.eta.unwrap_or_else(|| eta_star_full(trace.n(), lambda));
    let config = hil_core::Config64::new(args.beta, eta)?;

    let library = fixed_theta_optimum(samples, args.beta);
    let brute = brute_force_fixed_theta(samples, args.beta, args.theta_grid);
    let w = |e| stdout_error(e);
    writeln!(out, "# trace {} (n = {})", args.trace.display(), trace.n()).map_err(w)?;
    writeln!(out, "# lambda_min = {} [{source}], eta = {}", fixed6(lambda), fixed6(eta)).map_err(w)?;
    writeln!(
        out,
        "fixed threshold: library cost = {} (offloaded {}, misclassified {}), brute force cost = {} (offloaded {}, misclassified {}), equal = {}",
        fixed6(library.cost),
        library.offloaded,
        library.misclassified,
        fixed6(brute.cost),
        brute.offloaded,
        brute.misclassified,
        library.cost == brute.cost
    )
    .map_err(w)?;

    let reference = riemann_q_full(samples, args.beta, eta, args.cells, args.rounds);
    let mut learner = HilF::new(config)?;
    let mut rows = Vec::with_capacity(reference.len());
    let mut worst = 0.0f64;
    for (t, (s, q_ref)) in samples.iter().zip(&reference).enumerate() {
        let q = learner.step(*s)?.q;
        worst = worst.max((q - q_ref).abs());
        rows.push((t + 1, s.p, q, *q_ref));
    }
    writeln!(out, "q_t: {} rounds over {} cells, max |library - riemann| = {:.3e}", rows.len(), args.cells, worst)
        .map_err(w)?;
    if let Some(path) = &args.out {
        let mut file = csv::Writer::from_writer(create(path)?);
        let e = |e| csv_to_cli(path, e);
        file.write_record(["round", "p", "q_library", "q_riemann", "abs_diff"]).map_err(e)?;
        for (t, p, q, q_ref) in rows {
            file.write_record([t.to_string(), p.to_string(), format!("{q:.12}"), format!("{q_ref:.12}"), format!("{:.3e}", (q - q_ref).abs())])
                .map_err(e)?;
        }
        file.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}
