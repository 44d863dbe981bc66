//! Experiment orchestration: trace-order randomizations times decision
//! repetitions, regret against the best fixed threshold, and beta sweeps.
//!
//! Every (shuffle, repetition) cell owns its policy state and random stream,
//! so cells run in parallel. Outcomes are collected in cell order before
//! reduction, which keeps aggregated reports bitwise reproducible.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{count_cost, threshold_decision, Sample, Trace};
use crate::policies::{fixed_theta_optimum, HilF, HilN, LearningRate, PolicyConfig};
use crate::scalar::Real;
use crate::tuning::{eta_star_full, params_noloc, BoundReport};

/// Repetition index reserved for the trace-shuffle stream.
const SHUFFLE_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    HilF,
    HilN,
    Genie,
    FixedTheta,
    FullOffload,
    NoOffload,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::HilF,
        PolicyKind::HilN,
        PolicyKind::Genie,
        PolicyKind::FixedTheta,
        PolicyKind::FullOffload,
        PolicyKind::NoOffload,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::HilF => "hilf",
            PolicyKind::HilN => "hiln",
            PolicyKind::Genie => "genie",
            PolicyKind::FixedTheta => "fixed",
            PolicyKind::FullOffload => "full",
            PolicyKind::NoOffload => "none",
        }
    }

    /// Learners draw random decisions; the baselines are deterministic given
    /// the trace order.
    pub fn is_learner(self) -> bool {
        matches!(self, PolicyKind::HilF | PolicyKind::HilN)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown policy '{s}' (expected hilf, hiln, genie, fixed, full or none)"))
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for cell `(shuffle, rep)`:
/// `mix(mix(mix(master) ^ shuffle) ^ rep)` with the SplitMix64 finalizer.
pub fn derive_seed(master: u64, shuffle: u64, rep: u64) -> u64 {
    mix(mix(mix(master) ^ shuffle) ^ rep)
}

#[derive(Clone, Debug)]
pub struct ExperimentPlan<T> {
    pub trace: Trace<T>,
    pub policy: PolicyKind,
    pub config: PolicyConfig<T>,
    /// Trace-order randomizations.
    pub shuffles: usize,
    /// Decision-randomness repetitions per order.
    pub repetitions: usize,
    pub master_seed: u64,
    /// When `false`, every randomization replays the trace in file order.
    pub shuffle_order: bool,
    /// Record the mean cumulative regret after every round.
    pub track_curve: bool,
    /// Used only to attach a [`BoundReport`] for the learners.
    pub lambda_min: Option<T>,
}

impl<T: Real> ExperimentPlan<T> {
    pub fn new(trace: Trace<T>, policy: PolicyKind, config: PolicyConfig<T>) -> Self {
        Self {
            trace,
            policy,
            master_seed: config.seed,
            config,
            shuffles: 1,
            repetitions: 1,
            shuffle_order: true,
            track_curve: false,
            lambda_min: None,
        }
    }

    pub fn with_runs(mut self, shuffles: usize, repetitions: usize) -> Self {
        self.shuffles = shuffles;
        self.repetitions = repetitions;
        self
    }

    pub fn with_master_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_lambda_min(mut self, lambda_min: T) -> Self {
        self.lambda_min = Some(lambda_min);
        self
    }

    pub fn keep_order(mut self) -> Self {
        self.shuffle_order = false;
        self
    }

    pub fn tracking_curve(mut self) -> Self {
        self.track_curve = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.shuffles == 0 || self.repetitions == 0 {
            return Err(Error::InvalidPlan("shuffles and repetitions must be at least 1".into()));
        }
        self.config.validate()
    }

    /// Trace order used by randomization `shuffle`.
    pub fn order(&self, shuffle: usize) -> Vec<Sample<T>> {
        let mut order = self.trace.samples().to_vec();
        if self.shuffle_order {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.master_seed, shuffle as u64, SHUFFLE_STREAM));
            order.shuffle(&mut rng);
        }
        order
    }
}

/// Result of a single simulated pass over one trace order.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome<T> {
    pub total_cost: T,
    pub offloaded: usize,
    pub misclassified: usize,
    /// Cost of the best fixed threshold on the same order.
    pub optimum_cost: T,
    pub interval_count_max: usize,
    /// Cumulative regret after each round against the best fixed threshold
    /// of the prefix seen so far.
    pub curve: Option<Vec<T>>,
}

/// Best fixed threshold over a growing prefix, maintained incrementally.
struct PrefixOptimum<T> {
    boundaries: Vec<T>,
    losses: Vec<T>,
    never: T,
    all: T,
}

impl<T: Real> PrefixOptimum<T> {
    fn new() -> Self {
        Self { boundaries: vec![T::zero(), T::one()], losses: vec![T::zero()], never: T::zero(), all: T::zero() }
    }

    fn push(&mut self, sample: Sample<T>, beta: T) -> T {
        let k = self.boundaries.partition_point(|&b| b < sample.p);
        if self.boundaries[k] != sample.p {
            self.boundaries.insert(k, sample.p);
            self.losses.insert(k, self.losses[k - 1]);
        }
        let y: T = sample.y.cost();
        for (i, l) in self.losses.iter_mut().enumerate() {
            *l = *l + if i < k { y } else { beta };
        }
        self.never = self.never + y;
        self.all = self.all + beta;
        self.losses.iter().copied().fold(self.never.min(self.all), T::min)
    }
}

/// One round: whether the sample was offloaded, and the ledger size after it.
type Stepper<'a, T> = Box<dyn FnMut(Sample<T>) -> Result<(bool, usize)> + 'a>;

/// Simulates one pass of `policy` over `order`.
pub fn simulate<T: Real>(
    order: &[Sample<T>],
    policy: PolicyKind,
    config: &PolicyConfig<T>,
    seed: u64,
    track_curve: bool,
) -> Result<RunOutcome<T>> {
    let beta = config.beta.get();
    let optimum = fixed_theta_optimum(order, beta);
    let config = config.with_seed(seed);

    let mut learner: Stepper<'_, T> = match policy {
        PolicyKind::HilF => {
            let mut hilf = HilF::new(config)?;
            Box::new(move |s| hilf.step(s).map(|r| (r.offloaded, hilf.ledger().interval_count())))
        }
        PolicyKind::HilN => {
            let mut hiln = HilN::new(config)?;
            Box::new(move |s| hiln.step(s).map(|r| (r.offloaded, hiln.ledger().interval_count())))
        }
        PolicyKind::Genie => Box::new(|s| Ok((s.y.is_wrong(), 0))),
        PolicyKind::FullOffload => Box::new(|_| Ok((true, 0))),
        PolicyKind::NoOffload => Box::new(|_| Ok((false, 0))),
        PolicyKind::FixedTheta => {
            let theta = optimum.threshold.representative();
            Box::new(move |s| Ok((threshold_decision(s.p, theta), 0)))
        }
    };

    let mut offloaded = 0;
    let mut misclassified = 0;
    let mut interval_count_max = 0usize;
    let mut tracker = track_curve.then(PrefixOptimum::new);
    let mut curve = Vec::with_capacity(if track_curve { order.len() } else { 0 });
    for &sample in order {
        let (off, intervals) = learner(sample)?;
        interval_count_max = interval_count_max.max(intervals);
        if off {
            offloaded += 1;
        } else if sample.y.is_wrong() {
            misclassified += 1;
        }
        if let Some(tracker) = tracker.as_mut() {
            let best = tracker.push(sample, beta);
            curve.push(count_cost(beta, offloaded, misclassified) - best);
        }
    }

    Ok(RunOutcome {
        total_cost: count_cost(beta, offloaded, misclassified),
        offloaded,
        misclassified,
        optimum_cost: optimum.cost,
        interval_count_max,
        curve: track_curve.then_some(curve),
    })
}

/// Aggregated statistics over one or more runs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport<T> {
    pub policy: PolicyKind,
    pub n: usize,
    pub runs: usize,
    /// Mean of `total_cost / n`.
    pub avg_cost: T,
    pub stderr_cost: T,
    /// Mean of `(total_cost - optimum_cost) / n`, per run.
    pub avg_regret: T,
    pub stderr_regret: T,
    pub optimum_avg_cost: T,
    pub offloaded_mean: T,
    pub misclassified_mean: T,
    pub interval_count_max: usize,
    pub per_round_cumulative_regret: Option<Vec<T>>,
    pub bound: Option<BoundReport<T>>,
}

impl<T: Real> RunReport<T> {
    pub fn offload_rate(&self) -> T {
        self.offloaded_mean / T::from_count(self.n)
    }

    pub fn error_rate(&self) -> T {
        self.misclassified_mean / T::from_count(self.n)
    }

    /// Reduces outcomes in the order given.
    pub fn from_outcomes(policy: PolicyKind, n: usize, outcomes: &[RunOutcome<T>]) -> Self {
        let nn = T::from_count(n);
        let costs: Vec<T> = outcomes.iter().map(|o| o.total_cost / nn).collect();
        let regrets: Vec<T> = outcomes.iter().map(|o| (o.total_cost - o.optimum_cost) / nn).collect();
        let (avg_cost, stderr_cost) = mean_stderr(&costs);
        let (avg_regret, stderr_regret) = mean_stderr(&regrets);
        let runs = T::from_count(outcomes.len());
        let curve = outcomes.first().and_then(|o| o.curve.as_ref()).map(|first| {
            let mut acc = vec![T::zero(); first.len()];
            for o in outcomes {
                for (a, v) in acc.iter_mut().zip(o.curve.as_ref().expect("all runs track the curve")) {
                    *a = *a + *v;
                }
            }
            acc.into_iter().map(|a| a / runs).collect()
        });
        Self {
            policy,
            n,
            runs: outcomes.len(),
            avg_cost,
            stderr_cost,
            avg_regret,
            stderr_regret,
            optimum_avg_cost: mean_stderr(&outcomes.iter().map(|o| o.optimum_cost / nn).collect::<Vec<_>>()).0,
            offloaded_mean: outcomes.iter().map(|o| T::from_count(o.offloaded)).sum::<T>() / runs,
            misclassified_mean: outcomes.iter().map(|o| T::from_count(o.misclassified)).sum::<T>() / runs,
            interval_count_max: outcomes.iter().map(|o| o.interval_count_max).max().unwrap_or(0),
            per_round_cumulative_regret: curve,
            bound: None,
        }
    }
}

fn mean_stderr<T: Real>(xs: &[T]) -> (T, T) {
    let n = T::from_count(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    if xs.len() < 2 {
        return (mean, T::zero());
    }
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / (n - T::one());
    (mean, (var / n).sqrt())
}

/// A single run over `order`, reported as a one-run aggregate.
pub fn run_once<T: Real>(
    order: &[Sample<T>],
    policy: PolicyKind,
    config: &PolicyConfig<T>,
    seed: u64,
) -> Result<RunReport<T>> {
    if order.is_empty() {
        return Err(Error::EmptyTrace);
    }
    config.validate()?;
    let outcome = simulate(order, policy, config, seed, false)?;
    Ok(RunReport::from_outcomes(policy, order.len(), &[outcome]))
}

/// Runs `shuffles x repetitions` cells. Cell `(r, k)` replays order `r`
/// with decision seed `derive_seed(master, r, k)`. Deterministic baselines
/// are simulated once per order and counted `repetitions` times.
pub fn run_experiment<T: Real>(plan: &ExperimentPlan<T>) -> Result<RunReport<T>> {
    plan.validate()?;
    let orders: Vec<Vec<Sample<T>>> = (0..plan.shuffles).map(|r| plan.order(r)).collect();
    let reps = if plan.policy.is_learner() { plan.repetitions } else { 1 };
    let cells: Vec<(usize, usize)> = (0..plan.shuffles).flat_map(|r| (0..reps).map(move |k| (r, k))).collect();

    let outcomes: Vec<RunOutcome<T>> = cells
        .par_iter()
        .map(|&(r, k)| {
            let seed = derive_seed(plan.master_seed, r as u64, k as u64);
            simulate(&orders[r], plan.policy, &plan.config, seed, plan.track_curve)
        })
        .collect::<Result<_>>()?;

    let outcomes: Vec<RunOutcome<T>> = if reps == plan.repetitions {
        outcomes
    } else {
        outcomes
            .into_iter()
            .flat_map(|o| std::iter::repeat_n(o, plan.repetitions))
            .collect()
    };

    let n = plan.trace.n();
    let mut report = RunReport::from_outcomes(plan.policy, n, &outcomes);
    report.bound = match (plan.policy, plan.config.learning_rate, plan.lambda_min) {
        (PolicyKind::HilF, LearningRate::Fixed(eta), Some(lambda)) => Some(BoundReport::full(n, eta, lambda)),
        (PolicyKind::HilN, LearningRate::Fixed(eta), Some(lambda)) => Some(BoundReport::noloc(
            n,
            plan.config.beta.get(),
            eta,
            plan.config.epsilon,
            lambda,
        )),
        _ => None,
    };
    Ok(report)
}

/// Shared settings of a beta sweep.
#[derive(Clone, Debug)]
pub struct SweepParams<T> {
    pub shuffles: usize,
    pub repetitions: usize,
    pub master_seed: u64,
    pub shuffle_order: bool,
    pub delta_min: T,
    pub lambda_min: T,
    /// Overrides the bound-optimal learning rate when set.
    pub learning_rate: Option<LearningRate<T>>,
    /// Overrides the bound-optimal exploration rate when set.
    pub epsilon: Option<T>,
}

impl<T: Real> SweepParams<T> {
    pub fn new(lambda_min: T) -> Self {
        Self {
            shuffles: 1,
            repetitions: 1,
            master_seed: 0,
            shuffle_order: true,
            delta_min: T::zero(),
            lambda_min,
            learning_rate: None,
            epsilon: None,
        }
    }

    /// Learner configuration for `policy` at offload cost `beta`, tuned to
    /// the bound optimum unless overridden. At `beta = 0` the HIL-N optimum
    /// degenerates; exploration clamps to 1 (every sample offloaded, which is
    /// free) and the learning rate falls back to the full-feedback optimum.
    pub fn config(&self, policy: PolicyKind, n: usize, beta: T) -> Result<PolicyConfig<T>> {
        let eta_full = eta_star_full(n, self.lambda_min);
        let (rate, epsilon) = match policy {
            PolicyKind::HilN => {
                let tuned = if beta > T::zero() {
                    let p = params_noloc(n, beta, self.lambda_min)?;
                    (p.eta, p.epsilon)
                } else {
                    (eta_full, T::one())
                };
                (
                    self.learning_rate.unwrap_or(LearningRate::Fixed(tuned.0)),
                    self.epsilon.unwrap_or(tuned.1),
                )
            }
            _ => (self.learning_rate.unwrap_or(LearningRate::Fixed(eta_full)), T::one()),
        };
        if policy.is_learner() && rate == LearningRate::Fixed(T::zero()) {
            return Err(Error::InvalidTuning(
                "lambda_min = 1 gives eta = 0: the weights would never move".into(),
            ));
        }
        let base = if policy.is_learner() {
            PolicyConfig::new(beta, T::one())?.with_learning_rate(rate)?
        } else {
            PolicyConfig::new(beta, T::one())?
        };
        Ok(base.with_epsilon(epsilon)?.with_delta_min(self.delta_min)?.with_seed(self.master_seed))
    }
}

/// One (beta, policy) cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub beta: T,
    pub policy: PolicyKind,
    pub eta: Option<T>,
    pub epsilon: Option<T>,
    pub report: RunReport<T>,
}

/// Runs every policy at every beta with common random numbers (the same
/// master seed everywhere).
pub fn beta_sweep<T: Real>(
    trace: &Trace<T>,
    betas: &[T],
    policies: &[PolicyKind],
    params: &SweepParams<T>,
) -> Result<Vec<SweepRow<T>>> {
    let n = trace.n();
    let mut rows = Vec::with_capacity(betas.len() * policies.len());
    for &beta in betas {
        for &policy in policies {
            let config = params.config(policy, n, beta)?;
            let mut plan = ExperimentPlan::new(trace.clone(), policy, config)
                .with_runs(params.shuffles, params.repetitions)
                .with_master_seed(params.master_seed)
                .with_lambda_min(params.lambda_min);
            plan.shuffle_order = params.shuffle_order;
            let report = run_experiment(&plan)?;
            let learner = policy.is_learner();
            rows.push(SweepRow {
                beta,
                policy,
                eta: if learner { config.learning_rate.fixed() } else { None },
                epsilon: (policy == PolicyKind::HilN).then_some(config.epsilon),
                report,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Label;

    fn trace(v: &[(f64, u8)]) -> Trace<f64> {
        Trace::new(
            v.iter()
                .map(|&(p, y)| Sample::new(p, Label::from_bit(y as i64).unwrap()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn small() -> Trace<f64> {
        trace(&[(0.2, 1), (0.6, 0), (0.9, 0)])
    }

    #[test]
    fn policy_names_round_trip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.name().parse::<PolicyKind>().unwrap(), k);
        }
        assert!("hedge".parse::<PolicyKind>().is_err());
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
        assert_ne!(derive_seed(0, 0, 0), derive_seed(0, 0, 1));
        assert_ne!(derive_seed(0, 0, 0), derive_seed(1, 0, 0));
    }

    #[test]
    fn no_offload_average_cost() {
        let config = PolicyConfig::new(0.5, 0.1).unwrap();
        let r = run_once(small().samples(), PolicyKind::NoOffload, &config, 0).unwrap();
        assert!((r.avg_cost - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.runs, 1);
    }

    #[test]
    fn baselines_match_closed_forms() {
        let t = small();
        let config = PolicyConfig::new(0.5, 0.1).unwrap();
        let cost = |k| run_once(t.samples(), k, &config, 0).unwrap();
        assert_eq!(cost(PolicyKind::Genie).avg_cost, 0.5 / 3.0);
        assert_eq!(cost(PolicyKind::FullOffload).avg_cost, 1.5 / 3.0);
        let fixed = cost(PolicyKind::FixedTheta);
        assert_eq!(fixed.avg_cost, 0.5 / 3.0);
        assert_eq!(fixed.avg_regret, 0.0);
        assert_eq!((fixed.offloaded_mean, fixed.misclassified_mean), (1.0, 0.0));
    }

    #[test]
    fn single_cell_reduces_to_run_once() {
        let t = trace(&(0..200).map(|i| ((i * 37 % 200) as f64 / 200.0, (i % 3 == 0) as u8)).collect::<Vec<_>>());
        let config = PolicyConfig::new(0.4, 0.2).unwrap();
        let plan = ExperimentPlan::new(t.clone(), PolicyKind::HilF, config).with_master_seed(11);
        let agg = run_experiment(&plan).unwrap();
        let once = run_once(&plan.order(0), PolicyKind::HilF, &config, derive_seed(11, 0, 0)).unwrap();
        assert_eq!(agg, once);
    }

    #[test]
    fn deterministic_baselines_identical_across_reps() {
        let config = PolicyConfig::new(0.5, 0.1).unwrap();
        for policy in [PolicyKind::Genie, PolicyKind::FixedTheta, PolicyKind::FullOffload, PolicyKind::NoOffload] {
            let plan = ExperimentPlan::new(small(), policy, config).with_runs(3, 4);
            let r = run_experiment(&plan).unwrap();
            assert_eq!(r.runs, 12);
            assert_eq!(r.stderr_cost, 0.0);
        }
    }

    #[test]
    fn invalid_plan_rejected() {
        let config = PolicyConfig::new(0.5, 0.1).unwrap();
        let plan = ExperimentPlan::new(small(), PolicyKind::HilF, config).with_runs(0, 1);
        assert!(matches!(run_experiment(&plan), Err(Error::InvalidPlan(_))));
    }

    #[test]
    fn experiments_are_reproducible() {
        let t = trace(&(0..300).map(|i| ((i * 91 % 300) as f64 / 300.0, (i % 4 == 0) as u8)).collect::<Vec<_>>());
        let config = PolicyConfig::new(0.3, 0.15).unwrap().with_epsilon(0.3).unwrap();
        let plan = ExperimentPlan::new(t, PolicyKind::HilN, config)
            .with_runs(3, 3)
            .with_master_seed(5)
            .with_lambda_min(1.0 / 300.0)
            .tracking_curve();
        let a = run_experiment(&plan).unwrap();
        let b = run_experiment(&plan).unwrap();
        assert_eq!(a, b);
        let curve = a.per_round_cumulative_regret.as_ref().unwrap();
        assert_eq!(curve.len(), 300);
        assert!((curve[299] / 300.0 - a.avg_regret).abs() < 1e-9);
        assert!(a.bound.unwrap().epsilon.is_some());
    }

    #[test]
    fn prefix_optimum_matches_batch() {
        let t = trace(&[(0.3, 1), (0.0, 0), (1.0, 1), (0.3, 0), (0.7, 1), (0.1, 0)]);
        let mut tracker = PrefixOptimum::new();
        for (i, s) in t.samples().iter().enumerate() {
            let best = tracker.push(*s, 0.35);
            let batch = fixed_theta_optimum(&t.samples()[..=i], 0.35).cost;
            assert!((best - batch).abs() < 1e-12, "round {i}: {best} vs {batch}");
        }
    }

    #[test]
    fn sweep_shapes_and_zero_beta() {
        let t = trace(&(1..=100).map(|i| (i as f64 / 101.0, (i % 3 == 0) as u8)).collect::<Vec<_>>());
        let params = SweepParams { shuffles: 2, repetitions: 2, ..SweepParams::new(1.0 / 101.0) };
        let rows = beta_sweep(&t, &[0.0, 0.5], &PolicyKind::ALL, &params).unwrap();
        assert_eq!(rows.len(), 12);
        let at = |beta: f64, k| rows.iter().find(|r| r.beta == beta && r.policy == k).unwrap();
        assert_eq!(at(0.0, PolicyKind::FullOffload).report.avg_cost, 0.0);
        assert_eq!(at(0.0, PolicyKind::FixedTheta).report.avg_cost, 0.0);
        // Fewest offloads among zero-cost thresholds: everything up to the last error.
        assert_eq!(at(0.0, PolicyKind::FixedTheta).report.offloaded_mean, 99.0);
        assert_eq!(at(0.0, PolicyKind::HilN).report.avg_cost, 0.0);
        assert_eq!(at(0.0, PolicyKind::HilN).epsilon, Some(1.0));
        assert!(at(0.5, PolicyKind::HilF).eta.is_some());
    }
}
