//! Online learners for hierarchical-inference offloading.
//!
//! An edge device runs a small classifier and sees its top-1 confidence `p`
//! for every sample. It either accepts the local inference (cost `y`, which is
//! 1 when the local label is wrong) or offloads the sample to a server (cost
//! `beta`). The learners here choose randomized thresholds on `p` with an
//! exponentially weighted forecaster over the continuum of thresholds in
//! `[0, 1]`, represented exactly by a piecewise-constant [`ledger`].
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`model`] | samples, traces, decision rule, realized and pseudo losses |
//! | [`ledger`] | non-uniform interval partition with log-domain weights |
//! | [`policies`] | HIL-F, HIL-N and the four baselines |
//! | [`tuning`] | closed-form learning rates and regret bound evaluators |
//! | [`harness`] | shuffled/repeated experiments, regret aggregation, sweeps |
//!
//! Everything numeric is generic over a [`Real`] scalar (`f32` or `f64`).
//! The loss functions and the fixed-threshold baselines only need field
//! arithmetic, so they also accept exact rationals. The aliases below fix
//! the scalar to `f64`, which is what the CLI uses.

pub mod error;
pub mod harness;
pub mod ledger;
pub mod model;
pub mod policies;
pub mod scalar;
pub mod tuning;

pub use error::{Error, Result};
pub use harness::{
    beta_sweep, derive_seed, run_experiment, run_once, ExperimentPlan, PolicyKind, RunReport,
    SweepParams, SweepRow,
};
pub use ledger::{Insertion, IntervalLedger};
pub use model::{realized_loss, threshold_decision, Decision, Label, OffloadCost, Sample, Trace};
pub use policies::{
    fixed_theta_optimum, full_offload_cost, genie_cost, no_offload_cost, FixedThetaOptimum, HilF,
    HilN, LearningRate, PolicyConfig, RoundRecord, ThresholdSet,
};
pub use scalar::Real;
pub use tuning::{BoundReport, LambdaMinSource, NolocParams};

/// Interval ledger over `f64`.
pub type Ledger = IntervalLedger<f64>;
/// One observation over `f64`.
pub type Sample64 = Sample<f64>;
/// A trace over `f64`.
pub type Trace64 = Trace<f64>;
/// Policy configuration over `f64`.
pub type Config64 = PolicyConfig<f64>;
/// Aggregated run report over `f64`.
pub type Report64 = RunReport<f64>;
/// Interval ledger over `f32`, for memory-constrained replay.
pub type LedgerF32 = IntervalLedger<f32>;
