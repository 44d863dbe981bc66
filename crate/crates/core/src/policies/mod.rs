//! The two online learners and the four reference policies.

mod baselines;

pub use baselines::{
    fixed_theta_optimum, full_offload_cost, genie_cost, no_offload_cost, FixedThetaOptimum,
    ThresholdSet,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ledger::IntervalLedger;
use crate::model::{realized_loss, Decision, Label, OffloadCost, Sample};
use crate::scalar::Real;

/// Learning-rate schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LearningRate<T> {
    Fixed(T),
    /// `eta_t = 1 / sqrt(t + 1)` for round `t = 1, 2, ...`.
    InverseSqrt,
}

impl<T: Real> LearningRate<T> {
    pub fn at(&self, t: usize) -> T {
        match *self {
            LearningRate::Fixed(eta) => eta,
            LearningRate::InverseSqrt => T::one() / T::from_count(t + 1).sqrt(),
        }
    }

    pub fn fixed(&self) -> Option<T> {
        match *self {
            LearningRate::Fixed(eta) => Some(eta),
            LearningRate::InverseSqrt => None,
        }
    }
}

/// Everything a learner needs to be reproducible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyConfig<T> {
    pub beta: OffloadCost<T>,
    pub learning_rate: LearningRate<T>,
    /// Exploration probability for HIL-N; ignored by HIL-F.
    pub epsilon: T,
    pub delta_min: T,
    pub seed: u64,
}

impl<T: Real> PolicyConfig<T> {
    pub fn new(beta: T, eta: T) -> Result<Self> {
        let config = Self {
            beta: OffloadCost::new(beta)?,
            learning_rate: LearningRate::Fixed(eta),
            epsilon: T::one(),
            delta_min: T::zero(),
            seed: 0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate().map(|_| self)
    }

    pub fn with_delta_min(mut self, delta_min: T) -> Result<Self> {
        self.delta_min = delta_min;
        self.validate().map(|_| self)
    }

    pub fn with_learning_rate(mut self, learning_rate: LearningRate<T>) -> Result<Self> {
        self.learning_rate = learning_rate;
        self.validate().map(|_| self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Learning rates must be positive. A zero rate is only reachable
    /// through [`PolicyConfig::frozen`], which is meant for tests.
    pub fn validate(&self) -> Result<()> {
        if let LearningRate::Fixed(eta) = self.learning_rate {
            if !(eta > T::zero() && eta.is_finite()) {
                return Err(Error::InvalidLearningRate { value: eta.as_f64() });
            }
        }
        if !(self.epsilon > T::zero() && self.epsilon <= T::one()) {
            return Err(Error::InvalidEpsilon { value: self.epsilon.as_f64() });
        }
        if !(self.delta_min >= T::zero() && self.delta_min < T::one()) {
            return Err(Error::InvalidDeltaMin { value: self.delta_min.as_f64() });
        }
        Ok(())
    }

    /// A configuration with `eta = 0`: weights never move and `q_t = p_t`.
    pub fn frozen(beta: T) -> Result<Self> {
        Ok(Self {
            beta: OffloadCost::new(beta)?,
            learning_rate: LearningRate::Fixed(T::zero()),
            epsilon: T::one(),
            delta_min: T::zero(),
            seed: 0,
        })
    }
}

/// Per-round decision trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundRecord<T> {
    /// Round index, starting at 1.
    pub t: usize,
    pub p: T,
    pub q: T,
    /// `true` when the Bernoulli(q) draw said "accept locally".
    pub q_draw: bool,
    pub explore_draw: Option<bool>,
    pub offloaded: bool,
    pub incurred_cost: T,
    /// Loss applied to thresholds at or below `p` (HIL-N only): `y / epsilon`
    /// or zero.
    pub pseudo_loss_used: Option<T>,
    /// Ground truth, kept for accounting only.
    pub y: Label,
}

impl<T: Real> RoundRecord<T> {
    pub fn misclassified(&self) -> bool {
        !self.offloaded && self.y.is_wrong()
    }
}

fn bernoulli<T: Real, R: Rng + ?Sized>(rng: &mut R, prob: T) -> bool {
    T::lit(rng.random::<f64>()) < prob
}

/// One HIL-F round: decide with `q = ledger.q(p)`, then learn from the full
/// feedback `y`.
pub fn hilf_round<T: Real, R: Rng + ?Sized>(
    ledger: &mut IntervalLedger<T>,
    t: usize,
    sample: Sample<T>,
    config: &PolicyConfig<T>,
    rng: &mut R,
) -> Result<RoundRecord<T>> {
    let beta = config.beta.get();
    let q = ledger.q(sample.p);
    let decision = Decision::new(q, bernoulli(rng, q), None);
    let incurred_cost = realized_loss(decision.offload, sample.y, beta);

    ledger.insert(sample.p)?;
    ledger.update_full(sample.p, sample.y, beta, config.learning_rate.at(t))?;

    Ok(RoundRecord {
        t,
        p: sample.p,
        q,
        q_draw: decision.q_draw,
        explore_draw: None,
        offloaded: decision.offload,
        incurred_cost,
        pseudo_loss_used: None,
        y: sample.y,
    })
}

/// One HIL-N round. `Q_t` is drawn before `Z_t` from the same stream. The
/// label is passed to the weight update only when `Z_t = 1`; offloads caused
/// by `Q_t = 0` alone reveal `y` to the device but the pseudo-loss ignores it.
pub fn hiln_round<T: Real, R: Rng + ?Sized>(
    ledger: &mut IntervalLedger<T>,
    t: usize,
    sample: Sample<T>,
    config: &PolicyConfig<T>,
    rng: &mut R,
) -> Result<RoundRecord<T>> {
    let beta = config.beta.get();
    let epsilon = config.epsilon;
    let q = ledger.q(sample.p);
    let q_draw = bernoulli(rng, q);
    let explore = bernoulli(rng, epsilon);
    let decision = Decision::new(q, q_draw, Some(explore));
    let incurred_cost = realized_loss(decision.offload, sample.y, beta);

    let revealed = explore.then_some(sample.y);
    let below = revealed.map_or(T::zero(), |y| y.cost::<T>() / epsilon);
    ledger.insert(sample.p)?;
    ledger.update_noloc(sample.p, revealed, explore, beta, config.learning_rate.at(t), epsilon)?;

    Ok(RoundRecord {
        t,
        p: sample.p,
        q,
        q_draw,
        explore_draw: Some(explore),
        offloaded: decision.offload,
        incurred_cost,
        pseudo_loss_used: Some(below),
        y: sample.y,
    })
}

macro_rules! learner {
    ($(#[$doc:meta])* $name:ident, $round:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug)]
        pub struct $name<T> {
            ledger: IntervalLedger<T>,
            config: PolicyConfig<T>,
            rng: ChaCha8Rng,
            t: usize,
        }

        impl<T: Real> $name<T> {
            pub fn new(config: PolicyConfig<T>) -> Result<Self> {
                Ok(Self {
                    ledger: IntervalLedger::new(config.delta_min)?,
                    rng: ChaCha8Rng::seed_from_u64(config.seed),
                    config,
                    t: 0,
                })
            }

            pub fn step(&mut self, sample: Sample<T>) -> Result<RoundRecord<T>> {
                self.t += 1;
                $round(&mut self.ledger, self.t, sample, &self.config, &mut self.rng)
            }

            pub fn ledger(&self) -> &IntervalLedger<T> {
                &self.ledger
            }

            pub fn config(&self) -> &PolicyConfig<T> {
                &self.config
            }

            /// Rounds played so far.
            pub fn rounds(&self) -> usize {
                self.t
            }
        }
    };
}

learner!(
    /// Full-feedback learner: the label is observed every round.
    HilF,
    hilf_round
);
learner!(
    /// No-local-feedback learner: the label is observed only for offloaded
    /// samples, with forced exploratory offloads at rate `epsilon`.
    HilN,
    hiln_round
);
