//! Domain types, the threshold decision rule and the per-round losses.

use std::fmt;

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ground-truth cost of accepting the local inference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// Local top-1 class is correct (`y = 0`).
    Correct,
    /// Local top-1 class is wrong (`y = 1`).
    Wrong,
}

impl Label {
    pub fn from_bit(bit: i64) -> Result<Self> {
        match bit {
            0 => Ok(Label::Correct),
            1 => Ok(Label::Wrong),
            value => Err(Error::InvalidLabel { value }),
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Label::Correct => 0,
            Label::Wrong => 1,
        }
    }

    pub fn is_wrong(self) -> bool {
        self == Label::Wrong
    }

    /// The label as a cost in `{0, 1}`.
    pub fn cost<T: Num>(self) -> T {
        match self {
            Label::Correct => T::zero(),
            Label::Wrong => T::one(),
        }
    }
}

impl From<bool> for Label {
    fn from(wrong: bool) -> Self {
        if wrong {
            Label::Wrong
        } else {
            Label::Correct
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// One round's observation: top-1 confidence and ground-truth cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample<T> {
    pub p: T,
    pub y: Label,
}

impl<T: Num + PartialOrd + Copy> Sample<T> {
    /// Validates `0 <= p <= 1`. NaN is rejected by the comparison.
    pub fn new(p: T, y: Label) -> Result<Self>
    where
        T: num_traits::ToPrimitive,
    {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::ProbabilityOutOfRange { value: p.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { p, y })
    }
}

/// An ordered, non-empty sequence of samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<T> {
    samples: Vec<Sample<T>>,
}

impl<T: Copy> Trace<T> {
    pub fn new(samples: Vec<Sample<T>>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyTrace);
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[Sample<T>] {
        &self.samples
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn into_samples(self) -> Vec<Sample<T>> {
        self.samples
    }

    /// Number of samples whose local inference is wrong.
    pub fn error_count(&self) -> usize {
        self.samples.iter().filter(|s| s.y.is_wrong()).count()
    }
}

impl<T> AsRef<[Sample<T>]> for Trace<T> {
    fn as_ref(&self) -> &[Sample<T>] {
        &self.samples
    }
}

/// Per-sample offloading cost `beta` in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OffloadCost<T>(T);

impl<T: Real> OffloadCost<T> {
    pub fn new(beta: T) -> Result<Self> {
        if !(beta >= T::zero() && beta < T::one()) {
            return Err(Error::InvalidOffloadCost { value: beta.as_f64() });
        }
        Ok(Self(beta))
    }
}

impl<T: Copy> OffloadCost<T> {
    pub fn get(self) -> T {
        self.0
    }
}

/// Outcome of one round's randomized decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision<T> {
    pub offload: bool,
    /// Probability of not offloading.
    pub q: T,
    /// Bernoulli(q) draw; `true` means "accept locally".
    pub q_draw: bool,
    /// Bernoulli(epsilon) exploration draw, HIL-N only.
    pub explore_draw: Option<bool>,
}

impl<T> Decision<T> {
    pub fn new(q: T, q_draw: bool, explore_draw: Option<bool>) -> Self {
        let offload = !q_draw || explore_draw.unwrap_or(false);
        Self { offload, q, q_draw, explore_draw }
    }
}

/// `true` (offload) iff `p < theta`. The tie `p == theta` keeps the sample local.
pub fn threshold_decision<T: PartialOrd>(p: T, theta: T) -> bool {
    p < theta
}

/// Cost actually paid in a round: `beta` when offloaded, `y` otherwise.
pub fn realized_loss<T: Num + Copy>(offload: bool, y: Label, beta: T) -> T {
    if offload {
        beta
    } else {
        y.cost()
    }
}

/// Importance-weighted surrogate used by the no-local-feedback learner for
/// threshold `theta`: `beta` above `p`, `y / epsilon` at or below `p` when the
/// exploration draw fired, zero otherwise.
pub fn pseudo_loss<T: Num + Copy + PartialOrd>(
    p: T,
    theta: T,
    y: Label,
    explore: bool,
    beta: T,
    epsilon: T,
) -> T {
    if threshold_decision(p, theta) {
        beta
    } else if explore {
        y.cost::<T>() / epsilon
    } else {
        T::zero()
    }
}

/// Expected realized cost of a HIL-N round given `q` and `epsilon`:
/// `beta (1 - q + q eps) + q (1 - eps) y`.
pub fn expected_noloc_cost<T: Num + Copy>(q: T, epsilon: T, y: Label, beta: T) -> T {
    beta * (T::one() - q + q * epsilon) + q * (T::one() - epsilon) * y.cost()
}

/// `beta * offloaded + misclassified`, the total cost of a deterministic
/// policy. Every baseline cost goes through this so that equal counts give
/// bitwise-equal costs.
pub fn count_cost<T: Num + Copy + FromPrimitive>(beta: T, offloaded: usize, misclassified: usize) -> T {
    beta * T::from_usize(offloaded).expect("count fits")
        + T::from_usize(misclassified).expect("count fits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    #[test]
    fn realized_loss_branches() {
        assert_eq!(realized_loss(true, Label::Wrong, 0.5), 0.5);
        assert_eq!(realized_loss(false, Label::Correct, 0.5), 0.0);
        assert_eq!(realized_loss(false, Label::Wrong, 0.5), 1.0);
    }

    #[test]
    fn threshold_examples() {
        assert!(!threshold_decision(0.45, 0.45));
        assert!(threshold_decision(0.2, 0.45));
        assert!(!threshold_decision(1.0, 1.0));
    }

    #[test]
    fn rejects_bad_beta_and_p() {
        assert!(OffloadCost::new(0.0).is_ok());
        assert!(matches!(OffloadCost::new(1.0), Err(Error::InvalidOffloadCost { .. })));
        assert!(OffloadCost::new(-0.1).is_err());
        assert!(OffloadCost::new(f64::NAN).is_err());
        assert!(Sample::new(1.2, Label::Correct).is_err());
        assert!(Sample::new(f64::NAN, Label::Correct).is_err());
        assert!(Sample::new(0.0, Label::Wrong).is_ok());
        assert_eq!(Label::from_bit(2), Err(Error::InvalidLabel { value: 2 }));
        assert!(Trace::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn decision_offloads_on_either_draw() {
        assert!(!Decision::new(0.5, true, None).offload);
        assert!(Decision::new(0.5, false, None).offload);
        assert!(Decision::new(0.5, true, Some(true)).offload);
        assert!(!Decision::new(0.5, true, Some(false)).offload);
        assert!(Decision::new(0.5, false, Some(false)).offload);
    }

    #[test]
    fn pseudo_loss_is_unbiased_exactly() {
        for k in 1..=100i64 {
            let eps = Ratio::new(k, 100);
            let beta = Ratio::new(3, 10);
            for y in [Label::Correct, Label::Wrong] {
                for (p, theta) in [(Ratio::new(3, 5), Ratio::new(1, 5)), (Ratio::new(1, 5), Ratio::new(3, 5))] {
                    let one = Ratio::from_integer(1);
                    let mean = (one - eps) * pseudo_loss(p, theta, y, false, beta, eps)
                        + eps * pseudo_loss(p, theta, y, true, beta, eps);
                    let offload = threshold_decision(p, theta);
                    assert_eq!(mean, realized_loss(offload, y, beta));
                }
            }
        }
    }

    #[test]
    fn expected_noloc_cost_by_enumeration() {
        let (q, eps, beta): (f64, f64, f64) = (0.5, 0.2, 0.3);
        // (Q, Z) in {0,1}^2; only Q=1, Z=0 keeps the sample local.
        let mut expected = 0.0;
        for q_draw in [false, true] {
            for z in [false, true] {
                let pr = if q_draw { q } else { 1.0 - q } * if z { eps } else { 1.0 - eps };
                let d = Decision::new(q, q_draw, Some(z));
                expected += pr * realized_loss(d.offload, Label::Wrong, beta);
            }
        }
        let closed = expected_noloc_cost(q, eps, Label::Wrong, beta);
        assert!((expected - 0.58).abs() < 1e-12);
        assert!((closed - 0.58).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn loss_is_bounded(offload: bool, wrong: bool, beta in 0.0f64..1.0) {
            let l = realized_loss(offload, Label::from(wrong), beta);
            prop_assert!((0.0..=1.0).contains(&l));
        }

        #[test]
        fn zero_threshold_never_offloads(p in 0.0f64..=1.0) {
            prop_assert!(!threshold_decision(p, 0.0));
        }

        #[test]
        fn decision_monotone_in_theta(p in 0.0f64..=1.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(!threshold_decision(p, lo) || threshold_decision(p, hi));
            prop_assert_eq!(threshold_decision(p, hi), hi > p);
        }
    }
}
