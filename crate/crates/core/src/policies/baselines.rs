use num_traits::{FromPrimitive, Num};

use crate::model::{count_cost, Sample};

/// A set of thresholds that all induce the same offloading decisions on a trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThresholdSet<T> {
    /// `theta = 0`: nothing is offloaded, not even samples with `p = 0`.
    NeverOffload,
    /// `theta` in `(lower, upper]`.
    Interval { lower: T, upper: T },
    /// `theta > 1`: everything is offloaded, including samples with `p = 1`.
    OffloadAll,
}

impl<T: Num + Copy> ThresholdSet<T> {
    /// A threshold from the set. For intervals this is the upper end, which
    /// is exactly representable.
    pub fn representative(&self) -> T {
        match *self {
            ThresholdSet::NeverOffload => T::zero(),
            ThresholdSet::Interval { upper, .. } => upper,
            ThresholdSet::OffloadAll => T::one() + T::one(),
        }
    }
}

/// Best fixed threshold in hindsight and the cost it achieves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedThetaOptimum<T> {
    pub threshold: ThresholdSet<T>,
    pub offloaded: usize,
    pub misclassified: usize,
    pub cost: T,
}

/// Non-causal lower envelope: offload exactly the misclassified samples.
pub fn genie_cost<T: Num + Copy + FromPrimitive>(samples: &[Sample<T>], beta: T) -> T {
    count_cost(beta, errors(samples), 0)
}

pub fn full_offload_cost<T: Num + Copy + FromPrimitive>(samples: &[Sample<T>], beta: T) -> T {
    count_cost(beta, samples.len(), 0)
}

pub fn no_offload_cost<T: Num + Copy + FromPrimitive>(samples: &[Sample<T>]) -> T {
    count_cost(T::zero(), 0, errors(samples))
}

fn errors<T>(samples: &[Sample<T>]) -> usize {
    samples.iter().filter(|s| s.y.is_wrong()).count()
}

/// Scans every interval between consecutive distinct confidence values.
/// The interval `(p_[i-1], p_[i]]` offloads the samples with `p <= p_[i-1]`
/// and pays for the errors of the rest. The two endpoint sets `theta = 0`
/// and `theta > 1` are included when they differ from the adjacent interval,
/// i.e. when some sample has `p = 0` or `p = 1`. Ties go to the set with the
/// fewest offloads. Cost is permutation invariant in the trace.
///
/// Samples must carry validated probabilities; an empty slice yields the
/// single interval `(0, 1]` with zero cost.
pub fn fixed_theta_optimum<T>(samples: &[Sample<T>], beta: T) -> FixedThetaOptimum<T>
where
    T: Num + Copy + PartialOrd + FromPrimitive,
{
    let mut sorted: Vec<&Sample<T>> = samples.iter().collect();
    sorted.sort_by(|a, b| a.p.partial_cmp(&b.p).expect("validated probability"));
    let total_errors = errors(samples);

    let mut best: Option<FixedThetaOptimum<T>> = None;
    let mut consider = |threshold: ThresholdSet<T>, offloaded: usize, offloaded_errors: usize| {
        let misclassified = total_errors - offloaded_errors;
        let cost = count_cost(beta, offloaded, misclassified);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(FixedThetaOptimum { threshold, offloaded, misclassified, cost });
        }
    };

    let mut offloaded = 0;
    let mut offloaded_errors = 0;
    let mut lower = T::zero();
    let mut i = 0;
    while i < sorted.len() {
        let value = sorted[i].p;
        let group_end = i + sorted[i..].iter().take_while(|s| s.p == value).count();
        let group_errors = sorted[i..group_end].iter().filter(|s| s.y.is_wrong()).count();

        if value == T::zero() {
            consider(ThresholdSet::NeverOffload, offloaded, offloaded_errors);
        } else {
            consider(ThresholdSet::Interval { lower, upper: value }, offloaded, offloaded_errors);
            lower = value;
        }
        offloaded += group_end - i;
        offloaded_errors += group_errors;
        if value == T::one() {
            consider(ThresholdSet::OffloadAll, offloaded, offloaded_errors);
        }
        i = group_end;
    }
    if lower != T::one() {
        consider(ThresholdSet::Interval { lower, upper: T::one() }, offloaded, offloaded_errors);
    }
    best.expect("at least one candidate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{realized_loss, threshold_decision, Label};
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn trace(v: &[(f64, u8)]) -> Vec<Sample<f64>> {
        v.iter()
            .map(|&(p, y)| Sample::new(p, Label::from_bit(y as i64).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn three_sample_example() {
        let t = trace(&[(0.2, 1), (0.6, 0), (0.9, 0)]);
        assert_eq!(genie_cost(&t, 0.5), 0.5);
        assert_eq!(full_offload_cost(&t, 0.5), 1.5);
        assert_eq!(no_offload_cost(&t), 1.0);
        let opt = fixed_theta_optimum(&t, 0.5);
        assert_eq!(opt.threshold, ThresholdSet::Interval { lower: 0.2, upper: 0.6 });
        assert_eq!(opt.cost, 0.5);
        assert_eq!((opt.offloaded, opt.misclassified), (1, 0));
    }

    #[test]
    fn all_correct_trace_never_offloads() {
        let t = trace(&[(0.3, 0), (0.7, 0), (0.5, 0)]);
        assert_eq!(genie_cost(&t, 0.4), 0.0);
        assert_eq!(no_offload_cost(&t), 0.0);
        let opt = fixed_theta_optimum(&t, 0.4);
        assert_eq!(opt.threshold, ThresholdSet::Interval { lower: 0.0, upper: 0.3 });
        assert_eq!(opt.cost, 0.0);
    }

    #[test]
    fn endpoint_sets() {
        // A confident mistake at p = 1 can only be avoided by offloading everything.
        let t = trace(&[(1.0, 1), (1.0, 1), (0.5, 0)]);
        let opt = fixed_theta_optimum(&t, 0.3);
        assert_eq!(opt.threshold, ThresholdSet::OffloadAll);
        assert_eq!(opt.offloaded, 3);
        // Correct samples at p = 0 are best kept local with theta = 0.
        let t = trace(&[(0.0, 0), (0.0, 0), (0.5, 1)]);
        let opt = fixed_theta_optimum(&t, 0.9);
        assert_eq!(opt.threshold, ThresholdSet::NeverOffload);
        assert_eq!(opt.cost, 1.0);
    }

    #[test]
    fn repeated_values_are_grouped() {
        let t = trace(&[(0.5, 1), (0.5, 1), (0.5, 0), (0.8, 0)]);
        let opt = fixed_theta_optimum(&t, 0.5);
        // Offloading the three p = 0.5 samples: 1.5 vs keeping them: 2.
        assert_eq!(opt.threshold, ThresholdSet::Interval { lower: 0.5, upper: 0.8 });
        assert_eq!(opt.cost, 1.5);
    }

    #[test]
    fn works_over_rationals() {
        let r = |n, d| Ratio::new(n, d);
        let t: Vec<Sample<Ratio<i64>>> = [(r(1, 5), 1), (r(3, 5), 0), (r(9, 10), 0)]
            .iter()
            .map(|&(p, y)| Sample::new(p, Label::from_bit(y).unwrap()).unwrap())
            .collect();
        let opt = fixed_theta_optimum(&t, r(1, 2));
        assert_eq!(opt.cost, r(1, 2));
        assert_eq!(genie_cost(&t, r(1, 2)), r(1, 2));
    }

    fn rational_trace() -> impl Strategy<Value = Vec<Sample<Ratio<i64>>>> {
        prop::collection::vec((0i64..=16, any::<bool>()), 1..30).prop_map(|v| {
            v.into_iter()
                .map(|(k, wrong)| Sample::new(Ratio::new(k, 16), Label::from(wrong)).unwrap())
                .collect()
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force_exactly(t in rational_trace(), b in 0i64..20) {
            let beta = Ratio::new(b, 20);
            let opt = fixed_theta_optimum(&t, beta);
            // Every threshold on a 1/64 grid plus one above 1.
            let thetas = (0..=64).map(|k| Ratio::new(k, 64)).chain([Ratio::from_integer(2)]);
            let brute = thetas
                .map(|theta| t.iter().map(|s| realized_loss(threshold_decision(s.p, theta), s.y, beta))
                    .fold(Ratio::from_integer(0), |a, c| a + c))
                .min()
                .unwrap();
            prop_assert_eq!(opt.cost, brute);
            let rep = opt.threshold.representative();
            let realized = t.iter().map(|s| realized_loss(threshold_decision(s.p, rep), s.y, beta))
                .fold(Ratio::from_integer(0), |a, c| a + c);
            prop_assert_eq!(realized, opt.cost);
        }

        #[test]
        fn baseline_ordering(t in rational_trace(), b in 0i64..20) {
            let beta = Ratio::new(b, 20);
            let opt = fixed_theta_optimum(&t, beta).cost;
            prop_assert!(genie_cost(&t, beta) <= opt);
            prop_assert!(opt <= full_offload_cost(&t, beta));
            prop_assert!(opt <= no_offload_cost(&t));
        }

        #[test]
        fn order_invariant(mut t in rational_trace(), b in 0i64..20, rot in 0usize..30) {
            let beta = Ratio::new(b, 20);
            let before = fixed_theta_optimum(&t, beta);
            let len = t.len();
            t.rotate_left(rot % len);
            t.reverse();
            prop_assert_eq!(before, fixed_theta_optimum(&t, beta));
        }
    }
}
