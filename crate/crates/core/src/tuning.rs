//! Closed-form parameter choices and regret bound evaluators.
//!
//! `lambda_min` is the smallest gap between distinct confidence values and
//! plays the role of `1 / (number of experts)` in every bound below.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::Sample;
use crate::scalar::Real;

/// Smallest gap between distinct `p` values; 1 when all values coincide.
pub fn lambda_min_exact<T: Real>(samples: &[Sample<T>]) -> T {
    let mut ps: Vec<T> = samples.iter().map(|s| s.p).collect();
    ps.sort_by(|a, b| a.partial_cmp(b).expect("validated probability"));
    ps.dedup();
    ps.windows(2).map(|w| w[1] - w[0]).fold(T::one(), T::min)
}

/// Confidences quantized to `bits` bits are multiples of `2^-bits`.
pub fn lambda_min_quantized<T: Real>(bits: u32) -> T {
    T::lit(0.5).powi(bits as i32)
}

/// Fallback `1 / (n + 1)`.
pub fn lambda_min_default<T: Real>(n: usize) -> T {
    T::one() / T::from_count(n + 1)
}

/// Where `lambda_min` came from; echoed in reports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaMinSource<T> {
    Explicit(T),
    Quantized(u32),
    ExactFromTrace,
    Default,
}

impl<T: Real> LambdaMinSource<T> {
    /// Picks the source by precedence: explicit value, then quantization bits,
    /// then the exact gap if requested, then `1 / (n + 1)`.
    pub fn select(explicit: Option<T>, bits: Option<u32>, exact: bool) -> Self {
        match (explicit, bits) {
            (Some(v), _) => LambdaMinSource::Explicit(v),
            (None, Some(b)) => LambdaMinSource::Quantized(b),
            (None, None) if exact => LambdaMinSource::ExactFromTrace,
            _ => LambdaMinSource::Default,
        }
    }

    pub fn resolve(&self, samples: &[Sample<T>]) -> Result<T> {
        let value = match *self {
            LambdaMinSource::Explicit(v) => v,
            LambdaMinSource::Quantized(bits) => {
                if bits == 0 {
                    return Err(Error::InvalidTuning("quantization needs at least 1 bit".into()));
                }
                lambda_min_quantized(bits)
            }
            LambdaMinSource::ExactFromTrace => lambda_min_exact(samples),
            LambdaMinSource::Default => lambda_min_default(samples.len()),
        };
        if !(value > T::zero() && value <= T::one()) {
            return Err(Error::InvalidTuning(format!("lambda_min = {value} must lie in (0, 1]")));
        }
        Ok(value)
    }
}

impl<T: Real> fmt::Display for LambdaMinSource<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaMinSource::Explicit(_) => write!(f, "explicit"),
            LambdaMinSource::Quantized(bits) => write!(f, "quantized to {bits} bits"),
            LambdaMinSource::ExactFromTrace => write!(f, "exact gap from trace"),
            LambdaMinSource::Default => write!(f, "default 1/(n+1)"),
        }
    }
}

/// Learning rate minimizing the full-feedback bound: `sqrt(8 ln(1/lambda) / n)`.
/// Returns 0 for `lambda_min = 1`, which callers must treat as degenerate.
pub fn eta_star_full<T: Real>(n: usize, lambda_min: T) -> T {
    (T::lit(8.0) * lambda_min.recip().ln() / T::from_count(n)).sqrt()
}

/// `(1/eta) ln(1/lambda) + n eta / 8`.
pub fn regret_bound_full<T: Real>(n: usize, eta: T, lambda_min: T) -> T {
    lambda_min.recip().ln() / eta + T::from_count(n) * eta / T::lit(8.0)
}

/// `g(eps, eta) = n beta eps + n eta / (2 eps) + (1/eta) ln(1/lambda)`.
pub fn regret_bound_noloc<T: Real>(n: usize, beta: T, eta: T, epsilon: T, lambda_min: T) -> T {
    let n = T::from_count(n);
    n * beta * epsilon + n * eta / (T::lit(2.0) * epsilon) + lambda_min.recip().ln() / eta
}

/// Minimizer of `g` with the exploration rate clamped to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NolocParams<T> {
    pub eta: T,
    pub epsilon: T,
    /// `true` when `sqrt(eta / (2 beta)) > 1` and `epsilon` was clamped to 1,
    /// in which case HIL-N offloads every sample.
    pub clamped: bool,
}

/// `eta = (2 ln^2(1/lambda) / (beta n^2))^(1/3)`, `eps = min(1, sqrt(eta / (2 beta)))`.
pub fn params_noloc<T: Real>(n: usize, beta: T, lambda_min: T) -> Result<NolocParams<T>> {
    if n == 0 {
        return Err(Error::InvalidTuning("horizon n must be at least 1".into()));
    }
    if !(beta > T::zero() && beta < T::one()) {
        return Err(Error::InvalidTuning(format!(
            "beta = {beta} must lie in (0, 1); as beta -> 0 the exploration rate clamps to 1 and \
             the learner offloads every sample"
        )));
    }
    if !(lambda_min > T::zero() && lambda_min < T::one()) {
        return Err(Error::InvalidTuning(format!("lambda_min = {lambda_min} must lie in (0, 1)")));
    }
    let ln = lambda_min.recip().ln();
    let nn = T::from_count(n);
    let eta = (T::lit(2.0) * ln * ln / (beta * nn * nn)).cbrt();
    let unclamped = (eta / (T::lit(2.0) * beta)).sqrt();
    Ok(NolocParams { eta, epsilon: unclamped.min(T::one()), clamped: unclamped > T::one() })
}

/// Bound value at the unclamped optimum: `3 n^(2/3) (beta ln(1/lambda) / 2)^(1/3)`.
pub fn regret_bound_noloc_optimal<T: Real>(n: usize, beta: T, lambda_min: T) -> T {
    let n = T::from_count(n);
    T::lit(3.0) * n.powf(T::lit(2.0 / 3.0)) * (beta * lambda_min.recip().ln() / T::lit(2.0)).cbrt()
}

/// Learning parameters together with the bound they guarantee.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub eta: T,
    pub epsilon: Option<T>,
    pub lambda_min: T,
    pub regret_bound_total: T,
    pub regret_bound_average: T,
}

impl<T: Real> BoundReport<T> {
    pub fn full(n: usize, eta: T, lambda_min: T) -> Self {
        let total = regret_bound_full(n, eta, lambda_min);
        Self {
            eta,
            epsilon: None,
            lambda_min,
            regret_bound_total: total,
            regret_bound_average: total / T::from_count(n),
        }
    }

    pub fn noloc(n: usize, beta: T, eta: T, epsilon: T, lambda_min: T) -> Self {
        let total = regret_bound_noloc(n, beta, eta, epsilon, lambda_min);
        Self {
            eta,
            epsilon: Some(epsilon),
            lambda_min,
            regret_bound_total: total,
            regret_bound_average: total / T::from_count(n),
        }
    }
}
