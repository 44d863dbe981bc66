//! Non-uniform discretization of the threshold space.
//!
//! The cumulative loss of a threshold `theta` only changes where `theta`
//! crosses an observed confidence value, so the weight function
//! `w_t(theta) = exp(-eta * cumulative_loss(theta))` is constant on the
//! half-open intervals `(b_{i-1}, b_i]` formed by the distinct observed `p`
//! values. The ledger stores those boundaries and one log-weight per interval,
//! which makes the not-offload probability `q` an exact finite sum.
//!
//! Log-weights are the source of truth. A cached copy of the weights scaled by
//! `exp(-shift)` keeps `q` cheap (no `exp` per interval per round); the cache
//! is rebuilt from the log-weights periodically and whenever it drifts toward
//! underflow.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::Label;
use crate::scalar::Real;

/// Rebuild the scaled-weight cache after this many multiplicative updates.
const REFRESH_EVERY: u32 = 64;

/// Result of [`IntervalLedger::insert`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Insertion {
    /// Index of the boundary that now represents the inserted point.
    pub index: usize,
    /// `true` when no split happened (exact repeat, or within `delta_min` of
    /// an existing boundary).
    pub was_duplicate: bool,
}

enum Position {
    /// The point is (or snaps to) boundary `k`.
    Boundary(usize),
    /// The point lies strictly inside interval `k`, i.e. `(b_k, b_{k+1})`.
    Inside(usize),
}

#[derive(Clone, Debug)]
pub struct IntervalLedger<T> {
    /// `b_0 = 0 < b_1 < ... < b_N = 1`.
    boundaries: Vec<T>,
    /// `log_weights[i]` belongs to `(boundaries[i], boundaries[i + 1]]`.
    log_weights: Vec<T>,
    /// `exp(log_weights[i] - shift)` for a shift that changes on every update.
    scaled: Vec<T>,
    updates_since_refresh: u32,
    delta_min: T,
}

impl<T: Real> IntervalLedger<T> {
    /// A single interval `(0, 1]` with weight 1.
    pub fn new(delta_min: T) -> Result<Self> {
        check_delta_min(delta_min)?;
        Ok(Self {
            boundaries: vec![T::zero(), T::one()],
            log_weights: vec![T::zero()],
            scaled: vec![T::one()],
            updates_since_refresh: 0,
            delta_min,
        })
    }

    /// Builds a ledger from explicit boundaries and log-weights.
    pub fn from_parts(boundaries: Vec<T>, log_weights: Vec<T>, delta_min: T) -> Result<Self> {
        check_delta_min(delta_min)?;
        if boundaries.len() < 2 || log_weights.len() + 1 != boundaries.len() {
            return Err(Error::MalformedLedger(format!(
                "{} boundaries for {} log-weights",
                boundaries.len(),
                log_weights.len()
            )));
        }
        if boundaries[0] != T::zero() || boundaries[boundaries.len() - 1] != T::one() {
            return Err(Error::MalformedLedger("boundaries must start at 0 and end at 1".into()));
        }
        if boundaries.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::MalformedLedger("boundaries must be strictly increasing".into()));
        }
        if log_weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::MalformedLedger("log-weights must be finite".into()));
        }
        let n = log_weights.len();
        let mut ledger = Self {
            boundaries,
            log_weights,
            scaled: vec![T::zero(); n],
            updates_since_refresh: 0,
            delta_min,
        };
        ledger.refresh();
        Ok(ledger)
    }

    pub fn interval_count(&self) -> usize {
        self.log_weights.len()
    }

    pub fn boundaries(&self) -> &[T] {
        &self.boundaries
    }

    pub fn log_weights(&self) -> &[T] {
        &self.log_weights
    }

    pub fn delta_min(&self) -> T {
        self.delta_min
    }

    /// Interval lengths `b_i - b_{i-1}`.
    pub fn lengths(&self) -> impl Iterator<Item = T> + '_ {
        self.boundaries.windows(2).map(|w| w[1] - w[0])
    }

    /// Index `j` of the last boundary strictly below `p`, so that
    /// `b_j < p <= b_{j+1}`.
    pub fn locate(&self, p: T) -> Result<usize> {
        if !(p > T::zero() && p <= T::one()) {
            return Err(Error::PointOutOfRange { value: p.as_f64() });
        }
        Ok(self.boundaries.partition_point(|&b| b < p) - 1)
    }

    /// Probability of not offloading: the normalized weight mass of thresholds
    /// in `[0, p]`.
    pub fn q(&self, p: T) -> T {
        if !(p > T::zero()) {
            return T::zero();
        }
        if p >= T::one() {
            return T::one();
        }
        let j = self.boundaries.partition_point(|&b| b < p) - 1;
        let mut below = T::zero();
        let mut total = T::zero();
        for (i, (w, s)) in self.boundaries.windows(2).zip(&self.scaled).enumerate() {
            let mass = (w[1] - w[0]) * *s;
            if i < j {
                below = below + mass;
            }
            total = total + mass;
        }
        below = below + (p - self.boundaries[j]) * self.scaled[j];
        (below / total).max(T::zero()).min(T::one())
    }

    /// Normalizing constant `W_t` in log form, `ln sum_i lambda_i exp(lw_i)`.
    pub fn log_total_weight(&self) -> T {
        let max = self.max_log_weight();
        let sum: T = self
            .lengths()
            .zip(&self.log_weights)
            .map(|(len, &lw)| len * (lw - max).exp())
            .sum();
        max + sum.ln()
    }

    pub fn max_log_weight(&self) -> T {
        self.log_weights.iter().copied().fold(T::neg_infinity(), T::max)
    }

    fn position(&self, p: T) -> Position {
        let k = self.boundaries.partition_point(|&b| b < p);
        if k < self.boundaries.len() && self.boundaries[k] == p {
            return Position::Boundary(k);
        }
        // b_{k-1} < p < b_k
        let below = p - self.boundaries[k - 1];
        let above = self.boundaries[k] - p;
        if self.delta_min > T::zero() && below.min(above) < self.delta_min {
            if below <= above {
                Position::Boundary(k - 1)
            } else {
                Position::Boundary(k)
            }
        } else {
            Position::Inside(k - 1)
        }
    }

    /// Splits the interval containing `p` at `p`. Both halves inherit the
    /// parent's weight, so the weight function is unchanged pointwise. Points
    /// within `delta_min` of an existing boundary snap to the nearest one
    /// (ties toward the lower boundary) and do not split. `p = 0` is a no-op.
    pub fn insert(&mut self, p: T) -> Result<Insertion> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::PointOutOfRange { value: p.as_f64() });
        }
        match self.position(p) {
            Position::Boundary(index) => Ok(Insertion { index, was_duplicate: true }),
            Position::Inside(k) => {
                self.boundaries.insert(k + 1, p);
                self.log_weights.insert(k + 1, self.log_weights[k]);
                self.scaled.insert(k + 1, self.scaled[k]);
                Ok(Insertion { index: k + 1, was_duplicate: false })
            }
        }
    }

    /// Number of intervals lying at or below `p`; `p` must already be a
    /// boundary (or snap to one).
    fn cut(&self, p: T) -> Result<usize> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::PointOutOfRange { value: p.as_f64() });
        }
        match self.position(p) {
            Position::Boundary(k) => Ok(k),
            Position::Inside(_) => Err(Error::NotABoundary { value: p.as_f64() }),
        }
    }

    /// Full-feedback update: thresholds at or below `p` would have kept the
    /// sample local and pay `y`; thresholds above `p` pay `beta`.
    pub fn update_full(&mut self, p: T, y: Label, beta: T, eta: T) -> Result<()> {
        let k = self.cut(p)?;
        self.apply(k, eta * y.cost(), eta * beta);
        Ok(())
    }

    /// No-local-feedback update with the importance-weighted pseudo-loss:
    /// `y / epsilon` at or below `p` when the exploration draw fired, zero
    /// when it did not, and `beta` above `p`.
    pub fn update_noloc(
        &mut self,
        p: T,
        revealed: Option<Label>,
        explore: bool,
        beta: T,
        eta: T,
        epsilon: T,
    ) -> Result<()> {
        let below = if explore {
            let y = revealed.ok_or(Error::MissingFeedback)?;
            y.cost::<T>() / epsilon
        } else {
            T::zero()
        };
        let k = self.cut(p)?;
        self.apply(k, eta * below, eta * beta);
        Ok(())
    }

    /// Subtracts `below` from the log-weights of intervals `[0, k)` and
    /// `above` from intervals `[k, N)`.
    fn apply(&mut self, k: usize, below: T, above: T) {
        let (lw_lo, lw_hi) = self.log_weights.split_at_mut(k);
        for lw in lw_lo {
            *lw = *lw - below;
        }
        for lw in lw_hi {
            *lw = *lw - above;
        }

        self.updates_since_refresh += 1;
        if self.updates_since_refresh >= REFRESH_EVERY {
            self.refresh();
            return;
        }
        // Keep the larger of the two factors at 1; the common part goes into the shift.
        let base = below.min(above);
        let f_lo = (base - below).exp();
        let f_hi = (base - above).exp();
        let (s_lo, s_hi) = self.scaled.split_at_mut(k);
        let mut max = T::zero();
        for s in s_lo {
            *s = *s * f_lo;
            max = max.max(*s);
        }
        for s in s_hi {
            *s = *s * f_hi;
            max = max.max(*s);
        }
        if max < T::min_positive_value().sqrt() {
            self.refresh();
        }
    }

    /// Recomputes the scaled weights from the log-weights with a max shift.
    fn refresh(&mut self) {
        let max = self.max_log_weight();
        for (s, &lw) in self.scaled.iter_mut().zip(&self.log_weights) {
            *s = (lw - max).exp();
        }
        self.updates_since_refresh = 0;
    }

    /// One line per interval: `lower,upper,log_weight`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (w, lw) in self.boundaries.windows(2).zip(&self.log_weights) {
            let _ = writeln!(out, "{},{},{}", w[0], w[1], lw);
        }
        out
    }
}

fn check_delta_min<T: Real>(delta_min: T) -> Result<()> {
    if !(delta_min >= T::zero() && delta_min < T::one()) {
        return Err(Error::InvalidDeltaMin { value: delta_min.as_f64() });
    }
    Ok(())
}
