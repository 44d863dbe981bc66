//! Brute-force reference computations, independent of the ledger and the
//! interval scan, for cross-checking the library.

use hil_core::{Label, Sample64};

/// Minimum over an explicit list of thresholds of the fixed-threshold cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridOptimum {
    pub theta: f64,
    pub offloaded: usize,
    pub misclassified: usize,
    pub cost: f64,
}

/// Evaluates every threshold in `{0, k/grid, observed p, midpoints, 2}`
/// by counting offloads and residual errors directly. Costs are formed as
/// `beta * offloaded + misclassified` so equal counts give equal bits.
pub fn brute_force_fixed_theta(samples: &[Sample64], beta: f64, grid: usize) -> GridOptimum {
    let mut ps: Vec<f64> = samples.iter().map(|s| s.p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let mut thetas: Vec<f64> = (0..=grid).map(|k| k as f64 / grid as f64).collect();
    thetas.extend(&ps);
    thetas.extend(ps.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    thetas.push(2.0);

    // Sorted confidences with a running count of errors at or above each.
    let mut sorted: Vec<(f64, bool)> = samples.iter().map(|s| (s.p, s.y.is_wrong())).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut errors_from = vec![0usize; sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        errors_from[i] = errors_from[i + 1] + sorted[i].1 as usize;
    }

    thetas
        .into_iter()
        .map(|theta| {
            let offloaded = sorted.partition_point(|&(p, _)| p < theta);
            let misclassified = errors_from[offloaded];
            GridOptimum { theta, offloaded, misclassified, cost: beta * offloaded as f64 + misclassified as f64 }
        })
        .min_by(|a, b| a.cost.total_cmp(&b.cost).then(a.offloaded.cmp(&b.offloaded)))
        .expect("non-empty threshold list")
}

/// Full-feedback `q_t` by right-endpoint Riemann summation over `cells`
/// equal cells of `(0, 1]`. Each cell is represented by its right end,
/// which matches the half-open interval convention; when every confidence
/// is a multiple of `1 / cells` the sum is exact up to rounding.
///
/// Returns `q_1, ..., q_rounds` for the first `rounds` samples.
pub fn riemann_q_full(samples: &[Sample64], beta: f64, eta: f64, cells: usize, rounds: usize) -> Vec<f64> {
    let thetas: Vec<f64> = (1..=cells).map(|c| c as f64 / cells as f64).collect();
    let mut loss = vec![0.0f64; cells];
    let mut q = Vec::with_capacity(rounds.min(samples.len()));
    for s in samples.iter().take(rounds) {
        let floor = loss.iter().copied().fold(f64::INFINITY, f64::min);
        let (mut below, mut total) = (0.0, 0.0);
        for (theta, l) in thetas.iter().zip(&loss) {
            let w = (-eta * (l - floor)).exp();
            total += w;
            if *theta <= s.p {
                below += w;
            }
        }
        q.push(below / total);
        let y = if s.y == Label::Wrong { 1.0 } else { 0.0 };
        for (theta, l) in thetas.iter().zip(loss.iter_mut()) {
            *l += if s.p < *theta { beta } else { y };
        }
    }
    q
}
