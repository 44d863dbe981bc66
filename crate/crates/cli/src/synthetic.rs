//! Seeded synthetic traces with a chosen confidence distribution and
//! calibration curve.

use hil_core::{Label, Sample64, Trace64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::Deserialize;

use crate::error::{CliError, Result};

/// Concentration of each bimodal component; larger is more peaked.
const PEAK_CONCENTRATION: f64 = 20.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConfidenceDist {
    #[default]
    Uniform,
    /// Mixture of two Beta bumps centred at `lo` and `hi`; `mix` is the
    /// weight of the low bump.
    Bimodal { mix: f64, lo: f64, hi: f64 },
}

/// `P(Y = 1 | p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Calibration {
    /// `1 - p`.
    #[default]
    Perfect,
    /// `1 / (1 + exp(a (p - b)))`.
    Logistic { a: f64, b: f64 },
    Constant { e: f64 },
}

impl Calibration {
    pub fn error_probability(&self, p: f64) -> f64 {
        match *self {
            Calibration::Perfect => 1.0 - p,
            Calibration::Logistic { a, b } => 1.0 / (1.0 + (a * (p - b)).exp()),
            Calibration::Constant { e } => e,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n: usize,
    #[serde(default)]
    pub distribution: ConfidenceDist,
    /// Rounds every confidence to a multiple of `2^-quant_bits`.
    #[serde(default)]
    pub quant_bits: Option<u32>,
    #[serde(default)]
    pub calibration: Calibration,
    #[serde(default)]
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn uniform(n: usize, seed: u64) -> Self {
        Self { n, distribution: ConfidenceDist::Uniform, quant_bits: None, calibration: Calibration::Perfect, seed }
    }

    pub fn with_quant_bits(mut self, bits: u32) -> Self {
        self.quant_bits = Some(bits);
        self
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| CliError::Usage(format!("synthetic spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} = {v} must lie in [0, 1]")))
            }
        };
        if self.n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        if let ConfidenceDist::Bimodal { mix, lo, hi } = self.distribution {
            unit("mix", mix)?;
            for (name, v) in [("lo", lo), ("hi", hi)] {
                if !(v > 0.0 && v < 1.0) {
                    return Err(CliError::Usage(format!("{name} = {v} must lie in (0, 1)")));
                }
            }
        }
        if let Some(bits) = self.quant_bits {
            if !(1..=52).contains(&bits) {
                return Err(CliError::Usage(format!("quant_bits = {bits} must lie in 1..=52")));
            }
        }
        match self.calibration {
            Calibration::Constant { e } => unit("e", e),
            Calibration::Logistic { a, b } if !(a.is_finite() && b.is_finite()) => {
                Err(CliError::Usage("logistic parameters must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

fn peak(centre: f64) -> Beta<f64> {
    Beta::new(centre * PEAK_CONCENTRATION, (1.0 - centre) * PEAK_CONCENTRATION).expect("centre in (0, 1)")
}

/// Draws `p` then `y` for each sample from one ChaCha8 stream.
pub fn generate_trace(spec: &SyntheticSpec) -> Result<Trace64> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bumps = match spec.distribution {
        ConfidenceDist::Bimodal { mix, lo, hi } => Some((mix, peak(lo), peak(hi))),
        ConfidenceDist::Uniform => None,
    };
    let scale = spec.quant_bits.map(|b| (1u64 << b) as f64);

    let samples = (0..spec.n)
        .map(|_| {
            let raw = match &bumps {
                None => rng.random::<f64>(),
                Some((mix, low, high)) => {
                    if rng.random_bool(*mix) {
                        low.sample(&mut rng)
                    } else {
                        high.sample(&mut rng)
                    }
                }
            };
            let p = match scale {
                Some(s) => (raw * s).round() / s,
                None => raw,
            }
            .clamp(0.0, 1.0);
            let wrong = rng.random_bool(spec.calibration.error_probability(p).clamp(0.0, 1.0));
            Sample64::new(p, Label::from(wrong)).map_err(CliError::from)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace64::new(samples)?)
}
