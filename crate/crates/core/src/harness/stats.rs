//! Binomial and mean estimates with confidence intervals.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Two-sided standard normal quantile for `confidence`.
pub fn z_value(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval, clamped to `[0, 1]`.
///
/// Exact endpoints are returned at the extremes: `lo = 0` when there are no
/// successes and `hi = 1` when every trial succeeds.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials >= 1 && successes <= trials, "need 0 <= successes <= trials, trials >= 1");
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z = z_value(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, 1.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).clamp(0.0, 1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub confidence: f64,
}

impl EstimateWithCI {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        Self::with_confidence(successes, trials, DEFAULT_CONFIDENCE)
    }

    pub fn with_confidence(successes: u64, trials: u64, confidence: f64) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(successes, trials, confidence);
        Self {
            successes,
            trials,
            estimate: successes as f64 / trials as f64,
            ci_lo,
            ci_hi,
            confidence,
        }
    }

    pub fn from_outcomes<I: IntoIterator<Item = bool>>(outcomes: I) -> Self {
        let (mut s, mut n) = (0u64, 0u64);
        for hit in outcomes {
            n += 1;
            s += u64::from(hit);
        }
        Self::from_counts(s, n)
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_hi - self.ci_lo) / 2.0
    }

    /// Binomial standard error at the point estimate.
    pub fn std_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }

    /// Whether `value` lies within `k` Wilson half-widths of the estimate.
    pub fn within_half_widths(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.half_width()
    }
}

/// Sample mean with a normal-approximation interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanWithCI {
    pub mean: f64,
    pub std_dev: f64,
    pub samples: u64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl MeanWithCI {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let sd = var.sqrt();
        let half = z_value(DEFAULT_CONFIDENCE) * sd / n.sqrt();
        Self {
            mean,
            std_dev: sd,
            samples: xs.len() as u64,
            ci_lo: mean - half,
            ci_hi: mean + half,
        }
    }
}

/// Whether two independent binomial estimates agree within `k` joint
/// standard deviations.
pub fn agree_jointly(a: &EstimateWithCI, b: &EstimateWithCI, k: f64) -> bool {
    let pooled = (a.successes + b.successes) as f64 / (a.trials + b.trials) as f64;
    let var = pooled * (1.0 - pooled) * (1.0 / a.trials as f64 + 1.0 / b.trials as f64);
    (a.estimate - b.estimate).abs() <= k * var.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_are_exact() {
        assert_eq!(wilson_interval(0, 10, 0.95).0, 0.0);
        assert_eq!(wilson_interval(10, 10, 0.95).1, 1.0);
    }

    #[test]
    fn half_and_half() {
        // Direct evaluation of the Wilson formula with z = 1.959963984540054.
        let (lo, hi) = wilson_interval(50, 100, 0.95);
        assert!((lo - 0.403_831_4).abs() < 1e-6, "{lo}");
        assert!((hi - 0.596_168_6).abs() < 1e-6, "{hi}");
    }

    #[test]
    fn interval_contains_estimate_and_shrinks() {
        let mut last = f64::INFINITY;
        for n in [10u64, 100, 1000, 10000] {
            let e = EstimateWithCI::from_counts(3 * n / 10, n);
            assert!(e.ci_lo <= e.estimate && e.estimate <= e.ci_hi);
            assert!(e.half_width() < last);
            last = e.half_width();
        }
    }
}
