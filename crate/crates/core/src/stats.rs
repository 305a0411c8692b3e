//! Small Monte Carlo helpers.

use serde::{Deserialize, Serialize};

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    /// Mean and standard error of the mean. Samples are summed in order.
    pub fn from_samples(xs: &[f64]) -> Self {
        let k = xs.len();
        if k == 0 {
            return Self::default();
        }
        let mean = xs.iter().sum::<f64>() / k as f64;
        let var = if k > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            stderr: (var / k as f64).sqrt(),
            samples: k as u64,
        }
    }

    /// `successes / trials` with the binomial standard error.
    pub fn bernoulli(successes: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self::default();
        }
        let p = successes as f64 / trials as f64;
        Self {
            mean: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            samples: trials,
        }
    }

    /// Whether `mean <= bound + k * sigma`, using `sigma_floor` when the
    /// empirical error is smaller (e.g. zero successes).
    pub fn within(&self, bound: f64, k: f64, sigma_floor: f64) -> bool {
        self.mean <= bound + k * self.stderr.max(sigma_floor)
    }
}

/// Binomial standard deviation of a frequency at probability `p`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        0.0
    } else {
        (p * (1.0 - p) / trials as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_basic() {
        let e = Estimate::bernoulli(25, 100);
        assert_eq!(e.mean, 0.25);
        assert!((e.stderr - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sample_mean() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0]);
        assert_eq!(e.mean, 2.0);
        assert!((e.stderr - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}
