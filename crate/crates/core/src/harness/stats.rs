use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::MAX_SCORE;

/// z for a two-sided 95% normal interval.
pub const Z95: f64 = 1.96;

/// Score summary of one pairing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchStats {
    pub a: String,
    pub b: String,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator; 0 for a single game).
    pub sd: f64,
    /// `1.96 * sd / sqrt(n)`.
    pub ci95: f64,
    /// Games per final score 0..=25.
    pub histogram: Vec<u32>,
}

impl MatchStats {
    /// Scores are integers, so sums are exact and independent of order.
    pub fn from_scores(a: &str, b: &str, scores: &[u32]) -> MatchStats {
        let n = scores.len();
        let mut histogram = vec![0u32; MAX_SCORE as usize + 1];
        for &s in scores {
            histogram[(s.min(MAX_SCORE)) as usize] += 1;
        }
        let sum: u64 = scores.iter().map(|&s| u64::from(s)).sum();
        let sum_sq: u64 = scores.iter().map(|&s| u64::from(s) * u64::from(s)).sum();
        let (mean, sd) = if n == 0 {
            (0.0, 0.0)
        } else {
            let mean = sum as f64 / n as f64;
            let sd = if n > 1 {
                // n * sum_sq - sum^2 is exact in integers
                let num = (n as u128 * u128::from(sum_sq)) - u128::from(sum) * u128::from(sum);
                (num as f64 / (n as f64 * (n as f64 - 1.0))).sqrt()
            } else {
                0.0
            };
            (mean, sd)
        };
        let ci95 = if n == 0 { 0.0 } else { Z95 * sd / (n as f64).sqrt() };
        MatchStats { a: a.to_string(), b: b.to_string(), n, mean, sd, ci95, histogram }
    }

    /// Pools two result sets for the same unordered pairing.
    pub fn scores(&self) -> Vec<u32> {
        self.histogram.iter().enumerate().flat_map(|(s, &k)| std::iter::repeat_n(s as u32, k as usize)).collect()
    }
}

/// Half-width of a percentile bootstrap 95% interval of the mean.
pub fn bootstrap_ci95(scores: &[u32], resamples: usize, seed: u64) -> f64 {
    if scores.len() < 2 || resamples == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = scores.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| {
            let total: u64 = (0..n).map(|_| u64::from(scores[rng.random_range(0..n)])).sum();
            total as f64 / n as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let lo = means[((resamples as f64) * 0.025) as usize];
    let hi = means[(((resamples as f64) * 0.975) as usize).min(resamples - 1)];
    (hi - lo) / 2.0
}
