use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Normalized photon-number distribution with cached moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonDistribution {
    pub probs: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    /// `variance / mean`; `NaN` for the vacuum.
    pub fano: f64,
    /// Shannon entropy in nats.
    pub entropy: f64,
}

impl PhotonDistribution {
    /// Normalizes non-negative weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("weights", "empty distribution"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(invalid("weights", "weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(invalid("weights", "weights sum to zero"));
        }
        Ok(Self::from_normalized(weights.into_iter().map(|w| w / total).collect()))
    }

    /// Normalizes `exp(log_weights)` by log-sum-exp; `-inf` entries are zero.
    pub fn from_log_weights(log_weights: &[f64]) -> Result<Self> {
        let peak = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(invalid("log_weights", "no finite weight"));
        }
        let lse = peak + log_weights.iter().map(|l| (l - peak).exp()).sum::<f64>().ln();
        Ok(Self::from_normalized(log_weights.iter().map(|l| (l - lse).exp()).collect()))
    }

    fn from_normalized(probs: Vec<f64>) -> Self {
        let mean: f64 = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        let variance: f64 = probs.iter().enumerate().map(|(n, p)| (n as f64 - mean).powi(2) * p).sum();
        let entropy = -probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>();
        let fano = if mean > 0.0 { variance / mean } else { f64::NAN };
        PhotonDistribution { probs, mean, variance, fano, entropy }
    }

    /// Point mass on `n` over `0..=n_max`.
    pub fn fock(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(invalid("n", "Fock level beyond n_max"));
        }
        let mut probs = vec![0.0; n_max + 1];
        probs[n] = 1.0;
        Ok(Self::from_normalized(probs))
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// `½ Σ |p − q|`, padding the shorter vector with zeros.
    pub fn tv_distance(&self, other: &PhotonDistribution) -> f64 {
        let len = self.probs.len().max(other.probs.len());
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        0.5 * (0..len).map(|i| (at(&self.probs, i) - at(&other.probs, i)).abs()).sum::<f64>()
    }

    /// Probability on `n ≥ from`.
    pub fn tail_mass(&self, from: usize) -> f64 {
        self.probs.iter().skip(from).sum()
    }

    /// Indices of local maxima whose height is at least `relative` of the
    /// global maximum. Plateaus count once, at their first index.
    pub fn local_maxima(&self, relative: f64) -> Vec<usize> {
        let p = &self.probs;
        let top = p.iter().copied().fold(0.0, f64::max);
        let mut out = Vec::new();
        let mut i = 0;
        while i < p.len() {
            let mut j = i;
            while j + 1 < p.len() && p[j + 1] == p[i] {
                j += 1;
            }
            let left = i == 0 || p[i - 1] < p[i];
            let right = j + 1 == p.len() || p[j + 1] < p[i];
            if left && right && p[i] >= relative * top && p[i] > 0.0 {
                out.push(i);
            }
            i = j + 1;
        }
        out
    }
}
