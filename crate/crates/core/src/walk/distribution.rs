use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::lattice::LatticePosition;

/// Normalized position distribution at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    step: u32,
    probs: BTreeMap<LatticePosition, f64>,
}

impl WalkDistribution {
    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(
        step: u32,
        weights: impl IntoIterator<Item = (LatticePosition, f64)>,
    ) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (pos, w) in weights {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::Validation(format!(
                    "weight {w} at position {pos} is not a finite non-negative number"
                )));
            }
            *probs.entry(pos).or_insert(0.0) += w;
        }
        let total: f64 = probs.values().sum();
        if !(total > 0.0) {
            return Err(Error::Validation(format!(
                "step {step} carries no weight to normalize"
            )));
        }
        probs.values_mut().for_each(|p| *p /= total);
        Ok(WalkDistribution { step, probs })
    }

    /// Probabilities indexed by `k = 0..=step` on a line.
    pub fn from_line(step: u32, weights: &[f64]) -> Result<Self> {
        Self::from_weights(
            step,
            weights
                .iter()
                .enumerate()
                .map(|(k, &w)| (LatticePosition::line(k as u32), w)),
        )
    }

    /// Wraps already-normalized probabilities without renormalizing.
    #[cfg(test)]
    pub(crate) fn from_raw(step: u32, probs: BTreeMap<LatticePosition, f64>) -> Self {
        WalkDistribution { step, probs }
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn get(&self, pos: &LatticePosition) -> f64 {
        self.probs.get(pos).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePosition, f64)> {
        self.probs.iter().map(|(p, &v)| (p, v))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Dense vector over `k = 0..=step` (one-dimensional walks only).
    pub fn line(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.step as usize + 1];
        for (pos, p) in &self.probs {
            out[pos.k() as usize] += p;
        }
        out
    }

    /// Mean of `k` (one-dimensional walks only).
    pub fn mean_k(&self) -> f64 {
        self.probs.iter().map(|(pos, p)| pos.k() as f64 * p).sum()
    }

    /// Standard deviation of `k` (one-dimensional walks only).
    pub fn std_k(&self) -> f64 {
        let mean = self.mean_k();
        self.probs
            .iter()
            .map(|(pos, p)| {
                let d = pos.k() as f64 - mean;
                d * d * p
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Bhattacharyya coefficient `Σ √(p_i q_i)` over the union of supports.
pub fn fidelity(p: &WalkDistribution, q: &WalkDistribution) -> Result<f64> {
    for (pos, v) in p.iter().chain(q.iter()) {
        if v < 0.0 || v.is_nan() {
            return Err(Error::Validation(format!(
                "negative probability {v} at position {pos}"
            )));
        }
    }
    let overlap: f64 = p.iter().map(|(pos, pv)| (pv * q.get(pos)).sqrt()).sum();
    Ok(overlap.min(1.0))
}
