use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::walk::{fidelity, LatticePosition, WalkDistribution};

use super::peaks::PeakTable;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NormalizedSteps {
    pub distributions: Vec<WalkDistribution>,
    /// Entries whose background-subtracted energy was negative, with that value.
    pub clamped: Vec<(u32, LatticePosition, f64)>,
    /// Steps without any positive energy.
    pub dropped: Vec<u32>,
}

/// Per-step probabilities: each pulse energy over the step's total.
///
/// Negative energies left by background subtraction are clamped to zero first.
pub fn normalize_steps(peaks: &PeakTable) -> NormalizedSteps {
    let mut by_step: BTreeMap<u32, Vec<(LatticePosition, f64)>> = BTreeMap::new();
    let mut out = NormalizedSteps::default();
    for r in &peaks.rows {
        let mu = if r.mu < 0.0 {
            out.clamped.push((r.step, r.position.clone(), r.mu));
            0.0
        } else {
            r.mu
        };
        by_step
            .entry(r.step)
            .or_default()
            .push((r.position.clone(), mu));
    }
    for (step, weights) in by_step {
        match WalkDistribution::from_weights(step, weights) {
            Ok(d) => out.distributions.push(d),
            Err(_) => out.dropped.push(step),
        }
    }
    out
}

/// Per-step fidelity between measured and theoretical distributions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FidelitySeries {
    pub entries: Vec<(u32, f64)>,
}

impl FidelitySeries {
    pub fn min(&self) -> Option<(u32, f64)> {
        self.entries
            .iter()
            .copied()
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn get(&self, step: u32) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == step).map(|e| e.1)
    }
}

/// Both lists must cover exactly the same steps, in any order.
pub fn fidelity_series(
    measured: &[WalkDistribution],
    theory: &[WalkDistribution],
) -> Result<FidelitySeries> {
    let mut m: Vec<&WalkDistribution> = measured.iter().collect();
    let mut t: Vec<&WalkDistribution> = theory.iter().collect();
    m.sort_by_key(|d| d.step());
    t.sort_by_key(|d| d.step());
    let ms: Vec<u32> = m.iter().map(|d| d.step()).collect();
    let ts: Vec<u32> = t.iter().map(|d| d.step()).collect();
    if ms != ts {
        return Err(Error::Alignment(format!(
            "measured steps {} do not match theory steps {}",
            describe(&ms),
            describe(&ts)
        )));
    }
    let entries = m
        .iter()
        .zip(&t)
        .map(|(a, b)| Ok((a.step(), fidelity(a, b)?)))
        .collect::<Result<_>>()?;
    Ok(FidelitySeries { entries })
}

fn describe(steps: &[u32]) -> String {
    match (steps.first(), steps.last()) {
        (Some(a), Some(b)) => format!("{a}..={b} ({} steps)", steps.len()),
        _ => "(none)".into(),
    }
}
