use crate::cavity::NetworkConfig;
use crate::error::Result;
use crate::walk::{trajectory, WalkDistribution, WalkState};

use super::histogram::Histogram;
use super::loss::{estimate_round_trip_loss, LossEstimate};
use super::normalize::{fidelity_series, normalize_steps, FidelitySeries, NormalizedSteps};
use super::peaks::{identify_peaks, integrate_peaks, PeakTable};

/// Default integration half-width, ps.
pub const DEFAULT_WINDOW_HALFWIDTH_PS: f64 = 2000.0;

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub steps: u32,
    pub trials: u64,
    /// ps
    pub window_halfwidth: f64,
    pub efficiency: f64,
}

#[derive(Debug)]
pub struct Analysis {
    pub peaks: PeakTable,
    pub normalized: NormalizedSteps,
    /// One entry per cavity, in cavity order.
    pub losses: Vec<Result<LossEstimate>>,
    pub fidelity: FidelitySeries,
    pub warnings: Vec<String>,
}

/// Distributions an ideal walk shows at the output tap for steps `1..=steps`.
///
/// The tap only sees pulses that have just passed the output cavity, so this
/// is the output-cavity share of the walk, renormalized per step. Steps that
/// send no light to the output are skipped.
pub fn ideal_output_distributions(
    cfg: &NetworkConfig,
    steps: u32,
) -> Result<Vec<WalkDistribution>> {
    let states = trajectory(&WalkState::initial(cfg.dims()), &cfg.coin, steps, None)?;
    Ok(states
        .iter()
        .filter_map(|s| s.cavity_distribution(cfg.output_cavity).ok())
        .collect())
}

/// Full inverse pipeline on a detection-time histogram.
pub fn analyze(hist: &Histogram, cfg: &NetworkConfig, opts: &AnalysisOptions) -> Result<Analysis> {
    let windows = identify_peaks(hist, cfg, opts.steps, opts.window_halfwidth)?;
    let peaks = integrate_peaks(hist, &windows, opts.trials, opts.efficiency)?;
    let normalized = normalize_steps(&peaks);
    let losses = (0..cfg.cavities.len())
        .map(|c| estimate_round_trip_loss(&peaks, cfg, c))
        .collect();

    let mut warnings = Vec::new();
    if peaks.overflow > 0 {
        warnings.push(format!(
            "{} detections beyond the trial window",
            peaks.overflow
        ));
    }
    for step in &normalized.dropped {
        warnings.push(format!("step {step} dropped: no positive energy"));
    }
    if !normalized.clamped.is_empty() {
        warnings.push(format!(
            "{} pulse energies clamped to zero after background subtraction",
            normalized.clamped.len()
        ));
    }

    let theory = ideal_output_distributions(cfg, opts.steps)?;
    let theory_steps: Vec<u32> = theory.iter().map(|d| d.step()).collect();
    let measured: Vec<WalkDistribution> = normalized
        .distributions
        .iter()
        .filter(|d| theory_steps.contains(&d.step()))
        .cloned()
        .collect();
    let measured_steps: Vec<u32> = measured.iter().map(|d| d.step()).collect();
    let theory: Vec<WalkDistribution> = theory
        .into_iter()
        .filter(|d| measured_steps.contains(&d.step()))
        .collect();
    for s in &theory_steps {
        if !measured_steps.contains(s) {
            warnings.push(format!("step {s} has no measured distribution"));
        }
    }
    let fidelity = fidelity_series(&measured, &theory)?;

    Ok(Analysis {
        peaks,
        normalized,
        losses,
        fidelity,
        warnings,
    })
}
