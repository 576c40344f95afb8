//! The four top-level operations behind the `cavitywalk` binary.

use crate::analysis::{
    analyze, build_histogram, ideal_output_distributions, Analysis, AnalysisOptions,
};
use crate::cavity::{tapped_pulse_table, PulseTable};
use crate::config::RunConfig;
use crate::detector::{simulate_trials, EventStream};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::walk::{evolve, WalkState};

/// Ideal distributions for steps `1..=run.steps`.
///
/// With `output_tap` the distributions are those an ideal tap on the output
/// cavity sees, which is what a measured report is compared against;
/// otherwise they are the full walk distributions.
pub fn simulate_ideal(cfg: &RunConfig, output_tap: bool) -> Result<Report> {
    cfg.validate()?;
    let net = cfg.network()?;
    let dists = if output_tap {
        ideal_output_distributions(&net, cfg.run.steps)?
    } else {
        evolve(
            &WalkState::initial(net.dims()),
            &net.coin,
            cfg.run.steps,
            None,
        )?
    };
    Ok(Report::from_distributions(&dists)
        .with_meta("kind", if output_tap { "ideal-output" } else { "ideal" })
        .with_meta("eta_c", cfg.network.eta_c)
        .with_meta("steps", cfg.run.steps))
}

#[derive(Debug, Clone)]
pub struct PhysicalRun {
    pub input_energy: f64,
    pub table: PulseTable,
    pub events: EventStream,
}

impl PhysicalRun {
    /// Detections within the window span of the last step's pulses.
    pub fn final_step_events(&self, halfwidth_ps: f64) -> u64 {
        let last = self.table.max_step();
        let times: Vec<f64> = self
            .table
            .entries()
            .iter()
            .filter(|e| e.step == last)
            .map(|e| e.time * 1e3)
            .collect();
        let lo = times.iter().copied().fold(f64::INFINITY, f64::min) - halfwidth_ps;
        let hi = times.iter().copied().fold(f64::NEG_INFINITY, f64::max) + halfwidth_ps;
        let bin = self.events.tdc_bin_ps as f64;
        self.events
            .records
            .iter()
            .filter(|r| {
                let t = (r.detection_time as f64 + 0.5) * bin;
                t >= lo && t <= hi
            })
            .count() as u64
    }
}

pub fn simulate_physical(cfg: &RunConfig) -> Result<PhysicalRun> {
    cfg.validate()?;
    let net = cfg.network()?;
    let det = cfg.detector()?;
    let input_energy = cfg.resolved_input_energy(&net)?;
    let table = tapped_pulse_table(&net, cfg.run.steps, input_energy)?;
    let events = simulate_trials(
        &table,
        &det,
        net.trial_period_ns(),
        cfg.run.trials,
        cfg.run.seed,
        cfg.run.threads,
    )?;
    Ok(PhysicalRun {
        input_energy,
        table,
        events,
    })
}

/// Runs the inverse pipeline on an event stream recorded with `cfg`.
pub fn analyze_events(events: &EventStream, cfg: &RunConfig) -> Result<Analysis> {
    cfg.validate()?;
    let net = cfg.network()?;
    let det = cfg.detector()?;
    if events.tdc_bin_ps != det.tdc_bin {
        return Err(Error::Configuration(format!(
            "event file has {} ps TDC bins, configuration says {} ps",
            events.tdc_bin_ps, det.tdc_bin
        )));
    }
    if (events.trial_period_ns - net.trial_period_ns()).abs() > 1e-9 * net.trial_period_ns() {
        return Err(Error::Configuration(format!(
            "event file trial period {} ns differs from configured {} ns",
            events.trial_period_ns,
            net.trial_period_ns()
        )));
    }
    if let Some(last) = events.records.last() {
        if last.trial_id >= cfg.run.trials {
            return Err(Error::Validation(format!(
                "event file contains trial {} but run.trials is {}",
                last.trial_id, cfg.run.trials
            )));
        }
    }
    let hist = build_histogram(events, det.tdc_bin)?;
    let analysis = analyze(
        &hist,
        &net,
        &AnalysisOptions {
            steps: cfg.run.steps,
            trials: cfg.run.trials,
            window_halfwidth: cfg.run.window_halfwidth_ps,
            efficiency: det.efficiency,
        },
    )?;
    for w in &analysis.warnings {
        log::warn!("{w}");
    }
    Ok(analysis)
}

pub fn analysis_report(analysis: &Analysis, cfg: &RunConfig) -> Report {
    Report::from_analysis(analysis)
        .with_meta("kind", "measured")
        .with_meta("eta_c", cfg.network.eta_c)
        .with_meta("steps", cfg.run.steps)
        .with_meta("trials", cfg.run.trials)
}
