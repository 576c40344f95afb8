use crate::error::{Error, Result};
use crate::walk::LatticePosition;

use super::network::NetworkConfig;

/// Nominal detection time (ns) of the pulse at `position` after `step` round trips.
///
/// `offset + Σ_c n_c·T_c`; for a line this is `offset + N·T₁ + k·τ`.
pub fn bin_time(cfg: &NetworkConfig, step: u32, position: &LatticePosition) -> Result<f64> {
    if position.counts().len() != cfg.cavities.len() - 1 {
        return Err(Error::Configuration(format!(
            "position {position} does not match a {}-cavity network",
            cfg.cavities.len()
        )));
    }
    if !position.fits_step(step) {
        return Err(Error::Domain(format!(
            "position {position} not reachable in {step} steps"
        )));
    }
    let t: f64 = position
        .traversals(step)
        .iter()
        .zip(&cfg.cavities)
        .map(|(&n, c)| n as f64 * c.round_trip_time)
        .sum();
    Ok(cfg.detection_path_offset + t)
}

/// [`bin_time`] for a one-dimensional walk.
pub fn line_bin_time(cfg: &NetworkConfig, step: u32, k: u32) -> Result<f64> {
    if k > step {
        return Err(Error::Domain(format!("k = {k} outside 0..={step}")));
    }
    bin_time(cfg, step, &LatticePosition::line(k))
}

/// Step limits set by the trial repetition period and by cluster overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepLimits {
    /// Largest `N` whose latest bin still arrives inside the trial period.
    pub repetition_limit: u32,
    /// Largest `N` whose cluster is narrower than the shortest round trip.
    pub overlap_limit: u32,
    pub warning: Option<String>,
}

impl StepLimits {
    pub fn limit(&self) -> u32 {
        self.repetition_limit.min(self.overlap_limit)
    }
}

pub fn max_observable_steps(cfg: &NetworkConfig) -> StepLimits {
    let times = cfg.round_trip_times();
    let t_min = times.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let period = cfg.trial_period_ns();

    // latest bin at step N is offset + N·T_max
    let span = period - cfg.detection_path_offset;
    let repetition_limit = if span <= 0.0 {
        0
    } else {
        let mut n = (span / t_max).floor() as u32;
        if cfg.detection_path_offset + n as f64 * t_max >= period {
            n = n.saturating_sub(1);
        }
        n
    };

    // cluster N spans N·(T_max − T_min); it reaches the next cluster when
    // that width is >= T_min
    let width = t_max - t_min;
    let mut warning = None;
    let overlap_limit = if width >= t_min {
        warning = Some(format!(
            "bin spread {width} ns per step is not below the shortest round trip {t_min} ns"
        ));
        0
    } else {
        let mut n = (t_min / width).floor() as u32;
        if n as f64 * width >= t_min {
            n -= 1;
        }
        n
    };
    StepLimits {
        repetition_limit,
        overlap_limit,
        warning,
    }
}
