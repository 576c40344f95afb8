use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::walk::{positions_at_step, trajectory, LatticePosition, WalkDistribution, WalkState};

use super::network::NetworkConfig;
use super::timing::bin_time;

/// Per-round-trip transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    pub energy: f64,
    pub amplitude: f64,
}

/// `10^(−L/10)`, times the tap reflectivity when the cavity holds a tap.
pub fn round_trip_transmission(excess_loss_db: f64, tap_reflectivity: Option<f64>) -> Transmission {
    let energy = 10f64.powf(-excess_loss_db / 10.0) * tap_reflectivity.unwrap_or(1.0);
    Transmission {
        energy,
        amplitude: energy.sqrt(),
    }
}

/// Inverse of [`round_trip_transmission`]: dB of excess loss for a measured
/// energy factor.
pub fn excess_loss_db(energy_factor: f64, tap_reflectivity: Option<f64>) -> f64 {
    -10.0 * (energy_factor / tap_reflectivity.unwrap_or(1.0)).log10()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseEntry {
    pub step: u32,
    pub position: LatticePosition,
    /// Mean photons reaching the detector per trial.
    pub mean_photons: f64,
    /// Nominal arrival time, ns.
    pub time: f64,
}

/// Mean photon number and arrival time of every output pulse, sorted by time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseTable {
    entries: Vec<PulseEntry>,
}

impl PulseTable {
    /// Builds a table from arbitrary entries, checking its invariants.
    pub fn from_entries(mut entries: Vec<PulseEntry>) -> Result<Self> {
        for e in &entries {
            if !(e.mean_photons >= 0.0) || !e.mean_photons.is_finite() {
                return Err(Error::Validation(format!(
                    "mean photon number {} at ({}, {}) is invalid",
                    e.mean_photons, e.step, e.position
                )));
            }
            if !e.time.is_finite() {
                return Err(Error::Validation("non-finite pulse time".into()));
            }
        }
        entries.sort_by(|a, b| a.time.total_cmp(&b.time));
        let table = PulseTable { entries };
        let total = table.total_mean_photons();
        if total >= 1.0 {
            return Err(Error::Scaling {
                total_mean_photons: total,
                suggested_input_energy: f64::NAN,
            });
        }
        Ok(table)
    }

    pub fn entries(&self) -> &[PulseEntry] {
        &self.entries
    }

    pub fn total_mean_photons(&self) -> f64 {
        self.entries.iter().map(|e| e.mean_photons).sum()
    }

    pub fn max_step(&self) -> u32 {
        self.entries.iter().map(|e| e.step).max().unwrap_or(0)
    }

    pub fn get(&self, step: u32, position: &LatticePosition) -> Option<&PulseEntry> {
        self.entries
            .iter()
            .find(|e| e.step == step && &e.position == position)
    }

    pub fn step_total(&self, step: u32) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.step == step)
            .map(|e| e.mean_photons)
            .sum()
    }

    /// Output energies at `step`, normalized; `None` if nothing is emitted.
    pub fn step_distribution(&self, step: u32) -> Option<WalkDistribution> {
        let weights: Vec<_> = self
            .entries
            .iter()
            .filter(|e| e.step == step)
            .map(|e| (e.position.clone(), e.mean_photons))
            .collect();
        WalkDistribution::from_weights(step, weights).ok()
    }

    /// Multiplies every mean photon number by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| PulseEntry {
                mean_photons: e.mean_photons * factor,
                ..e.clone()
            })
            .collect();
        PulseTable::from_entries(entries)
    }
}

/// Output energies per trial for `input_energy` mean photons incident on S₁.
///
/// A fraction `1 − R_S1` of the source pulse is coupled into C₁. After every
/// round trip the tap on the output cavity emits `1 − R_out` of the energy
/// arriving at it; the amplitude carried forward has already lost that share.
pub fn tapped_pulse_table(
    cfg: &NetworkConfig,
    steps: u32,
    input_energy: f64,
) -> Result<PulseTable> {
    let energies = tapped_energies(cfg, steps)?;
    let injected = input_energy * (1.0 - cfg.input_coupler_reflectivity);
    let total: f64 = energies.iter().map(|(_, _, e)| e).sum::<f64>() * injected;
    if total >= 1.0 {
        return Err(Error::Scaling {
            total_mean_photons: total,
            suggested_input_energy: input_energy * 0.9 / total,
        });
    }
    let mut entries = Vec::with_capacity(energies.len());
    for (step, position, e) in energies {
        entries.push(PulseEntry {
            time: bin_time(cfg, step, &position)?,
            mean_photons: e * injected,
            step,
            position,
        });
    }
    entries.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(PulseTable { entries })
}

/// Input energy that makes the table carry `target_total` mean photons per trial.
pub fn input_energy_for_total(cfg: &NetworkConfig, steps: u32, target_total: f64) -> Result<f64> {
    if !(target_total > 0.0 && target_total < 1.0) {
        return Err(Error::Domain(format!(
            "target of {target_total} mean photons per trial is outside (0, 1)"
        )));
    }
    let per_injected: f64 = tapped_energies(cfg, steps)?.iter().map(|(_, _, e)| e).sum();
    let coupled = 1.0 - cfg.input_coupler_reflectivity;
    if per_injected <= 0.0 || coupled <= 0.0 {
        return Err(Error::Domain(
            "no light reaches the detector with this network".into(),
        ));
    }
    Ok(target_total / (per_injected * coupled))
}

/// Emitted energy per unit injected energy for all `(N ≤ steps, position)`.
fn tapped_energies(cfg: &NetworkConfig, steps: u32) -> Result<Vec<(u32, LatticePosition, f64)>> {
    cfg.validate()?;
    let dims = cfg.dims();
    let out = cfg.output_cavity;
    let r_out = cfg.output_coupler_reflectivity;
    let emit = (1.0 - r_out) / r_out;
    let factors = cfg.amplitude_factors();
    let states = trajectory(&WalkState::initial(dims), &cfg.coin, steps, Some(&factors))?;

    let mut result = Vec::new();
    for p in positions_at_step(dims, 0) {
        result.push((0, p, 0.0));
    }
    for state in &states {
        let step = state.step();
        let energies: BTreeMap<_, _> = state.cavity_energies(out);
        for p in positions_at_step(dims, step) {
            let e = energies.get(&p).copied().unwrap_or(0.0) * emit;
            result.push((step, p, e));
        }
    }
    Ok(result)
}
