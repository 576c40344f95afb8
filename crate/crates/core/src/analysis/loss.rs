use std::f64::consts::LN_10;

use crate::cavity::NetworkConfig;
use crate::error::{Error, Result};
use crate::walk::LatticePosition;

use super::peaks::PeakTable;

/// Points are used only when `µ̂ ≥ NOISE_FLOOR_SIGMAS · σ`.
pub const NOISE_FLOOR_SIGMAS: f64 = 5.0;
pub const MIN_LOSS_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct LossEstimate {
    pub cavity: usize,
    /// Excess loss per round trip, dB, with coin and tap factors removed.
    pub loss_db: f64,
    pub sigma_db: f64,
    /// Fitted `d ln µ̂ / dN`.
    pub slope: f64,
    pub points: usize,
    pub reduced_chi2: f64,
}

/// Output bin reached only by circling `cavity` before the final pass
/// through the output cavity.
pub fn extremal_position(cfg: &NetworkConfig, cavity: usize, step: u32) -> LatticePosition {
    let n = cfg.cavities.len();
    let out = cfg.output_cavity;
    let mut traversals = vec![0u32; n];
    if cavity == out {
        traversals[out] = step;
    } else {
        traversals[cavity] = step - 1;
        traversals[out] += 1;
    }
    LatticePosition::from_counts(traversals[1..].to_vec())
}

/// Loss of one cavity from the exponential decay of its extremal pulses.
///
/// Fits `ln µ̂` against step number by weighted least squares with weights
/// `(µ̂/σ)²`. Each step along the locus multiplies the energy by the stay
/// probability `|U_cc|²` and the round-trip transmission, so both the coin
/// factor and the cavity's tap reflectivity are divided out of the slope.
pub fn estimate_round_trip_loss(
    peaks: &PeakTable,
    cfg: &NetworkConfig,
    cavity: usize,
) -> Result<LossEstimate> {
    if cavity >= cfg.cavities.len() {
        return Err(Error::Configuration(format!(
            "cavity {cavity} does not exist"
        )));
    }
    let stay = cfg.coin.stay_probability(cavity);
    if !(stay > 0.0) {
        return Err(Error::Estimation(format!(
            "coin never keeps a pulse in cavity {cavity}; its locus carries no light"
        )));
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for step in peaks.steps().into_iter().filter(|&s| s >= 1) {
        let pos = extremal_position(cfg, cavity, step);
        let Some(row) = peaks.get(step, &pos) else {
            continue;
        };
        if row.mu > 0.0 && row.sigma > 0.0 && row.mu >= NOISE_FLOOR_SIGMAS * row.sigma {
            xs.push(step as f64);
            ys.push(row.mu.ln());
            ws.push((row.mu / row.sigma).powi(2));
        }
    }
    if xs.len() < MIN_LOSS_POINTS {
        return Err(Error::Estimation(format!(
            "cavity {cavity}: {} usable extremal points, need {MIN_LOSS_POINTS}",
            xs.len()
        )));
    }

    let wsum: f64 = ws.iter().sum();
    let xbar = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / wsum;
    let ybar = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / wsum;
    let sxx: f64 = xs
        .iter()
        .zip(&ws)
        .map(|(x, w)| w * (x - xbar).powi(2))
        .sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .zip(&ws)
        .map(|((x, y), w)| w * (x - xbar) * (y - ybar))
        .sum();
    if sxx <= 0.0 {
        return Err(Error::Estimation("extremal points share one step".into()));
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let chi2: f64 = xs
        .iter()
        .zip(&ys)
        .zip(&ws)
        .map(|((x, y), w)| w * (y - intercept - slope * x).powi(2))
        .sum();
    let reduced_chi2 = chi2 / (xs.len() - 2) as f64;
    if slope >= 0.0 {
        return Err(Error::Estimation(format!(
            "cavity {cavity}: extremal pulses do not decay (slope {slope:.4}, chi2/dof {reduced_chi2:.2})"
        )));
    }

    let tap = cfg.tap_reflectivity(cavity).unwrap_or(1.0);
    let loss_db = -10.0 / LN_10 * (slope - stay.ln() - tap.ln());
    let sigma_db = 10.0 / LN_10 / sxx.sqrt();
    Ok(LossEstimate {
        cavity,
        loss_db,
        sigma_db,
        slope,
        points: xs.len(),
        reduced_chi2,
    })
}
