use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::walk::CoinSpec;

/// Tolerance on Jones-matrix unitarity.
pub const JONES_UNITARITY_TOL: f64 = 1e-12;

pub type JonesMatrix = Matrix2<Complex64>;

/// One fiber ring.
#[derive(Debug, Clone, PartialEq)]
pub struct CavitySpec {
    /// ns
    pub round_trip_time: f64,
    /// dB per round trip, excluding deliberate coupler taps.
    pub excess_loss: f64,
    /// Polarization rotation accumulated over one round trip.
    pub jones: Option<JonesMatrix>,
}

impl CavitySpec {
    pub fn new(round_trip_time: f64, excess_loss: f64) -> Self {
        CavitySpec {
            round_trip_time,
            excess_loss,
            jones: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.round_trip_time > 0.0) || !self.round_trip_time.is_finite() {
            return Err(Error::Validation(format!(
                "round-trip time {} ns must be positive",
                self.round_trip_time
            )));
        }
        if !(self.excess_loss >= 0.0) || !self.excess_loss.is_finite() {
            return Err(Error::Validation(format!(
                "excess loss {} dB must be non-negative",
                self.excess_loss
            )));
        }
        if let Some(j) = &self.jones {
            let err = jones_unitarity_error(j);
            if !(err <= JONES_UNITARITY_TOL) {
                return Err(Error::Validation(format!(
                    "Jones matrix not unitary (max |J†J - I| = {err:.3e})"
                )));
            }
        }
        Ok(())
    }
}

pub fn jones_unitarity_error(j: &JonesMatrix) -> f64 {
    let d = j.adjoint() * j - JonesMatrix::identity();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Excess losses of the three couplers, dB per pass.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CouplerLosses {
    pub input: f64,
    pub output: f64,
    pub coin: f64,
}

/// The coupled-cavity network and its timing.
///
/// Cavity 0 is C₁ and holds the input coupler S₁; `output_cavity` holds the
/// tap S₂ that feeds the detector.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub coin: CoinSpec,
    pub cavities: Vec<CavitySpec>,
    pub input_coupler_reflectivity: f64,
    pub output_coupler_reflectivity: f64,
    pub coupler_excess_losses: CouplerLosses,
    /// ns
    pub pulse_duration: f64,
    /// µs
    pub trial_period: f64,
    pub output_cavity: usize,
    /// ns, fixed delay between the walk clock and the detector.
    pub detection_path_offset: f64,
}

pub const APPARATUS_T1_NS: f64 = 503.0;
pub const APPARATUS_T2_NS: f64 = 511.0;
pub const APPARATUS_LOSS_C1_DB: f64 = 0.50;
pub const APPARATUS_LOSS_C2_DB: f64 = 0.47;
pub const APPARATUS_TAP_REFLECTIVITY: f64 = 0.99;
pub const APPARATUS_PULSE_NS: f64 = 2.5;
pub const APPARATUS_TRIAL_PERIOD_US: f64 = 33.0;

impl NetworkConfig {
    /// The two-cavity apparatus with a symmetric coupler of bias `eta`.
    pub fn apparatus(eta: f64) -> Result<Self> {
        Ok(NetworkConfig {
            coin: CoinSpec::from_bias(eta)?,
            cavities: vec![
                CavitySpec::new(APPARATUS_T1_NS, APPARATUS_LOSS_C1_DB),
                CavitySpec::new(APPARATUS_T2_NS, APPARATUS_LOSS_C2_DB),
            ],
            input_coupler_reflectivity: APPARATUS_TAP_REFLECTIVITY,
            output_coupler_reflectivity: APPARATUS_TAP_REFLECTIVITY,
            coupler_excess_losses: CouplerLosses::default(),
            pulse_duration: APPARATUS_PULSE_NS,
            trial_period: APPARATUS_TRIAL_PERIOD_US,
            output_cavity: 1,
            detection_path_offset: 0.0,
        })
    }

    /// Same network with every loss and tap removed.
    pub fn lossless(&self) -> Self {
        let mut cfg = self.clone();
        for c in &mut cfg.cavities {
            c.excess_loss = 0.0;
        }
        cfg.input_coupler_reflectivity = 1.0;
        cfg.output_coupler_reflectivity = 1.0;
        cfg.coupler_excess_losses = CouplerLosses::default();
        cfg
    }

    pub fn dims(&self) -> usize {
        self.coin.dims()
    }

    /// `T₂ − T₁`, the time-bin spacing of a one-dimensional walk.
    pub fn tau(&self) -> f64 {
        self.cavities[1].round_trip_time - self.cavities[0].round_trip_time
    }

    /// Trial period in ns.
    pub fn trial_period_ns(&self) -> f64 {
        self.trial_period * 1e3
    }

    pub fn round_trip_times(&self) -> Vec<f64> {
        self.cavities.iter().map(|c| c.round_trip_time).collect()
    }

    /// Excess loss of cavity `c` with the coupler excess losses it crosses
    /// each round trip folded in.
    pub fn effective_excess_loss_db(&self, c: usize) -> f64 {
        let mut loss = self.cavities[c].excess_loss + self.coupler_excess_losses.coin;
        if c == 0 {
            loss += self.coupler_excess_losses.input;
        }
        if c == self.output_cavity {
            loss += self.coupler_excess_losses.output;
        }
        loss
    }

    /// Reflectivity of the tap coupler sitting in cavity `c`, if any.
    pub fn tap_reflectivity(&self, c: usize) -> Option<f64> {
        let mut r = None;
        if c == 0 {
            r = Some(self.input_coupler_reflectivity);
        }
        if c == self.output_cavity {
            r = Some(r.unwrap_or(1.0) * self.output_coupler_reflectivity);
        }
        r
    }

    /// Per-cavity amplitude transmission for one round trip.
    pub fn amplitude_factors(&self) -> Vec<f64> {
        (0..self.cavities.len())
            .map(|c| {
                super::round_trip_transmission(
                    self.effective_excess_loss_db(c),
                    self.tap_reflectivity(c),
                )
                .amplitude
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.coin.cavities();
        if self.cavities.len() != n {
            return Err(Error::Validation(format!(
                "D={} network needs {n} cavities, got {}",
                self.dims(),
                self.cavities.len()
            )));
        }
        for (i, c) in self.cavities.iter().enumerate() {
            c.validate()
                .map_err(|e| Error::Validation(format!("cavity {i}: {e}")))?;
        }
        for (name, r) in [
            (
                "input coupler reflectivity",
                self.input_coupler_reflectivity,
            ),
            (
                "output coupler reflectivity",
                self.output_coupler_reflectivity,
            ),
        ] {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::Validation(format!("{name} {r} outside (0, 1]")));
            }
        }
        let l = &self.coupler_excess_losses;
        if [l.input, l.output, l.coin].iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::Validation(
                "coupler excess losses must be non-negative".into(),
            ));
        }
        if !(self.pulse_duration > 0.0) {
            return Err(Error::Validation("pulse duration must be positive".into()));
        }
        if !(self.trial_period > 0.0) {
            return Err(Error::Validation("trial period must be positive".into()));
        }
        if self.output_cavity >= n {
            return Err(Error::Validation(format!(
                "output cavity {} does not exist",
                self.output_cavity
            )));
        }
        if !(self.detection_path_offset >= 0.0) {
            return Err(Error::Validation(
                "detection path offset must be non-negative".into(),
            ));
        }
        let times = self.round_trip_times();
        for i in 0..n {
            for j in i + 1..n {
                let gap = (times[i] - times[j]).abs();
                if gap == 0.0 {
                    return Err(Error::Validation(format!(
                        "cavities {i} and {j} share round-trip time {} ns",
                        times[i]
                    )));
                }
                if gap <= self.pulse_duration {
                    return Err(Error::Validation(format!(
                        "cavities {i} and {j} differ by {gap} ns, not more than the \
                         {} ns pulse; time bins would not be distinct",
                        self.pulse_duration
                    )));
                }
            }
        }
        if self.dims() == 1 && self.tau() <= 0.0 {
            return Err(Error::Validation(
                "C₂ must be the longer cavity (τ = T₂ − T₁ > 0)".into(),
            ));
        }
        Ok(())
    }
}
