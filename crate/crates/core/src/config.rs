//! Run configuration: a flat `key = value` file with dotted keys.
//!
//! ```text
//! # cavitywalk run configuration
//! network.t1_ns = 503.0
//! network.eta_c = 0.5
//! detector.jitter_fwhm_ps = 300.0
//! run.trials = 5000000
//! ```
//!
//! Every key is optional; missing keys take the apparatus defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cavity::{
    input_energy_for_total, max_observable_steps, CavitySpec, CouplerLosses, NetworkConfig,
    APPARATUS_LOSS_C1_DB, APPARATUS_LOSS_C2_DB, APPARATUS_PULSE_NS, APPARATUS_T1_NS,
    APPARATUS_T2_NS, APPARATUS_TAP_REFLECTIVITY, APPARATUS_TRIAL_PERIOD_US,
};
use crate::detector::{DetectorSpec, DEFAULT_BACKGROUND_RATE};
use crate::error::{Error, Result};
use crate::walk::CoinSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub eta_c: f64,
    pub t1_ns: f64,
    pub t2_ns: f64,
    pub loss_c1_db: f64,
    pub loss_c2_db: f64,
    pub r_s1: f64,
    pub r_s2: f64,
    pub loss_s1_db: f64,
    pub loss_s2_db: f64,
    pub loss_sc_db: f64,
    pub pulse_ns: f64,
    pub trial_period_us: f64,
    pub offset_ns: f64,
}

impl Default for NetworkSection {
    fn default() -> Self {
        NetworkSection {
            eta_c: 0.5,
            t1_ns: APPARATUS_T1_NS,
            t2_ns: APPARATUS_T2_NS,
            loss_c1_db: APPARATUS_LOSS_C1_DB,
            loss_c2_db: APPARATUS_LOSS_C2_DB,
            r_s1: APPARATUS_TAP_REFLECTIVITY,
            r_s2: APPARATUS_TAP_REFLECTIVITY,
            loss_s1_db: 0.0,
            loss_s2_db: 0.0,
            loss_sc_db: 0.0,
            pulse_ns: APPARATUS_PULSE_NS,
            trial_period_us: APPARATUS_TRIAL_PERIOD_US,
            offset_ns: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorSection {
    pub jitter_fwhm_ps: f64,
    pub tdc_bin_ps: u32,
    pub background_per_ns: f64,
    pub efficiency: f64,
}

impl Default for DetectorSection {
    fn default() -> Self {
        let d = DetectorSpec::default();
        DetectorSection {
            jitter_fwhm_ps: d.jitter_fwhm,
            tdc_bin_ps: d.tdc_bin,
            background_per_ns: DEFAULT_BACKGROUND_RATE,
            efficiency: d.efficiency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub trials: u64,
    pub seed: u64,
    pub steps: u32,
    /// Mean photons of the source pulse before S₁. When absent the input is
    /// scaled so the output carries `target_mean_photons` per trial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_energy: Option<f64>,
    pub target_mean_photons: f64,
    pub window_halfwidth_ps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            trials: 5_000_000,
            seed: 1,
            steps: 62,
            input_energy: None,
            target_mean_photons: 0.95,
            window_halfwidth_ps: crate::analysis::DEFAULT_WINDOW_HALFWIDTH_PS,
            threads: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub network: NetworkSection,
    pub detector: DetectorSection,
    pub run: RunSection,
}

fn field<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Validation(format!("{name}: {e}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: e
                .span()
                .map(|s| text[..s.start].lines().count().max(1))
                .unwrap_or(0),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io_path("reading", path, e))?;
        Self::parse(&text)
    }

    /// Flat `section.key = value` lines.
    pub fn to_text(&self) -> String {
        let value = toml::Value::try_from(self).expect("config is always representable");
        let mut out = String::from("# cavitywalk run configuration\n");
        if let toml::Value::Table(sections) = value {
            for (section, table) in sections {
                if let toml::Value::Table(entries) = table {
                    for (key, v) in entries {
                        out.push_str(&format!("{section}.{key} = {v}\n"));
                    }
                }
            }
        }
        out
    }

    pub fn network(&self) -> Result<NetworkConfig> {
        let n = &self.network;
        let cfg = NetworkConfig {
            coin: field("network.eta_c", CoinSpec::from_bias(n.eta_c))?,
            cavities: vec![
                CavitySpec::new(n.t1_ns, n.loss_c1_db),
                CavitySpec::new(n.t2_ns, n.loss_c2_db),
            ],
            input_coupler_reflectivity: n.r_s1,
            output_coupler_reflectivity: n.r_s2,
            coupler_excess_losses: CouplerLosses {
                input: n.loss_s1_db,
                output: n.loss_s2_db,
                coin: n.loss_sc_db,
            },
            pulse_duration: n.pulse_ns,
            trial_period: n.trial_period_us,
            output_cavity: 1,
            detection_path_offset: n.offset_ns,
        };
        field("network", cfg.validate())?;
        Ok(cfg)
    }

    pub fn detector(&self) -> Result<DetectorSpec> {
        let d = &self.detector;
        let spec = DetectorSpec {
            jitter_fwhm: d.jitter_fwhm_ps,
            tdc_bin: d.tdc_bin_ps,
            background_rate: d.background_per_ns,
            efficiency: d.efficiency,
        };
        field("detector", spec.validate())?;
        Ok(spec)
    }

    /// Checks every section and the step limit.
    pub fn validate(&self) -> Result<()> {
        let net = self.network()?;
        self.detector()?;
        let limits = max_observable_steps(&net);
        if self.run.steps == 0 {
            return Err(Error::Validation("run.steps: must be at least 1".into()));
        }
        if self.run.steps > limits.limit() {
            return Err(Error::Validation(format!(
                "run.steps: {} exceeds the observable limit {} (repetition {}, overlap {})",
                self.run.steps,
                limits.limit(),
                limits.repetition_limit,
                limits.overlap_limit
            )));
        }
        if !(self.run.window_halfwidth_ps > 0.0) {
            return Err(Error::Validation(
                "run.window_halfwidth_ps: must be positive".into(),
            ));
        }
        if let Some(e) = self.run.input_energy {
            if !(e >= 0.0) || !e.is_finite() {
                return Err(Error::Validation(format!(
                    "run.input_energy: {e} must be non-negative"
                )));
            }
        } else if !(self.run.target_mean_photons > 0.0 && self.run.target_mean_photons < 1.0) {
            return Err(Error::Validation(format!(
                "run.target_mean_photons: {} outside (0, 1)",
                self.run.target_mean_photons
            )));
        }
        if self.run.threads == Some(0) {
            return Err(Error::Validation("run.threads: must be at least 1".into()));
        }
        Ok(())
    }

    /// Source-pulse energy for this run.
    pub fn resolved_input_energy(&self, net: &NetworkConfig) -> Result<f64> {
        match self.run.input_energy {
            Some(e) => Ok(e),
            None => input_energy_for_total(net, self.run.steps, self.run.target_mean_photons),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_match_apparatus() {
        let cfg = RunConfig::default();
        let net = cfg.network().unwrap();
        assert_eq!(net, NetworkConfig::apparatus(0.5).unwrap());
        cfg.validate().unwrap();
    }

    #[test]
    fn dotted_keys() {
        let cfg = RunConfig::parse(
            "# comment\nnetwork.eta_c = 0.2\nrun.trials = 10 # trailing\ndetector.tdc_bin_ps = 81\n",
        )
        .unwrap();
        assert_eq!(cfg.network.eta_c, 0.2);
        assert_eq!(cfg.run.trials, 10);
        assert_eq!(cfg.detector.tdc_bin_ps, 81);
        assert_eq!(cfg.network.t1_ns, 503.0);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(
            RunConfig::parse("network.t3_ns = 1.0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn field_level_messages() {
        let cfg = RunConfig::parse("network.eta_c = 1.5\n").unwrap();
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("network.eta_c"), "{msg}");
    }

    #[test]
    fn step_limit_enforced() {
        let cfg = RunConfig::parse("run.steps = 63\n").unwrap();
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("observable limit 62"), "{msg}");
    }

    #[test]
    fn text_uses_flat_keys() {
        let text = RunConfig::default().to_text();
        assert!(text.contains("network.t1_ns = 503.0\n"));
        assert!(text.contains("run.trials = 5000000\n"));
        assert!(!text.contains('['));
    }

    proptest! {
        #[test]
        fn round_trip(
            eta in 0.0f64..=1.0,
            t1 in 1.0f64..1e4,
            loss in 0.0f64..3.0,
            bg in 0.0f64..1e-3,
            trials in 0u64..u32::MAX as u64,
            seed in any::<u64>().prop_map(|s| s >> 1),
            input in prop::option::of(0.0f64..1e6),
            out in prop::option::of("[a-z/._]{1,12}"),
        ) {
            let mut cfg = RunConfig::default();
            cfg.network.eta_c = eta;
            cfg.network.t1_ns = t1;
            cfg.network.loss_s2_db = loss;
            cfg.detector.background_per_ns = bg;
            cfg.run.trials = trials;
            cfg.run.seed = seed;
            cfg.run.input_energy = input;
            cfg.run.out = out;
            let back = RunConfig::parse(&cfg.to_text()).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
