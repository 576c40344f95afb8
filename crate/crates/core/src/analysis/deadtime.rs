use crate::error::{Error, Result};

/// Survival-corrected estimate for one time segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compensated {
    /// Trials still armed when the segment starts.
    pub surviving: u64,
    /// Detection probability given the detector was armed.
    pub probability: f64,
    pub probability_sigma: f64,
    /// Poisson mean `−ln(1 − p)`.
    pub mean_photons: f64,
    pub mean_photons_sigma: f64,
}

/// Undoes the one-detection-per-trial shadowing.
///
/// `counts` must be in time order. Segment `t` only sees the trials that did
/// not fire earlier, so `p_t = c_t / (M − Σ_{s<t} c_s)` and the mean photon
/// number follows from Poisson statistics as `−ln(1 − p_t)`.
pub fn compensate_dead_time(counts: &[u64], trials: u64) -> Result<Vec<Compensated>> {
    let total: u64 = counts.iter().sum();
    if total > trials {
        return Err(Error::Validation(format!(
            "{total} detections exceed {trials} trials"
        )));
    }
    let mut surviving = trials;
    let mut out = Vec::with_capacity(counts.len());
    for (bin, &c) in counts.iter().enumerate() {
        if surviving == 0 {
            return Err(Error::Saturation { bin });
        }
        let n = surviving as f64;
        let p = c as f64 / n;
        if p >= 1.0 {
            return Err(Error::Saturation { bin });
        }
        let sigma_p = (p * (1.0 - p) / n).sqrt();
        out.push(Compensated {
            surviving,
            probability: p,
            probability_sigma: sigma_p,
            mean_photons: -(-p).ln_1p(),
            mean_photons_sigma: sigma_p / (1.0 - p),
        });
        surviving -= c;
    }
    Ok(out)
}
