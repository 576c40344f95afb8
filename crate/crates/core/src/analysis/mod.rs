//! From detection events back to walk distributions: histogramming, template
//! peak integration, dead-time compensation, background subtraction, loss
//! estimation, normalization and fidelity.

mod deadtime;
mod histogram;
mod loss;
mod normalize;
mod peaks;
mod pipeline;

pub use deadtime::{compensate_dead_time, Compensated};
pub use histogram::{build_histogram, Histogram};
pub use loss::{
    estimate_round_trip_loss, extremal_position, LossEstimate, MIN_LOSS_POINTS, NOISE_FLOOR_SIGMAS,
};
pub use normalize::{fidelity_series, normalize_steps, FidelitySeries, NormalizedSteps};
pub use peaks::{
    detection_threshold, identify_peaks, integrate_peaks, PeakRow, PeakTable, PeakWindow,
    FALSE_ALARM_PROBABILITY,
};
pub use pipeline::{
    analyze, ideal_output_distributions, Analysis, AnalysisOptions, DEFAULT_WINDOW_HALFWIDTH_PS,
};
