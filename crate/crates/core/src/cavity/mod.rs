//! Physical model of the coupled fiber cavities: timing, loss, output taps
//! and polarization.

mod network;
mod polarization;
mod pulses;
mod timing;

pub use network::{
    jones_unitarity_error, CavitySpec, CouplerLosses, JonesMatrix, NetworkConfig,
    APPARATUS_LOSS_C1_DB, APPARATUS_LOSS_C2_DB, APPARATUS_PULSE_NS, APPARATUS_T1_NS,
    APPARATUS_T2_NS, APPARATUS_TAP_REFLECTIVITY, APPARATUS_TRIAL_PERIOD_US, JONES_UNITARITY_TOL,
};
pub use polarization::{
    commutator_norm, jones_rotation, polarization_walk, PolarizationStep, PolarizationWalk,
};
pub use pulses::{
    excess_loss_db, input_energy_for_total, round_trip_transmission, tapped_pulse_table,
    PulseEntry, PulseTable, Transmission,
};
pub use timing::{bin_time, line_bin_time, max_observable_steps, StepLimits};
