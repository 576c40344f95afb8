//! Ideal coined discrete-time quantum walk on `D`-dimensional lattices.
//!
//! The coin index is the cavity a pulse occupies; the position is the number
//! of passes through each cavity. One step is a coupler pass followed by one
//! round trip.

mod coin;
mod distribution;
mod lattice;
mod oracle;
mod state;

pub use coin::{
    coin_from_bias, multiport_coin, unitarity_error, CoinRule, CoinSpec, CONSTRUCTED_UNITARITY_TOL,
    EXPLICIT_UNITARITY_TOL,
};
pub use distribution::{fidelity, WalkDistribution};
pub use lattice::{positions_at_step, LatticePosition};
pub use oracle::{brute_force_oracle, ORACLE_MAX_STEPS};
pub use state::{classical_walk, evolve, step, trajectory, WalkState};
