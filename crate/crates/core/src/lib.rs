//! Continuous-time quantum walk on the n-dimensional hypercube with
//! coordinate-measurement decoherence.
//!
//! The walk factorizes into `n` independent qubits, each governed by a 4×4
//! superoperator. [`dynamics`] evaluates the resulting closed forms,
//! [`analysis`] builds mixing/hitting times and distances to uniform on top,
//! and [`oracle`] re-derives the same numbers by brute force.

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod state;

pub use dynamics::{
    damping_constants, gamma, gamma_overdamped_terms, prob0, prob1, probabilities, DampingConstants,
    Regime, Spectrum4, WalkParams,
};
pub use error::{Result, WalkError};
pub use state::DensityState;
