//! Brute-force checks for the closed forms: numerically exponentiated
//! superoperators and a Monte Carlo unraveling of the measurement model.

pub mod eigen;
pub mod expm;
pub mod superop;
pub mod trajectory;

pub use eigen::eigenvalues;
pub use expm::expm;
pub use superop::{
    build_exponent_full, build_exponent_single, evolve_full, evolve_single,
    exponent_single_literal, propagator, single_qubit_unitary, SuperoperatorExponent,
};
pub use trajectory::{run_trajectories, TrajectoryConfig, TrajectoryResult};
