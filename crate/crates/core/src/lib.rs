//! Travelling general Gaussian wave packets for the free mass and the
//! harmonic oscillator, built as coherent-squeezed states.
//!
//! The four initial parameters `(x0, p0, dx0, dp0)` (plus the sign of the
//! position-momentum correlation) map onto a squeeze `(r, theta)` and a
//! coherent amplitude `alpha`. From those the packet, its moments and its
//! classical centroid follow in closed form at any time. A split-step Fourier
//! integrator is included as an independent numerical check.

pub mod dynamics;
pub mod error;
pub mod modes;
pub mod oracle;
pub mod spectral;
pub mod squeeze;
pub mod system;
pub mod verify;
pub mod wavepacket;

pub use dynamics::{
    approx_spread_large_delta, classical_trajectory, contractive_analysis, moments,
    moments_closed_form, ClassicalState, ContractiveAnalysis, MomentSet,
};
pub use error::{Error, Result};
pub use modes::{general_mode, preferred_mode, wronskian, ModeValue};
pub use oracle::{
    compare, initial_packet, oracle_contractive_min, split_step_evolve, ComparisonReport,
    EvolveSpec, OracleMinimum,
};
pub use squeeze::{
    coherent_alpha, solve_squeeze, variances_from_squeeze, CoherentAmplitude, InitialVariances,
    SqueezeParams,
};
pub use system::{
    delta, validate_initial, validate_initial_with, CorrSign, InitialGaussian, SystemKind,
    SystemParams, Tolerances,
};
pub use wavepacket::{auto_grid, evaluate_packet, grid_moments, GridSpec, PhaseTracker, WaveField};
