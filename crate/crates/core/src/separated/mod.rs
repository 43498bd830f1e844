//! Separated-equation solver for the sigma_g ground state.

pub mod angular;
mod ground;
pub mod radial;

pub use angular::{angular_converged, angular_eigenvalue, AngularSolution};
pub use ground::{
    energy_curve, normalize, solve_ground, solve_ground_with, Residuals, ScanResult, ScanRow,
    SigmaGSolution, SolverOptions, TruncationInfo, DEFAULT_N_ETA, DEFAULT_N_XI, E_LOWER, E_UPPER,
};
pub use radial::{radial_mismatch, radial_shoot, radial_start, RadialFunction, ShootOutcome, ShootingGrid};
