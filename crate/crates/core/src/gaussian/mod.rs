//! Gaussian-basis variational solver with nucleus-centered and mid-bond
//! s functions.

mod basis;
mod boys;
mod integrals;
mod solve;

pub use basis::{even_tempered, BasisEntry, BasisSpec, Center};
pub use boys::{boys_f0, T_SWITCH};
pub use integrals::{kinetic, nuclear_attraction, overlap, Group, Primitive};
pub use solve::{
    build_matrices, matrices_for, solve_generalized, variational_ground, GeneralizedSolution, GroupSummary,
    VariationalSolution, DEFAULT_TAU,
};
