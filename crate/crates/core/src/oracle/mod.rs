//! Reference solvers: exact diagonalization, mean field and brute-force
//! dense fermion operators.

pub mod dense;
mod exact;
mod mean_field;

pub use exact::{
    exact_ground, exact_ground_over_down, GroundState, SectorBasis, SectorHamiltonian, DENSE_LIMIT,
    MAX_SECTOR_DIM,
};
pub use mean_field::{mean_field, MeanFieldKind, MeanFieldOptions, MeanFieldState};
