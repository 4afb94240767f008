//! Discretized one-particle momentum space, block operators on direct sums
//! of species, and their analysis and dynamics.

mod analysis;
mod block;
mod evolve;
mod grid;
mod pdo_eval;
mod triplet;

pub use analysis::{commutant_dimension, nested_commutator_rank, DEPTH_CAP, DIMENSION_CAP};
pub use block::{block_generator, coupling_operator, hermiticity_defect, BlockOperator, Entry, GeneratorKind};
pub use evolve::{
    evolve, hamiltonian_spectrum, BlockSnapshot, BlockState, MatrixSnapshot, StateBlock, StateSnapshot, Variant,
};
pub use grid::{gaussian_profile, DiffScheme, Grid, GridConfig};
pub use pdo_eval::eval_pdo;
pub use triplet::{triplet_construction, Level, TripletReport, WITNESS_DEPTH};
