//! Finite-dimensional states and operators.

pub mod algebra;
pub mod json;
pub mod operator;
pub mod sampling;
pub mod state;

pub use algebra::{
    coherent_state, make_fock_algebra, make_spin_algebra, make_su_d_generators, spin_coherent_polar,
    spin_coherent_state, FockAlgebra, SpinAlgebra, DEFAULT_FOCK_CUTOFF,
};
pub use json::{MatrixJson, StateJson, StateKind};
pub use operator::{HermitianOperator, LocalSum, Observable};
pub use sampling::{random_density_matrix, random_hermitian, random_pure_state, seeded_rng, RandomStateConfig};
pub use state::{ground_state, tensor, DensityMatrix, EigenSystem, GroundState, PairMoments, PureState, QuantumState, Tensor};
