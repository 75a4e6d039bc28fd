//! Convex and concave roofs over decompositions of a density matrix.
//!
//! Every decomposition of `ρ` arises from a purification `|Ψ⟩ = Σ_k √λ_k |k⟩|k⟩_A`
//! by applying a unitary `U_A` to the ancilla and projecting on ancilla basis states;
//! grouping ancilla states into sets `K_l` yields decompositions into mixed states.
//! [`optimize_roof`] searches over `U_A` for a list of such groupings.

mod decomposition;
mod eigen_partition;
mod optimize;
mod partition;
mod purification;
mod qubit;

pub use decomposition::{Component, Decomposition, WeightedComponent};
pub use eigen_partition::{eigen_partition_bound_k, eigen_partition_terms, KBoundTerms};
pub use optimize::{
    concave_roof_l, concave_roof_l_with_partitions, concave_roof_variance, convex_roof_variance,
    optimize_roof, roof_sum_i, roof_sum_r, Direction, OptimizerConfig, RoofResult,
};
pub use partition::{default_partitions, set_partitions, Partition};
pub use purification::{extract_decomposition, purify, Purification};
pub use qubit::{bloch_vector, pure_from_bloch, qubit_line_decomposition, qubit_z_line_decomposition};
