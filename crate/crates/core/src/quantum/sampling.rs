//! Seeded random states and observables.

use rand::SeedableRng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::operator::HermitianOperator;
use super::state::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};

/// Parameters of the induced measure: `ρ = G G† / Tr(G G†)` with `G` a `dim x rank`
/// Ginibre matrix. `rank == dim` is the Hilbert–Schmidt measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomStateConfig {
    pub dim: usize,
    pub rank: usize,
    pub seed: u64,
}

impl RandomStateConfig {
    pub fn new(dim: usize, rank: usize, seed: u64) -> Result<Self> {
        let cfg = Self { dim, rank, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn full_rank(dim: usize, seed: u64) -> Self {
        Self { dim, rank: dim, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.rank == 0 || self.rank > self.dim {
            return Err(Error::InvalidArgument(format!(
                "random state needs 1 <= rank <= dim, got rank {} and dim {}",
                self.rank, self.dim
            )));
        }
        Ok(())
    }
}

/// The generator used for every seeded draw in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_density_matrix(cfg: &RandomStateConfig) -> Result<DensityMatrix> {
    cfg.validate()?;
    let mut rng = seeded_rng(cfg.seed);
    random_density_matrix_with(cfg.dim, cfg.rank, &mut rng)
}

pub fn random_density_matrix_with<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let g = linalg::ginibre(dim, rank, rng);
    DensityMatrix::from_unnormalized(&g * g.adjoint())
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let v = CVector::from_iterator(dim, (0..dim).map(|_| linalg::standard_complex_normal(rng)));
    PureState::normalized(v).expect("Gaussian vector is nonzero almost surely")
}

/// Hermitian matrix with Gaussian entries (GUE up to scale).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::from_hermitian_part(&linalg::ginibre(dim, dim, rng))
}
