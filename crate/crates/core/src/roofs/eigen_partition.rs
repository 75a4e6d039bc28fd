//! Lower bound on the concave roof of `L` from groupings of qutrit eigenvectors.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{DensityMatrix, HermitianOperator, PureState, QuantumState};

/// The five candidates whose maximum is `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KBoundTerms {
    /// `Σ_k λ_k L_{|k⟩}`
    pub eigen_sum: f64,
    /// `L̃_k = λ_k L_{|k⟩} + p_k L_{ρ_k}` with `ρ_k ∝ ρ - λ_k|k⟩⟨k|`.
    pub tilde: [f64; 3],
    /// `L_ρ`
    pub l_rho: f64,
}

impl KBoundTerms {
    pub fn k(&self) -> f64 {
        self.tilde
            .iter()
            .fold(self.eigen_sum.max(self.l_rho), |acc, &t| acc.max(t))
    }
}

/// All candidate values for a qutrit state. Degenerate eigenvalues use the eigenbasis
/// as returned by the eigensolver.
pub fn eigen_partition_terms(rho: &DensityMatrix, a: &HermitianOperator, b: &HermitianOperator) -> Result<KBoundTerms> {
    ensure_dim(3, rho.dim())?;
    ensure_dim(3, a.dim())?;
    ensure_dim(3, b.dim())?;
    let e = rho.complete_eigensystem();
    let vectors: Vec<PureState> = (0..3)
        .map(|k| PureState::normalized(e.vector(k)).expect("eigenvectors are normalized"))
        .collect();
    let l_pure: Vec<f64> = vectors
        .iter()
        .map(|v| v.pair_moments(a, b).map(|m| m.rs_bound()))
        .collect::<Result<_>>()?;
    let eigen_sum = e.values.iter().zip(&l_pure).map(|(lam, l)| lam * l).sum();
    let mut tilde = [0.0; 3];
    for k in 0..3 {
        let weight = 1.0 - e.values[k];
        let rest = if weight > 1e-14 {
            // ρ_k from the two remaining eigenpairs.
            let mut w = CMatrix::zeros(3, 2);
            for (col, i) in (0..3).filter(|&i| i != k).enumerate() {
                w.set_column(col, &(e.vector(i) * linalg::r((e.values[i] / weight).sqrt())));
            }
            let rho_k = DensityMatrix::from_factor(&w);
            rho_k.pair_moments(a, b)?.rs_bound()
        } else {
            0.0
        };
        tilde[k] = e.values[k] * l_pure[k] + weight * rest;
    }
    let l_rho = rho.pair_moments(a, b)?.rs_bound();
    Ok(KBoundTerms { eigen_sum, tilde, l_rho })
}

/// `K = max(Σλ_k L_{|k⟩}, L̃₁, L̃₂, L̃₃, L_ρ)`, which satisfies `Var(A)Var(B) ≥ K²/4`.
pub fn eigen_partition_bound_k(rho: &DensityMatrix, a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    Ok(eigen_partition_terms(rho, a, b)?.k())
}
