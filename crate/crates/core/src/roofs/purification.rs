use super::decomposition::{Component, Decomposition, WeightedComponent};
use super::partition::Partition;
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{DensityMatrix, PureState};

/// Sets with total weight below this are dropped from extracted decompositions.
pub(crate) const MIN_WEIGHT: f64 = 1e-14;

/// `|Ψ⟩ = Σ_k √λ_k |k⟩_S |k⟩_A` together with an ancilla unitary and a grouping of
/// ancilla basis states.
///
/// The joint state is stored as the `dim × ancilla_dim` coefficient matrix `M` with
/// `|Ψ⟩ = Σ_{s,a} M[s,a] |s⟩|a⟩`; applying `U_A` maps `M` to `M U_Aᵀ`, whose columns are
/// the unnormalized conditional states `|v_a⟩ = ⟨a|_A U_A |Ψ⟩`.
#[derive(Debug, Clone)]
pub struct Purification {
    target: DensityMatrix,
    ancilla_dim: usize,
    factor: CMatrix,
    u_a: CMatrix,
    partition: Partition,
}

/// Eigendecomposition purification with a zero-padded ancilla, `U_A = 1`, singleton sets.
pub fn purify(rho: &DensityMatrix, ancilla_dim: usize) -> Result<Purification> {
    let e = rho.eigensystem();
    let rank = e.rank();
    if ancilla_dim < rank {
        return Err(Error::AncillaTooSmall { ancilla: ancilla_dim, rank });
    }
    let mut factor = CMatrix::zeros(rho.dim(), ancilla_dim);
    let mut col = 0;
    for (k, &lambda) in e.values.iter().enumerate() {
        if lambda > 0.0 {
            factor.set_column(col, &(e.vector(k) * linalg::r(lambda.sqrt())));
            col += 1;
        }
    }
    Ok(Purification {
        target: rho.clone(),
        ancilla_dim,
        factor,
        u_a: CMatrix::identity(ancilla_dim, ancilla_dim),
        partition: Partition::singletons(ancilla_dim),
    })
}

impl Purification {
    pub fn target(&self) -> &DensityMatrix {
        &self.target
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn u_a(&self) -> &CMatrix {
        &self.u_a
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Coefficient matrix of the purification before the ancilla unitary.
    pub(crate) fn base_factor(&self) -> &CMatrix {
        &self.factor
    }

    /// Coefficient matrix `M U_Aᵀ` after the ancilla unitary.
    pub fn rotated_factor(&self) -> CMatrix {
        &self.factor * self.u_a.transpose()
    }

    /// The joint pure state with system index major: amplitude of `|s⟩|a⟩` at `s·d_A + a`.
    pub fn psi_p(&self) -> PureState {
        let m = self.rotated_factor();
        let amps = crate::linalg::CVector::from_iterator(
            m.len(),
            (0..m.nrows()).flat_map(|s| (0..m.ncols()).map(move |a| (s, a))).map(|(s, a)| m[(s, a)]),
        );
        PureState::normalized(amps).expect("purification has unit norm")
    }

    /// Replaces the ancilla unitary; it must be unitary within 1e-10.
    pub fn with_unitary(mut self, u: CMatrix) -> Result<Self> {
        ensure_dim(self.ancilla_dim, u.nrows())?;
        ensure_dim(self.ancilla_dim, u.ncols())?;
        let defect = linalg::max_abs_entry(&(u.adjoint() * &u - CMatrix::identity(self.ancilla_dim, self.ancilla_dim)));
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!("ancilla matrix is not unitary (defect {defect:e})")));
        }
        self.u_a = u;
        Ok(self)
    }

    pub fn with_partition(mut self, partition: Partition) -> Result<Self> {
        ensure_dim(self.ancilla_dim, partition.size())?;
        self.partition = partition;
        Ok(self)
    }
}

/// Weighted components `p_l = Tr σ_l`, `σ_l / p_l` for each set of `partition`, with
/// `σ_l = Σ_{a∈K_l} |v_a⟩⟨v_a|` built from the columns of `factor`.
pub(crate) fn components_from_factor(factor: &CMatrix, partition: &Partition) -> Vec<WeightedComponent> {
    let mut out = Vec::with_capacity(partition.sets().len());
    for set in partition.sets() {
        let weight: f64 = set.iter().map(|&a| factor.column(a).norm_squared()).sum();
        if weight < MIN_WEIGHT {
            continue;
        }
        let scale = linalg::r(1.0 / weight.sqrt());
        let state = if set.len() == 1 {
            let v = factor.column(set[0]) * scale;
            Component::Pure(PureState::normalized(v).expect("weight is positive"))
        } else {
            let mut w = CMatrix::zeros(factor.nrows(), set.len());
            for (i, &a) in set.iter().enumerate() {
                w.set_column(i, &(factor.column(a) * scale));
            }
            Component::Mixed(DensityMatrix::from_factor(&w))
        };
        out.push(WeightedComponent { weight, state });
    }
    // Renormalize the weights against accumulated round-off.
    let total: f64 = out.iter().map(|c| c.weight).sum();
    for c in &mut out {
        c.weight /= total;
    }
    out
}

pub fn extract_decomposition(pur: &Purification) -> Decomposition {
    let components = components_from_factor(&pur.rotated_factor(), &pur.partition);
    Decomposition::new(components).expect("purification weights sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random_density_matrix, seeded_rng, QuantumState, RandomStateConfig};
    use proptest::prelude::*;

    /// Partial trace over the ancilla of the stored joint state.
    fn reduced(p: &Purification) -> CMatrix {
        let m = p.rotated_factor();
        &m * m.adjoint()
    }

    #[test]
    fn pure_state_has_one_schmidt_coefficient() {
        let psi = PureState::basis(3, 2);
        let p = purify(&psi.to_density_matrix(), 3).unwrap();
        let nonzero = (0..3).filter(|&a| p.base_factor().column(a).norm() > 0.0).count();
        assert_eq!(nonzero, 1);
        let d = extract_decomposition(&p);
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn maximally_mixed_qubit() {
        let rho = DensityMatrix::maximally_mixed(2);
        let p = purify(&rho, 2).unwrap();
        for a in 0..2 {
            assert!((p.base_factor().column(a).norm() - 0.5f64.sqrt()).abs() < 1e-15);
        }
        let psi = p.psi_p();
        assert_eq!(psi.dim(), 4);
        let mut rng = seeded_rng(3);
        let p = p.with_unitary(linalg::haar_unitary(2, &mut rng)).unwrap();
        let d = extract_decomposition(&p);
        assert_eq!(d.len(), 2);
        assert!(d.components().iter().all(|c| c.state.is_pure()));
        assert!(d.reconstruction_error(&rho) < 1e-12);
    }

    #[test]
    fn random_qutrit_round_trip() {
        let rho = random_density_matrix(&RandomStateConfig::full_rank(3, 17)).unwrap();
        let p = purify(&rho, 3).unwrap();
        assert!(linalg::max_abs_entry(&(reduced(&p) - rho.matrix())) < 1e-12);
        let d = extract_decomposition(&p);
        // Singletons with identity unitary reproduce the eigendecomposition.
        for (c, &lambda) in d.components().iter().zip(&rho.eigensystem().values) {
            assert!((c.weight - lambda).abs() < 1e-14);
        }
        let trivial = extract_decomposition(&p.clone().with_partition(Partition::trivial(3)).unwrap());
        assert_eq!(trivial.len(), 1);
        assert!(trivial.reconstruction_error(&rho) < 1e-12);
    }

    #[test]
    fn ancilla_checks() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(purify(&rho, 2), Err(Error::AncillaTooSmall { ancilla: 2, rank: 3 })));
        let p = purify(&rho, 5).unwrap();
        assert!(p.clone().with_unitary(CMatrix::zeros(5, 5)).is_err());
        assert!(p.with_partition(Partition::singletons(3)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn extraction_always_reconstructs(seed in any::<u64>(), dim in 2usize..5, extra in 0usize..3, which in 0usize..52) {
            let rank = 1 + (seed as usize) % dim;
            let rho = random_density_matrix(&RandomStateConfig::new(dim, rank, seed).unwrap()).unwrap();
            let ancilla = dim + extra;
            let mut rng = seeded_rng(seed ^ 0x5eed);
            let parts = super::super::set_partitions(ancilla.min(5));
            let partition = if ancilla <= 5 { parts[which % parts.len()].clone() } else { Partition::singletons(ancilla) };
            let p = purify(&rho, ancilla).unwrap()
                .with_unitary(linalg::haar_unitary(ancilla, &mut rng)).unwrap()
                .with_partition(partition).unwrap();
            let d = extract_decomposition(&p);
            prop_assert!(d.reconstruction_error(&rho) < 1e-8);
            let total: f64 = d.components().iter().map(|c| c.weight).sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
        }

        #[test]
        fn sandwich_holds_for_every_decomposition(seed in any::<u64>(), dim in 2usize..5) {
            let mut rng = seeded_rng(seed);
            let rho = random_density_matrix(&RandomStateConfig::full_rank(dim, seed)).unwrap();
            let b = crate::quantum::random_hermitian(dim, &mut rng);
            let p = purify(&rho, dim + 1).unwrap().with_unitary(linalg::haar_unitary(dim + 1, &mut rng)).unwrap();
            let d = extract_decomposition(&p);
            let avg = d.average(|c| c.variance(&b).unwrap());
            let f = crate::metrology::qfi(&rho, &b).unwrap();
            prop_assert!(f / 4.0 - 1e-9 <= avg);
            prop_assert!(avg <= rho.variance(&b).unwrap() + 1e-9);
        }

        #[test]
        fn appendix_product_inequality(seed in any::<u64>(), dim in 2usize..5, which in 0usize..5) {
            // (Σp a)(Σp b) ≥ (Σp c)² with a = Var(A), b = Var(B), c = L/2 per component.
            let mut rng = seeded_rng(seed);
            let rho = random_density_matrix(&RandomStateConfig::full_rank(dim, seed)).unwrap();
            let a = crate::quantum::random_hermitian(dim, &mut rng);
            let b = crate::quantum::random_hermitian(dim, &mut rng);
            let parts = super::super::default_partitions(dim);
            let p = purify(&rho, dim).unwrap()
                .with_unitary(linalg::haar_unitary(dim, &mut rng)).unwrap()
                .with_partition(parts[which % parts.len()].clone()).unwrap();
            let d = extract_decomposition(&p);
            let sa = d.average(|c| c.variance(&a).unwrap());
            let sb = d.average(|c| c.variance(&b).unwrap());
            let sc = d.average(|c| c.pair_moments(&a, &b).unwrap().rs_bound() / 2.0);
            prop_assert!(sa * sb >= sc * sc - 1e-9);
            prop_assert!((rho.variance(&a).unwrap() * rho.variance(&b).unwrap()) >= sc * sc - 1e-9);
        }
    }
}
