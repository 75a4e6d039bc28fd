//! Two-point decompositions of a qubit along a chord of the Bloch ball.

use super::decomposition::{Component, Decomposition, WeightedComponent};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CVector};
use crate::quantum::{DensityMatrix, HermitianOperator, PureState, QuantumState};

/// `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)`.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    ensure_dim(2, rho.dim())?;
    Ok([
        rho.expectation(&HermitianOperator::pauli_x())?,
        rho.expectation(&HermitianOperator::pauli_y())?,
        rho.expectation(&HermitianOperator::pauli_z())?,
    ])
}

/// Pure qubit state with the direction of `b` as its Bloch vector.
pub fn pure_from_bloch(b: [f64; 3]) -> PureState {
    let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    let [x, y, z] = b.map(|v| v / norm);
    if 1.0 + z < 1e-12 {
        return PureState::basis(2, 1);
    }
    let v = CVector::from_vec(vec![linalg::r(1.0 + z), linalg::c(x, y)]);
    PureState::normalized(v).expect("nonzero vector")
}

/// Decomposes a qubit into the two pure states where the line through its Bloch
/// vector along `axis` meets the Bloch sphere. All points on the line share the
/// expectation values of Pauli operators orthogonal to `axis`.
///
/// A pure input yields the single-component decomposition.
pub fn qubit_line_decomposition(rho: &DensityMatrix, axis: [f64; 3]) -> Result<Decomposition> {
    let r = bloch_vector(rho)?;
    let an = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(an > 0.0) {
        return Err(Error::InvalidArgument("line direction must be nonzero".into()));
    }
    let n = axis.map(|v| v / an);
    let r2 = r.iter().map(|v| v * v).sum::<f64>();
    if rho.is_pure() || r2 >= 1.0 - 1e-12 {
        return Decomposition::new(vec![WeightedComponent {
            weight: 1.0,
            state: Component::Pure(pure_from_bloch(r)),
        }]);
    }
    let proj = r[0] * n[0] + r[1] * n[1] + r[2] * n[2];
    let disc = (proj * proj - r2 + 1.0).sqrt();
    let (tp, tm) = (-proj + disc, -proj - disc);
    let point = |t: f64| [r[0] + t * n[0], r[1] + t * n[1], r[2] + t * n[2]];
    let components = vec![
        WeightedComponent {
            weight: -tm / (tp - tm),
            state: Component::Pure(pure_from_bloch(point(tp))),
        },
        WeightedComponent {
            weight: tp / (tp - tm),
            state: Component::Pure(pure_from_bloch(point(tm))),
        },
    ];
    Decomposition::new(components)
}

/// Line parallel to the z axis.
pub fn qubit_z_line_decomposition(rho: &DensityMatrix) -> Result<Decomposition> {
    qubit_line_decomposition(rho, [0.0, 0.0, 1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random_density_matrix, RandomStateConfig};

    fn qubit(b: [f64; 3]) -> DensityMatrix {
        let m = (HermitianOperator::identity(2).matrix()
            + HermitianOperator::pauli_x().matrix() * linalg::r(b[0])
            + HermitianOperator::pauli_y().matrix() * linalg::r(b[1])
            + HermitianOperator::pauli_z().matrix() * linalg::r(b[2]))
            * linalg::r(0.5);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn worked_example() {
        let rho = qubit([0.3, 0.0, 0.2]);
        let d = qubit_z_line_decomposition(&rho).unwrap();
        let s = 0.91f64.sqrt();
        assert!((d.components()[0].weight - (1.0 + 0.2 / s) / 2.0).abs() < 1e-14);
        assert!((d.components()[1].weight - (1.0 - 0.2 / s) / 2.0).abs() < 1e-14);
        for op in [HermitianOperator::pauli_x(), HermitianOperator::pauli_y()] {
            let v = rho.variance(&op).unwrap();
            for c in d.components() {
                assert!((c.state.variance(&op).unwrap() - v).abs() < 1e-14);
            }
        }
        assert!(d.reconstruction_error(&rho) < 1e-14);
    }

    #[test]
    fn center_splits_into_poles() {
        let d = qubit_z_line_decomposition(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d.components()[0].weight - 0.5).abs() < 1e-15);
        let m = d.components()[0].state.density_matrix();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_and_boundary_inputs() {
        let d = qubit_z_line_decomposition(&pure_from_bloch([0.6, 0.0, 0.8]).to_density_matrix()).unwrap();
        assert_eq!(d.len(), 1);
        assert!(qubit_z_line_decomposition(&DensityMatrix::maximally_mixed(3)).is_err());
        let south = pure_from_bloch([0.0, 0.0, -1.0]);
        assert!((south.expectation(&HermitianOperator::pauli_z()).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn arbitrary_axes_reconstruct() {
        for seed in 0..20 {
            let rho = random_density_matrix(&RandomStateConfig::full_rank(2, seed)).unwrap();
            let axis = [seed as f64 - 3.0, 1.0, 0.5 * seed as f64];
            let d = qubit_line_decomposition(&rho, axis).unwrap();
            assert!(d.reconstruction_error(&rho) < 1e-12);
        }
    }
}
