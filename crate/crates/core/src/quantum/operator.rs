use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Maximum absolute entry deviation from Hermiticity accepted by [`HermitianOperator::new`].
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Anything that acts linearly on state vectors of a fixed dimension.
///
/// All moments, variances and Fisher informations in this crate only need the action
/// `v -> O v`, which lets structured operators such as [`LocalSum`] avoid a dense
/// representation on large product spaces.
pub trait Observable: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, v: &CVector) -> CVector;
}

/// Dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity within [`HERMITICITY_TOL`] and stores the exact Hermitian part.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self {
            matrix: linalg::hermitian_part(&matrix),
        })
    }

    /// Hermitian part of an arbitrary square matrix; used where Hermiticity holds by
    /// construction and only round-off needs removing.
    pub(crate) fn from_hermitian_part(matrix: &CMatrix) -> Self {
        Self {
            matrix: linalg::hermitian_part(matrix),
        }
    }

    pub fn from_real_rows(dim: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: rows.len(),
            });
        }
        let data: Vec<Complex64> = rows.iter().map(|&x| linalg::r(x)).collect();
        Self::new(CMatrix::from_row_slice(dim, dim, &data))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = CVector::from_iterator(values.len(), values.iter().map(|&x| linalg::r(x)));
        Self {
            matrix: CMatrix::from_diagonal(&d),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_y() -> Self {
        let i = linalg::I;
        Self {
            matrix: CMatrix::from_row_slice(2, 2, &[linalg::r(0.0), -i, i, linalg::r(0.0)]),
        }
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0])
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `C = i[A, B]`, Hermitian whenever A and B are.
    pub fn commutator_c(&self, other: &Self) -> Self {
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Self::from_hermitian_part(&((ab - ba) * linalg::I))
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Self::from_hermitian_part(&(ab + ba))
    }

    pub fn square(&self) -> Self {
        Self::from_hermitian_part(&(&self.matrix * &self.matrix))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * linalg::r(factor),
        }
    }

    /// `U A U†` for a unitary `U`.
    pub fn conjugated(&self, unitary: &CMatrix) -> Self {
        Self::from_hermitian_part(&(unitary * &self.matrix * unitary.adjoint()))
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigh(&self.matrix).0
    }
}

impl Observable for HermitianOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;

    /// Panics on dimension mismatch, like the underlying matrix addition.
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;

    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;

    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scaled(rhs)
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;

    fn neg(self) -> HermitianOperator {
        self.scaled(-1.0)
    }
}

/// `L ⊗ 1 + 1 ⊗ R` on a bipartite space, applied without forming the Kronecker products.
///
/// Vectors use the composite index `i * dim(R) + j` (system 1 major).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSum {
    left: HermitianOperator,
    right: HermitianOperator,
}

impl LocalSum {
    pub fn new(left: HermitianOperator, right: HermitianOperator) -> Self {
        Self { left, right }
    }

    pub fn left(&self) -> &HermitianOperator {
        &self.left
    }

    pub fn right(&self) -> &HermitianOperator {
        &self.right
    }

    pub fn to_dense(&self) -> HermitianOperator {
        let id_l = CMatrix::identity(self.left.dim(), self.left.dim());
        let id_r = CMatrix::identity(self.right.dim(), self.right.dim());
        let m = linalg::kron(self.left.matrix(), &id_r) + linalg::kron(&id_l, self.right.matrix());
        HermitianOperator::from_hermitian_part(&m)
    }
}

impl Observable for LocalSum {
    fn dim(&self) -> usize {
        self.left.dim() * self.right.dim()
    }

    fn apply(&self, v: &CVector) -> CVector {
        let (d1, d2) = (self.left.dim(), self.right.dim());
        let m = CMatrix::from_row_slice(d1, d2, v.as_slice());
        let out = self.left.matrix() * &m + &m * self.right.matrix().transpose();
        CVector::from_iterator(d1 * d2, out.transpose().iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian(_))));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianOperator::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn pauli_commutator() {
        // i[σx, σy] = i·2iσz = -2σz
        let cxy = HermitianOperator::pauli_x().commutator_c(&HermitianOperator::pauli_y());
        let expect = HermitianOperator::pauli_z().scaled(-2.0);
        assert!(linalg::max_abs_entry(&(cxy.matrix() - expect.matrix())) < 1e-15);
    }

    #[test]
    fn local_sum_matches_dense() {
        let l = HermitianOperator::pauli_x();
        let rr = HermitianOperator::diagonal(&[1.0, 2.0, -0.5]);
        let op = LocalSum::new(l, rr);
        let dense = op.to_dense();
        let v = CVector::from_iterator(6, (0..6).map(|k| c(k as f64, 1.0 - k as f64)));
        let diff = op.apply(&v) - dense.apply(&v);
        assert!(diff.norm() < 1e-13);
    }
}
