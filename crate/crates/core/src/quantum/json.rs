//! Matrix exchange format: `{dim, re, im}` with row-major arrays; states add
//! `kind: "pure" | "mixed"` (pure states carry `dim` amplitudes, mixed states `dim²`
//! matrix entries).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::HermitianOperator;
use super::state::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub kind: StateKind,
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { dim: n, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        if self.re.len() != n * n || self.im.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: self.re.len().min(self.im.len()),
            });
        }
        let data: Vec<Complex64> = self.re.iter().zip(&self.im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        Ok(CMatrix::from_row_slice(n, n, &data))
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?)
    }
}

impl From<&HermitianOperator> for MatrixJson {
    fn from(op: &HermitianOperator) -> Self {
        Self::from_matrix(op.matrix())
    }
}

impl From<&PureState> for StateJson {
    fn from(s: &PureState) -> Self {
        Self {
            kind: StateKind::Pure,
            dim: s.dim(),
            re: s.amplitudes().iter().map(|z| z.re).collect(),
            im: s.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

impl From<&DensityMatrix> for StateJson {
    fn from(rho: &DensityMatrix) -> Self {
        let m = MatrixJson::from_matrix(rho.matrix());
        Self {
            kind: StateKind::Mixed,
            dim: m.dim,
            re: m.re,
            im: m.im,
        }
    }
}

impl StateJson {
    /// The encoded state as a density matrix (pure states are converted).
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        match self.kind {
            StateKind::Pure => Ok(self.to_pure()?.to_density_matrix()),
            StateKind::Mixed => DensityMatrix::new(
                MatrixJson {
                    dim: self.dim,
                    re: self.re.clone(),
                    im: self.im.clone(),
                }
                .to_matrix()?,
            ),
        }
    }

    pub fn to_pure(&self) -> Result<PureState> {
        if self.kind != StateKind::Pure {
            return Err(Error::InvalidArgument("expected a pure state".into()));
        }
        if self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.re.len().min(self.im.len()),
            });
        }
        PureState::new(CVector::from_iterator(
            self.dim,
            self.re.iter().zip(&self.im).map(|(&a, &b)| Complex64::new(a, b)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::sampling::{random_density_matrix, RandomStateConfig};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn density_matrix_json_round_trip(seed in any::<u64>(), dim in 1usize..5) {
            let rho = random_density_matrix(&RandomStateConfig::full_rank(dim, seed)).unwrap();
            let text = serde_json::to_string(&StateJson::from(&rho)).unwrap();
            let back: StateJson = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.kind, StateKind::Mixed);
            let rho2 = back.to_density_matrix().unwrap();
            prop_assert!(rho.distance_max(&rho2) < 1e-15);
        }
    }

    #[test]
    fn pure_state_layout() {
        let s = PureState::basis(3, 1);
        let j = serde_json::to_value(StateJson::from(&s)).unwrap();
        assert_eq!(j["kind"], "pure");
        assert_eq!(j["re"], serde_json::json!([0.0, 1.0, 0.0]));
    }

    #[test]
    fn malformed_matrix_is_rejected() {
        let m = MatrixJson { dim: 2, re: vec![1.0], im: vec![0.0] };
        assert!(m.to_matrix().is_err());
    }
}
