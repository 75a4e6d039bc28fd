use std::sync::OnceLock;

use num_complex::Complex64;

use super::operator::{HermitianOperator, Observable};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Accepted deviation of a pure-state norm from one.
pub const NORM_TOL: f64 = 1e-12;
/// Accepted deviation of a density-matrix trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted for a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as exactly zero.
pub const EIGEN_ZERO: f64 = 1e-12;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm; fails on the zero vector.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes / linalg::r(norm),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = linalg::r(1.0);
        Self { amplitudes: v }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `U |ψ⟩` for a unitary `U`.
    pub fn evolved(&self, unitary: &CMatrix) -> Result<Self> {
        ensure_dim(self.dim(), unitary.ncols())?;
        Self::normalized(unitary * &self.amplitudes)
    }
}

/// Spectral decomposition of a density matrix.
///
/// `values` are descending; `vectors` holds one orthonormal column per value. A thin
/// system (fewer columns than the dimension) omits kernel vectors only.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenSystem {
    fn from_dense(matrix: &CMatrix) -> (Self, f64) {
        let (mut values, vectors) = linalg::eigh(matrix);
        let min = values.first().copied().unwrap_or(0.0);
        values.reverse();
        let n = values.len();
        let mut rev = CMatrix::zeros(n, n);
        for k in 0..n {
            rev.set_column(k, &vectors.column(n - 1 - k));
        }
        for v in values.iter_mut() {
            if v.abs() < EIGEN_ZERO || *v < 0.0 {
                *v = 0.0;
            }
        }
        (Self { values, vectors: rev }, min)
    }

    /// Number of eigenvalues treated as nonzero.
    pub fn rank(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    pub fn is_complete(&self) -> bool {
        self.vectors.ncols() == self.vectors.nrows()
    }
}

/// Unit-trace positive-semidefinite Hermitian matrix with a memoized eigensystem.
///
/// Either the dense matrix or the eigensystem is known at construction; the other is
/// derived on first use. States built from a few pure components on large spaces never
/// need the dense matrix for moments or Fisher information.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    matrix: OnceLock<CMatrix>,
    eigen: OnceLock<EigenSystem>,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let op = HermitianOperator::new(matrix)?;
        let tr = op.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let matrix = op.into_matrix();
        let (eigen, min) = EigenSystem::from_dense(&matrix);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self::from_parts(matrix.nrows(), Some(matrix), Some(eigen)))
    }

    /// Normalizes a positive-semidefinite matrix by its trace.
    pub fn from_unnormalized(matrix: CMatrix) -> Result<Self> {
        let tr = linalg::trace(&matrix).re;
        if !(tr > 0.0) {
            return Err(Error::InvalidTrace(tr));
        }
        Self::new(matrix / linalg::r(tr))
    }

    fn from_parts(dim: usize, matrix: Option<CMatrix>, eigen: Option<EigenSystem>) -> Self {
        let out = Self {
            dim,
            matrix: OnceLock::new(),
            eigen: OnceLock::new(),
        };
        if let Some(m) = matrix {
            let _ = out.matrix.set(m);
        }
        if let Some(e) = eigen {
            let _ = out.eigen.set(e);
        }
        out
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = state.amplitudes().clone();
        let dim = v.len();
        let eigen = EigenSystem {
            values: vec![1.0],
            vectors: CMatrix::from_column_slice(dim, 1, v.as_slice()),
        };
        Self::from_parts(dim, None, Some(eigen))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let eigen = EigenSystem {
            values: vec![1.0 / dim as f64; dim],
            vectors: CMatrix::identity(dim, dim),
        };
        Self::from_parts(dim, None, Some(eigen))
    }

    /// `Σ_k p_k |ψ_k⟩⟨ψ_k|`; the weights must be nonnegative and sum to one within 1e-10.
    ///
    /// The eigensystem is obtained from the Gram matrix of the weighted components, so the
    /// cost scales with the number of components rather than the dimension.
    pub fn from_ensemble(components: &[(f64, &PureState)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
        let dim = first.1.dim();
        let mut total = 0.0;
        for (p, psi) in components {
            ensure_dim(dim, psi.dim())?;
            if !(*p >= 0.0) {
                return Err(Error::InvalidArgument(format!("negative weight {p}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidTrace(total));
        }
        let rank = components.len();
        let mut w = CMatrix::zeros(dim, rank);
        for (k, (p, psi)) in components.iter().enumerate() {
            w.set_column(k, &(psi.amplitudes() * linalg::r(p.sqrt())));
        }
        Ok(Self::from_factor(&w))
    }

    /// `ρ = W W†` for a factor with unit Frobenius norm (already normalized).
    pub(crate) fn from_factor(w: &CMatrix) -> Self {
        let dim = w.nrows();
        let gram = w.adjoint() * w;
        let (vals, vecs) = linalg::eigh(&gram);
        let mut values = Vec::new();
        let mut columns = Vec::new();
        for k in (0..vals.len()).rev() {
            if vals[k] > EIGEN_ZERO {
                let u = (w * vecs.column(k)) / linalg::r(vals[k].sqrt());
                values.push(vals[k]);
                columns.push(u);
            }
        }
        let mut vectors = CMatrix::zeros(dim, columns.len());
        for (k, col) in columns.iter().enumerate() {
            vectors.set_column(k, col);
        }
        Self::from_parts(dim, None, Some(EigenSystem { values, vectors }))
    }

    /// Convex combination of density matrices of equal dimension.
    pub fn mixture(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (p, rho) in components {
            ensure_dim(dim, rho.dim())?;
            m += rho.matrix() * linalg::r(*p);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        self.matrix.get_or_init(|| {
            let e = self.eigen.get().expect("density matrix without representation");
            let mut scaled = e.vectors.clone();
            for (k, &lambda) in e.values.iter().enumerate() {
                for row in 0..self.dim {
                    scaled[(row, k)] *= lambda;
                }
            }
            linalg::hermitian_part(&(scaled * e.vectors.adjoint()))
        })
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        self.eigen.get_or_init(|| {
            let m = self.matrix.get().expect("density matrix without representation");
            EigenSystem::from_dense(m).0
        })
    }

    /// Eigensystem including kernel vectors, recomputed densely when the cached one is thin.
    pub fn complete_eigensystem(&self) -> EigenSystem {
        let e = self.eigensystem();
        if e.is_complete() {
            e.clone()
        } else {
            EigenSystem::from_dense(self.matrix()).0
        }
    }

    pub fn rank(&self) -> usize {
        self.eigensystem().rank()
    }

    pub fn purity(&self) -> f64 {
        self.eigensystem().values.iter().map(|v| v * v).sum()
    }

    pub fn is_pure(&self) -> bool {
        self.rank() == 1
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigensystem().values.first().copied().unwrap_or(0.0)
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, unitary: &CMatrix) -> Result<Self> {
        ensure_dim(self.dim, unitary.ncols())?;
        Self::new(unitary * self.matrix() * unitary.adjoint())
    }

    /// Largest absolute entry deviation from `other`.
    pub fn distance_max(&self, other: &Self) -> f64 {
        linalg::max_abs_entry(&(self.matrix() - other.matrix()))
    }
}

/// Common view of pure and mixed states as weighted orthonormal components.
///
/// Every moment in this crate is computed from [`QuantumState::support`], which is the
/// spectral decomposition restricted to nonzero eigenvalues.
pub trait QuantumState {
    fn dim(&self) -> usize;

    /// Eigenvalues (descending, strictly positive) and matching eigenvectors.
    fn support(&self) -> Vec<(f64, CVector)>;

    fn expectation<O: Observable + ?Sized>(&self, op: &O) -> Result<f64> {
        ensure_dim(self.dim(), op.dim())?;
        Ok(self
            .support()
            .iter()
            .map(|(w, v)| w * v.dotc(&op.apply(v)).re)
            .sum())
    }

    /// `⟨A²⟩ - ⟨A⟩²`, clamped at zero when round-off makes it slightly negative.
    fn variance<O: Observable + ?Sized>(&self, op: &O) -> Result<f64> {
        ensure_dim(self.dim(), op.dim())?;
        let mut mean = 0.0;
        let mut second = 0.0;
        for (w, v) in self.support() {
            let av = op.apply(&v);
            mean += w * v.dotc(&av).re;
            second += w * av.norm_squared();
        }
        Ok(clamp_variance(second - mean * mean))
    }

    /// First and second moments of a pair of observables.
    fn pair_moments<A: Observable + ?Sized, B: Observable + ?Sized>(
        &self,
        a: &A,
        b: &B,
    ) -> Result<PairMoments> {
        ensure_dim(self.dim(), a.dim())?;
        ensure_dim(self.dim(), b.dim())?;
        let mut m = PairMoments::default();
        for (w, v) in self.support() {
            let av = a.apply(&v);
            let bv = b.apply(&v);
            let cross = av.dotc(&bv); // ⟨v|AB|v⟩
            m.mean_a += w * v.dotc(&av).re;
            m.mean_b += w * v.dotc(&bv).re;
            m.second_a += w * av.norm_squared();
            m.second_b += w * bv.norm_squared();
            m.anticommutator += w * 2.0 * cross.re;
            m.commutator_c += w * -2.0 * cross.im;
        }
        Ok(m)
    }
}

pub(crate) fn clamp_variance(v: f64) -> f64 {
    if v < 0.0 {
        if v < -1e-12 {
            log::debug!("clamping negative variance {v:e} to zero");
        }
        0.0
    } else {
        v
    }
}

/// Moments of two observables A and B in one state.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairMoments {
    pub mean_a: f64,
    pub mean_b: f64,
    pub second_a: f64,
    pub second_b: f64,
    /// `⟨{A, B}⟩`
    pub anticommutator: f64,
    /// `⟨i[A, B]⟩`
    pub commutator_c: f64,
}

impl PairMoments {
    pub fn var_a(&self) -> f64 {
        clamp_variance(self.second_a - self.mean_a * self.mean_a)
    }

    pub fn var_b(&self) -> f64 {
        clamp_variance(self.second_b - self.mean_b * self.mean_b)
    }

    /// `⟨{A,B}⟩/2 - ⟨A⟩⟨B⟩`
    pub fn covariance(&self) -> f64 {
        0.5 * self.anticommutator - self.mean_a * self.mean_b
    }

    /// Robertson–Schrödinger bound `√(|⟨{A,B}⟩ - 2⟨A⟩⟨B⟩|² + |⟨C⟩|²)`.
    pub fn rs_bound(&self) -> f64 {
        let cov2 = self.anticommutator - 2.0 * self.mean_a * self.mean_b;
        cov2.hypot(self.commutator_c)
    }
}

impl QuantumState for PureState {
    fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn support(&self) -> Vec<(f64, CVector)> {
        vec![(1.0, self.amplitudes.clone())]
    }
}

impl QuantumState for DensityMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self) -> Vec<(f64, CVector)> {
        let e = self.eigensystem();
        e.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(k, &v)| (v, e.vector(k)))
            .collect()
    }
}

/// Kronecker composition with index order (system 1, system 2).
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for HermitianOperator {
    fn tensor(&self, other: &Self) -> Self {
        HermitianOperator::from_hermitian_part(&linalg::kron(self.matrix(), other.matrix()))
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Self {
        PureState {
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }
}

impl Tensor for DensityMatrix {
    /// Products of the factors' eigenpairs form the eigensystem of the composite.
    fn tensor(&self, other: &Self) -> Self {
        let (ea, eb) = (self.eigensystem(), other.eigensystem());
        let mut pairs = Vec::new();
        for (i, &la) in ea.values.iter().enumerate() {
            for (j, &lb) in eb.values.iter().enumerate() {
                if la > 0.0 && lb > 0.0 {
                    pairs.push((la * lb, linalg::kron_vec(&ea.vector(i), &eb.vector(j))));
                }
            }
        }
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let dim = self.dim * other.dim;
        let mut vectors = CMatrix::zeros(dim, pairs.len());
        for (k, (_, v)) in pairs.iter().enumerate() {
            vectors.set_column(k, v);
        }
        let values = pairs.iter().map(|p| p.0).collect();
        DensityMatrix::from_parts(dim, None, Some(EigenSystem { values, vectors }))
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Lowest eigenpair of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: PureState,
    /// Set when the gap to the next level is below 1e-9 times the spectral range.
    pub degenerate: bool,
    pub gap: f64,
}

pub fn ground_state(h: &HermitianOperator) -> GroundState {
    let (values, vectors) = linalg::eigh(h.matrix());
    let energy = values[0];
    let range = values[values.len() - 1] - values[0];
    let gap = if values.len() > 1 { values[1] - values[0] } else { f64::INFINITY };
    let degenerate = values.len() > 1 && gap <= 1e-9 * range.max(f64::MIN_POSITIVE);
    let state = PureState::normalized(vectors.column(0).into_owned())
        .expect("eigenvectors are normalized");
    GroundState {
        energy,
        state,
        degenerate,
        gap,
    }
}
