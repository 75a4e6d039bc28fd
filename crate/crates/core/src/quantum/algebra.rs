//! Spin, SU(d) and truncated bosonic operator algebras.
//!
//! Conventions used everywhere in the crate: spin matrices are written in the `J_z`
//! eigenbasis with `m` descending from `+j` (index 0) to `-j`; Fock states are ordered by
//! ascending occupation number `n`.

use num_complex::Complex64;

use super::operator::HermitianOperator;
use super::state::{PureState, Tensor};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Spin-j angular momentum components.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinAlgebra {
    twice_j: usize,
    pub jx: HermitianOperator,
    pub jy: HermitianOperator,
    pub jz: HermitianOperator,
}

/// Parses a half-integer spin; `2j` must be a nonnegative integer within 1e-9.
pub fn twice_spin(j: f64) -> Result<usize> {
    let t = 2.0 * j;
    if !t.is_finite() || t < -1e-9 || (t - t.round()).abs() > 1e-9 {
        return Err(Error::InvalidSpin(j));
    }
    Ok(t.round() as usize)
}

pub fn make_spin_algebra(j: f64) -> Result<SpinAlgebra> {
    let twice_j = twice_spin(j)?;
    Ok(SpinAlgebra::from_twice_j(twice_j))
}

impl SpinAlgebra {
    pub fn from_twice_j(twice_j: usize) -> Self {
        let dim = twice_j + 1;
        let j = twice_j as f64 / 2.0;
        // J+ |m⟩ = √(j(j+1) - m(m+1)) |m+1⟩, and |m+1⟩ sits one index above |m⟩.
        let mut jplus = CMatrix::zeros(dim, dim);
        for col in 1..dim {
            let m = j - col as f64;
            jplus[(col - 1, col)] = linalg::r((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
        let jminus = jplus.adjoint();
        let jx = HermitianOperator::from_hermitian_part(&((&jplus + &jminus) * linalg::r(0.5)));
        let jy = HermitianOperator::from_hermitian_part(&((&jplus - &jminus) * Complex64::new(0.0, -0.5)));
        let jz = HermitianOperator::diagonal(&(0..dim).map(|k| j - k as f64).collect::<Vec<_>>());
        Self { twice_j, jx, jy, jz }
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn twice_j(&self) -> usize {
        self.twice_j
    }

    pub fn dim(&self) -> usize {
        self.twice_j + 1
    }

    pub fn components(&self) -> [&HermitianOperator; 3] {
        [&self.jx, &self.jy, &self.jz]
    }

    /// `J_z` eigenstate `|m⟩`.
    pub fn m_state(&self, m: f64) -> Result<PureState> {
        let idx = self.j() - m;
        if idx < -1e-9 || idx > self.twice_j as f64 + 1e-9 || (idx - idx.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("m = {m} is not a level of spin {}", self.j())));
        }
        Ok(PureState::basis(self.dim(), idx.round() as usize))
    }

    /// `c·J` for a real 3-vector.
    pub fn dot(&self, c: [f64; 3]) -> HermitianOperator {
        &(&self.jx.scaled(c[0]) + &self.jy.scaled(c[1])) + &self.jz.scaled(c[2])
    }

    /// Spin operators of `n` parties summed over parties, acting on the `n`-fold product space.
    pub fn collective(&self, parties: usize) -> [HermitianOperator; 3] {
        let embed = |op: &HermitianOperator| {
            let mut total = HermitianOperator::zeros(self.dim().pow(parties as u32));
            for site in 0..parties {
                let factor = |k: usize| {
                    if k == site {
                        op.clone()
                    } else {
                        HermitianOperator::identity(self.dim())
                    }
                };
                let term = (1..parties).fold(factor(0), |acc, k| acc.tensor(&factor(k)));
                total = &total + &term;
            }
            total
        };
        [embed(&self.jx), embed(&self.jy), embed(&self.jz)]
    }
}

/// `exp(-i c·J) |+j⟩_z`.
///
/// The rotation is applied literally; a vector `c = θ n` rotates the maximal-weight state
/// by angle `θ` about axis `n` (right-hand rule), without any further phase convention.
pub fn spin_coherent_state(spin: &SpinAlgebra, c: [f64; 3]) -> PureState {
    let top = PureState::basis(spin.dim(), 0);
    let u = linalg::expi_hermitian(spin.dot(c).matrix(), -1.0);
    PureState::normalized(u * top.amplitudes()).expect("unitary image of a unit vector")
}

/// Spin-coherent state with mean spin along the polar direction `(θ, φ)`.
pub fn spin_coherent_polar(spin: &SpinAlgebra, theta: f64, phi: f64) -> PureState {
    spin_coherent_state(spin, [-theta * phi.sin(), theta * phi.cos(), 0.0])
}

/// Generalized Gell-Mann matrices: `d² - 1` traceless Hermitian generators normalized to
/// `Tr(G_k G_l) = 2 δ_kl`. Ordered as symmetric, antisymmetric, then diagonal generators,
/// which for `d = 2` gives the Pauli matrices `σx, σy, σz`.
pub fn make_su_d_generators(d: usize) -> Result<Vec<HermitianOperator>> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("SU(d) generators need d >= 2, got {d}")));
    }
    let zero = CMatrix::zeros(d, d);
    let mut symmetric = Vec::new();
    let mut antisymmetric = Vec::new();
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = zero.clone();
            s[(j, k)] = linalg::r(1.0);
            s[(k, j)] = linalg::r(1.0);
            symmetric.push(HermitianOperator::from_hermitian_part(&s));
            let mut a = zero.clone();
            a[(j, k)] = Complex64::new(0.0, -1.0);
            a[(k, j)] = Complex64::new(0.0, 1.0);
            antisymmetric.push(HermitianOperator::from_hermitian_part(&a));
        }
    }
    let mut diagonal = Vec::new();
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for entry in diag.iter_mut().take(l) {
            *entry = norm;
        }
        diag[l] = -(l as f64) * norm;
        diagonal.push(HermitianOperator::diagonal(&diag));
    }
    symmetric.extend(antisymmetric);
    symmetric.extend(diagonal);
    Ok(symmetric)
}

/// Single bosonic mode truncated to Fock levels `0..cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockAlgebra {
    cutoff: usize,
    pub a: CMatrix,
    pub a_dag: CMatrix,
    /// `(a + a†)/√2`
    pub x: HermitianOperator,
    /// `(a - a†)/(i√2)`
    pub p: HermitianOperator,
}

pub const DEFAULT_FOCK_CUTOFF: usize = 40;
/// Largest Fock-space tail mass accepted when truncating a state.
pub const FOCK_TAIL_TOL: f64 = 1e-10;

pub fn make_fock_algebra(cutoff: usize) -> Result<FockAlgebra> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument(format!("Fock cutoff must be >= 2, got {cutoff}")));
    }
    let mut a = CMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = linalg::r((n as f64).sqrt());
    }
    let a_dag = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = HermitianOperator::from_hermitian_part(&((&a + &a_dag) * linalg::r(s)));
    let p = HermitianOperator::from_hermitian_part(&((&a - &a_dag) * Complex64::new(0.0, -s)));
    Ok(FockAlgebra { cutoff, a, a_dag, x, p })
}

impl FockAlgebra {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn vacuum(&self) -> PureState {
        PureState::basis(self.cutoff, 0)
    }
}

/// Truncated coherent state `e^{-|α|²/2} Σ αⁿ/√(n!) |n⟩`, renormalized after truncation.
pub fn coherent_state(alpha: Complex64, cutoff: usize) -> Result<PureState> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff must be positive".into()));
    }
    let mut amps = CVector::zeros(cutoff);
    let mut term = linalg::r((-0.5 * alpha.norm_sqr()).exp());
    let mut kept = 0.0;
    for n in 0..cutoff {
        amps[n] = term;
        kept += term.norm_sqr();
        term *= alpha / ((n + 1) as f64).sqrt();
    }
    let tail = (1.0 - kept).max(0.0);
    if tail > FOCK_TAIL_TOL {
        return Err(Error::CutoffTooSmall { cutoff, tail });
    }
    PureState::normalized(amps)
}
