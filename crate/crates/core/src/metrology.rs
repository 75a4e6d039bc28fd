//! Quantum Fisher information, the symmetric logarithmic derivative, and the
//! estimation quantities built from them.
//!
//! Everything is evaluated on the support of the state: with `V` the matrix of
//! eigenvectors for nonzero eigenvalues, only `V` and `B V` are needed, so the
//! generator may be a structured [`Observable`] on a large space.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix, I};
use crate::quantum::{DensityMatrix, HermitianOperator, Observable, QuantumState};

/// Signal threshold below which `|⟨i[A,B]⟩|` is considered zero.
pub const SIGNAL_TOL: f64 = 1e-12;
/// QFI values at or below this are treated as an unestimable parameter.
pub const UNESTIMABLE_QFI: f64 = 1e-10;

/// Support of a state together with the generator applied to it.
struct Support {
    weights: Vec<f64>,
    vectors: CMatrix,
    applied: CMatrix,
}

impl Support {
    fn new<S, O>(state: &S, b: &O) -> Result<Self>
    where
        S: QuantumState + ?Sized,
        O: Observable + ?Sized,
    {
        ensure_dim(state.dim(), b.dim())?;
        let support = state.support();
        let n = state.dim();
        let mut vectors = CMatrix::zeros(n, support.len());
        let mut applied = CMatrix::zeros(n, support.len());
        let mut weights = Vec::with_capacity(support.len());
        for (k, (w, v)) in support.iter().enumerate() {
            applied.set_column(k, &b.apply(v));
            vectors.set_column(k, v);
            weights.push(*w);
        }
        Ok(Self { weights, vectors, applied })
    }

    /// `⟨k|B|l⟩` for `k, l` in the support.
    fn projected(&self) -> CMatrix {
        self.vectors.adjoint() * &self.applied
    }
}

/// `F_Q[ρ, B] = 2 Σ_{k,l} (λ_k-λ_l)²/(λ_k+λ_l) |⟨k|B|l⟩|²`.
///
/// Pairs with `λ_k + λ_l < 1e-12` contribute nothing; the terms coupling the support
/// to the kernel are summed in closed form as `4 Σ_k λ_k ‖Q B|k⟩‖²`, so kernel vectors
/// are never needed.
pub fn qfi<S, O>(state: &S, b: &O) -> Result<f64>
where
    S: QuantumState + ?Sized,
    O: Observable + ?Sized,
{
    let s = Support::new(state, b)?;
    let bkl = s.projected();
    let lam = &s.weights;
    let mut f = 0.0;
    for k in 0..lam.len() {
        let mut inside = 0.0;
        for l in 0..lam.len() {
            let m2 = bkl[(k, l)].norm_sqr();
            inside += m2;
            let sum = lam[k] + lam[l];
            if sum >= 1e-12 {
                f += 2.0 * (lam[k] - lam[l]).powi(2) / sum * m2;
            }
        }
        let outside = (s.applied.column(k).norm_squared() - inside).max(0.0);
        f += 4.0 * lam[k] * outside;
    }
    Ok(f)
}

/// Symmetric logarithmic derivative of `ρ_θ = e^{-iBθ} ρ e^{iBθ}` at `θ = 0`.
#[derive(Debug, Clone)]
pub struct SldResult {
    pub sld: HermitianOperator,
    /// `Tr(ρ ℒ²)`
    pub qfi: f64,
    /// `Tr(ρ ℒ)`, zero up to round-off.
    pub mean_sld: f64,
    /// Frobenius norm of `i[ρ,B] - ½{ρ,ℒ}`.
    pub residual: f64,
}

/// Builds `ℒ` on the support (`2i (λ_k-λ_l)/(λ_k+λ_l) ⟨k|B|l⟩`) plus the
/// support–kernel blocks `2i (P B Q - Q B P)`, which make `i[ρ,B] = ½{ρ,ℒ}` exact on
/// the whole space. The kernel–kernel block is zero.
pub fn sld(rho: &DensityMatrix, b: &HermitianOperator) -> Result<SldResult> {
    let s = Support::new(rho, b)?;
    let bkl = s.projected();
    let lam = &s.weights;
    let r = lam.len();
    let mut inner = CMatrix::zeros(r, r);
    for k in 0..r {
        for l in 0..r {
            let sum = lam[k] + lam[l];
            if sum >= 1e-12 {
                inner[(k, l)] = I * linalg::r(2.0 * (lam[k] - lam[l]) / sum) * bkl[(k, l)];
            }
        }
    }
    let v = &s.vectors;
    let bv = &s.applied;
    let cross = v * bv.adjoint() - bv * v.adjoint();
    let l = v * inner * v.adjoint() + cross * (I * linalg::r(2.0));
    let sld = HermitianOperator::from_hermitian_part(&l);

    let lv = sld.matrix() * v;
    let mut qfi = 0.0;
    let mut mean_sld = 0.0;
    for k in 0..r {
        let col = lv.column(k);
        qfi += lam[k] * col.norm_squared();
        mean_sld += lam[k] * v.column(k).dotc(&col).re;
    }

    let rm = rho.matrix();
    let target = (rm * b.matrix() - b.matrix() * rm) * I;
    let anti = (rm * sld.matrix() + sld.matrix() * rm) * linalg::r(0.5);
    let residual = (target - anti).norm();
    Ok(SldResult { sld, qfi, mean_sld, residual })
}

/// `⟨i[A,B]⟩`, the signal of the error-propagation formula.
pub fn commutator_signal<S>(state: &S, a: &HermitianOperator, b: &HermitianOperator) -> Result<f64>
where
    S: QuantumState + ?Sized,
{
    Ok(state.pair_moments(a, b)?.commutator_c)
}

/// Single-shot error-propagation precision `(Δθ)²_A = Var(A) / |⟨i[A,B]⟩|²`.
pub fn error_propagation<S>(state: &S, a: &HermitianOperator, b: &HermitianOperator) -> Result<f64>
where
    S: QuantumState + ?Sized,
{
    let m = state.pair_moments(a, b)?;
    let signal = m.commutator_c.abs();
    if signal <= SIGNAL_TOL {
        return Err(Error::VanishingSignal(signal));
    }
    Ok(m.var_a() / (signal * signal))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub qfi: f64,
    pub repetitions: usize,
    /// `1 / (m F_Q)`
    pub cramer_rao: f64,
    /// Single-shot `(Δθ)²_A` when a measured observable was supplied; the `m`-shot value
    /// is this divided by `m` and never falls below `cramer_rao`.
    pub error_propagation: Option<f64>,
}

/// Quantum Cramér–Rao bound for `m` repetitions, optionally alongside the error
/// propagation of a measured observable `A`.
pub fn cramer_rao<S>(
    state: &S,
    b: &HermitianOperator,
    repetitions: usize,
    measured: Option<&HermitianOperator>,
) -> Result<EstimationReport>
where
    S: QuantumState + ?Sized,
{
    if repetitions == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
    }
    let f = qfi(state, b)?;
    if f <= UNESTIMABLE_QFI {
        return Err(Error::Unestimable(f));
    }
    let error_propagation = measured.map(|a| error_propagation(state, a, b)).transpose()?;
    Ok(EstimationReport {
        qfi: f,
        repetitions,
        cramer_rao: 1.0 / (repetitions as f64 * f),
        error_propagation,
    })
}

/// `Var(A) - F_Q[ρ,A]/4`, zero for pure states and nonnegative in general.
pub fn variance_qfi_gap<S, O>(state: &S, a: &O) -> Result<f64>
where
    S: QuantumState + ?Sized,
    O: Observable + ?Sized,
{
    let gap = state.variance(a)? - qfi(state, a)? / 4.0;
    if gap < -1e-10 {
        log::warn!("variance below F_Q/4 by {:e}", -gap);
        return Ok(gap);
    }
    Ok(gap.max(0.0))
}

/// Outcome of testing whether `Var(A) F_Q[ρ,B] ≥ |⟨i[A,B]⟩|²` is saturated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationCheck {
    pub saturated: bool,
    /// Least-squares coefficient in `i[ρ,B] ≈ ½{ρ, cA}`.
    pub c: f64,
    /// `‖i[ρ,B] - ½{ρ,cA}‖ / ‖i[ρ,B]‖` (Frobenius).
    pub relative_residual: f64,
    pub product: f64,
    pub signal_squared: f64,
}

/// Saturation holds when `i[ρ,B] = ½{ρ, cA}` for some real `c`; the coefficient is
/// fitted in the Hilbert–Schmidt inner product and the product relation is then
/// confirmed to 1e-8 relative accuracy.
pub fn check_sld_saturation(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<SaturationCheck> {
    ensure_dim(rho.dim(), a.dim())?;
    ensure_dim(rho.dim(), b.dim())?;
    let moments = rho.pair_moments(a, b)?;
    let var_a = moments.var_a();
    if var_a <= 0.0 {
        return Err(Error::InvalidArgument("Var(A) must be positive".into()));
    }
    let rm = rho.matrix();
    let x = (rm * b.matrix() - b.matrix() * rm) * I;
    let y = (rm * a.matrix() + a.matrix() * rm) * linalg::r(0.5);
    let yy = y.norm_squared();
    let c = if yy > 0.0 { linalg::trace_product(&y, &x).re / yy } else { 0.0 };
    let xn = x.norm();
    let residual = (&x - &y * linalg::r(c)).norm();
    let relative_residual = if xn > 0.0 { residual / xn } else { f64::INFINITY };
    let product = var_a * qfi(rho, b)?;
    let signal_squared = moments.commutator_c.powi(2);
    let scale = product.abs().max(signal_squared.abs()).max(f64::MIN_POSITIVE);
    let saturated = xn > 0.0 && residual < 1e-8 * xn && (product - signal_squared).abs() <= 1e-8 * scale;
    Ok(SaturationCheck {
        saturated,
        c,
        relative_residual,
        product,
        signal_squared,
    })
}
