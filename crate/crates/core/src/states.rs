//! Benchmark state families: spin-squeezed and planar-squeezed spin states, two-mode
//! squeezed vacuum, singlets and mixtures of (spin-)coherent products.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CVector};
use crate::quantum::{
    coherent_state, ground_state, spin_coherent_state, DensityMatrix, PureState, QuantumState, SpinAlgebra, Tensor,
};

/// Ground state of `J_y² - λ J_x`, spin squeezed along `y` for finite `λ > 0`.
pub fn spin_squeezed_state(spin: &SpinAlgebra, lambda: f64) -> Result<PureState> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be positive and finite, got {lambda}")));
    }
    let h = &spin.jy.square() - &spin.jx.scaled(lambda);
    let g = ground_state(&h);
    if g.degenerate {
        return Err(Error::DegenerateGroundState { gap: g.gap });
    }
    Ok(g.state)
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanarSqueezedResult {
    pub j: f64,
    #[serde(skip)]
    pub state: PureState,
    /// `Var(J_x) + Var(J_y)` of the final state.
    pub var_sum: f64,
    pub c_j: f64,
    pub mean_spin: [f64; 3],
    /// `var_sum` after every iteration, starting with the seed.
    pub history: Vec<f64>,
}

const PLANAR_MAX_ITER: usize = 100_000;

fn planar_moments(spin: &SpinAlgebra, psi: &PureState) -> Result<([f64; 3], f64)> {
    let mean = [
        psi.expectation(&spin.jx)?,
        psi.expectation(&spin.jy)?,
        psi.expectation(&spin.jz)?,
    ];
    Ok((mean, psi.variance(&spin.jx)? + psi.variance(&spin.jy)?))
}

/// Minimizes `Var(J_x) + Var(J_y)` over pure states by the self-consistent iteration
/// `ψ ← ground state of J_x² + J_y² - 2⟨J_x⟩J_x - 2⟨J_y⟩J_y`, seeded by `|j⟩_x`.
///
/// Each step minimizes a majorant of the variance sum that touches it at the previous
/// iterate, so the sum never increases; this is asserted along the way. Iteration stops
/// once the decrease drops below `tol`.
pub fn planar_squeezed_state(spin: &SpinAlgebra, tol: f64) -> Result<PlanarSqueezedResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut psi = spin_coherent_state(spin, [0.0, std::f64::consts::FRAC_PI_2, 0.0]);
    let (mut mean, mut var_sum) = planar_moments(spin, &psi)?;
    let q = &spin.jx.square() + &spin.jy.square();
    let mut history = vec![var_sum];
    for _ in 0..PLANAR_MAX_ITER {
        let h = &(&q - &spin.jx.scaled(2.0 * mean[0])) - &spin.jy.scaled(2.0 * mean[1]);
        let next = ground_state(&h).state;
        let (next_mean, next_sum) = planar_moments(spin, &next)?;
        assert!(
            next_sum <= var_sum + 1e-12,
            "planar iteration increased the variance sum: {var_sum} -> {next_sum}"
        );
        let change = var_sum - next_sum;
        psi = next;
        mean = next_mean;
        var_sum = next_sum;
        history.push(var_sum);
        if change < tol {
            if mean[0].hypot(mean[1]) < 1e-9 {
                return Err(Error::InvalidArgument("planar iteration lost its mean spin".into()));
            }
            return Ok(PlanarSqueezedResult {
                j: spin.j(),
                state: psi,
                var_sum,
                c_j: var_sum,
                mean_spin: mean,
                history,
            });
        }
    }
    Err(Error::NotConverged(PLANAR_MAX_ITER))
}

/// `√(1 - t²) Σ_n (-t)ⁿ |n, n⟩` with `t = tanh r`, truncated to `cutoff` levels per mode.
///
/// The sign makes `x₁ + x₂` and `p₁ - p₂` the squeezed pair:
/// `Var(x₁ + x₂) = Var(p₁ - p₂) = e^{-2r}`.
pub fn two_mode_squeezed_vacuum(r: f64, cutoff: usize) -> Result<PureState> {
    if !r.is_finite() || cutoff == 0 {
        return Err(Error::InvalidArgument(format!("invalid squeezing r = {r} or cutoff {cutoff}")));
    }
    let t = r.tanh();
    let tail = t.abs().powi(2 * cutoff as i32);
    if tail >= 1e-12 {
        return Err(Error::CutoffTooSmall { cutoff, tail });
    }
    let norm = (1.0 - t * t).sqrt();
    let mut amps = CVector::zeros(cutoff * cutoff);
    let mut term = norm;
    for n in 0..cutoff {
        amps[n * cutoff + n] = linalg::r(term);
        term *= -t;
    }
    PureState::normalized(amps)
}

/// Total-spin-zero state of two spin-`j` particles, `Σ_m (-1)^{j-m} |m⟩|-m⟩ / √(2j+1)`.
pub fn singlet_state(spin: &SpinAlgebra) -> PureState {
    let d = spin.dim();
    let mut amps = CVector::zeros(d * d);
    let norm = 1.0 / (d as f64).sqrt();
    // Basis index k carries m = j - k, and -m sits at index d - 1 - k.
    for k in 0..d {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        amps[k * d + (d - 1 - k)] = linalg::r(sign * norm);
    }
    PureState::new(amps).expect("normalized by construction")
}

/// `Σ_k p_k |α_k⟩⟨α_k| ⊗ |β_k⟩⟨β_k|` on two truncated modes.
pub fn coherent_mixture(terms: &[(f64, Complex64, Complex64)], cutoff: usize) -> Result<DensityMatrix> {
    let products = terms
        .iter()
        .map(|&(p, a, b)| Ok((p, coherent_state(a, cutoff)?.tensor(&coherent_state(b, cutoff)?))))
        .collect::<Result<Vec<_>>>()?;
    ensemble(&products)
}

/// `Σ_k p_k |s_k⟩⟨s_k|` with `|s_k⟩ = exp(-i c_k·J)|+j⟩_z`.
pub fn spin_coherent_mixture(spin: &SpinAlgebra, terms: &[(f64, [f64; 3])]) -> Result<DensityMatrix> {
    let states: Vec<_> = terms.iter().map(|&(p, c)| (p, spin_coherent_state(spin, c))).collect();
    ensemble(&states)
}

/// `Σ_k p_k |s_k⁽¹⁾⟩⟨s_k⁽¹⁾| ⊗ |s_k⁽²⁾⟩⟨s_k⁽²⁾|` for two spins.
pub fn product_spin_coherent_mixture(
    first: &SpinAlgebra,
    second: &SpinAlgebra,
    terms: &[(f64, [f64; 3], [f64; 3])],
) -> Result<DensityMatrix> {
    let states: Vec<_> = terms
        .iter()
        .map(|&(p, c1, c2)| (p, spin_coherent_state(first, c1).tensor(&spin_coherent_state(second, c2))))
        .collect();
    ensemble(&states)
}

fn ensemble(states: &[(f64, PureState)]) -> Result<DensityMatrix> {
    let refs: Vec<(f64, &PureState)> = states.iter().map(|(p, s)| (*p, s)).collect();
    DensityMatrix::from_ensemble(&refs)
}
