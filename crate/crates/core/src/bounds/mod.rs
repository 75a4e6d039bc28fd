//! Catalog of uncertainty relations. Each check evaluates both sides of one
//! inequality and reports the slack.

mod fj;
mod hull;
mod minvar;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use fj::{fj_curve, spin_length_bound, FjCurve};
pub use minvar::{minvar_constrained, MinVarResult, MultiplierGrid};

use crate::error::{ensure_dim, Error, Result};
use crate::metrology::qfi;
use crate::quantum::{make_su_d_generators, DensityMatrix, HermitianOperator, Observable, QuantumState, SpinAlgebra};
use crate::roofs::{concave_roof_l, eigen_partition_terms, optimize_roof, qubit_line_decomposition, Component, Direction, OptimizerConfig, Partition};

/// A report is flagged as violated when `lhs - rhs` falls below `-VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub violated: bool,
    /// Intermediate quantities; only finite values are recorded.
    pub meta: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            violated: slack < -VIOLATION_TOL,
            meta: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        if value.is_finite() {
            self.meta.insert(key.to_string(), value);
        } else {
            log::debug!("dropping non-finite meta value {key} = {value}");
        }
        self
    }
}

/// `L = √(|⟨{A,B}⟩ - 2⟨A⟩⟨B⟩|² + |⟨i[A,B]⟩|²)`.
pub fn rs_lower_bound_l<S, A, B>(state: &S, a: &A, b: &B) -> Result<f64>
where
    S: QuantumState + ?Sized,
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    Ok(state.pair_moments(a, b)?.rs_bound())
}

/// `Var(A) Var(B) ≥ L²/4`.
pub fn check_robertson_schrodinger<S, A, B>(state: &S, a: &A, b: &B) -> Result<BoundReport>
where
    S: QuantumState + ?Sized,
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let m = state.pair_moments(a, b)?;
    let l = m.rs_bound();
    Ok(BoundReport::new("robertson_schrodinger", m.var_a() * m.var_b(), l * l / 4.0)
        .with("l_rho", l)
        .with("commutator_abs", m.commutator_c.abs()))
}

/// Traceless Bloch part `a_i = Tr(A σ_i)/2` of a qubit observable.
fn qubit_axis(op: &HermitianOperator) -> [f64; 3] {
    let m = op.matrix();
    [m[(0, 1)].re, -m[(0, 1)].im, (m[(0, 0)].re - m[(1, 1)].re) / 2.0]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Line direction orthogonal to the Bloch parts of both qubit observables; along it
/// both expectation values, and hence both variances, stay constant.
fn qubit_saturating_axis(a: &HermitianOperator, b: &HermitianOperator) -> [f64; 3] {
    let (va, vb) = (qubit_axis(a), qubit_axis(b));
    let n = cross(va, vb);
    if norm3(n) > 1e-12 * (norm3(va) * norm3(vb)).max(f64::MIN_POSITIVE) && norm3(n) > 0.0 {
        return n;
    }
    let base = if norm3(va) > 0.0 { va } else { vb };
    if norm3(base) == 0.0 {
        return [0.0, 0.0, 1.0];
    }
    let trial = if base[0].abs() < 0.9 * norm3(base) { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    cross(base, trial)
}

/// `Var(A) Var(B) ≥ ¼ (max Σ_k p_k L_{ρ_k})²` with the concave roof bounded from below
/// by the best decomposition found.
///
/// Candidates: the optimizer's result over ancilla unitaries and groupings, the
/// trivial decomposition, for qubits the chord decomposition that keeps `⟨A⟩` and `⟨B⟩`
/// fixed (which saturates the relation), and for qutrits the eigenvector groupings `K`.
pub fn check_improved_rs(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    cfg: &OptimizerConfig,
) -> Result<BoundReport> {
    ensure_dim(rho.dim(), a.dim())?;
    ensure_dim(rho.dim(), b.dim())?;
    let m = rho.pair_moments(a, b)?;
    let l_rho = m.rs_bound();
    let search = concave_roof_l(rho, a, b, cfg)?;
    let mut roof = search.value.max(l_rho);
    let mut report_meta = vec![("l_rho", l_rho), ("search", search.value)];
    if rho.dim() == 2 {
        let d = qubit_line_decomposition(rho, qubit_saturating_axis(a, b))?;
        let witness = d.average(|c| c.pair_moments(a, b).expect("dimensions checked").rs_bound());
        report_meta.push(("line_witness", witness));
        roof = roof.max(witness);
    }
    if rho.dim() == 3 {
        let k = eigen_partition_terms(rho, a, b)?.k();
        report_meta.push(("k", k));
        roof = roof.max(k);
    }
    let mut report = BoundReport::new("improved_rs", m.var_a() * m.var_b(), roof * roof / 4.0)
        .with("roof", roof)
        .with("rs_rhs", l_rho * l_rho / 4.0)
        .with("converged", if search.converged { 1.0 } else { 0.0 });
    for (k, v) in report_meta {
        report = report.with(k, v);
    }
    Ok(report)
}

/// `Var(A) F_Q[ρ,B] ≥ |⟨i[A,B]⟩|²`.
pub fn check_improved_hr<S>(state: &S, a: &HermitianOperator, b: &HermitianOperator) -> Result<BoundReport>
where
    S: QuantumState + ?Sized,
{
    let m = state.pair_moments(a, b)?;
    let f = qfi(state, b)?;
    Ok(BoundReport::new("improved_hr", m.var_a() * f, m.commutator_c.powi(2))
        .with("qfi_b", f)
        .with("plain_hr_lhs", 4.0 * m.var_a() * m.var_b()))
}

/// `α Var(A) + β F_Q[ρ,B]/4 ≥ √(αβ) |⟨i[A,B]⟩|`.
///
/// The sharper right-hand side `√(αβ) min Σ_k p_k L_{ψ_k}` is a minimum over pure
/// decompositions; the search can only bound it from above, so its best value is
/// recorded in `meta` as `witness` and never used as the certified bound.
pub fn check_weighted_sum(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    alpha: f64,
    beta: f64,
    cfg: &OptimizerConfig,
) -> Result<BoundReport> {
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::InvalidArgument("weights must be nonnegative".into()));
    }
    ensure_dim(rho.dim(), a.dim())?;
    ensure_dim(rho.dim(), b.dim())?;
    let m = rho.pair_moments(a, b)?;
    let f = qfi(rho, b)?;
    let scale = (alpha * beta).sqrt();
    let signal = m.commutator_c.abs();
    let ancilla = cfg.ancilla_dim.unwrap_or(rho.dim());
    let witness = optimize_roof(
        rho,
        |c: &Component| c.pair_moments(a, b).expect("dimensions checked").rs_bound(),
        Direction::Min,
        &[Partition::singletons(ancilla)],
        cfg,
    )?;
    Ok(BoundReport::new("weighted_sum", alpha * m.var_a() + beta * f / 4.0, scale * signal)
        .with("commutator_abs", signal)
        .with("witness", scale * witness.value)
        .with("var_a", m.var_a())
        .with("qfi_b", f))
}

fn spin_dim_check<S: QuantumState + ?Sized>(state: &S, spin: &SpinAlgebra) -> Result<()> {
    ensure_dim(spin.dim(), state.dim())
}

/// `F_Q[ρ,J_z] ≥ 4j - 4Var(J_x) - 4Var(J_y) = B_FQ`; `meta.su2_mixture_reference = 2j`
/// is the largest `F_Q[ρ,J_z]` of mixtures of spin-coherent states.
pub fn bfq_bound<S>(state: &S, spin: &SpinAlgebra) -> Result<BoundReport>
where
    S: QuantumState + ?Sized,
{
    spin_dim_check(state, spin)?;
    let j = spin.j();
    let vx = state.variance(&spin.jx)?;
    let vy = state.variance(&spin.jy)?;
    let f = qfi(state, &spin.jz)?;
    Ok(BoundReport::new("bfq", f, 4.0 * j - 4.0 * vx - 4.0 * vy)
        .with("j", j)
        .with("var_jx", vx)
        .with("var_jy", vy)
        .with("su2_mixture_reference", 2.0 * j))
}

/// `Var(J_x) + Var(J_y) + F_Q[ρ,J_z]/4 ≥ j`; `meta.variance_sum` is the weaker
/// left-hand side with `Var(J_z)` in place of `F_Q/4`.
pub fn check_spin_variance_qfi<S>(state: &S, spin: &SpinAlgebra) -> Result<BoundReport>
where
    S: QuantumState + ?Sized,
{
    spin_dim_check(state, spin)?;
    let vx = state.variance(&spin.jx)?;
    let vy = state.variance(&spin.jy)?;
    let vz = state.variance(&spin.jz)?;
    let f = qfi(state, &spin.jz)?;
    Ok(BoundReport::new("spin_variance_qfi", vx + vy + f / 4.0, spin.j()).with("variance_sum", vx + vy + vz))
}

/// `F_Q[ρ,G_1]/4 + Σ_{n≥2} Var(G_n) ≥ 4j` with `j = (d-1)/2` over the `d² - 1`
/// generalized Gell-Mann matrices.
pub fn su_d_bound<S>(state: &S) -> Result<BoundReport>
where
    S: QuantumState + ?Sized,
{
    let d = state.dim();
    let gens = make_su_d_generators(d)?;
    su_d_bound_with(state, &gens)
}

/// As [`su_d_bound`] with precomputed generators.
pub fn su_d_bound_with<S>(state: &S, generators: &[HermitianOperator]) -> Result<BoundReport>
where
    S: QuantumState + ?Sized,
{
    let d = state.dim();
    if generators.len() != d * d - 1 {
        return Err(Error::DimensionMismatch {
            expected: d * d - 1,
            found: generators.len(),
        });
    }
    let f = qfi(state, &generators[0])?;
    let mut rest = 0.0;
    for g in &generators[1..] {
        rest += state.variance(g)?;
    }
    let j = (d as f64 - 1.0) / 2.0;
    Ok(BoundReport::new("su_d", f / 4.0 + rest, 4.0 * j)
        .with("qfi_g1", f)
        .with("variance_g1", state.variance(&generators[0])?))
}
