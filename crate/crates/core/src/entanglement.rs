//! Entanglement conditions and their metrological counterparts: the two-mode
//! Duan-type condition, two-spin collective-variance criteria, and the
//! `I({J_x, J_y, J_z}) ≥ N j` criterion for `N` spins.

use serde::Serialize;

use crate::bounds::{BoundReport, VIOLATION_TOL};
use crate::error::{ensure_dim, Result};
use crate::metrology::qfi;
use crate::quantum::{DensityMatrix, FockAlgebra, HermitianOperator, LocalSum, QuantumState, SpinAlgebra};
use crate::roofs::{roof_sum_i, OptimizerConfig};

/// QFI values below this make `4/F_Q` meaningless.
const QFI_FLOOR: f64 = 1e-12;
/// Upper QFI value for each of `x₁±x₂`, `p₁±p₂` in the P-nonnegative class.
const CLASS_QFI: f64 = 4.0;

#[derive(Debug, Clone, Serialize)]
pub struct TwoModeReport {
    /// `Var(x₁+x₂) + Var(p₁-p₂)`
    pub duan_lhs: f64,
    pub duan_rhs: f64,
    pub duan_violated: bool,
    pub qfi_x_minus: f64,
    pub qfi_p_plus: f64,
    /// `duan_lhs - 4/F_Q[p₁+p₂] - 4/F_Q[x₁-x₂]`; terms with vanishing QFI are left out.
    pub relation_82_slack: f64,
    /// Set when a QFI term fell below 1e-12 and was left out of the bound.
    pub relation_82_indeterminate: bool,
    pub usefulness: CoherentUsefulness,
}

/// Which of `F_Q[x₁±x₂]`, `F_Q[p₁±p₂]` exceed the value 4 reachable by mixtures of
/// coherent-state products (states with nonnegative P function). The comparison is
/// with that class only, not with separable states in general.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherentUsefulness {
    /// `F_Q` for `x₁+x₂`, `x₁-x₂`, `p₁+p₂`, `p₁-p₂`.
    pub qfi: [f64; 4],
    pub exceeds: [bool; 4],
    pub more_useful_than_p_nonnegative_class: bool,
}

fn quadratures(fock: &FockAlgebra) -> [LocalSum; 4] {
    let (x, p) = (&fock.x, &fock.p);
    [
        LocalSum::new(x.clone(), x.clone()),
        LocalSum::new(x.clone(), -x),
        LocalSum::new(p.clone(), p.clone()),
        LocalSum::new(p.clone(), -p),
    ]
}

fn usefulness_from(qfi: [f64; 4]) -> CoherentUsefulness {
    let exceeds = qfi.map(|f| f > CLASS_QFI + VIOLATION_TOL);
    CoherentUsefulness {
        qfi,
        exceeds,
        more_useful_than_p_nonnegative_class: exceeds.iter().any(|&e| e),
    }
}

fn two_mode_qfis<S: QuantumState + ?Sized>(state: &S, fock: &FockAlgebra) -> Result<[f64; 4]> {
    let d = fock.cutoff();
    ensure_dim(d * d, state.dim())?;
    let ops = quadratures(fock);
    Ok([
        qfi(state, &ops[0])?,
        qfi(state, &ops[1])?,
        qfi(state, &ops[2])?,
        qfi(state, &ops[3])?,
    ])
}

pub fn coherent_mixture_usefulness<S: QuantumState + ?Sized>(state: &S, fock: &FockAlgebra) -> Result<CoherentUsefulness> {
    Ok(usefulness_from(two_mode_qfis(state, fock)?))
}

/// Duan-type condition `Var(x₁+x₂) + Var(p₁-p₂) ≥ 2` for separable states, with the
/// relation `Var(x₁+x₂) + Var(p₁-p₂) ≥ 4/F_Q[p₁+p₂] + 4/F_Q[x₁-x₂]` valid for all states.
pub fn duan_report<S: QuantumState + ?Sized>(state: &S, fock: &FockAlgebra) -> Result<TwoModeReport> {
    let q = two_mode_qfis(state, fock)?;
    let ops = quadratures(fock);
    let duan_lhs = state.variance(&ops[0])? + state.variance(&ops[3])?;
    let (qfi_x_minus, qfi_p_plus) = (q[1], q[2]);
    let mut rhs = 0.0;
    let mut indeterminate = false;
    for f in [qfi_p_plus, qfi_x_minus] {
        if f < QFI_FLOOR {
            indeterminate = true;
        } else {
            rhs += 4.0 / f;
        }
    }
    Ok(TwoModeReport {
        duan_lhs,
        duan_rhs: 2.0,
        duan_violated: duan_lhs < 2.0 - VIOLATION_TOL,
        qfi_x_minus,
        qfi_p_plus,
        relation_82_slack: duan_lhs - rhs,
        relation_82_indeterminate: indeterminate,
        usefulness: usefulness_from(q),
    })
}

/// Relative sign between the two parties' spin components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, op: &HermitianOperator) -> HermitianOperator {
        match self {
            Sign::Plus => op.clone(),
            Sign::Minus => -op,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoSpinReport {
    pub j1: f64,
    pub j2: f64,
    /// `Σ_l Var(J_l⁽¹⁾ ± J_l⁽²⁾)` with the variance sign.
    pub crit_84_lhs: f64,
    pub crit_84_rhs: f64,
    pub entangled: bool,
    /// `Σ_l F_Q[ρ, J_l⁽¹⁾ ± J_l⁽²⁾]` with the QFI sign.
    pub fq_sum_minus: f64,
    /// `8 crit_84_lhs + fq_sum_minus`. Compared with `12(j1+j2)`; that comparison holds
    /// for the singlet and spin-coherent products but not for every state (see tests),
    /// so a negative slack is reported, never treated as an error.
    pub obs13_lhs: f64,
    pub obs13_rhs: f64,
    pub obs13_slack: f64,
    pub sep3f_threshold: f64,
    /// Exceeds what mixtures of products of spin-coherent states can reach.
    pub more_useful_than_spin_coherent_products: bool,
}

/// Two-spin report with the usual signs: `+` inside the variances, `-` inside the QFI.
pub fn two_spin_report<S: QuantumState + ?Sized>(state: &S, first: &SpinAlgebra, second: &SpinAlgebra) -> Result<TwoSpinReport> {
    two_spin_report_signed(state, first, second, Sign::Plus, Sign::Minus)
}

/// As [`two_spin_report`] with explicit signs for the variance and QFI combinations.
pub fn two_spin_report_signed<S: QuantumState + ?Sized>(
    state: &S,
    first: &SpinAlgebra,
    second: &SpinAlgebra,
    variance_sign: Sign,
    qfi_sign: Sign,
) -> Result<TwoSpinReport> {
    ensure_dim(first.dim() * second.dim(), state.dim())?;
    let (j1, j2) = (first.j(), second.j());
    let mut var_sum = 0.0;
    let mut fq_sum = 0.0;
    for (a, b) in first.components().into_iter().zip(second.components()) {
        var_sum += state.variance(&LocalSum::new(a.clone(), variance_sign.apply(b)))?;
        fq_sum += qfi(state, &LocalSum::new(a.clone(), qfi_sign.apply(b)))?;
    }
    let obs13_lhs = 8.0 * var_sum + fq_sum;
    let obs13_rhs = 12.0 * (j1 + j2);
    let sep3f_threshold = 4.0 * (j1 + j2);
    Ok(TwoSpinReport {
        j1,
        j2,
        crit_84_lhs: var_sum,
        crit_84_rhs: j1 + j2,
        entangled: var_sum < j1 + j2 - VIOLATION_TOL,
        fq_sum_minus: fq_sum,
        obs13_lhs,
        obs13_rhs,
        obs13_slack: obs13_lhs - obs13_rhs,
        sep3f_threshold,
        more_useful_than_spin_coherent_products: fq_sum > sep3f_threshold + VIOLATION_TOL,
    })
}

/// `I({J_x, J_y, J_z}) ≥ N j` for separable states of `N` spin-`j` particles.
///
/// The left-hand side is the optimizer's best decomposition, an upper estimate of the
/// convex roof. A violation therefore certifies entanglement; a non-violation proves
/// nothing.
pub fn vxyz_criterion(rho: &DensityMatrix, spin: &SpinAlgebra, parties: usize, cfg: &OptimizerConfig) -> Result<BoundReport> {
    let ops = spin.collective(parties);
    ensure_dim(ops[0].dim(), rho.dim())?;
    let roof = roof_sum_i(rho, &ops, cfg)?;
    let plain: f64 = ops.iter().map(|op| rho.variance(op)).sum::<Result<f64>>()?;
    Ok(BoundReport::new("vxyz", roof.value, parties as f64 * spin.j())
        .with("variance_sum", plain)
        .with("converged", if roof.converged { 1.0 } else { 0.0 }))
}
