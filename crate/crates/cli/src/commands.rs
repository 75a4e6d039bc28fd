//! `check`, `roof` and `state-factory`.

use roofs_core::bounds::{
    bfq_bound, check_improved_hr, check_improved_rs, check_robertson_schrodinger, check_spin_variance_qfi,
    check_weighted_sum, fj_curve, spin_length_bound, su_d_bound, BoundReport,
};
use roofs_core::entanglement::{coherent_mixture_usefulness, duan_report, two_spin_report, vxyz_criterion};
use roofs_core::quantum::{make_fock_algebra, make_spin_algebra, HermitianOperator, SpinAlgebra, StateJson};
use roofs_core::roofs::{roof_sum_i, roof_sum_r, Direction, RoofResult};

use crate::error::{CliError, Result};
use crate::spec::{BuiltState, OpSpec, StateSpec, Structure};
use crate::RunConfig;

pub const CHECKS: [&str; 12] = [
    "robertson_schrodinger",
    "improved_hr",
    "improved_rs",
    "weighted_sum",
    "bfq",
    "spin_variance_qfi",
    "su_d",
    "spin_length",
    "duan",
    "coherent_usefulness",
    "two_spin",
    "vxyz",
];

/// Extra inputs of `check`; all optional.
#[derive(Debug, Clone, Default)]
pub struct CheckArgs {
    pub ops: Vec<OpSpec>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub parties: Option<usize>,
}

fn spin_of(state: &BuiltState) -> Result<SpinAlgebra> {
    let j = match state.structure {
        Structure::Spin { j } => j,
        _ => (state.rho.dim() as f64 - 1.0) / 2.0,
    };
    Ok(make_spin_algebra(j)?)
}

fn isqrt_exact(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// `A, B` from `--op` (two of them), or `J_x, J_y` for spin states.
fn pair(state: &BuiltState, args: &CheckArgs) -> Result<(HermitianOperator, HermitianOperator)> {
    match args.ops.as_slice() {
        [a, b] => Ok((a.build()?, b.build()?)),
        [] => match state.structure {
            Structure::Spin { j } => {
                let spin = make_spin_algebra(j)?;
                Ok((spin.jx, spin.jy))
            }
            _ => Err(CliError::Usage("this check needs two --op operators".into())),
        },
        _ => Err(CliError::Usage(format!("expected 2 operators, got {}", args.ops.len()))),
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

pub fn run_check(name: &str, state: &BuiltState, args: &CheckArgs, cfg: &RunConfig) -> Result<BoundReport> {
    let rho = &state.rho;
    let opt = cfg.optimizer();
    Ok(match name {
        "robertson_schrodinger" => {
            let (a, b) = pair(state, args)?;
            check_robertson_schrodinger(rho, &a, &b)?
        }
        "improved_hr" => {
            let (a, b) = pair(state, args)?;
            check_improved_hr(rho, &a, &b)?
        }
        "improved_rs" => {
            let (a, b) = pair(state, args)?;
            check_improved_rs(rho, &a, &b, &opt)?
        }
        "weighted_sum" => {
            let (a, b) = pair(state, args)?;
            check_weighted_sum(rho, &a, &b, args.alpha.unwrap_or(1.0), args.beta.unwrap_or(1.0), &opt)?
        }
        "bfq" => bfq_bound(rho, &spin_of(state)?)?,
        "spin_variance_qfi" => check_spin_variance_qfi(rho, &spin_of(state)?)?,
        "su_d" => su_d_bound(rho)?,
        "spin_length" => {
            let spin = spin_of(state)?;
            let grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
            spin_length_bound(rho, &spin, &fj_curve(&spin, &grid)?)?
        }
        "duan" | "coherent_usefulness" => {
            let cutoff = match state.structure {
                Structure::TwoMode { cutoff } => cutoff,
                _ => isqrt_exact(rho.dim()).ok_or_else(|| CliError::Usage("not a two-mode state".into()))?,
            };
            let fock = make_fock_algebra(cutoff)?;
            if name == "duan" {
                let r = duan_report(rho, &fock)?;
                BoundReport::new("duan", r.duan_lhs, r.duan_rhs)
                    .with("qfi_x_minus", r.qfi_x_minus)
                    .with("qfi_p_plus", r.qfi_p_plus)
                    .with("relation_82_slack", r.relation_82_slack)
                    .with("relation_82_indeterminate", flag(r.relation_82_indeterminate))
                    .with("more_useful_than_p_nonnegative_class", flag(r.usefulness.more_useful_than_p_nonnegative_class))
            } else {
                let u = coherent_mixture_usefulness(rho, &fock)?;
                let largest = u.qfi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                // Compared with the value 4 reachable in the P-nonnegative class.
                BoundReport::new("coherent_usefulness", 4.0, largest)
                    .with("qfi_x_plus", u.qfi[0])
                    .with("qfi_x_minus", u.qfi[1])
                    .with("qfi_p_plus", u.qfi[2])
                    .with("qfi_p_minus", u.qfi[3])
            }
        }
        "two_spin" => {
            let (j1, j2) = match state.structure {
                Structure::TwoSpin { j1, j2 } => (j1, j2),
                _ => {
                    let d = isqrt_exact(rho.dim()).ok_or_else(|| CliError::Usage("not a two-spin state".into()))?;
                    let j = (d as f64 - 1.0) / 2.0;
                    (j, j)
                }
            };
            let r = two_spin_report(rho, &make_spin_algebra(j1)?, &make_spin_algebra(j2)?)?;
            BoundReport::new("two_spin", r.crit_84_lhs, r.crit_84_rhs)
                .with("j1", j1)
                .with("j2", j2)
                .with("fq_sum_minus", r.fq_sum_minus)
                .with("sep3f_threshold", r.sep3f_threshold)
                .with("obs13_lhs", r.obs13_lhs)
                .with("obs13_rhs", r.obs13_rhs)
                .with("more_useful_than_spin_coherent_products", flag(r.more_useful_than_spin_coherent_products))
        }
        "vxyz" => {
            let (j, parties) = match (state.structure, args.parties) {
                (Structure::TwoSpin { j1, j2 }, None) if j1 == j2 => (j1, 2),
                (Structure::Spin { j }, None) => (j, 1),
                (_, Some(n)) if n > 0 => {
                    let d = (rho.dim() as f64).powf(1.0 / n as f64).round() as usize;
                    if d < 2 || d.pow(n as u32) != rho.dim() {
                        return Err(CliError::Usage(format!("dimension {} is not a {n}-fold power", rho.dim())));
                    }
                    ((d as f64 - 1.0) / 2.0, n)
                }
                _ => return Err(CliError::Usage("vxyz needs --parties for this state".into())),
            };
            vxyz_criterion(rho, &make_spin_algebra(j)?, parties, &opt)?
        }
        other => {
            return Err(CliError::UnknownCheck {
                name: other.to_string(),
                available: CHECKS.join(", "),
            })
        }
    })
}

/// Roof of `Σ_n Var(A_n)` over pure decompositions: minimum (`I`) or maximum (`R`).
pub fn run_roof(state: &BuiltState, ops: &[OpSpec], direction: Direction, cfg: &RunConfig) -> Result<RoofResult> {
    if ops.is_empty() {
        return Err(CliError::Usage("roof needs at least one --op".into()));
    }
    let ops = ops.iter().map(OpSpec::build).collect::<Result<Vec<_>>>()?;
    for op in &ops {
        if op.dim() != state.rho.dim() {
            return Err(roofs_core::Error::DimensionMismatch {
                expected: state.rho.dim(),
                found: op.dim(),
            }
            .into());
        }
    }
    let opt = cfg.optimizer();
    Ok(match direction {
        Direction::Min => roof_sum_i(&state.rho, &ops, &opt)?,
        Direction::Max => roof_sum_r(&state.rho, &ops, &opt)?,
    })
}

pub fn run_state_factory(spec: &StateSpec, cfg: &RunConfig) -> Result<StateJson> {
    Ok(spec.build(cfg.cutoff)?.to_json())
}
