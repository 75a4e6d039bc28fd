//! Minimal variance sums under expectation-value constraints, from ground states of
//! `Σ_n (A_n² - λ_n A_n) - Σ_n μ_n B_n` over a grid of multipliers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hull::{interpolate, lower_hull};
use crate::error::{ensure_dim, Error, Result};
use crate::quantum::{ground_state, HermitianOperator, QuantumState};

/// Constraint values closer than this to their targets count as met.
const TARGET_TOL: f64 = 1e-6;

/// Cartesian grid: one list of `λ` values per `A_n` and one list of `μ` values per `B_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierGrid {
    pub lambdas: Vec<Vec<f64>>,
    pub mus: Vec<Vec<f64>>,
}

impl MultiplierGrid {
    fn size(&self) -> usize {
        self.lambdas.iter().chain(&self.mus).map(Vec::len).product()
    }

    /// The `index`-th grid point in row-major order (last axis fastest).
    fn point(&self, mut index: usize) -> Vec<f64> {
        let axes: Vec<&Vec<f64>> = self.lambdas.iter().chain(&self.mus).collect();
        let mut out = vec![0.0; axes.len()];
        for (k, axis) in axes.iter().enumerate().rev() {
            out[k] = axis[index % axis.len()];
            index /= axis.len();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinVarResult {
    pub value: f64,
    /// Nondegenerate ground states that entered the minimization.
    pub points_used: usize,
    /// Set when the value was read off the lower convex hull (single constraint).
    pub from_hull: bool,
}

/// Minimal `Σ_n Var(A_n)` over ground states of the multiplier family with
/// `⟨B_n⟩ = b_n`.
///
/// Without constraints the plain minimum is returned. With one constraint the lower
/// convex hull of `(⟨B⟩, Σ Var)` is interpolated at the target, which also covers
/// mixtures of ground states. With several constraints only grid points meeting all
/// targets within 1e-6 count. Degenerate ground states are skipped.
pub fn minvar_constrained(
    a_ops: &[HermitianOperator],
    b_ops: &[HermitianOperator],
    targets: &[f64],
    grid: &MultiplierGrid,
) -> Result<MinVarResult> {
    let first = a_ops
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one variance operator is required".into()))?;
    let dim = first.dim();
    for op in a_ops.iter().chain(b_ops) {
        ensure_dim(dim, op.dim())?;
    }
    ensure_dim(b_ops.len(), targets.len())?;
    ensure_dim(a_ops.len(), grid.lambdas.len())?;
    ensure_dim(b_ops.len(), grid.mus.len())?;
    if grid.size() == 0 {
        return Err(Error::EmptyGrid);
    }

    let base = a_ops
        .iter()
        .fold(HermitianOperator::zeros(dim), |acc, a| &acc + &a.square());
    let points: Vec<(f64, Vec<f64>)> = (0..grid.size())
        .into_par_iter()
        .filter_map(|index| {
            let mult = grid.point(index);
            let (lam, mu) = mult.split_at(a_ops.len());
            let mut h = base.clone();
            for (a, &l) in a_ops.iter().zip(lam) {
                h = &h - &a.scaled(l);
            }
            for (b, &m) in b_ops.iter().zip(mu) {
                h = &h - &b.scaled(m);
            }
            let g = ground_state(&h);
            if g.degenerate {
                return None;
            }
            let var: f64 = a_ops.iter().map(|a| g.state.variance(a).expect("dimensions checked")).sum();
            let means = b_ops.iter().map(|b| g.state.expectation(b).expect("dimensions checked")).collect();
            Some((var, means))
        })
        .collect();
    if points.is_empty() {
        return Err(Error::Infeasible);
    }

    match targets.len() {
        0 => Ok(MinVarResult {
            value: points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
            points_used: points.len(),
            from_hull: false,
        }),
        1 => {
            let pts: Vec<(f64, f64)> = points.iter().map(|(v, m)| (m[0], *v)).collect();
            let hull = lower_hull(&pts);
            let (lo, hi) = (hull[0].0, hull[hull.len() - 1].0);
            let t = targets[0];
            let value = if t < lo && lo - t <= TARGET_TOL {
                hull[0].1
            } else if t > hi && t - hi <= TARGET_TOL {
                hull[hull.len() - 1].1
            } else {
                interpolate(&hull, t).ok_or(Error::Infeasible)?
            };
            Ok(MinVarResult {
                value,
                points_used: points.len(),
                from_hull: true,
            })
        }
        _ => {
            let feasible: Vec<f64> = points
                .iter()
                .filter(|(_, m)| m.iter().zip(targets).all(|(x, t)| (x - t).abs() <= TARGET_TOL))
                .map(|p| p.0)
                .collect();
            if feasible.is_empty() {
                return Err(Error::Infeasible);
            }
            Ok(MinVarResult {
                value: feasible.iter().copied().fold(f64::INFINITY, f64::min),
                points_used: feasible.len(),
                from_hull: false,
            })
        }
    }
}
