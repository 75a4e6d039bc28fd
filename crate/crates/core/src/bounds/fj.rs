//! `F_j(X)`: the smallest `Var(J_x)/j` compatible with `⟨J_z⟩ = X j`.
//!
//! Candidate states are ground states of `J_x² - λ J_z - λ₂ J_x`. The multipliers are
//! sampled in polar form `(λ, λ₂) = r (cos φ, sin φ)`: `r` on a logarithmic grid and,
//! for half-integer `j` only, `φ` on a grid whose tangents are logarithmically spaced.
//! The lower convex hull of the sampled `(X, Var(J_x)/j)` points is refined by
//! bisecting the multipliers of hull neighbours until abscissa gaps are small.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hull::{interpolate, lower_hull};
use super::BoundReport;
use crate::error::{ensure_dim, Error, Result};
use crate::metrology::qfi;
use crate::quantum::{ground_state, QuantumState, SpinAlgebra};

const R_MIN: f64 = 1e-3;
const R_MAX: f64 = 1e3;
const R_POINTS: usize = 200;
const PHI_POINTS: usize = 60;
/// Hull neighbours further apart than this in `X` are refined.
const GAP: f64 = 1e-3;
const MAX_ROUNDS: usize = 60;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FjCurve {
    pub j: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub hull_adjusted: bool,
    /// Lower-hull vertices `(X, F)` used for interpolation.
    pub hull: Vec<(f64, f64)>,
}

impl FjCurve {
    /// `F_j(|X|)` by interpolation on the hull (the curve is even in `X`).
    pub fn value_at(&self, x: f64) -> Result<f64> {
        let x = x.abs();
        if x > 1.0 + 1e-9 {
            return Err(Error::InvalidArgument(format!("X = {x} outside [-1, 1]")));
        }
        interpolate(&self.hull, x.min(1.0)).ok_or_else(|| Error::InvalidArgument(format!("X = {x} not covered")))
    }
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    x: f64,
    y: f64,
    r: f64,
    phi: f64,
}

fn sample(spin: &SpinAlgebra, jx2: &crate::quantum::HermitianOperator, r: f64, phi: f64) -> Option<Sample> {
    let h = &(jx2 - &spin.jz.scaled(r * phi.cos())) - &spin.jx.scaled(r * phi.sin());
    let g = ground_state(&h);
    if g.degenerate {
        return None;
    }
    let j = spin.j();
    let x = g.state.expectation(&spin.jz).ok()? / j;
    let y = g.state.variance(&spin.jx).ok()? / j;
    Some(Sample { x, y, r, phi })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

fn samples_for(spin: &SpinAlgebra) -> Vec<Sample> {
    let jx2 = spin.jx.square();
    let half_integer = spin.twice_j() % 2 == 1;
    let mut phis = vec![0.0];
    if half_integer {
        phis.extend(log_grid(1e-6, 1e6, PHI_POINTS).map(f64::atan));
        phis.push(std::f64::consts::FRAC_PI_2);
    }
    let params: Vec<(f64, f64)> = phis
        .iter()
        .flat_map(|&phi| log_grid(R_MIN, R_MAX, R_POINTS).map(move |r| (r, phi)))
        .collect();
    let mut samples: Vec<Sample> = params
        .par_iter()
        .filter_map(|&(r, phi)| sample(spin, &jx2, r, phi))
        .collect();
    // Exact end points: an X = 0 eigenstate of J_x, and |+j⟩_z with Var(J_x) = j/2.
    let phi_zero = if half_integer { std::f64::consts::FRAC_PI_2 } else { 0.0 };
    samples.push(Sample { x: 0.0, y: 0.0, r: R_MIN / 10.0, phi: phi_zero });
    samples.push(Sample { x: 1.0, y: 0.5, r: R_MAX * 10.0, phi: 0.0 });

    let mut tried: HashSet<(u64, u64, u64, u64)> = HashSet::new();
    for _ in 0..MAX_ROUNDS {
        let hull = hull_samples(&samples);
        let mut new_params = Vec::new();
        for w in hull.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.x - a.x <= GAP {
                continue;
            }
            let key = (a.r.to_bits(), a.phi.to_bits(), b.r.to_bits(), b.phi.to_bits());
            if !tried.insert(key) {
                continue;
            }
            new_params.push(((a.r * b.r).sqrt(), 0.5 * (a.phi + b.phi)));
        }
        if new_params.is_empty() {
            break;
        }
        let fresh: Vec<Sample> = new_params
            .par_iter()
            .filter_map(|&(r, phi)| sample(spin, &jx2, r, phi))
            .collect();
        samples.extend(fresh);
    }
    samples
}

/// Hull vertices as samples (keeping their multipliers).
fn hull_samples(samples: &[Sample]) -> Vec<Sample> {
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.x, s.y)).collect();
    let hull = lower_hull(&pts);
    hull.iter()
        .map(|&(x, y)| *samples.iter().find(|s| s.x == x && s.y == y).expect("hull vertex is a sample"))
        .collect()
}

/// Convex lower envelope of `F_j` evaluated on `grid ⊂ [0, 1]`.
pub fn fj_curve(spin: &SpinAlgebra, grid: &[f64]) -> Result<FjCurve> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(x) = grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidArgument(format!("grid point {x} outside [0, 1]")));
    }
    let samples = samples_for(spin);
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.x >= -1e-12 && s.x <= 1.0 + 1e-12)
        .map(|s| (s.x.clamp(0.0, 1.0), s.y.max(0.0)))
        .collect();
    let hull = lower_hull(&pts);
    let mut curve = FjCurve {
        j: spin.j(),
        grid: grid.to_vec(),
        values: Vec::new(),
        hull_adjusted: true,
        hull,
    };
    curve.values = grid.iter().map(|&x| curve.value_at(x)).collect::<Result<_>>()?;
    Ok(curve)
}

/// `F_Q[ρ,J_x]/4 ≥ j F_j(⟨J_z⟩/j)`.
pub fn spin_length_bound<S>(state: &S, spin: &SpinAlgebra, curve: &FjCurve) -> Result<BoundReport>
where
    S: QuantumState + ?Sized,
{
    ensure_dim(spin.dim(), state.dim())?;
    if curve.j != spin.j() {
        return Err(Error::InvalidArgument(format!("curve for j = {} used with j = {}", curve.j, spin.j())));
    }
    let j = spin.j();
    let x = state.expectation(&spin.jz)? / j;
    let f = qfi(state, &spin.jx)?;
    let fj = curve.value_at(x)?;
    Ok(BoundReport::new("spin_length", f / 4.0, j * fj).with("x", x).with("fj", fj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{make_spin_algebra, random_density_matrix, RandomStateConfig};

    fn grid21() -> Vec<f64> {
        (0..=20).map(|i| i as f64 / 20.0).collect()
    }

    /// Minimum of Var(J_x)/j = (1 - b_x²)/(4j) over Bloch vectors with b_z = X, by a scan
    /// of b_x across the slice of the ball (b_y does not enter).
    fn bloch_oracle(x: f64) -> f64 {
        let n = 400;
        let rad = (1.0 - x * x).max(0.0).sqrt();
        (0..=n)
            .map(|i| -rad + 2.0 * rad * i as f64 / n as f64)
            .map(|bx| (1.0 - bx * bx) / 4.0 / 0.5)
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn spin_half_matches_bloch_oracle() {
        let spin = make_spin_algebra(0.5).unwrap();
        let c = fj_curve(&spin, &grid21()).unwrap();
        for (x, v) in c.grid.iter().zip(&c.values) {
            assert!((v - bloch_oracle(*x)).abs() < 1e-6, "X={x}: {v} vs {}", bloch_oracle(*x));
            assert!((v - x * x / 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn curves_are_convex_with_fixed_ends() {
        for j in [0.5, 1.0, 2.0] {
            let spin = make_spin_algebra(j).unwrap();
            let c = fj_curve(&spin, &grid21()).unwrap();
            assert_eq!(c.values[0], 0.0);
            assert!((c.values[20] - 0.5).abs() < 1e-12);
            for w in c.values.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-8);
            }
            for w in c.values.windows(2) {
                assert!(w[1] >= w[0] - 1e-12);
            }
        }
    }

    #[test]
    fn spin_length_bound_holds() {
        let spin = make_spin_algebra(1.0).unwrap();
        let c = fj_curve(&spin, &grid21()).unwrap();
        for seed in 0..50 {
            let rho = random_density_matrix(&RandomStateConfig::full_rank(3, seed)).unwrap();
            assert!(!spin_length_bound(&rho, &spin, &c).unwrap().violated);
        }
        let other = make_spin_algebra(0.5).unwrap();
        assert!(spin_length_bound(&crate::quantum::DensityMatrix::maximally_mixed(2), &other, &c).is_err());
    }

    #[test]
    fn grid_validation() {
        let spin = make_spin_algebra(1.0).unwrap();
        assert!(matches!(fj_curve(&spin, &[]), Err(Error::EmptyGrid)));
        assert!(fj_curve(&spin, &[1.5]).is_err());
    }
}
