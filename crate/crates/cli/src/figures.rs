//! Data behind the three figures: random qutrits under the improved
//! Robertson–Schrödinger relation, planar-squeezed states, and spin-squeezed states.

use roofs_core::bounds::bfq_bound;
use roofs_core::metrology::qfi;
use roofs_core::quantum::{make_spin_algebra, random_density_matrix, QuantumState, RandomStateConfig};
use roofs_core::roofs::{concave_roof_l, eigen_partition_bound_k};
use roofs_core::states::{planar_squeezed_state, spin_squeezed_state};

use crate::error::{CliError, Result};
use crate::output::{Cell, Table};
use crate::spec::PLANAR_TOL;
use crate::RunConfig;

/// `K` counts as an improvement over `L_ρ` above this margin.
pub const IMPROVEMENT_MARGIN: f64 = 1e-6;

/// One row per random qutrit (sample `i` uses seed `seed + i`) with `A = J_x`, `B = J_y`:
/// the three slacks `Var(A)Var(B) - ¼X²` for `X = L_ρ`, `K` and the concave roof of `L`.
pub fn figure_rs(cfg: &RunConfig) -> Result<Table> {
    if cfg.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let spin = make_spin_algebra(1.0)?;
    let mut table = Table::new(vec![
        "sample",
        "seed",
        "var_product",
        "l_rho",
        "k",
        "roof_l",
        "rs_slack",
        "k_slack",
        "roof_slack",
        "k_improved",
        "roof_converged",
    ]);
    let (mut improved, mut converged) = (0usize, 0usize);
    for i in 0..cfg.samples {
        let seed = cfg.seed.wrapping_add(i as u64);
        let rho = random_density_matrix(&RandomStateConfig::full_rank(3, seed))?;
        let m = rho.pair_moments(&spin.jx, &spin.jy)?;
        let product = m.var_a() * m.var_b();
        let l = m.rs_bound();
        let k = eigen_partition_bound_k(&rho, &spin.jx, &spin.jy)?;
        let roof = concave_roof_l(&rho, &spin.jx, &spin.jy, &cfg.optimizer().with_seed(seed))?;
        let k_improved = k > l + IMPROVEMENT_MARGIN;
        improved += k_improved as usize;
        converged += roof.converged as usize;
        table.push(vec![
            i.into(),
            seed.into(),
            product.into(),
            l.into(),
            k.into(),
            roof.value.into(),
            (product - 0.25 * l * l).into(),
            (product - 0.25 * k * k).into(),
            (product - 0.25 * roof.value * roof.value).into(),
            k_improved.into(),
            roof.converged.into(),
        ]);
    }
    table.summary.insert("k_improved", improved.into());
    table.summary.insert("roof_converged", converged.into());
    table.summary.insert("k_improved_fraction", (improved as f64 / cfg.samples as f64).into());
    Ok(table)
}

/// Exactly known minimal `Var(J_x) + Var(J_y)`.
pub fn exact_planar_c(j: f64) -> Option<f64> {
    if j == 0.5 {
        Some(0.25)
    } else if j == 1.0 {
        Some(7.0 / 16.0)
    } else {
        None
    }
}

pub const DEFAULT_PLANAR_JS: [f64; 12] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 15.0];

/// Planar-squeezed states: `F_Q[ρ,J_z]` against `B_FQ = 4(j - Var(J_x) - Var(J_y))`.
pub fn figure_planar(js: &[f64]) -> Result<Table> {
    let mut table = Table::new(vec!["j", "c_j", "exact_c_j", "fq_jz", "bfq", "reference_2j", "iterations"]);
    for &j in js {
        let spin = make_spin_algebra(j)?;
        let p = planar_squeezed_state(&spin, PLANAR_TOL)?;
        let r = bfq_bound(&p.state, &spin)?;
        table.push(vec![
            j.into(),
            p.c_j.into(),
            exact_planar_c(j).map_or(Cell::Empty, Cell::Num),
            r.lhs.into(),
            r.rhs.into(),
            (2.0 * j).into(),
            (p.history.len() - 1).into(),
        ]);
    }
    Ok(table)
}

/// Logarithmic `λ` grid from `10^lo` to `10^hi` with `per_decade` points per decade.
pub fn log_lambdas(lo: i32, hi: i32, per_decade: usize) -> Vec<f64> {
    let n = (hi - lo) as usize * per_decade;
    (0..=n)
        .map(|k| 10f64.powf(lo as f64 + k as f64 / per_decade as f64))
        .collect()
}

/// Spin-squeezed ground states of `J_y² - λJ_x`: `F_Q[ρ,J_z]` against `B_FQ`.
pub fn figure_spinsq(j: f64, lambdas: &[f64]) -> Result<Table> {
    if lambdas.is_empty() {
        return Err(CliError::Usage("empty λ grid".into()));
    }
    let spin = make_spin_algebra(j)?;
    let mut table = Table::new(vec!["lambda", "fq_jz", "bfq", "reference_2j", "var_jy"]);
    for &lambda in lambdas {
        let psi = spin_squeezed_state(&spin, lambda)?;
        let r = bfq_bound(&psi, &spin)?;
        table.push(vec![
            lambda.into(),
            qfi(&psi, &spin.jz)?.into(),
            r.rhs.into(),
            (2.0 * j).into(),
            psi.variance(&spin.jy)?.into(),
        ]);
    }
    Ok(table)
}
