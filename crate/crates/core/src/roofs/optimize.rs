use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decomposition::{Component, Decomposition};
use super::partition::{default_partitions, Partition};
use super::purification::{components_from_factor, purify};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{seeded_rng, DensityMatrix, Observable, QuantumState};

/// Consecutive rejections after which the step size shrinks.
const REJECTION_STREAK: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    fn improves(self, candidate: f64, current: f64) -> bool {
        match self {
            Direction::Min => candidate < current,
            Direction::Max => candidate > current,
        }
    }
}

/// Settings of the stochastic search over ancilla unitaries.
///
/// Restart 0 starts from `U_A = 1`, so the eigendecomposition-based groupings are
/// always among the candidates; the other restarts start from Haar-random unitaries.
/// Each (partition, restart) pair draws from its own ChaCha8 stream of `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub restarts: usize,
    pub local_steps: usize,
    pub step_scale: f64,
    pub shrink: f64,
    pub tolerance: f64,
    /// Defaults to the system dimension.
    pub ancilla_dim: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 8,
            local_steps: 2000,
            step_scale: 0.5,
            shrink: 0.5,
            tolerance: 1e-7,
            ancilla_dim: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.restarts > 0
            && self.local_steps > 0
            && self.step_scale > 0.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.tolerance > 0.0
            && self.ancilla_dim != Some(0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid optimizer settings {self:?}")))
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoofResult {
    pub value: f64,
    /// Set when the winning search ran its step size below the tolerance.
    pub converged: bool,
    pub evaluations: usize,
    pub partition: Partition,
    pub decomposition: Decomposition,
}

struct Run {
    value: f64,
    converged: bool,
    evaluations: usize,
    unitary: CMatrix,
}

fn evaluate<F>(factor: &CMatrix, u: &CMatrix, partition: &Partition, functional: &F) -> f64
where
    F: Fn(&Component) -> f64,
{
    components_from_factor(&(factor * u.transpose()), partition)
        .iter()
        .map(|c| c.weight * functional(&c.state))
        .sum()
}

fn search<F>(
    factor: &CMatrix,
    partition: &Partition,
    functional: &F,
    direction: Direction,
    cfg: &OptimizerConfig,
    mut rng: ChaCha8Rng,
    from_identity: bool,
) -> Run
where
    F: Fn(&Component) -> f64,
{
    let n = factor.ncols();
    let mut u = if from_identity {
        CMatrix::identity(n, n)
    } else {
        linalg::haar_unitary(n, &mut rng)
    };
    let mut value = evaluate(factor, &u, partition, functional);
    let mut evaluations = 1;
    let mut eps = cfg.step_scale;
    let mut streak = 0;
    let mut converged = false;
    for _ in 0..cfg.local_steps {
        let h = linalg::random_unit_hermitian(n, &mut rng);
        let candidate = linalg::expi_hermitian(&h, eps) * &u;
        let v = evaluate(factor, &candidate, partition, functional);
        evaluations += 1;
        if direction.improves(v, value) {
            u = candidate;
            value = v;
            streak = 0;
        } else {
            streak += 1;
            if streak >= REJECTION_STREAK {
                streak = 0;
                eps *= cfg.shrink;
                if eps < cfg.tolerance {
                    converged = true;
                    break;
                }
            }
        }
    }
    Run {
        value,
        converged,
        evaluations,
        unitary: u,
    }
}

/// Best `Σ_l p_l Q(ρ_l)` over ancilla unitaries and the given groupings.
///
/// Every candidate is an actual decomposition of `ρ`, so a minimization returns an
/// upper bound on the convex roof and a maximization a lower bound on the concave
/// roof. An empty `partitions` list selects [`default_partitions`]. The functional must
/// accept mixed states whenever a partition has a set of size greater than one.
pub fn optimize_roof<F>(
    rho: &DensityMatrix,
    functional: F,
    direction: Direction,
    partitions: &[Partition],
    cfg: &OptimizerConfig,
) -> Result<RoofResult>
where
    F: Fn(&Component) -> f64 + Sync,
{
    cfg.validate()?;
    let ancilla = cfg.ancilla_dim.unwrap_or(rho.dim());
    let pur = purify(rho, ancilla)?;
    let partitions = if partitions.is_empty() {
        default_partitions(ancilla)
    } else {
        partitions.to_vec()
    };
    for p in &partitions {
        ensure_dim(ancilla, p.size())?;
    }
    let factor = pur.base_factor();
    let tasks: Vec<(usize, usize)> = (0..partitions.len())
        .flat_map(|p| (0..cfg.restarts).map(move |r| (p, r)))
        .collect();
    let runs: Vec<Run> = tasks
        .par_iter()
        .map(|&(p, r)| {
            let mut rng = seeded_rng(cfg.seed);
            rng.set_stream(((p as u64) << 32) | r as u64);
            search(factor, &partitions[p], &functional, direction, cfg, rng, r == 0)
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if direction.improves(run.value, runs[best].value) {
            best = i;
        }
    }
    let (p, _) = tasks[best];
    let run = &runs[best];
    let components = components_from_factor(&(factor * run.unitary.transpose()), &partitions[p]);
    let decomposition = Decomposition::new(components)?;
    Ok(RoofResult {
        value: run.value,
        converged: run.converged,
        evaluations,
        partition: partitions[p].clone(),
        decomposition,
    })
}

fn singletons(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Vec<Partition> {
    vec![Partition::singletons(cfg.ancilla_dim.unwrap_or(rho.dim()))]
}

/// Convex roof of `Var(B)` over pure decompositions, which equals `F_Q[ρ,B]/4`.
pub fn convex_roof_variance<O: Observable>(rho: &DensityMatrix, b: &O, cfg: &OptimizerConfig) -> Result<RoofResult> {
    ensure_dim(rho.dim(), b.dim())?;
    let f = |c: &Component| c.variance(b).expect("dimensions checked");
    optimize_roof(rho, f, Direction::Min, &singletons(rho, cfg), cfg)
}

/// Concave roof of `Var(A)` over pure decompositions, which equals `Var(A)` itself.
pub fn concave_roof_variance<O: Observable>(rho: &DensityMatrix, a: &O, cfg: &OptimizerConfig) -> Result<RoofResult> {
    ensure_dim(rho.dim(), a.dim())?;
    let f = |c: &Component| c.variance(a).expect("dimensions checked");
    optimize_roof(rho, f, Direction::Max, &singletons(rho, cfg), cfg)
}

fn variance_sum<'a, O: Observable>(rho: &DensityMatrix, ops: &'a [O]) -> Result<impl Fn(&Component) -> f64 + Sync + 'a> {
    if ops.is_empty() {
        return Err(Error::InvalidArgument("at least one operator is required".into()));
    }
    for op in ops {
        ensure_dim(rho.dim(), op.dim())?;
    }
    Ok(move |c: &Component| ops.iter().map(|op| c.variance(op).expect("dimensions checked")).sum())
}

/// `I({A_n}, ρ)`: minimal average of `Σ_n Var(A_n)` over pure decompositions.
pub fn roof_sum_i<O: Observable>(rho: &DensityMatrix, ops: &[O], cfg: &OptimizerConfig) -> Result<RoofResult> {
    let f = variance_sum(rho, ops)?;
    optimize_roof(rho, f, Direction::Min, &singletons(rho, cfg), cfg)
}

/// `R({A_n}, ρ)`: maximal average of `Σ_n Var(A_n)` over pure decompositions.
pub fn roof_sum_r<O: Observable>(rho: &DensityMatrix, ops: &[O], cfg: &OptimizerConfig) -> Result<RoofResult> {
    let f = variance_sum(rho, ops)?;
    optimize_roof(rho, f, Direction::Max, &singletons(rho, cfg), cfg)
}

/// Concave roof of the Robertson–Schrödinger bound `L` over mixed decompositions,
/// searched over [`default_partitions`].
pub fn concave_roof_l<O: Observable>(rho: &DensityMatrix, a: &O, b: &O, cfg: &OptimizerConfig) -> Result<RoofResult> {
    concave_roof_l_with_partitions(rho, a, b, &[], cfg)
}

/// As [`concave_roof_l`], searching `extra` groupings in addition to the defaults.
pub fn concave_roof_l_with_partitions<O: Observable>(
    rho: &DensityMatrix,
    a: &O,
    b: &O,
    extra: &[Partition],
    cfg: &OptimizerConfig,
) -> Result<RoofResult> {
    ensure_dim(rho.dim(), a.dim())?;
    ensure_dim(rho.dim(), b.dim())?;
    let mut partitions = default_partitions(cfg.ancilla_dim.unwrap_or(rho.dim()));
    for p in extra {
        if !partitions.contains(p) {
            partitions.push(p.clone());
        }
    }
    let f = |c: &Component| c.pair_moments(a, b).expect("dimensions checked").rs_bound();
    optimize_roof(rho, f, Direction::Max, &partitions, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrology::qfi;
    use crate::quantum::{
        make_spin_algebra, random_density_matrix, random_hermitian, HermitianOperator, PureState, RandomStateConfig,
    };

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 4,
            local_steps: 1500,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn diagonal_qubit_convex_roof() {
        let rho = DensityMatrix::new(HermitianOperator::diagonal(&[0.75, 0.25]).into_matrix()).unwrap();
        let r = convex_roof_variance(&rho, &HermitianOperator::pauli_x(), &quick()).unwrap();
        assert!(r.value >= 0.25 - 1e-9);
        assert!((r.value - 0.25) / 0.25 < 0.02, "{}", r.value);
        assert!(r.decomposition.reconstruction_error(&rho) < 1e-8);
        let again = r.decomposition.average(|c| c.variance(&HermitianOperator::pauli_x()).unwrap());
        assert!((again - r.value).abs() < 1e-12);
    }

    #[test]
    fn pure_state_roofs_are_the_variance() {
        let mut rng = seeded_rng(1);
        let psi = crate::quantum::random_pure_state(3, &mut rng);
        let a = random_hermitian(3, &mut rng);
        let rho = psi.to_density_matrix();
        let v = psi.variance(&a).unwrap();
        assert!((convex_roof_variance(&rho, &a, &quick()).unwrap().value - v).abs() < 1e-10);
        assert!((concave_roof_variance(&rho, &a, &quick()).unwrap().value - v).abs() < 1e-10);
    }

    #[test]
    fn sandwich_on_random_qutrits() {
        for seed in 0..4 {
            let rho = random_density_matrix(&RandomStateConfig::full_rank(3, seed)).unwrap();
            let mut rng = seeded_rng(100 + seed);
            let b = random_hermitian(3, &mut rng);
            let f = qfi(&rho, &b).unwrap();
            let var = rho.variance(&b).unwrap();
            let lo = convex_roof_variance(&rho, &b, &quick()).unwrap();
            let hi = concave_roof_variance(&rho, &b, &quick()).unwrap();
            assert!(lo.value >= f / 4.0 - 1e-9 && lo.value <= var + 1e-9);
            assert!((lo.value - f / 4.0) <= 0.02 * f / 4.0, "{} vs {}", lo.value, f / 4.0);
            assert!(hi.value <= var + 1e-9 && hi.value >= 0.99 * var);
        }
    }

    #[test]
    fn two_operator_concave_roof_is_variance_sum() {
        let rho = random_density_matrix(&RandomStateConfig::full_rank(2, 8)).unwrap();
        let ops = [HermitianOperator::pauli_x(), HermitianOperator::pauli_z()];
        let r = roof_sum_r(&rho, &ops, &quick()).unwrap();
        let sum: f64 = ops.iter().map(|o| rho.variance(o).unwrap()).sum();
        assert!(r.value <= sum + 1e-9 && r.value >= 0.99 * sum);
    }

    #[test]
    fn single_operator_i_is_quarter_qfi() {
        let rho = random_density_matrix(&RandomStateConfig::full_rank(3, 12)).unwrap();
        let spin = make_spin_algebra(1.0).unwrap();
        let i = roof_sum_i(&rho, std::slice::from_ref(&spin.jx), &quick()).unwrap();
        let f = qfi(&rho, &spin.jx).unwrap();
        assert!(i.value >= f / 4.0 - 1e-9 && i.value <= 1.02 * f / 4.0);
        let three = roof_sum_i(&rho, &spin.components().map(Clone::clone), &quick()).unwrap();
        let bound: f64 = spin.components().iter().map(|o| qfi(&rho, *o).unwrap() / 4.0).sum();
        assert!(three.value >= bound - 1e-9);
    }

    #[test]
    fn roofs_are_deterministic() {
        let rho = random_density_matrix(&RandomStateConfig::full_rank(3, 5)).unwrap();
        let spin = make_spin_algebra(1.0).unwrap();
        let cfg = OptimizerConfig {
            restarts: 3,
            local_steps: 300,
            ..OptimizerConfig::default()
        };
        let a = concave_roof_l(&rho, &spin.jx, &spin.jy, &cfg).unwrap();
        let b = concave_roof_l(&rho, &spin.jx, &spin.jy, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
        let c = concave_roof_l(&rho, &spin.jx, &spin.jy, &cfg.with_seed(1)).unwrap();
        assert!(c.value >= rho.pair_moments(&spin.jx, &spin.jy).unwrap().rs_bound() - 1e-12);
    }

    #[test]
    fn pure_state_l_roof() {
        let spin = make_spin_algebra(1.0).unwrap();
        let psi = PureState::normalized(crate::linalg::CVector::from_vec(vec![
            linalg::c(0.6, 0.0),
            linalg::c(0.0, 0.64f64.sqrt()),
            linalg::c(0.0, 0.0),
        ]))
        .unwrap();
        let r = concave_roof_l(&psi.to_density_matrix(), &spin.jx, &spin.jy, &quick()).unwrap();
        let l = psi.pair_moments(&spin.jx, &spin.jy).unwrap().rs_bound();
        assert!((r.value - l).abs() < 1e-10);
    }

    #[test]
    fn invalid_config_rejected() {
        let rho = DensityMatrix::maximally_mixed(2);
        let cfg = OptimizerConfig {
            shrink: 1.0,
            ..OptimizerConfig::default()
        };
        assert!(convex_roof_variance(&rho, &HermitianOperator::pauli_x(), &cfg).is_err());
        assert!(roof_sum_i::<HermitianOperator>(&rho, &[], &OptimizerConfig::default()).is_err());
    }

    #[test]
    fn result_serializes() {
        let rho = DensityMatrix::maximally_mixed(2);
        let cfg = OptimizerConfig {
            restarts: 1,
            local_steps: 10,
            ..OptimizerConfig::default()
        };
        let r = convex_roof_variance(&rho, &HermitianOperator::pauli_z(), &cfg).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert!(j["value"].is_number());
        assert!(j["decomposition"][0]["p"].is_number());
        assert_eq!(j["decomposition"][0]["state"]["kind"], "pure");
    }
}
