//! JSON state and operator specifications accepted on the command line.
//!
//! A spec is either inline JSON or `@path` naming a file that holds it.

use num_complex::Complex64;
use serde::Deserialize;

use roofs_core::quantum::{
    coherent_state, make_fock_algebra, make_spin_algebra, random_density_matrix, spin_coherent_state, DensityMatrix,
    HermitianOperator, MatrixJson, PureState, RandomStateConfig, StateJson, StateKind, Tensor,
};
use roofs_core::states::{
    coherent_mixture, planar_squeezed_state, product_spin_coherent_mixture, singlet_state, spin_coherent_mixture,
    spin_squeezed_state, two_mode_squeezed_vacuum,
};

use crate::error::{CliError, Result};

/// Tolerance on the variance-sum decrease for planar-squeezed states built from specs.
pub const PLANAR_TOL: f64 = 1e-14;

fn complex(z: [f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

#[derive(Debug, Clone, Deserialize)]
pub struct CoherentTerm {
    pub p: f64,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
pub struct SpinCoherentTerm {
    pub p: f64,
    /// Rotation vector `c` of `exp(-i c·J)|+j⟩_z`.
    pub c: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
pub struct ProductSpinCoherentTerm {
    pub p: f64,
    pub c1: [f64; 3],
    pub c2: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// A state in the `state-factory` output format.
    Inline { state: StateJson },
    Random { dim: usize, rank: Option<usize>, seed: u64 },
    MaximallyMixed { dim: usize },
    Basis { dim: usize, index: usize },
    SpinCoherent { j: f64, c: [f64; 3] },
    SpinSqueezed { j: f64, lambda: f64 },
    PlanarSqueezed { j: f64 },
    Singlet { j: f64 },
    ProductCoherent { alpha: [f64; 2], beta: [f64; 2], cutoff: Option<usize> },
    Tmsv { r: f64, cutoff: Option<usize> },
    CoherentMixture { terms: Vec<CoherentTerm>, cutoff: Option<usize> },
    SpinCoherentMixture { j: f64, terms: Vec<SpinCoherentTerm> },
    ProductSpinCoherentMixture { j1: f64, j2: f64, terms: Vec<ProductSpinCoherentTerm> },
}

/// What the state lives on, as far as the spec tells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Structure {
    Spin { j: f64 },
    TwoSpin { j1: f64, j2: f64 },
    TwoMode { cutoff: usize },
    Generic,
}

#[derive(Debug, Clone)]
pub struct BuiltState {
    pub rho: DensityMatrix,
    pub pure: Option<PureState>,
    pub structure: Structure,
}

impl BuiltState {
    fn pure(psi: PureState, structure: Structure) -> Self {
        Self {
            rho: DensityMatrix::from_pure(&psi),
            pure: Some(psi),
            structure,
        }
    }

    fn mixed(rho: DensityMatrix, structure: Structure) -> Self {
        Self {
            rho,
            pure: None,
            structure,
        }
    }

    pub fn to_json(&self) -> StateJson {
        match &self.pure {
            Some(psi) => StateJson::from(psi),
            None => StateJson::from(&self.rho),
        }
    }
}

/// Reads inline JSON, or the file named after a leading `@`.
pub fn read_spec_text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => Ok(arg.to_string()),
    }
}

pub fn parse_state(arg: &str) -> Result<StateSpec> {
    serde_json::from_str(&read_spec_text(arg)?).map_err(|e| CliError::Spec(format!("state spec: {e}")))
}

pub fn parse_op(arg: &str) -> Result<OpSpec> {
    serde_json::from_str(&read_spec_text(arg)?).map_err(|e| CliError::Spec(format!("operator spec: {e}")))
}

impl StateSpec {
    /// `default_cutoff` applies to two-mode specs that do not name their own.
    pub fn build(&self, default_cutoff: usize) -> Result<BuiltState> {
        let cut = |c: &Option<usize>| c.unwrap_or(default_cutoff);
        Ok(match self {
            StateSpec::Inline { state } => match state.kind {
                StateKind::Pure => BuiltState::pure(state.to_pure()?, Structure::Generic),
                StateKind::Mixed => BuiltState::mixed(state.to_density_matrix()?, Structure::Generic),
            },
            StateSpec::Random { dim, rank, seed } => {
                let cfg = RandomStateConfig::new(*dim, rank.unwrap_or(*dim), *seed)?;
                BuiltState::mixed(random_density_matrix(&cfg)?, Structure::Generic)
            }
            StateSpec::MaximallyMixed { dim } => {
                if *dim == 0 {
                    return Err(CliError::Spec("dimension must be positive".into()));
                }
                BuiltState::mixed(DensityMatrix::maximally_mixed(*dim), Structure::Generic)
            }
            StateSpec::Basis { dim, index } => {
                if index >= dim {
                    return Err(CliError::Spec(format!("basis index {index} outside dimension {dim}")));
                }
                BuiltState::pure(PureState::basis(*dim, *index), Structure::Generic)
            }
            StateSpec::SpinCoherent { j, c } => {
                let spin = make_spin_algebra(*j)?;
                BuiltState::pure(spin_coherent_state(&spin, *c), Structure::Spin { j: *j })
            }
            StateSpec::SpinSqueezed { j, lambda } => {
                let spin = make_spin_algebra(*j)?;
                BuiltState::pure(spin_squeezed_state(&spin, *lambda)?, Structure::Spin { j: *j })
            }
            StateSpec::PlanarSqueezed { j } => {
                let spin = make_spin_algebra(*j)?;
                BuiltState::pure(planar_squeezed_state(&spin, PLANAR_TOL)?.state, Structure::Spin { j: *j })
            }
            StateSpec::Singlet { j } => {
                let spin = make_spin_algebra(*j)?;
                BuiltState::pure(singlet_state(&spin), Structure::TwoSpin { j1: *j, j2: *j })
            }
            StateSpec::ProductCoherent { alpha, beta, cutoff } => {
                let c = cut(cutoff);
                let psi = coherent_state(complex(*alpha), c)?.tensor(&coherent_state(complex(*beta), c)?);
                BuiltState::pure(psi, Structure::TwoMode { cutoff: c })
            }
            StateSpec::Tmsv { r, cutoff } => {
                let c = cut(cutoff);
                BuiltState::pure(two_mode_squeezed_vacuum(*r, c)?, Structure::TwoMode { cutoff: c })
            }
            StateSpec::CoherentMixture { terms, cutoff } => {
                let c = cut(cutoff);
                let t: Vec<_> = terms.iter().map(|t| (t.p, complex(t.alpha), complex(t.beta))).collect();
                BuiltState::mixed(coherent_mixture(&t, c)?, Structure::TwoMode { cutoff: c })
            }
            StateSpec::SpinCoherentMixture { j, terms } => {
                let spin = make_spin_algebra(*j)?;
                let t: Vec<_> = terms.iter().map(|t| (t.p, t.c)).collect();
                BuiltState::mixed(spin_coherent_mixture(&spin, &t)?, Structure::Spin { j: *j })
            }
            StateSpec::ProductSpinCoherentMixture { j1, j2, terms } => {
                let (a, b) = (make_spin_algebra(*j1)?, make_spin_algebra(*j2)?);
                let t: Vec<_> = terms.iter().map(|t| (t.p, t.c1, t.c2)).collect();
                BuiltState::mixed(
                    product_spin_coherent_mixture(&a, &b, &t)?,
                    Structure::TwoSpin { j1: *j1, j2: *j2 },
                )
            }
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OpSpec {
    /// Row-major Hermitian matrix.
    Matrix { matrix: MatrixJson },
    /// `n·J` for spin `j`.
    Spin { j: f64, n: [f64; 3] },
    /// `n·σ` on a qubit.
    Pauli { n: [f64; 3] },
    /// `x` or `p` of one mode with the given cutoff.
    Quadrature { which: Quadrature, cutoff: usize },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    X,
    P,
}

impl OpSpec {
    pub fn build(&self) -> Result<HermitianOperator> {
        Ok(match self {
            OpSpec::Matrix { matrix } => matrix.to_operator()?,
            OpSpec::Spin { j, n } => make_spin_algebra(*j)?.dot(*n),
            OpSpec::Pauli { n } => {
                let [x, y, z] = [HermitianOperator::pauli_x(), HermitianOperator::pauli_y(), HermitianOperator::pauli_z()];
                &(&x.scaled(n[0]) + &y.scaled(n[1])) + &z.scaled(n[2])
            }
            OpSpec::Quadrature { which, cutoff } => {
                let fock = make_fock_algebra(*cutoff)?;
                match which {
                    Quadrature::X => fock.x,
                    Quadrature::P => fock.p,
                }
            }
        })
    }
}
