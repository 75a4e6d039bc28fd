use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::quantum::{DensityMatrix, PureState, QuantumState, StateJson};

/// A pure or mixed member of a decomposition.
#[derive(Debug, Clone)]
pub enum Component {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl Component {
    pub fn density_matrix(&self) -> CMatrix {
        match self {
            Component::Pure(psi) => {
                let v = psi.amplitudes();
                v * v.adjoint()
            }
            Component::Mixed(rho) => rho.matrix().clone(),
        }
    }

    pub fn is_pure(&self) -> bool {
        match self {
            Component::Pure(_) => true,
            Component::Mixed(rho) => rho.is_pure(),
        }
    }

    pub fn to_json(&self) -> StateJson {
        match self {
            Component::Pure(psi) => StateJson::from(psi),
            Component::Mixed(rho) => StateJson::from(rho),
        }
    }
}

impl QuantumState for Component {
    fn dim(&self) -> usize {
        match self {
            Component::Pure(psi) => psi.dim(),
            Component::Mixed(rho) => rho.dim(),
        }
    }

    fn support(&self) -> Vec<(f64, CVector)> {
        match self {
            Component::Pure(psi) => psi.support(),
            Component::Mixed(rho) => rho.support(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightedComponent {
    pub weight: f64,
    pub state: Component,
}

impl Serialize for WeightedComponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("WeightedComponent", 2)?;
        s.serialize_field("p", &self.weight)?;
        s.serialize_field("state", &self.state.to_json())?;
        s.end()
    }
}

/// Weighted components whose mixture is a target state.
#[derive(Debug, Clone, serde::Serialize)]
#[serde(transparent)]
pub struct Decomposition {
    components: Vec<WeightedComponent>,
}

impl Decomposition {
    /// Weights must be positive and sum to one within 1e-10; dimensions must agree.
    pub fn new(components: Vec<WeightedComponent>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty decomposition".into()))?;
        let dim = first.state.dim();
        let mut total = 0.0;
        for c in &components {
            ensure_dim(dim, c.state.dim())?;
            if !(c.weight > 0.0 && c.weight <= 1.0 + 1e-10) {
                return Err(Error::InvalidArgument(format!("weight {} outside (0, 1]", c.weight)));
            }
            total += c.weight;
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidTrace(total));
        }
        Ok(Self { components })
    }

    /// The single-component decomposition `{1, ρ}`.
    pub fn trivial(rho: &DensityMatrix) -> Self {
        Self {
            components: vec![WeightedComponent {
                weight: 1.0,
                state: Component::Mixed(rho.clone()),
            }],
        }
    }

    pub fn components(&self) -> &[WeightedComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components[0].state.dim()
    }

    /// `Σ_k p_k ρ_k`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        self.components
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, c| acc + c.state.density_matrix() * linalg::r(c.weight))
    }

    /// Largest entry deviation between the mixture and `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        linalg::max_abs_entry(&(self.reconstruct() - rho.matrix()))
    }

    /// `Σ_k p_k f(ρ_k)`.
    pub fn average<F: Fn(&Component) -> f64>(&self, f: F) -> f64 {
        self.components.iter().map(|c| c.weight * f(&c.state)).sum()
    }
}
