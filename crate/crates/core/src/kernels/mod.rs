//! Classical and simulated quantum kernels.
//!
//! Every kernel here maps into `[0, 1]` and has a unit diagonal:
//!
//! | family | value |
//! |--------|-------|
//! | Gaussian | `exp(-‖x − x'‖² / (2σ²))` |
//! | Laplace | `exp(-‖x − x'‖₁ / σ)` |
//! | QuantumProduct | `|⟨ψ(γx)|ψ(γx')⟩|²` with one `R_y`-rotated `|+⟩` qubit per feature |
//! | QuantumEntangled | same fidelity, with `depth` layers of a CZ ring followed by `R_y` rotations |
//!
//! Quantum kernels are evaluated on an exact statevector simulator, see [`quantum`].

mod grid;
mod gram;
pub mod quantum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use grid::{bandwidth_grid, geometric_grid, scaling_grid, DEFAULT_Q_HI, DEFAULT_Q_LO};
pub use gram::{gram, GramMatrix};
pub use quantum::{
    encode_entangled, encode_product, fidelity, QuantumState, DEFAULT_QUBIT_CAP,
};

/// Declarative description of a single kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum KernelSpec {
    Gaussian { bandwidth: f64 },
    Laplace { bandwidth: f64 },
    QuantumProduct { scaling: f64 },
    QuantumEntangled { scaling: f64, depth: usize },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Gaussian { bandwidth } | KernelSpec::Laplace { bandwidth } => {
                if !(bandwidth > 0.0 && bandwidth.is_finite()) {
                    return Err(Error::validation(format!(
                        "bandwidth must be positive and finite, got {bandwidth}"
                    )));
                }
            }
            KernelSpec::QuantumProduct { scaling } => check_scaling(scaling)?,
            KernelSpec::QuantumEntangled { scaling, depth } => {
                check_scaling(scaling)?;
                if depth == 0 {
                    return Err(Error::validation("entangled encoding needs depth >= 1"));
                }
            }
        }
        Ok(())
    }

    pub fn is_quantum(&self) -> bool {
        matches!(
            self,
            KernelSpec::QuantumProduct { .. } | KernelSpec::QuantumEntangled { .. }
        )
    }

    /// Short human-readable label such as `gaussian(σ=0.5)`.
    pub fn label(&self) -> String {
        match *self {
            KernelSpec::Gaussian { bandwidth } => format!("gaussian(σ={bandwidth:.4})"),
            KernelSpec::Laplace { bandwidth } => format!("laplace(σ={bandwidth:.4})"),
            KernelSpec::QuantumProduct { scaling } => format!("q-product(γ={scaling:.4})"),
            KernelSpec::QuantumEntangled { scaling, depth } => {
                format!("q-entangled(γ={scaling:.4}, L={depth})")
            }
        }
    }

    /// Encodes `x` into the statevector this quantum kernel compares.
    /// Returns `None` for classical families.
    pub(crate) fn encode(&self, x: &[f64]) -> Option<Result<QuantumState>> {
        match *self {
            KernelSpec::QuantumProduct { scaling } => Some(encode_product(x, scaling)),
            KernelSpec::QuantumEntangled { scaling, depth } => {
                Some(encode_entangled(x, scaling, depth))
            }
            _ => None,
        }
    }
}

fn check_scaling(scaling: f64) -> Result<()> {
    if scaling > 0.0 && scaling.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "scaling must be positive and finite, got {scaling}"
        )))
    }
}

pub(crate) fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InputShape(format!(
            "feature vectors of dimension {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::InputShape("feature vectors are empty".into()));
    }
    check_finite(x)?;
    check_finite(y)
}

pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(j) => Err(Error::validation(format!(
            "non-finite feature value {} at coordinate {j}",
            x[j]
        ))),
        None => Ok(()),
    }
}

#[inline]
pub(crate) fn squared_euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[inline]
fn manhattan(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
}

/// Classical kernel value, assuming validated inputs.
#[inline]
pub(crate) fn classical_value(spec: &KernelSpec, x: &[f64], y: &[f64]) -> f64 {
    match *spec {
        KernelSpec::Gaussian { bandwidth } => {
            (-squared_euclidean(x, y) / (2.0 * bandwidth * bandwidth)).exp()
        }
        KernelSpec::Laplace { bandwidth } => (-manhattan(x, y) / bandwidth).exp(),
        _ => unreachable!("classical_value called with a quantum kernel"),
    }
}

/// Evaluates `spec` on a pair of feature vectors.
pub fn eval_kernel(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    spec.validate()?;
    check_pair(x, y)?;
    match spec.encode(x) {
        None => Ok(classical_value(spec, x, y)),
        Some(a) => {
            let b = spec.encode(y).expect("quantum spec encodes both points")?;
            fidelity(&a?, &b)
        }
    }
}
