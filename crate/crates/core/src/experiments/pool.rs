use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernels::{bandwidth_grid, scaling_grid, KernelSpec, DEFAULT_Q_HI, DEFAULT_Q_LO};
use crate::statistics::KernelPool;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalFamily {
    Gaussian,
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantumFamily {
    Product,
    Entangled,
}

/// Explicit scaling values or a log-uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalings {
    List(Vec<f64>),
    Grid { lo: f64, hi: f64, count: usize },
}

impl Scalings {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Scalings::List(v) => {
                if v.is_empty() {
                    return Err(Error::Config("empty scaling list".into()));
                }
                Ok(v.clone())
            }
            Scalings::Grid { lo, hi, count } => scaling_grid(*lo, *hi, *count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalPool {
    pub families: Vec<ClassicalFamily>,
    /// Bandwidths per family.
    pub bandwidth_count: usize,
    pub q_lo: f64,
    pub q_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumPool {
    pub family: QuantumFamily,
    pub scalings: Scalings,
    /// Layers of the entangled map; ignored by the product map.
    pub depth: usize,
}

/// Recipe for a kernel pool; concrete bandwidths depend on the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolSpec {
    pub classical: ClassicalPool,
    pub quantum: Option<QuantumPool>,
    /// Total prior mass on the quantum kernels: 0 is purely classical, 1 purely quantum.
    pub hybrid_p: f64,
}

impl PoolSpec {
    /// Gaussian×10 + Laplace×10 + product-quantum×5 (γ from 1e-3 to 1), p = 0.5.
    pub fn hybrid() -> Self {
        PoolSpec {
            classical: ClassicalPool {
                families: vec![ClassicalFamily::Gaussian, ClassicalFamily::Laplace],
                bandwidth_count: 10,
                q_lo: DEFAULT_Q_LO,
                q_hi: DEFAULT_Q_HI,
            },
            quantum: Some(QuantumPool {
                family: QuantumFamily::Product,
                scalings: Scalings::Grid {
                    lo: 1e-3,
                    hi: 1.0,
                    count: 5,
                },
                depth: 1,
            }),
            hybrid_p: 0.5,
        }
    }

    pub fn classical(families: Vec<ClassicalFamily>, bandwidth_count: usize) -> Self {
        PoolSpec {
            classical: ClassicalPool {
                families,
                bandwidth_count,
                q_lo: DEFAULT_Q_LO,
                q_hi: DEFAULT_Q_HI,
            },
            quantum: None,
            hybrid_p: 0.0,
        }
    }

    pub fn quantum(quantum: QuantumPool) -> Self {
        PoolSpec {
            classical: ClassicalPool {
                families: Vec::new(),
                bandwidth_count: 0,
                q_lo: DEFAULT_Q_LO,
                q_hi: DEFAULT_Q_HI,
            },
            quantum: Some(quantum),
            hybrid_p: 1.0,
        }
    }

    pub fn with_hybrid_p(mut self, p: f64) -> Self {
        self.hybrid_p = p;
        self
    }

    fn classical_size(&self) -> usize {
        self.classical.families.len() * self.classical.bandwidth_count
    }

    fn has_quantum(&self) -> bool {
        self.quantum.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.hybrid_p;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("hybrid weight {p} outside [0, 1]")));
        }
        let has_c = self.classical_size() > 0;
        let has_q = self.has_quantum();
        if !has_c && !has_q {
            return Err(Error::Config("kernel pool has no kernels".into()));
        }
        if p < 1.0 && !has_c {
            return Err(Error::Config(format!(
                "hybrid weight {p} puts mass on classical kernels but none are configured"
            )));
        }
        if p > 0.0 && !has_q {
            return Err(Error::Config(format!(
                "hybrid weight {p} puts mass on quantum kernels but none are configured"
            )));
        }
        if let Some(q) = &self.quantum {
            if q.family == QuantumFamily::Entangled && q.depth == 0 {
                return Err(Error::Config("entangled map needs depth >= 1".into()));
            }
        }
        Ok(())
    }
}

/// Materializes `spec` against the pooled sample `z_ref`.
///
/// Classical kernels come first (family by family, ascending bandwidth), then
/// quantum kernels in scaling order. Mass `1 − p` is spread uniformly over
/// the classical kernels and mass `p` over the quantum ones.
pub fn build_pool(spec: &PoolSpec, z_ref: &Dataset) -> Result<KernelPool> {
    spec.validate()?;
    let mut specs = Vec::new();
    if spec.classical_size() > 0 {
        let c = &spec.classical;
        let bandwidths = bandwidth_grid(z_ref, c.bandwidth_count, c.q_lo, c.q_hi)?;
        for family in &c.families {
            for &bandwidth in &bandwidths {
                specs.push(match family {
                    ClassicalFamily::Gaussian => KernelSpec::Gaussian { bandwidth },
                    ClassicalFamily::Laplace => KernelSpec::Laplace { bandwidth },
                });
            }
        }
    }
    let n_classical = specs.len();
    if let Some(q) = &spec.quantum {
        for scaling in q.scalings.values()? {
            specs.push(match q.family {
                QuantumFamily::Product => KernelSpec::QuantumProduct { scaling },
                QuantumFamily::Entangled => KernelSpec::QuantumEntangled {
                    scaling,
                    depth: q.depth,
                },
            });
        }
    }
    let n_quantum = specs.len() - n_classical;
    let p = spec.hybrid_p;
    let mut weights = Vec::with_capacity(specs.len());
    if n_classical > 0 {
        weights.extend(std::iter::repeat_n((1.0 - p) / n_classical as f64, n_classical));
    }
    if n_quantum > 0 {
        weights.extend(std::iter::repeat_n(p / n_quantum as f64, n_quantum));
    }
    KernelPool::new(specs, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Dataset {
        Dataset::from_rows(
            "z",
            (0..12).map(|i| vec![(i as f64).sin(), 0.3 * i as f64]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn hybrid_pool_has_25_kernels() {
        let pool = build_pool(&PoolSpec::hybrid(), &reference()).unwrap();
        assert_eq!(pool.len(), 25);
        let w = pool.weights();
        assert!(w[..20].iter().all(|&v| (v - 0.025).abs() < 1e-15));
        assert!(w[20..].iter().all(|&v| (v - 0.1).abs() < 1e-15));
    }

    #[test]
    fn endpoint_weights() {
        let z = reference();
        let p0 = build_pool(&PoolSpec::hybrid().with_hybrid_p(0.0), &z).unwrap();
        assert!(p0.weights()[20..].iter().all(|&w| w == 0.0));
        let p1 = build_pool(&PoolSpec::hybrid().with_hybrid_p(1.0), &z).unwrap();
        assert!(p1.weights()[..20].iter().all(|&w| w == 0.0));
    }

    #[test]
    fn invalid_specs() {
        let classical = PoolSpec::classical(vec![ClassicalFamily::Gaussian], 4);
        assert!(classical.clone().with_hybrid_p(0.5).validate().is_err());
        assert!(PoolSpec::hybrid().with_hybrid_p(1.5).validate().is_err());
        assert!(PoolSpec::classical(vec![], 4).validate().is_err());
        let q = PoolSpec::quantum(QuantumPool {
            family: QuantumFamily::Product,
            scalings: Scalings::List(vec![0.1]),
            depth: 1,
        });
        assert!(q.clone().with_hybrid_p(0.0).validate().is_err());
        assert!(q.validate().is_ok());
    }

    #[test]
    fn scalings_serde_forms() {
        #[derive(Deserialize)]
        struct W {
            s: Scalings,
        }
        let grid: W = toml::from_str("s = { lo = 0.001, hi = 1.0, count = 4 }").unwrap();
        assert_eq!(grid.s.values().unwrap().len(), 4);
        let list: W = toml::from_str("s = [0.1, 0.2]").unwrap();
        assert_eq!(list.s.values().unwrap(), vec![0.1, 0.2]);
    }
}
