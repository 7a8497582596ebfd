//! # hybrid-mmd
//!
//! Kernel two-sample tests built on the MMD-FUSE statistic, with kernel pools
//! that mix classical kernels (Gaussian, Laplace) and classically simulated
//! quantum fidelity kernels.
//!
//! The pieces, bottom-up:
//!
//! | module | what it does |
//! |--------|--------------|
//! | [`kernels`] | kernel evaluation, statevector feature maps, Gram matrices, bandwidth/scaling grids |
//! | [`statistics`] | unbiased MMD², the FUSE-1 soft maximum over a weighted pool, finite-set quantiles |
//! | [`testing`] | exact permutation test with a seeded permutation plan |
//! | [`data`] | synthetic generators, CSV ingestion, subsampling, null mixtures |
//! | [`experiments`] | pool construction, power / true-negative curves, hybrid and λ sweeps |
//! | [`cli`] | the `hybrid-mmd` command line |
//!
//! ## Quick start
//!
//! ```rust
//! use hybrid_mmd::data::{generate, GeneratorFamily, GeneratorSpec};
//! use hybrid_mmd::experiments::{build_pool, PoolSpec};
//! use hybrid_mmd::statistics::PooledGrams;
//! use hybrid_mmd::testing::{permutation_test, TestConfig};
//! use hybrid_mmd::data::Dataset;
//!
//! let (x, y) = generate(&GeneratorSpec {
//!     family: GeneratorFamily::GaussianShift,
//!     dims: 2,
//!     shift: 3.0,
//!     size: 20,
//!     seed: 1,
//! })?;
//! let pool = build_pool(&PoolSpec::hybrid(), &Dataset::concat(&x, &y)?)?;
//! let pooled = PooledGrams::build(&pool, &x, &y)?;
//! let result = permutation_test(&pooled, &TestConfig { permutations: 200, ..Default::default() })?;
//! assert!(result.reject);
//! # Ok::<(), hybrid_mmd::Error>(())
//! ```
//!
//! Runnable walkthroughs for each capability live in `examples/`
//! (`cargo run --release --example <name>`).

pub mod cli;
pub mod data;
mod error;
pub mod experiments;
pub mod kernels;
pub mod rng;
pub mod statistics;
pub mod testing;

pub use error::{Error, Result};
