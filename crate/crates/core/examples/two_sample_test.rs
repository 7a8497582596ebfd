//! One permutation test with the default hybrid pool on shifted Gaussians.

use hybrid_mmd::data::{generate, Dataset, GeneratorFamily, GeneratorSpec};
use hybrid_mmd::experiments::{build_pool, PoolSpec};
use hybrid_mmd::statistics::PooledGrams;
use hybrid_mmd::testing::{permutation_test, TestConfig};

fn main() -> hybrid_mmd::Result<()> {
    for shift in [0.0, 0.5, 1.0] {
        let (x, y) = generate(&GeneratorSpec {
            family: GeneratorFamily::GaussianShift,
            dims: 2,
            shift,
            size: 40,
            seed: 3,
        })?;
        let pool = build_pool(&PoolSpec::hybrid(), &Dataset::concat(&x, &y)?)?;
        let pooled = PooledGrams::build(&pool, &x, &y)?;
        let result = permutation_test(&pooled, &TestConfig { permutations: 1000, ..Default::default() })?;
        println!(
            "d = {shift}: statistic {:.5}, threshold {:.5}, p = {:.4}, reject = {}",
            result.statistic, result.threshold, result.p_value, result.reject
        );
    }
    Ok(())
}
