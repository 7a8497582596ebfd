//! Data-driven bandwidths and the resulting pool weights.

use hybrid_mmd::data::{generate, Dataset, GeneratorFamily, GeneratorSpec};
use hybrid_mmd::experiments::{build_pool, PoolSpec};
use hybrid_mmd::kernels::{bandwidth_grid, scaling_grid};

fn main() -> hybrid_mmd::Result<()> {
    let (x, y) = generate(&GeneratorSpec {
        family: GeneratorFamily::GaussianShift,
        dims: 3,
        shift: 1.0,
        size: 50,
        seed: 1,
    })?;
    let z = Dataset::concat(&x, &y)?;
    println!("bandwidths: {:.4?}", bandwidth_grid(&z, 10, 0.05, 0.95)?);
    println!("scalings:   {:?}", scaling_grid(1e-3, 1.0, 5)?);

    let pool = build_pool(&PoolSpec::hybrid().with_hybrid_p(0.2), &z)?;
    for (spec, w) in pool.specs().iter().zip(pool.weights()) {
        println!("{:<40} weight {w:.4}", spec.label());
    }
    Ok(())
}
