//! Effect of the fusion temperature λ on power. Small λ averages the kernels,
//! large λ picks the best one.

use hybrid_mmd::data::GeneratorFamily;
use hybrid_mmd::experiments::{lambda_sweep, PoolSpec, PowerConfig, Source};
use hybrid_mmd::statistics::{fuse_values, FuseConfig};

fn main() -> hybrid_mmd::Result<()> {
    let mmds = [0.02, 0.10, -0.01];
    let weights = [0.5, 0.25, 0.25];
    for lambda in [0.01, 1.0, 100.0, 1e6] {
        println!("lambda = {lambda:<8} FUSE = {:.6}", fuse_values(&mmds, &weights, &FuseConfig::new(lambda))?);
    }

    let cfg = PowerConfig {
        sample_sizes: vec![20, 40],
        repetitions: 40,
        permutations: 300,
        ..PowerConfig::new(
            PoolSpec::hybrid(),
            Source::Synthetic {
                family: GeneratorFamily::GaussianShift,
                dims: 2,
                shift: 0.5,
            },
        )
    };
    for (lambda, curve) in lambda_sweep(&cfg, &[0.1, 1.0, 10.0, 100.0])? {
        println!("lambda = {lambda:<6} power {:?}", curve.estimates());
    }
    Ok(())
}
