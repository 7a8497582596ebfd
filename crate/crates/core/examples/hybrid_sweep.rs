//! Power as the prior mass moves from the classical kernels (p = 0) to the
//! quantum kernels (p = 1). All weights see the same data and permutations.

use hybrid_mmd::data::GeneratorFamily;
use hybrid_mmd::experiments::{hybrid_sweep, PoolSpec, PowerConfig, Source};

fn main() -> hybrid_mmd::Result<()> {
    let cfg = PowerConfig {
        sample_sizes: vec![10, 30, 50],
        repetitions: 40,
        permutations: 300,
        ..PowerConfig::new(
            PoolSpec::hybrid(),
            Source::Synthetic {
                family: GeneratorFamily::LogNormalShift,
                dims: 2,
                shift: 0.5,
            },
        )
    };
    for (p, curve) in hybrid_sweep(&cfg, &[0.0, 0.25, 0.5, 0.75, 1.0])? {
        let cells: Vec<String> = curve.points.iter().map(|c| format!("{:.3}", c.estimate)).collect();
        println!("p = {p:<5} {}", cells.join("  "));
    }
    Ok(())
}
