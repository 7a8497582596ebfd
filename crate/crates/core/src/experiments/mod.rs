//! Monte-Carlo power and type-I studies over kernel pools.
//!
//! Every trial is seeded from `(master seed, sample size, repetition)` only,
//! so two runs that differ in one factor (hybrid weight, λ) see exactly the
//! same data and the same permutations.

mod pool;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{self, Dataset, GeneratorFamily, GeneratorSpec};
use crate::error::{Error, Result};
use crate::rng::{self, purpose};
use crate::statistics::{FuseForm, PooledGrams};
use crate::testing::{permutation_test, TestConfig};

pub use pool::{build_pool, ClassicalFamily, ClassicalPool, PoolSpec, QuantumFamily, QuantumPool, Scalings};

/// Where each trial's two groups come from.
#[derive(Debug, Clone)]
pub enum Source {
    /// Fresh draws of `n` rows per group for every trial.
    Synthetic {
        family: GeneratorFamily,
        dims: usize,
        shift: f64,
    },
    /// Subsamples of `n` rows per group from fixed datasets.
    Groups { x: Dataset, y: Dataset },
}

#[derive(Debug, Clone)]
pub struct PowerConfig {
    pub sample_sizes: Vec<usize>,
    pub repetitions: usize,
    pub alpha: f64,
    pub permutations: usize,
    pub lambda: f64,
    pub form: FuseForm,
    pub pool: PoolSpec,
    pub source: Source,
    pub seed: u64,
}

impl PowerConfig {
    /// Sizes 10, 20, …, 90, 50 repetitions, α = 0.05, B = 2000, λ = 1.
    pub fn new(pool: PoolSpec, source: Source) -> Self {
        PowerConfig {
            sample_sizes: (1..=9).map(|k| 10 * k).collect(),
            repetitions: 50,
            alpha: 0.05,
            permutations: 2000,
            lambda: 1.0,
            form: FuseForm::LogSumExp,
            pool,
            source,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::Config("no sample sizes given".into()));
        }
        if self.sample_sizes[0] < 2 || self.sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "sample sizes must be at least 2 and strictly ascending".into(),
            ));
        }
        self.pool.validate()?;
        self.test_config(0).validate()?;
        match &self.source {
            Source::Synthetic { dims, shift, .. } => {
                if *dims == 0 || !shift.is_finite() {
                    return Err(Error::Config("synthetic source needs dims >= 1 and a finite shift".into()));
                }
            }
            Source::Groups { x, y } => {
                let largest = *self.sample_sizes.last().expect("non-empty");
                let available = x.len().min(y.len());
                if largest > available {
                    return Err(Error::InsufficientSamples {
                        needed: largest,
                        got: available,
                    });
                }
            }
        }
        Ok(())
    }

    fn test_config(&self, seed: u64) -> TestConfig {
        TestConfig {
            alpha: self.alpha,
            permutations: self.permutations,
            lambda: self.lambda,
            form: self.form,
            seed,
            retain_null: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// Rejection rate when the groups differ.
    Power,
    /// Non-rejection rate on null mixtures.
    TrueNegativeRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub sample_size: usize,
    pub estimate: f64,
    /// `sqrt(p̂ (1 − p̂) / repetitions)`.
    pub stderr: f64,
    pub repetitions: usize,
}

impl CurvePoint {
    fn from_count(sample_size: usize, hits: usize, repetitions: usize) -> Self {
        let p = hits as f64 / repetitions as f64;
        CurvePoint {
            sample_size,
            estimate: p,
            stderr: (p * (1.0 - p) / repetitions as f64).sqrt(),
            repetitions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
    pub alpha: f64,
    pub permutations: usize,
    pub lambda: f64,
    pub hybrid_p: f64,
    pub seed: u64,
}

impl PowerCurve {
    pub fn estimates(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.estimate).collect()
    }

    pub fn point(&self, sample_size: usize) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.sample_size == sample_size)
    }
}

fn trial_groups(source: &Source, n: usize, seed: u64, rep: u64, null: bool) -> Result<(Dataset, Dataset)> {
    let tags = [n as u64, rep];
    let mix_seed = rng::derive_seed(seed, &[purpose::MIXTURE, tags[0], tags[1]]);
    match source {
        Source::Synthetic { family, dims, shift } => {
            let spec = GeneratorSpec {
                family: *family,
                dims: *dims,
                shift: *shift,
                size: n,
                seed: rng::derive_seed(seed, &[purpose::GENERATE, tags[0], tags[1]]),
            };
            let (x, y) = data::generate(&spec)?;
            if null {
                data::null_mixture(&x, &y, mix_seed)
            } else {
                Ok((x, y))
            }
        }
        Source::Groups { x, y } => {
            let sub_seed = rng::derive_seed(seed, &[purpose::SUBSAMPLE, tags[0], tags[1]]);
            if null {
                let (mx, my) = data::null_mixture(x, y, mix_seed)?;
                data::subsample(&mx, &my, n, sub_seed)
            } else {
                data::subsample(x, y, n, sub_seed)
            }
        }
    }
}

/// Runs one trial and reports whether the test rejected.
fn run_trial(cfg: &PowerConfig, n: usize, rep: u64, null: bool) -> Result<bool> {
    let (x, y) = trial_groups(&cfg.source, n, cfg.seed, rep, null)?;
    let z = Dataset::concat(&x, &y)?;
    let pool = build_pool(&cfg.pool, &z)?;
    let pooled = PooledGrams::build(&pool, &x, &y)?;
    let perm_seed = rng::derive_seed(cfg.seed, &[purpose::PERMUTATIONS, n as u64, rep]);
    Ok(permutation_test(&pooled, &cfg.test_config(perm_seed))?.reject)
}

fn rejection_counts(cfg: &PowerConfig, null: bool) -> Result<Vec<usize>> {
    cfg.validate()?;
    cfg.sample_sizes
        .iter()
        .map(|&n| {
            let outcomes = (0..cfg.repetitions as u64)
                .into_par_iter()
                .map(|rep| run_trial(cfg, n, rep, null))
                .collect::<Result<Vec<bool>>>()?;
            Ok(outcomes.into_iter().filter(|&r| r).count())
        })
        .collect()
}

fn curve(cfg: &PowerConfig, kind: CurveKind, points: Vec<CurvePoint>) -> PowerCurve {
    PowerCurve {
        kind,
        points,
        alpha: cfg.alpha,
        permutations: cfg.permutations,
        lambda: cfg.lambda,
        hybrid_p: cfg.pool.hybrid_p,
        seed: cfg.seed,
    }
}

/// Rejection rate per sample size.
pub fn estimate_power(cfg: &PowerConfig) -> Result<PowerCurve> {
    let counts = rejection_counts(cfg, false)?;
    let points = cfg
        .sample_sizes
        .iter()
        .zip(counts)
        .map(|(&n, hits)| CurvePoint::from_count(n, hits, cfg.repetitions))
        .collect();
    Ok(curve(cfg, CurveKind::Power, points))
}

/// True-negative rate per sample size, with both groups drawn from a null mixture of the source.
pub fn estimate_type1(cfg: &PowerConfig) -> Result<PowerCurve> {
    let counts = rejection_counts(cfg, true)?;
    let points = cfg
        .sample_sizes
        .iter()
        .zip(counts)
        .map(|(&n, hits)| CurvePoint::from_count(n, cfg.repetitions - hits, cfg.repetitions))
        .collect();
    Ok(curve(cfg, CurveKind::TrueNegativeRate, points))
}

/// Power curves for each hybrid weight `p`, all trials paired across `p`.
pub fn hybrid_sweep(cfg: &PowerConfig, p_grid: &[f64]) -> Result<Vec<(f64, PowerCurve)>> {
    if p_grid.is_empty() {
        return Err(Error::Config("hybrid sweep grid is empty".into()));
    }
    if let Some(p) = p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Config(format!("hybrid weight {p} outside [0, 1]")));
    }
    p_grid
        .iter()
        .map(|&p| {
            let mut c = cfg.clone();
            c.pool.hybrid_p = p;
            Ok((p, estimate_power(&c)?))
        })
        .collect()
}

/// Power curves for each temperature λ, all trials paired across λ.
pub fn lambda_sweep(cfg: &PowerConfig, lambda_grid: &[f64]) -> Result<Vec<(f64, PowerCurve)>> {
    if lambda_grid.is_empty() {
        return Err(Error::Config("lambda sweep grid is empty".into()));
    }
    if let Some(l) = lambda_grid.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::Config(format!("lambda {l} must be positive")));
    }
    lambda_grid
        .iter()
        .map(|&lambda| {
            let c = PowerConfig { lambda, ..cfg.clone() };
            Ok((lambda, estimate_power(&c)?))
        })
        .collect()
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either input is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman needs paired samples");
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}
