//! Permutation two-sample test on the FUSE-1 statistic.
//!
//! `B` uniformly random permutations of the pooled sample are drawn i.i.d.
//! and the identity is appended as element `B + 1`. The statistic is
//! evaluated for each relabeling on the cached Grams; the observed value is
//! compared against the `1 − α` quantile of all `B + 1` values.
//!
//! The rejection rule is `τ(Z) > quantile_{1−α}`, which keeps the level at
//! `α` even when many permuted statistics tie with the observed one. It is
//! reported as a critical value `threshold` (the smallest attained statistic
//! strictly above the quantile, `+∞` if there is none), so that
//! `reject == (statistic >= threshold)`.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, purpose};
use crate::statistics::{per_kernel_mmd, quantile, FuseConfig, FuseForm, PooledGrams, StackedGrams};

/// `B` random permutations of `[0, n + m)` followed by the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationPlan {
    permutations: Vec<Vec<usize>>,
    seed: u64,
}

impl PermutationPlan {
    /// All `B + 1` permutations; the last one is the identity.
    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.permutations
    }

    /// Number of random permutations `B`.
    pub fn random_count(&self) -> usize {
        self.permutations.len() - 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

pub fn make_plan(n: usize, m: usize, permutations: usize, seed: u64) -> Result<PermutationPlan> {
    let size = n + m;
    if size < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: size,
        });
    }
    if permutations == 0 {
        return Err(Error::validation("need at least one permutation"));
    }
    let mut rng = rng::substream(seed, &[purpose::PERMUTATIONS]);
    let identity: Vec<usize> = (0..size).collect();
    let mut all = Vec::with_capacity(permutations + 1);
    for _ in 0..permutations {
        let mut p = identity.clone();
        p.shuffle(&mut rng);
        all.push(p);
    }
    all.push(identity);
    Ok(PermutationPlan {
        permutations: all,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub alpha: f64,
    /// Number of random permutations `B`.
    pub permutations: usize,
    pub lambda: f64,
    #[serde(default)]
    pub form: FuseForm,
    pub seed: u64,
    /// Keep all `B + 1` statistics in the result.
    #[serde(default)]
    pub retain_null: bool,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            alpha: 0.05,
            permutations: 2000,
            lambda: 1.0,
            form: FuseForm::LogSumExp,
            seed: 0,
            retain_null: false,
        }
    }
}

impl TestConfig {
    pub fn fuse(&self) -> FuseConfig {
        FuseConfig {
            lambda: self.lambda,
            form: self.form,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::validation(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.permutations == 0 {
            return Err(Error::validation("need at least one permutation"));
        }
        self.fuse().validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    /// Observed statistic `τ(Z)`.
    pub statistic: f64,
    /// Critical value: the test rejects iff `statistic >= threshold`.
    pub threshold: f64,
    /// `1 − α` quantile of the `B + 1` statistics.
    pub quantile: f64,
    pub p_value: f64,
    pub reject: bool,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub permutations: usize,
    /// Unbiased MMD² of every kernel on the observed split.
    pub per_kernel_mmd: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub null_stats: Option<Vec<f64>>,
}

/// The stored decision.
pub fn reject_decision(result: &TestResult) -> bool {
    debug_assert_eq!(result.reject, result.statistic >= result.threshold);
    result.reject
}

pub fn permutation_test(pooled: &PooledGrams, cfg: &TestConfig) -> Result<TestResult> {
    cfg.validate()?;
    let plan = make_plan(pooled.n(), pooled.m(), cfg.permutations, cfg.seed)?;
    let stats = permuted_statistics(pooled, &plan, &cfg.fuse())?;
    let b = cfg.permutations;
    let statistic = stats[b];

    let level = quantile(&stats, 1.0 - cfg.alpha)?;
    let threshold = stats
        .iter()
        .copied()
        .filter(|&s| s > level)
        .fold(f64::INFINITY, f64::min);
    let exceed = stats[..b].iter().filter(|&&s| s >= statistic).count();
    let p_value = (1 + exceed) as f64 / (b + 1) as f64;

    Ok(TestResult {
        statistic,
        threshold,
        quantile: level,
        p_value,
        reject: statistic >= threshold,
        n: pooled.n(),
        m: pooled.m(),
        alpha: cfg.alpha,
        permutations: b,
        per_kernel_mmd: per_kernel_mmd(pooled, &pooled.idx_x(), &pooled.idx_y())?,
        null_stats: cfg.retain_null.then_some(stats),
    })
}

/// Statistic for every permutation of the plan, in plan order.
pub fn permuted_statistics(
    pooled: &PooledGrams,
    plan: &PermutationPlan,
    fuse: &FuseConfig,
) -> Result<Vec<f64>> {
    fuse.validate()?;
    if plan.permutations[0].len() != pooled.size() {
        return Err(Error::InputShape(format!(
            "plan permutes {} points but the sample has {}",
            plan.permutations[0].len(),
            pooled.size()
        )));
    }
    let stacked = StackedGrams::new(pooled);
    if stacked.kernels() == 0 {
        return Err(Error::validation("every prior weight is zero"));
    }
    let (xr, yr) = (pooled.x_range(), pooled.y_range());
    Ok(plan
        .permutations
        .par_iter()
        .map_init(
            || (stacked.scratch(), Vec::new(), Vec::new()),
            |(scratch, ix, iy), sigma| {
                ix.clear();
                ix.extend(xr.clone().map(|i| sigma[i]));
                iy.clear();
                iy.extend(yr.clone().map(|i| sigma[i]));
                stacked.fuse(ix, iy, fuse, scratch)
            },
        )
        .collect())
}
