//! Unbiased MMD², the FUSE-1 soft maximum over a weighted kernel pool, and
//! the finite-set quantile.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernels::{gram, GramMatrix, KernelSpec};

/// Kernels with prior weights `π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelPool {
    specs: Vec<KernelSpec>,
    weights: Vec<f64>,
}

impl KernelPool {
    pub fn new(specs: Vec<KernelSpec>, weights: Vec<f64>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::validation("kernel pool is empty"));
        }
        if specs.len() != weights.len() {
            return Err(Error::InputShape(format!(
                "{} kernels but {} weights",
                specs.len(),
                weights.len()
            )));
        }
        for s in &specs {
            s.validate()?;
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::validation(format!("invalid prior weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::validation(format!(
                "prior weights sum to {total}, expected 1"
            )));
        }
        Ok(KernelPool { specs, weights })
    }

    /// Uniform prior over `specs`.
    pub fn uniform(specs: Vec<KernelSpec>) -> Result<Self> {
        let w = 1.0 / specs.len().max(1) as f64;
        let weights = vec![w; specs.len()];
        Self::new(specs, weights)
    }

    pub fn specs(&self) -> &[KernelSpec] {
        &self.specs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }
}

/// Which algebraic form of the aggregate to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuseForm {
    /// `(1/λ) log Σ π_k exp(λ v_k)`.
    #[default]
    LogSumExp,
    /// `(1/λ) log Σ π_k λ v_k`, without the exponential. The logarithm of a
    /// non-positive mean is reported as `-∞`. Only meant for side-by-side comparison.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuseConfig {
    pub lambda: f64,
    #[serde(default)]
    pub form: FuseForm,
}

impl Default for FuseConfig {
    fn default() -> Self {
        FuseConfig {
            lambda: 1.0,
            form: FuseForm::LogSumExp,
        }
    }
}

impl FuseConfig {
    pub fn new(lambda: f64) -> Self {
        FuseConfig {
            lambda,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda > 0.0 && self.lambda.is_finite() {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "lambda must be positive and finite, got {}",
                self.lambda
            )))
        }
    }
}

/// Gram matrices for every kernel of a pool over one pooled sample, plus the
/// positions of the two groups inside that sample.
#[derive(Debug, Clone)]
pub struct PooledGrams {
    grams: Vec<GramMatrix>,
    pool: KernelPool,
    x: Range<usize>,
    y: Range<usize>,
}

impl PooledGrams {
    /// Pools `x` then `y` and builds one Gram per kernel.
    pub fn build(pool: &KernelPool, x: &Dataset, y: &Dataset) -> Result<Self> {
        check_sizes(x.len(), y.len())?;
        let z = Dataset::concat(x, y)?;
        let grams = pool
            .specs()
            .iter()
            .map(|s| gram(s, &z))
            .collect::<Result<Vec<_>>>()?;
        Self::from_grams(pool.clone(), grams, x.len(), y.len())
    }

    /// Uses precomputed Grams; the first `n` positions form the first group.
    pub fn from_grams(pool: KernelPool, grams: Vec<GramMatrix>, n: usize, m: usize) -> Result<Self> {
        check_sizes(n, m)?;
        if grams.len() != pool.len() {
            return Err(Error::InputShape(format!(
                "{} Gram matrices for a pool of {}",
                grams.len(),
                pool.len()
            )));
        }
        if let Some(g) = grams.iter().find(|g| g.size() != n + m) {
            return Err(Error::InputShape(format!(
                "Gram of size {} for {} pooled points",
                g.size(),
                n + m
            )));
        }
        Ok(PooledGrams {
            grams,
            pool,
            x: 0..n,
            y: n..n + m,
        })
    }

    /// Exchanges the roles of the two groups without touching the Grams.
    pub fn swap_roles(mut self) -> Self {
        std::mem::swap(&mut self.x, &mut self.y);
        self
    }

    pub fn grams(&self) -> &[GramMatrix] {
        &self.grams
    }

    pub fn pool(&self) -> &KernelPool {
        &self.pool
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }

    pub fn size(&self) -> usize {
        self.x.len() + self.y.len()
    }

    /// Pooled positions holding the `X` group.
    pub fn x_range(&self) -> Range<usize> {
        self.x.clone()
    }

    pub fn y_range(&self) -> Range<usize> {
        self.y.clone()
    }

    pub fn idx_x(&self) -> Vec<usize> {
        self.x.clone().collect()
    }

    pub fn idx_y(&self) -> Vec<usize> {
        self.y.clone().collect()
    }
}

fn check_sizes(n: usize, m: usize) -> Result<()> {
    let smaller = n.min(m);
    if smaller < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: smaller,
        });
    }
    Ok(())
}

fn check_indices(size: usize, idx_x: &[usize], idx_y: &[usize]) -> Result<()> {
    check_sizes(idx_x.len(), idx_y.len())?;
    let mut seen = vec![false; size];
    for &i in idx_x.iter().chain(idx_y) {
        if i >= size {
            return Err(Error::validation(format!(
                "index {i} out of range for {size} pooled points"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::validation(format!(
                "index {i} appears more than once across the two groups"
            )));
        }
    }
    Ok(())
}

fn within_sum(gram: &GramMatrix, idx: &[usize]) -> f64 {
    let mut s = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        let row = gram.row(i);
        for &j in &idx[a + 1..] {
            s += row[j];
        }
    }
    2.0 * s
}

fn mmd2_unchecked(gram: &GramMatrix, idx_x: &[usize], idx_y: &[usize]) -> f64 {
    let (n, m) = (idx_x.len(), idx_y.len());
    let xx = within_sum(gram, idx_x);
    let yy = within_sum(gram, idx_y);
    // Sum the cross block in an order that does not depend on which group
    // was passed first, so exchanging the groups is exact.
    let min_x = idx_x.iter().min().copied().unwrap_or(0);
    let min_y = idx_y.iter().min().copied().unwrap_or(0);
    let (outer, inner) = if min_x < min_y {
        (idx_x, idx_y)
    } else {
        (idx_y, idx_x)
    };
    let mut cross = 0.0;
    for &i in outer {
        let row = gram.row(i);
        for &j in inner {
            cross += row[j];
        }
    }
    let within = xx / (n * (n - 1)) as f64 + yy / (m * (m - 1)) as f64;
    within - 2.0 * cross / (n * m) as f64
}

/// Unbiased estimate of MMD² between the points at `idx_x` and at `idx_y`.
///
/// Two U-statistics over distinct pairs within each group minus twice the
/// cross-group average. The value may be negative.
pub fn mmd2_unbiased(gram: &GramMatrix, idx_x: &[usize], idx_y: &[usize]) -> Result<f64> {
    check_indices(gram.size(), idx_x, idx_y)?;
    Ok(mmd2_unchecked(gram, idx_x, idx_y))
}

/// FUSE-1 aggregate of per-kernel values `mmds` under prior `weights`.
///
/// Kernels with zero weight are skipped. The log-sum-exp is shifted by its
/// largest exponent.
pub fn fuse_values(mmds: &[f64], weights: &[f64], cfg: &FuseConfig) -> Result<f64> {
    cfg.validate()?;
    if mmds.len() != weights.len() {
        return Err(Error::InputShape(format!(
            "{} values for {} weights",
            mmds.len(),
            weights.len()
        )));
    }
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::validation("every prior weight is zero"));
    }
    Ok(fuse_unchecked(mmds, weights, cfg))
}

#[inline]
pub(crate) fn fuse_unchecked(mmds: &[f64], weights: &[f64], cfg: &FuseConfig) -> f64 {
    let lambda = cfg.lambda;
    match cfg.form {
        FuseForm::LogSumExp => {
            let shift = mmds
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w > 0.0)
                .map(|(&v, _)| lambda * v)
                .fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = mmds
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w > 0.0)
                .map(|(&v, &w)| w * (lambda * v - shift).exp())
                .sum();
            (shift + sum.ln()) / lambda
        }
        FuseForm::Literal => {
            let mean: f64 = mmds
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w > 0.0)
                .map(|(&v, &w)| w * lambda * v)
                .sum();
            if mean > 0.0 {
                mean.ln() / lambda
            } else {
                f64::NEG_INFINITY
            }
        }
    }
}

/// Per-kernel unbiased MMD² for every kernel of the pool, zero-weight ones included.
pub fn per_kernel_mmd(pooled: &PooledGrams, idx_x: &[usize], idx_y: &[usize]) -> Result<Vec<f64>> {
    check_indices(pooled.size(), idx_x, idx_y)?;
    Ok(pooled
        .grams
        .iter()
        .map(|g| mmd2_unchecked(g, idx_x, idx_y))
        .collect())
}

/// FUSE-1 statistic of the split `(idx_x, idx_y)` over the pooled Grams.
pub fn fuse1(
    pooled: &PooledGrams,
    idx_x: &[usize],
    idx_y: &[usize],
    cfg: &FuseConfig,
) -> Result<f64> {
    cfg.validate()?;
    check_indices(pooled.size(), idx_x, idx_y)?;
    let weights = pooled.pool.weights();
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::validation("every prior weight is zero"));
    }
    let mmds: Vec<f64> = pooled
        .grams
        .iter()
        .zip(weights)
        .map(|(g, &w)| if w > 0.0 { mmd2_unchecked(g, idx_x, idx_y) } else { 0.0 })
        .collect();
    Ok(fuse_unchecked(&mmds, weights, cfg))
}

/// Smallest element `r` of `values` with `#{v ≤ r} / |values| ≥ q`.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::validation("quantile of an empty set"));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::validation(format!("quantile level {q} outside (0, 1]")));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::validation("quantile input contains NaN"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[quantile_rank(sorted.len(), q) - 1])
}

/// One-based rank `k` of the quantile in a sorted list of `len` values:
/// the smallest `k` with `k / len ≥ q`, using the same floating-point test as
/// the definition.
pub(crate) fn quantile_rank(len: usize, q: f64) -> usize {
    let total = len as f64;
    let mut k = ((q * total).ceil() as usize).clamp(1, len);
    while k > 1 && (k - 1) as f64 / total >= q {
        k -= 1;
    }
    while k < len && (k as f64) / total < q {
        k += 1;
    }
    k
}

/// Grams of the positively weighted kernels interleaved so that entry
/// `(i, j)` of all kernels is contiguous. Used to evaluate many splits of the
/// same pooled sample.
pub(crate) struct StackedGrams {
    data: Vec<f64>,
    size: usize,
    kernels: usize,
    weights: Vec<f64>,
    off_diagonal_total: Vec<f64>,
}

impl StackedGrams {
    pub(crate) fn new(pooled: &PooledGrams) -> Self {
        let active: Vec<(&GramMatrix, f64)> = pooled
            .grams
            .iter()
            .zip(pooled.pool.weights())
            .filter(|(_, &w)| w > 0.0)
            .map(|(g, &w)| (g, w))
            .collect();
        let size = pooled.size();
        let kernels = active.len();
        let mut data = vec![0.0; size * size * kernels];
        data.par_chunks_mut(size * kernels.max(1))
            .enumerate()
            .for_each(|(i, row)| {
                for j in 0..size {
                    for (k, (g, _)) in active.iter().enumerate() {
                        row[j * kernels + k] = g.get(i, j);
                    }
                }
            });
        let off_diagonal_total = active
            .iter()
            .map(|(g, _)| {
                let mut s = 0.0;
                for i in 0..size {
                    for &v in &g.row(i)[i + 1..] {
                        s += v;
                    }
                }
                2.0 * s
            })
            .collect();
        StackedGrams {
            data,
            size,
            kernels,
            weights: active.iter().map(|(_, w)| *w).collect(),
            off_diagonal_total,
        }
    }

    pub(crate) fn kernels(&self) -> usize {
        self.kernels
    }

    fn within(&self, idx: &[usize], acc: &mut [f64]) {
        acc.fill(0.0);
        let r = self.kernels;
        let stride = self.size * r;
        for (a, &i) in idx.iter().enumerate() {
            let row = &self.data[i * stride..(i + 1) * stride];
            for &j in &idx[a + 1..] {
                let cell = &row[j * r..(j + 1) * r];
                for (s, v) in acc.iter_mut().zip(cell) {
                    *s += v;
                }
            }
        }
        for s in acc.iter_mut() {
            *s *= 2.0;
        }
    }

    /// MMD² of every active kernel for a split that covers all pooled points.
    pub(crate) fn mmds<'s>(&self, idx_x: &[usize], idx_y: &[usize], scratch: &'s mut Scratch) -> &'s [f64] {
        let (n, m) = (idx_x.len(), idx_y.len());
        debug_assert_eq!(n + m, self.size);
        self.within(idx_x, &mut scratch.xx);
        self.within(idx_y, &mut scratch.yy);
        let nn = (n * (n - 1)) as f64;
        let mm = (m * (m - 1)) as f64;
        let nm = (n * m) as f64;
        for k in 0..self.kernels {
            let (xx, yy) = (scratch.xx[k], scratch.yy[k]);
            let cross = 0.5 * (self.off_diagonal_total[k] - (xx + yy));
            scratch.mmd[k] = (xx / nn + yy / mm) - 2.0 * cross / nm;
        }
        &scratch.mmd
    }

    pub(crate) fn fuse(
        &self,
        idx_x: &[usize],
        idx_y: &[usize],
        cfg: &FuseConfig,
        scratch: &mut Scratch,
    ) -> f64 {
        self.mmds(idx_x, idx_y, scratch);
        fuse_unchecked(&scratch.mmd, &self.weights, cfg)
    }

    pub(crate) fn scratch(&self) -> Scratch {
        Scratch {
            xx: vec![0.0; self.kernels],
            yy: vec![0.0; self.kernels],
            mmd: vec![0.0; self.kernels],
        }
    }
}

pub(crate) struct Scratch {
    xx: Vec<f64>,
    yy: Vec<f64>,
    mmd: Vec<f64>,
}
