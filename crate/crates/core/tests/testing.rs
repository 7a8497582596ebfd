mod common;

use approx::assert_abs_diff_eq;
use common::{random_rows, random_spec, rng};
use hybrid_mmd::data::{generate, Dataset, GeneratorFamily, GeneratorSpec};
use hybrid_mmd::experiments::{build_pool, ClassicalFamily, PoolSpec};
use hybrid_mmd::kernels::{GramMatrix, KernelSpec};
use hybrid_mmd::statistics::{fuse1, FuseConfig, KernelPool, PooledGrams};
use hybrid_mmd::testing::{make_plan, permutation_test, permuted_statistics, reject_decision, TestConfig};
use std::collections::HashMap;

fn null_groups(n: usize, seed: u64) -> (Dataset, Dataset) {
    generate(&GeneratorSpec {
        family: GeneratorFamily::GaussianShift,
        dims: 2,
        shift: 0.0,
        size: n,
        seed,
    })
    .unwrap()
}

fn small_pool(z: &Dataset) -> KernelPool {
    build_pool(&PoolSpec::classical(vec![ClassicalFamily::Gaussian], 4), z).unwrap()
}

#[test]
fn random_permutations_are_uniform() {
    // All 24 orderings of 4 points, 24000 draws; chi-square with 23 degrees of
    // freedom has a 0.1% critical value of 49.73.
    let plan = make_plan(2, 2, 24_000, 5).unwrap();
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for p in &plan.permutations()[..24_000] {
        *counts.entry(p.clone()).or_default() += 1;
    }
    assert_eq!(counts.len(), 24);
    let chi2: f64 = counts.values().map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0).sum();
    assert!(chi2 < 49.73, "chi-square {chi2}");
    assert_eq!(plan.permutations()[24_000], vec![0, 1, 2, 3]);
}

#[test]
fn plan_depends_only_on_its_seed() {
    assert_eq!(make_plan(10, 7, 100, 42).unwrap(), make_plan(10, 7, 100, 42).unwrap());
    assert_ne!(make_plan(10, 7, 100, 42).unwrap(), make_plan(10, 7, 100, 43).unwrap());
}

#[test]
fn cached_grams_match_rebuilding_on_permuted_data() {
    let mut r = rng(31);
    let specs: Vec<KernelSpec> = (0..4).map(|i| random_spec(&mut r, i)).collect();
    let pool = KernelPool::new(specs, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    let (n, m) = (9, 12);
    let rows = random_rows(&mut r, n + m, 3, 1.5);
    let z = Dataset::from_rows("z", rows.clone()).unwrap();
    let pooled = PooledGrams::build(&pool, &z.select(&(0..n).collect::<Vec<_>>()), &z.select(&(n..n + m).collect::<Vec<_>>())).unwrap();
    let plan = make_plan(n, m, 60, 7).unwrap();
    let cfg = FuseConfig::new(2.5);
    let fast = permuted_statistics(&pooled, &plan, &cfg).unwrap();
    for (sigma, &stat) in plan.permutations().iter().zip(&fast) {
        let x = z.select(&sigma[..n]);
        let y = z.select(&sigma[n..]);
        let rebuilt = PooledGrams::build(&pool, &x, &y).unwrap();
        let slow = fuse1(&rebuilt, &rebuilt.idx_x(), &rebuilt.idx_y(), &cfg).unwrap();
        assert_abs_diff_eq!(stat, slow, epsilon = 1e-10);
    }
}

#[test]
fn fast_path_matches_fuse1_on_index_sets() {
    let (x, y) = null_groups(15, 3);
    let z = Dataset::concat(&x, &y).unwrap();
    let pool = build_pool(&PoolSpec::hybrid(), &z).unwrap();
    let pooled = PooledGrams::build(&pool, &x, &y).unwrap();
    let plan = make_plan(15, 15, 40, 8).unwrap();
    let cfg = FuseConfig::new(1.0);
    let fast = permuted_statistics(&pooled, &plan, &cfg).unwrap();
    for (sigma, &stat) in plan.permutations().iter().zip(&fast) {
        let slow = fuse1(&pooled, &sigma[..15], &sigma[15..], &cfg).unwrap();
        assert_abs_diff_eq!(stat, slow, epsilon = 1e-12);
    }
}

#[test]
fn exchanging_group_labels_changes_nothing() {
    let (x, y) = null_groups(12, 4);
    let z = Dataset::concat(&x, &y).unwrap();
    let pooled = PooledGrams::build(&small_pool(&z), &x, &y).unwrap();
    let cfg = TestConfig {
        permutations: 300,
        retain_null: true,
        seed: 2,
        ..Default::default()
    };
    let a = permutation_test(&pooled, &cfg).unwrap();
    let b = permutation_test(&pooled.clone().swap_roles(), &cfg).unwrap();
    assert_eq!(a.statistic, b.statistic);
    assert_eq!(a.null_stats, b.null_stats);
    assert_eq!(a.p_value, b.p_value);
    assert_eq!(a.reject, b.reject);
}

#[test]
fn same_seed_same_result() {
    let (x, y) = null_groups(20, 5);
    let z = Dataset::concat(&x, &y).unwrap();
    let pooled = PooledGrams::build(&small_pool(&z), &x, &y).unwrap();
    let cfg = TestConfig {
        permutations: 200,
        seed: 11,
        ..Default::default()
    };
    assert_eq!(permutation_test(&pooled, &cfg).unwrap(), permutation_test(&pooled, &cfg).unwrap());
}

#[test]
fn result_fields_are_consistent() {
    let (x, y) = null_groups(20, 6);
    let z = Dataset::concat(&x, &y).unwrap();
    let pooled = PooledGrams::build(&small_pool(&z), &x, &y).unwrap();
    let cfg = TestConfig {
        permutations: 99,
        retain_null: true,
        ..Default::default()
    };
    let res = permutation_test(&pooled, &cfg).unwrap();
    let null = res.null_stats.clone().unwrap();
    assert_eq!(null.len(), 100);
    assert_eq!(*null.last().unwrap(), res.statistic);
    assert!(res.p_value >= 1.0 / 100.0 && res.p_value <= 1.0);
    assert_eq!(reject_decision(&res), res.statistic >= res.threshold);
    assert!(res.threshold > res.quantile);
    assert_eq!(res.per_kernel_mmd.len(), 4);
}

#[test]
fn saturated_alternative_rejects() {
    let (x, y) = generate(&GeneratorSpec {
        family: GeneratorFamily::GaussianShift,
        dims: 2,
        shift: 50.0,
        size: 20,
        seed: 1,
    })
    .unwrap();
    let z = Dataset::concat(&x, &y).unwrap();
    let pooled = PooledGrams::build(&build_pool(&PoolSpec::hybrid(), &z).unwrap(), &x, &y).unwrap();
    let res = permutation_test(&pooled, &TestConfig { permutations: 200, ..Default::default() }).unwrap();
    assert!(res.reject);
    assert_eq!(res.p_value, 1.0 / 201.0);
}

#[test]
fn degenerate_pool_never_rejects() {
    let pool = KernelPool::uniform(vec![KernelSpec::Gaussian { bandwidth: 1.0 }]).unwrap();
    let pooled = PooledGrams::from_grams(pool, vec![GramMatrix::constant(10, 1.0)], 5, 5).unwrap();
    for alpha in [0.05, 0.5, 0.9] {
        let res = permutation_test(&pooled, &TestConfig { alpha, permutations: 50, ..Default::default() }).unwrap();
        assert!(!res.reject);
        assert_eq!(res.p_value, 1.0);
    }
}

/// Null rejection rates and p-value tail frequencies over 400 trials.
#[test]
fn null_calibration() {
    let trials = 400;
    let mut p_values = Vec::with_capacity(trials);
    let mut rejections = 0;
    for t in 0..trials as u64 {
        let (x, y) = null_groups(15, 1000 + t);
        let z = Dataset::concat(&x, &y).unwrap();
        let pooled = PooledGrams::build(&small_pool(&z), &x, &y).unwrap();
        let res = permutation_test(&pooled, &TestConfig { permutations: 99, seed: t, ..Default::default() }).unwrap();
        rejections += res.reject as usize;
        p_values.push(res.p_value);
    }
    let band = |a: f64| a + 3.0 * (a * (1.0 - a) / trials as f64).sqrt();
    let rate = rejections as f64 / trials as f64;
    assert!(rate <= band(0.05), "rejection rate {rate}");
    for a in [0.1, 0.25, 0.5] {
        let freq = p_values.iter().filter(|&&p| p <= a).count() as f64 / trials as f64;
        assert!(freq <= band(a), "P(p <= {a}) = {freq}");
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let (x, y) = null_groups(5, 1);
    let z = Dataset::concat(&x, &y).unwrap();
    let pooled = PooledGrams::build(&small_pool(&z), &x, &y).unwrap();
    for cfg in [
        TestConfig { alpha: 0.0, ..Default::default() },
        TestConfig { alpha: 1.0, ..Default::default() },
        TestConfig { permutations: 0, ..Default::default() },
        TestConfig { lambda: 0.0, ..Default::default() },
    ] {
        assert!(permutation_test(&pooled, &cfg).is_err());
    }
    let plan = make_plan(3, 3, 5, 0).unwrap();
    assert!(permuted_statistics(&pooled, &plan, &FuseConfig::new(1.0)).is_err());
}
