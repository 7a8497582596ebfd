//! Survivors against non-survivors in the heart-failure stand-in table, with
//! features standardized on the pooled sample.

use hybrid_mmd::data::{load_csv, split_by_label, standardize, ColumnRef, CsvOptions, Dataset};
use hybrid_mmd::experiments::{build_pool, PoolSpec};
use hybrid_mmd::statistics::PooledGrams;
use hybrid_mmd::testing::{permutation_test, TestConfig};

fn main() -> hybrid_mmd::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/heart_failure_standin.csv");
    let opts = CsvOptions {
        features: Some(vec![ColumnRef::parse("ejection_fraction"), ColumnRef::parse("serum_creatinine")]),
        label: Some(ColumnRef::parse("DEATH_EVENT")),
        ..Default::default()
    };
    let (survived, died) = split_by_label(&load_csv(path, &opts)?, "1")?;
    println!("{} survived, {} died", survived.len(), died.len());

    let pooled = standardize(&Dataset::concat(&survived, &died)?)?.dataset;
    let x = pooled.select(&(0..survived.len()).collect::<Vec<_>>());
    let y = pooled.select(&(survived.len()..pooled.len()).collect::<Vec<_>>());

    let pool = build_pool(&PoolSpec::hybrid(), &pooled)?;
    let result = permutation_test(&PooledGrams::build(&pool, &x, &y)?, &TestConfig::default())?;
    println!("statistic {:.5}, p = {:.4}, reject = {}", result.statistic, result.p_value, result.reject);
    Ok(())
}
