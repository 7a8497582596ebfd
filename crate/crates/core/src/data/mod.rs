//! Samples, synthetic generators, and resampling helpers.

mod csv;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, purpose};

pub use self::csv::{load_csv, split_by_label, write_csv, ColumnRef, CsvOptions};

/// An `M × D` matrix of finite features with optional per-row labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    dims: usize,
    values: Vec<f64>,
    labels: Option<Vec<String>>,
    columns: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from rows; rejects empty input, ragged rows and non-finite values.
    pub fn from_rows(name: impl Into<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let dims = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() {
            return Err(Error::validation("dataset has no rows"));
        }
        if dims == 0 {
            return Err(Error::validation("dataset has no feature columns"));
        }
        let mut values = Vec::with_capacity(rows.len() * dims);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dims {
                return Err(Error::InputShape(format!(
                    "row {i} has {} features, expected {dims}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::validation(format!(
                    "non-finite value at row {i}, column {j}"
                )));
            }
            values.extend_from_slice(row);
        }
        Ok(Dataset {
            name: name.into(),
            dims,
            values,
            labels: None,
            columns: None,
        })
    }

    /// A dataset with zero rows; only produced by splitting and selection.
    pub fn empty(name: impl Into<String>, dims: usize) -> Self {
        Dataset {
            name: name.into(),
            dims,
            values: Vec::new(),
            labels: None,
            columns: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InputShape(format!(
                "{} labels for {} rows",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_columns(mut self, columns: Vec<String>) -> Result<Self> {
        if columns.len() != self.dims {
            return Err(Error::InputShape(format!(
                "{} column names for {} features",
                columns.len(),
                self.dims
            )));
        }
        self.columns = Some(columns);
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.values.len().checked_div(self.dims).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dims..(i + 1) * self.dims]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dims.max(1))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn columns(&self) -> Option<&[String]> {
        self.columns.as_deref()
    }

    /// Rows at `indices`, in that order, keeping labels and column names.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        let mut values = Vec::with_capacity(indices.len() * self.dims);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Dataset {
            name: self.name.clone(),
            dims: self.dims,
            values,
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i].clone()).collect()),
            columns: self.columns.clone(),
        }
    }

    /// `a` followed by `b`. Labels survive only if both sides carry them.
    pub fn concat(a: &Dataset, b: &Dataset) -> Result<Dataset> {
        if a.dims != b.dims {
            return Err(Error::InputShape(format!(
                "cannot pool samples of dimension {} and {}",
                a.dims, b.dims
            )));
        }
        let mut values = a.values.clone();
        values.extend_from_slice(&b.values);
        let labels = match (&a.labels, &b.labels) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
            _ => None,
        };
        Ok(Dataset {
            name: format!("{}+{}", a.name, b.name),
            dims: a.dims,
            values,
            labels,
            columns: a.columns.clone(),
        })
    }

    /// Splits off the first `n` rows.
    pub(crate) fn split_at(&self, n: usize) -> (Dataset, Dataset) {
        let first: Vec<usize> = (0..n).collect();
        let second: Vec<usize> = (n..self.len()).collect();
        (self.select(&first), self.select(&second))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorFamily {
    /// `x ~ N(0, 1)`, `y ~ N(d, 1)` per coordinate.
    GaussianShift,
    /// `x ~ LogNormal(0, 1)`, `y ~ LogNormal(d, 1)` per coordinate.
    LogNormalShift,
}

/// Two groups of `size` rows in `dims` dimensions, shifted by `shift` per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: GeneratorFamily,
    pub dims: usize,
    pub shift: f64,
    pub size: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dims == 0 {
            return Err(Error::validation("generator needs dims >= 1"));
        }
        if self.size < 2 {
            return Err(Error::validation("generator needs size >= 2"));
        }
        if !self.shift.is_finite() {
            return Err(Error::validation("generator shift must be finite"));
        }
        Ok(())
    }
}

fn normal_group(spec: &GeneratorSpec, group: u64, mean: f64, exponentiate: bool) -> Dataset {
    let mut rng = rng::substream(spec.seed, &[purpose::GENERATE, group]);
    let values: Vec<f64> = (0..spec.size * spec.dims)
        .map(|_| {
            let g: f64 = rng.sample::<f64, _>(StandardNormal) + mean;
            if exponentiate {
                g.exp()
            } else {
                g
            }
        })
        .collect();
    Dataset {
        name: if group == 0 { "x" } else { "y" }.into(),
        dims: spec.dims,
        values,
        labels: None,
        columns: None,
    }
}

pub fn gen_gaussian_shift(spec: &GeneratorSpec) -> Result<(Dataset, Dataset)> {
    if spec.family != GeneratorFamily::GaussianShift {
        return Err(Error::validation("gen_gaussian_shift needs family gaussian-shift"));
    }
    spec.validate()?;
    Ok((
        normal_group(spec, 0, 0.0, false),
        normal_group(spec, 1, spec.shift, false),
    ))
}

pub fn gen_lognormal_shift(spec: &GeneratorSpec) -> Result<(Dataset, Dataset)> {
    if spec.family != GeneratorFamily::LogNormalShift {
        return Err(Error::validation(
            "gen_lognormal_shift needs family log-normal-shift",
        ));
    }
    spec.validate()?;
    Ok((
        normal_group(spec, 0, 0.0, true),
        normal_group(spec, 1, spec.shift, true),
    ))
}

/// Dispatches on `spec.family`.
pub fn generate(spec: &GeneratorSpec) -> Result<(Dataset, Dataset)> {
    match spec.family {
        GeneratorFamily::GaussianShift => gen_gaussian_shift(spec),
        GeneratorFamily::LogNormalShift => gen_lognormal_shift(spec),
    }
}

/// `n_per_group` rows from each group, uniformly without replacement.
pub fn subsample(
    x: &Dataset,
    y: &Dataset,
    n_per_group: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let available = x.len().min(y.len());
    if n_per_group > available {
        return Err(Error::InsufficientSamples {
            needed: n_per_group,
            got: available,
        });
    }
    let pick = |ds: &Dataset, group: u64| {
        let mut rng = rng::substream(seed, &[purpose::SUBSAMPLE, group]);
        let idx = index::sample(&mut rng, ds.len(), n_per_group).into_vec();
        ds.select(&idx)
    };
    Ok((pick(x, 0), pick(y, 1)))
}

/// Pools both groups, shuffles, and splits back into groups of the original sizes.
pub fn null_mixture(x: &Dataset, y: &Dataset, seed: u64) -> Result<(Dataset, Dataset)> {
    let pooled = Dataset::concat(x, y)?;
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.shuffle(&mut rng::substream(seed, &[purpose::MIXTURE]));
    let mixed = pooled.select(&order);
    let (a, b) = mixed.split_at(x.len());
    Ok((a.renamed(x.name()), b.renamed(y.name())))
}

/// Output of [`standardize`].
#[derive(Debug, Clone)]
pub struct Standardized {
    pub dataset: Dataset,
    /// Columns with zero spread; they are set to 0.
    pub constant_columns: Vec<usize>,
}

/// Centers every column and scales it to unit population standard deviation
/// (denominator `M`).
pub fn standardize(ds: &Dataset) -> Result<Standardized> {
    let m = ds.len();
    if m < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: m });
    }
    let mut out = ds.clone();
    let mut constant_columns = Vec::new();
    for j in 0..ds.dims {
        let mean = ds.rows().map(|r| r[j]).sum::<f64>() / m as f64;
        let var = ds.rows().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / m as f64;
        let sd = var.sqrt();
        let constant = ds.rows().all(|r| r[j] == ds.row(0)[j]);
        if constant {
            constant_columns.push(j);
        }
        for i in 0..m {
            let v = &mut out.values[i * ds.dims + j];
            *v = if constant { 0.0 } else { (*v - mean) / sd };
        }
    }
    Ok(Standardized {
        dataset: out,
        constant_columns,
    })
}
