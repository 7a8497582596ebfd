use rayon::prelude::*;

use super::quantum::overlap_sqr;
use super::{check_finite, classical_value, KernelSpec, QuantumState};
use crate::data::Dataset;
use crate::error::Result;

/// Dense symmetric kernel matrix over a pooled sample, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    values: Vec<f64>,
    size: usize,
}

impl GramMatrix {
    /// Wraps a row-major `size × size` matrix. Only the upper triangle is read;
    /// the lower triangle is overwritten by symmetry.
    pub fn from_upper(mut values: Vec<f64>, size: usize) -> Self {
        assert_eq!(values.len(), size * size, "gram buffer has wrong length");
        for i in 0..size {
            for j in 0..i {
                values[i * size + j] = values[j * size + i];
            }
        }
        GramMatrix { values, size }
    }

    /// All-ones matrix, the Gram of a constant kernel.
    pub fn constant(size: usize, value: f64) -> Self {
        GramMatrix {
            values: vec![value; size * size],
            size,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.size..(i + 1) * self.size]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Gram matrix of `spec` over the rows of `z`.
///
/// Quantum kernels encode each row once and reuse the states for all pairs.
pub fn gram(spec: &KernelSpec, z: &Dataset) -> Result<GramMatrix> {
    spec.validate()?;
    let n = z.len();
    for i in 0..n {
        check_finite(z.row(i))?;
    }
    let upper_row = |i: usize, out: &mut [f64], f: &dyn Fn(usize, usize) -> f64| {
        for (j, v) in out.iter_mut().enumerate().skip(i) {
            *v = f(i, j);
        }
    };

    let mut values = vec![0.0; n * n];
    if spec.is_quantum() {
        let states: Vec<QuantumState> = (0..n)
            .into_par_iter()
            .map(|i| spec.encode(z.row(i)).expect("quantum spec"))
            .collect::<Result<_>>()?;
        values
            .par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(i, row)| {
                upper_row(i, row, &|a, b| overlap_sqr(&states[a], &states[b]));
            });
    } else {
        values
            .par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(i, row)| {
                upper_row(i, row, &|a, b| classical_value(spec, z.row(a), z.row(b)));
            });
    }
    Ok(GramMatrix::from_upper(values, n))
}
