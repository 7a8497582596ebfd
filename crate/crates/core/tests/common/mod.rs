//! Independent reference implementations used by the integration tests.
//! None of these share code with the library.

#![allow(dead_code)]

use hybrid_mmd::kernels::KernelSpec;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut ChaCha8Rng, dims: usize, scale: f64) -> Vec<f64> {
    (0..dims).map(|_| rng.random_range(-scale..scale)).collect()
}

pub fn random_rows(rng: &mut ChaCha8Rng, count: usize, dims: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..count).map(|_| random_point(rng, dims, scale)).collect()
}

/// Any of the four families with random parameters.
pub fn random_spec(rng: &mut ChaCha8Rng, family: usize) -> KernelSpec {
    match family % 4 {
        0 => KernelSpec::Gaussian {
            bandwidth: rng.random_range(0.2..3.0),
        },
        1 => KernelSpec::Laplace {
            bandwidth: rng.random_range(0.2..3.0),
        },
        2 => KernelSpec::QuantumProduct {
            scaling: rng.random_range(0.05..2.0),
        },
        _ => KernelSpec::QuantumEntangled {
            scaling: rng.random_range(0.05..2.0),
            depth: rng.random_range(1..=3),
        },
    }
}

fn ry(theta: f64) -> DMatrix<f64> {
    let (s, c) = (theta / 2.0).sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// `A_{D-1} ⊗ … ⊗ A_0`, so that qubit `j` is bit `j` of the basis index.
fn kron_all(factors: &[DMatrix<f64>]) -> DMatrix<f64> {
    factors
        .iter()
        .rev()
        .fold(DMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

fn cz_ring(d: usize) -> DMatrix<f64> {
    let mut edges: Vec<(usize, usize)> = (0..d).map(|j| (j, (j + 1) % d)).collect();
    if d == 1 {
        edges.clear();
    }
    if d == 2 {
        edges.truncate(1);
    }
    let dim = 1 << d;
    let mut diag = DVector::from_element(dim, 1.0);
    for b in 0..dim {
        for &(i, j) in &edges {
            if (b >> i) & 1 == 1 && (b >> j) & 1 == 1 {
                diag[b] = -diag[b];
            }
        }
    }
    DMatrix::from_diagonal(&diag)
}

/// Full-matrix simulation of `|+⟩^D` followed by `depth` layers of (CZ ring, R_y per qubit).
pub fn entangled_state(x: &[f64], gamma: f64, depth: usize) -> DVector<f64> {
    let d = x.len();
    let dim = 1usize << d;
    let mut state = DVector::from_element(dim, (dim as f64).sqrt().recip());
    let rot = kron_all(&x.iter().map(|&v| ry(gamma * v)).collect::<Vec<_>>());
    let ring = cz_ring(d);
    for _ in 0..depth {
        state = &rot * (&ring * state);
    }
    state
}

/// Closed-form or brute-force value of any kernel.
pub fn kernel_oracle(spec: &KernelSpec, x: &[f64], y: &[f64]) -> f64 {
    match *spec {
        KernelSpec::Gaussian { bandwidth } => {
            let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
            (-sq / (2.0 * bandwidth * bandwidth)).exp()
        }
        KernelSpec::Laplace { bandwidth } => {
            let l1: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
            (-l1 / bandwidth).exp()
        }
        KernelSpec::QuantumProduct { scaling } => x
            .iter()
            .zip(y)
            .map(|(a, b)| (scaling * (a - b) / 2.0).cos().powi(2))
            .product(),
        KernelSpec::QuantumEntangled { scaling, depth } => {
            let a = entangled_state(x, scaling, depth);
            let b = entangled_state(y, scaling, depth);
            a.dot(&b).powi(2)
        }
    }
}

/// Unbiased MMD² straight from raw rows with a double loop.
pub fn mmd2_double_loop(spec: &KernelSpec, xs: &[Vec<f64>], ys: &[Vec<f64>]) -> f64 {
    let k = |a: &[f64], b: &[f64]| kernel_oracle(spec, a, b);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let mut kxx = 0.0;
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if i != j {
                kxx += k(&xs[i], &xs[j]);
            }
        }
    }
    let mut kyy = 0.0;
    for i in 0..ys.len() {
        for j in 0..ys.len() {
            if i != j {
                kyy += k(&ys[i], &ys[j]);
            }
        }
    }
    let mut kxy = 0.0;
    for a in xs {
        for b in ys {
            kxy += k(a, b);
        }
    }
    kxx / (n * (n - 1.0)) + kyy / (m * (m - 1.0)) - 2.0 * kxy / (n * m)
}

/// Smallest element r with #{v <= r} / N >= q, by enumerating every candidate.
pub fn quantile_by_enumeration(values: &[f64], q: f64) -> f64 {
    let n = values.len() as f64;
    values
        .iter()
        .copied()
        .filter(|&r| values.iter().filter(|&&v| v <= r).count() as f64 / n >= q)
        .fold(f64::INFINITY, f64::min)
}

/// Log-sum-exp FUSE written directly from its definition (no shift).
pub fn fuse_direct(mmds: &[f64], weights: &[f64], lambda: f64) -> f64 {
    let s: f64 = mmds
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&v, &w)| w * (lambda * v).exp())
        .sum();
    s.ln() / lambda
}
