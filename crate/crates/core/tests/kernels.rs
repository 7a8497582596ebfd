mod common;

use approx::assert_abs_diff_eq;
use common::{kernel_oracle, random_point, random_rows, random_spec, rng};
use hybrid_mmd::data::Dataset;
use hybrid_mmd::kernels::{
    bandwidth_grid, encode_entangled, encode_product, eval_kernel, fidelity, gram, KernelSpec,
    QuantumState, DEFAULT_QUBIT_CAP,
};
use hybrid_mmd::statistics::quantile;
use hybrid_mmd::Error;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn product_fidelity_matches_cosine_product() {
    let mut r = rng(11);
    for _ in 0..1000 {
        let d = r.random_range(1..=6);
        let x = random_point(&mut r, d, 3.0);
        let y = random_point(&mut r, d, 3.0);
        let gamma = r.random_range(0.01..3.0);
        let expected: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (gamma * (a - b) / 2.0).cos().powi(2))
            .product();
        let got = fidelity(
            &encode_product(&x, gamma).unwrap(),
            &encode_product(&y, gamma).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-10);
    }
}

#[test]
fn entangled_state_matches_matrix_simulation() {
    let mut r = rng(12);
    for _ in 0..300 {
        let d = r.random_range(2..=4);
        let depth = r.random_range(1..=3);
        let gamma = r.random_range(0.05..2.0);
        let x = random_point(&mut r, d, 2.0);
        let state = encode_entangled(&x, gamma, depth).unwrap();
        let oracle = common::entangled_state(&x, gamma, depth);
        for (a, b) in state.amplitudes().iter().zip(oracle.iter()) {
            assert_abs_diff_eq!(a.re, *b, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn entangled_kernel_differs_from_product_kernel() {
    // The entangling ring must change the kernel, already at one layer.
    let x = [0.3, -1.1, 0.7];
    let y = [1.4, 0.2, -0.5];
    let product = eval_kernel(&KernelSpec::QuantumProduct { scaling: 1.0 }, &x, &y).unwrap();
    let entangled =
        eval_kernel(&KernelSpec::QuantumEntangled { scaling: 1.0, depth: 1 }, &x, &y).unwrap();
    assert!((product - entangled).abs() > 1e-3);
}

#[test]
fn every_family_matches_its_oracle() {
    let mut r = rng(13);
    for case in 0..800 {
        let spec = random_spec(&mut r, case);
        let d = r.random_range(2..=4);
        let x = random_point(&mut r, d, 2.0);
        let y = random_point(&mut r, d, 2.0);
        assert_abs_diff_eq!(
            eval_kernel(&spec, &x, &y).unwrap(),
            kernel_oracle(&spec, &x, &y),
            epsilon = 1e-10
        );
    }
}

#[test]
fn gram_matches_pairwise_evaluation() {
    let mut r = rng(14);
    for family in 0..4 {
        let spec = random_spec(&mut r, family);
        let rows = random_rows(&mut r, 17, 3, 2.0);
        let g = gram(&spec, &Dataset::from_rows("z", rows.clone()).unwrap()).unwrap();
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                assert_abs_diff_eq!(g.get(i, j), kernel_oracle(&spec, &rows[i], &rows[j]), epsilon = 1e-12);
                assert_eq!(g.get(i, j), g.get(j, i));
            }
        }
    }
}

#[test]
fn gram_matrices_are_positive_semidefinite() {
    let mut r = rng(15);
    for case in 0..40 {
        let spec = random_spec(&mut r, case);
        let rows = random_rows(&mut r, 24, 3, 2.0);
        let g = gram(&spec, &Dataset::from_rows("z", rows).unwrap()).unwrap();
        let m = DMatrix::from_row_slice(g.size(), g.size(), g.as_slice());
        let min = SymmetricEigen::new(m).eigenvalues.min();
        assert!(min > -1e-10, "{spec:?}: smallest eigenvalue {min}");
    }
}

#[test]
fn qubit_cap_is_enforced() {
    let x = vec![0.1; DEFAULT_QUBIT_CAP + 1];
    assert!(matches!(encode_product(&x, 1.0), Err(Error::Capacity { .. })));
    assert!(matches!(encode_entangled(&x, 1.0, 1), Err(Error::Capacity { .. })));
    assert!(encode_product(&[0.1; 4], 1.0).is_ok());
}

#[test]
fn malformed_inputs_are_rejected() {
    let g = KernelSpec::Gaussian { bandwidth: 1.0 };
    assert!(matches!(eval_kernel(&g, &[1.0], &[1.0, 2.0]), Err(Error::InputShape(_))));
    assert!(eval_kernel(&g, &[f64::NAN], &[1.0]).is_err());
    assert!(eval_kernel(&KernelSpec::Gaussian { bandwidth: 0.0 }, &[1.0], &[1.0]).is_err());
    assert!(eval_kernel(&KernelSpec::QuantumEntangled { scaling: 1.0, depth: 0 }, &[1.0, 0.0], &[1.0, 0.0]).is_err());
    // The entangling ring needs two qubits.
    assert!(matches!(encode_entangled(&[1.0], 1.0, 1), Err(Error::InputShape(_))));
    let not_normalized = vec![num_complex::Complex64::new(1.0, 0.0); 2];
    assert!(QuantumState::from_amplitudes(not_normalized).is_err());
}

#[test]
fn bandwidth_grid_spans_distance_quantiles() {
    let mut r = rng(16);
    let rows = random_rows(&mut r, 30, 2, 1.0);
    let mut distances = Vec::new();
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            let d: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| (a - b).powi(2)).sum();
            distances.push(d.sqrt());
        }
    }
    let grid = bandwidth_grid(&Dataset::from_rows("z", rows).unwrap(), 8, 0.05, 0.95).unwrap();
    assert_eq!(grid.len(), 8);
    assert_eq!(grid[0], common::quantile_by_enumeration(&distances, 0.05));
    assert_eq!(grid[7], quantile(&distances, 0.95).unwrap());
    let ratios: Vec<f64> = grid.windows(2).map(|w| w[1] / w[0]).collect();
    for q in &ratios {
        assert_abs_diff_eq!(*q, ratios[0], epsilon = 1e-12);
    }
}

#[test]
fn bandwidth_grid_rejects_identical_points() {
    let z = Dataset::from_rows("z", vec![vec![1.0, 2.0]; 5]).unwrap();
    assert!(matches!(bandwidth_grid(&z, 4, 0.05, 0.95), Err(Error::DegenerateData(_))));
}

fn any_spec() -> impl Strategy<Value = KernelSpec> {
    prop_oneof![
        (0.1f64..5.0).prop_map(|bandwidth| KernelSpec::Gaussian { bandwidth }),
        (0.1f64..5.0).prop_map(|bandwidth| KernelSpec::Laplace { bandwidth }),
        (0.01f64..3.0).prop_map(|scaling| KernelSpec::QuantumProduct { scaling }),
        (0.01f64..3.0, 1usize..4)
            .prop_map(|(scaling, depth)| KernelSpec::QuantumEntangled { scaling, depth }),
    ]
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..6).prop_flat_map(|d| {
        (
            prop::collection::vec(-10.0f64..10.0, d),
            prop::collection::vec(-10.0f64..10.0, d),
        )
    })
}

proptest! {
    #[test]
    fn kernel_is_symmetric_bounded_and_one_on_the_diagonal(spec in any_spec(), (x, y) in pair()) {
        let kxy = eval_kernel(&spec, &x, &y).unwrap();
        let kyx = eval_kernel(&spec, &y, &x).unwrap();
        prop_assert!((kxy - kyx).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&kxy));
        prop_assert!((eval_kernel(&spec, &x, &x).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn encoded_states_are_normalized(x in prop::collection::vec(-10.0f64..10.0, 2..7), gamma in 0.01f64..3.0, depth in 1usize..4) {
        prop_assert!((encode_product(&x, gamma).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((encode_entangled(&x, gamma, depth).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }
}
