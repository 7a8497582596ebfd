//! Exact statevector simulation of the angle-encoding feature maps.
//!
//! Qubit `j` corresponds to bit `j` of the basis-state index, so amplitude
//! `k` of a `q`-qubit state is the coefficient of `|b_{q-1} … b_1 b_0⟩` with
//! `k = Σ b_j 2^j`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::check_finite;
use crate::error::{Error, Result};

/// Largest number of qubits the simulator accepts (65 536 amplitudes).
pub const DEFAULT_QUBIT_CAP: usize = 16;

/// Pure state `|ψ⟩` stored as its `2^q` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    qubits: usize,
}

impl QuantumState {
    /// Builds a state from raw amplitudes. The length must be a power of two
    /// and the vector must have unit norm within `1e-12`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InputShape(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let state = QuantumState {
            qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::validation(format!(
                "state is not normalized (squared norm {norm})"
            )));
        }
        Ok(state)
    }

    /// `|+⟩^{⊗q}`.
    pub fn uniform_superposition(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        QuantumState {
            amplitudes: vec![a; dim],
            qubits,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `R_y(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]` to `qubit`.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) {
        assert!(qubit < self.qubits, "qubit {qubit} out of range");
        let (s, c) = (0.5 * theta).sin_cos();
        let bit = 1usize << qubit;
        for i0 in 0..self.amplitudes.len() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let a0 = self.amplitudes[i0];
            let a1 = self.amplitudes[i1];
            self.amplitudes[i0] = a0 * c - a1 * s;
            self.amplitudes[i1] = a0 * s + a1 * c;
        }
    }

    /// Controlled-Z between `a` and `b`: flips the sign where both bits are set.
    pub fn apply_cz(&mut self, a: usize, b: usize) {
        assert!(a < self.qubits && b < self.qubits && a != b);
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }
}

fn check_capacity(qubits: usize, cap: usize) -> Result<()> {
    if qubits > cap {
        Err(Error::Capacity { qubits, cap })
    } else {
        Ok(())
    }
}

/// Single-qubit amplitudes of `R_y(θ)|+⟩`.
#[inline]
fn rotated_plus(theta: f64) -> [f64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [FRAC_1_SQRT_2 * (c - s), FRAC_1_SQRT_2 * (s + c)]
}

/// Product feature map: qubit `j` is prepared as `R_y(γ x_j)|+⟩`.
pub fn encode_product(x: &[f64], scaling: f64) -> Result<QuantumState> {
    encode_product_capped(x, scaling, DEFAULT_QUBIT_CAP)
}

pub fn encode_product_capped(x: &[f64], scaling: f64, cap: usize) -> Result<QuantumState> {
    if x.is_empty() {
        return Err(Error::InputShape("cannot encode an empty feature vector".into()));
    }
    check_capacity(x.len(), cap)?;
    check_finite(x)?;
    let mut amplitudes = Vec::with_capacity(1 << x.len());
    amplitudes.push(Complex64::new(1.0, 0.0));
    for &xj in x {
        let [v0, v1] = rotated_plus(scaling * xj);
        // New qubit becomes the next most significant bit.
        let low: Vec<Complex64> = amplitudes.iter().map(|a| a * v0).collect();
        let high: Vec<Complex64> = amplitudes.iter().map(|a| a * v1).collect();
        amplitudes = low;
        amplitudes.extend(high);
    }
    Ok(QuantumState {
        amplitudes,
        qubits: x.len(),
    })
}

/// Edges of the controlled-Z ring on `qubits` qubits. Two qubits have a single edge.
pub(crate) fn ring_edges(qubits: usize) -> Vec<(usize, usize)> {
    match qubits {
        0 | 1 => Vec::new(),
        2 => vec![(0, 1)],
        q => (0..q).map(|j| (j, (j + 1) % q)).collect(),
    }
}

/// Layered entangling feature map.
///
/// Starts from `|+⟩^{⊗D}`; each of the `depth` layers applies a ring of CZ
/// gates on `(j, j+1 mod D)` and then `R_y(γ x_j)` on every qubit `j`.
pub fn encode_entangled(x: &[f64], scaling: f64, depth: usize) -> Result<QuantumState> {
    encode_entangled_capped(x, scaling, depth, DEFAULT_QUBIT_CAP)
}

pub fn encode_entangled_capped(
    x: &[f64],
    scaling: f64,
    depth: usize,
    cap: usize,
) -> Result<QuantumState> {
    if x.len() < 2 {
        return Err(Error::InputShape(format!(
            "entangled encoding needs at least 2 features, got {}",
            x.len()
        )));
    }
    if depth == 0 {
        return Err(Error::validation("entangled encoding needs depth >= 1"));
    }
    check_capacity(x.len(), cap)?;
    check_finite(x)?;
    let edges = ring_edges(x.len());
    let mut state = QuantumState::uniform_superposition(x.len());
    for _ in 0..depth {
        for &(a, b) in &edges {
            state.apply_cz(a, b);
        }
        for (j, &xj) in x.iter().enumerate() {
            state.apply_ry(j, scaling * xj);
        }
    }
    Ok(state)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.qubits != b.qubits {
        return Err(Error::InputShape(format!(
            "states on {} and {} qubits",
            a.qubits, b.qubits
        )));
    }
    Ok(overlap_sqr(a, b))
}

#[inline]
pub(crate) fn overlap_sqr(a: &QuantumState, b: &QuantumState) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (p, q) in a.amplitudes.iter().zip(&b.amplitudes) {
        re += p.re * q.re + p.im * q.im;
        im += p.re * q.im - p.im * q.re;
    }
    re * re + im * im
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_rotation_gives_plus() {
        let s = encode_product(&[0.0], 1.0).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn pi_rotation_is_orthogonal_to_plus() {
        let s = encode_product(&[PI], 1.0).unwrap();
        let p = encode_product(&[0.0], 1.0).unwrap();
        assert!(fidelity(&s, &p).unwrap() < 1e-30);
        // R_y(pi)|+> = -|->.
        assert!((s.amplitudes()[0].re + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn single_qubit_fidelity_closed_form() {
        for &(x, y) in &[(0.3, -1.2), (2.0, 2.0), (-3.0, 0.7)] {
            let f = fidelity(
                &encode_product(&[x], 1.0).unwrap(),
                &encode_product(&[y], 1.0).unwrap(),
            )
            .unwrap();
            let expected = ((x - y) / 2.0f64).cos().powi(2);
            assert!((f - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn capacity_enforced() {
        let x = vec![0.1; 17];
        assert!(matches!(
            encode_product(&x, 1.0),
            Err(Error::Capacity { qubits: 17, cap: 16 })
        ));
        assert!(matches!(
            encode_entangled_capped(&[0.0; 4], 1.0, 1, 3),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn entangled_needs_two_features() {
        assert!(matches!(
            encode_entangled(&[0.2], 1.0, 1),
            Err(Error::InputShape(_))
        ));
    }

    #[test]
    fn orthogonal_basis_states() {
        let mut a = vec![Complex64::new(0.0, 0.0); 4];
        let mut b = a.clone();
        a[1] = Complex64::new(1.0, 0.0);
        b[2] = Complex64::new(0.0, 1.0);
        let a = QuantumState::from_amplitudes(a).unwrap();
        let b = QuantumState::from_amplitudes(b).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn from_amplitudes_rejects_bad_input() {
        assert!(QuantumState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(QuantumState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn cz_ring_edges() {
        assert_eq!(ring_edges(2), vec![(0, 1)]);
        assert_eq!(ring_edges(3), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn entangled_differs_from_product() {
        let x = [0.4, 1.1];
        let y = [1.3, -0.2];
        let fe = fidelity(
            &encode_entangled(&x, 1.0, 1).unwrap(),
            &encode_entangled(&y, 1.0, 1).unwrap(),
        )
        .unwrap();
        let fp = fidelity(
            &encode_product(&x, 1.0).unwrap(),
            &encode_product(&y, 1.0).unwrap(),
        )
        .unwrap();
        assert!((fe - fp).abs() > 1e-3);
    }
}
