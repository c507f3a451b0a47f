use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::Limits;

/// Amplitudes of an `n`-qubit register; bit `k` of the index is qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(invalid(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        Ok(StateVector { n_qubits, amps })
    }

    pub fn basis(n: usize, index: usize, limits: &Limits) -> Result<Self> {
        limits.check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(invalid(format!("basis index {index} out of range")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Multiplies amplitude `b` by `exp(−i·γ·energies[b])`.
    pub fn apply_phase_c(&mut self, energies: &[f64], gamma: f64) -> Result<()> {
        if energies.len() != self.amps.len() {
            return Err(invalid(format!(
                "{} energies for a state of dimension {}",
                energies.len(),
                self.amps.len()
            )));
        }
        for (a, &e) in self.amps.iter_mut().zip(energies) {
            *a *= Complex64::from_polar(1.0, -gamma * e);
        }
        Ok(())
    }

    /// `e^{−iβB}` with `B = −Σ σx`: the rotation `[[cos β, i sin β], [i sin β, cos β]]`
    /// on every qubit.
    pub fn apply_mixer_b(&mut self, beta: f64) {
        if beta == 0.0 {
            return;
        }
        let c = beta.cos();
        let is = Complex64::new(0.0, beta.sin());
        let dim = self.amps.len();
        for q in 0..self.n_qubits {
            let stride = 1usize << q;
            let mut base = 0;
            while base < dim {
                for i in base..base + stride {
                    let a = self.amps[i];
                    let b = self.amps[i + stride];
                    self.amps[i] = a * c + b * is;
                    self.amps[i + stride] = a * is + b * c;
                }
                base += 2 * stride;
            }
        }
    }
}

/// Uniform superposition, the ground state of `B`.
pub fn plus_state(n: usize, limits: &Limits) -> Result<StateVector> {
    limits.check_qubits(n)?;
    let dim = 1usize << n;
    let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    Ok(StateVector {
        n_qubits: n,
        amps: vec![amp; dim],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn plus_state_amplitudes() {
        let s = plus_state(1, &lim()).unwrap();
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        }
        let s = plus_state(2, &lim()).unwrap();
        assert!(s.amplitudes().iter().all(|a| (a.re - 0.5).abs() < 1e-15 && a.im == 0.0));
        assert_abs_diff_eq!(plus_state(10, &lim()).unwrap().norm(), 1.0, epsilon = 1e-12);
        assert!(plus_state(17, &lim()).is_err());
    }

    #[test]
    fn phase_c_on_k2() {
        let energies = [1.0, -1.0, -1.0, 1.0];
        let mut s = plus_state(2, &lim()).unwrap();
        let before = s.clone();
        s.apply_phase_c(&energies, 0.0).unwrap();
        assert_eq!(s, before);
        // e^{−iπE} = −1 for E = ±1: a pure global phase.
        let mut full = s.clone();
        full.apply_phase_c(&energies, PI).unwrap();
        for a in full.amplitudes() {
            assert_abs_diff_eq!(a.re, -0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-15);
        }
        // γ = π/2 gives (−i, i, i, −i)/2, i.e. (−1, 1, 1, −1)/2 up to a global i.
        s.apply_phase_c(&energies, PI / 2.0).unwrap();
        let expected = [-0.5, 0.5, 0.5, -0.5];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(a.im, e, epsilon = 1e-15);
        }
        assert!(s.apply_phase_c(&energies[..2], 1.0).is_err());
    }

    #[test]
    fn phase_c_is_additive() {
        let energies = [0.3, -1.2, 2.0, 0.7];
        let mut a = plus_state(2, &lim()).unwrap();
        let mut b = a.clone();
        a.apply_phase_c(&energies, 0.35).unwrap();
        a.apply_phase_c(&energies, 0.35).unwrap();
        b.apply_phase_c(&energies, 0.7).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn mixer_rotation_oracle() {
        let mut s = StateVector::basis(1, 0, &lim()).unwrap();
        s.apply_mixer_b(FRAC_PI_2);
        // e^{iβσx}|0⟩ = cos β|0⟩ + i sin β|1⟩
        assert_abs_diff_eq!(s.amplitudes()[0].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].im, 1.0, epsilon = 1e-15);

        let mut s = plus_state(3, &lim()).unwrap();
        let before = s.clone();
        s.apply_mixer_b(0.0);
        assert_eq!(s, before);
        let beta = 0.37;
        s.apply_mixer_b(beta);
        let phase = Complex64::from_polar(1.0, 3.0 * beta);
        for (x, y) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert_abs_diff_eq!((x - y * phase).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn fidelity_ignores_global_phase() {
        let s = plus_state(2, &lim()).unwrap();
        let mut t = s.clone();
        for a in t.amplitudes_mut() {
            *a *= Complex64::from_polar(1.0, 0.9);
        }
        assert_abs_diff_eq!(s.fidelity(&t), 1.0, epsilon = 1e-14);
    }
}
