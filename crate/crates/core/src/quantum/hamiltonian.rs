use num_complex::Complex64;

use super::distribution::{group_levels, EnergyDistribution, ENERGY_TOL};
use super::state::StateVector;
use crate::error::{invalid, Result};
use crate::problems::{diagonal_energies, Graph};
use crate::Limits;

/// Diagonal problem Hamiltonian with its energies grouped into levels.
///
/// Phases are computed once per distinct level rather than per basis state.
#[derive(Debug, Clone)]
pub struct CostHamiltonian {
    n_qubits: usize,
    energies: Vec<f64>,
    levels: Vec<f64>,
    level_of: Vec<usize>,
}

impl CostHamiltonian {
    pub fn from_graph(g: &Graph, limits: &Limits) -> Result<Self> {
        Self::from_energies(diagonal_energies(g, limits)?)
    }

    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        if !energies.len().is_power_of_two() {
            return Err(invalid("energy vector length must be a power of two"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(invalid("energies must be finite"));
        }
        let n_qubits = energies.len().trailing_zeros() as usize;
        let (levels, level_of) = group_levels(&energies);
        Ok(CostHamiltonian {
            n_qubits,
            energies,
            levels,
            level_of,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Distinct energies, ascending.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level_of(&self, basis: usize) -> usize {
        self.level_of[basis]
    }

    pub fn min_energy(&self) -> f64 {
        self.levels[0]
    }

    pub fn max_energy(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.levels.len() == 1
    }

    /// `e^{−iγC}` applied in place.
    pub fn apply_phase(&self, state: &mut StateVector, gamma: f64) {
        if gamma == 0.0 {
            return;
        }
        let phases: Vec<Complex64> = self
            .levels
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -gamma * e))
            .collect();
        for (a, &l) in state.amplitudes_mut().iter_mut().zip(&self.level_of) {
            *a *= phases[l];
        }
    }

    /// `C|ψ⟩`.
    pub fn apply(&self, state: &StateVector) -> Vec<Complex64> {
        state
            .amplitudes()
            .iter()
            .zip(&self.energies)
            .map(|(a, &e)| a * e)
            .collect()
    }

    pub fn expectation(&self, state: &StateVector) -> f64 {
        state
            .amplitudes()
            .iter()
            .zip(&self.energies)
            .map(|(a, &e)| a.norm_sqr() * e)
            .sum()
    }

    pub fn distribution(&self, state: &StateVector) -> EnergyDistribution {
        let mut mass = vec![0.0; self.levels.len()];
        for (a, &l) in state.amplitudes().iter().zip(&self.level_of) {
            mass[l] += a.norm_sqr();
        }
        EnergyDistribution::from_parts_unchecked(self.levels.clone(), mass)
    }

    /// Smallest `T > 0` with `e^{−iTC}` a global phase, when the spectrum is
    /// integral: `2π / gcd` of the level gaps. `None` for non-integral or
    /// constant spectra.
    pub fn phase_period(&self) -> Option<f64> {
        if self.is_constant() {
            return None;
        }
        let mut g: u64 = 0;
        for &e in &self.levels[1..] {
            let gap = e - self.levels[0];
            let rounded = gap.round();
            if (gap - rounded).abs() > ENERGY_TOL || rounded > 1e12 {
                return None;
            }
            g = gcd(g, rounded as u64);
        }
        Some(2.0 * std::f64::consts::PI / g as f64)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
