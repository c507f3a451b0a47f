use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{invalid, Error, Result};

/// Absolute tolerance for treating two energies as the same level.
pub const ENERGY_TOL: f64 = 1e-9;

/// Tolerance on total probability mass.
pub const MASS_TOL: f64 = 1e-9;

/// Sorts energies into levels; returns `(levels, level index per entry)`.
pub(crate) fn group_levels(energies: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    let mut levels: Vec<f64> = Vec::new();
    let mut level_of = vec![0; energies.len()];
    for idx in order {
        let e = energies[idx];
        match levels.last() {
            Some(&start) if e - start <= ENERGY_TOL => {}
            _ => levels.push(e),
        }
        level_of[idx] = levels.len() - 1;
    }
    (levels, level_of)
}

/// Probability mass over distinct energies, ascending in energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyDistribution {
    points: Vec<(f64, f64)>,
}

impl EnergyDistribution {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("distribution has no points"));
        }
        if points.iter().any(|&(e, p)| !e.is_finite() || !p.is_finite() || p < 0.0) {
            return Err(invalid("energies must be finite and probabilities nonnegative"));
        }
        if points.windows(2).any(|w| w[1].0 - w[0].0 <= ENERGY_TOL) {
            return Err(invalid("energies must be strictly increasing"));
        }
        let total: f64 = points.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(EnergyDistribution { points })
    }

    /// Zero-mass levels are dropped.
    pub(crate) fn from_parts_unchecked(levels: Vec<f64>, mass: Vec<f64>) -> Self {
        EnergyDistribution {
            points: levels
                .into_iter()
                .zip(mass)
                .filter(|(_, p)| *p != 0.0)
                .collect(),
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn total_mass(&self) -> f64 {
        self.points.iter().map(|p| p.1).sum()
    }

    /// `Σ energy · probability`.
    pub fn expectation(&self) -> f64 {
        self.points.iter().map(|&(e, p)| e * p).sum()
    }

    /// `P(E ≤ x)`.
    pub fn mass_at_or_below(&self, x: f64) -> f64 {
        self.points
            .iter()
            .take_while(|(e, _)| *e <= x + ENERGY_TOL)
            .map(|p| p.1)
            .sum()
    }
}

/// Groups `|amp_b|²` by `energies[b]`.
pub fn energy_distribution(s: &StateVector, energies: &[f64]) -> Result<EnergyDistribution> {
    if energies.len() != s.dim() {
        return Err(invalid(format!(
            "{} energies for a state of dimension {}",
            energies.len(),
            s.dim()
        )));
    }
    let (levels, level_of) = group_levels(energies);
    let mut mass = vec![0.0; levels.len()];
    for (a, &l) in s.amplitudes().iter().zip(&level_of) {
        mass[l] += a.norm_sqr();
    }
    Ok(EnergyDistribution::from_parts_unchecked(levels, mass))
}

pub fn expectation(d: &EnergyDistribution) -> f64 {
    d.expectation()
}

/// `(E_max − ⟨C⟩) / (E_max − E_min)`: 1 on the ground level, 0 on the top.
pub fn approximation_ratio(d: &EnergyDistribution, energies: &[f64]) -> Result<f64> {
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let e_max = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if energies.is_empty() || e_max - e_min <= ENERGY_TOL {
        return Err(Error::UndefinedRatio);
    }
    Ok((e_max - d.expectation()) / (e_max - e_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::plus_state;
    use crate::Limits;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const K2: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
    }

    #[test]
    fn plus_state_on_k2() {
        let s = plus_state(2, &Limits::default()).unwrap();
        let d = energy_distribution(&s, &K2).unwrap();
        assert_eq!(d.points(), &[(-1.0, 0.5), (1.0, 0.5)]);
        assert_eq!(expectation(&d), 0.0);
        assert_eq!(approximation_ratio(&d, &K2).unwrap(), 0.5);
    }

    #[test]
    fn basis_state_on_k2() {
        let s = StateVector::basis(2, 0, &Limits::default()).unwrap();
        let d = energy_distribution(&s, &K2).unwrap();
        assert_eq!(d.points(), &[(1.0, 1.0)]);
        assert_eq!(approximation_ratio(&d, &K2).unwrap(), 0.0);
        let ground = StateVector::basis(2, 1, &Limits::default()).unwrap();
        let d = energy_distribution(&ground, &K2).unwrap();
        assert_eq!(approximation_ratio(&d, &K2).unwrap(), 1.0);
        assert_eq!(d.expectation(), -1.0);
    }

    #[test]
    fn length_mismatch_and_degenerate_spectrum() {
        let s = plus_state(2, &Limits::default()).unwrap();
        assert!(energy_distribution(&s, &K2[..2]).is_err());
        let d = energy_distribution(&s, &[0.0; 4]).unwrap();
        assert_eq!(approximation_ratio(&d, &[0.0; 4]), Err(Error::UndefinedRatio));
    }

    #[test]
    fn validation() {
        assert!(EnergyDistribution::new(vec![(1.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(EnergyDistribution::new(vec![(0.0, 0.6), (1.0, 0.5)]).is_err());
        assert!(EnergyDistribution::new(vec![(0.0, -0.1), (1.0, 1.1)]).is_err());
        assert!(EnergyDistribution::new(vec![(-1.0, 0.5), (1.0, 0.5)]).is_ok());
    }

    #[test]
    fn random_states_sum_to_one_and_match_quadratic_form() {
        let energies: Vec<f64> = (0..16).map(|b| ((b * 7) % 5) as f64 - 2.0).collect();
        for seed in 0..20 {
            let s = random_state(4, seed);
            let d = energy_distribution(&s, &energies).unwrap();
            assert!((d.total_mass() - 1.0).abs() < 1e-12);
            let direct: f64 = s
                .amplitudes()
                .iter()
                .zip(&energies)
                .map(|(a, e)| (a.conj() * e * a).re)
                .sum();
            assert!((d.expectation() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn grouping_merges_close_energies() {
        let (levels, of) = group_levels(&[1.0, 1.0 + 1e-12, -2.0, 3.0]);
        assert_eq!(levels, vec![-2.0, 1.0, 3.0]);
        assert_eq!(of, vec![1, 1, 0, 2]);
    }
}
