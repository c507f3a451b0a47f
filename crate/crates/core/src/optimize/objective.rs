use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::problems::Graph;
use crate::quantum::{evolve, CostHamiltonian, Propagator, StateVector, ENERGY_TOL};
use crate::schedules::Control;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// `⟨C⟩`.
    Expectation,
    /// Probability of measuring an energy above `threshold`, i.e.
    /// `1 − P(E ≤ threshold)`. Minimizing it piles mass at or below the
    /// threshold.
    LevelIndicator { threshold: f64 },
}

/// A diagonal observable to minimize at the end of an evolution.
#[derive(Debug, Clone)]
pub struct Objective {
    kind: ObjectiveKind,
    hamiltonian: CostHamiltonian,
    propagator: Propagator,
    observable: Vec<f64>,
}

impl Objective {
    pub fn new(hamiltonian: CostHamiltonian, kind: ObjectiveKind) -> Result<Self> {
        let observable = match kind {
            ObjectiveKind::Expectation => hamiltonian.energies().to_vec(),
            ObjectiveKind::LevelIndicator { threshold } => {
                if !(threshold.is_finite()
                    && threshold >= hamiltonian.min_energy() - ENERGY_TOL
                    && threshold <= hamiltonian.max_energy() + ENERGY_TOL)
                {
                    return Err(invalid(format!(
                        "threshold {threshold} outside the spectrum [{}, {}]",
                        hamiltonian.min_energy(),
                        hamiltonian.max_energy()
                    )));
                }
                hamiltonian
                    .energies()
                    .iter()
                    .map(|&e| if e > threshold + ENERGY_TOL { 1.0 } else { 0.0 })
                    .collect()
            }
        };
        Ok(Objective {
            kind,
            hamiltonian,
            propagator: Propagator::default(),
            observable,
        })
    }

    pub fn for_graph(g: &Graph, kind: ObjectiveKind, limits: &Limits) -> Result<Self> {
        Objective::new(CostHamiltonian::from_graph(g, limits)?, kind)
    }

    pub fn with_propagator(mut self, propagator: Propagator) -> Self {
        self.propagator = propagator;
        self
    }

    /// Same problem and propagator, different target.
    pub fn with_kind(&self, kind: ObjectiveKind) -> Result<Self> {
        Ok(Objective::new(self.hamiltonian.clone(), kind)?.with_propagator(self.propagator))
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn hamiltonian(&self) -> &CostHamiltonian {
        &self.hamiltonian
    }

    pub fn propagator(&self) -> Propagator {
        self.propagator
    }

    /// Diagonal of the measured operator.
    pub fn observable(&self) -> &[f64] {
        &self.observable
    }

    pub fn value(&self, state: &StateVector) -> f64 {
        state
            .amplitudes()
            .iter()
            .zip(&self.observable)
            .map(|(a, o)| a.norm_sqr() * o)
            .sum()
    }

    pub fn evaluate(&self, control: &dyn Control) -> Result<f64> {
        Ok(self.value(&evolve(&self.hamiltonian, control, self.propagator)?))
    }
}
