//! State vectors, QAOA layers, product-formula evolution and measurement
//! energy distributions.

mod distribution;
mod evolve;
mod hamiltonian;
mod state;

pub use distribution::{
    approximation_ratio, energy_distribution, expectation, EnergyDistribution, ENERGY_TOL,
    MASS_TOL,
};
pub use evolve::{
    evolve, evolve_bangbang, evolve_qaoa, evolve_qaoa_ordered, evolve_schedule, product_step,
    Propagator, DEFAULT_STEPS, PIECEWISE_STEPS,
};
pub use hamiltonian::CostHamiltonian;
pub use state::{plus_state, StateVector};
