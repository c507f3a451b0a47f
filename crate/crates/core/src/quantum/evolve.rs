//! Time evolution under `H(t) = u(t)·B + (1 − u(t))·C`.
//!
//! Every evolution starts from the uniform superposition. One product-formula
//! step of length `Δt` at control value `u` is the operator
//! `e^{−iΔt·u·B} · e^{−iΔt·(1−u)·C}`: the problem phase acts first, then the
//! mixer. A step is therefore itself a two-pulse bang-bang of total length
//! `Δt`.

use super::hamiltonian::CostHamiltonian;
use super::state::{plus_state, StateVector};
use crate::error::{invalid, Result};
use crate::schedules::{BangBangSchedule, Control, ControlSegment, LayerOrder, PulseKind};
use crate::Limits;

/// Default number of product-formula steps.
pub const DEFAULT_STEPS: usize = 1001;

/// Steps used for the piecewise "optimal" workflow.
pub const PIECEWISE_STEPS: usize = 101;

fn initial_state(h: &CostHamiltonian) -> StateVector {
    // A CostHamiltonian already passed the qubit limit when it was built.
    plus_state(h.n_qubits(), &Limits { max_qubits: usize::MAX }).expect("size checked")
}

/// One product-formula step in place.
#[inline]
pub fn product_step(h: &CostHamiltonian, state: &mut StateVector, u: f64, dt: f64) {
    h.apply_phase(state, dt * (1.0 - u));
    state.apply_mixer_b(dt * u);
}

/// QAOA state `Π_k e^{−iβ_k B} e^{−iγ_k C} |+⟩` (cost-first layers).
pub fn evolve_qaoa(h: &CostHamiltonian, betas: &[f64], gammas: &[f64]) -> Result<StateVector> {
    evolve_qaoa_ordered(h, betas, gammas, LayerOrder::CostFirst)
}

pub fn evolve_qaoa_ordered(
    h: &CostHamiltonian,
    betas: &[f64],
    gammas: &[f64],
    order: LayerOrder,
) -> Result<StateVector> {
    if betas.is_empty() || betas.len() != gammas.len() {
        return Err(invalid(format!(
            "need p >= 1 betas and gammas of equal length, got {} and {}",
            betas.len(),
            gammas.len()
        )));
    }
    let mut state = initial_state(h);
    for (&beta, &gamma) in betas.iter().zip(gammas) {
        match order {
            LayerOrder::CostFirst => {
                h.apply_phase(&mut state, gamma);
                state.apply_mixer_b(beta);
            }
            LayerOrder::MixerFirst => {
                state.apply_mixer_b(beta);
                h.apply_phase(&mut state, gamma);
            }
        }
    }
    Ok(state)
}

/// Exact evolution of a bang-bang pulse train.
pub fn evolve_bangbang(h: &CostHamiltonian, bb: &BangBangSchedule) -> StateVector {
    let mut state = initial_state(h);
    for (kind, d) in bb.pulses() {
        match kind {
            PulseKind::Problem => h.apply_phase(&mut state, d),
            PulseKind::Mixer => state.apply_mixer_b(d),
        }
    }
    state
}

/// First-order product formula on a uniform grid, sampling `u` at step
/// midpoints `(k + ½)·Δt`.
pub fn evolve_schedule(
    h: &CostHamiltonian,
    u: &dyn Fn(f64) -> f64,
    t_f: f64,
    n_steps: usize,
) -> Result<StateVector> {
    if !(t_f.is_finite() && t_f > 0.0) {
        return Err(invalid(format!("t_f must be positive, got {t_f}")));
    }
    if n_steps == 0 {
        return Err(invalid("n_steps must be at least 1"));
    }
    let dt = t_f / n_steps as f64;
    let mut state = initial_state(h);
    for k in 0..n_steps {
        let t = (k as f64 + 0.5) * dt;
        product_step(h, &mut state, u(t), dt);
    }
    Ok(state)
}

/// How a continuous control is turned into unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagator {
    /// Uniform midpoint product formula with this many steps over `[0, t_f]`.
    ProductFormula { n_steps: usize },
    /// Plateaus where the control sits at 0 or 1 are applied exactly; ramps
    /// use midpoint steps no longer than `t_f / n_steps`.
    Segmented { n_steps: usize },
}

impl Default for Propagator {
    fn default() -> Self {
        Propagator::ProductFormula {
            n_steps: DEFAULT_STEPS,
        }
    }
}

pub fn evolve(h: &CostHamiltonian, control: &dyn Control, propagator: Propagator) -> Result<StateVector> {
    match propagator {
        Propagator::ProductFormula { n_steps } => {
            evolve_schedule(h, &|t| control.value_at(t), control.total_time(), n_steps)
        }
        Propagator::Segmented { n_steps } => evolve_segmented(h, control, n_steps),
    }
}

fn evolve_segmented(h: &CostHamiltonian, control: &dyn Control, n_steps: usize) -> Result<StateVector> {
    let t_f = control.total_time();
    if !(t_f.is_finite() && t_f > 0.0) {
        return Err(invalid(format!("t_f must be positive, got {t_f}")));
    }
    if n_steps == 0 {
        return Err(invalid("n_steps must be at least 1"));
    }
    let max_dt = t_f / n_steps as f64;
    let mut state = initial_state(h);
    for seg in control.segments() {
        match seg {
            ControlSegment::Problem { start, end } => h.apply_phase(&mut state, end - start),
            ControlSegment::Mixer { start, end } => state.apply_mixer_b(end - start),
            ControlSegment::Ramp { start, end } => {
                let len = end - start;
                let steps = ((len / max_dt).ceil() as usize).max(1);
                let dt = len / steps as f64;
                for k in 0..steps {
                    let t = start + (k as f64 + 0.5) * dt;
                    product_step(h, &mut state, control.value_at(t), dt);
                }
            }
        }
    }
    Ok(state)
}
