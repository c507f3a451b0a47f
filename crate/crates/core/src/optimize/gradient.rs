//! Adjoint gradients of the final-time objective with respect to the control.
//!
//! The forward pass is the midpoint product formula of
//! [`evolve_schedule`](crate::quantum::evolve_schedule). The costate
//! `|k⟩ = U†(t, t_f)·O·|x(t_f)⟩` is carried backwards through the adjoint of
//! the very same steps, so `Φ_k·Δt` is the exact derivative of the simulated
//! objective with respect to the control sample `u_k` of step `k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::objective::Objective;
use crate::error::{invalid, Result};
use crate::quantum::{plus_state, StateVector, PIECEWISE_STEPS};
use crate::schedules::{clip01, Control, PiecewiseSchedule, PolynomialSchedule};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    /// Step midpoints `(k + ½)·Δt`.
    pub times: Vec<f64>,
    /// `Φ` at each step midpoint.
    pub phi: Vec<f64>,
    /// `dJ/dc_i`, empty unless the schedule is polynomial.
    pub coeff_gradients: Vec<f64>,
    pub dt: f64,
    /// Objective of the discretized evolution.
    pub objective: f64,
}

/// `⟨a|B|b⟩` with `B = −Σ σx`.
fn mixer_matrix_element(a: &StateVector, b: &StateVector) -> Complex64 {
    let (a, b) = (a.amplitudes(), b.amplitudes());
    let n = a.len().trailing_zeros();
    let mut acc = Complex64::new(0.0, 0.0);
    for q in 0..n {
        let bit = 1usize << q;
        for (i, ai) in a.iter().enumerate() {
            acc += ai.conj() * b[i ^ bit];
        }
    }
    -acc
}

/// `⟨a|C|b⟩` for diagonal `C`.
fn diagonal_matrix_element(a: &StateVector, energies: &[f64], b: &StateVector) -> Complex64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .zip(energies)
        .map(|((x, y), e)| x.conj() * y * e)
        .sum()
}

/// Objective and `dJ/du_k` for the product formula driven by the samples
/// `u[k]` on a uniform grid of step `dt`.
pub(crate) fn adjoint_sweep(obj: &Objective, u: &[f64], dt: f64) -> (f64, Vec<f64>) {
    let h = obj.hamiltonian();
    let mut x = plus_state(h.n_qubits(), &Limits { max_qubits: usize::MAX }).expect("size checked");
    for &uk in u {
        h.apply_phase(&mut x, dt * (1.0 - uk));
        x.apply_mixer_b(dt * uk);
    }
    let value = obj.value(&x);
    let costate: Vec<Complex64> = x
        .amplitudes()
        .iter()
        .zip(obj.observable())
        .map(|(a, o)| a * o)
        .collect();
    let mut lambda = StateVector::from_amplitudes(costate).expect("same dimension");

    let mut grad = vec![0.0; u.len()];
    for k in (0..u.len()).rev() {
        let uk = u[k];
        // x and lambda are at the end of step k
        let after_mixer = mixer_matrix_element(&lambda, &x);
        x.apply_mixer_b(-dt * uk);
        lambda.apply_mixer_b(-dt * uk);
        let after_phase = diagonal_matrix_element(&lambda, h.energies(), &x);
        h.apply_phase(&mut x, -dt * (1.0 - uk));
        h.apply_phase(&mut lambda, -dt * (1.0 - uk));
        grad[k] = 2.0 * dt * (after_mixer.im - after_phase.im);
    }
    (value, grad)
}

fn grid(t_f: f64, n_steps: usize) -> Result<(f64, Vec<f64>)> {
    if n_steps < 2 {
        return Err(invalid(format!("gradient grid needs at least 2 steps, got {n_steps}")));
    }
    if !(t_f.is_finite() && t_f > 0.0) {
        return Err(invalid(format!("t_f must be positive, got {t_f}")));
    }
    let dt = t_f / n_steps as f64;
    Ok((dt, (0..n_steps).map(|k| (k as f64 + 0.5) * dt).collect()))
}

/// `Φ(t) = i⟨x|(B − C)|k⟩ + c.c.` on the step midpoints of an `n_steps`
/// product formula.
pub fn gradient_phi(obj: &Objective, control: &dyn Control, n_steps: usize) -> Result<GradientReport> {
    let (dt, times) = grid(control.total_time(), n_steps)?;
    let u: Vec<f64> = times.iter().map(|&t| clip01(control.value_at(t))).collect();
    let (objective, grad) = adjoint_sweep(obj, &u, dt);
    Ok(GradientReport {
        times,
        phi: grad.iter().map(|g| g / dt).collect(),
        coeff_gradients: Vec::new(),
        dt,
        objective,
    })
}

/// `dJ/dc_i = Σ_k Φ_k·Δt·s_k^i` over steps where the unclipped polynomial is
/// strictly inside `(0, 1)`.
pub fn coeff_gradients_from_phi(phi: &[f64], dt: f64, ps: &PolynomialSchedule) -> Vec<f64> {
    let mut out = vec![0.0; ps.coeffs().len()];
    for (k, &p) in phi.iter().enumerate() {
        let s = (k as f64 + 0.5) * dt / ps.t_f();
        let raw = ps.raw(s);
        if !(raw > 0.0 && raw < 1.0) {
            continue;
        }
        let mut power = 1.0;
        for g in out.iter_mut() {
            *g += p * dt * power;
            power *= s;
        }
    }
    out
}

pub fn gradient_poly_coeffs(
    obj: &Objective,
    ps: &PolynomialSchedule,
    n_steps: usize,
) -> Result<GradientReport> {
    let mut report = gradient_phi(obj, ps, n_steps)?;
    report.coeff_gradients = coeff_gradients_from_phi(&report.phi, report.dt, ps);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentConfig {
    /// Product-formula steps over `[0, t_f]`.
    pub n_steps: usize,
    pub max_iterations: usize,
    pub max_backtracks: usize,
    /// Largest node change of the first trial step.
    pub initial_step: f64,
    /// Stop once an accepted step gains less than this.
    pub ftol: f64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            n_steps: PIECEWISE_STEPS,
            max_iterations: 500,
            max_backtracks: 30,
            initial_step: 0.1,
            ftol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentResult {
    pub schedule: PiecewiseSchedule,
    pub objective: f64,
    pub initial_objective: f64,
    pub accepted_steps: usize,
    pub iterations: usize,
}

/// `dJ/du_j` for the nodes of a piecewise-linear schedule.
fn node_gradient(obj: &Objective, sched: &PiecewiseSchedule, n_steps: usize) -> Result<(f64, Vec<f64>)> {
    let (dt, times) = grid(sched.t_f(), n_steps)?;
    let u: Vec<f64> = times.iter().map(|&t| sched.value_at(t)).collect();
    let (value, grad) = adjoint_sweep(obj, &u, dt);
    let mut nodes = vec![0.0; sched.values().len()];
    for (&t, g) in times.iter().zip(grad) {
        let (j, w) = sched.locate(t);
        nodes[j] += (1.0 - w) * g;
        nodes[j + 1] += w * g;
    }
    Ok((value, nodes))
}

/// Projected gradient descent on the node values with backtracking.
///
/// The trial step is `u ← clip01(u − η·∇J)`. An accepted step doubles `η`;
/// a rejected one halves it, and `max_backtracks` rejections in a row end
/// the search with the best iterate.
pub fn gradient_descent_piecewise(
    obj: &Objective,
    init: &PiecewiseSchedule,
    cfg: &DescentConfig,
) -> Result<DescentResult> {
    if cfg.max_iterations == 0 || !(cfg.initial_step > 0.0) || !(cfg.ftol > 0.0) {
        return Err(invalid("descent limits and step must be positive"));
    }
    let mut current = init.clone();
    let (mut value, mut grad) = node_gradient(obj, &current, cfg.n_steps)?;
    let initial_objective = value;
    let mut eta: Option<f64> = None;
    let mut accepted = 0;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        let projected: Vec<f64> = current
            .values()
            .iter()
            .zip(&grad)
            .map(|(&u, &g)| if (u <= 0.0 && g > 0.0) || (u >= 1.0 && g < 0.0) { 0.0 } else { g })
            .collect();
        let scale = projected.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        if scale == 0.0 {
            break;
        }
        let mut step = eta.unwrap_or(cfg.initial_step / scale);
        let mut next = None;
        for _ in 0..=cfg.max_backtracks {
            let values: Vec<f64> = current
                .values()
                .iter()
                .zip(&projected)
                .map(|(&u, &g)| clip01(u - step * g))
                .collect();
            let trial = PiecewiseSchedule::new(values, current.t_f())?;
            let (v, g) = node_gradient(obj, &trial, cfg.n_steps)?;
            if v < value {
                next = Some((trial, v, g));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, v, g)) = next else { break };
        let gain = value - v;
        current = trial;
        value = v;
        grad = g;
        accepted += 1;
        eta = Some(2.0 * step);
        if gain < cfg.ftol {
            break;
        }
    }
    Ok(DescentResult {
        schedule: current,
        objective: value,
        initial_objective,
        accepted_steps: accepted,
        iterations,
    })
}
