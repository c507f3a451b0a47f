//! Parameter optimization: derivative-free minimizers, QAOA bootstrapping,
//! adjoint gradients of schedule objectives and polynomial-schedule search.

mod gradient;
mod line_search;
mod nelder_mead;
mod objective;
mod polynomial;
mod powell;
mod qaoa;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use gradient::{
    coeff_gradients_from_phi, gradient_descent_piecewise, gradient_phi, gradient_poly_coeffs,
    DescentConfig, DescentResult, GradientReport,
};
pub use nelder_mead::{nelder_mead, NelderMead};
pub use objective::{Objective, ObjectiveKind};
pub use polynomial::{
    optimize_polynomial, optimize_polynomial_seeded, random_coefficients, PolyOptResult,
};
pub use powell::{powell, Powell};
pub use qaoa::{bootstrap_qaoa, canonical_durations, qaoa_expectation, BootstrapLevel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Outer iterations (simplex updates, Powell sweeps, descent steps).
    pub max_iterations: usize,
    /// Objective evaluations per run; a run stops at the first check after
    /// crossing it.
    pub max_evaluations: usize,
    /// Absolute function tolerance.
    pub ftol: f64,
    /// Parameter tolerance (infinity norm).
    pub xtol: f64,
    /// Randomized restarts on top of the deterministic seed point.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 2000,
            max_evaluations: 20_000,
            ftol: 1e-10,
            xtol: 1e-8,
            restarts: 5,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.max_evaluations == 0 {
            return Err(invalid("iteration and evaluation limits must be positive"));
        }
        if !(self.ftol > 0.0 && self.ftol.is_finite() && self.xtol > 0.0 && self.xtol.is_finite()) {
            return Err(invalid("tolerances must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub objective: f64,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Stopped on tolerance rather than on a limit.
    pub converged: bool,
    /// Best point after each iteration.
    pub trace: Vec<TraceRow>,
}

impl OptResult {
    /// `iteration,objective,x0,x1,...` with a header row.
    pub fn trace_csv(&self) -> String {
        trace_csv(&self.trace)
    }
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let width = rows.iter().map(|r| r.params.len()).max().unwrap_or(0);
    let mut out = String::from("iteration,objective");
    for i in 0..width {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{:e}", r.iteration, r.objective));
        for v in &r.params {
            out.push_str(&format!(",{v:e}"));
        }
        out.push('\n');
    }
    out
}

/// A derivative-free minimizer over `R^k`.
pub trait Minimizer {
    fn minimize(&self, f: &mut dyn FnMut(&[f64]) -> f64, x0: &[f64]) -> Result<OptResult>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Powell,
    NelderMead,
    Gradient,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Powell => "powell",
            Method::NelderMead => "nelder-mead",
            Method::Gradient => "gradient",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "powell" => Ok(Method::Powell),
            "nelder-mead" | "neldermead" => Ok(Method::NelderMead),
            "gradient" => Ok(Method::Gradient),
            _ => Err(invalid(format!(
                "unknown method {s:?}; expected nelder-mead, powell or gradient"
            ))),
        }
    }
}

/// Counts evaluations, remembers the best point and turns non-finite values
/// into `+inf` plus a recorded failure.
pub(crate) struct Tracked<'a> {
    f: &'a mut dyn FnMut(&[f64]) -> f64,
    pub evals: usize,
    budget: usize,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    failure: Option<Error>,
}

impl<'a> Tracked<'a> {
    pub fn new(f: &'a mut dyn FnMut(&[f64]) -> f64, budget: usize) -> Self {
        Tracked {
            f,
            evals: 0,
            budget,
            best_x: Vec::new(),
            best_f: f64::INFINITY,
            failure: None,
        }
    }

    pub fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if !v.is_finite() {
            if self.failure.is_none() {
                self.failure = Some(Error::NonFiniteObjective {
                    value: v,
                    point: x.to_vec(),
                });
            }
            return f64::INFINITY;
        }
        if v < self.best_f || self.best_x.is_empty() {
            self.best_f = v;
            self.best_x = x.to_vec();
        }
        v
    }

    pub fn exhausted(&self) -> bool {
        self.evals >= self.budget
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn check(&self) -> Result<()> {
        match &self.failure {
            Some(e) => Err(e.clone()),
            None => Ok(()),
        }
    }
}

pub(crate) fn check_start(x0: &[f64], cfg: &OptimizerConfig) -> Result<()> {
    cfg.validate()?;
    if x0.is_empty() {
        return Err(invalid("need at least one parameter"));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(invalid("starting point must be finite"));
    }
    Ok(())
}
