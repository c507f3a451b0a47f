use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gradient::gradient_poly_coeffs;
use super::nelder_mead::nelder_mead;
use super::objective::Objective;
use super::powell::powell;
use super::{check_start, Method, OptResult, OptimizerConfig, TraceRow};
use crate::error::{invalid, Error, Result};
use crate::quantum::Propagator;
use crate::schedules::poly::from_roots;
use crate::schedules::PolynomialSchedule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyOptResult {
    pub schedule: PolynomialSchedule,
    pub objective: f64,
    /// Objective at the first seed (the linear ramp for
    /// [`optimize_polynomial`]).
    pub seed_objective: f64,
    pub evaluations: usize,
    /// Seeds whose run ended in an error.
    pub failures: Vec<String>,
    /// Trace of the winning run.
    pub trace: Vec<TraceRow>,
}

/// Coefficients of the degree `n − 1` polynomial through `n` equally spaced
/// nodes on `[0, 1]` with values drawn uniformly from `[0, 1]`.
pub fn random_coefficients(n_coeffs: usize, rng: &mut impl Rng) -> Vec<f64> {
    if n_coeffs == 1 {
        return vec![rng.gen()];
    }
    let nodes: Vec<f64> = (0..n_coeffs).map(|j| j as f64 / (n_coeffs - 1) as f64).collect();
    let mut out = vec![0.0; n_coeffs];
    for (j, &sj) in nodes.iter().enumerate() {
        let value: f64 = rng.gen();
        let others: Vec<f64> = nodes.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, &s)| s).collect();
        let denom: f64 = others.iter().map(|s| sj - s).product();
        for (o, c) in out.iter_mut().zip(from_roots(&others)) {
            *o += value * c / denom;
        }
    }
    out
}

/// Best schedule over the linear-ramp seed and `cfg.restarts` random seeds.
pub fn optimize_polynomial(
    obj: &Objective,
    n_coeffs: usize,
    t_f: f64,
    cfg: &OptimizerConfig,
    method: Method,
) -> Result<PolyOptResult> {
    let ramp = PolynomialSchedule::linear_ramp(n_coeffs, t_f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seeds = vec![ramp.coeffs().to_vec()];
    for _ in 0..cfg.restarts {
        seeds.push(random_coefficients(n_coeffs, &mut rng));
    }
    optimize_polynomial_seeded(obj, t_f, &seeds, cfg, method)
}

/// Runs `method` from every seed and keeps the lowest objective.
pub fn optimize_polynomial_seeded(
    obj: &Objective,
    t_f: f64,
    seeds: &[Vec<f64>],
    cfg: &OptimizerConfig,
    method: Method,
) -> Result<PolyOptResult> {
    let first = seeds.first().ok_or_else(|| invalid("no seeds"))?;
    let seed_objective = obj.evaluate(&PolynomialSchedule::new(first.clone(), t_f)?)?;
    let mut best: Option<(OptResult, f64)> = None;
    let mut failures = Vec::new();
    let mut evaluations = 0;
    for seed in seeds {
        let run = match method {
            Method::Powell => {
                let mut f = |c: &[f64]| evaluate_coeffs(obj, c, t_f);
                powell(&mut f, seed, cfg)
            }
            Method::NelderMead => {
                let mut f = |c: &[f64]| evaluate_coeffs(obj, c, t_f);
                nelder_mead(&mut f, seed, cfg)
            }
            Method::Gradient => coefficient_descent(obj, seed, t_f, cfg),
        };
        let run = match run {
            Ok(r) => r,
            Err(e) => {
                failures.push(e.to_string());
                continue;
            }
        };
        evaluations += run.evaluations;
        let value = evaluate_coeffs(obj, &run.x, t_f);
        if !value.is_finite() {
            failures.push(format!("non-finite objective at {:?}", run.x));
            continue;
        }
        if best.as_ref().is_none_or(|(_, v)| value < *v) {
            best = Some((run, value));
        }
    }
    let Some((run, objective)) = best else {
        return Err(Error::Optimizer(format!(
            "all {} runs failed: {}",
            seeds.len(),
            failures.join("; ")
        )));
    };
    Ok(PolyOptResult {
        schedule: PolynomialSchedule::new(run.x, t_f)?,
        objective,
        seed_objective,
        evaluations,
        failures,
        trace: run.trace,
    })
}

fn evaluate_coeffs(obj: &Objective, coeffs: &[f64], t_f: f64) -> f64 {
    PolynomialSchedule::new(coeffs.to_vec(), t_f)
        .and_then(|ps| obj.evaluate(&ps))
        .unwrap_or(f64::NAN)
}

/// Steepest descent on the coefficients with backtracking, driven by the
/// adjoint gradient of the product formula.
fn coefficient_descent(obj: &Objective, x0: &[f64], t_f: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    check_start(x0, cfg)?;
    let n_steps = match obj.propagator() {
        Propagator::ProductFormula { n_steps } | Propagator::Segmented { n_steps } => n_steps.max(2),
    };
    let report = |c: &[f64]| -> Result<(f64, Vec<f64>)> {
        let r = gradient_poly_coeffs(obj, &PolynomialSchedule::new(c.to_vec(), t_f)?, n_steps)?;
        Ok((r.objective, r.coeff_gradients))
    };
    let mut x = x0.to_vec();
    let (mut fx, mut grad) = report(&x)?;
    let mut evaluations = 1;
    let mut trace = vec![TraceRow {
        iteration: 0,
        objective: fx,
        params: x.clone(),
    }];
    let mut eta: Option<f64> = None;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations && evaluations < cfg.max_evaluations {
        iterations += 1;
        let scale = grad.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        if scale == 0.0 {
            converged = true;
            break;
        }
        let mut step = eta.unwrap_or(0.1 / scale);
        let mut accepted = None;
        for _ in 0..30 {
            let trial: Vec<f64> = x.iter().zip(&grad).map(|(xi, g)| xi - step * g).collect();
            let (ft, gt) = report(&trial)?;
            evaluations += 1;
            if ft < fx {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, ft, gt)) = accepted else {
            converged = true;
            break;
        };
        let gain = fx - ft;
        x = trial;
        fx = ft;
        grad = gt;
        eta = Some(2.0 * step);
        trace.push(TraceRow {
            iteration: iterations,
            objective: fx,
            params: x.clone(),
        });
        if gain <= cfg.ftol {
            converged = true;
            break;
        }
    }
    Ok(OptResult {
        x,
        f: fx,
        iterations,
        evaluations,
        converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::{gradient_descent_piecewise, DescentConfig, ObjectiveKind};
    use crate::problems::Graph;
    use crate::quantum::CostHamiltonian;
    use crate::schedules::{Control, PiecewiseSchedule};
    use crate::Limits;

    fn k2_expectation() -> Objective {
        Objective::for_graph(&Graph::complete(2).unwrap(), ObjectiveKind::Expectation, &Limits::default()).unwrap()
    }

    #[test]
    fn random_coefficients_interpolate_unit_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 4, 6] {
            let c = random_coefficients(n, &mut rng);
            assert_eq!(c.len(), n);
            let ps = crate::schedules::poly::horner;
            for j in 0..n {
                let s = if n == 1 { 0.0 } else { j as f64 / (n - 1) as f64 };
                let v = ps(&c, s);
                assert!((0.0..=1.0).contains(&v), "{v}");
            }
        }
    }

    #[test]
    fn k2_powell_reaches_ground_state() {
        let obj = k2_expectation();
        let cfg = OptimizerConfig {
            restarts: 2,
            ..Default::default()
        };
        let r = optimize_polynomial(&obj, 2, 10.0, &cfg, Method::Powell).unwrap();
        assert!(r.objective <= -0.9, "{}", r.objective);
        assert!(r.objective <= r.seed_objective);

        // reference: piecewise descent with a comparable budget
        let ramp = PolynomialSchedule::linear_ramp(2, 10.0).unwrap();
        let init = PiecewiseSchedule::sampled(&ramp, 101).unwrap();
        let d = gradient_descent_piecewise(
            &obj.clone().with_propagator(Propagator::ProductFormula { n_steps: 1001 }),
            &init,
            &DescentConfig {
                n_steps: 1001,
                max_iterations: 100,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(d.objective <= -0.9);
    }

    #[test]
    fn every_method_beats_the_ramp_seed() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        let obj = Objective::for_graph(&g, ObjectiveKind::Expectation, &Limits::default())
            .unwrap()
            .with_propagator(Propagator::ProductFormula { n_steps: 200 });
        let cfg = OptimizerConfig {
            restarts: 1,
            max_evaluations: 600,
            ..Default::default()
        };
        for method in [Method::Powell, Method::NelderMead, Method::Gradient] {
            let r = optimize_polynomial(&obj, 4, 1.5, &cfg, method).unwrap();
            assert!(r.objective <= r.seed_objective, "{method}");
            let check = obj.evaluate(&r.schedule).unwrap();
            assert!((check - r.objective).abs() < 1e-12);
            assert!(r.schedule.total_time() == 1.5);
        }
    }

    #[test]
    fn more_restarts_never_worse() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = CostHamiltonian::from_graph(&g, &Limits::default()).unwrap();
        let obj = Objective::new(h, ObjectiveKind::Expectation)
            .unwrap()
            .with_propagator(Propagator::ProductFormula { n_steps: 100 });
        let base = OptimizerConfig {
            max_evaluations: 300,
            ..Default::default()
        };
        let few = optimize_polynomial(&obj, 2, 1.0, &OptimizerConfig { restarts: 1, ..base.clone() }, Method::NelderMead).unwrap();
        let many = optimize_polynomial(&obj, 2, 1.0, &OptimizerConfig { restarts: 4, ..base }, Method::NelderMead).unwrap();
        assert!(many.objective <= few.objective);
    }

    #[test]
    fn rejects_empty_seed_list() {
        let obj = k2_expectation();
        assert!(optimize_polynomial_seeded(&obj, 1.0, &[], &OptimizerConfig::default(), Method::Powell).is_err());
        assert!(optimize_polynomial(&obj, 3, 1.0, &OptimizerConfig::default(), Method::Powell).is_err());
    }
}
