use super::{check_start, Minimizer, OptResult, OptimizerConfig, TraceRow, Tracked};
use crate::error::Result;

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

/// Downhill simplex. After the simplex collapses the search restarts from
/// the best vertex with a fresh simplex, until a restart gains less than
/// `ftol`.
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMead {
    pub config: OptimizerConfig,
    /// Absolute edge length of the initial simplex along each axis.
    pub initial_step: f64,
    pub max_restarts: usize,
}

impl NelderMead {
    pub fn new(config: OptimizerConfig) -> Self {
        NelderMead {
            config,
            initial_step: 0.1,
            max_restarts: 10,
        }
    }
}

impl Minimizer for NelderMead {
    fn minimize(&self, f: &mut dyn FnMut(&[f64]) -> f64, x0: &[f64]) -> Result<OptResult> {
        let cfg = &self.config;
        check_start(x0, cfg)?;
        let mut t = Tracked::new(f, cfg.max_evaluations);
        let f0 = t.eval(x0);
        t.check()?;
        let mut trace = vec![TraceRow {
            iteration: 0,
            objective: f0,
            params: x0.to_vec(),
        }];
        let mut iterations = 0;
        let mut converged;
        let mut restarts = 0;
        loop {
            let start = t.best_x.clone();
            let start_f = t.best_f;
            let run = simplex_run(&mut t, &start, start_f, self.initial_step, cfg, &mut iterations, &mut trace);
            t.check()?;
            converged = run;
            if !run || t.exhausted() || iterations >= cfg.max_iterations {
                break;
            }
            if start_f - t.best_f <= cfg.ftol || restarts >= self.max_restarts {
                break;
            }
            restarts += 1;
        }
        Ok(OptResult {
            x: t.best_x.clone(),
            f: t.best_f,
            iterations,
            evaluations: t.evals,
            converged,
            trace,
        })
    }
}

/// Nelder-Mead with the default simplex and restart policy.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    NelderMead::new(cfg.clone()).minimize(f, x0)
}

/// One simplex descent; `true` when it stopped on tolerance.
fn simplex_run(
    t: &mut Tracked,
    x0: &[f64],
    f0: f64,
    step: f64,
    cfg: &OptimizerConfig,
    iterations: &mut usize,
    trace: &mut Vec<TraceRow>,
) -> bool {
    let k = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(k + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..k {
        let mut v = x0.to_vec();
        v[i] += step;
        let fv = t.eval(&v);
        simplex.push((v, fv));
    }
    loop {
        if t.failed() {
            return false;
        }
        // stable: ties keep their earlier position
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_spread = simplex.iter().map(|s| (s.1 - simplex[0].1).abs()).fold(0.0, f64::max);
        let x_spread = simplex
            .iter()
            .flat_map(|s| s.0.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= cfg.ftol && x_spread <= cfg.xtol {
            return true;
        }
        if *iterations >= cfg.max_iterations || t.exhausted() {
            return false;
        }
        *iterations += 1;

        let centroid: Vec<f64> = (0..k)
            .map(|j| simplex[..k].iter().map(|s| s.0[j]).sum::<f64>() / k as f64)
            .collect();
        let worst = simplex[k].clone();
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = along(ALPHA);
        let fr = t.eval(&xr);
        let mut shrink = false;
        if fr < simplex[0].1 {
            let xe = along(ALPHA * GAMMA);
            let fe = t.eval(&xe);
            simplex[k] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[k - 1].1 {
            simplex[k] = (xr, fr);
        } else if fr < worst.1 {
            let xc = along(ALPHA * RHO);
            let fc = t.eval(&xc);
            if fc <= fr {
                simplex[k] = (xc, fc);
            } else {
                shrink = true;
            }
        } else {
            let xcc = along(-RHO);
            let fcc = t.eval(&xcc);
            if fcc < worst.1 {
                simplex[k] = (xcc, fcc);
            } else {
                shrink = true;
            }
        }
        if shrink {
            let best = simplex[0].0.clone();
            for s in simplex.iter_mut().skip(1) {
                let v: Vec<f64> = best
                    .iter()
                    .zip(&s.0)
                    .map(|(b, x)| b + SIGMA * (x - b))
                    .collect();
                let fv = t.eval(&v);
                *s = (v, fv);
            }
        }
        trace.push(TraceRow {
            iteration: *iterations,
            objective: t.best_f,
            params: t.best_x.clone(),
        });
    }
}
