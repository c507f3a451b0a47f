use super::line_search::line_minimize;
use super::{check_start, Minimizer, OptResult, OptimizerConfig, TraceRow, Tracked};
use crate::error::Result;

/// Powell's conjugate-direction method with the direction-replacement rule
/// of Numerical Recipes. Line minimizations bracket from step 1 along each
/// direction and refine with Brent.
#[derive(Debug, Clone, PartialEq)]
pub struct Powell {
    pub config: OptimizerConfig,
    /// Relative tolerance handed to the Brent line search.
    pub line_tol: f64,
}

impl Powell {
    pub fn new(config: OptimizerConfig) -> Self {
        let line_tol = config.xtol.max(1.5e-8);
        Powell { config, line_tol }
    }
}

impl Minimizer for Powell {
    fn minimize(&self, f: &mut dyn FnMut(&[f64]) -> f64, x0: &[f64]) -> Result<OptResult> {
        let cfg = &self.config;
        check_start(x0, cfg)?;
        let k = x0.len();
        let mut t = Tracked::new(f, cfg.max_evaluations);
        let mut x = x0.to_vec();
        let mut fx = t.eval(&x);
        t.check()?;
        let mut trace = vec![TraceRow {
            iteration: 0,
            objective: fx,
            params: x.clone(),
        }];
        let mut dirs: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let mut d = vec![0.0; k];
                d[i] = 1.0;
                d
            })
            .collect();
        let mut iterations = 0;
        let mut converged = false;
        while iterations < cfg.max_iterations && !t.exhausted() {
            iterations += 1;
            let (x_start, f_start) = (x.clone(), fx);
            let mut biggest_drop = 0.0;
            let mut big_index = 0;
            for (i, d) in dirs.iter().enumerate() {
                let before = fx;
                (x, fx) = self.line(&mut t, &x, fx, d);
                if before - fx > biggest_drop {
                    biggest_drop = before - fx;
                    big_index = i;
                }
                if t.failed() {
                    break;
                }
            }
            t.check()?;
            trace.push(TraceRow {
                iteration: iterations,
                objective: fx,
                params: x.clone(),
            });
            if f_start - fx <= cfg.ftol {
                converged = true;
                break;
            }
            let step: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| a - b).collect();
            if step.iter().all(|s| s.abs() <= cfg.xtol) {
                converged = true;
                break;
            }
            let extrapolated: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + s).collect();
            let f_ext = t.eval(&extrapolated);
            t.check()?;
            if f_ext < f_start {
                let a = f_start - fx - biggest_drop;
                let b = f_start - f_ext;
                let test = 2.0 * (f_start - 2.0 * fx + f_ext) * a * a - biggest_drop * b * b;
                if test < 0.0 {
                    (x, fx) = self.line(&mut t, &x, fx, &step);
                    t.check()?;
                    dirs[big_index] = dirs[k - 1].clone();
                    dirs[k - 1] = step;
                }
            }
        }
        // line searches only accept improvements, so x is the best point seen
        // along the accepted path; report the global best for safety.
        if t.best_f < fx {
            x = t.best_x.clone();
            fx = t.best_f;
        }
        Ok(OptResult {
            x,
            f: fx,
            iterations,
            evaluations: t.evals,
            converged,
            trace,
        })
    }
}

impl Powell {
    fn line(&self, t: &mut Tracked, x: &[f64], fx: f64, d: &[f64]) -> (Vec<f64>, f64) {
        let point = |a: f64| -> Vec<f64> { x.iter().zip(d).map(|(xi, di)| xi + a * di).collect() };
        let mut phi = |a: f64| t.eval(&point(a));
        let (a, fa) = line_minimize(&mut phi, fx, self.line_tol);
        if a == 0.0 {
            (x.to_vec(), fx)
        } else {
            (point(a), fa)
        }
    }
}

pub fn powell(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    Powell::new(cfg.clone()).minimize(f, x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn diagonal_quadratic_in_two_sweeps() {
        let mut f = |x: &[f64]| 3.0 * (x[0] - 1.0).powi(2) + 0.5 * (x[1] + 2.0).powi(2) + 7.0 * x[2] * x[2];
        let r = powell(&mut f, &[4.0, 4.0, -3.0], &OptimizerConfig::default()).unwrap();
        assert!(r.converged);
        assert!(r.iterations <= 2, "{} sweeps", r.iterations);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] + 2.0).abs() < 1e-6 && r.x[2].abs() < 1e-6);
    }

    #[test]
    fn rosenbrock() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = powell(&mut f, &[-1.2, 1.0], &OptimizerConfig::default()).unwrap();
        assert!(r.f <= 1e-6, "f* = {}", r.f);
    }

    #[test]
    fn shift_invariance() {
        let base = |x: &[f64]| (x[0] - 0.5).powi(2) + 2.0 * (x[1] + 0.25).powi(2) + x[0] * x[1];
        let mut f = |x: &[f64]| base(x);
        let mut g = |x: &[f64]| base(x) + 7.0;
        let cfg = OptimizerConfig::default();
        let a = powell(&mut f, &[2.0, 1.0], &cfg).unwrap();
        let b = powell(&mut g, &[2.0, 1.0], &cfg).unwrap();
        assert_eq!(a.trace.len(), b.trace.len());
        for (ra, rb) in a.trace.iter().zip(&b.trace) {
            for (p, q) in ra.params.iter().zip(&rb.params) {
                assert!((p - q).abs() < 1e-6);
            }
        }
        assert!((b.f - a.f - 7.0).abs() < 1e-9);
    }

    #[test]
    fn never_worse_than_start_and_aborts_on_nan() {
        let mut f = |x: &[f64]| (2.0 * x[0]).cos() * (x[1] - 0.3).abs();
        let f0 = f(&[0.1, 0.9]);
        let r = powell(&mut f, &[0.1, 0.9], &OptimizerConfig::default()).unwrap();
        assert!(r.f <= f0);
        let mut bad = |x: &[f64]| if x[0] > 0.5 { f64::INFINITY } else { -x[0] };
        assert!(matches!(
            powell(&mut bad, &[0.0], &OptimizerConfig::default()),
            Err(Error::NonFiniteObjective { .. })
        ));
    }

    #[test]
    fn constant_returns_start() {
        let mut f = |_: &[f64]| -1.0;
        let r = powell(&mut f, &[0.2, 0.4], &OptimizerConfig::default()).unwrap();
        assert_eq!(r.x, vec![0.2, 0.4]);
        assert!(r.converged);
    }
}
