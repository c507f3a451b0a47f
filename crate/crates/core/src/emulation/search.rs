//! Minimum-time majorization by bisection over the annealing time.

use super::cdf::{cdf, worst_margin, Cdf};
use super::{EmulationConfig, EmulationCost};
use crate::error::{invalid, Result};
use crate::optimize::{
    nelder_mead, optimize_polynomial_seeded, powell, Method, Objective, ObjectiveKind,
    OptimizerConfig,
};
use crate::quantum::{evolve, CostHamiltonian, Propagator, ENERGY_TOL};
use crate::schedules::{lagrange_emulation, BangBangSchedule, PolynomialSchedule};

/// Steepness of the smooth Lagrange embeddings used as probe seeds.
const SEED_STEEPNESS: [f64; 5] = [1.0, 3.0, 10.0, 30.0, 300.0];
/// Rounds of level-indicator optimization per probe.
const TARGET_ROUNDS: usize = 4;
/// The violation objective is floored here, so runs stop once comfortably
/// feasible.
const VIOLATION_FLOOR: f64 = -1e-4;

/// CDF of a polynomial schedule under the segmented propagator.
pub fn polynomial_cdf(h: &CostHamiltonian, ps: &PolynomialSchedule, n_steps: usize) -> Result<Cdf> {
    let state = evolve(h, ps, Propagator::Segmented { n_steps })?;
    Ok(cdf(&h.distribution(&state)))
}

struct Prober<'a> {
    h: &'a CostHamiltonian,
    target: &'a Cdf,
    cfg: &'a EmulationConfig,
}

#[derive(Clone)]
struct Point {
    coeffs: Vec<f64>,
    margin: f64,
}

impl Prober<'_> {
    fn margin(&self, coeffs: &[f64], t: f64) -> f64 {
        PolynomialSchedule::new(coeffs.to_vec(), t)
            .and_then(|ps| polynomial_cdf(self.h, &ps, self.cfg.n_steps))
            .map_or(f64::NEG_INFINITY, |g| worst_margin(&g, self.target))
    }

    fn feasible(&self, m: f64) -> bool {
        m >= -self.cfg.tol
    }

    /// Tightest level below the top of the spectrum.
    fn target_level(&self, coeffs: &[f64], t: f64) -> Option<f64> {
        let ps = PolynomialSchedule::new(coeffs.to_vec(), t).ok()?;
        let g = polynomial_cdf(self.h, &ps, self.cfg.n_steps).ok()?;
        let top = self.h.max_energy();
        self.h
            .levels()
            .iter()
            .filter(|&&e| e < top - ENERGY_TOL)
            .map(|&e| (g.eval(e) - self.target.eval(e), e))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, e)| e)
    }

    fn optimizer_config(&self, budget: usize) -> OptimizerConfig {
        OptimizerConfig {
            max_evaluations: budget.max(1),
            restarts: 0,
            ftol: 1e-9,
            ..OptimizerConfig::default()
        }
    }

    /// Best point found at time `t`; feasible when its margin is within
    /// tolerance. Seeds are refined in order of their margin, sharing the
    /// evaluation budget, until one becomes feasible.
    fn probe(&self, t: f64, seeds: &[Vec<f64>]) -> Result<Point> {
        let mut spent = 0;
        let mut starts: Vec<Point> = seeds
            .iter()
            .map(|s| Point {
                coeffs: s.clone(),
                margin: self.margin(s, t),
            })
            .collect();
        spent += starts.len();
        starts.sort_by(|a, b| b.margin.total_cmp(&a.margin));
        let mut best = starts.first().cloned().ok_or_else(|| invalid("probe needs at least one seed"))?;
        let budget = self.cfg.probe_evaluations;
        let n_starts = starts.len();
        for (i, start) in starts.into_iter().enumerate() {
            if self.feasible(best.margin) || spent >= budget {
                break;
            }
            let share = (budget - spent) / (n_starts - i);
            let (p, used) = self.refine(start, t, share)?;
            spent += used;
            if p.margin > best.margin {
                best = p;
            }
        }
        Ok(best)
    }

    /// Level-indicator rounds at the tightest level, then direct
    /// minimization of the largest violation.
    fn refine(&self, start: Point, t: f64, budget: usize) -> Result<(Point, usize)> {
        let mut best = start;
        let mut spent = 0;
        let level_budget = budget / 2;
        let base_obj = Objective::new(self.h.clone(), ObjectiveKind::Expectation)?
            .with_propagator(Propagator::Segmented { n_steps: self.cfg.n_steps });
        let mut last_level = None;
        for _ in 0..TARGET_ROUNDS {
            if spent >= level_budget || self.feasible(best.margin) {
                break;
            }
            let Some(level) = self.target_level(&best.coeffs, t) else { break };
            spent += 1;
            if last_level == Some(level) {
                break;
            }
            last_level = Some(level);
            let obj = base_obj.with_kind(ObjectiveKind::LevelIndicator { threshold: level })?;
            let per_round = (level_budget.saturating_sub(spent)) / 2 + 1;
            let method = match self.cfg.method {
                Method::Gradient => Method::Powell,
                m => m,
            };
            let Ok(r) = optimize_polynomial_seeded(
                &obj,
                t,
                std::slice::from_ref(&best.coeffs),
                &self.optimizer_config(per_round),
                method,
            ) else {
                break;
            };
            spent += r.evaluations;
            let m = self.margin(r.schedule.coeffs(), t);
            spent += 1;
            if m > best.margin {
                best = Point {
                    coeffs: r.schedule.coeffs().to_vec(),
                    margin: m,
                };
                last_level = None;
            }
        }
        if !self.feasible(best.margin) && spent < budget {
            let mut f = |c: &[f64]| (-self.margin(c, t)).max(VIOLATION_FLOOR);
            let cfg = self.optimizer_config(budget - spent);
            let run = match self.cfg.method {
                Method::NelderMead => nelder_mead(&mut f, &best.coeffs, &cfg),
                _ => powell(&mut f, &best.coeffs, &cfg),
            };
            if let Ok(r) = run {
                spent += r.evaluations;
                let m = self.margin(&r.x, t);
                if m > best.margin {
                    best = Point { coeffs: r.x, margin: m };
                }
            }
        }
        Ok((best, spent))
    }
}

fn check_target(h: &CostHamiltonian, target: &Cdf) -> Result<()> {
    let levels = h.levels();
    for &e in target.support() {
        if !levels.iter().any(|&l| (l - e).abs() <= ENERGY_TOL) {
            return Err(invalid(format!("target energy {e} is not a level of the instance")));
        }
    }
    Ok(())
}

/// Shortest `t_f` on the bisection grid over `[t_lo, t_hi]` at which a
/// clipped polynomial with `n_coeffs` coefficients majorizes `target`.
///
/// With a bang-bang `witness` of total time `t_hi`, its Lagrange embedding
/// is checked first at increasing steepness and, once it majorizes the
/// target, bounds the search from above. Each probe ranks its warm starts
/// (the last feasible and infeasible points, Lagrange embeddings of the
/// witness at several low steepnesses, the linear ramp) and refines them in
/// turn: level-indicator optimization at the tightest level, then direct
/// minimization of the largest CDF violation. A probe that fails is treated
/// as infeasible.
pub fn min_time_majorize(
    h: &CostHamiltonian,
    n_coeffs: usize,
    target: &Cdf,
    t_hi: f64,
    witness: Option<&BangBangSchedule>,
    cfg: &EmulationConfig,
) -> Result<EmulationCost> {
    cfg.validate()?;
    check_target(h, target)?;
    if n_coeffs == 0 || n_coeffs % 2 != 0 {
        return Err(invalid("polynomial schedules need an even number of coefficients"));
    }
    if !(t_hi.is_finite() && t_hi > 0.0) {
        return Err(invalid(format!("t_hi must be positive, got {t_hi}")));
    }
    if let Some(w) = witness {
        if (w.total_time() - t_hi).abs() > 1e-9 * t_hi {
            return Err(invalid("witness duration differs from t_hi"));
        }
        if 2 * w.p() > n_coeffs {
            return Err(invalid("witness has more pulses than the polynomial can embed"));
        }
    }
    let prober = Prober { h, target, cfg };
    let ramp = PolynomialSchedule::linear_ramp(n_coeffs, 1.0)?.coeffs().to_vec();
    let mut smooth_seeds = Vec::new();
    if let Some(w) = witness {
        for m in SEED_STEEPNESS {
            if let Ok(ps) = lagrange_emulation(w, m).and_then(|ps| ps.padded(n_coeffs)) {
                smooth_seeds.push(ps.coeffs().to_vec());
            }
        }
    }
    smooth_seeds.push(ramp);

    let mut hi: Option<Point> = None;
    let mut hi_from_probe = false;
    if let Some(w) = witness {
        let mut m = cfg.witness_steepness;
        while m <= cfg.max_witness_steepness {
            if let Ok(ps) = lagrange_emulation(w, m).and_then(|ps| ps.padded(n_coeffs)) {
                let margin = prober.margin(ps.coeffs(), t_hi);
                if prober.feasible(margin) {
                    hi = Some(Point {
                        coeffs: ps.coeffs().to_vec(),
                        margin,
                    });
                    break;
                }
            }
            m *= 100.0;
        }
    }
    if hi.is_none() {
        let p = prober.probe(t_hi, &smooth_seeds)?;
        if prober.feasible(p.margin) {
            hi = Some(p);
            hi_from_probe = true;
        }
    }
    let Some(mut hi) = hi else {
        return Ok(EmulationCost::Unreachable {
            reason: format!("no schedule majorizes the target at t_hi = {t_hi}"),
        });
    };
    let mut t_best = t_hi;

    let seeds = |hi: &Point, hi_from_probe: bool, last: Option<&Point>| -> Vec<Vec<f64>> {
        let mut s = Vec::new();
        if hi_from_probe {
            s.push(hi.coeffs.clone());
        }
        if let Some(l) = last {
            s.push(l.coeffs.clone());
        }
        s.extend(smooth_seeds.iter().cloned());
        s
    };

    let mut lo = cfg.t_lo_fraction * t_hi;
    let first = prober.probe(lo, &seeds(&hi, hi_from_probe, None))?;
    if prober.feasible(first.margin) {
        return finish(lo, first);
    }
    let mut last = Some(first);
    while t_best - lo > cfg.resolution * t_hi {
        let mid = 0.5 * (lo + t_best);
        let p = prober.probe(mid, &seeds(&hi, hi_from_probe, last.as_ref()))?;
        if prober.feasible(p.margin) {
            t_best = mid;
            hi = p;
            hi_from_probe = true;
        } else {
            lo = mid;
            last = Some(p);
        }
    }
    finish(t_best, hi)
}

fn finish(t: f64, p: Point) -> Result<EmulationCost> {
    Ok(EmulationCost::Finite {
        t,
        schedule: PolynomialSchedule::new(p.coeffs, t)?,
        margin: p.margin,
    })
}
