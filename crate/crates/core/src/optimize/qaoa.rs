use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::nelder_mead::nelder_mead;
use super::OptimizerConfig;
use crate::error::{invalid, Result};
use crate::quantum::{evolve_qaoa, CostHamiltonian, ENERGY_TOL};
use crate::schedules::BangBangSchedule;

const GRID: usize = 16;
const GRID_STARTS: usize = 4;
/// Expectations closer than this count as equal; the shorter schedule wins.
const TIE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapLevel {
    pub p: usize,
    pub schedule: BangBangSchedule,
    pub expectation: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Set when the optimizer failed at this depth; the schedule is then the
    /// previous depth padded with an empty layer.
    pub failure: Option<String>,
}

/// `⟨C⟩` after cost-first layers with durations `|γ_k|`, `|β_k|`.
pub fn qaoa_expectation(h: &CostHamiltonian, gammas: &[f64], betas: &[f64]) -> Result<f64> {
    let g: Vec<f64> = gammas.iter().map(|v| v.abs()).collect();
    let b: Vec<f64> = betas.iter().map(|v| v.abs()).collect();
    Ok(h.expectation(&evolve_qaoa(h, &b, &g)?))
}

fn flip_symmetric(h: &CostHamiltonian) -> bool {
    let e = h.energies();
    let mask = e.len() - 1;
    (0..e.len()).all(|b| (e[b] - e[b ^ mask]).abs() <= ENERGY_TOL)
}

/// Shortest durations with the same energy distribution as the durations
/// `|γ_k|`, `|β_k|`.
///
/// `e^{−iπB}` is a global phase and, for flip-symmetric spectra, `e^{−iπB/2}`
/// is a global spin flip; `e^{−iTC}` is a global phase for the integral
/// period `T`. Negating every angle conjugates the state. Durations are
/// reduced modulo these periods, and the negated reduction is used when it is
/// shorter (only possible when `C` has a period).
pub fn canonical_durations(h: &CostHamiltonian, gammas: &[f64], betas: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let beta_period = if flip_symmetric(h) { FRAC_PI_2 } else { PI };
    let reduce = |sign: f64, gamma_period: Option<f64>| -> (Vec<f64>, Vec<f64>) {
        (
            gammas
                .iter()
                .map(|&g| gamma_period.map_or(g.abs(), |pg| (sign * g.abs()).rem_euclid(pg)))
                .collect(),
            betas.iter().map(|&b| (sign * b.abs()).rem_euclid(beta_period)).collect(),
        )
    };
    let gamma_period = h.phase_period();
    let pos = reduce(1.0, gamma_period);
    if gamma_period.is_none() {
        return pos;
    }
    let neg = reduce(-1.0, gamma_period);
    let total = |c: &(Vec<f64>, Vec<f64>)| c.0.iter().sum::<f64>() + c.1.iter().sum::<f64>();
    if total(&neg) < total(&pos) - 1e-12 {
        neg
    } else {
        pos
    }
}

struct Candidate {
    gammas: Vec<f64>,
    betas: Vec<f64>,
    expectation: f64,
    evaluations: usize,
    converged: bool,
}

impl Candidate {
    fn time(&self) -> f64 {
        self.gammas.iter().sum::<f64>() + self.betas.iter().sum::<f64>()
    }

    fn better_than(&self, other: &Candidate) -> bool {
        if self.expectation < other.expectation - TIE_TOL {
            return true;
        }
        self.expectation <= other.expectation + TIE_TOL && self.time() < other.time()
    }
}

fn refine(h: &CostHamiltonian, start: &[f64], p: usize, cfg: &OptimizerConfig) -> Result<Candidate> {
    let mut f = |x: &[f64]| qaoa_expectation(h, &x[..p], &x[p..]).unwrap_or(f64::NAN);
    let r = nelder_mead(&mut f, start, cfg)?;
    finish(h, &r.x[..p], &r.x[p..], r.evaluations, r.converged)
}

fn finish(
    h: &CostHamiltonian,
    gammas: &[f64],
    betas: &[f64],
    evaluations: usize,
    converged: bool,
) -> Result<Candidate> {
    let (gammas, betas) = canonical_durations(h, gammas, betas);
    let expectation = qaoa_expectation(h, &gammas, &betas)?;
    Ok(Candidate {
        gammas,
        betas,
        expectation,
        evaluations,
        converged,
    })
}

/// Interpolates a depth-`p` angle sequence onto `p + 1` layers.
fn interpolate(x: &[f64]) -> Vec<f64> {
    let p = x.len();
    (0..=p)
        .map(|i| {
            let left = if i == 0 { 0.0 } else { x[i - 1] };
            let right = if i == p { 0.0 } else { x[i] };
            (i as f64 / p as f64) * left + ((p - i) as f64 / p as f64) * right
        })
        .collect()
}

fn level(p: usize, c: Candidate, failure: Option<String>) -> Result<BootstrapLevel> {
    Ok(BootstrapLevel {
        p,
        schedule: BangBangSchedule::new(c.gammas, c.betas)?,
        expectation: c.expectation,
        evaluations: c.evaluations,
        converged: c.converged,
        failure,
    })
}

/// Energy-minimizing QAOA schedules for `p = 1..=p_max`.
///
/// Depth 1 starts Nelder-Mead from the best points of a coarse angle grid.
/// Depth `p + 1` starts from the interpolated depth-`p` angles and from the
/// depth-`p` angles with an empty layer appended; the latter, unrefined, is
/// also a candidate, so the expectation never increases with `p`. Among
/// candidates with equal expectation the shortest total time wins.
pub fn bootstrap_qaoa(h: &CostHamiltonian, p_max: usize, cfg: &OptimizerConfig) -> Result<Vec<BootstrapLevel>> {
    if p_max == 0 {
        return Err(invalid("p_max must be at least 1"));
    }
    cfg.validate()?;
    let gamma_span = h.phase_period().unwrap_or(PI);
    let beta_span = if flip_symmetric(h) { FRAC_PI_2 } else { PI };
    let mut grid = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for j in 0..GRID {
            let g = gamma_span * (i as f64 + 0.5) / GRID as f64;
            let b = beta_span * (j as f64 + 0.5) / GRID as f64;
            grid.push((qaoa_expectation(h, &[g], &[b])?, g, b));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<Candidate> = None;
    for &(_, g, b) in grid.iter().take(GRID_STARTS) {
        let c = refine(h, &[g, b], 1, cfg)?;
        if best.as_ref().is_none_or(|cur| c.better_than(cur)) {
            best = Some(c);
        }
    }
    let mut levels = vec![level(1, best.expect("grid is nonempty"), None)?];

    for p in 2..=p_max {
        let prev = levels.last().unwrap().schedule.clone();
        let mut padded_g = prev.gammas().to_vec();
        let mut padded_b = prev.betas().to_vec();
        padded_g.push(0.0);
        padded_b.push(0.0);
        let mut best = finish(h, &padded_g, &padded_b, 0, true)?;
        let mut failure = None;
        let starts = [
            [interpolate(prev.gammas()), interpolate(prev.betas())].concat(),
            [padded_g, padded_b].concat(),
        ];
        let mut evaluations = 0;
        for start in starts {
            match refine(h, &start, p, cfg) {
                Ok(c) => {
                    evaluations += c.evaluations;
                    if c.better_than(&best) {
                        best = c;
                    }
                }
                Err(e) => failure = Some(e.to_string()),
            }
        }
        best.evaluations = evaluations;
        levels.push(level(p, best, failure)?);
    }
    Ok(levels)
}
