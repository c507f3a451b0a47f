use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quantum::{EnergyDistribution, ENERGY_TOL, MASS_TOL};

/// Right-continuous step CDF over a finite energy support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cdf {
    support: Vec<f64>,
    cum: Vec<f64>,
}

impl Cdf {
    pub fn new(support: Vec<f64>, cum: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != cum.len() {
            return Err(invalid("support and cumulative values must be nonempty and of equal length"));
        }
        if support.iter().any(|e| !e.is_finite()) || support.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("support must be finite and strictly increasing"));
        }
        if cum.iter().any(|c| !(0.0..=1.0 + MASS_TOL).contains(c)) || cum.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("cumulative values must be nondecreasing in [0, 1]"));
        }
        if (cum.last().unwrap() - 1.0).abs() > MASS_TOL {
            return Err(invalid("cumulative values must end at 1"));
        }
        Ok(Cdf { support, cum })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn cum(&self) -> &[f64] {
        &self.cum
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.support.partition_point(|&e| e <= x + ENERGY_TOL);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }

    /// Probability of the level at `support[i]`.
    pub fn mass(&self, i: usize) -> f64 {
        if i == 0 {
            self.cum[0]
        } else {
            self.cum[i] - self.cum[i - 1]
        }
    }

    /// `Σ e·P(e)`.
    pub fn expectation(&self) -> f64 {
        (0..self.support.len()).map(|i| self.support[i] * self.mass(i)).sum()
    }

    /// Smallest support point with `F(x) ≥ q`.
    pub fn quantile(&self, q: f64) -> f64 {
        let k = self.cum.partition_point(|&c| c < q);
        self.support[k.min(self.support.len() - 1)]
    }
}

/// Cumulative sums of a distribution over ascending energies.
pub fn cdf(d: &EnergyDistribution) -> Cdf {
    let mut acc = 0.0;
    let (support, cum) = d
        .points()
        .iter()
        .map(|&(e, p)| {
            acc += p;
            (e, acc.min(1.0))
        })
        .unzip();
    Cdf { support, cum }
}

pub fn eval_cdf(f: &Cdf, x: f64) -> f64 {
    f.eval(x)
}

/// Sorted union of both supports, merging points closer than the energy
/// tolerance.
pub(crate) fn union_support(a: &Cdf, b: &Cdf) -> Vec<f64> {
    let mut all: Vec<f64> = a.support.iter().chain(&b.support).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|x, y| (*x - *y).abs() <= ENERGY_TOL);
    all
}

/// `G(x) ≥ F(x) − tol` on the union of both supports.
pub fn majorizes(g: &Cdf, f: &Cdf, tol: f64) -> bool {
    union_support(g, f).iter().all(|&x| g.eval(x) >= f.eval(x) - tol)
}

/// `min_x G(x) − F(x)` over the union of supports.
pub fn worst_margin(g: &Cdf, f: &Cdf) -> f64 {
    union_support(g, f)
        .iter()
        .map(|&x| g.eval(x) - f.eval(x))
        .fold(f64::INFINITY, f64::min)
}

/// `1 − (1 − F)^m`: the CDF of the best of `m` independent samples.
pub fn post_selection(f: &Cdf, m: u32) -> Result<Cdf> {
    if m == 0 {
        return Err(invalid("post-selection needs m >= 1"));
    }
    let cum = f
        .cum
        .iter()
        .map(|&c| 1.0 - (1.0 - c.min(1.0)).powi(m as i32))
        .collect();
    Ok(Cdf {
        support: f.support.clone(),
        cum,
    })
}

/// Support point where `G − F` is smallest; the lowest such energy on ties.
pub fn worst_level(f: &Cdf, g: &Cdf) -> f64 {
    let mut best = (f64::INFINITY, f64::NAN);
    for x in union_support(g, f) {
        let gap = g.eval(x) - f.eval(x);
        if gap < best.0 {
            best = (gap, x);
        }
    }
    best.1
}
