//! Emulation of QAOA by clipped-polynomial schedules.
//!
//! A polynomial schedule emulates a bang-bang one when its energy CDF `G`
//! dominates the bang-bang CDF `F` at every level. The cost of emulation is
//! the shortest annealing time at which that is achievable; the emulation
//! factor divides it by the bang-bang time.

mod cdf;
mod search;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use cdf::{cdf, eval_cdf, majorizes, post_selection, worst_level, worst_margin, Cdf};
pub use search::{min_time_majorize, polynomial_cdf};

use crate::error::{invalid, Result};
use crate::optimize::{bootstrap_qaoa, Method, OptimizerConfig};
use crate::problems::Graph;
use crate::quantum::{evolve_bangbang, CostHamiltonian, DEFAULT_STEPS};
use crate::schedules::{BangBangSchedule, PolynomialSchedule};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmulationConfig {
    /// Absolute slack allowed in `G ≥ F`.
    pub tol: f64,
    /// Bisection stops once the bracket is narrower than this fraction of
    /// the bang-bang time.
    pub resolution: f64,
    /// Lower end of the time bracket as a fraction of the bang-bang time.
    pub t_lo_fraction: f64,
    /// Objective evaluations per bisection probe.
    pub probe_evaluations: usize,
    /// Ramp discretization for polynomial schedules.
    pub n_steps: usize,
    pub method: Method,
    /// Settings for the QAOA bootstrap.
    pub qaoa: OptimizerConfig,
    /// First steepness tried for the Lagrange witness; raised by 100× up to
    /// `max_witness_steepness`.
    pub witness_steepness: f64,
    pub max_witness_steepness: f64,
    pub limits: Limits,
}

impl Default for EmulationConfig {
    fn default() -> Self {
        EmulationConfig {
            tol: 1e-6,
            resolution: 1e-3,
            t_lo_fraction: 0.01,
            probe_evaluations: 2000,
            n_steps: DEFAULT_STEPS,
            method: Method::Powell,
            qaoa: OptimizerConfig::default(),
            witness_steepness: 1e6,
            max_witness_steepness: 1e12,
            limits: Limits::default(),
        }
    }
}

impl EmulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(invalid("tol must be nonnegative"));
        }
        if !(self.resolution > 0.0 && self.resolution < 1.0) {
            return Err(invalid("resolution must lie in (0, 1)"));
        }
        if !(self.t_lo_fraction > 0.0 && self.t_lo_fraction < 1.0) {
            return Err(invalid("t_lo_fraction must lie in (0, 1)"));
        }
        if self.probe_evaluations == 0 || self.n_steps == 0 {
            return Err(invalid("probe budget and n_steps must be positive"));
        }
        if !(self.witness_steepness > 0.0 && self.max_witness_steepness >= self.witness_steepness) {
            return Err(invalid("witness steepness range is empty"));
        }
        self.qaoa.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmulationStatus {
    Finite,
    Unreachable,
}

impl EmulationStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            EmulationStatus::Finite => "finite",
            EmulationStatus::Unreachable => "unreachable",
        }
    }
}

/// Outcome of the minimum-time search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EmulationCost {
    Finite {
        t: f64,
        schedule: PolynomialSchedule,
        /// `min (G − F)` of the returned schedule.
        margin: f64,
    },
    Unreachable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmulationReport {
    pub graph_id: String,
    pub n: usize,
    pub p: usize,
    /// Emulated QAOA parameters, `β_1..β_p, γ_1..γ_p`.
    pub bg: Vec<f64>,
    pub t_b: f64,
    pub qaoa_expectation: f64,
    pub f: Cdf,
    /// Emulator polynomial coefficients.
    pub clist: Option<Vec<f64>>,
    /// Emulator annealing time.
    pub t_f: Option<f64>,
    pub g: Option<Cdf>,
    #[serde(rename = "J")]
    pub factor: Option<f64>,
    pub worst_margin: Option<f64>,
    pub status: EmulationStatus,
    pub reason: Option<String>,
}

pub const REPORT_CSV_HEADER: &str = "n,p,graph_id,T_b,t_star,factor,worst_margin,status";

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

impl EmulationReport {
    pub fn emulated(&self) -> Result<BangBangSchedule> {
        let (betas, gammas) = self.bg.split_at(self.p);
        BangBangSchedule::new(gammas.to_vec(), betas.to_vec())
    }

    pub fn emulator(&self) -> Option<PolynomialSchedule> {
        PolynomialSchedule::new(self.clist.clone()?, self.t_f?).ok()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.p,
            self.graph_id,
            self.t_b,
            opt(self.t_f),
            opt(self.factor),
            opt(self.worst_margin),
            self.status.as_str()
        )
    }
}

/// Appends empty layers up to depth `p`.
fn pad_layers(bb: &BangBangSchedule, p: usize) -> Result<BangBangSchedule> {
    let mut gammas = bb.gammas().to_vec();
    let mut betas = bb.betas().to_vec();
    gammas.resize(p.max(bb.p()), 0.0);
    betas.resize(p.max(bb.p()), 0.0);
    BangBangSchedule::new(gammas, betas)
}

/// Bootstraps QAOA to depth `p`, then searches for the shortest polynomial
/// schedule with `2p` coefficients whose CDF dominates the QAOA CDF.
///
/// The QAOA schedule is first reduced to its shortest equivalent pulse
/// train, whose time is `T_b`. A constant spectrum makes every schedule
/// equivalent and is reported with factor 1.
pub fn emulation_factor(g: &Graph, p: usize, cfg: &EmulationConfig) -> Result<EmulationReport> {
    cfg.validate()?;
    if p == 0 {
        return Err(invalid("p must be at least 1"));
    }
    if !g.is_connected() {
        return Err(invalid("emulation factors are defined for connected graphs"));
    }
    let h = CostHamiltonian::from_graph(g, &cfg.limits)?;
    let levels = bootstrap_qaoa(&h, p, &cfg.qaoa)?;
    let top = &levels[p - 1];
    let base = EmulationReport {
        graph_id: g.id(),
        n: g.n_nodes(),
        p,
        bg: top.schedule.bg(),
        t_b: top.schedule.total_time(),
        qaoa_expectation: top.expectation,
        f: cdf(&h.distribution(&evolve_bangbang(&h, &top.schedule))),
        clist: None,
        t_f: None,
        g: None,
        factor: None,
        worst_margin: None,
        status: EmulationStatus::Unreachable,
        reason: None,
    };

    if h.is_constant() {
        let ramp = PolynomialSchedule::linear_ramp(2 * p, base.t_b)?;
        let g_cdf = polynomial_cdf(&h, &ramp, cfg.n_steps)?;
        return Ok(EmulationReport {
            clist: Some(ramp.coeffs().to_vec()),
            t_f: Some(base.t_b),
            worst_margin: Some(worst_margin(&g_cdf, &base.f)),
            g: Some(g_cdf),
            factor: Some(1.0),
            status: EmulationStatus::Finite,
            reason: Some("constant spectrum: every schedule is equivalent".into()),
            ..base
        });
    }

    let Some(compact) = top.schedule.compact() else {
        return Ok(EmulationReport {
            reason: Some("QAOA schedule acts trivially on the initial state".into()),
            ..base
        });
    };
    let emulated = pad_layers(&compact, p)?;
    let f = cdf(&h.distribution(&evolve_bangbang(&h, &compact)));
    let t_b = compact.total_time();
    let base = EmulationReport {
        bg: emulated.bg(),
        t_b,
        f: f.clone(),
        ..base
    };
    match min_time_majorize(&h, 2 * p, &f, t_b, Some(&compact), cfg)? {
        EmulationCost::Finite { t, schedule, margin } => {
            let g_cdf = polynomial_cdf(&h, &schedule, cfg.n_steps)?;
            Ok(EmulationReport {
                clist: Some(schedule.coeffs().to_vec()),
                t_f: Some(t),
                g: Some(g_cdf),
                factor: Some(t / t_b),
                worst_margin: Some(margin),
                status: EmulationStatus::Finite,
                ..base
            })
        }
        EmulationCost::Unreachable { reason } => Ok(EmulationReport {
            reason: Some(reason),
            ..base
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub p: usize,
    pub graph_id: String,
    pub report: Option<EmulationReport>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn csv_row(&self) -> String {
        match &self.report {
            Some(r) => r.csv_row(),
            None => format!("{},{},{},,,,,error", self.n, self.p, self.graph_id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMinimum {
    pub n: usize,
    pub p: usize,
    pub instances: usize,
    /// Smallest finite factor in the cell.
    pub min_factor: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub minima: Vec<CellMinimum>,
}

impl SweepTable {
    pub fn csv(&self) -> String {
        let mut out = String::from(REPORT_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.csv_row());
        }
        out
    }
}

/// Emulation factors for every instance at depth `p`, with per-`n` minima.
/// Failures are recorded in their row and do not stop the sweep. Up to
/// `jobs` instances run concurrently; row order follows `instances`.
pub fn binned_sweep(instances: &[Graph], p: usize, cfg: &EmulationConfig, jobs: usize) -> SweepTable {
    let run = |g: &Graph| -> SweepRow {
        let (report, error) = match emulation_factor(g, p, cfg) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        SweepRow {
            n: g.n_nodes(),
            p,
            graph_id: g.id(),
            report,
            error,
        }
    };
    let rows: Vec<SweepRow> = if jobs <= 1 || instances.len() <= 1 {
        instances.iter().map(run).collect()
    } else {
        let chunk = instances.len().div_ceil(jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = instances
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(run).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    };

    let mut cells: BTreeMap<(usize, usize), CellMinimum> = BTreeMap::new();
    for r in &rows {
        let cell = cells.entry((r.n, r.p)).or_insert(CellMinimum {
            n: r.n,
            p: r.p,
            instances: 0,
            min_factor: None,
        });
        cell.instances += 1;
        if let Some(f) = r.report.as_ref().and_then(|rep| rep.factor) {
            cell.min_factor = Some(cell.min_factor.map_or(f, |m: f64| m.min(f)));
        }
    }
    SweepTable {
        rows,
        minima: cells.into_values().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn k2_factor_is_one() {
        let r = emulation_factor(&Graph::complete(2).unwrap(), 1, &EmulationConfig::default()).unwrap();
        assert_eq!(r.status, EmulationStatus::Finite);
        assert!((r.t_b - 3.0 * PI / 8.0).abs() < 1e-4);
        let j = r.factor.unwrap();
        assert!((j - 1.0).abs() <= 0.02 && j <= 1.0 + 1e-6, "J = {j}");
        assert!(r.worst_margin.unwrap() >= -1e-6);
        assert!(majorizes(r.g.as_ref().unwrap(), &r.f, 1e-6));
    }

    #[test]
    fn single_node_shortcut() {
        let r = emulation_factor(&Graph::new(1, vec![]).unwrap(), 2, &EmulationConfig::default()).unwrap();
        assert_eq!(r.factor, Some(1.0));
        assert_eq!(r.status, EmulationStatus::Finite);
        assert!(r.reason.is_some());
    }

    #[test]
    fn rejects_disconnected_and_zero_depth() {
        let g = Graph::unweighted(3, &[(0, 1)]).unwrap();
        assert!(emulation_factor(&g, 1, &EmulationConfig::default()).is_err());
        assert!(emulation_factor(&Graph::complete(2).unwrap(), 0, &EmulationConfig::default()).is_err());
    }

    #[test]
    fn report_serialization() {
        let r = emulation_factor(&Graph::complete(2).unwrap(), 1, &EmulationConfig::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["bg", "clist", "t_f", "J", "t_b", "status"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["status"], "finite");
        let back: EmulationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), REPORT_CSV_HEADER.split(',').count());
        assert!(row.starts_with("2,1,"));
        assert!(r.emulated().unwrap().total_time() > 0.0);
        assert!(r.emulator().is_some());
    }

    #[test]
    fn sweep_tables() {
        let cfg = EmulationConfig::default();
        assert_eq!(binned_sweep(&[], 1, &cfg, 1), SweepTable::default());
        let k2 = Graph::complete(2).unwrap();
        let single = binned_sweep(std::slice::from_ref(&k2), 1, &cfg, 1);
        assert_eq!(single.rows.len(), 1);
        let report = emulation_factor(&k2, 1, &cfg).unwrap();
        assert_eq!(single.rows[0].report.as_ref(), Some(&report));
        assert_eq!(single.minima[0].min_factor, report.factor);

        let broken = Graph::unweighted(3, &[(0, 1)]).unwrap();
        let t = binned_sweep(&[k2.clone(), broken, k2], 1, &cfg, 2);
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows[1].error.is_some());
        assert!(t.rows[1].csv_row().ends_with(",error"));
        assert_eq!(t.rows[0], t.rows[2]);
        assert_eq!(t.csv().lines().count(), 4);
    }
}
