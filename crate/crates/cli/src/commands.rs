use std::path::Path;

use anneal_emu::emulation::{emulation_factor, EmulationConfig, EmulationStatus, REPORT_CSV_HEADER};
use anneal_emu::optimize::{
    bootstrap_qaoa, optimize_polynomial, trace_csv, Objective, ObjectiveKind, OptimizerConfig, TraceRow,
};
use anneal_emu::problems::{enumerate_connected_graphs, parse_edge_list, to_edge_list, Graph};
use anneal_emu::quantum::{approximation_ratio, evolve, evolve_bangbang, CostHamiltonian, Propagator, StateVector};
use anneal_emu::Limits;
use serde::Serialize;

use crate::{out, CliError, CliResult, RunArgs};

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    let text = out::read(path)?;
    parse_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// `None` when the spectrum is constant.
pub fn ratio(h: &CostHamiltonian, state: &StateVector) -> Option<f64> {
    approximation_ratio(&h.distribution(state), h.energies()).ok()
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn emit(dir: Option<&Path>, force: bool, files: &[(&str, &str)]) -> CliResult<()> {
    if let Some(d) = dir {
        let d = out::prepare(d, force)?;
        for (name, contents) in files {
            out::write(&d, name, contents)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct IndexEntry {
    file: String,
    graph_id: String,
    n_nodes: usize,
    n_edges: usize,
}

pub fn enumerate(n: usize, dir: &Path, force: bool) -> CliResult<()> {
    let graphs = enumerate_connected_graphs(n)?;
    let dir = out::prepare(dir, force)?;
    let mut index = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let file = format!("n{n}_{i:03}.edges");
        out::write(&dir, &file, &to_edge_list(g))?;
        index.push(IndexEntry {
            file,
            graph_id: g.id(),
            n_nodes: g.n_nodes(),
            n_edges: g.edges().len(),
        });
    }
    out::write(&dir, "index.json", &json(&index))?;
    println!("wrote {} graphs to {}", graphs.len(), dir.display());
    Ok(())
}

fn optimizer_config(run: &RunArgs, seed: u64) -> OptimizerConfig {
    let mut cfg = OptimizerConfig {
        restarts: run.restarts,
        seed,
        ..OptimizerConfig::default()
    };
    if let Some(tol) = run.tol {
        cfg.ftol = tol;
    }
    cfg
}

fn check_p(p: usize) -> CliResult<()> {
    if p == 0 {
        return Err(CliError::Usage("--p must be at least 1".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct QaoaLevelOut {
    p: usize,
    gammas: Vec<f64>,
    betas: Vec<f64>,
    bg: Vec<f64>,
    t_b: f64,
    expectation: f64,
    ratio: Option<f64>,
    evaluations: usize,
    converged: bool,
    failure: Option<String>,
}

#[derive(Serialize)]
struct QaoaOut {
    graph_id: String,
    n: usize,
    p: usize,
    seed: Option<u64>,
    levels: Vec<QaoaLevelOut>,
}

pub fn qaoa_opt(run: &RunArgs, dir: Option<&Path>, force: bool) -> CliResult<()> {
    check_p(run.p)?;
    let g = load_graph(&run.graph)?;
    let h = CostHamiltonian::from_graph(&g, &Limits::default())?;
    let levels = bootstrap_qaoa(&h, run.p, &optimizer_config(run, run.seed.unwrap_or(0)))?;
    let out_levels: Vec<QaoaLevelOut> = levels
        .iter()
        .map(|l| QaoaLevelOut {
            p: l.p,
            gammas: l.schedule.gammas().to_vec(),
            betas: l.schedule.betas().to_vec(),
            bg: l.schedule.bg(),
            t_b: l.schedule.total_time(),
            expectation: l.expectation,
            ratio: ratio(&h, &evolve_bangbang(&h, &l.schedule)),
            evaluations: l.evaluations,
            converged: l.converged,
            failure: l.failure.clone(),
        })
        .collect();
    let trace: Vec<TraceRow> = out_levels
        .iter()
        .map(|l| TraceRow {
            iteration: l.p,
            objective: l.expectation,
            params: l.bg.clone(),
        })
        .collect();
    let failure = out_levels.iter().find_map(|l| l.failure.clone().map(|f| (l.p, f)));
    let report = json(&QaoaOut {
        graph_id: g.id(),
        n: g.n_nodes(),
        p: run.p,
        seed: run.seed,
        levels: out_levels,
    });
    emit(dir, force, &[("schedule.json", &report), ("trace.csv", &trace_csv(&trace))])?;
    print!("{report}");
    match failure {
        Some((p, f)) => Err(anneal_emu::Error::Optimizer(format!("depth {p}: {f}")).into()),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct PolyOut {
    graph_id: String,
    n: usize,
    p: usize,
    t_f: f64,
    method: String,
    seed: u64,
    steps: usize,
    clist: Vec<f64>,
    expectation: f64,
    ramp_expectation: f64,
    ratio: Option<f64>,
    evaluations: usize,
    failures: Vec<String>,
}

pub fn poly_opt(run: &RunArgs, t_f: f64, dir: Option<&Path>, force: bool) -> CliResult<()> {
    check_p(run.p)?;
    let seed = run
        .seed
        .ok_or_else(|| CliError::Usage("poly-opt needs --seed or ANNEAL_EMU_SEED".into()))?;
    let g = load_graph(&run.graph)?;
    let h = CostHamiltonian::from_graph(&g, &Limits::default())?;
    let propagator = Propagator::ProductFormula { n_steps: run.steps };
    let obj = Objective::new(h.clone(), ObjectiveKind::Expectation)?.with_propagator(propagator);
    let r = optimize_polynomial(&obj, 2 * run.p, t_f, &optimizer_config(run, seed), run.method)?;
    let state = evolve(&h, &r.schedule, propagator)?;
    let report = json(&PolyOut {
        graph_id: g.id(),
        n: g.n_nodes(),
        p: run.p,
        t_f,
        method: run.method.to_string(),
        seed,
        steps: run.steps,
        clist: r.schedule.coeffs().to_vec(),
        expectation: r.objective,
        ramp_expectation: r.seed_objective,
        ratio: ratio(&h, &state),
        evaluations: r.evaluations,
        failures: r.failures,
    });
    emit(dir, force, &[("schedule.json", &report), ("trace.csv", &trace_csv(&r.trace))])?;
    print!("{report}");
    Ok(())
}

pub fn emulate(run: &RunArgs, dir: Option<&Path>, force: bool) -> CliResult<()> {
    check_p(run.p)?;
    let g = load_graph(&run.graph)?;
    let mut cfg = EmulationConfig {
        n_steps: run.steps,
        method: run.method,
        qaoa: optimizer_config(run, run.seed.unwrap_or(0)),
        ..EmulationConfig::default()
    };
    if let Some(tol) = run.tol {
        cfg.tol = tol;
    }
    // --tol is the majorization slack here; the bootstrap keeps its default
    cfg.qaoa.ftol = OptimizerConfig::default().ftol;
    let report = emulation_factor(&g, run.p, &cfg)?;
    let text = json(&report);
    let csv = format!("{REPORT_CSV_HEADER}\n{}\n", report.csv_row());
    emit(dir, force, &[("report.json", &text), ("report.csv", &csv)])?;
    print!("{text}");
    match (report.status, report.factor) {
        (EmulationStatus::Unreachable, _) => Err(CliError::Guarantee(
            report.reason.unwrap_or_else(|| "no emulating schedule found".into()),
        )),
        (_, Some(j)) if j > 1.0 + cfg.tol => Err(CliError::Guarantee(format!("factor {j} exceeds 1"))),
        _ => Ok(()),
    }
}
