use std::path::Path;

use anneal_emu::optimize::{optimize_polynomial, Method, Objective, ObjectiveKind, OptimizerConfig};
use anneal_emu::problems::{erdos_renyi, Graph};
use anneal_emu::quantum::{evolve, CostHamiltonian, Propagator};
use anneal_emu::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::commands::ratio;
use crate::{out, CliError, CliResult};

const BASELINE_N: usize = 5;
const BASELINE_P: usize = 2;
const BASELINE_TF: f64 = 1.2;
const DEFAULT_INSTANCES: usize = 10;
const EDGE_PROBABILITY: f64 = 0.7;

/// Sweep axes. Missing or empty axes take the baseline value.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub p: Vec<usize>,
    #[serde(default)]
    pub t_f: Vec<f64>,
    #[serde(default)]
    pub method: Vec<Method>,
    pub instances: Option<usize>,
}

impl SweepSpec {
    fn resolved(mut self) -> CliResult<Self> {
        if self.n.is_empty() {
            self.n.push(BASELINE_N);
        }
        if self.p.is_empty() {
            self.p.push(BASELINE_P);
        }
        if self.t_f.is_empty() {
            self.t_f.push(BASELINE_TF);
        }
        if self.method.is_empty() {
            self.method.push(Method::Powell);
        }
        self.instances.get_or_insert(DEFAULT_INSTANCES);
        if self.n.contains(&0) || self.p.contains(&0) || self.instances == Some(0) {
            return Err(CliError::Usage("n, p and instances must be positive".into()));
        }
        if self.t_f.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(CliError::Usage("t_f values must be positive".into()));
        }
        Ok(self)
    }
}

pub struct SweepSettings {
    pub seed: u64,
    pub steps: usize,
    pub restarts: usize,
    pub tol: f64,
    pub jobs: usize,
}

struct Task {
    n: usize,
    p: usize,
    t_f: f64,
    method: Method,
    instance: usize,
    seed: u64,
    graph: Graph,
}

struct Outcome {
    expectation: Option<f64>,
    ratio: Option<f64>,
    error: Option<String>,
}

fn evaluate(task: &Task, settings: &SweepSettings) -> Outcome {
    let run = || -> anneal_emu::Result<(f64, Option<f64>)> {
        let h = CostHamiltonian::from_graph(&task.graph, &Limits::default())?;
        let propagator = Propagator::ProductFormula { n_steps: settings.steps };
        let obj = Objective::new(h.clone(), ObjectiveKind::Expectation)?.with_propagator(propagator);
        let cfg = OptimizerConfig {
            restarts: settings.restarts,
            seed: task.seed,
            ftol: settings.tol,
            ..OptimizerConfig::default()
        };
        let r = optimize_polynomial(&obj, 2 * task.p, task.t_f, &cfg, task.method)?;
        let state = evolve(&h, &r.schedule, propagator)?;
        Ok((r.objective, ratio(&h, &state)))
    };
    match run() {
        Ok((e, r)) => Outcome {
            expectation: Some(e),
            error: r.is_none().then(|| "approximation ratio undefined: spectrum is constant".into()),
            ratio: r,
        },
        Err(e) => Outcome {
            expectation: None,
            ratio: None,
            error: Some(e.to_string()),
        },
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Sample mean and standard deviation (n − 1 denominator).
fn mean_std(v: &[f64]) -> (Option<f64>, Option<f64>) {
    if v.is_empty() {
        return (None, None);
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    if v.len() < 2 {
        return (Some(mean), Some(0.0));
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
    (Some(mean), Some(var.sqrt()))
}

pub fn run(spec_path: Option<&Path>, settings: &SweepSettings, dir: Option<&Path>, force: bool) -> CliResult<()> {
    let spec: SweepSpec = match spec_path {
        Some(p) => serde_json::from_str(&out::read(p)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => SweepSpec::default(),
    };
    let spec = spec.resolved()?;
    let instances = spec.instances.unwrap_or(DEFAULT_INSTANCES);
    if settings.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }

    let mut tasks = Vec::new();
    for &n in &spec.n {
        // same instances for every cell with this n
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
        rng.set_stream(n as u64);
        let seeds: Vec<u64> = (0..instances).map(|_| rng.gen()).collect();
        let graphs = seeds
            .iter()
            .map(|&s| erdos_renyi(n, EDGE_PROBABILITY, s))
            .collect::<anneal_emu::Result<Vec<_>>>()?;
        for &p in &spec.p {
            for &t_f in &spec.t_f {
                for &method in &spec.method {
                    for (instance, (g, &seed)) in graphs.iter().zip(&seeds).enumerate() {
                        tasks.push(Task {
                            n,
                            p,
                            t_f,
                            method,
                            instance,
                            seed,
                            graph: g.clone(),
                        });
                    }
                }
            }
        }
    }

    let jobs = settings.jobs.min(tasks.len().max(1));
    let mut outcomes: Vec<Option<Outcome>> = (0..tasks.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let tasks = &tasks;
                scope.spawn(move || {
                    (w..tasks.len())
                        .step_by(jobs)
                        .map(|i| (i, evaluate(&tasks[i], settings)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, o) in h.join().expect("sweep worker panicked") {
                outcomes[i] = Some(o);
            }
        }
    });

    let mut rows = String::from("n,p,t_f,method,instance,graph_id,expectation,ratio,error\n");
    let mut summary = String::from("n,p,t_f,method,instances,failures,mean_ratio,std_ratio\n");
    let per_cell = instances;
    for (cell, chunk) in tasks.chunks(per_cell).enumerate() {
        let mut ratios = Vec::new();
        for (k, t) in chunk.iter().enumerate() {
            let o = outcomes[cell * per_cell + k].as_ref().expect("every task ran");
            rows.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                t.n,
                t.p,
                t.t_f,
                t.method,
                t.instance,
                t.graph.id(),
                opt(o.expectation),
                opt(o.ratio),
                o.error.as_deref().map(quote).unwrap_or_default()
            ));
            ratios.extend(o.ratio);
        }
        let (mean, std) = mean_std(&ratios);
        let t = &chunk[0];
        summary.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            t.n,
            t.p,
            t.t_f,
            t.method,
            chunk.len(),
            chunk.len() - ratios.len(),
            opt(mean),
            opt(std)
        ));
    }

    if let Some(d) = dir {
        let d = out::prepare(d, force)?;
        out::write(&d, "sweep.csv", &summary)?;
        out::write(&d, "instances.csv", &rows)?;
        let mut resolved = serde_json::to_string_pretty(&spec).expect("spec serializes");
        resolved.push('\n');
        out::write(&d, "spec.json", &resolved)?;
    }
    print!("{summary}");
    Ok(())
}
