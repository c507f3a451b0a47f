//! Properties of accepted emulation reports.

use anneal_emu::emulation::{
    cdf, emulation_factor, majorizes, min_time_majorize, EmulationConfig, EmulationCost,
};
use anneal_emu::problems::{enumerate_connected_graphs, Graph};
use anneal_emu::quantum::{evolve_bangbang, CostHamiltonian};
use anneal_emu::schedules::BangBangSchedule;
use anneal_emu::Limits;

#[test]
fn accepted_reports_dominate_every_statistic() {
    let cfg = EmulationConfig::default();
    for g in enumerate_connected_graphs(3).unwrap() {
        let r = emulation_factor(&g, 1, &cfg).unwrap();
        let factor = r.factor.unwrap();
        assert!(factor <= 1.0 + cfg.tol);
        let gc = r.g.as_ref().unwrap();
        assert!(majorizes(gc, &r.f, cfg.tol));
        assert!(gc.expectation() <= r.f.expectation() + 1e-5);
        for q in [0.05, 0.25, 0.5, 0.75, 0.95] {
            assert!(gc.quantile(q) <= r.f.quantile(q), "quantile {q}");
        }
        // the reported emulated schedule reproduces F
        let h = CostHamiltonian::from_graph(&g, &Limits::default()).unwrap();
        let again = cdf(&h.distribution(&evolve_bangbang(&h, &r.emulated().unwrap())));
        assert!(majorizes(&again, &r.f, 1e-12) && majorizes(&r.f, &again, 1e-12));
    }
}

#[test]
fn relaxing_tolerance_never_lengthens() {
    let g = Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let h = CostHamiltonian::from_graph(&g, &Limits::default()).unwrap();
    let bb = BangBangSchedule::new(vec![0.35], vec![0.3]).unwrap();
    let f = cdf(&h.distribution(&evolve_bangbang(&h, &bb)));
    let time = |tol: f64| {
        let cfg = EmulationConfig { tol, ..Default::default() };
        match min_time_majorize(&h, 2, &f, bb.total_time(), Some(&bb), &cfg).unwrap() {
            EmulationCost::Finite { t, .. } => t,
            EmulationCost::Unreachable { reason } => panic!("{reason}"),
        }
    };
    let strict = time(1e-8);
    let loose = time(1e-2);
    assert!(loose <= strict, "{loose} > {strict}");
    assert!(strict <= bb.total_time() * (1.0 + 1e-6));
}
