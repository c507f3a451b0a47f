//! State-vector kernels against dense matrix exponentials.

mod common;

use anneal_emu::problems::{erdos_renyi, Graph};
use anneal_emu::quantum::{evolve, evolve_qaoa, CostHamiltonian, Propagator};
use anneal_emu::schedules::{Control, PolynomialSchedule};
use anneal_emu::Limits;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ham(g: &Graph) -> CostHamiltonian {
    CostHamiltonian::from_graph(g, &Limits::default()).unwrap()
}

/// Time-ordered product of exact exponentials of `(1 − u)C + uB` at step
/// midpoints.
fn dense_anneal(g: &Graph, control: &dyn Control, n_steps: usize) -> Vec<Complex64> {
    let n = g.n_nodes();
    let c = common::diagonal(&common::cost_diagonal(n, g.edges()));
    let b = common::mixer(n);
    let dim = 1 << n;
    let mut psi = vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim];
    let dt = control.total_time() / n_steps as f64;
    for k in 0..n_steps {
        let u = control.value_at((k as f64 + 0.5) * dt);
        let h: common::Matrix = c
            .iter()
            .zip(&b)
            .map(|(rc, rb)| rc.iter().zip(rb).map(|(x, y)| x * (1.0 - u) + y * u).collect())
            .collect();
        psi = common::matvec(&common::expm_minus_i(&h, dt), &psi);
    }
    psi
}

#[test]
fn weighted_qaoa_matches_dense_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..6 {
        let base = erdos_renyi(4, 0.8, seed).unwrap();
        let edges = base.edges().iter().map(|&(i, j, _)| (i, j, rng.gen_range(-2.0..2.0))).collect();
        let g = Graph::new(4, edges).unwrap();
        let p = 1 + seed as usize % 3;
        let betas: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..2.0)).collect();
        let gammas: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..2.0)).collect();
        let fast = evolve_qaoa(&ham(&g), &betas, &gammas).unwrap();
        let dense = common::dense_qaoa(4, g.edges(), &betas, &gammas);
        assert!(common::fidelity(fast.amplitudes(), &dense) > 1.0 - 1e-12);
    }
}

#[test]
fn k2_closed_form() {
    let h = ham(&Graph::complete(2).unwrap());
    for (gamma, beta) in [(0.3, 0.2), (std::f64::consts::FRAC_PI_4, std::f64::consts::PI / 8.0), (1.1, 2.0)] {
        let s = evolve_qaoa(&h, &[beta], &[gamma]).unwrap();
        let want = -(2.0 * gamma).sin() * (4.0 * beta).sin();
        assert!((h.expectation(&s) - want).abs() < 1e-12);
    }
}

#[test]
fn product_formula_converges_to_dense_anneal() {
    let g = Graph::new(3, vec![(0, 1, 1.0), (1, 2, 0.7), (0, 2, -0.4)]).unwrap();
    let h = ham(&g);
    let ps = PolynomialSchedule::new(vec![0.1, 1.4, -0.6, 0.2], 1.5).unwrap();
    let reference = dense_anneal(&g, &ps, 2000);
    let coarse = evolve(&h, &ps, Propagator::ProductFormula { n_steps: 200 }).unwrap();
    let fine = evolve(&h, &ps, Propagator::ProductFormula { n_steps: 20_000 }).unwrap();
    let infidelity = |psi: &[Complex64]| 1.0 - common::fidelity(psi, &reference);
    assert!(infidelity(fine.amplitudes()) < 1e-7);
    assert!(infidelity(fine.amplitudes()) < infidelity(coarse.amplitudes()));
}

#[test]
fn segmented_plateaus_are_exact() {
    // clipped to 0 then 1 with a short ramp between
    let g = Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
    let h = ham(&g);
    let ps = PolynomialSchedule::new(vec![-4.0, 10.0], 1.2).unwrap();
    let reference = dense_anneal(&g, &ps, 4000);
    let seg = evolve(&h, &ps, Propagator::Segmented { n_steps: 1001 }).unwrap();
    assert!(1.0 - common::fidelity(seg.amplitudes(), &reference) < 1e-6);
}
