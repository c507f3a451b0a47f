//! Dense-matrix reference propagators, independent of the library's
//! state-vector kernels.

#![allow(dead_code)]

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn zeros(dim: usize) -> Matrix {
    vec![vec![Complex64::new(0.0, 0.0); dim]; dim]
}

pub fn identity(dim: usize) -> Matrix {
    let mut m = zeros(dim);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `−Σ_q σx^(q)` built entry by entry.
pub fn mixer(n: usize) -> Matrix {
    let dim = 1 << n;
    let mut m = zeros(dim);
    for i in 0..dim {
        for q in 0..n {
            m[i][i ^ (1 << q)] -= Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// Max-Cut Ising energy `Σ w z_i z_j` with `z = 1 − 2·bit`.
pub fn cost_diagonal(n: usize, edges: &[(usize, usize, f64)]) -> Vec<f64> {
    (0..1usize << n)
        .map(|b| {
            edges
                .iter()
                .map(|&(i, j, w)| {
                    let zi = 1.0 - 2.0 * ((b >> i) & 1) as f64;
                    let zj = 1.0 - 2.0 * ((b >> j) & 1) as f64;
                    w * zi * zj
                })
                .sum()
        })
        .collect()
}

pub fn diagonal(d: &[f64]) -> Matrix {
    let mut m = zeros(d.len());
    for (i, &x) in d.iter().enumerate() {
        m[i][i] = Complex64::new(x, 0.0);
    }
    m
}

/// `exp(−iθH)` by scaling and squaring of a Taylor series.
pub fn expm_minus_i(h: &Matrix, theta: f64) -> Matrix {
    let n = h.len();
    let norm: f64 = h
        .iter()
        .map(|row| row.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
        * theta.abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = theta / 2f64.powi(squarings as i32);
    let a: Matrix = h
        .iter()
        .map(|row| row.iter().map(|x| x * Complex64::new(0.0, -scale)).collect())
        .collect();
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..30 {
        term = matmul(&term, &a);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// Cost-first QAOA state from dense propagators.
pub fn dense_qaoa(
    n: usize,
    edges: &[(usize, usize, f64)],
    betas: &[f64],
    gammas: &[f64],
) -> Vec<Complex64> {
    let dim = 1 << n;
    let c = diagonal(&cost_diagonal(n, edges));
    let b = mixer(n);
    let mut psi = vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim];
    for (&beta, &gamma) in betas.iter().zip(gammas) {
        psi = matvec(&expm_minus_i(&c, gamma), &psi);
        psi = matvec(&expm_minus_i(&b, beta), &psi);
    }
    psi
}

pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}
