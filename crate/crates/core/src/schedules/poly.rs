//! Dense univariate polynomials in monomial form, coefficients in increasing
//! degree, and real-root isolation on an interval.

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Coefficients of `Π (x − r)` over `roots`.
pub fn from_roots(roots: &[f64]) -> Vec<f64> {
    let mut out = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; out.len() + 1];
        for (k, &c) in out.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        out = next;
    }
    out
}

fn trimmed(coeffs: &[f64]) -> &[f64] {
    let len = coeffs
        .iter()
        .rposition(|&c| c != 0.0)
        .map_or(0, |k| k + 1);
    &coeffs[..len]
}

fn bisect(coeffs: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = horner(coeffs, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = horner(coeffs, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of the polynomial inside `[a, b]`, ascending.
///
/// The interval is split at the roots of the derivative (found recursively),
/// so the polynomial is monotone on each piece and a sign change brackets
/// exactly one root. Roots of even multiplicity that never change sign are
/// reported only when hit exactly.
pub fn real_roots_in(coeffs: &[f64], a: f64, b: f64) -> Vec<f64> {
    let c = trimmed(coeffs);
    match c.len() {
        0 | 1 => Vec::new(),
        2 => {
            let r = -c[0] / c[1];
            if (a..=b).contains(&r) {
                vec![r]
            } else {
                Vec::new()
            }
        }
        _ => {
            let mut knots = vec![a];
            knots.extend(real_roots_in(&derivative(c), a, b));
            knots.push(b);
            let mut roots: Vec<f64> = Vec::new();
            for w in knots.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let (f_lo, f_hi) = (horner(c, lo), horner(c, hi));
                let root = if f_lo == 0.0 {
                    Some(lo)
                } else if f_hi == 0.0 {
                    Some(hi)
                } else if (f_lo < 0.0) != (f_hi < 0.0) {
                    Some(bisect(c, lo, hi))
                } else {
                    None
                };
                if let Some(r) = root {
                    if roots.last().is_none_or(|&last| r > last) {
                        roots.push(r);
                    }
                }
            }
            roots
        }
    }
}
