//! One-dimensional minimization: golden-section bracketing followed by
//! Brent's parabolic/golden search.

const GOLD: f64 = 1.618_033_988_749_895;
const CGOLD: f64 = 0.381_966_011_250_105;
const GLIMIT: f64 = 100.0;
const TINY: f64 = 1e-20;
const ZEPS: f64 = 1e-12;
const MAX_BRACKET: usize = 60;
const MAX_BRENT: usize = 200;

/// `(a, b, c)` with `b` between `a` and `c` and `f(b) ≤ f(a), f(c)` when
/// bracketing succeeds. `fa` is `phi(a)`, already known by the caller.
pub(crate) fn bracket(
    phi: &mut dyn FnMut(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
) -> [(f64, f64); 3] {
    let (mut a, mut fa) = (a, fa);
    let (mut b, mut fb) = (b, phi(b));
    if fb > fa {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = b + GOLD * (b - a);
    let mut fc = phi(c);
    let mut guard = 0;
    while fb > fc && guard < MAX_BRACKET {
        guard += 1;
        let r = (b - a) * (fb - fc);
        let q = (b - c) * (fb - fa);
        let denom = 2.0 * (q - r).abs().max(TINY).copysign(q - r);
        let mut u = b - ((b - c) * q - (b - a) * r) / denom;
        let ulim = b + GLIMIT * (c - b);
        let mut fu;
        if (b - u) * (u - c) > 0.0 {
            fu = phi(u);
            if fu < fc {
                return [(b, fb), (u, fu), (c, fc)];
            } else if fu > fb {
                return [(a, fa), (b, fb), (u, fu)];
            }
            u = c + GOLD * (c - b);
            fu = phi(u);
        } else if (c - u) * (u - ulim) > 0.0 {
            fu = phi(u);
            if fu < fc {
                b = c;
                fb = fc;
                c = u;
                fc = fu;
                u = c + GOLD * (c - b);
                fu = phi(u);
            }
        } else if (u - ulim) * (ulim - c) >= 0.0 {
            u = ulim;
            fu = phi(u);
        } else {
            u = c + GOLD * (c - b);
            fu = phi(u);
        }
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        c = u;
        fc = fu;
    }
    [(a, fa), (b, fb), (c, fc)]
}

/// Minimum of `phi` inside the bracket `(a, b, c)`; returns `(x, phi(x))`.
pub(crate) fn brent(
    phi: &mut dyn FnMut(f64) -> f64,
    bracket: [(f64, f64); 3],
    tol: f64,
) -> (f64, f64) {
    let [(ax, _), (bx, fbx), (cx, _)] = bracket;
    let (mut a, mut b) = if ax < cx { (ax, cx) } else { (cx, ax) };
    let (mut x, mut w, mut v) = (bx, bx, bx);
    let (mut fx, mut fw, mut fv) = (fbx, fbx, fbx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..MAX_BRENT {
        let xm = 0.5 * (a + b);
        let tol1 = tol * x.abs() + ZEPS;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if !(p.abs() >= (0.5 * q * etemp).abs() || p <= q * (a - x) || p >= q * (b - x)) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = phi(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Minimizes along `x + α·d`, starting from the known value `fx` at `α = 0`.
/// Returns `(α, value)`; `α = 0` when nothing better was found.
pub(crate) fn line_minimize(
    phi: &mut dyn FnMut(f64) -> f64,
    fx: f64,
    tol: f64,
) -> (f64, f64) {
    let br = bracket(phi, 0.0, fx, 1.0);
    let best_bracket = br
        .iter()
        .copied()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap();
    let (a, fa) = if br[1].1 <= br[0].1 && br[1].1 <= br[2].1 {
        brent(phi, br, tol)
    } else {
        best_bracket
    };
    let (a, fa) = if best_bracket.1 < fa { best_bracket } else { (a, fa) };
    if fa < fx {
        (a, fa)
    } else {
        (0.0, fx)
    }
}
