//! Small numerical toolbox: panel quadrature, root bracketing, cubic
//! interpolation and a derivative-free simplex optimizer.
//!
//! Everything here works on plain `f64` closures; the statistical modules
//! build their integral representations on top of these primitives.

/// Abscissae of the 16-point Gauss-Legendre rule on [-1, 1].
const GL16_X: [f64; 16] = [
    -0.9894009349916499,
    -0.9445750230732326,
    -0.8656312023878318,
    -0.7554044083550030,
    -0.6178762444026438,
    -0.4580167776572274,
    -0.2816035507792589,
    -0.0950125098376374,
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];

/// Weights of the 16-point Gauss-Legendre rule on [-1, 1].
const GL16_W: [f64; 16] = [
    0.0271524594117541,
    0.0622535239386479,
    0.0951585116824928,
    0.1246289712555339,
    0.1495959888165767,
    0.1691565193950025,
    0.1826034150449236,
    0.1894506104550685,
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// 16-point Gauss-Legendre quadrature of `f` over [lo, hi].
pub fn gl16<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> f64 {
    let c = 0.5 * (hi - lo);
    let m = 0.5 * (lo + hi);
    let mut s = 0.0;
    for i in 0..16 {
        s += GL16_W[i] * f(m + c * GL16_X[i]);
    }
    c * s
}

/// Composite Gauss-Legendre quadrature over an edge mesh.
pub fn integrate_mesh<F: FnMut(f64) -> f64>(mut f: F, edges: &[f64]) -> f64 {
    let mut s = 0.0;
    for w in edges.windows(2) {
        s += gl16(&mut f, w[0], w[1]);
    }
    s
}

/// `n + 1` equally spaced edges covering [lo, hi].
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect()
}

/// Edge mesh whose panel widths shrink geometrically toward `hi`
/// (ratio < 1); used to resolve boundary layers.
pub fn graded_edges_toward(lo: f64, hi: f64, n: usize, ratio: f64) -> Vec<f64> {
    let mut widths: Vec<f64> = (0..n).map(|i| ratio.powi(i as i32)).collect();
    let total: f64 = widths.iter().sum();
    for w in widths.iter_mut() {
        *w /= total;
    }
    let mut edges = Vec::with_capacity(n + 1);
    let mut acc = lo;
    edges.push(lo);
    for w in widths {
        acc += w * (hi - lo);
        edges.push(acc);
    }
    *edges.last_mut().unwrap() = hi;
    edges
}

/// Mirror image of [`graded_edges_toward`]: panels shrink toward `lo`.
pub fn graded_edges_from(lo: f64, hi: f64, n: usize, ratio: f64) -> Vec<f64> {
    let mut e: Vec<f64> = graded_edges_toward(lo, hi, n, ratio)
        .into_iter()
        .map(|x| lo + hi - x)
        .collect();
    e.reverse();
    e
}

/// Bisection on a bracketing interval for a continuous function.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them be zero).
/// Returns the midpoint once the interval is below `xtol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo).abs() < xtol {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section maximization of a unimodal function on [lo, hi].
///
/// Returns `(argmax, max)`. Tolerance is on the argument.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() < xtol {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fx >= fc && fx >= fd {
        (x, fx)
    } else if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Lagrange cubic through four equally spaced values at -1, 0, 1, 2;
/// `t` in [0, 1] interpolates between `p1` and `p2`. Exact for cubic
/// polynomials, so the error is O(h^4 f'''') on smooth data.
#[inline]
pub fn cubic4(p0: f64, p1: f64, p2: f64, p3: f64, t: f64) -> f64 {
    let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3
}

/// Cubic interpolation on a uniform grid of `values` over [lo, hi].
/// Clamps the stencil at the edges (duplicated end values).
pub fn interp_uniform_cubic(values: &[f64], lo: f64, hi: f64, x: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 2);
    let h = (hi - lo) / (n - 1) as f64;
    let pos = ((x - lo) / h).clamp(0.0, (n - 1) as f64);
    let i = (pos.floor() as usize).min(n - 2);
    let t = pos - i as f64;
    let get = |j: isize| -> f64 {
        let k = j.clamp(0, (n - 1) as isize) as usize;
        values[k]
    };
    cubic4(get(i as isize - 1), get(i as isize), get(i as isize + 1), get(i as isize + 2), t)
}

/// Result of a Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: u32,
    pub converged: bool,
}

/// Nelder-Mead minimization in a few dimensions.
///
/// Good enough for the 2-parameter marginal likelihoods used here; the
/// objective is assumed finite everywhere (use transforms to enforce bounds).
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    ftol: f64,
    max_iter: u32,
) -> SimplexResult {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut xi = x0.to_vec();
        xi[i] += step;
        let fx = f(&xi);
        simplex.push((xi, fx));
    }
    let mut iter = 0;
    let mut converged = false;
    while iter < max_iter {
        iter += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if (worst - best).abs() <= ftol * (1.0 + best.abs()) {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; n];
        for (xs, _) in simplex.iter().take(n) {
            for (c, v) in centroid.iter_mut().zip(xs) {
                *c += v / n as f64;
            }
        }
        let expand_point = |scale: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + scale * (c - w))
                .collect()
        };
        let xr = expand_point(1.0, &simplex[n].0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = expand_point(2.0, &simplex[n].0);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let xc = expand_point(-0.5, &simplex[n].0);
            let fc = f(&xc);
            if fc < simplex[n].1 {
                simplex[n] = (xc, fc);
            } else {
                // shrink toward the best vertex
                let best_x = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let xs: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&best_x)
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    let fx = f(&xs);
                    *entry = (xs, fx);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    SimplexResult {
        x: simplex[0].0.clone(),
        fx: simplex[0].1,
        iterations: iter,
        converged,
    }
}
