//! Deterministic maximizers used by the exponent calculators: a 1-D
//! grid + golden-section search for concave objectives, and a probability-
//! simplex search (exhaustive grid followed by pairwise-transfer polishing).

/// Result of a 1-D maximization.
#[derive(Debug, Clone, Copy)]
pub struct Opt1D {
    pub x: f64,
    pub value: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximizes a concave objective on [lo, hi]: uniform grid scan followed by
/// golden-section refinement of the winning bracket down to `tol` in x.
pub fn maximize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid_points: usize, tol: f64) -> Opt1D {
    assert!(hi >= lo && grid_points >= 2);
    let n = grid_points;
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut a = xs[best_i.saturating_sub(1)];
    let mut b = xs[(best_i + 1).min(n)];
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (a + b);
    let fm = f(xm);
    // return the best point actually evaluated
    let mut out = Opt1D { x: xm, value: fm };
    for (x, v) in [(x1, f1), (x2, f2), (xs[best_i], best_v)] {
        if v > out.value {
            out = Opt1D { x, value: v };
        }
    }
    out
}

/// All points of the n-simplex whose coordinates are multiples of 1/steps.
pub fn simplex_grid(n: usize, steps: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(i: usize, remaining: usize, current: &mut Vec<usize>, steps: usize, out: &mut Vec<Vec<f64>>) {
        if i == current.len() - 1 {
            current[i] = remaining;
            out.push(current.iter().map(|&c| c as f64 / steps as f64).collect());
            return;
        }
        for c in 0..=remaining {
            current[i] = c;
            rec(i + 1, remaining - c, current, steps, out);
        }
    }
    rec(0, steps, &mut current, steps, &mut out);
    out
}

/// Result of a simplex maximization.
#[derive(Debug, Clone)]
pub struct OptSimplex {
    pub p: Vec<f64>,
    pub value: f64,
}

/// Maximizes a concave objective over the probability simplex, optionally
/// restricted to a convex feasible set (indicated by `feasible`). Starts from
/// the best feasible grid point, then polishes by golden-section line searches
/// along pairwise mass transfers until the gain drops below `tol`.
/// Returns None when no grid point is feasible.
pub fn maximize_simplex(
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    steps: usize,
    feasible: impl Fn(&[f64]) -> bool,
    tol: f64,
) -> Option<OptSimplex> {
    let mut best: Option<OptSimplex> = None;
    for p in simplex_grid(n, steps) {
        if !feasible(&p) {
            continue;
        }
        let v = f(&p);
        if best.as_ref().map_or(true, |b| v > b.value) {
            best = Some(OptSimplex { p, value: v });
        }
    }
    let mut best = best?;
    let eval = |p: &[f64]| if feasible(p) { f(p) } else { f64::NEG_INFINITY };
    for _round in 0..200 {
        let mut improved = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let p0 = best.p.clone();
                // move t units of mass from j to i
                let line = |t: f64| {
                    let mut q = p0.clone();
                    q[i] += t;
                    q[j] -= t;
                    eval(&q)
                };
                let opt = maximize_1d(line, 0.0, p0[j], 64, 1e-12);
                if opt.value > best.value + 1e-14 {
                    let mut q = p0;
                    q[i] += opt.x;
                    q[j] -= opt.x;
                    best = OptSimplex { p: q, value: opt.value };
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
        let _ = tol;
    }
    Some(best)
}
