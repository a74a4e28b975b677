//! Derivative-free simplex minimization with dimension-adaptive
//! coefficients (Gao and Han), used by the ladder fitter.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_evaluations: usize,
    /// Stop once every vertex is within this distance (max-norm) of the best.
    pub x_tol: f64,
    /// ...and every objective value within this of the best.
    pub f_tol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { max_evaluations: 4000, x_tol: 1e-6, f_tol: 1e-12, initial_step: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0`. Non-finite objective values are treated as
/// `+inf`, so the simplex walks away from them. The returned point is never
/// worse than `x0`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> Minimum {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0, &mut evals);
        return Minimum { x: Vec::new(), value, evaluations: evals, converged: true };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    let point = |c: &[f64], d: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(d).map(|(a, b)| a + t * (b - a)).collect()
    };
    while evals < opts.max_evaluations {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
        let best = &simplex[0];
        let spread_x = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let spread_f = simplex[1..].iter().map(|(_, v)| (v - best.1).abs()).fold(0.0, f64::max);
        if spread_x <= opts.x_tol && spread_f <= opts.f_tol {
            converged = true;
            break;
        }

        let mut centroid = alloc::vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst = simplex[n].clone();
        let second = simplex[n - 1].1;
        let reflected = point(&centroid, &worst.0, -alpha);
        let fr = eval(&reflected, &mut evals);

        if fr < simplex[0].1 {
            let expanded = point(&centroid, &worst.0, -alpha * beta);
            let fe = eval(&expanded, &mut evals);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < second {
            simplex[n] = (reflected, fr);
            continue;
        }
        // Contraction: outside when the reflection improved on the worst.
        let (cand, fc) = if fr < worst.1 {
            let c = point(&centroid, &worst.0, -alpha * gamma);
            let v = eval(&c, &mut evals);
            (c, v)
        } else {
            let c = point(&centroid, &worst.0, gamma);
            let v = eval(&c, &mut evals);
            (c, v)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (cand, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = point(&anchor, &vertex.0, delta);
            let v = eval(&x, &mut evals);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evaluations: evals, converged }
}
