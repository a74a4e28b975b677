//! Quadrature: adaptive Gauss-Kronrod for closed-form integrands and
//! composite Simpson weights for data sampled on a fixed grid.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let pair = f(c - h * x) + f(c + h * x);
        kron += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Adaptive G7-K15 on `[a, b]`: the subinterval with the largest error
/// estimate is bisected until the summed estimate drops below
/// `max(abs_tol, rel_tol * |I|)` or `max_intervals` is reached.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Integral {
    if a == b {
        return Integral { value: 0.0, error: 0.0, converged: true };
    }
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || parts.len() >= max_intervals {
            return Integral { value, error, converged: error <= target };
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(core::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integral of a smooth function with default tolerances (relative 1e-12).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    gauss_kronrod(f, a, b, 0.0, 1e-12, 4096).value
}

/// Composite Simpson weights for samples at the strictly increasing points
/// `x`, valid for non-uniform spacing and either parity of the interval count
/// (an odd count gets the standard end correction on the last interval).
pub fn simpson_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    if n == 2 {
        let h = x[1] - x[0];
        return vec![0.5 * h, 0.5 * h];
    }
    let h: Vec<f64> = x.windows(2).map(|p| p[1] - p[0]).collect();
    let intervals = h.len();
    let paired = intervals - intervals % 2;
    let mut i = 0;
    while i + 1 < paired {
        let (h0, h1) = (h[i], h[i + 1]);
        let k = (h0 + h1) / 6.0;
        w[i] += k * (2.0 - h1 / h0);
        w[i + 1] += k * (h0 + h1) * (h0 + h1) / (h0 * h1);
        w[i + 2] += k * (2.0 - h0 / h1);
        i += 2;
    }
    if intervals % 2 == 1 {
        let hl = h[intervals - 1];
        let hp = h[intervals - 2];
        w[n - 1] += (2.0 * hl * hl + 3.0 * hl * hp) / (6.0 * (hp + hl));
        w[n - 2] += (hl * hl + 3.0 * hl * hp) / (6.0 * hp);
        w[n - 3] -= hl * hl * hl / (6.0 * hp * (hp + hl));
    }
    w
}

/// `sum_k w_k y_k` for Simpson weights over `x`.
pub fn simpson(x: &[f64], y: &[f64]) -> f64 {
    simpson_weights(x).iter().zip(y).map(|(w, v)| w * v).sum()
}

/// `n` evenly spaced points covering `[a, b]` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` logarithmically spaced points covering `[a, b]`, `0 < a < b`.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}
