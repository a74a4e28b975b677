//! Real-coefficient rational functions of the complex frequency `s`, stored
//! as zeros, poles and a gain (all in rad/s), plus passive rational fitting.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::poly::{self, RootMultiplicity};
use crate::{linalg, quad, Error, Result};

const CONJ_TOL: f64 = 1e-9;
/// Relative clustering radius for reflection-equation roots.
pub const ROOT_CLUSTER_TOL: f64 = 1e-6;
/// Coefficients of `S(-s)S(s) - 1` below this fraction of the subtracted
/// terms are treated as cancellation noise.
const CANCEL_TOL: f64 = 1e-10;
/// Allowed passivity excess on the imaginary axis.
pub const PASSIVITY_TOL: f64 = 1e-9;

/// `gain * prod(s - z) / prod(s - p)` with conjugate-closed zeros and poles.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
    gain: f64,
}

/// Roots of the reflection equation `S(-s)S(s) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionRoots {
    /// Distinct finite roots with multiplicities, closed under `s -> -s` and
    /// conjugation.
    pub roots: Vec<RootMultiplicity>,
    /// Multiplicity of the root at infinity (the degree lost by the numerator
    /// polynomial relative to `2 * max(#zeros, #poles)`).
    pub at_infinity: usize,
}

fn conjugate_closed(v: &[Complex64]) -> bool {
    v.iter().all(|r| {
        v.iter()
            .any(|q| (q.conj() - r).norm() <= CONJ_TOL * (1.0 + r.norm()))
    })
}

impl RationalFunction {
    /// Builds from explicit zeros, poles and gain (rad/s). Zeros and poles
    /// must be closed under conjugation and there may not be more zeros
    /// than poles.
    pub fn new(zeros: Vec<Complex64>, poles: Vec<Complex64>, gain: f64) -> Result<Self> {
        if zeros.len() > poles.len() {
            return Err(Error::InvalidInput("improper rational function".into()));
        }
        if !conjugate_closed(&zeros) || !conjugate_closed(&poles) {
            return Err(Error::InvalidInput(
                "zeros and poles must be closed under conjugation".into(),
            ));
        }
        if !gain.is_finite() {
            return Err(Error::InvalidInput("non-finite gain".into()));
        }
        Ok(Self { zeros, poles, gain })
    }

    pub fn constant(gain: f64) -> Self {
        Self { zeros: Vec::new(), poles: Vec::new(), gain }
    }

    /// Builds from ascending real coefficients of numerator and denominator
    /// in `s`. Leading coefficients that are exactly zero are ignored.
    pub fn from_polynomials(num: &[f64], den: &[f64]) -> Result<Self> {
        let dn = poly::degree(num, 0.0);
        let dd = poly::degree(den, 0.0)
            .ok_or_else(|| Error::InvalidInput("zero denominator".into()))?;
        let Some(dn) = dn else {
            return Ok(Self::constant(0.0));
        };
        let zeros = poly::symmetrize(&poly::roots(num, 0.0)?, CONJ_TOL);
        let poles = poly::symmetrize(&poly::roots(den, 0.0)?, CONJ_TOL);
        Self::new(zeros, poles, num[dn] / den[dd])
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// `(zeros, poles)` as stored.
    pub fn poles_zeros(&self) -> (&[Complex64], &[Complex64]) {
        (&self.zeros, &self.poles)
    }

    pub fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        let mut den = Complex64::new(1.0, 0.0);
        for &p in &self.poles {
            let d = s - p;
            if d.norm() <= f64::EPSILON * p.norm().max(s.norm()) {
                return Err(Error::Singularity(s));
            }
            den *= d;
        }
        let num = self
            .zeros
            .iter()
            .fold(Complex64::new(self.gain, 0.0), |acc, &z| acc * (s - z));
        Ok(num / den)
    }

    /// Value on the imaginary axis at `f` Hz.
    pub fn evaluate_hz(&self, f: f64) -> Result<Complex64> {
        self.evaluate(Complex64::new(0.0, 2.0 * PI * f))
    }

    /// Value at `s -> infinity` (the gain for equal degrees, zero otherwise).
    pub fn at_infinity(&self) -> f64 {
        if self.zeros.len() == self.poles.len() {
            self.gain
        } else {
            0.0
        }
    }

    /// `g(s) = f(-s)`.
    pub fn flip(&self) -> Self {
        let parity = (self.zeros.len() + self.poles.len()) % 2;
        Self {
            zeros: self.zeros.iter().map(|z| -z).collect(),
            poles: self.poles.iter().map(|p| -p).collect(),
            gain: if parity == 1 { -self.gain } else { self.gain },
        }
    }

    pub fn is_stable(&self) -> bool {
        self.poles.iter().all(|p| p.re < 0.0)
    }

    /// Geometric mean magnitude of the nonzero zeros and poles; used to bring
    /// polynomial coefficients to order one.
    fn frequency_scale(&self) -> f64 {
        let mags: Vec<f64> = self
            .zeros
            .iter()
            .chain(&self.poles)
            .map(|r| r.norm())
            .filter(|&m| m > 0.0)
            .collect();
        if mags.is_empty() {
            1.0
        } else {
            (mags.iter().map(|m| m.ln()).sum::<f64>() / mags.len() as f64).exp()
        }
    }

    /// `(N, D)` with `f(w u) = N(u) / D(u)`, `D` monic.
    fn scaled_polynomials(&self, w: f64) -> (Vec<f64>, Vec<f64>) {
        let zs: Vec<Complex64> = self.zeros.iter().map(|z| z / w).collect();
        let ps: Vec<Complex64> = self.poles.iter().map(|p| p / w).collect();
        let lead = self.gain * w.powi(self.zeros.len() as i32 - self.poles.len() as i32);
        (poly::from_roots(&zs, lead), poly::from_roots(&ps, 1.0))
    }

    /// Roots of the numerator of `f(-s) f(s) - 1`, i.e. of
    /// `N(-s)N(s) - D(-s)D(s)`, clustered with a relative radius of
    /// [`ROOT_CLUSTER_TOL`]. Roots at the origin are detected exactly from
    /// vanishing low-order coefficients.
    pub fn reflection_equation_roots(&self) -> Result<ReflectionRoots> {
        let w = self.frequency_scale();
        let (n, d) = self.scaled_polynomials(w);
        let nn = poly::mul(&poly::reflect(&n), &n);
        let dd = poly::mul(&poly::reflect(&d), &d);
        let mag = nn.iter().chain(&dd).fold(0.0f64, |m, c| m.max(c.abs()));
        let mut p = poly::sub(&nn, &dd);
        for (k, c) in p.iter_mut().enumerate() {
            // The polynomial is even in s; odd terms are rounding residue.
            if k % 2 == 1 || c.abs() <= CANCEL_TOL * mag {
                *c = 0.0;
            }
        }
        let Some(deg) = poly::degree(&p, 0.0) else {
            return Err(Error::IdenticallyReflective);
        };
        let full = 2 * self.zeros.len().max(self.poles.len());
        // Solving in x = s^2 halves the degree and avoids the +-s symmetric
        // spectrum, on which the companion-matrix QR iteration can stall.
        let even: Vec<f64> = p.iter().step_by(2).copied().collect();
        let raw: Vec<Complex64> = poly::roots(&even, 0.0)?
            .into_iter()
            .flat_map(|x| {
                let r = x.sqrt();
                [r, -r]
            })
            .collect();
        let roots = poly::cluster(&raw, ROOT_CLUSTER_TOL)
            .into_iter()
            .map(|r| RootMultiplicity {
                root: r.root * w,
                multiplicity: r.multiplicity,
            })
            .collect();
        Ok(ReflectionRoots { roots, at_infinity: full - deg })
    }

    /// Taylor coefficients `c_0 .. c_{count-1}` of `ln(1 / f(s))` about
    /// `center`.
    pub fn log_taylor_coefficients(&self, center: Complex64, count: usize) -> Result<Vec<Complex64>> {
        let value = self.evaluate(center)?;
        if value.norm() == 0.0 {
            return Err(Error::LogSingularity(center));
        }
        let mut out = Vec::with_capacity(count);
        if count > 0 {
            out.push(-value.ln());
        }
        for k in 1..count {
            let power = |a: Complex64| (center - a).powi(-(k as i32));
            let sp: Complex64 = self.poles.iter().map(|&p| power(p)).sum();
            let sz: Complex64 = self.zeros.iter().map(|&z| power(z)).sum();
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out.push((sp - sz) * (sign / k as f64));
        }
        Ok(out)
    }

    /// Largest `|f(j w)|` over `points` log-spaced frequencies spanning six
    /// decades around the pole/zero scale, plus DC, infinity, the pole
    /// resonances and any `extra` frequencies (Hz).
    pub fn max_magnitude_on_axis(&self, points: usize, extra: &[f64]) -> f64 {
        let w = self.frequency_scale();
        let mut omegas = quad::logspace(1e-3 * w, 1e3 * w, points);
        omegas.push(0.0);
        omegas.extend(self.poles.iter().map(|p| p.im.abs()));
        omegas.extend(extra.iter().map(|f| 2.0 * PI * f));
        omegas
            .into_iter()
            .filter_map(|om| self.evaluate(Complex64::new(0.0, om)).ok())
            .map(|v| v.norm())
            .fold(self.at_infinity().abs(), f64::max)
    }

    fn scale_gain(&mut self, k: f64) {
        self.gain *= k;
    }
}

/// Sampled one-port response on the imaginary axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledResponse {
    frequencies: Vec<f64>,
    values: Vec<Complex64>,
}

impl SampledResponse {
    pub fn new(frequencies: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if frequencies.len() != values.len() {
            return Err(Error::InvalidInput("frequency/value length mismatch".into()));
        }
        if frequencies.iter().any(|&f| !(f > 0.0 && f.is_finite())) {
            return Err(Error::InvalidInput("frequencies must be positive".into()));
        }
        if frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("frequencies must be strictly increasing".into()));
        }
        Ok(Self { frequencies, values })
    }

    /// Samples `f(j 2 pi f)` of a rational function.
    pub fn from_rational(func: &RationalFunction, frequencies: Vec<f64>) -> Result<Self> {
        let values = frequencies
            .iter()
            .map(|&f| func.evaluate_hz(f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frequencies, values)
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Linear interpolation in frequency (clamped at the ends).
    pub fn interpolate(&self, f: f64) -> Complex64 {
        let fs = &self.frequencies;
        let i = fs.partition_point(|&x| x < f);
        if i == 0 {
            return self.values[0];
        }
        if i >= fs.len() {
            return self.values[fs.len() - 1];
        }
        let t = (f - fs[i - 1]) / (fs[i] - fs[i - 1]);
        self.values[i - 1] * (1.0 - t) + self.values[i] * t
    }
}

/// Tuning for [`fit_rational`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Target max relative error over the samples.
    pub tolerance: f64,
    /// Sanathanan-Koerner reweighting passes.
    pub iterations: usize,
    /// Imaginary-axis grid size used for passivity enforcement.
    pub passivity_points: usize,
    /// Pole/zero pairs closer than this fraction of `|p|` cancel.
    pub cancel_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-3,
            iterations: 60,
            passivity_points: 10_001,
            cancel_tolerance: 1e-3,
        }
    }
}

/// A fitted model and its achieved max relative error on the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFit {
    pub function: RationalFunction,
    pub max_rel_error: f64,
    pub order: usize,
}

fn max_rel_error(func: &RationalFunction, data: &SampledResponse) -> f64 {
    data.frequencies
        .iter()
        .zip(&data.values)
        .map(|(&f, &h)| match func.evaluate_hz(f) {
            Ok(v) => (v - h).norm() / h.norm().max(1e-300),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn sk_iterations(u: &[Complex64], h: &[Complex64], order: usize, iterations: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let ns = u.len();
    let cols = 2 * order + 1;
    let mut den = alloc::vec![1.0; 1];
    den.extend(core::iter::repeat_n(0.0, order));
    let mut num = Vec::new();
    for _ in 0..iterations {
        let mut a = DMatrix::<f64>::zeros(2 * ns, cols);
        let mut b = DVector::<f64>::zeros(2 * ns);
        for (k, (&uk, &hk)) in u.iter().zip(h).enumerate() {
            let wk = Complex64::new(1.0, 0.0) / poly::eval(&den, uk);
            let mut pw = Complex64::new(1.0, 0.0);
            for j in 0..=order {
                let t = pw * wk;
                a[(k, j)] = t.re;
                a[(k + ns, j)] = t.im;
                if j > 0 {
                    let t = -hk * pw * wk;
                    a[(k, order + j)] = t.re;
                    a[(k + ns, order + j)] = t.im;
                }
                pw *= uk;
            }
            let r = hk * wk;
            b[k] = r.re;
            b[k + ns] = r.im;
        }
        let x = linalg::lstsq(&a, &b, 1e-13)?;
        num = x.iter().take(order + 1).copied().collect();
        let mut next = alloc::vec![1.0];
        next.extend(x.iter().skip(order + 1));
        let change = next
            .iter()
            .zip(&den)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / next.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        den = next;
        if change < 1e-13 {
            break;
        }
    }
    Ok((num, den))
}

fn trim_leading(p: &mut Vec<f64>) {
    let mag = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    while p.len() > 1 && p[p.len() - 1].abs() <= 1e-12 * mag {
        p.pop();
    }
}

/// Passive, stable rational approximation of the samples with denominator
/// degree at most `order`.
///
/// Sanathanan-Koerner iterations solve for `N/D` with `D(0) = 1` on the
/// normalized variable `s / w0`, `w0` the geometric-mean sample frequency.
/// Right-half-plane poles are then mirrored, nearly coincident pole/zero
/// pairs are cancelled, and the gain is scaled down if `|f(jw)|` exceeds one
/// anywhere on a dense axis grid. Returns [`Error::OrderTooLow`] (carrying
/// the best-effort fit) when the final error exceeds `opts.tolerance`.
pub fn fit_rational(data: &SampledResponse, order: usize, opts: &FitOptions) -> Result<RationalFit> {
    if order == 0 {
        return Err(Error::InvalidInput("fit order must be at least 1".into()));
    }
    if data.len() < 2 * order + 2 {
        return Err(Error::InvalidInput("too few samples for the requested order".into()));
    }
    let fs = data.frequencies();
    let f0 = (fs[0] * fs[fs.len() - 1]).sqrt();
    let w0 = 2.0 * PI * f0;
    let u: Vec<Complex64> = fs.iter().map(|f| Complex64::new(0.0, f / f0)).collect();
    let (mut num, mut den) = sk_iterations(&u, data.values(), order, opts.iterations)?;
    trim_leading(&mut num);
    trim_leading(&mut den);

    let unscale = |r: Vec<Complex64>| -> Vec<Complex64> {
        poly::symmetrize(&r, CONJ_TOL).into_iter().map(|x| x * w0).collect()
    };
    let mut poles = if den.len() > 1 { unscale(poly::roots(&den, 0.0)?) } else { Vec::new() };
    let mut zeros = if num.len() > 1 && num.iter().any(|&c| c != 0.0) {
        unscale(poly::roots(&num, 0.0)?)
    } else {
        Vec::new()
    };
    let mut gain = num[num.len() - 1] / den[den.len() - 1]
        * w0.powi(poles.len() as i32 - zeros.len() as i32);

    for p in poles.iter_mut() {
        if p.re >= 0.0 {
            *p = Complex64::new(-p.re.abs().max(1e-9 * p.norm()), p.im);
        }
    }
    // Overfitting guard: a zero sitting on a pole contributes nothing but
    // extra reflection-equation roots.
    let mut i = 0;
    while i < poles.len() {
        let p = poles[i];
        if let Some(j) = zeros
            .iter()
            .position(|z| (z - p).norm() < opts.cancel_tolerance * p.norm())
        {
            zeros.swap_remove(j);
            poles.swap_remove(i);
        } else {
            i += 1;
        }
    }
    while zeros.len() > poles.len() {
        // Trimming can leave fewer poles than zeros. The farthest zeros act as
        // constants across the band, so fold them into the gain.
        let far = zeros
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap_or(core::cmp::Ordering::Equal))
            .map(|(k, _)| k)
            .unwrap_or(0);
        let z = zeros.swap_remove(far);
        gain *= -z.re.signum() * z.norm();
    }
    let mut func = RationalFunction::new(zeros, poles, gain)?;
    let peak = func.max_magnitude_on_axis(opts.passivity_points, fs);
    if peak > 1.0 {
        func.scale_gain(1.0 / peak);
    }
    let err = max_rel_error(&func, data);
    let fit = RationalFit { function: func, max_rel_error: err, order };
    if err <= opts.tolerance {
        Ok(fit)
    } else {
        Err(Error::OrderTooLow { error: err, target: opts.tolerance, best: Box::new(fit) })
    }
}

/// Smallest order in `1..=max_order` meeting the tolerance. When none does,
/// the lowest-error attempt is returned inside [`Error::OrderTooLow`].
pub fn fit_rational_auto(data: &SampledResponse, max_order: usize, opts: &FitOptions) -> Result<RationalFit> {
    let mut best: Option<RationalFit> = None;
    for order in 1..=max_order {
        if data.len() < 2 * order + 2 {
            break;
        }
        match fit_rational(data, order, opts) {
            Ok(fit) => return Ok(fit),
            Err(Error::OrderTooLow { best: b, .. }) => {
                if best.as_ref().is_none_or(|x| b.max_rel_error < x.max_rel_error) {
                    best = Some(*b);
                }
            }
            Err(e) => return Err(e),
        }
    }
    match best {
        Some(b) => Err(Error::OrderTooLow {
            error: b.max_rel_error,
            target: opts.tolerance,
            best: Box::new(b),
        }),
        None => Err(Error::InvalidInput("too few samples to fit".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 4.29e-3 / 299_792_458.0;

    fn chu() -> RationalFunction {
        RationalFunction::from_polynomials(&[1.0], &[1.0, 2.0 * TAU, 2.0 * TAU * TAU]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_simple() {
        let f = RationalFunction::new(alloc::vec![c(1.0, 0.0)], alloc::vec![c(-1.0, 0.0)], 1.0).unwrap();
        assert_eq!(f.evaluate(c(0.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert_eq!(f.evaluate(c(-1.0, 0.0)), Err(Error::Singularity(c(-1.0, 0.0))));
    }

    #[test]
    fn chu_at_dc_and_center() {
        let f = chu();
        assert!((f.evaluate(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let x = 2.0 * PI * 7e9 * TAU;
        let want = (c(1.0 - 2.0 * x * x, 2.0 * x)).inv();
        let got = f.evaluate_hz(7e9).unwrap();
        assert!((got - want).norm() < 1e-12);
        assert!((got.norm() - 0.784).abs() < 2e-3);
    }

    #[test]
    fn flip_is_involution() {
        let f = RationalFunction::new(alloc::vec![c(2.0, 0.0)], alloc::vec![c(-1.0, 3.0), c(-1.0, -3.0)], 2.0).unwrap();
        assert_eq!(f.flip().flip(), f);
        let s = c(0.3, 0.7);
        assert!((f.flip().evaluate(s).unwrap() - f.evaluate(-s).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn constant_has_no_reflection_roots() {
        let r = RationalFunction::constant(0.5).reflection_equation_roots().unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.at_infinity, 0);
    }

    #[test]
    fn unit_constant_is_identically_reflective() {
        assert_eq!(
            RationalFunction::constant(1.0).reflection_equation_roots(),
            Err(Error::IdenticallyReflective)
        );
    }

    #[test]
    fn chu_reflection_root_is_quadruple_origin() {
        let r = chu().reflection_equation_roots().unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].multiplicity, 4);
        assert_eq!(r.roots[0].root, c(0.0, 0.0));
        assert_eq!(r.at_infinity, 0);
    }

    #[test]
    fn chu_log_taylor() {
        let cs = chu().log_taylor_coefficients(c(0.0, 0.0), 4).unwrap();
        assert!(cs[0].norm() < 1e-15);
        assert!((cs[1].re - 2.0 * TAU).abs() < 1e-12 * TAU);
        assert!((-cs[3].re - 4.0 * TAU.powi(3) / 3.0).abs() < 1e-12 * TAU.powi(3));
        let ones = RationalFunction::constant(1.0).log_taylor_coefficients(c(0.3, 0.0), 5).unwrap();
        assert!(ones.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn log_at_zero_is_an_error() {
        let f = RationalFunction::new(alloc::vec![c(0.0, 0.0)], alloc::vec![c(-1.0, 0.0)], 1.0).unwrap();
        assert!(matches!(f.log_taylor_coefficients(c(0.0, 0.0), 2), Err(Error::LogSingularity(_))));
    }

    #[test]
    fn rejects_open_conjugate_set() {
        assert!(RationalFunction::new(Vec::new(), alloc::vec![c(-1.0, 1.0)], 1.0).is_err());
    }

    #[test]
    fn fit_constant() {
        let fs = quad::linspace(1e9, 2e9, 20);
        let data = SampledResponse::new(fs.clone(), alloc::vec![c(0.3, 0.0); 20]).unwrap();
        let fit = fit_rational(&data, 1, &FitOptions::default()).unwrap();
        assert!(fit.function.zeros().is_empty() && fit.function.poles().is_empty());
        assert!((fit.function.gain() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_chu() {
        let fs = quad::linspace(4.9e9, 9.1e9, 201);
        let data = SampledResponse::from_rational(&chu(), fs).unwrap();
        let fit = fit_rational(&data, 2, &FitOptions::default()).unwrap();
        assert!(fit.max_rel_error < 1e-6, "{}", fit.max_rel_error);
        assert_eq!(fit.function.poles().len(), 2);
        for p in chu().poles() {
            assert!(fit.function.poles().iter().any(|q| (q - p).norm() < 1e-6 * p.norm()));
        }
    }

    #[test]
    fn too_few_samples() {
        let data = SampledResponse::new(alloc::vec![1.0, 2.0, 3.0], alloc::vec![c(0.1, 0.0); 3]).unwrap();
        assert!(fit_rational(&data, 1, &FitOptions::default()).is_err());
    }

    #[test]
    fn sampled_response_validates() {
        assert!(SampledResponse::new(alloc::vec![2.0, 1.0], alloc::vec![c(0.0, 0.0); 2]).is_err());
        assert!(SampledResponse::new(alloc::vec![0.0], alloc::vec![c(0.0, 0.0)]).is_err());
        assert!(SampledResponse::new(alloc::vec![1.0], Vec::new()).is_err());
    }
}
