//! Rate maximization under Bode-Fano constraints and the benchmark
//! transmission strategies.
//!
//! The optimal transmission has the closed form
//! `T*(f) = [(1 - ln2 W(f)/SNR(f)) / (1 + ln2 W(f))]^+` with
//! `W = sum_i mu_i xi_i(f)`, so the search is over the multipliers only.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::bodefano::BodeFanoConstraint;
use crate::ladder::{cascade_scattering, Element};
use crate::network::{Band, ScenarioConfig, SnrProfile};
use crate::rational::SampledResponse;
use crate::{quad, Error, Result};

pub use crate::pipeline::bandwidth_sweep;

/// How a transmission profile was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Ideal,
    Optimal,
    FrequencyFlat,
    ConjugateMatch,
    Ladder,
    NoMatch,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Ideal,
        Strategy::Optimal,
        Strategy::FrequencyFlat,
        Strategy::ConjugateMatch,
        Strategy::Ladder,
        Strategy::NoMatch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Ideal => "ideal",
            Strategy::Optimal => "optimal",
            Strategy::FrequencyFlat => "frequency-flat",
            Strategy::ConjugateMatch => "conjugate-match",
            Strategy::Ladder => "ladder",
            Strategy::NoMatch => "no-match",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(alloc::format!("unknown strategy '{s}'")))
    }
}

/// Sampled transmission coefficient `T(f)`, the fraction of available source
/// power delivered into the load.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionProfile {
    pub frequencies: Vec<f64>,
    pub values: Vec<f64>,
    /// `r^2 = 1 - T`. Stored separately because constraint integrals need it
    /// to full relative precision when `T` rounds to one.
    pub reflected: Vec<f64>,
    pub strategy: Strategy,
}

impl TransmissionProfile {
    pub fn new(frequencies: Vec<f64>, values: Vec<f64>, strategy: Strategy) -> Self {
        let reflected = values.iter().map(|t| 1.0 - t).collect();
        Self { frequencies, values, reflected, strategy }
    }

    pub fn from_reflected(frequencies: Vec<f64>, reflected: Vec<f64>, strategy: Strategy) -> Self {
        let values = reflected.iter().map(|r| 1.0 - r).collect();
        Self { frequencies, values, reflected, strategy }
    }

    /// Value at the grid point nearest to `f`.
    pub fn nearest(&self, f: f64) -> f64 {
        let k = self
            .frequencies
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - f).abs().partial_cmp(&(b.1 - f).abs()).unwrap_or(core::cmp::Ordering::Equal))
            .map_or(0, |(k, _)| k);
        self.values[k]
    }
}

fn check_aligned(profile: &TransmissionProfile, snr: &SnrProfile) -> Result<()> {
    if profile.frequencies != snr.frequencies {
        return Err(Error::InvalidInput("profile and SNR grids differ".into()));
    }
    Ok(())
}

/// Achievable rate `int log2(1 + SNR(f) T(f)) df` in bits/s (composite
/// Simpson over the shared grid).
pub fn rate(profile: &TransmissionProfile, snr: &SnrProfile) -> Result<f64> {
    check_aligned(profile, snr)?;
    let y: Vec<f64> = profile
        .values
        .iter()
        .zip(&snr.values)
        .map(|(t, s)| (s * t).ln_1p() / LN_2)
        .collect();
    Ok(quad::simpson(&profile.frequencies, &y))
}

/// `(T*, 1 - T*)` at one frequency; the second is formed without
/// cancellation.
fn kkt_value(snr: f64, w: f64) -> (f64, f64) {
    if snr <= 0.0 {
        return (0.0, 1.0);
    }
    let lw = LN_2 * w;
    if lw >= snr {
        return (0.0, 1.0);
    }
    ((1.0 - lw / snr) / (1.0 + lw), lw * (1.0 + 1.0 / snr) / (1.0 + lw))
}

/// Pointwise optimal profile for fixed multipliers.
pub fn transmission_from_multipliers(
    mu: &[f64],
    constraints: &[BodeFanoConstraint],
    snr: &SnrProfile,
) -> Result<TransmissionProfile> {
    if mu.len() != constraints.len() {
        return Err(Error::InvalidInput("one multiplier per constraint required".into()));
    }
    if mu.iter().any(|m| !(*m >= 0.0)) {
        return Err(Error::InvalidInput("multipliers must be nonnegative".into()));
    }
    if mu.iter().all(|&m| m == 0.0) {
        return Err(Error::AllMultipliersZero);
    }
    let (values, reflected) = snr
        .frequencies
        .iter()
        .zip(&snr.values)
        .map(|(&f, &s)| {
            let w: f64 = mu.iter().zip(constraints).map(|(m, c)| m * c.weight.eval(f)).sum();
            kkt_value(s, w)
        })
        .unzip();
    Ok(TransmissionProfile {
        frequencies: snr.frequencies.clone(),
        values,
        reflected,
        strategy: Strategy::Optimal,
    })
}

/// One run of the one-multiplier-at-a-time procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Index of the constraint whose multiplier was bisected.
    pub active: usize,
    pub multipliers: Vec<f64>,
    pub rate: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub profile: TransmissionProfile,
    /// Multipliers in physical units (the weights' reciprocal units).
    pub multipliers: Vec<f64>,
    /// `max SNR / (ln2 max xi_i)` per constraint. Dividing a multiplier by
    /// its unit gives the dimensionless value used for residual checks.
    pub multiplier_units: Vec<f64>,
    pub rate: f64,
    pub lhs: Vec<f64>,
    pub slack: Vec<f64>,
    /// Max over `0 < T < 1` of the stationarity residual relative to
    /// `SNR / (1 + SNR T)`.
    pub stationarity_residual: f64,
    /// `max_i |mu_i / unit_i * slack_i| / bound_i`.
    pub complementary_slackness: f64,
    /// The single-constraint candidates in constraint order.
    pub candidates: Vec<Candidate>,
    /// True when no single-constraint candidate was feasible and the joint
    /// coordinate refinement produced the result.
    pub refined: bool,
}

struct Problem<'a> {
    constraints: &'a [BodeFanoConstraint],
    snr: &'a SnrProfile,
    /// `xi_i(f_k)`.
    xi: Vec<Vec<f64>>,
    weights: Vec<f64>,
    units: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(constraints: &'a [BodeFanoConstraint], snr: &'a SnrProfile) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidInput("at least one constraint is required".into()));
        }
        for c in constraints {
            if !(c.bound > 0.0) {
                return Err(Error::NonpositiveBound(c.bound));
            }
        }
        let smax = snr.max();
        if !(smax > 0.0) {
            return Err(Error::InvalidInput("SNR profile is identically zero".into()));
        }
        let xi: Vec<Vec<f64>> = constraints
            .iter()
            .map(|c| snr.frequencies.iter().map(|&f| c.weight.eval(f)).collect())
            .collect();
        let units = xi
            .iter()
            .map(|row| {
                let m = row
                    .iter()
                    .zip(&snr.values)
                    .filter(|(_, s)| **s > 0.0)
                    .map(|(x, _)| *x)
                    .fold(0.0, f64::max);
                smax / (LN_2 * m)
            })
            .collect();
        Ok(Self {
            constraints,
            snr,
            xi,
            weights: quad::simpson_weights(&snr.frequencies),
            units,
        })
    }

    /// `(T, 1 - T)` for scaled multipliers `t`.
    fn profile(&self, t: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (0..self.snr.values.len())
            .map(|k| {
                let w: f64 = t
                    .iter()
                    .enumerate()
                    .map(|(i, ti)| ti * self.units[i] * self.xi[i][k])
                    .sum();
                kkt_value(self.snr.values[k], w)
            })
            .unzip()
    }

    /// Left-hand side of constraint `i`; infinite when `T = 1` exactly
    /// somewhere inside the support.
    fn lhs(&self, i: usize, p: &(Vec<f64>, Vec<f64>)) -> f64 {
        let mut acc = 0.0;
        for (k, (&v, &r)) in p.0.iter().zip(&p.1).enumerate() {
            if v <= 0.0 {
                continue;
            }
            if r <= 0.0 {
                return f64::INFINITY;
            }
            acc += self.weights[k] * self.xi[i][k] * -r.ln();
        }
        acc
    }

    fn rate(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .zip(&self.snr.values)
            .zip(&self.weights)
            .map(|((t, s), w)| w * (s * t).ln_1p() / LN_2)
            .sum()
    }

    /// Scaled multiplier for constraint `i` that makes it bind with the
    /// others held at `t`, or zero if it is slack even then.
    fn bind(&self, i: usize, t: &mut [f64]) -> Result<()> {
        let bound = self.constraints[i].bound;
        let eval = |x: f64, t: &mut [f64]| {
            t[i] = x;
            self.lhs(i, &self.profile(t))
        };
        if t.iter().enumerate().any(|(j, v)| j != i && *v > 0.0) && eval(0.0, t) <= bound {
            t[i] = 0.0;
            return Ok(());
        }
        let mut hi = 1.0;
        let mut doublings = 0;
        while eval(hi, t) > bound {
            hi *= 2.0;
            doublings += 1;
            if doublings > 128 {
                return Err(Error::BracketNotFound(i));
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval(mid, t) > bound {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        t[i] = hi;
        Ok(())
    }
}

/// Maximizes the rate subject to all constraints.
///
/// For each constraint in turn its multiplier is bisected with the others at
/// zero until that constraint binds; the best candidate feasible for all
/// constraints (within `tol` relative) is returned. When none is feasible a
/// cyclic coordinate refinement adjusts all multipliers until every binding
/// constraint holds with equality.
///
/// Multipliers are searched in units of `max SNR / (ln2 max xi_i)`, which
/// keeps the bracket-doubling search within its 128-step limit even for the
/// `f^-4` weights whose physical multipliers are near `1e40`.
pub fn solve(snr: &SnrProfile, constraints: &[BodeFanoConstraint], tol: f64) -> Result<OptimizationResult> {
    let pb = Problem::new(constraints, snr)?;
    let n = constraints.len();
    let feasible = |p: &(Vec<f64>, Vec<f64>)| {
        (0..n).all(|j| pb.lhs(j, p) <= constraints[j].bound * (1.0 + tol))
    };

    let mut candidates = Vec::with_capacity(n);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for i in 0..n {
        let mut t = vec![0.0; n];
        pb.bind(i, &mut t)?;
        let vals = pb.profile(&t);
        let r = pb.rate(&vals.0);
        let ok = feasible(&vals);
        if ok && best.as_ref().is_none_or(|(br, _)| r > *br) {
            best = Some((r, t.clone()));
        }
        candidates.push(Candidate {
            active: i,
            multipliers: t.iter().zip(&pb.units).map(|(a, u)| a * u).collect(),
            rate: r,
            feasible: ok,
        });
    }

    let refined = best.is_none();
    let t = match best {
        Some((_, t)) => t,
        None => refine(&pb, &candidates, tol)?,
    };
    finish(&pb, t, candidates, refined)
}

/// Gauss-Seidel sweeps over the multipliers starting from the elementwise
/// single-constraint values (which over-constrain and are therefore
/// feasible).
fn refine(pb: &Problem<'_>, candidates: &[Candidate], tol: f64) -> Result<Vec<f64>> {
    let n = pb.constraints.len();
    let mut t: Vec<f64> = (0..n)
        .map(|i| candidates[i].multipliers[i] / pb.units[i])
        .collect();
    for _ in 0..500 {
        let prev = t.clone();
        for i in 0..n {
            pb.bind(i, &mut t)?;
        }
        let change = t
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1e-300))
            .fold(0.0, f64::max);
        let vals = pb.profile(&t);
        let ok = (0..n).all(|j| pb.lhs(j, &vals) <= pb.constraints[j].bound * (1.0 + tol));
        if ok && change < tol {
            break;
        }
    }
    Ok(t)
}

fn finish(pb: &Problem<'_>, t: Vec<f64>, candidates: Vec<Candidate>, refined: bool) -> Result<OptimizationResult> {
    let pair = pb.profile(&t);
    let n = pb.constraints.len();
    let lhs: Vec<f64> = (0..n).map(|i| pb.lhs(i, &pair)).collect();
    let slack: Vec<f64> = lhs.iter().zip(pb.constraints).map(|(l, c)| c.bound - l).collect();
    let mut stationarity: f64 = 0.0;
    for (k, (&v, &r)) in pair.0.iter().zip(&pair.1).enumerate() {
        if v > 0.0 && r > 0.0 {
            let s = pb.snr.values[k];
            let w: f64 = (0..n).map(|i| t[i] * pb.units[i] * pb.xi[i][k]).sum();
            let first = s / (1.0 + s * v);
            let resid = (-first + LN_2 * w / r).abs() / first;
            stationarity = stationarity.max(resid);
        }
    }
    let cs = (0..n)
        .map(|i| (t[i] * slack[i]).abs() / pb.constraints[i].bound)
        .fold(0.0, f64::max);
    let (values, reflected) = pair;
    let profile = TransmissionProfile {
        frequencies: pb.snr.frequencies.clone(),
        values,
        reflected,
        strategy: Strategy::Optimal,
    };
    let rate = pb.rate(&profile.values);
    Ok(OptimizationResult {
        multipliers: t.iter().zip(&pb.units).map(|(a, u)| a * u).collect(),
        multiplier_units: pb.units.clone(),
        profile,
        rate,
        lhs,
        slack,
        stationarity_residual: stationarity,
        complementary_slackness: cs,
        candidates,
        refined,
    })
}

/// Reflected fraction `max_i r_i`, `r_i = exp(-B_i / int_band xi_i)`, of
/// the constant profile that satisfies every constraint.
pub fn frequency_flat_reflection(constraints: &[BodeFanoConstraint], band: Band) -> f64 {
    let worst = constraints
        .iter()
        .map(|c| {
            let integral = c.weight.integral(band);
            if integral.is_finite() && integral > 0.0 {
                (-c.bound / integral).exp()
            } else {
                1.0
            }
        })
        .fold(0.0, f64::max);
    worst
}

/// The constant level `T_ff = 1 - max_i r_i`.
pub fn frequency_flat_level(constraints: &[BodeFanoConstraint], band: Band) -> f64 {
    1.0 - frequency_flat_reflection(constraints, band)
}

/// Constant transmission on `band` (zero elsewhere) on `grid`.
pub fn frequency_flat(constraints: &[BodeFanoConstraint], band: Band, grid: &[f64]) -> TransmissionProfile {
    let r = frequency_flat_reflection(constraints, band);
    TransmissionProfile::from_reflected(
        grid.to_vec(),
        grid.iter().map(|&f| if band.contains(f) { r } else { 1.0 }).collect(),
        Strategy::FrequencyFlat,
    )
}

/// `T = 1` on the band: the unconstrained benchmark.
pub fn ideal_profile(band: Band, grid: &[f64]) -> TransmissionProfile {
    TransmissionProfile::new(
        grid.to_vec(),
        grid.iter().map(|&f| if band.contains(f) { 1.0 } else { 0.0 }).collect(),
        Strategy::Ideal,
    )
}

/// Source wired straight to the load: `T = 1 - |S_eq|^2`.
pub fn no_match_profile(load: &SampledResponse) -> TransmissionProfile {
    TransmissionProfile::from_reflected(
        load.frequencies().to_vec(),
        load.values().iter().map(|s| s.norm_sqr()).collect(),
        Strategy::NoMatch,
    )
}

/// Lossless L-section conjugate match and its response.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateMatch {
    /// Elements from the source toward the load.
    pub elements: Vec<Element>,
    pub profile: TransmissionProfile,
    /// Stored energy at the design frequency per watt delivered, times the
    /// angular frequency (a dimensionless Q-like figure).
    pub stored_energy: f64,
}

fn series_element(x: f64, w: f64) -> Option<Element> {
    if x > 0.0 {
        Some(Element::SeriesInductor(x / w))
    } else if x < 0.0 {
        Some(Element::SeriesCapacitor(-1.0 / (w * x)))
    } else {
        None
    }
}

fn shunt_element(b: f64, w: f64) -> Option<Element> {
    if b > 0.0 {
        Some(Element::ShuntCapacitor(b / w))
    } else if b < 0.0 {
        Some(Element::ShuntInductor(-1.0 / (w * b)))
    } else {
        None
    }
}

/// Reactive energy (times omega, per watt into the load) of a cascade
/// terminated in `z_load`, from a backward voltage/current sweep.
pub fn stored_energy(elements: &[Element], z_load: Complex64, w: f64) -> f64 {
    let mut v = Complex64::new(1.0, 0.0);
    let mut i = v / z_load;
    let p_load = (v * i.conj()).re;
    let mut energy = 0.0;
    for e in elements.iter().rev() {
        match *e {
            Element::SeriesInductor(_) | Element::SeriesCapacitor(_) => {
                let z = e.impedance(w);
                energy += z.im.abs() * i.norm_sqr();
                v += i * z;
            }
            Element::ShuntInductor(_) | Element::ShuntCapacitor(_) => {
                let y = e.admittance(w);
                energy += y.im.abs() * v.norm_sqr();
                i += v * y;
            }
        }
    }
    energy / p_load
}

/// The two textbook L-section solutions matching `z_load` to `z0` at `w`,
/// source-to-load element order.
pub fn l_section_solutions(z_load: Complex64, z0: f64, w: f64) -> Result<Vec<Vec<Element>>> {
    let (rl, xl) = (z_load.re, z_load.im);
    if !(rl > 0.0) {
        return Err(Error::Unmatchable(rl));
    }
    let mut out = Vec::new();
    if rl < z0 {
        // Series reactance next to the load, shunt susceptance at the source.
        for sign in [1.0, -1.0] {
            let x = sign * (rl * (z0 - rl)).sqrt() - xl;
            let b = sign * ((z0 - rl) / rl).sqrt() / z0;
            out.push(shunt_element(b, w).into_iter().chain(series_element(x, w)).collect());
        }
    } else {
        // Shunt susceptance next to the load, series reactance at the source.
        let mag2 = rl * rl + xl * xl;
        for sign in [1.0, -1.0] {
            let b = (xl + sign * (rl / z0).sqrt() * (mag2 - z0 * rl).max(0.0).sqrt()) / mag2;
            let x = if b != 0.0 { 1.0 / b + xl * z0 / rl - z0 / (b * rl) } else { -xl };
            out.push(series_element(x, w).into_iter().chain(shunt_element(b, w)).collect());
        }
    }
    Ok(out)
}

/// Response of a lossless element cascade into the sampled load.
pub fn cascade_profile(elements: &[Element], z0: f64, load: &SampledResponse, strategy: Strategy) -> Result<TransmissionProfile> {
    let values = load
        .frequencies()
        .iter()
        .zip(load.values())
        .map(|(&f, &s)| cascade_scattering(elements, z0, f).transmission_into(s, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransmissionProfile::new(load.frequencies().to_vec(), values, strategy))
}

/// L-section that presents `Z_0` to the source at `f_c` exactly; of the two
/// solutions the one storing less reactive energy is used.
pub fn conjugate_match(cfg: &ScenarioConfig, load: &SampledResponse) -> Result<ConjugateMatch> {
    let s = load.interpolate(cfg.f_c_hz);
    let z0 = cfg.z0_ohm;
    let zl = z0 * (1.0 + s) / (1.0 - s);
    let w = 2.0 * core::f64::consts::PI * cfg.f_c_hz;
    let mut best: Option<(f64, Vec<Element>)> = None;
    for sol in l_section_solutions(zl, z0, w)? {
        let e = stored_energy(&sol, zl, w);
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e, sol));
        }
    }
    let (stored, elements) = best.ok_or(Error::Unmatchable(zl.re))?;
    let profile = cascade_profile(&elements, z0, load, Strategy::ConjugateMatch)?;
    Ok(ConjugateMatch { elements, profile, stored_energy: stored })
}
