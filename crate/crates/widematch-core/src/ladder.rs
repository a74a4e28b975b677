//! Lossless LC ladders: ABCD evaluation and least-squares fitting of
//! element values to a target transmission profile.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nelder_mead::{self, SimplexOptions};
use crate::network::{SnrProfile, TwoPort};
use crate::optimizer::{self, Strategy, TransmissionProfile};
use crate::rational::SampledResponse;
use crate::{Error, Result};

pub const INDUCTANCE_BOUNDS: (f64, f64) = (1e-12, 1e-6);
pub const CAPACITANCE_BOUNDS: (f64, f64) = (1e-15, 1e-9);
pub const MAX_ORDER: usize = 10;

/// A single lumped reactive element; values in henries or farads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    SeriesInductor(f64),
    SeriesCapacitor(f64),
    ShuntInductor(f64),
    ShuntCapacitor(f64),
}

impl Element {
    /// Series impedance (for shunt elements, the impedance of the branch).
    pub fn impedance(&self, w: f64) -> Complex64 {
        match *self {
            Element::SeriesInductor(l) | Element::ShuntInductor(l) => Complex64::new(0.0, w * l),
            Element::SeriesCapacitor(c) | Element::ShuntCapacitor(c) => Complex64::new(0.0, -1.0 / (w * c)),
        }
    }

    pub fn admittance(&self, w: f64) -> Complex64 {
        match *self {
            Element::SeriesInductor(l) | Element::ShuntInductor(l) => Complex64::new(0.0, -1.0 / (w * l)),
            Element::SeriesCapacitor(c) | Element::ShuntCapacitor(c) => Complex64::new(0.0, w * c),
        }
    }

    pub fn is_series(&self) -> bool {
        matches!(self, Element::SeriesInductor(_) | Element::SeriesCapacitor(_))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Element::SeriesInductor(v)
            | Element::SeriesCapacitor(v)
            | Element::ShuntInductor(v)
            | Element::ShuntCapacitor(v) => v,
        }
    }
}

/// Chain matrix `[[A, B], [C, D]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Abcd {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self { a: o, b: z, c: z, d: o }
    }

    /// `self` followed by `e` (toward the load).
    pub fn then(self, e: &Element, w: f64) -> Self {
        if e.is_series() {
            let z = e.impedance(w);
            Self { a: self.a, b: self.a * z + self.b, c: self.c, d: self.c * z + self.d }
        } else {
            let y = e.admittance(w);
            Self { a: self.a + self.b * y, b: self.b, c: self.c + self.d * y, d: self.d }
        }
    }

    /// Scattering parameters referenced to `z0` at both ports.
    pub fn to_scattering(&self, z0: f64) -> TwoPort {
        let (bz, cz) = (self.b / z0, self.c * z0);
        let den = self.a + bz + cz + self.d;
        let s21 = Complex64::new(2.0, 0.0) / den;
        TwoPort {
            s11: (self.a + bz - cz - self.d) / den,
            s12: s21,
            s21,
            s22: (-self.a + bz - cz + self.d) / den,
        }
    }
}

/// Two-port of an element cascade listed from the source toward the load.
pub fn cascade_scattering(elements: &[Element], z0: f64, f: f64) -> TwoPort {
    let w = 2.0 * PI * f;
    elements.iter().fold(Abcd::identity(), |m, e| m.then(e, w)).to_scattering(z0)
}

/// Which element sits next to the source in every L-C stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Topology {
    SeriesFirst,
    /// Default: a shunt capacitor at the source then a series inductor, so a
    /// one-stage ladder is the low-pass L-section that matches a capacitive
    /// load with resistance below `Z_0`.
    #[default]
    ShuntFirst,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::SeriesFirst => "series-first",
            Topology::ShuntFirst => "shunt-first",
        }
    }
}

impl core::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series-first" => Ok(Topology::SeriesFirst),
            "shunt-first" => Ok(Topology::ShuntFirst),
            _ => Err(Error::InvalidInput(alloc::format!("unknown topology '{s}'"))),
        }
    }
}

/// Alternating series-L / shunt-C ladder with `order` L-C stages.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderNetwork {
    inductances: Vec<f64>,
    capacitances: Vec<f64>,
    topology: Topology,
    z0: f64,
}

impl LadderNetwork {
    pub fn new(inductances: Vec<f64>, capacitances: Vec<f64>, topology: Topology, z0: f64) -> Result<Self> {
        let order = inductances.len();
        if order != capacitances.len() {
            return Err(Error::InvalidInput("need one capacitor per inductor".into()));
        }
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidInput(alloc::format!("ladder order {order} outside 1..={MAX_ORDER}")));
        }
        if inductances.iter().chain(&capacitances).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInput("element values must be positive and finite".into()));
        }
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(Error::InvalidInput("reference impedance must be positive".into()));
        }
        Ok(Self { inductances, capacitances, topology, z0 })
    }

    pub fn order(&self) -> usize {
        self.inductances.len()
    }

    pub fn inductances(&self) -> &[f64] {
        &self.inductances
    }

    pub fn capacitances(&self) -> &[f64] {
        &self.capacitances
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// Elements from the source toward the load.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(2 * self.order());
        for (&l, &c) in self.inductances.iter().zip(&self.capacitances) {
            let (s, p) = (Element::SeriesInductor(l), Element::ShuntCapacitor(c));
            match self.topology {
                Topology::SeriesFirst => out.extend([s, p]),
                Topology::ShuntFirst => out.extend([p, s]),
            }
        }
        out
    }
}

pub fn two_port_scattering(net: &LadderNetwork, f: f64) -> TwoPort {
    let w = 2.0 * PI * f;
    let mut m = Abcd::identity();
    for (&l, &c) in net.inductances.iter().zip(&net.capacitances) {
        let (s, p) = (Element::SeriesInductor(l), Element::ShuntCapacitor(c));
        m = match net.topology {
            Topology::SeriesFirst => m.then(&s, w).then(&p, w),
            Topology::ShuntFirst => m.then(&p, w).then(&s, w),
        };
    }
    m.to_scattering(net.z0)
}

/// `T(f)` with the ladder between a `Z_0` source and the load.
pub fn transmission_into_load(net: &LadderNetwork, load: &SampledResponse) -> Result<TransmissionProfile> {
    let values = load
        .frequencies()
        .iter()
        .zip(load.values())
        .map(|(&f, &s)| two_port_scattering(net, f).transmission_into(s, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransmissionProfile::new(load.frequencies().to_vec(), values, Strategy::Ladder))
}

/// Sampled two-port data, e.g. for Touchstone export.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortData {
    pub z0: f64,
    pub frequencies: Vec<f64>,
    pub parameters: Vec<TwoPort>,
}

pub fn export_touchstone(net: &LadderNetwork, grid: &[f64]) -> TwoPortData {
    TwoPortData {
        z0: net.z0,
        frequencies: grid.to_vec(),
        parameters: grid.iter().map(|&f| two_port_scattering(net, f)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderFitOptions {
    pub topology: Topology,
    pub restarts: usize,
    pub seed: u64,
    /// Number of band samples the objective is evaluated on.
    pub fit_points: usize,
    /// Simplex evaluation budget per element.
    pub evaluations_per_element: usize,
    /// Start an extra run from this lower-order network, padded with
    /// minimum-value stages at the load end.
    pub warm_start: Option<LadderNetwork>,
}

impl Default for LadderFitOptions {
    fn default() -> Self {
        Self {
            topology: Topology::default(),
            restarts: 16,
            seed: 0,
            fit_points: 101,
            evaluations_per_element: 2000,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderFitReport {
    /// Weighted mean squared error on the fit grid.
    pub objective: f64,
    pub rate: f64,
    pub target_rate: f64,
    pub rate_ratio: f64,
    /// Objective of each run, random restarts first, then the warm start.
    pub run_objectives: Vec<f64>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderFit {
    pub network: LadderNetwork,
    pub profile: TransmissionProfile,
    pub report: LadderFitReport,
}

fn thin(n: usize, points: usize) -> Vec<usize> {
    if points >= n || points < 2 {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..points)
        .map(|k| ((k as f64) * (n - 1) as f64 / (points - 1) as f64).round() as usize)
        .collect();
    idx.dedup();
    idx
}

struct Objective {
    freqs: Vec<f64>,
    loads: Vec<Complex64>,
    target: Vec<f64>,
    weights: Vec<f64>,
    topology: Topology,
    z0: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Objective {
    fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.lo).zip(&self.hi).map(|((v, l), h)| v.clamp(*l, *h)).collect()
    }

    fn network(&self, x: &[f64]) -> LadderNetwork {
        let v: Vec<f64> = self.clamp(x).into_iter().map(f64::exp).collect();
        LadderNetwork {
            inductances: v.iter().step_by(2).copied().collect(),
            capacitances: v.iter().skip(1).step_by(2).copied().collect(),
            topology: self.topology,
            z0: self.z0,
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        let net = self.network(x);
        let mut acc = 0.0;
        for (((&f, &s), &t), &w) in self.freqs.iter().zip(&self.loads).zip(&self.target).zip(&self.weights) {
            match two_port_scattering(&net, f).transmission_into(s, f) {
                Ok(v) => acc += w * (v - t) * (v - t),
                Err(_) => return f64::INFINITY,
            }
        }
        acc / self.freqs.len() as f64
    }
}

fn log_vector(net: &LadderNetwork) -> Vec<f64> {
    net.inductances.iter().zip(&net.capacitances).flat_map(|(l, c)| [l.ln(), c.ln()]).collect()
}

/// Fits element values so the ladder's transmission into `load` follows
/// `target`, minimizing `mean w (T_net - T_target)^2` with
/// `w = 1 + SNR / max SNR` over `fit_points` samples of the target grid.
///
/// Each restart runs an adaptive simplex in log-element space from the
/// `Z_0 / w0`, `1 / (w0 Z_0)` scale point plus a uniform perturbation of unit
/// variance; out-of-range values are clamped to the element bounds.
pub fn fit(
    target: &TransmissionProfile,
    load: &SampledResponse,
    snr: &SnrProfile,
    order: usize,
    z0: f64,
    opts: &LadderFitOptions,
) -> Result<LadderFit> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidInput(alloc::format!("ladder order {order} outside 1..={MAX_ORDER}")));
    }
    if target.frequencies != load.frequencies() || target.frequencies != snr.frequencies {
        return Err(Error::InvalidInput("target, load and SNR grids differ".into()));
    }
    let in_band: Vec<usize> = (0..target.frequencies.len())
        .filter(|&k| snr.band.contains(target.frequencies[k]))
        .collect();
    if in_band.len() < 2 {
        return Err(Error::InvalidInput("target grid has fewer than two in-band samples".into()));
    }
    let pick: Vec<usize> = thin(in_band.len(), opts.fit_points).into_iter().map(|i| in_band[i]).collect();
    let smax = snr.max();
    let obj = Objective {
        freqs: pick.iter().map(|&k| target.frequencies[k]).collect(),
        loads: pick.iter().map(|&k| load.values()[k]).collect(),
        target: pick.iter().map(|&k| target.values[k]).collect(),
        weights: pick
            .iter()
            .map(|&k| 1.0 + if smax > 0.0 { snr.values[k] / smax } else { 0.0 })
            .collect(),
        topology: opts.topology,
        z0,
        lo: (0..order).flat_map(|_| [INDUCTANCE_BOUNDS.0.ln(), CAPACITANCE_BOUNDS.0.ln()]).collect(),
        hi: (0..order).flat_map(|_| [INDUCTANCE_BOUNDS.1.ln(), CAPACITANCE_BOUNDS.1.ln()]).collect(),
    };

    let w0 = 2.0 * PI * snr.band.center();
    let center: Vec<f64> = (0..order).flat_map(|_| [(z0 / w0).ln(), (1.0 / (w0 * z0)).ln()]).collect();
    let simplex = SimplexOptions {
        max_evaluations: opts.evaluations_per_element * 2 * order,
        ..SimplexOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let half_width = 3f64.sqrt();

    let mut starts: Vec<Vec<f64>> = (0..opts.restarts)
        .map(|_| center.iter().map(|c| c + rng.random_range(-half_width..half_width)).collect())
        .collect();
    if let Some(warm) = &opts.warm_start {
        if warm.order() > order {
            return Err(Error::InvalidInput("warm start has higher order than the fit".into()));
        }
        let mut x = log_vector(warm);
        while x.len() < 2 * order {
            let k = x.len();
            x.push(obj.lo[k]);
        }
        starts.push(x);
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut runs = Vec::with_capacity(starts.len());
    let mut evaluations = 0;
    for x0 in &starts {
        let m = nelder_mead::minimize(|x| obj.value(x), x0, &simplex);
        evaluations += m.evaluations;
        runs.push(m.value);
        if m.value.is_finite() && best.as_ref().is_none_or(|(v, _)| m.value < *v) {
            best = Some((m.value, m.x));
        }
    }
    let (objective, x) = best.ok_or(Error::FitDiverged)?;
    let network = obj.network(&x);
    let profile = transmission_into_load(&network, load)?;
    let rate = optimizer::rate(&profile, snr)?;
    let target_rate = optimizer::rate(target, snr)?;
    Ok(LadderFit {
        network,
        profile,
        report: LadderFitReport {
            objective,
            rate,
            target_rate,
            rate_ratio: if target_rate > 0.0 { rate / target_rate } else { f64::NAN },
            run_objectives: runs,
            evaluations,
        },
    })
}

/// Fits orders `1..=max_order` in turn, warm-starting each from the
/// previous result so the best objective cannot grow with the order.
pub fn fit_orders(
    target: &TransmissionProfile,
    load: &SampledResponse,
    snr: &SnrProfile,
    max_order: usize,
    z0: f64,
    opts: &LadderFitOptions,
) -> Result<Vec<LadderFit>> {
    let mut out: Vec<LadderFit> = Vec::with_capacity(max_order);
    for order in 1..=max_order {
        let mut o = opts.clone();
        if let Some(prev) = out.last() {
            o.warm_start = Some(prev.network.clone());
        }
        out.push(fit(target, load, snr, order, z0, &o)?);
    }
    Ok(out)
}
