//! Circuit models for the transmitter: Chu antennas, the coupled two-element
//! array, the analog beamformer, the line-of-sight channel and the SNR
//! profiles derived from them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::linalg::{self, CMatrix, CVector};
use crate::rational::{RationalFunction, SampledResponse};
use crate::{quad, Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380_649e-23;

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Beamforming configuration of the transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One antenna, no beamformer.
    Single,
    /// Two antennas fed in phase.
    Even,
    /// Two antennas fed in antiphase.
    Odd,
}

impl Mode {
    pub fn ports(self) -> usize {
        match self {
            Mode::Single => 1,
            Mode::Even | Mode::Odd => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Single => "single",
            Mode::Even => "even",
            Mode::Odd => "odd",
        }
    }
}

/// Closed frequency interval in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub f_min: f64,
    pub f_max: f64,
}

impl Band {
    pub fn new(f_min: f64, f_max: f64) -> Result<Self> {
        if !(f_min > 0.0 && f_max > f_min && f_max.is_finite()) {
            return Err(Error::InvalidInput("band must satisfy 0 < f_min < f_max".into()));
        }
        Ok(Self { f_min, f_max })
    }

    /// Band of width `bandwidth` centered on `center`.
    pub fn centered(center: f64, bandwidth: f64) -> Result<Self> {
        Self::new(center - 0.5 * bandwidth, center + 0.5 * bandwidth)
    }

    pub fn width(&self) -> f64 {
        self.f_max - self.f_min
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.f_min + self.f_max)
    }

    pub fn contains(&self, f: f64) -> bool {
        f >= self.f_min && f <= self.f_max
    }

    /// `points` uniform samples including both edges.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        quad::linspace(self.f_min, self.f_max, points)
    }
}

/// Physical parameters of one link scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Radius of the sphere enclosing each antenna.
    pub radius_m: f64,
    /// Radiation resistance of the Chu equivalent circuit.
    pub resistance_ohm: f64,
    /// Reference impedance of source and receiver load.
    pub z0_ohm: f64,
    pub c_m_per_s: f64,
    pub f_c_hz: f64,
    pub band: Band,
    /// Power spectral density supplied by the source.
    pub e_s_w_per_hz: f64,
    pub n0_w_per_hz: f64,
    pub gain: f64,
    pub d_tx_rx_m: f64,
    /// Element spacing (array modes only).
    pub spacing_m: f64,
    /// Receiver angle from broadside (array modes only).
    pub theta_rad: f64,
    pub mode: Mode,
}

/// Total power used by the reference scenarios.
pub const REFERENCE_TOTAL_POWER_W: f64 = 0.25;

impl ScenarioConfig {
    fn reference(mode: Mode, radius_m: f64, bandwidth_hz: f64) -> Self {
        let f_c = 7e9;
        let lambda = SPEED_OF_LIGHT / f_c;
        Self {
            radius_m,
            resistance_ohm: 50.0,
            z0_ohm: 50.0,
            c_m_per_s: SPEED_OF_LIGHT,
            f_c_hz: f_c,
            band: Band {
                f_min: f_c - 0.5 * bandwidth_hz,
                f_max: f_c + 0.5 * bandwidth_hz,
            },
            e_s_w_per_hz: REFERENCE_TOTAL_POWER_W / bandwidth_hz,
            n0_w_per_hz: 4e-21,
            gain: 1.5,
            d_tx_rx_m: 500.0,
            spacing_m: 0.5 * lambda,
            theta_rad: if mode == Mode::Odd { 0.5 * PI } else { 0.0 },
            mode,
        }
    }

    /// Single Chu antenna of radius 4.29 mm at 7 GHz.
    pub fn single_chu(bandwidth_hz: f64) -> Self {
        Self::reference(Mode::Single, 4.29e-3, bandwidth_hz)
    }

    /// Two Chu antennas of radius lambda/15 spaced lambda/2; the receiver sits
    /// at broadside for the even mode and endfire for the odd mode.
    pub fn two_chu(mode: Mode, bandwidth_hz: f64) -> Self {
        let lambda = SPEED_OF_LIGHT / 7e9;
        Self::reference(mode, lambda / 15.0, bandwidth_hz)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radius", self.radius_m),
            ("resistance", self.resistance_ohm),
            ("reference impedance", self.z0_ohm),
            ("speed of light", self.c_m_per_s),
            ("center frequency", self.f_c_hz),
            ("noise density", self.n0_w_per_hz),
            ("antenna gain", self.gain),
            ("link distance", self.d_tx_rx_m),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(alloc::format!("{name} must be positive")));
            }
        }
        if !(self.e_s_w_per_hz >= 0.0 && self.e_s_w_per_hz.is_finite()) {
            return Err(Error::InvalidInput("supplied power density must be nonnegative".into()));
        }
        Band::new(self.band.f_min, self.band.f_max)?;
        if self.mode != Mode::Single && !(self.spacing_m > 0.0 && self.spacing_m.is_finite()) {
            return Err(Error::InvalidInput("element spacing must be positive".into()));
        }
        Ok(())
    }

    /// `a / c`, the Chu time constant.
    pub fn tau(&self) -> f64 {
        self.radius_m / self.c_m_per_s
    }

    pub fn wavelength(&self) -> f64 {
        self.c_m_per_s / self.f_c_hz
    }

    /// Copy recentered on `f_c` with the given bandwidth and
    /// `E_s = total_power / bandwidth`.
    pub fn with_bandwidth(&self, bandwidth_hz: f64, total_power_w: f64) -> Result<Self> {
        let mut out = self.clone();
        out.band = Band::centered(self.f_c_hz, bandwidth_hz)?;
        out.e_s_w_per_hz = total_power_w / bandwidth_hz;
        Ok(out)
    }
}

/// Noise density from the Boltzmann constant and a temperature.
pub fn noise_density(k_b: f64, temperature_k: f64) -> f64 {
    k_b * temperature_k
}

/// Chu antenna impedance: series capacitor `a/(cR)` followed by an inductor
/// `aR/c` in parallel with `R`.
pub fn chu_impedance(cfg: &ScenarioConfig, f: f64) -> Result<Complex64> {
    if !(f > 0.0) {
        return Err(Error::Singularity(Complex64::new(0.0, 0.0)));
    }
    let x = J * (2.0 * PI * f * cfg.tau());
    let r = cfg.resistance_ohm;
    Ok(r / x + r / (1.0 + x.inv()))
}

/// `S_T(s) = 1 / (2 s^2 tau^2 + 2 s tau + 1)` for a Chu antenna referenced
/// to its own radiation resistance.
pub fn chu_scattering_rational(cfg: &ScenarioConfig) -> RationalFunction {
    let t = cfg.tau();
    // The poles are -1/tau * (1 +- j) / 2 in closed form.
    let p = Complex64::new(-0.5 / t, 0.5 / t);
    RationalFunction::new(alloc::vec::Vec::new(), alloc::vec![p, p.conj()], 0.5 / (t * t))
        .expect("closed-form Chu model is well formed")
}

/// Mutual impedance between two Chu antennas spaced `cfg.spacing_m` apart.
pub fn mutual_impedance(cfg: &ScenarioConfig, f: f64) -> Result<Complex64> {
    let z11 = chu_impedance(cfg, f)?;
    let kd = 2.0 * PI * f * cfg.spacing_m / cfg.c_m_per_s;
    let bracket = (J * kd).inv() - 1.0 / (kd * kd) + J / (kd * kd * kd);
    Ok(-1.5 * z11.re * bracket * (-J * kd).exp())
}

/// `S = (Z + R I)^-1 (Z - R I)`.
pub fn z_to_s(z: &CMatrix, r_ref: f64) -> Result<CMatrix> {
    let eye = linalg::identity(z.nrows()) * Complex64::new(r_ref, 0.0);
    Ok(linalg::inverse(&(z + &eye))? * (z - &eye))
}

/// `Z = R (I + S)(I - S)^-1`, the inverse of [`z_to_s`].
pub fn s_to_z(s: &CMatrix, r_ref: f64) -> Result<CMatrix> {
    let eye = linalg::identity(s.nrows());
    Ok((&eye + s) * linalg::inverse(&(&eye - s))? * Complex64::new(r_ref, 0.0))
}

/// Scalar version of [`z_to_s`].
pub fn reflection(z: Complex64, r_ref: f64) -> Complex64 {
    (z - r_ref) / (z + r_ref)
}

/// Impedance matrix of the transmitter at `f`: 1x1 for a single antenna,
/// 2x2 with mutual coupling for the array modes.
pub fn antenna_impedance(cfg: &ScenarioConfig, f: f64) -> Result<CMatrix> {
    let z11 = chu_impedance(cfg, f)?;
    Ok(match cfg.mode {
        Mode::Single => CMatrix::from_element(1, 1, z11),
        Mode::Even | Mode::Odd => {
            let z12 = mutual_impedance(cfg, f)?;
            CMatrix::from_row_slice(2, 2, &[z11, z12, z12, z11])
        }
    })
}

/// Per-frequency scattering matrices of an N-port.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiportScattering {
    pub frequencies: Vec<f64>,
    pub matrices: Vec<CMatrix>,
}

impl MultiportScattering {
    pub fn ports(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.nrows())
    }
}

/// Transmitter scattering matrices over `grid`, referenced to the radiation
/// resistance.
pub fn array_scattering(cfg: &ScenarioConfig, grid: &[f64]) -> Result<MultiportScattering> {
    let matrices = grid
        .iter()
        .map(|&f| z_to_s(&antenna_impedance(cfg, f)?, cfg.resistance_ohm))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiportScattering { frequencies: grid.to_vec(), matrices })
}

/// Frequency-flat analog beamformer with one RF port and N antenna ports.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    /// Transfer from the RF port to the antenna ports (`s_F,21`); reciprocity
    /// gives `s_F,12 = s_F,21^T`.
    pub s21: CVector,
    pub s11: Complex64,
    pub s22: CMatrix,
}

impl Beamformer {
    /// Pass-through for a single antenna.
    pub fn single() -> Self {
        Self {
            s21: CVector::from_element(1, Complex64::new(1.0, 0.0)),
            s11: Complex64::new(0.0, 0.0),
            s22: CMatrix::zeros(1, 1),
        }
    }

    fn two(sign: f64) -> Self {
        let k = -J / 2f64.sqrt();
        Self {
            s21: CVector::from_row_slice(&[k, k * sign]),
            s11: Complex64::new(0.0, 0.0),
            s22: CMatrix::zeros(2, 2),
        }
    }

    pub fn even() -> Self {
        Self::two(1.0)
    }

    pub fn odd() -> Self {
        Self::two(-1.0)
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Single => Self::single(),
            Mode::Even => Self::even(),
            Mode::Odd => Self::odd(),
        }
    }

    /// `(I - S_F,22 S_T)^-1 s_F,21`, the wave vector launched into the
    /// antennas per unit incident wave at the RF port.
    fn launched(&self, s_t: &CMatrix) -> Result<CVector> {
        let n = s_t.nrows();
        let m = linalg::identity(n) - &self.s22 * s_t;
        Ok(linalg::inverse(&m)? * &self.s21)
    }
}

/// `S_eq = S_F,11 + s_F,12^T S_T (I - S_F,22 S_T)^-1 s_F,21` per frequency.
pub fn equivalent_load(s_t: &MultiportScattering, bf: &Beamformer) -> Result<SampledResponse> {
    let values = s_t
        .matrices
        .iter()
        .map(|m| {
            let v = bf.launched(m)?;
            Ok(bf.s11 + (bf.s21.transpose() * m * v)[(0, 0)])
        })
        .collect::<Result<Vec<_>>>()?;
    SampledResponse::new(s_t.frequencies.clone(), values)
}

/// Per-frequency transmitter-to-receiver transfer vectors `s_RT(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelResponse {
    pub frequencies: Vec<f64>,
    pub vectors: Vec<CVector>,
}

/// Line-of-sight channel from each antenna port to a matched Chu receiver,
/// including the `(I - S_T)` coupling factor and the steering phase
/// `exp(j 2 pi f d sin(theta) / c)` of the second element.
pub fn channel_response(cfg: &ScenarioConfig, s_t: &MultiportScattering) -> Result<ChannelResponse> {
    let vectors = s_t
        .frequencies
        .iter()
        .zip(&s_t.matrices)
        .map(|(&f, m)| {
            let z = chu_impedance(cfg, f)?;
            let n = m.nrows();
            let steer = CVector::from_fn(n, |k, _| {
                (J * (2.0 * PI * f * cfg.spacing_m / cfg.c_m_per_s * cfg.theta_rad.sin() * k as f64)).exp()
            });
            let scale = cfg.c_m_per_s * cfg.gain * z.re
                / (2.0 * PI * f * cfg.d_tx_rx_m * (cfg.z0_ohm + z));
            Ok((linalg::identity(n) - m) * steer * scale)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelResponse { frequencies: s_t.frequencies.clone(), vectors })
}

/// Sampled SNR over a grid; exactly zero outside `band`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrProfile {
    pub frequencies: Vec<f64>,
    pub values: Vec<f64>,
    pub band: Band,
}

impl SnrProfile {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// `s_RT^T (I - S_F,22 S_T)^-1 s_F,21` per frequency.
fn beam_gains(s_t: &MultiportScattering, bf: &Beamformer, ch: &ChannelResponse) -> Result<Vec<Complex64>> {
    s_t.matrices
        .iter()
        .zip(&ch.vectors)
        .map(|(m, h)| Ok((h.transpose() * bf.launched(m)?)[(0, 0)]))
        .collect()
}

fn snr_profile(
    cfg: &ScenarioConfig,
    s_t: &MultiportScattering,
    bf: &Beamformer,
    ch: &ChannelResponse,
    matched: bool,
) -> Result<SnrProfile> {
    let load = equivalent_load(s_t, bf)?;
    let gains = beam_gains(s_t, bf, ch)?;
    let ratio = cfg.e_s_w_per_hz / cfg.n0_w_per_hz;
    let mut values = Vec::with_capacity(gains.len());
    for ((&f, g), s) in s_t.frequencies.iter().zip(&gains).zip(load.values()) {
        if !cfg.band.contains(f) {
            values.push(0.0);
            continue;
        }
        let loss = 1.0 - s.norm_sqr();
        let mut v = g.norm_sqr() * ratio;
        if matched {
            if !(loss > 0.0) {
                return Err(Error::LosslessLoad(f));
            }
            v /= loss;
        }
        values.push(v);
    }
    Ok(SnrProfile { frequencies: s_t.frequencies.clone(), values, band: cfg.band })
}

/// SNR with an ideal lossless matching network that delivers all available
/// power: `|s_RT^T (I - S_F,22 S_T)^-1 s_F,21|^2 / (1 - |S_eq|^2) E_s / N_0`.
pub fn snr_ideal(
    cfg: &ScenarioConfig,
    s_t: &MultiportScattering,
    bf: &Beamformer,
    ch: &ChannelResponse,
) -> Result<SnrProfile> {
    snr_profile(cfg, s_t, bf, ch, true)
}

/// SNR with the source connected directly to the beamformer.
pub fn snr_no_match(
    cfg: &ScenarioConfig,
    s_t: &MultiportScattering,
    bf: &Beamformer,
    ch: &ChannelResponse,
) -> Result<SnrProfile> {
    snr_profile(cfg, s_t, bf, ch, false)
}

/// Scattering matrix of a two-port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPort {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
}

impl TwoPort {
    /// Ideal through connection.
    pub fn through() -> Self {
        let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self { s11: z, s12: o, s21: o, s22: z }
    }

    /// Fraction of available source power delivered into a load with
    /// reflection `s_eq` through this network.
    pub fn transmission_into(&self, s_eq: Complex64, f: f64) -> Result<f64> {
        let den = 1.0 - self.s22 * s_eq;
        if den.norm() < 1e-12 {
            return Err(Error::Resonance(f));
        }
        Ok(self.s21.norm_sqr() * (1.0 - s_eq.norm_sqr()) / den.norm_sqr())
    }
}

/// Equivalent SISO channel through a matching network `S_M`:
/// `s_RT^T (I - S_F,22 S_T)^-1 s_F,21 * S_M,21 / (1 - S_M,22 S_eq)`.
pub fn equivalent_channel(
    s_m: &[TwoPort],
    s_eq: &SampledResponse,
    ch: &ChannelResponse,
    s_t: &MultiportScattering,
    bf: &Beamformer,
) -> Result<Vec<Complex64>> {
    if s_m.len() != s_eq.len() || s_eq.len() != ch.vectors.len() {
        return Err(Error::InvalidInput("grid length mismatch".into()));
    }
    let gains = beam_gains(s_t, bf, ch)?;
    s_m.iter()
        .zip(s_eq.values())
        .zip(gains)
        .zip(s_eq.frequencies())
        .map(|(((m, &s), g), &f)| {
            let den = 1.0 - m.s22 * s;
            if den.norm() < 1e-12 {
                return Err(Error::Resonance(f));
            }
            Ok(g * m.s21 / den)
        })
        .collect()
}
