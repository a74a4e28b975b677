//! TOML scenario files: physical parameters, run options, sweep list and
//! output directory. Every key carries its unit in the name and unknown keys
//! are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use widematch_core::ladder::{LadderFitOptions, Topology};
use widematch_core::network::{Band, Mode, ScenarioConfig, BOLTZMANN, REFERENCE_TOTAL_POWER_W};
use widematch_core::optimizer::Strategy;
use widematch_core::pipeline::RunOptions;

use crate::{Error, Result};

/// Bandwidths swept when a scenario gives no list: 0.7 to 4.2 GHz.
pub const DEFAULT_SWEEP_HZ: [f64; 6] = [0.7e9, 1.4e9, 2.1e9, 2.8e9, 3.5e9, 4.2e9];

/// Help text listing every key and its default.
pub const SCHEMA_HELP: &str = "\
Scenario file keys (TOML). Unlisted keys are errors.

  name = \"...\"                  bundle name (default: file stem)

  [scenario]
  mode = \"single\"               single | even | odd
  radius_m                      antenna sphere radius (4.29e-3 single, lambda_c/15 array)
  resistance_ohm = 50           Chu radiation resistance; must equal z0_ohm
  z0_ohm = 50                   source, receiver and network reference
  c_m_per_s = 299792458
  f_c_hz = 7e9
  bandwidth_hz = 4.2e9          band centered on f_c_hz ...
  f_min_hz, f_max_hz            ... or explicit edges (not both)
  total_power_w = 0.25          E_s = total_power_w / bandwidth ...
  e_s_w_per_hz                  ... or the density itself (not both)
  n0_w_per_hz = 4e-21           noise density ...
  k_b_j_per_k, temperature_k    ... or the pair, N_0 = k_B T (k_B defaults to 1.380649e-23)
  gain = 1.5
  d_tx_rx_m = 500
  spacing_m                     element spacing (default lambda_c/2)
  theta_rad                     receiver angle (0 even, pi/2 odd)

  [load]
  touchstone = \"load.s1p\"       measured one-port, relative to the scenario file;
                                used by `constraints` in place of the antenna model

  [run]
  grid_points = 2001
  tol = 1e-6
  strategies = [all]            ideal, optimal, frequency-flat, conjugate-match, ladder, no-match
  ladder_order = 4
  ladder_topology = \"shunt-first\" shunt-first | series-first
  ladder_restarts = 16
  seed = 0

  [sweep]
  bandwidths_hz = [0.7e9, 1.4e9, 2.1e9, 2.8e9, 3.5e9, 4.2e9]

  [output]
  dir = \"out/<name>\"
";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    Single,
    Even,
    Odd,
}

impl From<ModeName> for Mode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Single => Mode::Single,
            ModeName::Even => Mode::Even,
            ModeName::Odd => Mode::Odd,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSection {
    #[serde(default)]
    pub mode: ModeName,
    pub radius_m: Option<f64>,
    pub resistance_ohm: Option<f64>,
    pub z0_ohm: Option<f64>,
    pub c_m_per_s: Option<f64>,
    pub f_c_hz: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub f_min_hz: Option<f64>,
    pub f_max_hz: Option<f64>,
    pub total_power_w: Option<f64>,
    pub e_s_w_per_hz: Option<f64>,
    pub n0_w_per_hz: Option<f64>,
    pub k_b_j_per_k: Option<f64>,
    pub temperature_k: Option<f64>,
    pub gain: Option<f64>,
    pub d_tx_rx_m: Option<f64>,
    pub spacing_m: Option<f64>,
    pub theta_rad: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSection {
    pub touchstone: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub grid_points: Option<usize>,
    pub tol: Option<f64>,
    pub strategies: Option<Vec<String>>,
    pub ladder_order: Option<usize>,
    pub ladder_topology: Option<String>,
    pub ladder_restarts: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub bandwidths_hz: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    #[serde(default)]
    pub scenario: PhysicalSection,
    #[serde(default)]
    pub load: LoadSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
    /// Directory relative paths inside the file resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Scenario(msg.into())
}

fn exclusive(a: Option<f64>, b: Option<f64>, names: &str) -> Result<()> {
    if a.is_some() && b.is_some() {
        return Err(invalid(format!("give only one of {names}")));
    }
    Ok(())
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut file = Self::parse(&text).map_err(|e| e.in_file(path))?;
        file.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        if file.name.is_none() {
            file.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(file)
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("scenario")
    }

    /// Physical configuration with every default filled in.
    pub fn config(&self) -> Result<ScenarioConfig> {
        let p = &self.scenario;
        let mode = Mode::from(p.mode);
        exclusive(p.bandwidth_hz, p.f_min_hz.or(p.f_max_hz), "bandwidth_hz and f_min_hz/f_max_hz")?;
        exclusive(p.total_power_w, p.e_s_w_per_hz, "total_power_w and e_s_w_per_hz")?;
        exclusive(p.n0_w_per_hz, p.temperature_k.or(p.k_b_j_per_k), "n0_w_per_hz and k_b_j_per_k/temperature_k")?;

        let mut cfg = match mode {
            Mode::Single => ScenarioConfig::single_chu(4.2e9),
            m => ScenarioConfig::two_chu(m, 4.2e9),
        };
        cfg.c_m_per_s = p.c_m_per_s.unwrap_or(cfg.c_m_per_s);
        cfg.f_c_hz = p.f_c_hz.unwrap_or(cfg.f_c_hz);
        let lambda = cfg.wavelength();
        cfg.radius_m = p.radius_m.unwrap_or(if mode == Mode::Single { cfg.radius_m } else { lambda / 15.0 });
        cfg.spacing_m = p.spacing_m.unwrap_or(0.5 * lambda);
        cfg.resistance_ohm = p.resistance_ohm.unwrap_or(cfg.resistance_ohm);
        cfg.z0_ohm = p.z0_ohm.unwrap_or(cfg.z0_ohm);
        cfg.gain = p.gain.unwrap_or(cfg.gain);
        cfg.d_tx_rx_m = p.d_tx_rx_m.unwrap_or(cfg.d_tx_rx_m);
        cfg.theta_rad = p.theta_rad.unwrap_or(cfg.theta_rad);

        cfg.band = match (p.f_min_hz, p.f_max_hz) {
            (Some(lo), Some(hi)) => Band::new(lo, hi).map_err(|e| invalid(e.to_string()))?,
            (None, None) => Band::centered(cfg.f_c_hz, p.bandwidth_hz.unwrap_or(4.2e9)).map_err(|e| invalid(e.to_string()))?,
            _ => return Err(invalid("f_min_hz and f_max_hz go together")),
        };
        cfg.e_s_w_per_hz = match p.e_s_w_per_hz {
            Some(e) => e,
            None => p.total_power_w.unwrap_or(REFERENCE_TOTAL_POWER_W) / p.bandwidth_hz.unwrap_or(cfg.band.width()),
        };
        cfg.n0_w_per_hz = match (p.n0_w_per_hz, p.temperature_k) {
            (Some(n0), _) => n0,
            (None, Some(t)) => p.k_b_j_per_k.unwrap_or(BOLTZMANN) * t,
            (None, None) if p.k_b_j_per_k.is_some() => return Err(invalid("k_b_j_per_k needs temperature_k")),
            (None, None) => cfg.n0_w_per_hz,
        };
        cfg.mode = mode;
        cfg.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(cfg)
    }

    pub fn strategies(&self) -> Result<Vec<Strategy>> {
        match &self.run.strategies {
            None => Ok(Strategy::ALL.to_vec()),
            Some(list) => list
                .iter()
                .map(|s| s.parse::<Strategy>().map_err(|_| invalid(format!("unknown strategy {s:?}"))))
                .collect(),
        }
    }

    pub fn run_options(&self) -> Result<RunOptions> {
        let r = &self.run;
        let d = RunOptions::default();
        let topology = match &r.ladder_topology {
            Some(t) => t.parse::<Topology>().map_err(|_| invalid(format!("unknown ladder topology {t:?}")))?,
            None => Topology::default(),
        };
        Ok(RunOptions {
            grid_points: r.grid_points.unwrap_or(d.grid_points),
            tol: r.tol.unwrap_or(d.tol),
            strategies: self.strategies()?,
            ladder_order: r.ladder_order.unwrap_or(d.ladder_order),
            ladder: LadderFitOptions {
                topology,
                restarts: r.ladder_restarts.unwrap_or(d.ladder.restarts),
                seed: r.seed.unwrap_or(d.ladder.seed),
                ..d.ladder
            },
            load_fit: d.load_fit,
        })
    }

    pub fn sweep_bandwidths(&self) -> Vec<f64> {
        self.sweep.bandwidths_hz.clone().unwrap_or_else(|| DEFAULT_SWEEP_HZ.to_vec())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.dir.clone().unwrap_or_else(|| Path::new("out").join(self.name()))
    }

    pub fn touchstone_path(&self) -> Option<PathBuf> {
        self.load.touchstone.as_ref().map(|p| self.base_dir.join(p))
    }
}
