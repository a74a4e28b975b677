//! Runs a scenario and writes its result bundle: CSV tables, a JSON summary
//! and the fitted ladder as a Touchstone file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use widematch_core::bodefano::{derive_constraints, BodeFanoConstraint};
use widematch_core::ladder::{export_touchstone, Element, LadderFit};
use widematch_core::network::ScenarioConfig;
use widematch_core::optimizer::Strategy;
use widematch_core::pipeline::{analyze, bandwidth_sweep, load_model, Analysis, RunOptions, SweepRow};
use widematch_core::rational::fit_rational_auto;

use crate::scenario::ScenarioFile;
use crate::touchstone::{self, TouchstoneData};
use crate::{Error, Result};

pub const TRANSMISSION_CSV: &str = "transmission.csv";
pub const SNR_CSV: &str = "snr.csv";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const CONSTRAINTS_CSV: &str = "constraints.csv";
pub const FEASIBILITY_CSV: &str = "feasibility.csv";
pub const LADDER_CSV: &str = "ladder.csv";
pub const LADDER_S2P: &str = "ladder.s2p";
pub const SUMMARY_JSON: &str = "summary.json";

/// Command-line settings that take precedence over the scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub grid_points: Option<usize>,
    pub tol: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub ladder_order: Option<usize>,
}

/// A resolved scenario ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub file: ScenarioFile,
    pub config: ScenarioConfig,
    pub options: RunOptions,
    pub out_dir: PathBuf,
}

impl Job {
    pub fn new(file: ScenarioFile, ov: &Overrides) -> Result<Self> {
        let ctx = file.name().to_string();
        let config = file.config().map_err(|e| e.context(&ctx))?;
        let mut options = file.run_options().map_err(|e| e.context(&ctx))?;
        if let Some(n) = ov.grid_points {
            options.grid_points = n;
        }
        if let Some(t) = ov.tol {
            options.tol = t;
        }
        if let Some(s) = ov.seed {
            options.ladder.seed = s;
        }
        if let Some(o) = ov.ladder_order {
            options.ladder_order = o;
        }
        let out_dir = ov.out_dir.clone().unwrap_or_else(|| file.output_dir());
        Ok(Self { file, config, options, out_dir })
    }

    pub fn load(path: &Path, ov: &Overrides) -> Result<Self> {
        Self::new(ScenarioFile::load(path)?, ov)
    }

    fn ctx(&self, e: impl Into<Error>) -> Error {
        e.into().context(self.file.name())
    }

    fn prepare_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.out_dir).map_err(|e| Error::io(&self.out_dir, e))
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Constraints of the antenna model, or of the measured one-port when the
    /// scenario names one. Writes the constraint report.
    pub fn constraints(&self) -> Result<Vec<BodeFanoConstraint>> {
        let cons = match self.file.touchstone_path() {
            Some(p) => measured_constraints(&p, &self.config, &self.options).map_err(|e| self.ctx(e))?,
            None => {
                let model = load_model(&self.config, &self.options.load_fit).map_err(|e| self.ctx(e))?;
                derive_constraints(model.function()).map_err(|e| self.ctx(e))?
            }
        };
        self.prepare_dir()?;
        write_constraints(&self.path(CONSTRAINTS_CSV), &cons)?;
        Ok(cons)
    }

    /// Full analysis. An empty strategy list yields the constraint report
    /// and summary only.
    pub fn optimize(&self) -> Result<Analysis> {
        let a = analyze(&self.config, &self.options).map_err(|e| self.ctx(e))?;
        self.prepare_dir()?;
        write_constraints(&self.path(CONSTRAINTS_CSV), &a.constraints)?;
        if !a.profiles.is_empty() {
            write_spectra(&self.path(TRANSMISSION_CSV), &a, |_, t, _| t)?;
            write_spectra(&self.path(SNR_CSV), &a, |_, t, snr| t * snr)?;
            write_feasibility(&self.path(FEASIBILITY_CSV), &a)?;
        }
        if let Some(fit) = &a.ladder {
            self.write_ladder(fit, &a)?;
        }
        write_summary(&self.path(SUMMARY_JSON), self.file.name(), &self.options, &a)?;
        Ok(a)
    }

    /// Optimum plus ladder fit only.
    pub fn fit_ladder(&self) -> Result<Analysis> {
        let mut job = self.clone();
        job.options.strategies = vec![Strategy::Optimal, Strategy::Ladder];
        job.optimize()
    }

    pub fn sweep(&self) -> Result<Vec<SweepRow>> {
        let rows = bandwidth_sweep(&self.config, &self.file.sweep_bandwidths(), &self.options).map_err(|e| self.ctx(e))?;
        self.prepare_dir()?;
        let mut w = csv_writer(&self.path(SWEEP_CSV))?;
        write_row(&mut w, &self.path(SWEEP_CSV), &["bandwidth_hz", "strategy", "rate_bps"])?;
        for r in &rows {
            write_row(&mut w, &self.path(SWEEP_CSV), &[num(r.bandwidth_hz), r.strategy.name().into(), num(r.rate_bps)])?;
        }
        finish(w, &self.path(SWEEP_CSV))?;
        Ok(rows)
    }

    fn write_ladder(&self, fit: &LadderFit, a: &Analysis) -> Result<()> {
        let path = self.path(LADDER_CSV);
        let mut w = csv_writer(&path)?;
        write_row(&mut w, &path, &["position", "element", "value"])?;
        for (i, e) in fit.network.elements().iter().enumerate() {
            write_row(&mut w, &path, &[(i + 1).to_string(), element_name(e).into(), num(e.value())])?;
        }
        finish(w, &path)?;
        let grid = a.snr.frequencies.clone();
        TouchstoneData::from_two_port(&export_touchstone(&fit.network, &grid)).write(&self.path(LADDER_S2P))?;
        Ok(())
    }
}

fn measured_constraints(path: &Path, cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Vec<BodeFanoConstraint>> {
    let data = touchstone::read(path)?;
    let load = data.one_port().ok_or_else(|| Error::Data {
        path: path.display().to_string(),
        message: "measured load must be a one-port with positive, increasing frequencies".into(),
    })?;
    if data.resistance != cfg.z0_ohm {
        return Err(Error::Data {
            path: path.display().to_string(),
            message: format!("reference {} ohm differs from z0_ohm = {}", data.resistance, cfg.z0_ohm),
        });
    }
    let fit = fit_rational_auto(&load, opts.load_fit.max_order, &opts.load_fit.fit).map_err(|e| Error::from(e).in_file(path))?;
    Ok(derive_constraints(&fit.function)?)
}

pub fn element_name(e: &Element) -> &'static str {
    match e {
        Element::SeriesInductor(_) => "series-inductor",
        Element::SeriesCapacitor(_) => "series-capacitor",
        Element::ShuntInductor(_) => "shunt-inductor",
        Element::ShuntCapacitor(_) => "shunt-capacitor",
    }
}

/// Shortest decimal that reads back to the same `f64`.
fn num(v: f64) -> String {
    format!("{v:e}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::io(path, e))
}

fn write_row<I, T>(w: &mut csv::Writer<fs::File>, path: &Path, row: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(row).map_err(|e| Error::io(path, e))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_constraints(path: &Path, cons: &[BodeFanoConstraint]) -> Result<()> {
    let mut w = csv_writer(path)?;
    write_row(&mut w, path, &["index", "kind", "root_re_rad_s", "root_im_rad_s", "multiplicity", "bound"])?;
    for (i, c) in cons.iter().enumerate() {
        write_row(
            &mut w,
            path,
            &[i.to_string(), c.kind.label(), num(c.root.re), num(c.root.im), c.multiplicity.to_string(), num(c.bound)],
        )?;
    }
    finish(w, path)
}

/// Long-format `f_hz,strategy,value` table with `value = g(f, T, SNR)`.
fn write_spectra(path: &Path, a: &Analysis, g: impl Fn(f64, f64, f64) -> f64) -> Result<()> {
    let mut w = csv_writer(path)?;
    write_row(&mut w, path, &["f_hz", "strategy", "value"])?;
    for p in &a.profiles {
        for ((&f, &t), &s) in p.frequencies.iter().zip(&p.values).zip(&a.snr.values) {
            write_row(&mut w, path, &[num(f), p.strategy.name().into(), num(g(f, t, s))])?;
        }
    }
    finish(w, path)
}

fn write_feasibility(path: &Path, a: &Analysis) -> Result<()> {
    let mut w = csv_writer(path)?;
    write_row(&mut w, path, &["constraint", "strategy", "lhs", "bound", "slack"])?;
    for (s, rep) in &a.feasibility {
        for (i, c) in a.constraints.iter().enumerate() {
            write_row(&mut w, path, &[i.to_string(), s.name().into(), num(rep.lhs[i]), num(c.bound), num(rep.slack[i])])?;
        }
    }
    finish(w, path)
}

#[derive(Debug, Serialize)]
struct ConstraintSummary {
    kind: String,
    root_re_rad_s: f64,
    root_im_rad_s: f64,
    multiplicity: usize,
    bound: f64,
}

#[derive(Debug, Serialize)]
struct RateSummary {
    strategy: &'static str,
    rate_bps: f64,
    feasible: Option<bool>,
    min_relative_slack: Option<f64>,
}

#[derive(Debug, Serialize)]
struct OptimumSummary {
    multipliers: Vec<f64>,
    multiplier_units: Vec<f64>,
    lhs: Vec<f64>,
    slack: Vec<f64>,
    stationarity_residual: f64,
    complementary_slackness: f64,
    refined: bool,
}

#[derive(Debug, Serialize)]
struct LadderSummary {
    order: usize,
    topology: &'static str,
    inductances_h: Vec<f64>,
    capacitances_f: Vec<f64>,
    objective: f64,
    rate_ratio: f64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Summary {
    name: String,
    mode: &'static str,
    f_min_hz: f64,
    f_max_hz: f64,
    grid_points: usize,
    load_model_order: usize,
    r_ideal_bps: Option<f64>,
    r_max_bps: Option<f64>,
    rates: Vec<RateSummary>,
    constraints: Vec<ConstraintSummary>,
    optimum: Option<OptimumSummary>,
    ladder: Option<LadderSummary>,
    conjugate_elements: Option<Vec<(&'static str, f64)>>,
}

fn write_summary(path: &Path, name: &str, opts: &RunOptions, a: &Analysis) -> Result<()> {
    let feas = |s: Strategy| a.feasibility.iter().find(|(k, _)| *k == s).map(|(_, r)| r);
    let summary = Summary {
        name: name.into(),
        mode: a.config.mode.name(),
        f_min_hz: a.config.band.f_min,
        f_max_hz: a.config.band.f_max,
        grid_points: opts.grid_points,
        load_model_order: a.load_model.function().poles().len(),
        r_ideal_bps: a.rate(Strategy::Ideal),
        r_max_bps: a.optimum.as_ref().map(|o| o.rate),
        rates: a
            .rates
            .iter()
            .map(|&(s, r)| RateSummary {
                strategy: s.name(),
                rate_bps: r,
                feasible: feas(s).map(|f| f.feasible),
                min_relative_slack: feas(s).map(|f| f.min_relative_slack(&a.constraints)),
            })
            .collect(),
        constraints: a
            .constraints
            .iter()
            .map(|c| ConstraintSummary {
                kind: c.kind.label(),
                root_re_rad_s: c.root.re,
                root_im_rad_s: c.root.im,
                multiplicity: c.multiplicity,
                bound: c.bound,
            })
            .collect(),
        optimum: a.optimum.as_ref().map(|o| OptimumSummary {
            multipliers: o.multipliers.clone(),
            multiplier_units: o.multiplier_units.clone(),
            lhs: o.lhs.clone(),
            slack: o.slack.clone(),
            stationarity_residual: o.stationarity_residual,
            complementary_slackness: o.complementary_slackness,
            refined: o.refined,
        }),
        ladder: a.ladder.as_ref().map(|l| LadderSummary {
            order: l.network.order(),
            topology: l.network.topology().name(),
            inductances_h: l.network.inductances().to_vec(),
            capacitances_f: l.network.capacitances().to_vec(),
            objective: l.report.objective,
            rate_ratio: l.report.rate_ratio,
            seed: opts.ladder.seed,
        }),
        conjugate_elements: a
            .conjugate
            .as_ref()
            .map(|c| c.elements.iter().map(|e| (element_name(e), e.value())).collect()),
    };
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::io(path, e))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}
