//! End-to-end analysis of one scenario: load model, constraints, optimum,
//! benchmarks and ladder realization, plus bandwidth sweeps.

use alloc::vec::Vec;

use crate::bodefano::{derive_constraints, feasibility_check, BodeFanoConstraint, FeasibilityReport};
use crate::ladder::{self, LadderFit, LadderFitOptions};
use crate::network::{
    array_scattering, channel_response, chu_scattering_rational, equivalent_load, snr_ideal, snr_no_match,
    Beamformer, Mode, ScenarioConfig, SnrProfile, REFERENCE_TOTAL_POWER_W,
};
use crate::optimizer::{
    self, conjugate_match, frequency_flat, ideal_profile, no_match_profile, ConjugateMatch, OptimizationResult,
    Strategy, TransmissionProfile,
};
use crate::rational::{fit_rational_auto, FitOptions, RationalFit, RationalFunction, SampledResponse};
use crate::{quad, Error, Result};

/// How the array load is approximated by a rational function.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadFitOptions {
    /// Fit band as fractions of `f_c`.
    pub span: (f64, f64),
    pub points: usize,
    pub max_order: usize,
    pub fit: FitOptions,
}

impl Default for LoadFitOptions {
    fn default() -> Self {
        Self {
            span: (0.5, 1.5),
            points: 201,
            max_order: 8,
            fit: FitOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Uniform in-band grid size.
    pub grid_points: usize,
    /// Relative tolerance for the optimizer's constraint checks.
    pub tol: f64,
    pub strategies: Vec<Strategy>,
    pub ladder_order: usize,
    pub ladder: LadderFitOptions,
    pub load_fit: LoadFitOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            grid_points: 2001,
            tol: 1e-6,
            strategies: Strategy::ALL.to_vec(),
            ladder_order: 4,
            ladder: LadderFitOptions::default(),
            load_fit: LoadFitOptions::default(),
        }
    }
}

/// Rational model of the equivalent load.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadModel {
    /// Closed-form single-antenna model.
    Analytic(RationalFunction),
    /// Fitted to the sampled beamformed array load.
    Fitted(RationalFit),
}

impl LoadModel {
    pub fn function(&self) -> &RationalFunction {
        match self {
            LoadModel::Analytic(f) => f,
            LoadModel::Fitted(fit) => &fit.function,
        }
    }
}

/// Builds the load model. The fit band does not depend on the scenario
/// band, so one model serves a whole bandwidth sweep.
pub fn load_model(cfg: &ScenarioConfig, opts: &LoadFitOptions) -> Result<LoadModel> {
    cfg.validate()?;
    if cfg.mode == Mode::Single {
        return Ok(LoadModel::Analytic(chu_scattering_rational(cfg)));
    }
    let grid = quad::linspace(opts.span.0 * cfg.f_c_hz, opts.span.1 * cfg.f_c_hz, opts.points);
    let st = array_scattering(cfg, &grid)?;
    let seq = equivalent_load(&st, &Beamformer::for_mode(cfg.mode))?;
    fit_rational_auto(&seq, opts.max_order, &opts.fit).map(LoadModel::Fitted)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub config: ScenarioConfig,
    pub load_model: LoadModel,
    pub constraints: Vec<BodeFanoConstraint>,
    /// Sampled equivalent load on the analysis grid.
    pub load: SampledResponse,
    pub snr: SnrProfile,
    pub snr_no_match: SnrProfile,
    pub optimum: Option<OptimizationResult>,
    pub conjugate: Option<ConjugateMatch>,
    pub ladder: Option<LadderFit>,
    /// One profile per requested strategy, in request order.
    pub profiles: Vec<TransmissionProfile>,
    pub rates: Vec<(Strategy, f64)>,
    /// Feasibility of every profile except the ideal one.
    pub feasibility: Vec<(Strategy, FeasibilityReport)>,
}

impl Analysis {
    pub fn rate(&self, s: Strategy) -> Option<f64> {
        self.rates.iter().find(|(k, _)| *k == s).map(|(_, r)| *r)
    }

    pub fn profile(&self, s: Strategy) -> Option<&TransmissionProfile> {
        self.profiles.iter().find(|p| p.strategy == s)
    }
}

pub fn analyze(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Analysis> {
    let model = load_model(cfg, &opts.load_fit)?;
    analyze_with_model(cfg, model, opts)
}

/// Runs every requested strategy against a prebuilt load model.
pub fn analyze_with_model(cfg: &ScenarioConfig, model: LoadModel, opts: &RunOptions) -> Result<Analysis> {
    cfg.validate()?;
    if cfg.resistance_ohm != cfg.z0_ohm {
        return Err(Error::InvalidInput(
            "radiation resistance must equal the reference impedance".into(),
        ));
    }
    if opts.grid_points < 3 {
        return Err(Error::InvalidInput("grid needs at least 3 points".into()));
    }
    let constraints = derive_constraints(model.function())?;
    let grid = cfg.band.grid(opts.grid_points);
    let st = array_scattering(cfg, &grid)?;
    let bf = Beamformer::for_mode(cfg.mode);
    let ch = channel_response(cfg, &st)?;
    let snr = snr_ideal(cfg, &st, &bf, &ch)?;
    let snr_nm = snr_no_match(cfg, &st, &bf, &ch)?;
    let load = equivalent_load(&st, &bf)?;

    let wants = |s: Strategy| opts.strategies.contains(&s);
    let optimum = if wants(Strategy::Optimal) || wants(Strategy::Ladder) {
        Some(optimizer::solve(&snr, &constraints, opts.tol)?)
    } else {
        None
    };
    let conjugate = if wants(Strategy::ConjugateMatch) { Some(conjugate_match(cfg, &load)?) } else { None };
    let ladder = match (&optimum, wants(Strategy::Ladder)) {
        (Some(opt), true) => Some(ladder::fit(&opt.profile, &load, &snr, opts.ladder_order, cfg.z0_ohm, &opts.ladder)?),
        _ => None,
    };

    let mut profiles = Vec::with_capacity(opts.strategies.len());
    for &s in &opts.strategies {
        let p = match s {
            Strategy::Ideal => ideal_profile(cfg.band, &grid),
            Strategy::Optimal => optimum.as_ref().map(|o| o.profile.clone()).ok_or(Error::FitDiverged)?,
            Strategy::FrequencyFlat => frequency_flat(&constraints, cfg.band, &grid),
            Strategy::ConjugateMatch => conjugate.as_ref().map(|c| c.profile.clone()).ok_or(Error::FitDiverged)?,
            Strategy::Ladder => ladder.as_ref().map(|l| l.profile.clone()).ok_or(Error::FitDiverged)?,
            Strategy::NoMatch => no_match_profile(&load),
        };
        profiles.push(p);
    }
    let rates = profiles
        .iter()
        .map(|p| Ok((p.strategy, optimizer::rate(p, &snr)?)))
        .collect::<Result<Vec<_>>>()?;
    let feasibility = profiles
        .iter()
        .filter(|p| p.strategy != Strategy::Ideal)
        .map(|p| (p.strategy, feasibility_check(&constraints, p, opts.tol)))
        .collect();

    Ok(Analysis {
        config: cfg.clone(),
        load_model: model,
        constraints,
        load,
        snr,
        snr_no_match: snr_nm,
        optimum,
        conjugate,
        ladder,
        profiles,
        rates,
        feasibility,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub bandwidth_hz: f64,
    pub strategy: Strategy,
    pub rate_bps: f64,
}

/// Rates for each bandwidth centered on `f_c`, with the supplied power
/// density rescaled to keep `B E_s` at the reference total power.
pub fn bandwidth_sweep(template: &ScenarioConfig, bandwidths: &[f64], opts: &RunOptions) -> Result<Vec<SweepRow>> {
    if bandwidths.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
        return Err(Error::InvalidInput("bandwidths must be positive".into()));
    }
    let model = load_model(template, &opts.load_fit)?;
    let mut rows = Vec::with_capacity(bandwidths.len() * opts.strategies.len());
    for &b in bandwidths {
        let cfg = template.with_bandwidth(b, REFERENCE_TOTAL_POWER_W)?;
        let a = analyze_with_model(&cfg, model.clone(), opts)?;
        rows.extend(a.rates.iter().map(|&(strategy, rate_bps)| SweepRow { bandwidth_hz: b, strategy, rate_bps }));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RunOptions {
        RunOptions {
            grid_points: 401,
            strategies: alloc::vec![Strategy::Ideal, Strategy::Optimal, Strategy::NoMatch],
            ..RunOptions::default()
        }
    }

    #[test]
    fn single_chu_ordering() {
        let a = analyze(&ScenarioConfig::single_chu(4.2e9), &quick()).unwrap();
        let (i, o, n) = (
            a.rate(Strategy::Ideal).unwrap(),
            a.rate(Strategy::Optimal).unwrap(),
            a.rate(Strategy::NoMatch).unwrap(),
        );
        assert!(n < o && o < i, "{n} {o} {i}");
        assert_eq!(a.profiles.len(), 3);
        assert!(a.ladder.is_none() && a.conjugate.is_none());
    }

    #[test]
    fn mismatched_reference_rejected() {
        let mut cfg = ScenarioConfig::single_chu(1e9);
        cfg.z0_ohm = 75.0;
        assert!(matches!(analyze(&cfg, &quick()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn empty_strategy_list_gives_constraints_only() {
        let opts = RunOptions { strategies: Vec::new(), ..quick() };
        let a = analyze(&ScenarioConfig::single_chu(1e9), &opts).unwrap();
        assert_eq!(a.constraints.len(), 2);
        assert!(a.profiles.is_empty() && a.rates.is_empty() && a.optimum.is_none());
    }

    #[test]
    fn sweep_has_one_row_per_pair() {
        let rows = bandwidth_sweep(&ScenarioConfig::single_chu(1e9), &[0.7e9, 1.4e9], &quick()).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(bandwidth_sweep(&ScenarioConfig::single_chu(1e9), &[-1.0], &quick()).is_err());
    }
}
