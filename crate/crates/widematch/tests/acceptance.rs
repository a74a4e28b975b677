//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always print; exits nonzero on any failure.

use std::f64::consts::{LN_2, PI};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use widematch::scenario::ScenarioFile;
use widematch_core::bodefano::{derive_constraints, feasibility_check, BodeFanoConstraint};
use widematch_core::ladder::{fit_orders, LadderFitOptions};
use widematch_core::network::{
    array_scattering, channel_response, chu_scattering_rational, snr_ideal, Beamformer, Mode, ScenarioConfig,
    SnrProfile, REFERENCE_TOTAL_POWER_W,
};
use widematch_core::optimizer::{frequency_flat, frequency_flat_level, solve, Strategy};
use widematch_core::pipeline::{analyze, bandwidth_sweep, load_model, Analysis, RunOptions};

type Outcome = Result<String, String>;

const PRESETS: [&str; 3] = ["single_chu_4g2.toml", "two_chu_even.toml", "two_chu_odd.toml"];
const SWEEP_HZ: [f64; 6] = [0.7e9, 1.4e9, 2.1e9, 2.8e9, 3.5e9, 4.2e9];

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit_s, format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

struct Preset {
    name: &'static str,
    config: ScenarioConfig,
    options: RunOptions,
    analysis: Analysis,
}

fn load_presets(grid_points: usize) -> Result<Vec<Preset>, String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    PRESETS
        .iter()
        .map(|name| {
            let f = ScenarioFile::load(&dir.join(name)).map_err(|e| e.to_string())?;
            let config = f.config().map_err(|e| e.to_string())?;
            let mut options = f.run_options().map_err(|e| e.to_string())?;
            options.grid_points = grid_points;
            let analysis = analyze(&config, &options).map_err(|e| format!("{name}: {e}"))?;
            Ok(Preset { name, config, options, analysis })
        })
        .collect()
}

fn snr_on(cfg: &ScenarioConfig, points: usize) -> Result<SnrProfile, String> {
    let grid = cfg.band.grid(points);
    let st = array_scattering(cfg, &grid).map_err(|e| e.to_string())?;
    let ch = channel_response(cfg, &st).map_err(|e| e.to_string())?;
    snr_ideal(cfg, &st, &Beamformer::for_mode(cfg.mode), &ch).map_err(|e| e.to_string())
}

fn constraints_for(cfg: &ScenarioConfig) -> Result<Vec<BodeFanoConstraint>, String> {
    let model = load_model(cfg, &RunOptions::default().load_fit).map_err(|e| e.to_string())?;
    derive_constraints(model.function()).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = ScenarioConfig::single_chu(4.2e9);
    let cons = derive_constraints(&chu_scattering_rational(&cfg)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(cons.len() == 2, format!("{} constraints", cons.len()))?;
    let a_c = cfg.radius_m / cfg.c_m_per_s;
    let bounds = [2.0 * a_c, 4.0 * a_c.powi(3) / 3.0];
    let weights = [|f: f64| 1.0 / (2.0 * PI * PI * f * f), |f: f64| 1.0 / (8.0 * PI.powi(4) * f.powi(4))];
    let mut worst = 0.0f64;
    for (i, c) in cons.iter().enumerate() {
        worst = worst.max(rel(c.bound, bounds[i]));
        for f in [1e8, 4.9e9, 7e9, 9.1e9, 3e10] {
            worst = worst.max(rel(c.weight.eval(f), weights[i](f)));
        }
    }
    check(worst <= 1e-9, format!("max relative error {worst:.2e}"))?;
    within(elapsed, 1.0)?;
    Ok(format!("2 constraints, max relative error {worst:.1e}, {:.3} s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let single = chu_scattering_rational(&ScenarioConfig::single_chu(4.2e9)).reflection_equation_roots().map_err(|e| e.to_string())?;
    let origin: Vec<usize> = single.roots.iter().filter(|r| r.root.norm() == 0.0).map(|r| r.multiplicity).collect();
    check(origin == vec![4], format!("origin multiplicities {origin:?}"))?;
    let mut counts = Vec::new();
    for mode in [Mode::Even, Mode::Odd] {
        let cfg = ScenarioConfig::two_chu(mode, 4.2e9);
        let model = load_model(&cfg, &RunOptions::default().load_fit).map_err(|e| e.to_string())?;
        let roots = model.function().reflection_equation_roots().map_err(|e| e.to_string())?;
        // One representative per {s, -s, conj s, -conj s} orbit.
        let rhp = roots.roots.iter().filter(|r| r.root.re > 1e-6 * r.root.norm() && r.root.im >= 0.0).count();
        counts.push(rhp);
    }
    let elapsed = start.elapsed();
    check(counts == vec![2, 2], format!("right-half-plane representatives even/odd {counts:?}"))?;
    within(elapsed, 5.0)?;
    Ok(format!("single: s^4 at origin; even/odd: {counts:?} RHP roots; {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_3() -> Outcome {
    let cfg = ScenarioConfig::single_chu(4.2e9);
    let cons = derive_constraints(&chu_scattering_rational(&cfg)).map_err(|e| e.to_string())?;
    let t_ff = frequency_flat_level(&cons, cfg.band);
    check((t_ff - 0.719).abs() <= 0.005, format!("T_ff = {t_ff:.4}"))?;
    let profile = frequency_flat(&cons, cfg.band, &cfg.band.grid(2001));
    let rep = feasibility_check(&cons, &profile, 1e-6);
    let slack = rep.slack[1] / cons[1].bound;
    check(slack.abs() <= 1e-6, format!("f^-4 slack {slack:.2e} of bound"))?;
    Ok(format!("T_ff = {t_ff:.4}, f^-4 slack {slack:.1e} of bound"))
}

fn criterion_4(presets: &[Preset]) -> Outcome {
    let mut lines = Vec::new();
    for p in presets {
        let r = |s: Strategy| p.analysis.rate(s).ok_or(format!("{}: no {} rate", p.name, s.name()));
        let (nm, cm, ff, mx, id) = (
            r(Strategy::NoMatch)?,
            r(Strategy::ConjugateMatch)?,
            r(Strategy::FrequencyFlat)?,
            r(Strategy::Optimal)?,
            r(Strategy::Ideal)?,
        );
        check(nm < cm && ff < mx && mx < id, format!("{}: nm {nm:.4e} cm {cm:.4e} ff {ff:.4e} max {mx:.4e} ideal {id:.4e}", p.name))?;
        lines.push(format!("{} nm<cm {:.3}<{:.3}, ff<max<ideal {:.4}<{:.4}<{:.4}", p.name, nm / 1e9, cm / 1e9, ff / 1e9, mx / 1e9, id / 1e9));
    }
    // Pointwise gap above 6.1 GHz for the single antenna.
    let single = &presets[0].analysis;
    let (opt, flat) = (single.profile(Strategy::Optimal).unwrap(), single.profile(Strategy::FrequencyFlat).unwrap());
    let violations = opt
        .frequencies
        .iter()
        .zip(opt.values.iter().zip(&flat.values))
        .filter(|(f, (a, b))| **f > 6.1e9 && a <= b)
        .count();
    check(violations == 0, format!("T* <= T_ff at {violations} samples above 6.1 GHz"))?;
    Ok(format!("{}; T* > T_ff above 6.1 GHz (Gbit/s)", lines.join("; ")))
}

fn argmax(rows: &[(f64, f64)]) -> f64 {
    rows.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a }).0
}

fn sweep_rates(cfg: &ScenarioConfig, opts: &RunOptions, s: Strategy) -> Result<Vec<(f64, f64)>, String> {
    let o = RunOptions { strategies: vec![s], ..opts.clone() };
    let rows = bandwidth_sweep(cfg, &SWEEP_HZ, &o).map_err(|e| e.to_string())?;
    Ok(rows.iter().map(|r| (r.bandwidth_hz, r.rate_bps)).collect())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = ScenarioConfig::single_chu(4.2e9).with_bandwidth(4.2e9, REFERENCE_TOTAL_POWER_W).map_err(|e| e.to_string())?;
    let opt = sweep_rates(&cfg, &RunOptions::default(), Strategy::Optimal)?;
    let conj = sweep_rates(&cfg, &RunOptions::default(), Strategy::ConjugateMatch)?;
    let elapsed = start.elapsed();
    let (a, b) = (argmax(&opt), argmax(&conj));
    check(a == 2.8e9 && b == 2.1e9, format!("optimal argmax {a:e}, conjugate argmax {b:e}"))?;
    within(elapsed, 60.0)?;
    Ok(format!("optimal argmax 2.8 GHz, conjugate argmax 2.1 GHz, {:.1} s", elapsed.as_secs_f64()))
}

fn criterion_6(presets: &[Preset]) -> Outcome {
    let mut peaks = Vec::new();
    let mut at_max = Vec::new();
    for p in &presets[1..] {
        let rates = sweep_rates(&p.config, &p.options, Strategy::Ladder)?;
        peaks.push(argmax(&rates));
        at_max.push(rates.last().unwrap().1);
    }
    check(peaks == vec![1.4e9, 1.4e9], format!("ladder argmax even/odd {peaks:?}"))?;
    check(at_max[0] >= at_max[1], format!("at 4.2 GHz even {:.4e} < odd {:.4e}", at_max[0], at_max[1]))?;
    Ok(format!("ladder peaks at 1.4 GHz in both modes; at 4.2 GHz even {:.4e} >= odd {:.4e}", at_max[0], at_max[1]))
}

fn criterion_7() -> Outcome {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    for mode in [Mode::Single, Mode::Even, Mode::Odd] {
        let base = if mode == Mode::Single { ScenarioConfig::single_chu(4.2e9) } else { ScenarioConfig::two_chu(mode, 4.2e9) };
        let cons = constraints_for(&base)?;
        for b in SWEEP_HZ {
            let cfg = base.with_bandwidth(b, REFERENCE_TOTAL_POWER_W).map_err(|e| e.to_string())?;
            let snr = snr_on(&cfg, 2001)?;
            let r = solve(&snr, &cons, 1e-6).map_err(|e| e.to_string())?;
            let primal = r.slack.iter().zip(&cons).map(|(s, c)| -s / c.bound).fold(f64::NEG_INFINITY, f64::max);
            check(r.multipliers.iter().all(|m| *m >= 0.0), format!("{mode:?} {b:e}: negative multiplier"))?;
            check(r.profile.values.iter().all(|t| (0.0..=1.0).contains(t)), format!("{mode:?} {b:e}: T outside [0, 1]"))?;
            worst = (worst.0.max(r.stationarity_residual), worst.1.max(r.complementary_slackness), worst.2.max(primal));
            count += 1;
        }
    }
    check(worst.0 <= 1e-6, format!("stationarity residual {:.2e}", worst.0))?;
    check(worst.1 <= 1e-6, format!("complementary slackness {:.2e}", worst.1))?;
    check(worst.2 <= 1e-6, format!("primal violation {:.2e} of bound", worst.2))?;
    Ok(format!(
        "{count} scenario/bandwidth pairs: stationarity {:.1e}, compl. slackness {:.1e}, primal violation {:.1e}",
        worst.0, worst.1, worst.2
    ))
}

/// Euclidean projection onto `{u >= 0, a_i . u <= 1}` by Dykstra's
/// alternating projections.
fn project(v: &[f64], rows: &[Vec<f64>]) -> Vec<f64> {
    let n = v.len();
    let sets = rows.len() + 1;
    let mut x = v.to_vec();
    let mut corr = vec![vec![0.0; n]; sets];
    for _ in 0..5000 {
        let prev = x.clone();
        for k in 0..sets {
            let y: Vec<f64> = x.iter().zip(&corr[k]).map(|(a, b)| a + b).collect();
            let p: Vec<f64> = if k == 0 {
                y.iter().map(|v| v.max(0.0)).collect()
            } else {
                let a = &rows[k - 1];
                let excess = a.iter().zip(&y).map(|(ai, yi)| ai * yi).sum::<f64>() - 1.0;
                if excess <= 0.0 {
                    y.clone()
                } else {
                    let norm2: f64 = a.iter().map(|ai| ai * ai).sum();
                    y.iter().zip(a).map(|(yi, ai)| yi - excess / norm2 * ai).collect()
                }
            };
            corr[k] = y.iter().zip(&p).map(|(a, b)| a - b).collect();
            x = p;
        }
        let change = x.iter().zip(&prev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change <= 1e-13 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            break;
        }
    }
    x
}

/// Rate maximization in `u = ln(1 / r^2)` by projected gradient ascent with
/// trapezoid quadrature. Returns the rate in bit/s.
fn projected_gradient_rate(snr: &SnrProfile, cons: &[BodeFanoConstraint]) -> f64 {
    let f = &snr.frequencies;
    let n = f.len();
    let mut q = vec![0.0; n];
    for k in 0..n - 1 {
        let h = 0.5 * (f[k + 1] - f[k]);
        q[k] += h;
        q[k + 1] += h;
    }
    let s = &snr.values;
    let rows: Vec<Vec<f64>> = cons.iter().map(|c| (0..n).map(|k| q[k] * c.weight.eval(f[k]) / c.bound).collect()).collect();
    let objective = |u: &[f64]| (0..n).map(|k| q[k] * (1.0 + s[k] * (1.0 - (-u[k]).exp())).log2()).sum::<f64>();
    let gradient = |u: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|k| {
                let e = (-u[k]).exp();
                q[k] * s[k] * e / ((1.0 + s[k] * (1.0 - e)) * LN_2)
            })
            .collect()
    };
    let mut u = vec![0.0; n];
    let mut value = objective(&u);
    let mut step = 1.0 / q.iter().fold(0.0f64, |m, v| m.max(*v));
    for _ in 0..20_000 {
        let g = gradient(&u);
        let mut moved = false;
        for _ in 0..60 {
            let trial: Vec<f64> = u.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            let next = project(&trial, &rows);
            let d: Vec<f64> = next.iter().zip(&u).map(|(a, b)| a - b).collect();
            let lin: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
            let d2: f64 = d.iter().map(|v| v * v).sum();
            let v = objective(&next);
            if v >= value + lin - d2 / (2.0 * step) {
                moved = d2.sqrt() > 1e-12 * (1.0 + u.iter().fold(0.0f64, |m, x| m.max(x.abs())));
                u = next;
                value = v;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    value
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for mode in [Mode::Single, Mode::Even, Mode::Odd] {
        let cfg = if mode == Mode::Single { ScenarioConfig::single_chu(4.2e9) } else { ScenarioConfig::two_chu(mode, 4.2e9) };
        let cons = constraints_for(&cfg)?;
        let snr = snr_on(&cfg, 64)?;
        let solved = solve(&snr, &cons, 1e-6).map_err(|e| e.to_string())?.rate;
        let oracle = projected_gradient_rate(&snr, &cons);
        let d = rel(solved, oracle);
        check(d <= 0.01, format!("{mode:?}: solve {solved:.5e} vs oracle {oracle:.5e}"))?;
        parts.push(format!("{} {:.2e}", mode.name(), d));
    }
    let elapsed = start.elapsed();
    within(elapsed, 30.0)?;
    Ok(format!("relative gap to projected gradient: {}; {:.1} s", parts.join(", "), elapsed.as_secs_f64()))
}

fn criterion_9(presets: &[Preset]) -> Outcome {
    let mut fits = Vec::new();
    for p in presets {
        let l = p.analysis.ladder.as_ref().ok_or(format!("{}: no ladder", p.name))?;
        fits.push((p.name.to_string(), l.profile.clone(), &p.analysis.constraints));
    }
    let single = &presets[0].analysis;
    let opt = single.optimum.as_ref().ok_or("no optimum")?;
    let by_order = fit_orders(&opt.profile, &single.load, &single.snr, 5, single.config.z0_ohm, &LadderFitOptions::default())
        .map_err(|e| e.to_string())?;
    for f in &by_order {
        fits.push((format!("single order {}", f.network.order()), f.profile.clone(), &single.constraints));
    }
    let mut worst = f64::INFINITY;
    for (name, profile, cons) in &fits {
        let rep = feasibility_check(cons, profile, 1e-4);
        let m = rep.min_relative_slack(cons);
        worst = worst.min(m);
        check(m >= -1e-4, format!("{name}: slack {m:.2e} of bound"))?;
    }
    let ratio = single.rate(Strategy::Ladder).unwrap() / single.rate(Strategy::Optimal).unwrap();
    check(ratio >= 0.85, format!("order-4 rate ratio {ratio:.4}"))?;
    Ok(format!("{} ladders, min relative slack {worst:.2e}; order 4 reaches {:.1}% of R_max", fits.len(), 100.0 * ratio))
}

fn criterion_10(coarse: &[Preset], fine: &[Preset]) -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut note = |d: f64, what: String| {
        if d > worst.0 {
            worst = (d, what);
        }
    };
    for (a, b) in coarse.iter().zip(fine) {
        for ((s, ra), (_, rb)) in a.analysis.rates.iter().zip(&b.analysis.rates) {
            note(rel(*ra, *rb), format!("{} {} rate", a.name, s.name()));
        }
        for ((s, fa), (_, fb)) in a.analysis.feasibility.iter().zip(&b.analysis.feasibility) {
            for (i, (la, lb)) in fa.lhs.iter().zip(&fb.lhs).enumerate() {
                note(rel(*la, *lb), format!("{} {} constraint {i}", a.name, s.name()));
            }
        }
    }
    check(worst.0 < 1e-3, format!("{} changes by {:.2e}", worst.1, worst.0))?;
    Ok(format!("2001 -> 4001 points: largest change {:.1e} ({})", worst.0, worst.1))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    results.push((1, criterion_1()));
    results.push((2, criterion_2()));
    results.push((3, criterion_3()));
    match (load_presets(2001), load_presets(4001)) {
        (Ok(coarse), Ok(fine)) => {
            results.push((4, criterion_4(&coarse)));
            results.push((5, criterion_5()));
            results.push((6, criterion_6(&coarse)));
            results.push((7, criterion_7()));
            results.push((8, criterion_8()));
            results.push((9, criterion_9(&coarse)));
            results.push((10, criterion_10(&coarse, &fine)));
        }
        (Err(e), _) | (_, Err(e)) => {
            for n in [4, 6, 9, 10] {
                results.push((n, Err(format!("bundled scenarios failed: {e}"))));
            }
            results.push((5, criterion_5()));
            results.push((7, criterion_7()));
            results.push((8, criterion_8()));
            results.sort_by_key(|r| r.0);
        }
    }
    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {detail}");
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
