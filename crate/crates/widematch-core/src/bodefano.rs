//! Bode-Fano integral constraints of a passive rational load.
//!
//! Every root of `S(-s)S(s) = 1` (one per `{s, -s, conj s}` orbit) yields an
//! inequality `int_0^inf xi(f) ln(1 / (1 - T(f))) df <= B` that any lossless
//! matching network feeding the load must satisfy. Natural logarithms are
//! used throughout.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::network::Band;
use crate::optimizer::TransmissionProfile;
use crate::rational::RationalFunction;
use crate::{quad, Error, Result};

/// Roots whose real part is below this fraction of their magnitude are taken
/// to lie on the imaginary axis.
const AXIS_TOL: f64 = 1e-6;
/// Representatives of the same orbit agree to this relative distance.
const ORBIT_TOL: f64 = 1e-6;

/// Weight function `xi(f)` of one constraint, `f` in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    /// `(1/4pi^2) [(f_i - f)^-2 + (f_i + f)^-2]`.
    ImaginaryAxis { f_i: f64 },
    /// `Re{(s_i - j2pi f)^-1 + (s_i + j2pi f)^-1}`.
    RightHalfPlane { s_i: Complex64 },
    /// Constant one (root at infinity).
    Unit,
    /// `2 / (2 pi f)^(k + 1)`, paired with the Taylor coefficient `c_k` of
    /// `ln(1/S)` at a repeated origin root: `k = 1` gives `1/(2 pi^2 f^2)`,
    /// `k = 3` gives `1/(8 pi^4 f^4)`.
    InversePower { k: u32 },
}

impl Weight {
    pub fn eval(&self, f: f64) -> f64 {
        match *self {
            Weight::ImaginaryAxis { f_i } => {
                ((f_i - f).powi(-2) + (f_i + f).powi(-2)) / (4.0 * PI * PI)
            }
            Weight::RightHalfPlane { s_i } => {
                let jw = Complex64::new(0.0, 2.0 * PI * f);
                ((s_i - jw).inv() + (s_i + jw).inv()).re
            }
            Weight::Unit => 1.0,
            Weight::InversePower { k } => 2.0 / (2.0 * PI * f).powi(k as i32 + 1),
        }
    }

    /// `int_band xi(f) df` by adaptive Gauss-Kronrod.
    pub fn integral(&self, band: Band) -> f64 {
        quad::gauss_kronrod(|f| self.eval(f), band.f_min, band.f_max, 0.0, 1e-13, 4096).value
    }
}

/// Where the generating root sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    ImaginaryAxis,
    RightHalfPlane,
    Infinity,
    /// Repeated origin root; `k` is the Taylor order that sets the bound.
    OriginRepeated { k: u32 },
}

impl ConstraintKind {
    pub fn label(&self) -> alloc::string::String {
        match self {
            ConstraintKind::ImaginaryAxis => "imaginary-axis".into(),
            ConstraintKind::RightHalfPlane => "right-half-plane".into(),
            ConstraintKind::Infinity => "infinity".into(),
            ConstraintKind::OriginRepeated { k } => alloc::format!("origin-order-{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodeFanoConstraint {
    pub kind: ConstraintKind,
    /// Generating root in rad/s (infinite for [`ConstraintKind::Infinity`]).
    pub root: Complex64,
    pub multiplicity: usize,
    pub bound: f64,
    pub weight: Weight,
}

/// Constraints implied by a passive, stable rational load.
///
/// Handles distinct imaginary-axis roots (multiplicity up to two, as touching
/// roots come in pairs), distinct right-half-plane roots, a double root at
/// infinity and the quadruple origin root of a Chu-like load. Any other
/// repeated root is rejected.
pub fn derive_constraints(load: &RationalFunction) -> Result<Vec<BodeFanoConstraint>> {
    let refl = load.reflection_equation_roots()?;
    let mut out = Vec::new();

    for r in &refl.roots {
        if r.root.norm() == 0.0 {
            if r.multiplicity != 4 {
                return Err(Error::UnsupportedRoot { root: r.root, multiplicity: r.multiplicity });
            }
            let c = load.log_taylor_coefficients(Complex64::new(0.0, 0.0), 4)?;
            out.push(BodeFanoConstraint {
                kind: ConstraintKind::OriginRepeated { k: 1 },
                root: r.root,
                multiplicity: 4,
                bound: c[1].re,
                weight: Weight::InversePower { k: 1 },
            });
            out.push(BodeFanoConstraint {
                kind: ConstraintKind::OriginRepeated { k: 3 },
                root: r.root,
                multiplicity: 4,
                bound: -c[3].re,
                weight: Weight::InversePower { k: 3 },
            });
        }
    }

    // One representative per orbit: Re >= 0, Im >= 0.
    let mut reps: Vec<(Complex64, usize)> = Vec::new();
    for r in refl.roots.iter().filter(|r| r.root.norm() > 0.0) {
        let rep = Complex64::new(r.root.re.abs(), r.root.im.abs());
        let rep = if rep.re <= AXIS_TOL * rep.norm() { Complex64::new(0.0, rep.im) } else { rep };
        if !reps.iter().any(|(q, _)| (q - rep).norm() <= ORBIT_TOL * rep.norm()) {
            reps.push((rep, r.multiplicity));
        }
    }
    reps.sort_by(|a, b| a.0.norm().partial_cmp(&b.0.norm()).unwrap_or(core::cmp::Ordering::Equal));

    for (s, m) in reps {
        if s.re == 0.0 {
            if m > 2 {
                return Err(Error::UnsupportedRoot { root: s, multiplicity: m });
            }
            let f_i = s.im / (2.0 * PI);
            if load.zeros().iter().any(|z| (z - s).norm() <= 1e-9 * s.norm()) {
                return Err(Error::RootOnZero(f_i));
            }
            let sp: Complex64 = load.poles().iter().map(|p| (p - s).inv()).sum();
            let sz: Complex64 = load.zeros().iter().map(|z| (z + s).inv()).sum();
            out.push(BodeFanoConstraint {
                kind: ConstraintKind::ImaginaryAxis,
                root: s,
                multiplicity: m,
                bound: -(sp + sz).re,
                weight: Weight::ImaginaryAxis { f_i },
            });
        } else {
            if m != 1 {
                return Err(Error::UnsupportedRoot { root: s, multiplicity: m });
            }
            // S(s) * prod (s + z)/(s - z) = gain * prod(s + z) / prod(s - p);
            // the zeros cancel analytically, so evaluate the reduced form.
            let num = load
                .zeros()
                .iter()
                .fold(Complex64::new(load.gain(), 0.0), |acc, z| acc * (s + z));
            let den: Complex64 = load.poles().iter().map(|p| s - p).product();
            out.push(BodeFanoConstraint {
                kind: ConstraintKind::RightHalfPlane,
                root: s,
                multiplicity: 1,
                bound: -(num / den).norm().ln(),
                weight: Weight::RightHalfPlane { s_i: s },
            });
        }
    }

    match refl.at_infinity {
        0 => {}
        2 => {
            let sum: Complex64 = load.poles().iter().chain(load.zeros()).sum();
            out.push(BodeFanoConstraint {
                kind: ConstraintKind::Infinity,
                root: Complex64::new(f64::INFINITY, 0.0),
                multiplicity: 2,
                bound: -0.5 * sum.re,
                weight: Weight::Unit,
            });
        }
        m => {
            return Err(Error::UnsupportedRoot {
                root: Complex64::new(f64::INFINITY, 0.0),
                multiplicity: m,
            })
        }
    }

    for c in &out {
        if !(c.bound > 0.0) {
            return Err(Error::NonpositiveBound(c.bound));
        }
    }
    Ok(out)
}

/// `int xi(f) ln(1 / r^2(f)) df`, `r^2 = 1 - T`, over the profile's grid.
///
/// `r^2` is smooth where `-ln r^2` is not: a matched frequency gives a log
/// singularity that sampled rules resolve poorly. Each Simpson panel
/// therefore interpolates `r^2` by the quadratic through its three samples
/// and integrates `xi(f) (-ln|q(f)|)` adaptively, with the interpolant's real
/// roots as breakpoints. Samples with `T <= 0` contribute nothing; two
/// adjacent samples with `r^2 = 0` make the integral divergent.
pub fn constraint_lhs(c: &BodeFanoConstraint, profile: &TransmissionProfile) -> Result<f64> {
    let fs = &profile.frequencies;
    let n = fs.len();
    let mut r2 = Vec::with_capacity(n);
    for k in 0..n {
        let t = profile.values[k];
        let r = profile.reflected[k];
        if t > 0.0 && r <= 0.0 && k + 1 < n && profile.reflected[k + 1] <= 0.0 && profile.values[k + 1] > 0.0 {
            return Err(Error::Divergent(fs[k]));
        }
        r2.push(if t <= 0.0 { 1.0 } else { r.max(0.0) });
    }
    if n < 2 {
        return Ok(0.0);
    }
    if n == 2 {
        let nodes = [fs[0], 0.5 * (fs[0] + fs[1]), fs[1]];
        let vals = [r2[0], 0.5 * (r2[0] + r2[1]), r2[1]];
        return Ok(panel_lhs(&c.weight, nodes, vals, fs[0], fs[1]));
    }
    let intervals = n - 1;
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 <= intervals {
        total += panel_lhs(&c.weight, [fs[i], fs[i + 1], fs[i + 2]], [r2[i], r2[i + 1], r2[i + 2]], fs[i], fs[i + 2]);
        i += 2;
    }
    if intervals % 2 == 1 {
        let k = n - 3;
        total += panel_lhs(&c.weight, [fs[k], fs[k + 1], fs[k + 2]], [r2[k], r2[k + 1], r2[k + 2]], fs[k + 1], fs[k + 2]);
    }
    Ok(total)
}

/// `int_lo^hi xi(f) (-ln|q(f)|) df` for the quadratic `q` through `(f_i, y_i)`.
fn panel_lhs(w: &Weight, f: [f64; 3], y: [f64; 3], lo: f64, hi: f64) -> f64 {
    if y.iter().all(|v| *v == 1.0) {
        return 0.0;
    }
    // Local variable t = (f - f1) / h keeps the coefficients well scaled.
    let h = 0.5 * (f[2] - f[0]);
    let t = [(f[0] - f[1]) / h, 0.0, (f[2] - f[1]) / h];
    let d01 = (y[1] - y[0]) / (t[1] - t[0]);
    let d12 = (y[2] - y[1]) / (t[2] - t[1]);
    let d2 = (d12 - d01) / (t[2] - t[0]);
    let (a, b, c0) = (d2, d01 - d2 * (t[0] + t[1]), y[0] - d01 * t[0] + d2 * t[0] * t[1]);
    let q = |x: f64| c0 + x * (b + x * a);

    let (tlo, thi) = ((lo - f[1]) / h, (hi - f[1]) / h);
    // Real roots of q; ln|q| is then evaluated in factored form so that it
    // stays accurate next to them.
    let scale = a.abs().max(b.abs()).max(c0.abs());
    let mut roots: Vec<f64> = Vec::new();
    let mut lead = a;
    if a.abs() > 1e-14 * scale {
        let mut disc = b * b - 4.0 * a * c0;
        // A double root perturbed by rounding is still a double root.
        if disc < 0.0 && -disc <= 1e-10 * (b * b).max((4.0 * a * c0).abs()) {
            disc = 0.0;
        }
        if disc >= 0.0 {
            let s = -0.5 * (b + b.signum() * disc.sqrt());
            let r1 = s / a;
            roots = alloc::vec![r1, if s != 0.0 { c0 / s } else { r1 }];
        }
    } else if b != 0.0 {
        lead = b;
        roots.push(-c0 / b);
    }
    let factored = !roots.is_empty();
    let log_q = |x: f64| {
        if factored {
            lead.abs().ln() + roots.iter().filter(|r| **r != x).map(|r| (x - r).abs().ln()).sum::<f64>()
        } else {
            q(x).abs().ln()
        }
    };

    let mut cuts = alloc::vec![tlo, thi];
    cuts.extend(roots.iter().copied().filter(|x| *x > tlo && *x < thi));
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));

    let integrand = |x: f64| w.eval(f[1] + h * x) * -log_q(x);
    cuts.windows(2)
        .map(|p| h * quad::gauss_kronrod(integrand, p[0], p[1], 1e-13, 1e-10, 200).value)
        .sum()
}

/// Per-constraint left-hand sides and slacks for one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub lhs: Vec<f64>,
    /// `bound - lhs`; negative infinity when the integral diverges.
    pub slack: Vec<f64>,
    pub feasible: bool,
}

impl FeasibilityReport {
    /// Smallest slack relative to its bound.
    pub fn min_relative_slack(&self, constraints: &[BodeFanoConstraint]) -> f64 {
        self.slack
            .iter()
            .zip(constraints)
            .map(|(s, c)| s / c.bound)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Feasible when every slack is at least `-eps_rel * bound`.
pub fn feasibility_check(
    constraints: &[BodeFanoConstraint],
    profile: &TransmissionProfile,
    eps_rel: f64,
) -> FeasibilityReport {
    let mut lhs = Vec::with_capacity(constraints.len());
    let mut slack = Vec::with_capacity(constraints.len());
    for c in constraints {
        let v = constraint_lhs(c, profile).unwrap_or(f64::INFINITY);
        lhs.push(v);
        slack.push(c.bound - v);
    }
    let feasible = slack
        .iter()
        .zip(constraints)
        .all(|(s, c)| *s >= -eps_rel * c.bound);
    FeasibilityReport { lhs, slack, feasible }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{chu_scattering_rational, ScenarioConfig};
    use crate::optimizer::Strategy;

    fn flat(band: Band, t: f64, points: usize) -> TransmissionProfile {
        TransmissionProfile::new(band.grid(points), alloc::vec![t; points], Strategy::FrequencyFlat)
    }

    #[test]
    fn chu_constraints_closed_form() {
        let cfg = ScenarioConfig::single_chu(4.2e9);
        let cs = derive_constraints(&chu_scattering_rational(&cfg)).unwrap();
        assert_eq!(cs.len(), 2);
        let tau = cfg.tau();
        assert!((cs[0].bound - 2.0 * tau).abs() <= 1e-9 * 2.0 * tau);
        assert!((cs[1].bound - 4.0 * tau.powi(3) / 3.0).abs() <= 1e-9 * 4.0 * tau.powi(3) / 3.0);
        let f = 3.3e9;
        assert!((cs[0].weight.eval(f) - 1.0 / (2.0 * PI * PI * f * f)).abs() < 1e-15 / (f * f));
        let w3 = 1.0 / (8.0 * PI.powi(4) * f.powi(4));
        assert!((cs[1].weight.eval(f) - w3).abs() < 1e-12 * w3);
    }

    #[test]
    fn parallel_rc_gives_one_infinity_constraint() {
        // S(s) = -sRC / (sRC + 2) for R = 50, C = 1 pF.
        let rc = 50.0 * 1e-12;
        let load = RationalFunction::from_polynomials(&[0.0, -rc], &[2.0, rc]).unwrap();
        let cs = derive_constraints(&load).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].kind, ConstraintKind::Infinity);
        assert!((cs[0].bound - 1.0 / rc).abs() < 1e-9 / rc);
    }

    #[test]
    fn right_half_plane_root_of_first_order_load() {
        // S(s) = 0.5 (s - 1)/(s + 2): S(-s)S(s) = 1 has real roots.
        let load = RationalFunction::new(
            alloc::vec![Complex64::new(1.0, 0.0)],
            alloc::vec![Complex64::new(-2.0, 0.0)],
            0.5,
        )
        .unwrap();
        let cs = derive_constraints(&load).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].kind, ConstraintKind::RightHalfPlane);
        let s = cs[0].root;
        let v = load.evaluate(s).unwrap() * load.evaluate(-s).unwrap();
        assert!((v - 1.0).norm() < 1e-9);
        assert!(cs[0].bound > 0.0);
    }

    #[test]
    fn zero_profile_has_zero_lhs_and_full_slack() {
        let cfg = ScenarioConfig::single_chu(4.2e9);
        let cs = derive_constraints(&chu_scattering_rational(&cfg)).unwrap();
        let p = flat(cfg.band, 0.0, 101);
        for c in &cs {
            assert_eq!(constraint_lhs(c, &p).unwrap(), 0.0);
        }
        let rep = feasibility_check(&cs, &p, 1e-6);
        assert!(rep.feasible);
        assert_eq!(rep.slack[0], cs[0].bound);
    }

    #[test]
    fn unit_profile_is_divergent_and_infeasible() {
        let cfg = ScenarioConfig::single_chu(4.2e9);
        let cs = derive_constraints(&chu_scattering_rational(&cfg)).unwrap();
        let p = flat(cfg.band, 1.0, 101);
        assert!(matches!(constraint_lhs(&cs[0], &p), Err(Error::Divergent(_))));
        assert!(!feasibility_check(&cs, &p, 1e-6).feasible);
    }

    #[test]
    fn halving_support_halves_unit_weight_lhs() {
        let c = BodeFanoConstraint {
            kind: ConstraintKind::Infinity,
            root: Complex64::new(f64::INFINITY, 0.0),
            multiplicity: 2,
            bound: 1.0,
            weight: Weight::Unit,
        };
        let band = Band::new(1e9, 3e9).unwrap();
        let full = flat(band, 0.5, 2001);
        let mut half = full.clone();
        for (f, v) in half.frequencies.iter().zip(half.values.iter_mut()) {
            if *f > 2e9 {
                *v = 0.0;
            }
        }
        let a = constraint_lhs(&c, &full).unwrap();
        let b = constraint_lhs(&c, &half).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-3 * a);
    }

    #[test]
    fn matched_frequency_log_singularity_is_integrated_exactly() {
        // r^2 = ((f - f0) / W)^2 on [f0 - W/2, f0 + W/2] with a sample at f0:
        // int -ln r^2 df = 2 W (1 + ln 2).
        let band = Band::new(4.0e9, 6.0e9).unwrap();
        let (f0, w) = (band.center(), band.width());
        let c = BodeFanoConstraint {
            kind: ConstraintKind::Infinity,
            root: Complex64::new(f64::INFINITY, 0.0),
            multiplicity: 1,
            bound: 1.0,
            weight: Weight::Unit,
        };
        let exact = 2.0 * w * (1.0 + core::f64::consts::LN_2);
        for points in [11, 101, 1001, 1002] {
            let grid = band.grid(points);
            let r2: alloc::vec::Vec<f64> = grid.iter().map(|f| ((f - f0) / w).powi(2)).collect();
            let p = TransmissionProfile::from_reflected(grid, r2, Strategy::ConjugateMatch);
            let v = constraint_lhs(&c, &p).unwrap();
            assert!((v - exact).abs() < 1e-9 * exact, "{points}: {v} vs {exact}");
        }
    }
}
