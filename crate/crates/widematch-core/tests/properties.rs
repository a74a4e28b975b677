use approx::assert_relative_eq;
use proptest::prelude::*;
use widematch_core::bodefano::derive_constraints;
use widematch_core::ladder::{two_port_scattering, LadderNetwork, Topology};
use widematch_core::network::{
    array_scattering, channel_response, chu_scattering_rational, snr_ideal, Band, Beamformer, ScenarioConfig,
    SnrProfile,
};
use widematch_core::optimizer::{solve, transmission_from_multipliers};
use widematch_core::rational::RationalFunction;
use widematch_core::{quad, Complex64};

fn single_snr(bw: f64, points: usize) -> (ScenarioConfig, SnrProfile) {
    let cfg = ScenarioConfig::single_chu(bw);
    let grid = cfg.band.grid(points);
    let st = array_scattering(&cfg, &grid).unwrap();
    let ch = channel_response(&cfg, &st).unwrap();
    let snr = snr_ideal(&cfg, &st, &Beamformer::single(), &ch).unwrap();
    (cfg, snr)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ladders_are_lossless_and_reciprocal(
        ls in prop::collection::vec(-27.6f64..-13.8, 1..=10),
        cs in prop::collection::vec(-34.5f64..-20.7, 10),
        shunt_first in any::<bool>(),
        f in 1e8f64..3e10,
    ) {
        let order = ls.len();
        let topo = if shunt_first { Topology::ShuntFirst } else { Topology::SeriesFirst };
        let net = LadderNetwork::new(
            ls.iter().map(|v| v.exp()).collect(),
            cs[..order].iter().map(|v| v.exp()).collect(),
            topo,
            50.0,
        ).unwrap();
        let s = two_port_scattering(&net, f);
        prop_assert!((s.s11.norm_sqr() + s.s21.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((s.s22.norm_sqr() + s.s12.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(s.s12, s.s21);
    }

    #[test]
    fn chu_bounds_scale_with_radius(lambda in 0.2f64..5.0) {
        let base = ScenarioConfig::single_chu(4.2e9);
        let mut scaled = base.clone();
        scaled.radius_m *= lambda;
        let a = derive_constraints(&chu_scattering_rational(&base)).unwrap();
        let b = derive_constraints(&chu_scattering_rational(&scaled)).unwrap();
        prop_assert_eq!(a.len(), 2);
        prop_assert_eq!(b.len(), 2);
        assert_relative_eq!(b[0].bound, a[0].bound * lambda, max_relative = 1e-9);
        assert_relative_eq!(b[1].bound, a[1].bound * lambda.powi(3), max_relative = 1e-9);
    }

    #[test]
    fn waterfilling_profile_is_bounded_and_monotone_in_snr(
        log_mu in -3.0f64..3.0,
        snr_a in 0.0f64..1e3,
        snr_b in 0.0f64..1e3,
    ) {
        // Two samples at the same frequency see the same weighted multiplier,
        // so the profile must order with SNR.
        let cfg = ScenarioConfig::single_chu(4.2e9);
        let cons = derive_constraints(&chu_scattering_rational(&cfg)).unwrap();
        let f = cfg.f_c_hz;
        let band = cfg.band;
        let snr = SnrProfile { frequencies: vec![f, f * (1.0 + 1e-12)], values: vec![snr_a, snr_b], band };
        let unit = 1.0 / (core::f64::consts::LN_2 * cons[1].weight.eval(f));
        let p = transmission_from_multipliers(&[0.0, unit * 10f64.powf(log_mu)], &cons, &snr).unwrap();
        for (t, r) in p.values.iter().zip(&p.reflected) {
            prop_assert!((0.0..=1.0).contains(t));
            prop_assert!((t + r - 1.0).abs() < 1e-12);
        }
        if snr_a <= snr_b {
            prop_assert!(p.values[0] <= p.values[1] + 1e-12);
        } else {
            prop_assert!(p.values[1] <= p.values[0] + 1e-12);
        }
    }

    #[test]
    fn clamp_is_exact(log_mu in -2.0f64..2.0) {
        let (_, snr) = single_snr(4.2e9, 201);
        let cons = derive_constraints(&chu_scattering_rational(&ScenarioConfig::single_chu(4.2e9))).unwrap();
        let unit = snr.max() / (core::f64::consts::LN_2 * cons[1].weight.eval(snr.frequencies[0]));
        let mu = [0.0, unit * 10f64.powf(log_mu)];
        let p = transmission_from_multipliers(&mu, &cons, &snr).unwrap();
        for (k, &f) in snr.frequencies.iter().enumerate() {
            let numerator = snr.values[k] - core::f64::consts::LN_2 * mu[1] * cons[1].weight.eval(f);
            if numerator <= 0.0 {
                prop_assert_eq!(p.values[k], 0.0);
            } else {
                prop_assert!(p.values[k] > 0.0);
            }
        }
    }

    #[test]
    fn reflection_roots_come_in_orbits(
        p_re in 0.2f64..3.0,
        p_im in 0.0f64..3.0,
        z_re in -3.0f64..3.0,
        gain in 0.05f64..0.9,
    ) {
        let poles = if p_im > 0.1 {
            vec![Complex64::new(-p_re, p_im), Complex64::new(-p_re, -p_im)]
        } else {
            vec![Complex64::new(-p_re, 0.0), Complex64::new(-p_re - 1.0, 0.0)]
        };
        let f = RationalFunction::new(vec![Complex64::new(z_re, 0.0)], poles, gain).unwrap();
        let roots = f.reflection_equation_roots().unwrap();
        for r in &roots.roots {
            if r.root.norm() < 1e-9 {
                continue;
            }
            let mirror = -r.root;
            let found = roots.roots.iter().any(|q| (q.root - mirror).norm() < 1e-6 * (1.0 + mirror.norm()));
            prop_assert!(found, "{:?} has no partner", r.root);
            // Every root satisfies |S(s) S(-s)| = 1.
            let v = f.evaluate(r.root).unwrap() * f.evaluate(-r.root).unwrap();
            prop_assert!((v - 1.0).norm() < 1e-6, "{}", v);
        }
    }
}

#[test]
fn simpson_rate_converges_under_refinement() {
    let (cfg, coarse) = single_snr(4.2e9, 1001);
    let (_, fine) = single_snr(4.2e9, 2001);
    let cons = derive_constraints(&chu_scattering_rational(&cfg)).unwrap();
    let a = solve(&coarse, &cons, 1e-6).unwrap();
    let b = solve(&fine, &cons, 1e-6).unwrap();
    assert_relative_eq!(a.rate, b.rate, max_relative = 1e-6);
}

#[test]
fn band_grid_is_uniform() {
    let band = Band::new(4.9e9, 9.1e9).unwrap();
    let g = band.grid(5);
    assert_eq!(g, quad::linspace(4.9e9, 9.1e9, 5));
}
