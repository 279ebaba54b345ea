//! Simulation-oracle agreement tests beyond the acceptance criteria.
//!
//! The conditional-coverage oracles below sample the interference fields
//! directly from the void-constrained point processes (independent of
//! the coverage module's quadrature path) and compare final numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use rayon::prelude::*;
use std::f64::consts::PI;
use uavnet_core::association::Association;
use uavnet_core::channel::LosWeights;
use uavnet_core::content::{CachePolicy, HitMode, SuccessModel};
use uavnet_core::coverage::Coverage;
use uavnet_core::montecarlo;
use uavnet_core::params::{paper_defaults, FieldRadii, NetworkParams};

/// Radius with density proportional to x^2 on [lo, hi] (3-D shell).
fn shell_radius_3d<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.gen();
    (lo.powi(3) + u * (hi.powi(3) - lo.powi(3))).cbrt()
}

/// Radius with density proportional to x on [lo, hi] (2-D annulus).
fn annulus_radius_2d<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.gen();
    (lo * lo + u * (hi * hi - lo * lo)).sqrt()
}

fn poisson<R: Rng>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        0
    } else {
        rand_distr::Poisson::new(mean).unwrap().sample(rng) as usize
    }
}

struct Setup {
    p: NetworkParams,
    w: LosWeights,
    radii: FieldRadii,
    gamma: Gamma<f64>,
}

fn setup() -> Setup {
    let (p, _) = paper_defaults();
    let w = LosWeights::for_env(&p.env).unwrap();
    let radii = FieldRadii::for_network(&p, w.los, w.nlos);
    let m = f64::from(p.nakagami_m);
    Setup { p, w, radii, gamma: Gamma::new(m, 1.0 / m).unwrap() }
}

#[test]
fn association_matches_simulation_at_defaults() {
    let (p, _) = paper_defaults();
    let analytic = Association::new(&p).unwrap().report().unwrap();
    let mc = montecarlo::estimate_association(&p, 100_000, 314).unwrap();
    assert!(
        (analytic.a_ma - mc.tbs.mean).abs() < 0.01,
        "A_MA {} vs {}",
        analytic.a_ma,
        mc.tbs.mean
    );
    assert!(
        (analytic.a_ual_bar - mc.los_uav.mean).abs() < 0.01,
        "A_UAL {} vs {}",
        analytic.a_ual_bar,
        mc.los_uav.mean
    );
    assert!(
        (analytic.a_uan_bar - mc.nlos_uav.mean).abs() < 0.01,
        "A_UAN {} vs {}",
        analytic.a_uan_bar,
        mc.nlos_uav.mean
    );
}

/// Conditional coverage of a LoS-served user: the serving distance is
/// pinned and the three interference fields are drawn outside their
/// association exclusion zones.
fn los_conditional_oracle(s: &Setup, d: f64, t_a: f64, n: u64, seed: u64) -> f64 {
    let p = &s.p;
    let k = p.k_u();
    let noise = p.noise_w();
    let excl_nlos = d.powf(p.alpha_l / p.alpha_n);
    let excl_tbs = (p.p_m / p.p_ua).powf(1.0 / p.alpha_n) * excl_nlos;
    let hits: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let g = s.gamma.sample(&mut rng);
            let signal = k * p.p_ua * g * d.powf(-p.alpha_l);
            let mut interference = 0.0;

            let lam_l = p.lambda_ua * s.w.los;
            let count =
                poisson(&mut rng, lam_l * 2.0 / 3.0 * PI * (s.radii.uav_ap_m.powi(3) - d.powi(3)));
            for _ in 0..count {
                let x = shell_radius_3d(&mut rng, d, s.radii.uav_ap_m);
                interference += k * p.p_ua * s.gamma.sample(&mut rng) * x.powf(-p.alpha_l);
            }

            let lam_n = p.lambda_ua * s.w.nlos;
            let count = poisson(
                &mut rng,
                lam_n * 2.0 / 3.0 * PI * (s.radii.uav_ap_m.powi(3) - excl_nlos.powi(3)),
            );
            for _ in 0..count {
                let x = shell_radius_3d(&mut rng, excl_nlos, s.radii.uav_ap_m);
                let e: f64 = Exp1.sample(&mut rng);
                interference += k * p.p_ua * e * x.powf(-p.alpha_n);
            }

            let count = poisson(
                &mut rng,
                p.lambda_m * PI * (s.radii.tbs_m.powi(2) - excl_tbs.powi(2)),
            );
            for _ in 0..count {
                let r = annulus_radius_2d(&mut rng, excl_tbs, s.radii.tbs_m);
                let e: f64 = Exp1.sample(&mut rng);
                interference += k * p.p_m * e * r.powf(-p.alpha_n);
            }
            u64::from(signal > t_a * (noise + interference))
        })
        .sum();
    hits as f64 / n as f64
}

#[test]
fn conditional_los_coverage_matches_field_simulation() {
    let s = setup();
    let cov = Coverage::new(&s.p).unwrap();
    for (d, t) in [(50.0, 1.0), (30.0, 0.1)] {
        let analytic = cov.los_access_given(d, t).unwrap();
        let sim = los_conditional_oracle(&s, d, t, 100_000, 555);
        assert!(
            (analytic - sim).abs() < 0.02,
            "LoS conditional at d={d}, t={t}: analytic {analytic:.4} vs oracle {sim:.4}"
        );
    }
}

fn nlos_conditional_oracle(s: &Setup, d: f64, t_a: f64, n: u64, seed: u64) -> f64 {
    let p = &s.p;
    let k = p.k_u();
    let noise = p.noise_w();
    let excl_los = d.powf(p.alpha_n / p.alpha_l);
    let excl_tbs = (p.p_m / p.p_ua).powf(1.0 / p.alpha_n) * d;
    let hits: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let e: f64 = Exp1.sample(&mut rng);
            let signal = k * p.p_ua * e * d.powf(-p.alpha_n);
            let mut interference = 0.0;

            let lam_l = p.lambda_ua * s.w.los;
            if excl_los < s.radii.uav_ap_m {
                let count = poisson(
                    &mut rng,
                    lam_l * 2.0 / 3.0 * PI * (s.radii.uav_ap_m.powi(3) - excl_los.powi(3)),
                );
                for _ in 0..count {
                    let x = shell_radius_3d(&mut rng, excl_los, s.radii.uav_ap_m);
                    interference += k * p.p_ua * s.gamma.sample(&mut rng) * x.powf(-p.alpha_l);
                }
            }

            let lam_n = p.lambda_ua * s.w.nlos;
            let count = poisson(
                &mut rng,
                lam_n * 2.0 / 3.0 * PI * (s.radii.uav_ap_m.powi(3) - d.powi(3)),
            );
            for _ in 0..count {
                let x = shell_radius_3d(&mut rng, d, s.radii.uav_ap_m);
                let e: f64 = Exp1.sample(&mut rng);
                interference += k * p.p_ua * e * x.powf(-p.alpha_n);
            }

            let count = poisson(
                &mut rng,
                p.lambda_m * PI * (s.radii.tbs_m.powi(2) - excl_tbs.powi(2)),
            );
            for _ in 0..count {
                let r = annulus_radius_2d(&mut rng, excl_tbs, s.radii.tbs_m);
                let e: f64 = Exp1.sample(&mut rng);
                interference += k * p.p_m * e * r.powf(-p.alpha_n);
            }
            u64::from(signal > t_a * (noise + interference))
        })
        .sum();
    hits as f64 / n as f64
}

#[test]
fn conditional_nlos_coverage_matches_field_simulation() {
    let s = setup();
    let cov = Coverage::new(&s.p).unwrap();
    let (d, t) = (6.0, 0.2);
    let analytic = cov.nlos_access_given(d, t).unwrap();
    let sim = nlos_conditional_oracle(&s, d, t, 100_000, 777);
    assert!(
        (analytic - sim).abs() < 0.02,
        "NLoS conditional: analytic {analytic:.4} vs oracle {sim:.4}"
    );
}

/// Conditional xHaul coverage oracles for a tagged UAV-AP at height `h`.
/// The analytic interference geometry ignores the height, which is
/// accurate for the low heights typical of serving UAV-APs; h = 20 m is
/// the operating point these checks pin.
fn xhaul_tbs_oracle(s: &Setup, d_mb: f64, h: f64, t_b: f64, n: u64, seed: u64) -> f64 {
    let p = &s.p;
    let k = p.k_u();
    let noise = p.noise_w();
    let ground_excl = (d_mb * d_mb - h * h).max(0.0).sqrt();
    let excl_ub = (p.p_ub / p.p_m).powf(1.0 / p.alpha_l) * d_mb;
    let hits: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let e: f64 = Exp1.sample(&mut rng);
            let signal = k * p.p_m * e * d_mb.powf(-p.alpha_l);
            let mut interference = 0.0;

            let count = poisson(
                &mut rng,
                p.lambda_m * PI * (s.radii.tbs_m.powi(2) - ground_excl.powi(2)),
            );
            for _ in 0..count {
                let r = annulus_radius_2d(&mut rng, ground_excl, s.radii.tbs_m);
                let dist = (r * r + h * h).sqrt();
                let e: f64 = Exp1.sample(&mut rng);
                interference += k * p.p_m * e * dist.powf(-p.alpha_l);
            }

            // UAV-BS shell around the AP, clipped to the upper half-space.
            let r_ub = s.radii.uav_bs_m;
            if excl_ub < r_ub {
                let count = poisson(
                    &mut rng,
                    p.lambda_ub * 4.0 / 3.0 * PI * (r_ub.powi(3) - excl_ub.powi(3)),
                );
                for _ in 0..count {
                    let x = shell_radius_3d(&mut rng, excl_ub, r_ub);
                    let cos_t = 2.0 * rng.gen::<f64>() - 1.0;
                    if h + x * cos_t <= 0.0 {
                        continue;
                    }
                    interference += k * p.p_ub * s.gamma.sample(&mut rng) * x.powf(-p.alpha_l);
                }
            }
            u64::from(signal > t_b * (noise + interference))
        })
        .sum();
    hits as f64 / n as f64
}

fn xhaul_uavbs_oracle(s: &Setup, d_ub: f64, h: f64, t_b: f64, n: u64, seed: u64) -> f64 {
    let p = &s.p;
    let k = p.k_u();
    let noise = p.noise_w();
    let excl_tbs_3d = (p.p_m / p.p_ub).powf(1.0 / p.alpha_l) * d_ub;
    let ground_excl = (excl_tbs_3d * excl_tbs_3d - h * h).max(0.0).sqrt();
    let hits: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let g = s.gamma.sample(&mut rng);
            let signal = k * p.p_ub * g * d_ub.powf(-p.alpha_l);
            let mut interference = 0.0;

            let count = poisson(
                &mut rng,
                p.lambda_m * PI * (s.radii.tbs_m.powi(2) - ground_excl.powi(2)),
            );
            for _ in 0..count {
                let r = annulus_radius_2d(&mut rng, ground_excl, s.radii.tbs_m);
                let dist = (r * r + h * h).sqrt();
                let e: f64 = Exp1.sample(&mut rng);
                interference += k * p.p_m * e * dist.powf(-p.alpha_l);
            }

            let r_ub = s.radii.uav_bs_m;
            if d_ub < r_ub {
                let count = poisson(
                    &mut rng,
                    p.lambda_ub * 4.0 / 3.0 * PI * (r_ub.powi(3) - d_ub.powi(3)),
                );
                for _ in 0..count {
                    let x = shell_radius_3d(&mut rng, d_ub, r_ub);
                    let cos_t = 2.0 * rng.gen::<f64>() - 1.0;
                    if h + x * cos_t <= 0.0 {
                        continue;
                    }
                    interference += k * p.p_ub * s.gamma.sample(&mut rng) * x.powf(-p.alpha_l);
                }
            }
            u64::from(signal > t_b * (noise + interference))
        })
        .sum();
    hits as f64 / n as f64
}

#[test]
fn conditional_xhaul_coverage_matches_field_simulation() {
    let s = setup();
    let cov = Coverage::new(&s.p).unwrap();
    let h = 20.0;

    let (d_mb, t_b) = (300.0, 1.0);
    let analytic = cov.tbs_xhaul_given(d_mb, t_b).unwrap();
    let sim = xhaul_tbs_oracle(&s, d_mb, h, t_b, 100_000, 901);
    assert!(
        (analytic - sim).abs() < 0.02,
        "TBS xHaul conditional: analytic {analytic:.4} vs oracle {sim:.4}"
    );

    let (d_ub, t_b) = (120.0, 1.0);
    let analytic = cov.uavbs_xhaul_given(d_ub, t_b).unwrap();
    let sim = xhaul_uavbs_oracle(&s, d_ub, h, t_b, 100_000, 902);
    assert!(
        (analytic - sim).abs() < 0.02,
        "UAV-BS xHaul conditional: analytic {analytic:.4} vs oracle {sim:.4}"
    );
}

#[test]
fn xhaul_association_matches_simulation() {
    let s = setup();
    let assoc = Association::new(&s.p).unwrap();
    let (d_a, theta) = (90.0, 0.4);
    let analytic = assoc.xhaul(d_a, theta).unwrap().a_ub;
    let h = d_a * theta.cos();
    let p = &s.p;
    let n = 100_000u64;
    let wins: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(4040);
            rng.set_stream(i);
            // Nearest ground TBS in 3-D from the AP.
            let count = poisson(&mut rng, p.lambda_m * PI * s.radii.tbs_m.powi(2));
            let mut d_mb = f64::INFINITY;
            for _ in 0..count {
                let r = s.radii.tbs_m * rng.gen::<f64>().sqrt();
                d_mb = d_mb.min((r * r + h * h).sqrt());
            }
            // Nearest UAV-BS in the clipped ball around the AP.
            let r_ub = s.radii.uav_bs_m;
            let count = poisson(&mut rng, p.lambda_ub * 4.0 / 3.0 * PI * r_ub.powi(3));
            let mut d_ub = f64::INFINITY;
            for _ in 0..count {
                let d = r_ub * rng.gen::<f64>().cbrt();
                let cos_t = 2.0 * rng.gen::<f64>() - 1.0;
                if h + d * cos_t > 0.0 {
                    d_ub = d_ub.min(d);
                }
            }
            let rssi_tbs = p.p_m * d_mb.powf(-p.alpha_l);
            let rssi_ub = p.p_ub * d_ub.powf(-p.alpha_l);
            u64::from(rssi_ub > rssi_tbs)
        })
        .sum();
    let sim = wins as f64 / n as f64;
    assert!(
        (analytic - sim).abs() < 0.01,
        "A_UB at (d_a={d_a}, theta={theta}): analytic {analytic:.4} vs MC {sim:.4}"
    );
}

#[test]
fn success_probability_matches_end_to_end_simulation() {
    let (p, mut svc) = paper_defaults();
    svc.n_users = 5;
    let policy = CachePolicy::new(1000, 600, 300, 1.0).unwrap();
    let model = SuccessModel::new(&p).unwrap();
    let analytic = model.success(&svc, &policy, HitMode::FullLibrary).unwrap();
    let sim = montecarlo::estimate_success(&p, &svc, &policy, 100_000, 611).unwrap();
    assert!(
        (analytic.p_suc - sim.p_suc.mean).abs() < 0.03,
        "P_suc analytic {:.4} vs simulated {:.4}",
        analytic.p_suc,
        sim.p_suc.mean
    );
    assert!(
        (analytic.p_sa - sim.p_sa.mean).abs() < 0.03,
        "P(S_a) analytic {:.4} vs simulated {:.4}",
        analytic.p_sa,
        sim.p_sa.mean
    );
}

/// In a convergent-interference configuration (alpha_L well above the
/// 3-D boundary), doubling the field radius must not move coverage
/// estimates beyond sampling noise.
#[test]
fn window_doubling_is_negligible_when_interference_converges() {
    let (mut p, _) = paper_defaults();
    p.alpha_l = 6.0;
    p.alpha_n = 6.0;
    let t = [0.05];
    let n = 50_000;
    let base = montecarlo::estimate_access_coverage_curve(&p, &t, n, 71).unwrap();
    let mut wide = p.clone();
    wide.horizon_3d_m *= 2.0;
    let doubled = montecarlo::estimate_access_coverage_curve(&wide, &t, n, 72).unwrap();
    let se = (base[0].std_err.powi(2) + doubled[0].std_err.powi(2)).sqrt();
    let shift = (base[0].mean - doubled[0].mean).abs();
    assert!(shift <= se, "coverage shift {shift:.5} exceeds one joint SE {se:.5}");
}
