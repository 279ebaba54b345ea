//! Air-to-ground visibility, path loss, fading and SINR thresholds.

use crate::error::{Error, Result};
use crate::params::{Environment, NetworkParams, ServiceParams};
use crate::quadrature::{integrate, QuadSpec};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use std::f64::consts::{FRAC_PI_2, LN_2};

/// The five link classes of the model and their channel settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    TbsAccess,
    UavLosAccess,
    UavNlosAccess,
    TbsXhaul,
    UavBsXhaul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingKind {
    Rayleigh,
    Nakagami(u32),
}

/// Path-loss coefficient, transmit power, exponent and fading law of one
/// link class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tier: Tier,
    pub k: f64,
    pub power_w: f64,
    pub alpha: f64,
    pub fading: FadingKind,
}

impl LinkBudget {
    pub fn for_tier(tier: Tier, p: &NetworkParams) -> LinkBudget {
        let m = p.nakagami_m;
        let (k, power_w, alpha, fading) = match tier {
            Tier::TbsAccess => (p.k_m(), p.p_m, p.alpha_n, FadingKind::Rayleigh),
            Tier::UavLosAccess => (p.k_u(), p.p_ua, p.alpha_l, FadingKind::Nakagami(m)),
            Tier::UavNlosAccess => (p.k_u(), p.p_ua, p.alpha_n, FadingKind::Rayleigh),
            Tier::TbsXhaul => (p.k_m(), p.p_m, p.alpha_l, FadingKind::Rayleigh),
            Tier::UavBsXhaul => (p.k_u(), p.p_ub, p.alpha_l, FadingKind::Nakagami(m)),
        };
        LinkBudget { tier, k, power_w, alpha, fading }
    }
}

/// Probability of a LoS link to a UAV seen under polar angle `theta`
/// (measured from the vertical), for the given blockage environment.
pub fn los_probability(theta: f64, env: &Environment) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::Domain(format!(
            "polar angle must lie in [0, pi/2], got {theta}"
        )));
    }
    Ok(los_probability_unchecked(theta, env))
}

#[inline]
pub(crate) fn los_probability_unchecked(theta: f64, env: &Environment) -> f64 {
    // asin(cos theta) in degrees is the elevation angle 90 - theta.
    let elev_deg = theta.cos().asin().to_degrees();
    1.0 / (1.0 + env.eta * (-env.mu * (elev_deg - env.eta)).exp())
}

pub fn nlos_probability(theta: f64, env: &Environment) -> Result<f64> {
    Ok(1.0 - los_probability(theta, env)?)
}

/// Angle-averaged LoS weight `W'_L = int_0^{pi/2} W_L(theta) sin(theta) d theta`.
pub fn los_weight(env: &Environment) -> Result<f64> {
    env.validate()?;
    integrate(
        |theta| los_probability_unchecked(theta, env) * theta.sin(),
        0.0,
        FRAC_PI_2,
        &QuadSpec::default(),
    )
}

/// Angle-averaged NLoS weight `W'_N`; `W'_L + W'_N = 1`.
pub fn nlos_weight(env: &Environment) -> Result<f64> {
    Ok(1.0 - los_weight(env)?)
}

/// Both angle-averaged weights, computed once per environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosWeights {
    pub los: f64,
    pub nlos: f64,
}

impl LosWeights {
    pub fn for_env(env: &Environment) -> Result<LosWeights> {
        let los = los_weight(env)?;
        Ok(LosWeights { los, nlos: 1.0 - los })
    }
}

/// Long-term average received power (fading excluded) at distance `d`,
/// the quantity RSSI association compares.
pub fn received_power_mean(link: &LinkBudget, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {d}")));
    }
    Ok(link.k * link.power_w * d.powf(-link.alpha))
}

/// Draw a unit-mean small-scale power gain for the link class.
pub fn sample_fading<R: Rng + ?Sized>(link: &LinkBudget, rng: &mut R) -> f64 {
    match link.fading {
        FadingKind::Rayleigh => Exp1.sample(rng),
        FadingKind::Nakagami(m) => {
            let m = f64::from(m);
            Gamma::new(m, 1.0 / m).expect("valid gamma shape").sample(rng)
        }
    }
}

/// SINR thresholds `(t_a, t_b)` implied by the rate requirements:
/// `t_a = 2^(N_u r_a / (beta B)) - 1`, `t_b = 2^(r_b / ((1-beta) B)) - 1`.
/// `beta = 0` starves the access link (`t_a = inf`), `beta = 1` starves
/// the xHaul (`t_b = inf`); both infinities are meaningful.
pub fn sinr_thresholds(svc: &ServiceParams, bandwidth_hz: f64) -> (f64, f64) {
    let t_a = if svc.beta > 0.0 {
        (LN_2 * f64::from(svc.n_users) * svc.rate_access_bps / (svc.beta * bandwidth_hz)).exp_m1()
    } else {
        f64::INFINITY
    };
    let t_b = if svc.beta < 1.0 {
        (LN_2 * svc.rate_xhaul_bps / ((1.0 - svc.beta) * bandwidth_hz)).exp_m1()
    } else {
        f64::INFINITY
    };
    (t_a, t_b)
}
