//! Physical and deployment constants shared by every other module.
//!
//! All powers are stored in watts; dBm appears only at the configuration
//! boundary. Distances are meters, densities m^-2 (TBS tier) or m^-3
//! (UAV tiers), rates bit/s, bandwidth Hz.

use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Thermal noise spectral density at 290 K.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

/// ln(1e4): exponent at which a nearest-distance tail is considered
/// numerically exhausted (survival probability 1e-4).
const TAIL_LN: f64 = 9.210_340_371_976_184;

/// Blockage environment of the air-to-ground visibility model.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub eta: f64,
    pub mu: f64,
    pub name: String,
}

impl Environment {
    pub fn new(eta: f64, mu: f64, name: impl Into<String>) -> Self {
        Environment { eta, mu, name: name.into() }
    }

    pub fn suburban() -> Self {
        Environment::new(4.88, 0.43, "suburban")
    }

    pub fn urban() -> Self {
        Environment::new(9.61, 0.16, "urban")
    }

    pub fn dense_urban() -> Self {
        Environment::new(11.95, 0.136, "dense-urban")
    }

    pub fn high_rise() -> Self {
        Environment::new(24.23, 0.08, "high-rise")
    }

    pub fn presets() -> [Environment; 4] {
        [
            Environment::suburban(),
            Environment::urban(),
            Environment::dense_urban(),
            Environment::high_rise(),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta.is_finite()) || !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "environment parameters must be positive, got eta={}, mu={}",
                self.eta, self.mu
            )));
        }
        Ok(())
    }
}

impl FromStr for Environment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "suburban" => Ok(Environment::suburban()),
            "urban" => Ok(Environment::urban()),
            "dense-urban" | "dense_urban" | "dense" => Ok(Environment::dense_urban()),
            "high-rise" | "high_rise" | "highrise" | "high-rise-urban" => {
                Ok(Environment::high_rise())
            }
            other => Err(Error::Config(format!(
                "unknown environment '{other}' (expected suburban|urban|dense-urban|high-rise)"
            ))),
        }
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Receiver noise power model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Thermal floor (-174 dBm/Hz) over the full system bandwidth.
    Thermal,
    /// Fixed noise power in watts.
    Fixed(f64),
}

/// Deployment and channel constants of the three-tier network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    /// TBS density \[m^-2\].
    pub lambda_m: f64,
    /// UAV-AP density \[m^-3\].
    pub lambda_ua: f64,
    /// UAV-BS density \[m^-3\].
    pub lambda_ub: f64,
    /// TBS transmit power \[W\].
    pub p_m: f64,
    /// UAV-AP transmit power \[W\].
    pub p_ua: f64,
    /// UAV-BS transmit power \[W\].
    pub p_ub: f64,
    /// LoS path-loss exponent.
    pub alpha_l: f64,
    /// NLoS path-loss exponent.
    pub alpha_n: f64,
    /// Carrier frequency \[Hz\]; sets the path-loss coefficients.
    pub carrier_hz: f64,
    /// Total system bandwidth B \[Hz\].
    pub bandwidth_hz: f64,
    /// Noise power model.
    pub noise: NoiseModel,
    /// Nakagami shape for LoS access and UAV-BS xHaul fading.
    pub nakagami_m: u32,
    /// Blockage environment.
    pub env: Environment,
    /// Base radius of the 3-D interference field \[m\]. Interference from
    /// aerial tiers is accumulated out to this distance (or further, if
    /// the nearest-member distance distribution needs more room); the
    /// Monte-Carlo sampler uses the same radii, so analytics and
    /// simulation describe the same finite network.
    pub horizon_3d_m: f64,
}

impl NetworkParams {
    /// Path-loss coefficient (lambda_c / 4 pi)^2, identical for ground
    /// and aerial transmitters.
    pub fn k_u(&self) -> f64 {
        let wavelength = SPEED_OF_LIGHT_M_S / self.carrier_hz;
        (wavelength / (4.0 * PI)).powi(2)
    }

    pub fn k_m(&self) -> f64 {
        self.k_u()
    }

    /// Resolved noise power N0 \[W\].
    pub fn noise_w(&self) -> f64 {
        match self.noise {
            NoiseModel::Thermal => {
                dbm_to_watts(THERMAL_NOISE_DBM_PER_HZ) * self.bandwidth_hz
            }
            NoiseModel::Fixed(w) => w,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_m", self.lambda_m),
            ("lambda_ua", self.lambda_ua),
            ("lambda_ub", self.lambda_ub),
            ("p_m", self.p_m),
            ("p_ua", self.p_ua),
            ("p_ub", self.p_ub),
            ("carrier_hz", self.carrier_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("horizon_3d_m", self.horizon_3d_m),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        if !(self.alpha_l >= 2.0) {
            return Err(Error::InvalidParams(format!(
                "alpha_l must be >= 2, got {}",
                self.alpha_l
            )));
        }
        if !(self.alpha_n >= self.alpha_l) {
            return Err(Error::InvalidParams(format!(
                "alpha_n must be >= alpha_l, got alpha_n={} alpha_l={}",
                self.alpha_n, self.alpha_l
            )));
        }
        if self.nakagami_m < 1 {
            return Err(Error::InvalidParams("nakagami_m must be >= 1".into()));
        }
        if let NoiseModel::Fixed(w) = self.noise {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "fixed noise power must be positive, got {w}"
                )));
            }
        }
        self.env.validate()
    }
}

/// Per-user service requirements and the bandwidth partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceParams {
    /// Simultaneous users sharing the access band.
    pub n_users: u32,
    /// Access rate requirement r_a \[bit/s\].
    pub rate_access_bps: f64,
    /// xHaul rate requirement r_b \[bit/s\].
    pub rate_xhaul_bps: f64,
    /// Fraction of bandwidth allotted to the access link, in [0, 1].
    pub beta: f64,
}

impl ServiceParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_users < 1 {
            return Err(Error::InvalidParams("n_users must be >= 1".into()));
        }
        if !(self.rate_access_bps > 0.0) || !(self.rate_xhaul_bps > 0.0) {
            return Err(Error::InvalidParams("rate requirements must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidParams(format!(
                "beta must lie in [0, 1], got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    10f64.powf((p_dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(p_w: f64) -> f64 {
    10.0 * p_w.log10() + 30.0
}

/// The experimental configuration used throughout the evaluation:
/// P_UA = 27 dBm, P_UB = 33 dBm, P_M = 46 dBm, r_a = 1.1 Mb/s,
/// r_b = 80 Mb/s, alpha_L = 2, alpha_N = 4, B = 100 MHz,
/// lambda_M = 1e-6 m^-2, lambda_UA = 1e-5 m^-3, lambda_UB = 1e-7 m^-3,
/// urban blockage.
pub fn paper_defaults() -> (NetworkParams, ServiceParams) {
    let network = NetworkParams {
        lambda_m: 1e-6,
        lambda_ua: 1e-5,
        lambda_ub: 1e-7,
        p_m: dbm_to_watts(46.0),
        p_ua: dbm_to_watts(27.0),
        p_ub: dbm_to_watts(33.0),
        alpha_l: 2.0,
        alpha_n: 4.0,
        carrier_hz: 2e9,
        bandwidth_hz: 100e6,
        noise: NoiseModel::Thermal,
        nakagami_m: 2,
        env: Environment::urban(),
        horizon_3d_m: 130.0,
    };
    let service = ServiceParams {
        n_users: 1,
        rate_access_bps: 1.1e6,
        rate_xhaul_bps: 80e6,
        beta: 0.5,
    };
    (network, service)
}

/// Effective field radii: how far each tier's point process extends.
///
/// Every analytic interference integral stops at the tier radius and the
/// Monte-Carlo sampler draws nodes inside it, so the two sides model the
/// same network. Each radius is at least the base horizon and at least
/// the 1 - 1e-4 quantile of the tier's nearest-member distance, so
/// association statistics are unaffected by the truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRadii {
    /// TBS disk radius \[m\].
    pub tbs_m: f64,
    /// UAV-AP half-ball radius \[m\].
    pub uav_ap_m: f64,
    /// UAV-BS half-ball radius \[m\].
    pub uav_bs_m: f64,
}

impl FieldRadii {
    /// `wl`/`wn` are the angle-averaged LoS/NLoS weights of the current
    /// environment (see [`crate::channel::los_weight`]).
    pub fn for_network(p: &NetworkParams, wl: f64, wn: f64) -> FieldRadii {
        let tbs_m = if p.lambda_m > 0.0 {
            20.0 / (PI * p.lambda_m).sqrt()
        } else {
            0.0
        };
        let uav_ap_m = if p.lambda_ua > 0.0 {
            let w_min = wl.min(wn).max(1e-12);
            let tail = (1.5 * TAIL_LN / (PI * p.lambda_ua * w_min)).cbrt();
            p.horizon_3d_m.max(tail)
        } else {
            0.0
        };
        let uav_bs_m = if p.lambda_ub > 0.0 {
            let tail = (0.75 * TAIL_LN / (PI * p.lambda_ub)).cbrt();
            p.horizon_3d_m.max(tail)
        } else {
            0.0
        };
        FieldRadii { tbs_m, uav_ap_m, uav_bs_m }
    }
}
