//! Sectioned key = value configuration files (TOML).
//!
//! Every key is optional; omitted keys fall back to the experimental
//! defaults of [`crate::params::paper_defaults`]. Units: densities
//! m^-2 (TBS) / m^-3 (UAV tiers), powers dBm, rates bit/s, bandwidth and
//! carrier Hz, distances m.

use crate::content::HitMode;
use crate::error::{Error, Result};
use crate::params::{
    dbm_to_watts, paper_defaults, watts_to_dbm, Environment, NetworkParams, NoiseModel,
    ServiceParams,
};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub lambda_m: Option<f64>,
    pub lambda_ua: Option<f64>,
    pub lambda_ub: Option<f64>,
    pub p_m_dbm: Option<f64>,
    pub p_ua_dbm: Option<f64>,
    pub p_ub_dbm: Option<f64>,
    pub alpha_l: Option<f64>,
    pub alpha_n: Option<f64>,
    pub carrier_hz: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    /// Fixed noise power in watts; omit for the thermal floor.
    pub noise_w: Option<f64>,
    pub nakagami_m: Option<u32>,
    /// One of suburban | urban | dense-urban | high-rise.
    pub environment: Option<String>,
    /// Custom blockage parameters; both must be given together and they
    /// override `environment`.
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    pub horizon_3d_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceSection {
    pub n_users: Option<u32>,
    pub rate_access_bps: Option<f64>,
    pub rate_xhaul_bps: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CacheSection {
    pub library_size: Option<usize>,
    pub cache_size: Option<usize>,
    /// MPC slots; omitted means cache_size / 2.
    pub mpc_size: Option<usize>,
    pub gamma: Option<f64>,
    /// "full-library" (default) or "cache-truncated".
    pub hit_mode: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub seed: Option<u64>,
    pub realizations: Option<u64>,
}

/// Raw file shape: four optional sections.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub network: NetworkSection,
    pub service: ServiceSection,
    pub cache: CacheSection,
    pub sim: SimSection,
}

impl FileConfig {
    pub fn from_path(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Caching inputs after resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheSpec {
    pub library_size: usize,
    pub cache_size: usize,
    pub mpc_size: Option<usize>,
    pub gamma: f64,
    pub mode: HitMode,
}

impl CacheSpec {
    pub fn resolved_mpc(&self) -> usize {
        self.mpc_size.map_or(self.cache_size / 2, |m| m.min(self.cache_size))
    }

    pub fn policy(&self) -> Result<crate::content::CachePolicy> {
        crate::content::CachePolicy::new(
            self.library_size,
            self.cache_size,
            self.resolved_mpc(),
            self.gamma,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimSettings {
    pub seed: u64,
    pub realizations: u64,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub network: NetworkParams,
    pub service: ServiceParams,
    pub cache: CacheSpec,
    pub sim: SimSettings,
}

impl Default for ResolvedConfig {
    fn default() -> Self {
        let (network, service) = paper_defaults();
        ResolvedConfig {
            network,
            service,
            cache: CacheSpec {
                library_size: 1000,
                cache_size: 600,
                mpc_size: None,
                gamma: 1.0,
                mode: HitMode::FullLibrary,
            },
            sim: SimSettings { seed: 1, realizations: 10_000 },
        }
    }
}

impl ResolvedConfig {
    pub fn apply_file(&mut self, f: &FileConfig) -> Result<()> {
        let n = &f.network;
        if let Some(v) = n.lambda_m {
            self.network.lambda_m = v;
        }
        if let Some(v) = n.lambda_ua {
            self.network.lambda_ua = v;
        }
        if let Some(v) = n.lambda_ub {
            self.network.lambda_ub = v;
        }
        if let Some(v) = n.p_m_dbm {
            self.network.p_m = dbm_to_watts(v);
        }
        if let Some(v) = n.p_ua_dbm {
            self.network.p_ua = dbm_to_watts(v);
        }
        if let Some(v) = n.p_ub_dbm {
            self.network.p_ub = dbm_to_watts(v);
        }
        if let Some(v) = n.alpha_l {
            self.network.alpha_l = v;
        }
        if let Some(v) = n.alpha_n {
            self.network.alpha_n = v;
        }
        if let Some(v) = n.carrier_hz {
            self.network.carrier_hz = v;
        }
        if let Some(v) = n.bandwidth_hz {
            self.network.bandwidth_hz = v;
        }
        if let Some(v) = n.noise_w {
            self.network.noise = NoiseModel::Fixed(v);
        }
        if let Some(v) = n.nakagami_m {
            self.network.nakagami_m = v;
        }
        if let Some(name) = &n.environment {
            self.network.env = Environment::from_str(name)?;
        }
        match (n.eta, n.mu) {
            (Some(eta), Some(mu)) => self.network.env = Environment::new(eta, mu, "custom"),
            (None, None) => {}
            _ => {
                return Err(Error::Config(
                    "custom blockage needs both eta and mu".into(),
                ))
            }
        }
        if let Some(v) = n.horizon_3d_m {
            self.network.horizon_3d_m = v;
        }

        let s = &f.service;
        if let Some(v) = s.n_users {
            self.service.n_users = v;
        }
        if let Some(v) = s.rate_access_bps {
            self.service.rate_access_bps = v;
        }
        if let Some(v) = s.rate_xhaul_bps {
            self.service.rate_xhaul_bps = v;
        }
        if let Some(v) = s.beta {
            self.service.beta = v;
        }

        let c = &f.cache;
        if let Some(v) = c.library_size {
            self.cache.library_size = v;
        }
        if let Some(v) = c.cache_size {
            self.cache.cache_size = v;
        }
        if c.mpc_size.is_some() {
            self.cache.mpc_size = c.mpc_size;
        }
        if let Some(v) = c.gamma {
            self.cache.gamma = v;
        }
        if let Some(mode) = &c.hit_mode {
            self.cache.mode = match mode.to_ascii_lowercase().as_str() {
                "full-library" | "full_library" | "full" => HitMode::FullLibrary,
                "cache-truncated" | "cache_truncated" | "truncated" => HitMode::CacheTruncated,
                other => {
                    return Err(Error::Config(format!(
                        "unknown hit_mode '{other}' (expected full-library|cache-truncated)"
                    )))
                }
            };
        }

        if let Some(v) = f.sim.seed {
            self.sim.seed = v;
        }
        if let Some(v) = f.sim.realizations {
            self.sim.realizations = v;
        }
        Ok(())
    }

    pub fn from_path(path: &Path) -> Result<ResolvedConfig> {
        let mut cfg = ResolvedConfig::default();
        cfg.apply_file(&FileConfig::from_path(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        self.service.validate()?;
        if self.cache.cache_size > self.cache.library_size {
            return Err(Error::Config(format!(
                "cache_size {} exceeds library_size {}",
                self.cache.cache_size, self.cache.library_size
            )));
        }
        Ok(())
    }

    /// The fully resolved state as a config file, for run manifests;
    /// loading this snapshot reproduces the run.
    pub fn to_toml_snapshot(&self) -> String {
        let file = FileConfig {
            network: NetworkSection {
                lambda_m: Some(self.network.lambda_m),
                lambda_ua: Some(self.network.lambda_ua),
                lambda_ub: Some(self.network.lambda_ub),
                p_m_dbm: Some(watts_to_dbm(self.network.p_m)),
                p_ua_dbm: Some(watts_to_dbm(self.network.p_ua)),
                p_ub_dbm: Some(watts_to_dbm(self.network.p_ub)),
                alpha_l: Some(self.network.alpha_l),
                alpha_n: Some(self.network.alpha_n),
                carrier_hz: Some(self.network.carrier_hz),
                bandwidth_hz: Some(self.network.bandwidth_hz),
                noise_w: match self.network.noise {
                    NoiseModel::Thermal => None,
                    NoiseModel::Fixed(w) => Some(w),
                },
                nakagami_m: Some(self.network.nakagami_m),
                environment: Some(self.network.env.name.clone()),
                eta: Some(self.network.env.eta),
                mu: Some(self.network.env.mu),
                horizon_3d_m: Some(self.network.horizon_3d_m),
            },
            service: ServiceSection {
                n_users: Some(self.service.n_users),
                rate_access_bps: Some(self.service.rate_access_bps),
                rate_xhaul_bps: Some(self.service.rate_xhaul_bps),
                beta: Some(self.service.beta),
            },
            cache: CacheSection {
                library_size: Some(self.cache.library_size),
                cache_size: Some(self.cache.cache_size),
                mpc_size: Some(self.cache.resolved_mpc()),
                gamma: Some(self.cache.gamma),
                hit_mode: Some(
                    match self.cache.mode {
                        HitMode::FullLibrary => "full-library",
                        HitMode::CacheTruncated => "cache-truncated",
                    }
                    .to_string(),
                ),
            },
            sim: SimSection {
                seed: Some(self.sim.seed),
                realizations: Some(self.sim.realizations),
            },
        };
        toml::to_string_pretty(&file).expect("config snapshot serializes")
    }
}
