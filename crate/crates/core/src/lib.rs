//! Stochastic-geometry engine for cache-enabled UAV heterogeneous networks.
//!
//! The network model has three Poisson tiers: terrestrial base stations
//! (TBS, 2-D), cache-equipped UAV access points (UAV-AP, 3-D half-space)
//! and backhaul-connected UAV base stations (UAV-BS, 3-D half-space). A
//! ground user associates by strongest average received power to a TBS or
//! to the nearest LoS/NLoS UAV-AP; a serving UAV-AP in turn reaches the
//! core over a wireless xHaul link to a TBS or a UAV-BS. The total
//! bandwidth `B` is split `beta : (1 - beta)` between access and xHaul.
//!
//! The crate computes, both analytically (numerical quadrature of the
//! tier distance distributions, association probabilities and
//! interference Laplace functionals) and by Monte-Carlo simulation:
//!
//! * access and xHaul association probabilities ([`association`]),
//! * SINR and rate coverage ([`coverage`]),
//! * content-delivery success probability under probabilistic caching
//!   ([`content`]),
//! * the bandwidth partition `beta` that maximizes success
//!   ([`optimizer`]).
//!
//! [`montecarlo`] is the independent simulation oracle used to validate
//! every analytical quantity.

pub mod association;
pub mod channel;
pub mod config;
pub mod content;
pub mod coverage;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod optimizer;
pub mod params;
pub mod quadrature;

pub use error::{Error, Result};
pub use params::{Environment, FieldRadii, NetworkParams, ServiceParams};
