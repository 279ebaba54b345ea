//! Nearest-member distance distributions of the three tiers.
//!
//! Ground user to nearest TBS (2-D void probability), ground user to
//! nearest LoS/NLoS UAV-AP (3-D half-space, thinned by the angle-averaged
//! visibility weight) and, for the xHaul, tagged UAV-AP at height `h` to
//! the nearest TBS (disk of radius sqrt(x^2 - h^2)) and nearest UAV-BS
//! (full sphere below `h`, sphere minus ground cap above).

use crate::error::{Error, Result};
use std::f64::consts::PI;

#[inline]
fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("{name} must be nonnegative, got {x}")));
    }
    Ok(())
}

/// Density of the distance from the typical user to the closest TBS:
/// `f(x) = 2 pi lambda x exp(-pi lambda x^2)`.
pub fn nearest_tbs_pdf(x: f64, lambda_m: f64) -> Result<f64> {
    check_nonneg("distance", x)?;
    Ok(nearest_tbs_pdf_unchecked(x, lambda_m))
}

#[inline]
pub(crate) fn nearest_tbs_pdf_unchecked(x: f64, lambda_m: f64) -> f64 {
    2.0 * PI * lambda_m * x * (-PI * lambda_m * x * x).exp()
}

pub fn nearest_tbs_cdf(x: f64, lambda_m: f64) -> Result<f64> {
    check_nonneg("distance", x)?;
    Ok(-(-PI * lambda_m * x * x).exp_m1())
}

/// Density of the distance to the closest LoS (weight = W'_L) or NLoS
/// (weight = W'_N) UAV-AP on the upper half-space:
/// `f(x) = 2 pi lambda w x^2 exp(-(2/3) pi lambda w x^3)`.
pub fn nearest_uav_pdf(x: f64, lambda_ua: f64, weight: f64) -> Result<f64> {
    check_nonneg("distance", x)?;
    check_weight(weight)?;
    Ok(nearest_uav_pdf_unchecked(x, lambda_ua, weight))
}

#[inline]
pub(crate) fn nearest_uav_pdf_unchecked(x: f64, lambda_ua: f64, weight: f64) -> f64 {
    let c = 2.0 / 3.0 * PI * lambda_ua * weight;
    2.0 * PI * lambda_ua * weight * x * x * (-c * x * x * x).exp()
}

pub fn nearest_uav_cdf(x: f64, lambda_ua: f64, weight: f64) -> Result<f64> {
    check_nonneg("distance", x)?;
    check_weight(weight)?;
    let c = 2.0 / 3.0 * PI * lambda_ua * weight;
    Ok(-(-c * x * x * x).exp_m1())
}

fn check_weight(weight: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&weight) || weight.is_nan() {
        return Err(Error::Domain(format!(
            "visibility weight must lie in [0, 1], got {weight}"
        )));
    }
    Ok(())
}

/// Density of the distance from a UAV-AP at height `h` to the closest
/// TBS on the ground: `f(x|h) = 2 pi lambda x exp(-pi lambda (x^2 - h^2))`
/// for `x >= h`, zero below the height.
pub fn xhaul_tbs_pdf(x: f64, h: f64, lambda_m: f64) -> Result<f64> {
    check_nonneg("height", h)?;
    check_nonneg("distance", x)?;
    Ok(xhaul_tbs_pdf_unchecked(x, h, lambda_m))
}

#[inline]
pub(crate) fn xhaul_tbs_pdf_unchecked(x: f64, h: f64, lambda_m: f64) -> f64 {
    if x < h {
        return 0.0;
    }
    2.0 * PI * lambda_m * x * (-PI * lambda_m * (x * x - h * h)).exp()
}

pub fn xhaul_tbs_cdf(x: f64, h: f64, lambda_m: f64) -> Result<f64> {
    check_nonneg("height", h)?;
    check_nonneg("distance", x)?;
    if x < h {
        return Ok(0.0);
    }
    Ok(-(-PI * lambda_m * (x * x - h * h)).exp_m1())
}

/// Density of the distance from a UAV-AP at height `h` to the closest
/// UAV-BS. For `x <= h` the ball around the UAV-AP stays inside the
/// half-space (full-sphere law); above `h` a ground cap of height
/// `x - h` is cut away.
pub fn xhaul_uavbs_pdf(x: f64, h: f64, lambda_ub: f64) -> Result<f64> {
    check_nonneg("height", h)?;
    check_nonneg("distance", x)?;
    Ok(xhaul_uavbs_pdf_unchecked(x, h, lambda_ub))
}

#[inline]
pub(crate) fn xhaul_uavbs_pdf_unchecked(x: f64, h: f64, lambda_ub: f64) -> f64 {
    if x <= h {
        4.0 * PI * lambda_ub * x * x * (-lambda_ub * 4.0 / 3.0 * PI * x * x * x).exp()
    } else {
        let volume = 2.0 / 3.0 * PI * x * x * x + PI * x * x * h - PI / 3.0 * h * h * h;
        2.0 * PI * lambda_ub * (x * x + x * h) * (-lambda_ub * volume).exp()
    }
}

pub fn xhaul_uavbs_cdf(x: f64, h: f64, lambda_ub: f64) -> Result<f64> {
    check_nonneg("height", h)?;
    check_nonneg("distance", x)?;
    Ok(xhaul_uavbs_cdf_unchecked(x, h, lambda_ub))
}

#[inline]
pub(crate) fn xhaul_uavbs_cdf_unchecked(x: f64, h: f64, lambda_ub: f64) -> f64 {
    if x <= h {
        -(-lambda_ub * 4.0 / 3.0 * PI * x * x * x).exp_m1()
    } else {
        let volume = 2.0 / 3.0 * PI * x * x * x + PI * x * x * h - PI / 3.0 * h * h * h;
        -(-lambda_ub * volume).exp_m1()
    }
}
