//! SINR coverage probabilities of the access and xHaul links.
//!
//! Conditioned on the serving tier and distance, the coverage factorizes
//! into a noise term and one interference Laplace functional per
//! interfering field, each evaluated over the exclusion zone implied by
//! RSSI association. Rayleigh-served links use the exponential moment
//! generating function directly; Nakagami-served links go through the
//! normalized-gamma bound with eta = m (m!)^(-1/m), which turns the tail
//! into an alternating binomial sum.
//!
//! Every interference integral runs from its exclusion radius to the
//! tier's field radius (see [`FieldRadii`]); with a LoS exponent of 2 a
//! 3-D interference field carries unbounded power, so the field radius
//! is part of the model and the Monte-Carlo sampler uses the same one.

use crate::association::Association;
use crate::channel::{LosWeights, Tier};
use crate::error::{Error, Result};
use crate::geometry::{nearest_tbs_pdf_unchecked, nearest_uav_pdf_unchecked};
use crate::params::{FieldRadii, NetworkParams};
use crate::quadrature::{integrate, integrate_tail, QuadSpec};
use std::f64::consts::PI;

/// One coverage question: which tier serves, from where, at what
/// threshold. `serving_distance_m = None` asks for the deconditioned
/// probability (available for the TBS access tier).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageQuery {
    pub tier: Tier,
    pub serving_distance_m: Option<f64>,
    pub threshold: f64,
}

/// Coverage calculator for one parameter set.
#[derive(Debug, Clone)]
pub struct Coverage {
    p: NetworkParams,
    wl: f64,
    wn: f64,
    radii: FieldRadii,
    assoc: Association,
    /// Alzer factor m (m!)^(-1/m).
    eta: f64,
    noise_w: f64,
    spec: QuadSpec,
}

fn alzer_eta(m: u32) -> f64 {
    let mut factorial = 1.0f64;
    for k in 2..=m {
        factorial *= f64::from(k);
    }
    f64::from(m) * factorial.powf(-1.0 / f64::from(m))
}

fn binomial(m: u32, n: u32) -> f64 {
    let mut c = 1.0f64;
    for k in 0..n {
        c = c * f64::from(m - k) / f64::from(k + 1);
    }
    c
}

impl Coverage {
    pub fn new(p: &NetworkParams) -> Result<Self> {
        let w = LosWeights::for_env(&p.env)?;
        Ok(Self::with_weights(p, &w))
    }

    pub fn with_weights(p: &NetworkParams, w: &LosWeights) -> Self {
        Coverage {
            p: p.clone(),
            wl: w.los,
            wn: w.nlos,
            radii: FieldRadii::for_network(p, w.los, w.nlos),
            assoc: Association::with_weights(p, w),
            eta: alzer_eta(p.nakagami_m),
            noise_w: p.noise_w(),
            spec: QuadSpec::default(),
        }
    }

    pub fn radii(&self) -> FieldRadii {
        self.radii
    }

    pub fn association(&self) -> &Association {
        &self.assoc
    }

    // ------------------------------------------------------------------
    // Interference Laplace factors
    // ------------------------------------------------------------------

    /// exp(-2 pi lambda int_excl^rmax t s/(s + t^alpha) dt): ground field
    /// of Rayleigh interferers with Laplace argument s.
    fn li_2d_rayleigh(&self, lambda: f64, excl: f64, s: f64, alpha: f64) -> Result<f64> {
        let rmax = self.radii.tbs_m;
        if lambda <= 0.0 || excl >= rmax || s <= 0.0 {
            return Ok(1.0);
        }
        let v = integrate(|t| t * s / (s + t.powf(alpha)), excl, rmax, &self.spec)?;
        Ok((-2.0 * PI * lambda * v).exp())
    }

    /// Half-space shell field of Rayleigh interferers.
    fn li_3d_rayleigh(
        &self,
        lambda_thinned: f64,
        excl: f64,
        rmax: f64,
        s: f64,
        alpha: f64,
    ) -> Result<f64> {
        if lambda_thinned <= 0.0 || excl >= rmax || s <= 0.0 {
            return Ok(1.0);
        }
        let v = integrate(|x| x * x * s / (s + x.powf(alpha)), excl, rmax, &self.spec)?;
        Ok((-2.0 * PI * lambda_thinned * v).exp())
    }

    /// Half-space shell field of Nakagami-m interferers: the kernel
    /// complement 1 - (1 + s x^-alpha / m)^-m is evaluated through
    /// log1p/expm1 to survive the far tail.
    fn li_3d_nakagami(
        &self,
        lambda_thinned: f64,
        excl: f64,
        rmax: f64,
        s: f64,
        alpha: f64,
    ) -> Result<f64> {
        if lambda_thinned <= 0.0 || excl >= rmax || s <= 0.0 {
            return Ok(1.0);
        }
        let m = f64::from(self.p.nakagami_m);
        let v = integrate(
            |x| {
                let z = s / m * x.powf(-alpha);
                x * x * (-(-m * z.ln_1p()).exp_m1())
            },
            excl,
            rmax,
            &self.spec,
        )?;
        Ok((-2.0 * PI * lambda_thinned * v).exp())
    }

    fn threshold_shortcut(t: f64) -> Option<Result<f64>> {
        if t.is_nan() || t < 0.0 {
            return Some(Err(Error::Domain(format!(
                "SINR threshold must be nonnegative, got {t}"
            ))));
        }
        if t == 0.0 {
            return Some(Ok(1.0));
        }
        if t.is_infinite() {
            return Some(Ok(0.0));
        }
        None
    }

    // ------------------------------------------------------------------
    // Access link
    // ------------------------------------------------------------------

    /// Coverage of the typical user served by its nearest TBS,
    /// deconditioned over the serving distance.
    pub fn tbs_access(&self, t_a: f64) -> Result<f64> {
        if let Some(r) = Self::threshold_shortcut(t_a) {
            return r;
        }
        if self.p.lambda_m <= 0.0 {
            return Ok(0.0);
        }
        let scale = (PI * self.p.lambda_m).sqrt().recip();
        let ratio = self.p.p_ua / self.p.p_m;
        let inner_err = std::cell::Cell::new(None);
        let catch = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        };
        let v = integrate_tail(
            |q| {
                let qa = q.powf(self.p.alpha_n);
                let noise = (-t_a * self.noise_w * qa / (self.p.k_m() * self.p.p_m)).exp();
                let i_m = catch(self.li_2d_rayleigh(self.p.lambda_m, q, t_a * qa, self.p.alpha_n));
                let j_l = ratio.powf(1.0 / self.p.alpha_l) * q.powf(self.p.alpha_n / self.p.alpha_l);
                let i_l = catch(self.li_3d_nakagami(
                    self.p.lambda_ua * self.wl,
                    j_l,
                    self.radii.uav_ap_m,
                    self.eta * t_a * ratio * qa,
                    self.p.alpha_l,
                ));
                let j_nl = ratio.powf(1.0 / self.p.alpha_n) * q;
                let i_nl = catch(self.li_3d_rayleigh(
                    self.p.lambda_ua * self.wn,
                    j_nl,
                    self.radii.uav_ap_m,
                    t_a * ratio * qa,
                    self.p.alpha_n,
                ));
                nearest_tbs_pdf_unchecked(q, self.p.lambda_m) * noise * i_m * i_l * i_nl
            },
            0.0,
            scale,
            &self.spec,
        )?;
        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        Ok(v.clamp(0.0, 1.0))
    }

    /// Coverage given an NLoS UAV-AP serving from distance `d`.
    pub fn nlos_access_given(&self, d: f64, t_a: f64) -> Result<f64> {
        if let Some(r) = Self::threshold_shortcut(t_a) {
            return r;
        }
        if !(d > 0.0) {
            return Err(Error::Domain(format!("serving distance must be positive, got {d}")));
        }
        let p = &self.p;
        let inv_ratio = p.p_m / p.p_ua;
        let da = d.powf(p.alpha_n);
        let noise = (-t_a * self.noise_w * da / (p.k_u() * p.p_ua)).exp();
        let i_m = self.li_2d_rayleigh(
            p.lambda_m,
            inv_ratio.powf(1.0 / p.alpha_n) * d,
            t_a * inv_ratio * da,
            p.alpha_n,
        )?;
        // Exact gamma Laplace kernel: the serving link is Rayleigh, so no
        // normalized-gamma expansion factor enters the argument here.
        let i_l = self.li_3d_nakagami(
            p.lambda_ua * self.wl,
            d.powf(p.alpha_n / p.alpha_l),
            self.radii.uav_ap_m,
            t_a * da,
            p.alpha_l,
        )?;
        let i_nl = self.li_3d_rayleigh(
            p.lambda_ua * self.wn,
            d,
            self.radii.uav_ap_m,
            t_a * da,
            p.alpha_n,
        )?;
        Ok((noise * i_m * i_l * i_nl).clamp(0.0, 1.0))
    }

    /// Coverage given a LoS UAV-AP serving from distance `d`: the
    /// Nakagami serving gain enters through the alternating binomial
    /// expansion of the normalized-gamma bound.
    pub fn los_access_given(&self, d: f64, t_a: f64) -> Result<f64> {
        if let Some(r) = Self::threshold_shortcut(t_a) {
            return r;
        }
        if !(d > 0.0) {
            return Err(Error::Domain(format!("serving distance must be positive, got {d}")));
        }
        let p = &self.p;
        let inv_ratio = p.p_m / p.p_ua;
        let dl = d.powf(p.alpha_l);
        let boundary = d.powf(p.alpha_l / p.alpha_n);
        let mut total = 0.0;
        for n in 1..=p.nakagami_m {
            let ne = f64::from(n) * self.eta * t_a;
            let noise = (-ne * self.noise_w * dl / (p.k_u() * p.p_ua)).exp();
            let i_m = self.li_2d_rayleigh(
                p.lambda_m,
                inv_ratio.powf(1.0 / p.alpha_n) * boundary,
                ne * inv_ratio * dl,
                p.alpha_n,
            )?;
            let i_l = self.li_3d_nakagami(
                p.lambda_ua * self.wl,
                d,
                self.radii.uav_ap_m,
                ne * dl,
                p.alpha_l,
            )?;
            let i_nl = self.li_3d_rayleigh(
                p.lambda_ua * self.wn,
                boundary,
                self.radii.uav_ap_m,
                ne * dl,
                p.alpha_n,
            )?;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * binomial(p.nakagami_m, n) * noise * i_m * i_l * i_nl;
        }
        Ok(total.clamp(0.0, 1.0))
    }

    // ------------------------------------------------------------------
    // xHaul link
    // ------------------------------------------------------------------

    /// Coverage of a tagged UAV-AP served over the xHaul by a TBS at
    /// distance `d_mb`.
    pub fn tbs_xhaul_given(&self, d_mb: f64, t_b: f64) -> Result<f64> {
        if let Some(r) = Self::threshold_shortcut(t_b) {
            return r;
        }
        if !(d_mb > 0.0) {
            return Err(Error::Domain(format!("serving distance must be positive, got {d_mb}")));
        }
        let p = &self.p;
        let dl = d_mb.powf(p.alpha_l);
        let ratio = p.p_ub / p.p_m;
        let noise = (-t_b * self.noise_w * dl / (p.k_m() * p.p_m)).exp();
        let i_m = self.li_2d_rayleigh(p.lambda_m, d_mb, t_b * dl, p.alpha_l)?;
        let i_u = self.li_3d_nakagami(
            p.lambda_ub,
            ratio.powf(1.0 / p.alpha_l) * d_mb,
            self.radii.uav_bs_m,
            t_b * ratio * dl,
            p.alpha_l,
        )?;
        Ok((noise * i_m * i_u).clamp(0.0, 1.0))
    }

    /// Coverage of a tagged UAV-AP served over the xHaul by a UAV-BS at
    /// distance `d_ub`.
    pub fn uavbs_xhaul_given(&self, d_ub: f64, t_b: f64) -> Result<f64> {
        if let Some(r) = Self::threshold_shortcut(t_b) {
            return r;
        }
        if !(d_ub > 0.0) {
            return Err(Error::Domain(format!("serving distance must be positive, got {d_ub}")));
        }
        let p = &self.p;
        let dl = d_ub.powf(p.alpha_l);
        let inv_ratio = p.p_m / p.p_ub;
        let mut total = 0.0;
        for n in 1..=p.nakagami_m {
            let ne = f64::from(n) * self.eta * t_b;
            let noise = (-ne * self.noise_w * dl / (p.k_u() * p.p_ub)).exp();
            let i_m = self.li_2d_rayleigh(
                p.lambda_m,
                inv_ratio.powf(1.0 / p.alpha_l) * d_ub,
                ne * inv_ratio * dl,
                p.alpha_l,
            )?;
            let i_u = self.li_3d_nakagami(
                p.lambda_ub,
                d_ub,
                self.radii.uav_bs_m,
                ne * dl,
                p.alpha_l,
            )?;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * binomial(p.nakagami_m, n) * noise * i_m * i_u;
        }
        Ok(total.clamp(0.0, 1.0))
    }

    // ------------------------------------------------------------------
    // Association-weighted totals
    // ------------------------------------------------------------------

    /// Integral of `A(x) * P_C(x, t_a) * extra(x)` against the
    /// nearest-member laws of both UAV classes; the building block for
    /// rate coverage and the success events.
    pub(crate) fn weighted_uav_access<F, G>(
        &self,
        t_a: f64,
        extra_los: F,
        extra_nlos: G,
    ) -> Result<f64>
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        if self.p.lambda_ua <= 0.0 {
            return Ok(0.0);
        }
        let c_l = 2.0 / 3.0 * PI * self.p.lambda_ua * self.wl;
        let c_n = 2.0 / 3.0 * PI * self.p.lambda_ua * self.wn;
        let inner_err = std::cell::Cell::new(None);
        let catch = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        };
        let mut total = 0.0;
        if self.wl > 0.0 && c_l > 0.0 {
            total += integrate_tail(
                |x| {
                    let f = nearest_uav_pdf_unchecked(x, self.p.lambda_ua, self.wl);
                    if f <= 0.0 {
                        return 0.0;
                    }
                    let weight = self.assoc.los_uav_given_closed(x) * extra_los(x);
                    if weight <= 1e-300 {
                        return 0.0;
                    }
                    f * weight * catch(self.los_access_given(x, t_a))
                },
                0.0,
                c_l.cbrt().recip(),
                &self.spec,
            )?;
        }
        if self.wn > 0.0 && c_n > 0.0 {
            total += integrate_tail(
                |x| {
                    let f = nearest_uav_pdf_unchecked(x, self.p.lambda_ua, self.wn);
                    if f <= 0.0 {
                        return 0.0;
                    }
                    let weight = self.assoc.nlos_uav_given_closed(x) * extra_nlos(x);
                    if weight <= 1e-300 {
                        return 0.0;
                    }
                    f * weight * catch(self.nlos_access_given(x, t_a))
                },
                0.0,
                c_n.cbrt().recip(),
                &self.spec,
            )?;
        }
        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        Ok(total)
    }

    /// Total access coverage: association-weighted mixture of the three
    /// serving tiers.
    pub fn overall_access(&self, t_a: f64) -> Result<f64> {
        if let Some(r) = Self::threshold_shortcut(t_a) {
            return r;
        }
        let tbs_term = if self.p.lambda_m > 0.0 {
            self.assoc.tbs_closed()? * self.tbs_access(t_a)?
        } else {
            0.0
        };
        let uav_term = self.weighted_uav_access(t_a, |_| 1.0, |_| 1.0)?;
        Ok((tbs_term + uav_term).clamp(0.0, 1.0))
    }

    /// Dispatch a [`CoverageQuery`].
    pub fn query(&self, q: &CoverageQuery) -> Result<f64> {
        match (q.tier, q.serving_distance_m) {
            (Tier::TbsAccess, None) => self.tbs_access(q.threshold),
            (Tier::UavLosAccess, Some(d)) => self.los_access_given(d, q.threshold),
            (Tier::UavNlosAccess, Some(d)) => self.nlos_access_given(d, q.threshold),
            (Tier::TbsXhaul, Some(d)) => self.tbs_xhaul_given(d, q.threshold),
            (Tier::UavBsXhaul, Some(d)) => self.uavbs_xhaul_given(d, q.threshold),
            (tier, dist) => Err(Error::Domain(format!(
                "unsupported coverage query: tier {tier:?}, serving distance {dist:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{paper_defaults, NoiseModel};

    fn coverage() -> Coverage {
        let (net, _) = paper_defaults();
        Coverage::new(&net).unwrap()
    }

    #[test]
    fn zero_and_infinite_thresholds() {
        let c = coverage();
        assert_eq!(c.tbs_access(0.0).unwrap(), 1.0);
        assert_eq!(c.los_access_given(50.0, 0.0).unwrap(), 1.0);
        assert_eq!(c.uavbs_xhaul_given(100.0, f64::INFINITY).unwrap(), 0.0);
        assert_eq!(c.overall_access(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn tiny_threshold_approaches_one() {
        let c = coverage();
        assert!(c.los_access_given(40.0, 1e-9).unwrap() > 0.999);
        assert!(c.nlos_access_given(40.0, 1e-9).unwrap() > 0.999);
        assert!(c.tbs_access(1e-9).unwrap() > 0.999);
        assert!(c.tbs_xhaul_given(300.0, 1e-9).unwrap() > 0.999);
        assert!(c.uavbs_xhaul_given(100.0, 1e-9).unwrap() > 0.999);
    }

    #[test]
    fn coverage_monotone_in_threshold() {
        let c = coverage();
        let mut prev = f64::INFINITY;
        for i in -8..=8 {
            let t = 10f64.powf(i as f64 / 4.0);
            let v = c.overall_access(t).unwrap();
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev + 1e-9, "t={t}: {v} > {prev}");
            prev = v;
        }
    }

    #[test]
    fn conditional_coverage_decreases_with_distance() {
        let c = coverage();
        let t = 1.0;
        let mut prev = f64::INFINITY;
        for d in [20.0, 50.0, 100.0] {
            let v = c.nlos_access_given(d, t).unwrap();
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for d in [20.0, 50.0, 100.0] {
            let v = c.los_access_given(d, t).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn nakagami_one_reduces_to_rayleigh_form() {
        let (mut net, _) = paper_defaults();
        net.nakagami_m = 1;
        net.alpha_l = 4.0;
        net.alpha_n = 4.0;
        let c = Coverage::new(&net).unwrap();
        for d in [15.0, 45.0, 90.0] {
            for t in [0.1, 1.0, 4.0] {
                let los = c.los_access_given(d, t).unwrap();
                let nlos = c.nlos_access_given(d, t).unwrap();
                assert!(
                    (los - nlos).abs() < 1e-8,
                    "d={d} t={t}: los={los} nlos={nlos}"
                );
            }
        }
    }

    #[test]
    fn uavbs_m1_collapses_to_single_rayleigh_term() {
        let (mut net, _) = paper_defaults();
        net.nakagami_m = 1;
        let c = Coverage::new(&net).unwrap();
        let d = 120.0;
        let t = 0.8;
        let got = c.uavbs_xhaul_given(d, t).unwrap();
        // Independent composition of the single Rayleigh-style term.
        let dl = d.powf(net.alpha_l);
        let inv_ratio = net.p_m / net.p_ub;
        let noise = (-t * net.noise_w() * dl / (net.k_u() * net.p_ub)).exp();
        let i_m = c
            .li_2d_rayleigh(net.lambda_m, inv_ratio.powf(0.5) * d, t * inv_ratio * dl, 2.0)
            .unwrap();
        let i_u = c
            .li_3d_nakagami(net.lambda_ub, d, c.radii.uav_bs_m, t * dl, 2.0)
            .unwrap();
        assert!((got - noise * i_m * i_u).abs() < 1e-12);
    }

    #[test]
    fn more_aerial_interferers_reduce_xhaul_coverage() {
        let (net, _) = paper_defaults();
        let mut prev = f64::INFINITY;
        for lub in [1e-8, 1e-7, 1e-6] {
            let mut p = net.clone();
            p.lambda_ub = lub;
            let v = Coverage::new(&p).unwrap().tbs_xhaul_given(400.0, 1.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn single_tier_interference_limited_coverage_is_power_invariant() {
        let (mut net, _) = paper_defaults();
        net.lambda_m = 0.0;
        net.lambda_ub = 0.0;
        net.noise = NoiseModel::Fixed(1e-300);
        let base = Coverage::new(&net).unwrap().nlos_access_given(60.0, 0.7).unwrap();
        net.p_ua *= 250.0;
        let scaled = Coverage::new(&net).unwrap().nlos_access_given(60.0, 0.7).unwrap();
        assert!((base - scaled).abs() < 1e-6, "{base} vs {scaled}");
    }

    /// With the UAV tier removed the network degenerates to a classical
    /// single-tier cellular model: the overall coverage is exactly the
    /// TBS-served coverage.
    #[test]
    fn tbs_only_network_overall_equals_tbs_coverage() {
        let (mut net, _) = paper_defaults();
        net.lambda_ua = 0.0;
        let c = Coverage::new(&net).unwrap();
        let t = 0.5;
        let overall = c.overall_access(t).unwrap();
        let tbs = c.tbs_access(t).unwrap();
        assert!((overall - tbs).abs() < 1e-6, "{overall} vs {tbs}");
        assert!(overall > 0.0 && overall < 1.0);
    }

    #[test]
    fn query_dispatch() {
        let c = coverage();
        let v1 = c
            .query(&CoverageQuery {
                tier: Tier::UavLosAccess,
                serving_distance_m: Some(45.0),
                threshold: 0.5,
            })
            .unwrap();
        assert!((v1 - c.los_access_given(45.0, 0.5).unwrap()).abs() < 1e-15);
        assert!(c
            .query(&CoverageQuery {
                tier: Tier::UavLosAccess,
                serving_distance_m: None,
                threshold: 0.5
            })
            .is_err());
    }
}
