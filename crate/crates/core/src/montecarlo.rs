//! Monte-Carlo oracle: finite-window realizations of the three point
//! processes with explicit fading, RSSI association and SINR evaluation.
//!
//! Each realization draws its nodes inside the same per-tier field radii
//! the analytic modules integrate over, so the two sides describe one
//! model. Realizations use counter-based substreams of a ChaCha stream
//! cipher: realization `i` always sees the same randomness regardless of
//! how work is scheduled across threads, and estimates reduce over a
//! realization-indexed vector, so results are bit-reproducible.

use crate::channel::{los_probability_unchecked, LosWeights};
use crate::content::CachePolicy;
use crate::error::{Error, Result};
use crate::params::{FieldRadii, NetworkParams, ServiceParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Bernoulli estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: u64,
}

impl SimEstimate {
    pub fn from_bernoulli(hits: u64, trials: u64) -> SimEstimate {
        if trials == 0 {
            return SimEstimate { mean: f64::NAN, std_err: f64::NAN, n: 0 };
        }
        let mean = hits as f64 / trials as f64;
        SimEstimate { mean, std_err: (mean * (1.0 - mean) / trials as f64).sqrt(), n: trials }
    }
}

/// One UAV-AP draw: position, distance from the origin user and its
/// visibility state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavNode {
    pub pos: [f64; 3],
    pub dist_m: f64,
    pub los: bool,
}

/// One sampled network: TBS positions on the ground disk, UAV-APs and
/// UAV-BSs in half-balls around the origin.
#[derive(Debug, Clone)]
pub struct NetworkRealization {
    pub tbs: Vec<[f64; 2]>,
    pub uav_ap: Vec<UavNode>,
    pub uav_bs: Vec<[f64; 3]>,
    pub radii: FieldRadii,
}

/// Deterministic substream for realization `index` of a seeded run.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as usize
}

/// Uniform point in the upper half-ball of the given radius, returned as
/// (distance, cos_theta, phi).
fn sample_half_ball<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> (f64, f64, f64) {
    let d = radius * rng.gen::<f64>().cbrt();
    let cos_theta = rng.gen::<f64>();
    let phi = rng.gen::<f64>() * 2.0 * PI;
    (d, cos_theta, phi)
}

/// Draw one realization of all three tiers.
pub fn sample_realization<R: Rng + ?Sized>(
    p: &NetworkParams,
    radii: &FieldRadii,
    rng: &mut R,
) -> NetworkRealization {
    let n_tbs = poisson_count(rng, p.lambda_m * PI * radii.tbs_m * radii.tbs_m);
    let mut tbs = Vec::with_capacity(n_tbs);
    for _ in 0..n_tbs {
        let r = radii.tbs_m * rng.gen::<f64>().sqrt();
        let phi = rng.gen::<f64>() * 2.0 * PI;
        tbs.push([r * phi.cos(), r * phi.sin()]);
    }

    let r_ua = radii.uav_ap_m;
    let n_ua = poisson_count(rng, p.lambda_ua * 2.0 / 3.0 * PI * r_ua * r_ua * r_ua);
    let mut uav_ap = Vec::with_capacity(n_ua);
    for _ in 0..n_ua {
        let (d, cos_theta, phi) = sample_half_ball(rng, r_ua);
        let theta = cos_theta.acos();
        let los = rng.gen::<f64>() < los_probability_unchecked(theta, &p.env);
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        uav_ap.push(UavNode {
            pos: [d * sin_theta * phi.cos(), d * sin_theta * phi.sin(), d * cos_theta],
            dist_m: d,
            los,
        });
    }

    let r_ub = radii.uav_bs_m;
    let n_ub = poisson_count(rng, p.lambda_ub * 2.0 / 3.0 * PI * r_ub * r_ub * r_ub);
    let mut uav_bs = Vec::with_capacity(n_ub);
    for _ in 0..n_ub {
        let (d, cos_theta, phi) = sample_half_ball(rng, r_ub);
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        uav_bs.push([d * sin_theta * phi.cos(), d * sin_theta * phi.sin(), d * cos_theta]);
    }

    NetworkRealization { tbs, uav_ap, uav_bs, radii: *radii }
}

// ----------------------------------------------------------------------
// Internal per-realization machinery
// ----------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AccessWinner {
    Tbs,
    LosUav,
    NlosUav,
}

/// Running aggregate of one interfering class: total received power, the
/// nearest member and the nearest member's own term.
#[derive(Debug, Clone, Copy)]
struct ClassAgg {
    min_dist: f64,
    min_term: f64,
    total: f64,
}

impl ClassAgg {
    fn new() -> Self {
        ClassAgg { min_dist: f64::INFINITY, min_term: 0.0, total: 0.0 }
    }

    #[inline]
    fn push(&mut self, dist: f64, term: f64) {
        self.total += term;
        if dist < self.min_dist {
            self.min_dist = dist;
            self.min_term = term;
        }
    }
}

struct Fields<'a> {
    p: &'a NetworkParams,
    radii: FieldRadii,
    gamma: Gamma<f64>,
}

struct AccessOutcome {
    winner: AccessWinner,
    sinr: f64,
    /// Serving UAV geometry (distance, cos_theta, phi) when a UAV won.
    serving_uav: Option<(f64, f64, f64)>,
    /// Ground positions of this realization's TBS field, reused by the
    /// xHaul stage.
    tbs_xy: Vec<[f64; 2]>,
}

impl<'a> Fields<'a> {
    fn new(p: &'a NetworkParams, radii: FieldRadii) -> Self {
        let m = f64::from(p.nakagami_m);
        Fields { p, radii, gamma: Gamma::new(m, 1.0 / m).expect("valid shape") }
    }

    /// Sample the access fields, resolve RSSI association and compute the
    /// access SINR of the typical user at the origin.
    fn access<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AccessOutcome> {
        let p = self.p;
        let k = p.k_u();

        let n_tbs = poisson_count(rng, p.lambda_m * PI * self.radii.tbs_m * self.radii.tbs_m);
        let mut tbs_xy = Vec::with_capacity(n_tbs);
        let mut tbs = ClassAgg::new();
        for _ in 0..n_tbs {
            let r = self.radii.tbs_m * rng.gen::<f64>().sqrt();
            let phi = rng.gen::<f64>() * 2.0 * PI;
            tbs_xy.push([r * phi.cos(), r * phi.sin()]);
            let g: f64 = Exp1.sample(rng);
            tbs.push(r, k * p.p_m * g * r.powf(-p.alpha_n));
        }

        let r_ua = self.radii.uav_ap_m;
        let n_ua = poisson_count(rng, p.lambda_ua * 2.0 / 3.0 * PI * r_ua * r_ua * r_ua);
        let mut los = ClassAgg::new();
        let mut nlos = ClassAgg::new();
        let mut los_geom = (0.0, 0.0);
        let mut nlos_geom = (0.0, 0.0);
        for _ in 0..n_ua {
            let (d, cos_theta, phi) = sample_half_ball(rng, r_ua);
            let theta = cos_theta.acos();
            if rng.gen::<f64>() < los_probability_unchecked(theta, &p.env) {
                let g = self.gamma.sample(rng);
                los.push(d, k * p.p_ua * g * d.powf(-p.alpha_l));
                if d == los.min_dist {
                    los_geom = (cos_theta, phi);
                }
            } else {
                let g: f64 = Exp1.sample(rng);
                nlos.push(d, k * p.p_ua * g * d.powf(-p.alpha_n));
                if d == nlos.min_dist {
                    nlos_geom = (cos_theta, phi);
                }
            }
        }

        // RSSI comparison uses long-term average power: fading excluded.
        let rssi_tbs = if tbs.min_dist.is_finite() {
            k * p.p_m * tbs.min_dist.powf(-p.alpha_n)
        } else {
            f64::NEG_INFINITY
        };
        let rssi_los = if los.min_dist.is_finite() {
            k * p.p_ua * los.min_dist.powf(-p.alpha_l)
        } else {
            f64::NEG_INFINITY
        };
        let rssi_nlos = if nlos.min_dist.is_finite() {
            k * p.p_ua * nlos.min_dist.powf(-p.alpha_n)
        } else {
            f64::NEG_INFINITY
        };
        if !rssi_tbs.is_finite() && !rssi_los.is_finite() && !rssi_nlos.is_finite() {
            return Err(Error::WindowTooSmall);
        }

        let winner = if rssi_tbs >= rssi_los && rssi_tbs >= rssi_nlos {
            AccessWinner::Tbs
        } else if rssi_los >= rssi_nlos {
            AccessWinner::LosUav
        } else {
            AccessWinner::NlosUav
        };

        let total = tbs.total + los.total + nlos.total;
        let (signal, serving_uav) = match winner {
            AccessWinner::Tbs => (tbs.min_term, None),
            AccessWinner::LosUav => {
                (los.min_term, Some((los.min_dist, los_geom.0, los_geom.1)))
            }
            AccessWinner::NlosUav => {
                (nlos.min_term, Some((nlos.min_dist, nlos_geom.0, nlos_geom.1)))
            }
        };
        let interference = (total - signal).max(0.0);
        let sinr = signal / (p.noise_w() + interference);
        Ok(AccessOutcome { winner, sinr, serving_uav, tbs_xy })
    }

    /// xHaul association and SINR of the tagged UAV-AP, given the access
    /// outcome's serving geometry and the realization's TBS field. The
    /// UAV-BS field is drawn in a ball around the tagged UAV-AP, clipped
    /// to the upper half-space.
    fn xhaul<R: Rng + ?Sized>(
        &self,
        serving: (f64, f64, f64),
        tbs_xy: &[[f64; 2]],
        rng: &mut R,
    ) -> (bool, f64) {
        let p = self.p;
        let k = p.k_u();
        let (d_a, cos_theta, phi) = serving;
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        let ap = [d_a * sin_theta * phi.cos(), d_a * sin_theta * phi.sin(), d_a * cos_theta];

        let mut tbs = ClassAgg::new();
        for xy in tbs_xy {
            let dx = xy[0] - ap[0];
            let dy = xy[1] - ap[1];
            let dist = (dx * dx + dy * dy + ap[2] * ap[2]).sqrt();
            let g: f64 = Exp1.sample(rng);
            tbs.push(dist, k * p.p_m * g * dist.powf(-p.alpha_l));
        }

        let r_ub = self.radii.uav_bs_m;
        let n_ub = poisson_count(rng, p.lambda_ub * 4.0 / 3.0 * PI * r_ub * r_ub * r_ub);
        let mut ub = ClassAgg::new();
        for _ in 0..n_ub {
            // Uniform in the full ball around the AP; keep the upper
            // half-space.
            let d = r_ub * rng.gen::<f64>().cbrt();
            let cos_t = 2.0 * rng.gen::<f64>() - 1.0;
            let _az = rng.gen::<f64>();
            let z = ap[2] + d * cos_t;
            if z <= 0.0 {
                continue;
            }
            let g = self.gamma.sample(rng);
            ub.push(d, k * p.p_ub * g * d.powf(-p.alpha_l));
        }

        let rssi_tbs = if tbs.min_dist.is_finite() {
            k * p.p_m * tbs.min_dist.powf(-p.alpha_l)
        } else {
            f64::NEG_INFINITY
        };
        let rssi_ub = if ub.min_dist.is_finite() {
            k * p.p_ub * ub.min_dist.powf(-p.alpha_l)
        } else {
            f64::NEG_INFINITY
        };
        if !rssi_tbs.is_finite() && !rssi_ub.is_finite() {
            return (false, 0.0);
        }
        let ub_serves = rssi_ub > rssi_tbs;
        let signal = if ub_serves { ub.min_term } else { tbs.min_term };
        let interference = (tbs.total + ub.total - signal).max(0.0);
        (ub_serves, signal / (p.noise_w() + interference))
    }
}

fn field_radii(p: &NetworkParams) -> Result<FieldRadii> {
    let w = LosWeights::for_env(&p.env)?;
    Ok(FieldRadii::for_network(p, w.los, w.nlos))
}

// ----------------------------------------------------------------------
// Estimators
// ----------------------------------------------------------------------

/// Access association estimated by tallying RSSI winners.
#[derive(Debug, Clone, Copy)]
pub struct AssociationEstimates {
    pub tbs: SimEstimate,
    pub los_uav: SimEstimate,
    pub nlos_uav: SimEstimate,
}

pub fn estimate_association(
    p: &NetworkParams,
    n_realizations: u64,
    seed: u64,
) -> Result<AssociationEstimates> {
    let radii = field_radii(p)?;
    let outcomes: Vec<Result<AccessWinner>> = (0..n_realizations)
        .into_par_iter()
        .map(|i| {
            let fields = Fields::new(p, radii);
            let mut rng = stream_rng(seed, i);
            Ok(fields.access(&mut rng)?.winner)
        })
        .collect();
    let mut counts = [0u64; 3];
    for o in outcomes {
        match o? {
            AccessWinner::Tbs => counts[0] += 1,
            AccessWinner::LosUav => counts[1] += 1,
            AccessWinner::NlosUav => counts[2] += 1,
        }
    }
    Ok(AssociationEstimates {
        tbs: SimEstimate::from_bernoulli(counts[0], n_realizations),
        los_uav: SimEstimate::from_bernoulli(counts[1], n_realizations),
        nlos_uav: SimEstimate::from_bernoulli(counts[2], n_realizations),
    })
}

/// Overall access coverage across a threshold grid, one field pass per
/// realization.
pub fn estimate_access_coverage_curve(
    p: &NetworkParams,
    thresholds: &[f64],
    n_realizations: u64,
    seed: u64,
) -> Result<Vec<SimEstimate>> {
    let radii = field_radii(p)?;
    let sinrs: Vec<Result<f64>> = (0..n_realizations)
        .into_par_iter()
        .map(|i| {
            let fields = Fields::new(p, radii);
            let mut rng = stream_rng(seed, i);
            Ok(fields.access(&mut rng)?.sinr)
        })
        .collect();
    let mut hits = vec![0u64; thresholds.len()];
    for s in sinrs {
        let s = s?;
        for (j, &t) in thresholds.iter().enumerate() {
            if s > t {
                hits[j] += 1;
            }
        }
    }
    Ok(hits
        .into_iter()
        .map(|h| SimEstimate::from_bernoulli(h, n_realizations))
        .collect())
}

/// Per-tier and overall coverage at one threshold pair.
#[derive(Debug, Clone, Copy)]
pub struct CoverageEstimates {
    pub overall_access: SimEstimate,
    pub tbs_access: SimEstimate,
    pub los_access: SimEstimate,
    pub nlos_access: SimEstimate,
    /// xHaul coverage conditioned on a UAV-AP having won the access
    /// link, split by the xHaul serving tier.
    pub xhaul_tbs: SimEstimate,
    pub xhaul_uavbs: SimEstimate,
    pub xhaul_overall: SimEstimate,
}

pub fn estimate_coverage(
    p: &NetworkParams,
    t_a: f64,
    t_b: f64,
    n_realizations: u64,
    seed: u64,
) -> Result<CoverageEstimates> {
    let radii = field_radii(p)?;
    struct One {
        winner: AccessWinner,
        access_ok: bool,
        xhaul: Option<(bool, bool)>,
    }
    let outcomes: Vec<Result<One>> = (0..n_realizations)
        .into_par_iter()
        .map(|i| {
            let fields = Fields::new(p, radii);
            let mut rng = stream_rng(seed, i);
            let access = fields.access(&mut rng)?;
            let xhaul = access.serving_uav.map(|serving| {
                let (ub_serves, sinr_x) = fields.xhaul(serving, &access.tbs_xy, &mut rng);
                (ub_serves, sinr_x > t_b)
            });
            Ok(One { winner: access.winner, access_ok: access.sinr > t_a, xhaul })
        })
        .collect();

    let (mut n_tbs, mut n_los, mut n_nlos) = (0u64, 0u64, 0u64);
    let (mut ok_all, mut ok_tbs, mut ok_los, mut ok_nlos) = (0u64, 0u64, 0u64, 0u64);
    let (mut n_xt, mut n_xu, mut ok_xt, mut ok_xu) = (0u64, 0u64, 0u64, 0u64);
    for o in outcomes {
        let o = o?;
        let ok = u64::from(o.access_ok);
        ok_all += ok;
        match o.winner {
            AccessWinner::Tbs => {
                n_tbs += 1;
                ok_tbs += ok;
            }
            AccessWinner::LosUav => {
                n_los += 1;
                ok_los += ok;
            }
            AccessWinner::NlosUav => {
                n_nlos += 1;
                ok_nlos += ok;
            }
        }
        if let Some((ub_serves, covered)) = o.xhaul {
            if ub_serves {
                n_xu += 1;
                ok_xu += u64::from(covered);
            } else {
                n_xt += 1;
                ok_xt += u64::from(covered);
            }
        }
    }
    Ok(CoverageEstimates {
        overall_access: SimEstimate::from_bernoulli(ok_all, n_realizations),
        tbs_access: SimEstimate::from_bernoulli(ok_tbs, n_tbs),
        los_access: SimEstimate::from_bernoulli(ok_los, n_los),
        nlos_access: SimEstimate::from_bernoulli(ok_nlos, n_nlos),
        xhaul_tbs: SimEstimate::from_bernoulli(ok_xt, n_xt),
        xhaul_uavbs: SimEstimate::from_bernoulli(ok_xu, n_xu),
        xhaul_overall: SimEstimate::from_bernoulli(ok_xt + ok_xu, n_xt + n_xu),
    })
}

/// End-to-end content delivery estimates.
#[derive(Debug, Clone, Copy)]
pub struct SuccessEstimates {
    pub p_st: SimEstimate,
    pub p_sa: SimEstimate,
    pub p_sx: SimEstimate,
    pub p_suc: SimEstimate,
}

pub fn estimate_success(
    p: &NetworkParams,
    svc: &ServiceParams,
    policy: &CachePolicy,
    n_realizations: u64,
    seed: u64,
) -> Result<SuccessEstimates> {
    svc.validate()?;
    let radii = field_radii(p)?;
    let (t_a, t_b) = crate::channel::sinr_thresholds(svc, p.bandwidth_hz);
    // Popularity CDF for request draws.
    let mut pop_cdf = Vec::with_capacity(policy.popularity.len());
    let mut acc = 0.0;
    for &a in &policy.popularity {
        acc += a;
        pop_cdf.push(acc);
    }

    #[derive(Clone, Copy)]
    enum EventOutcome {
        St(bool),
        Sa(bool),
        Sx(bool),
    }
    let outcomes: Vec<Result<EventOutcome>> = (0..n_realizations)
        .into_par_iter()
        .map(|i| {
            let fields = Fields::new(p, radii);
            let mut rng = stream_rng(seed, i);
            let access = fields.access(&mut rng)?;
            let access_ok = access.sinr > t_a;
            match access.serving_uav {
                None => Ok(EventOutcome::St(access_ok)),
                Some(serving) => {
                    let u: f64 = rng.gen();
                    let file = pop_cdf.partition_point(|&c| c < u).min(pop_cdf.len() - 1);
                    let cached = rng.gen::<f64>() < policy.placement[file];
                    if cached {
                        Ok(EventOutcome::Sa(access_ok))
                    } else if !access_ok || t_b.is_infinite() {
                        Ok(EventOutcome::Sx(false))
                    } else {
                        let (_, sinr_x) = fields.xhaul(serving, &access.tbs_xy, &mut rng);
                        Ok(EventOutcome::Sx(sinr_x > t_b))
                    }
                }
            }
        })
        .collect();

    let (mut st, mut sa, mut sx) = (0u64, 0u64, 0u64);
    for o in outcomes {
        match o? {
            EventOutcome::St(ok) => st += u64::from(ok),
            EventOutcome::Sa(ok) => sa += u64::from(ok),
            EventOutcome::Sx(ok) => sx += u64::from(ok),
        }
    }
    Ok(SuccessEstimates {
        p_st: SimEstimate::from_bernoulli(st, n_realizations),
        p_sa: SimEstimate::from_bernoulli(sa, n_realizations),
        p_sx: SimEstimate::from_bernoulli(sx, n_realizations),
        p_suc: SimEstimate::from_bernoulli(st + sa + sx, n_realizations),
    })
}

/// Which nearest-member distance to sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceKind {
    /// User to nearest TBS.
    TbsAccess,
    /// User to nearest LoS UAV-AP.
    LosUav,
    /// User to nearest NLoS UAV-AP.
    NlosUav,
    /// UAV-AP at the given height to the nearest TBS.
    XhaulTbs { height_m: f64 },
    /// UAV-AP at the given height to the nearest UAV-BS.
    XhaulUavBs { height_m: f64 },
}

/// Empirical nearest-member distances; realizations with an empty
/// candidate set are skipped (the window radii make them rarer than
/// 1e-4).
pub fn sample_nearest_distances(
    p: &NetworkParams,
    kind: DistanceKind,
    n_realizations: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let radii = field_radii(p)?;
    let samples: Vec<Option<f64>> = (0..n_realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            match kind {
                DistanceKind::TbsAccess => {
                    let n = poisson_count(&mut rng, p.lambda_m * PI * radii.tbs_m * radii.tbs_m);
                    let mut best = f64::INFINITY;
                    for _ in 0..n {
                        let r = radii.tbs_m * rng.gen::<f64>().sqrt();
                        let _phi: f64 = rng.gen();
                        best = best.min(r);
                    }
                    best.is_finite().then_some(best)
                }
                DistanceKind::LosUav | DistanceKind::NlosUav => {
                    let want_los = matches!(kind, DistanceKind::LosUav);
                    let r_ua = radii.uav_ap_m;
                    let n =
                        poisson_count(&mut rng, p.lambda_ua * 2.0 / 3.0 * PI * r_ua * r_ua * r_ua);
                    let mut best = f64::INFINITY;
                    for _ in 0..n {
                        let (d, cos_theta, _phi) = sample_half_ball(&mut rng, r_ua);
                        let los = rng.gen::<f64>()
                            < los_probability_unchecked(cos_theta.acos(), &p.env);
                        if los == want_los {
                            best = best.min(d);
                        }
                    }
                    best.is_finite().then_some(best)
                }
                DistanceKind::XhaulTbs { height_m } => {
                    let n = poisson_count(&mut rng, p.lambda_m * PI * radii.tbs_m * radii.tbs_m);
                    let mut best = f64::INFINITY;
                    for _ in 0..n {
                        let r = radii.tbs_m * rng.gen::<f64>().sqrt();
                        best = best.min((r * r + height_m * height_m).sqrt());
                    }
                    best.is_finite().then_some(best)
                }
                DistanceKind::XhaulUavBs { height_m } => {
                    let r_ub = radii.uav_bs_m;
                    let n =
                        poisson_count(&mut rng, p.lambda_ub * 4.0 / 3.0 * PI * r_ub * r_ub * r_ub);
                    let mut best = f64::INFINITY;
                    for _ in 0..n {
                        let d = r_ub * rng.gen::<f64>().cbrt();
                        let cos_t = 2.0 * rng.gen::<f64>() - 1.0;
                        let _az: f64 = rng.gen();
                        if height_m + d * cos_t > 0.0 {
                            best = best.min(d);
                        }
                    }
                    best.is_finite().then_some(best)
                }
            }
        })
        .collect();
    Ok(samples.into_iter().flatten().collect())
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against a
/// continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut ks: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let c = cdf(x);
        ks = ks.max((c - i as f64 / n).abs());
        ks = ks.max((c - (i as f64 + 1.0) / n).abs());
    }
    ks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::association::Association;
    use crate::geometry;
    use crate::params::paper_defaults;

    #[test]
    fn poisson_counts_match_window_measures() {
        let (net, _) = paper_defaults();
        let radii = FieldRadii { tbs_m: 5000.0, uav_ap_m: 500.0, uav_bs_m: 300.0 };
        let n = 10_000;
        let (mut tbs_total, mut ua_total) = (0f64, 0f64);
        for i in 0..n {
            let mut rng = stream_rng(41, i);
            let r = sample_realization(&net, &radii, &mut rng);
            tbs_total += r.tbs.len() as f64;
            ua_total += r.uav_ap.len() as f64;
        }
        let tbs_mean = tbs_total / n as f64;
        let ua_mean = ua_total / n as f64;
        assert!((tbs_mean - PI * 25e6 * 1e-6).abs() < 1.0, "TBS mean {tbs_mean}");
        assert!(
            (ua_mean - 2.0 / 3.0 * PI * 1.25e8 * 1e-5).abs() < 20.0,
            "UAV mean {ua_mean}"
        );
    }

    /// Chi-square goodness of fit of the sampled TBS counts against the
    /// Poisson law at 1% significance.
    #[test]
    fn poisson_counts_pass_chi_square() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        use statrs::function::gamma::ln_gamma;

        let (net, _) = paper_defaults();
        let radii = FieldRadii { tbs_m: 5000.0, uav_ap_m: 100.0, uav_bs_m: 0.0 };
        let mean = net.lambda_m * PI * radii.tbs_m * radii.tbs_m;
        let n = 10_000usize;
        let mut counts = std::collections::HashMap::new();
        for i in 0..n {
            let mut rng = stream_rng(12021, i as u64);
            let r = sample_realization(&net, &radii, &mut rng);
            *counts.entry(r.tbs.len()).or_insert(0usize) += 1;
        }
        let pmf = |k: usize| {
            (k as f64 * mean.ln() - mean - ln_gamma(k as f64 + 1.0)).exp()
        };
        // Individual bins where the expectation clears 5, pooled tails.
        let lo = (mean - 4.0 * mean.sqrt()).floor() as usize;
        let hi = (mean + 4.0 * mean.sqrt()).ceil() as usize;
        let mut chi2 = 0.0;
        let mut bins = 0usize;
        let mut tail_obs = 0.0;
        let mut tail_exp = 0.0;
        for (&k, &c) in &counts {
            if k < lo || k > hi {
                tail_obs += c as f64;
            }
        }
        for k in 0..lo {
            tail_exp += n as f64 * pmf(k);
        }
        tail_exp += n as f64 * (1.0 - (0..=hi).map(pmf).sum::<f64>());
        for k in lo..=hi {
            let expected = n as f64 * pmf(k);
            let observed = *counts.get(&k).unwrap_or(&0) as f64;
            chi2 += (observed - expected).powi(2) / expected;
            bins += 1;
        }
        if tail_exp > 0.0 {
            chi2 += (tail_obs - tail_exp).powi(2) / tail_exp;
            bins += 1;
        }
        let critical = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.99);
        assert!(chi2 < critical, "chi2 = {chi2:.1} vs critical {critical:.1} ({bins} bins)");
    }

    #[test]
    fn zero_density_tier_is_always_empty() {
        let (mut net, _) = paper_defaults();
        net.lambda_ub = 0.0;
        let radii = FieldRadii { tbs_m: 2000.0, uav_ap_m: 200.0, uav_bs_m: 0.0 };
        for i in 0..50 {
            let mut rng = stream_rng(3, i);
            assert!(sample_realization(&net, &radii, &mut rng).uav_bs.is_empty());
        }
    }

    #[test]
    fn association_estimates_sum_to_one_and_match_analytics() {
        let (net, _) = paper_defaults();
        let est = estimate_association(&net, 20_000, 17).unwrap();
        let total = est.tbs.mean + est.los_uav.mean + est.nlos_uav.mean;
        assert!((total - 1.0).abs() < 1e-12, "tally must be exhaustive");
        let analytic = Association::new(&net).unwrap().report().unwrap();
        assert!((est.tbs.mean - analytic.a_ma).abs() < 0.01);
        assert!((est.los_uav.mean - analytic.a_ual_bar).abs() < 0.01);
        assert!((est.nlos_uav.mean - analytic.a_uan_bar).abs() < 0.01);
    }

    #[test]
    fn empty_candidate_union_is_an_error() {
        let (mut net, _) = paper_defaults();
        net.lambda_m = 0.0;
        net.lambda_ua = 0.0;
        net.lambda_ub = 0.0;
        match estimate_association(&net, 10, 1) {
            Err(Error::WindowTooSmall) => {}
            other => panic!("expected WindowTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn no_uavs_means_tbs_always_wins() {
        let (mut net, _) = paper_defaults();
        net.lambda_ua = 0.0;
        let est = estimate_association(&net, 200, 5).unwrap();
        assert_eq!(est.tbs.mean, 1.0);
    }

    #[test]
    fn fixed_seed_is_bit_reproducible() {
        let (net, svc) = paper_defaults();
        let policy = CachePolicy::new(1000, 600, 300, 1.0).unwrap();
        let a = estimate_success(&net, &svc, &policy, 2_000, 99).unwrap();
        let b = estimate_success(&net, &svc, &policy, 2_000, 99).unwrap();
        assert_eq!(a.p_suc.mean.to_bits(), b.p_suc.mean.to_bits());
        // Thread count must not matter.
        let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
        let c = pool.install(|| estimate_success(&net, &svc, &policy, 2_000, 99)).unwrap();
        assert_eq!(a.p_suc.mean.to_bits(), c.p_suc.mean.to_bits());
    }

    #[test]
    fn nearest_distance_samples_match_analytic_cdfs() {
        let (net, _) = paper_defaults();
        let n = 10_000;
        let mut d = sample_nearest_distances(&net, DistanceKind::TbsAccess, n, 7).unwrap();
        let ks = ks_statistic(&mut d, |x| geometry::nearest_tbs_cdf(x, net.lambda_m).unwrap());
        assert!(ks < 0.02, "TBS K-S {ks}");

        let mut d =
            sample_nearest_distances(&net, DistanceKind::XhaulUavBs { height_m: 100.0 }, n, 8)
                .unwrap();
        let ks =
            ks_statistic(&mut d, |x| geometry::xhaul_uavbs_cdf(x, 100.0, net.lambda_ub).unwrap());
        assert!(ks < 0.02, "UAV-BS K-S {ks}");
    }

    #[test]
    fn coverage_estimates_are_probabilities_and_fall_with_threshold() {
        let (net, _) = paper_defaults();
        let lo = estimate_coverage(&net, 0.1, 1.0, 4_000, 23).unwrap();
        let hi = estimate_coverage(&net, 1.0, 1.0, 4_000, 23).unwrap();
        assert!(lo.overall_access.mean >= hi.overall_access.mean);
        assert!(lo.overall_access.mean <= 1.0 && hi.overall_access.mean >= 0.0);
    }

    #[test]
    fn success_estimator_respects_event_structure() {
        let (net, mut svc) = paper_defaults();
        svc.n_users = 5;
        // Full cache: S_x never fires.
        let full = CachePolicy::new(1000, 1000, 500, 1.0).unwrap();
        let est = estimate_success(&net, &svc, &full, 3_000, 31).unwrap();
        assert_eq!(est.p_sx.mean, 0.0);
        // Empty cache with beta = 1: misses cannot be bridged.
        let empty = CachePolicy::new(1000, 0, 0, 1.0).unwrap();
        let mut starved = svc.clone();
        starved.beta = 1.0;
        let est = estimate_success(&net, &starved, &empty, 3_000, 31).unwrap();
        assert_eq!(est.p_sa.mean, 0.0);
        assert_eq!(est.p_sx.mean, 0.0);
    }

    #[test]
    fn window_doubling_leaves_association_within_noise() {
        let (net, _) = paper_defaults();
        // Estimates under the default radii.
        let base = estimate_association(&net, 20_000, 77).unwrap();
        let mut wide = net.clone();
        wide.horizon_3d_m *= 2.0;
        let doubled = estimate_association(&wide, 20_000, 78).unwrap();
        let se = (base.los_uav.std_err.powi(2) + doubled.los_uav.std_err.powi(2)).sqrt();
        assert!(
            (base.los_uav.mean - doubled.los_uav.mean).abs() <= se.max(1e-3),
            "LoS shift {} vs SE {se}",
            (base.los_uav.mean - doubled.los_uav.mean).abs()
        );
    }
}
