//! Content caching, rate coverage and the delivery success probability.
//!
//! Requests follow a Zipf popularity law over a library of `L` unit-size
//! files. Each UAV-AP stores the `C0` most popular files outright and
//! fills its remaining `C - C0` slots probabilistically in proportion to
//! popularity. Delivery succeeds through one of three disjoint events:
//! direct TBS service (S_t), a cache hit at a covered UAV-AP (S_a), or a
//! cache miss bridged by a covered xHaul link (S_x).

use crate::association::Association;
use crate::channel::{sinr_thresholds, LosWeights};
use crate::coverage::Coverage;
use crate::error::{Error, Result};
use crate::geometry::{xhaul_tbs_pdf_unchecked, xhaul_uavbs_pdf_unchecked};
use crate::params::{FieldRadii, NetworkParams, ServiceParams};
use crate::quadrature::{integrate, integrate_tail, QuadSpec};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

/// Zipf popularity vector `a_i = i^-gamma / sum_j j^-gamma`.
pub fn zipf_popularity(library_size: usize, gamma: f64) -> Result<Vec<f64>> {
    if library_size == 0 {
        return Err(Error::InvalidCache("library size must be >= 1".into()));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidCache(format!("gamma must be >= 0, got {gamma}")));
    }
    let mut a: Vec<f64> = (1..=library_size)
        .map(|i| (i as f64).powf(-gamma))
        .collect();
    let norm: f64 = a.iter().sum();
    for v in &mut a {
        *v /= norm;
    }
    Ok(a)
}

/// Placement probabilities: the MPC prefix is cached outright, the rest
/// of the capacity spreads over the remaining files in proportion to
/// popularity (clipped at one).
pub fn cache_placement(popularity: &[f64], cache_size: usize, mpc_size: usize) -> Result<Vec<f64>> {
    let l = popularity.len();
    if cache_size > l {
        return Err(Error::InvalidCache(format!(
            "cache size {cache_size} exceeds library size {l}"
        )));
    }
    if mpc_size > cache_size {
        return Err(Error::InvalidCache(format!(
            "MPC size {mpc_size} exceeds cache size {cache_size}"
        )));
    }
    let mut b = vec![0.0; l];
    if cache_size == 0 {
        return Ok(b);
    }
    if cache_size == l {
        b.fill(1.0);
        return Ok(b);
    }
    for v in b.iter_mut().take(mpc_size) {
        *v = 1.0;
    }
    let mpc_mass: f64 = popularity.iter().take(mpc_size).sum();
    let denom = 1.0 - mpc_mass;
    if denom <= 0.0 {
        // The prefix already absorbs all request mass (possible when the
        // tail popularities underflow); leave the rest uncached.
        return Ok(b);
    }
    let spread = (cache_size - mpc_size) as f64 / denom;
    for i in mpc_size..l {
        b[i] = (popularity[i] * spread).min(1.0);
    }
    Ok(b)
}

/// Which range the hit/miss sums run over. Truncating the sums at the
/// cache-size index leaves hit + miss short of one whenever placement
/// extends past it; the full-library sum keeps a proper probability
/// split and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitMode {
    FullLibrary,
    CacheTruncated,
}

/// Popularity, placement, and sizes of the caching scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct CachePolicy {
    pub library_size: usize,
    pub cache_size: usize,
    pub mpc_size: usize,
    pub gamma: f64,
    pub popularity: Vec<f64>,
    pub placement: Vec<f64>,
}

impl CachePolicy {
    pub fn new(library_size: usize, cache_size: usize, mpc_size: usize, gamma: f64) -> Result<Self> {
        let popularity = zipf_popularity(library_size, gamma)?;
        let placement = cache_placement(&popularity, cache_size, mpc_size)?;
        Ok(CachePolicy { library_size, cache_size, mpc_size, gamma, popularity, placement })
    }

    /// Placement capacity actually used.
    pub fn placement_mass(&self) -> f64 {
        self.placement.iter().sum()
    }
}

/// Cache hit and miss probabilities under the chosen summation mode;
/// `p_miss = 1 - p_hit` in either mode.
pub fn hit_probability(policy: &CachePolicy, mode: HitMode) -> (f64, f64) {
    let range = match mode {
        HitMode::FullLibrary => policy.library_size,
        HitMode::CacheTruncated => policy.cache_size,
    };
    let p_hit: f64 = policy
        .popularity
        .iter()
        .zip(&policy.placement)
        .take(range)
        .map(|(a, b)| a * b)
        .sum();
    let p_hit = p_hit.clamp(0.0, 1.0);
    (p_hit, 1.0 - p_hit)
}

/// The three disjoint delivery events and their total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessBreakdown {
    pub p_st: f64,
    pub p_sa: f64,
    pub p_sx: f64,
    pub p_suc: f64,
}

/// Linear-interpolation grid for the total xHaul coverage B_l(h), which
/// depends on the tagged UAV-AP geometry only through its height.
#[derive(Debug, Clone)]
struct BlGrid {
    h_step: f64,
    values: Vec<f64>,
}

impl BlGrid {
    fn eval(&self, h: f64) -> f64 {
        let pos = (h / self.h_step).max(0.0);
        let idx = pos.floor() as usize;
        if idx + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let frac = pos - idx as f64;
        self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
    }
}

/// Success-probability evaluator with per-threshold caching, so cache
/// and partition sweeps do not recompute identical coverage integrals.
#[derive(Debug)]
pub struct SuccessModel {
    p: NetworkParams,
    cov: Coverage,
    assoc: Association,
    radii: FieldRadii,
    spec: QuadSpec,
    /// t_a bits -> (P(S_t), access integral over both UAV classes).
    access_cache: RefCell<HashMap<u64, (f64, f64)>>,
    /// (t_a, t_b) bits -> raw S_x integral (before the miss factor).
    xhaul_cache: RefCell<HashMap<(u64, u64), f64>>,
    /// t_b bits -> B_l(h) grid.
    bl_cache: RefCell<HashMap<u64, BlGrid>>,
}

impl SuccessModel {
    pub fn new(p: &NetworkParams) -> Result<Self> {
        let w = LosWeights::for_env(&p.env)?;
        Ok(SuccessModel {
            p: p.clone(),
            cov: Coverage::with_weights(p, &w),
            assoc: Association::with_weights(p, &w),
            radii: FieldRadii::for_network(p, w.los, w.nlos),
            spec: QuadSpec::default(),
            access_cache: RefCell::new(HashMap::new()),
            xhaul_cache: RefCell::new(HashMap::new()),
            bl_cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &NetworkParams {
        &self.p
    }

    pub fn coverage(&self) -> &Coverage {
        &self.cov
    }

    /// Rate coverage P(R >= r0): the rate threshold maps through the
    /// SINR CCDF of the access link.
    pub fn rate_coverage(&self, r0_bps: f64, svc: &ServiceParams) -> Result<f64> {
        if !(r0_bps >= 0.0) {
            return Err(Error::Domain(format!("rate threshold must be >= 0, got {r0_bps}")));
        }
        if svc.beta <= 0.0 {
            return Ok(0.0);
        }
        let t = (LN_2 * f64::from(svc.n_users) * r0_bps / (svc.beta * self.p.bandwidth_hz)).exp_m1();
        self.cov.overall_access(t)
    }

    /// Total xHaul coverage of a tagged UAV-AP at height `h`: the xHaul
    /// association split times the conditional coverage of each branch,
    /// deconditioned over the serving-distance laws.
    fn bl_at(&self, h: f64, t_b: f64) -> Result<f64> {
        let p = &self.p;
        let xa = self.assoc.xhaul_given_height(h)?;
        let inner_err = std::cell::Cell::new(None);
        let catch = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        };
        let mut total = 0.0;
        if xa.a_ub > 1e-12 && p.lambda_ub > 0.0 {
            let scale = (4.0 / 3.0 * PI * p.lambda_ub).cbrt().recip();
            let e_ub = integrate_tail(
                |y| {
                    let f = xhaul_uavbs_pdf_unchecked(y, h, p.lambda_ub);
                    if f <= 0.0 {
                        return 0.0;
                    }
                    f * catch(self.cov.uavbs_xhaul_given(y, t_b))
                },
                0.0,
                scale,
                &self.spec,
            )?;
            total += xa.a_ub * e_ub;
        }
        if xa.a_mb > 1e-12 && p.lambda_m > 0.0 {
            let scale = (PI * p.lambda_m).sqrt().recip();
            let e_mb = integrate_tail(
                |y| {
                    let f = xhaul_tbs_pdf_unchecked(y, h, p.lambda_m);
                    if f <= 0.0 {
                        return 0.0;
                    }
                    f * catch(self.cov.tbs_xhaul_given(y, t_b))
                },
                h,
                scale,
                &self.spec,
            )?;
            total += xa.a_mb * e_mb;
        }
        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        Ok(total.clamp(0.0, 1.0))
    }

    fn bl_grid(&self, t_b: f64) -> Result<()> {
        let key = t_b.to_bits();
        if self.bl_cache.borrow().contains_key(&key) {
            return Ok(());
        }
        // Heights range over the serving-distance support of the UAV-AP
        // field; 128 nodes keep the interpolation error orders below the
        // Monte-Carlo comparison tolerances.
        let n = 128usize;
        let h_max = self.radii.uav_ap_m.max(1.0);
        let h_step = h_max / (n - 1) as f64;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let h = (i as f64 * h_step).max(0.05);
            values.push(self.bl_at(h, t_b)?);
        }
        self.bl_cache.borrow_mut().insert(key, BlGrid { h_step, values });
        Ok(())
    }

    fn access_terms(&self, t_a: f64) -> Result<(f64, f64)> {
        let key = t_a.to_bits();
        if let Some(&hit) = self.access_cache.borrow().get(&key) {
            return Ok(hit);
        }
        let st = if self.p.lambda_m > 0.0 {
            self.assoc.tbs_closed()? * self.cov.tbs_access(t_a)?
        } else {
            0.0
        };
        let ga = self.cov.weighted_uav_access(t_a, |_| 1.0, |_| 1.0)?;
        self.access_cache.borrow_mut().insert(key, (st, ga));
        Ok((st, ga))
    }

    fn xhaul_term(&self, t_a: f64, t_b: f64) -> Result<f64> {
        let key = (t_a.to_bits(), t_b.to_bits());
        if let Some(&hit) = self.xhaul_cache.borrow().get(&key) {
            return Ok(hit);
        }
        self.bl_grid(t_b)?;
        let cache = self.bl_cache.borrow();
        let grid = cache.get(&t_b.to_bits()).expect("grid just built");
        // Orientation average of B_l(x cos theta) with density 1/pi over
        // [-pi/2, pi/2], folded by symmetry.
        let bhat = |x: f64| -> f64 {
            integrate(|theta| grid.eval(x * theta.cos()), 0.0, FRAC_PI_2, &self.spec)
                .map(|v| v * 2.0 / PI)
                .unwrap_or(0.0)
        };
        let v = self.cov.weighted_uav_access(t_a, &bhat, &bhat)?;
        drop(cache);
        self.xhaul_cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// The three delivery events for one service/cache configuration.
    pub fn success(
        &self,
        svc: &ServiceParams,
        policy: &CachePolicy,
        mode: HitMode,
    ) -> Result<SuccessBreakdown> {
        svc.validate()?;
        let (t_a, t_b) = sinr_thresholds(svc, self.p.bandwidth_hz);
        if t_a.is_infinite() {
            return Ok(SuccessBreakdown { p_st: 0.0, p_sa: 0.0, p_sx: 0.0, p_suc: 0.0 });
        }
        let (p_hit, p_miss) = hit_probability(policy, mode);
        let (p_st, ga) = self.access_terms(t_a)?;
        let p_sa = p_hit * ga;
        let p_sx = if t_b.is_finite() && p_miss > 1e-12 {
            p_miss * self.xhaul_term(t_a, t_b)?
        } else {
            0.0
        };
        let p_suc = (p_st + p_sa + p_sx).clamp(0.0, 1.0);
        Ok(SuccessBreakdown { p_st, p_sa, p_sx, p_suc })
    }
}

/// One-shot convenience wrapper around [`SuccessModel`].
pub fn success_probability(
    svc: &ServiceParams,
    params: &NetworkParams,
    policy: &CachePolicy,
    mode: HitMode,
) -> Result<SuccessBreakdown> {
    SuccessModel::new(params)?.success(svc, policy, mode)
}

/// One-shot rate coverage.
pub fn rate_coverage(r0_bps: f64, svc: &ServiceParams, params: &NetworkParams) -> Result<f64> {
    SuccessModel::new(params)?.rate_coverage(r0_bps, svc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::paper_defaults;

    #[test]
    fn zipf_reference_vectors() {
        let a = zipf_popularity(4, 0.0).unwrap();
        assert!(a.iter().all(|&v| (v - 0.25).abs() < 1e-15));
        let a = zipf_popularity(3, 1.0).unwrap();
        assert!((a[0] - 0.5455).abs() < 1e-4);
        assert!((a[1] - 0.2727).abs() < 1e-4);
        assert!((a[2] - 0.1818).abs() < 1e-4);
        let total: f64 = zipf_popularity(1000, 0.8).unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn placement_worked_example() {
        // L=4, C=2, C0=1, gamma=1: a = (.48, .24, .16, .12).
        let a = zipf_popularity(4, 1.0).unwrap();
        assert!((a[0] - 0.48).abs() < 1e-12);
        let b = cache_placement(&a, 2, 1).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-12);
        assert!((b[1] - 0.461_538_46).abs() < 1e-7);
        assert!((b[2] - 0.307_692_31).abs() < 1e-7);
        assert!((b[3] - 0.230_769_23).abs() < 1e-7);
        let total: f64 = b.iter().sum();
        assert!((total - 2.0).abs() < 1e-12, "unclipped spread fills the cache exactly");
    }

    #[test]
    fn placement_degenerate_cases() {
        let a = zipf_popularity(5, 1.0).unwrap();
        assert!(cache_placement(&a, 5, 2).unwrap().iter().all(|&b| b == 1.0));
        assert!(cache_placement(&a, 0, 0).unwrap().iter().all(|&b| b == 0.0));
        assert!(cache_placement(&a, 6, 0).is_err());
        assert!(cache_placement(&a, 3, 4).is_err());
    }

    #[test]
    fn hit_probability_modes() {
        let policy = CachePolicy::new(4, 2, 1, 1.0).unwrap();
        let (hit_full, miss_full) = hit_probability(&policy, HitMode::FullLibrary);
        assert!((hit_full - 0.6677).abs() < 1e-4);
        assert!((hit_full + miss_full - 1.0).abs() < 1e-15);
        let (hit_lit, miss_lit) = hit_probability(&policy, HitMode::CacheTruncated);
        assert!((hit_lit - 0.5908).abs() < 1e-4);
        assert!((hit_lit + miss_lit - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_popularity_prefix_cache_hits_at_capacity_ratio() {
        let policy = CachePolicy::new(10, 4, 4, 0.0).unwrap();
        let (hit, _) = hit_probability(&policy, HitMode::FullLibrary);
        assert!((hit - 0.4).abs() < 1e-12);
    }

    #[test]
    fn full_and_empty_cache_hit_probabilities() {
        let full = CachePolicy::new(1000, 1000, 500, 1.0).unwrap();
        assert_eq!(hit_probability(&full, HitMode::FullLibrary).0, 1.0);
        let empty = CachePolicy::new(1000, 0, 0, 1.0).unwrap();
        assert_eq!(hit_probability(&empty, HitMode::FullLibrary).0, 0.0);
    }

    #[test]
    fn placement_capacity_never_exceeded() {
        for gamma in [0.0, 0.5, 1.0, 2.0] {
            for (c, c0) in [(100, 50), (600, 300), (999, 0), (10, 10)] {
                let policy = CachePolicy::new(1000, c, c0, gamma).unwrap();
                assert!(
                    policy.placement_mass() <= c as f64 + 1e-9,
                    "gamma={gamma} C={c} C0={c0}: mass {}",
                    policy.placement_mass()
                );
            }
        }
    }

    /// Extreme popularity skew underflows the tail probabilities; the
    /// placement then keeps the prefix and leaves the rest uncached
    /// instead of dividing by zero.
    #[test]
    fn extreme_popularity_skew_degrades_gracefully() {
        let policy = CachePolicy::new(1000, 600, 300, 60.0).unwrap();
        assert!(policy.placement.iter().take(300).all(|&b| b == 1.0));
        assert!(policy.placement_mass() <= 600.0 + 1e-9);
        let (hit, miss) = hit_probability(&policy, HitMode::FullLibrary);
        assert!(hit > 0.999_999);
        assert!((hit + miss - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rate_coverage_behaves_like_a_ccdf() {
        let (net, svc) = paper_defaults();
        let model = SuccessModel::new(&net).unwrap();
        let near_one = model.rate_coverage(1.0, &svc).unwrap();
        assert!(near_one > 0.999);
        let mut prev = f64::INFINITY;
        for r0 in [1e5, 1e6, 1e7, 5e7] {
            let v = model.rate_coverage(r0, &svc).unwrap();
            assert!(v <= prev + 1e-9);
            prev = v;
        }
        // N_u and r0 enter only through their product.
        let mut svc2 = svc.clone();
        svc2.n_users = 2;
        let a = model.rate_coverage(2e6, &svc).unwrap();
        let b = model.rate_coverage(1e6, &svc2).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn success_event_structure() {
        let (net, mut svc) = paper_defaults();
        svc.n_users = 5;
        let model = SuccessModel::new(&net).unwrap();

        // Full cache: no xHaul event.
        let full = CachePolicy::new(1000, 1000, 500, 1.0).unwrap();
        let b = model.success(&svc, &full, HitMode::FullLibrary).unwrap();
        assert_eq!(b.p_sx, 0.0);
        assert!(b.p_suc >= b.p_sa && b.p_suc <= 1.0);

        // beta = 1 starves the xHaul even on a miss.
        let partial = CachePolicy::new(1000, 200, 100, 1.0).unwrap();
        let mut starved = svc.clone();
        starved.beta = 1.0;
        let b = model.success(&starved, &partial, HitMode::FullLibrary).unwrap();
        assert_eq!(b.p_sx, 0.0);

        // beta = 0 kills everything.
        let mut dead = svc.clone();
        dead.beta = 0.0;
        let b = model.success(&dead, &partial, HitMode::FullLibrary).unwrap();
        assert_eq!(b.p_suc, 0.0);

        // Empty cache: no S_a event.
        let empty = CachePolicy::new(1000, 0, 0, 1.0).unwrap();
        let b = model.success(&svc, &empty, HitMode::FullLibrary).unwrap();
        assert_eq!(b.p_sa, 0.0);
        assert!(b.p_sx > 0.0, "miss traffic must flow over the xHaul");
    }

    #[test]
    fn success_monotone_in_cache_and_users() {
        let (net, mut svc) = paper_defaults();
        svc.n_users = 5;
        let model = SuccessModel::new(&net).unwrap();
        let mut prev = -1.0;
        for c in [0usize, 300, 600, 1000] {
            let policy = CachePolicy::new(1000, c, c / 2, 1.0).unwrap();
            let b = model.success(&svc, &policy, HitMode::FullLibrary).unwrap();
            assert!(b.p_suc >= prev - 1e-9, "C={c}");
            prev = b.p_suc;
        }
        let policy = CachePolicy::new(1000, 600, 300, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for n in [1u32, 4, 8, 12] {
            let mut s = svc.clone();
            s.n_users = n;
            let b = model.success(&s, &policy, HitMode::FullLibrary).unwrap();
            assert!(b.p_suc <= prev + 1e-9, "N_u={n}");
            prev = b.p_suc;
        }
    }
}
