//! Bandwidth-partition optimization and the parameter sweeps behind the
//! experiment tables.

use crate::association::Association;
use crate::content::{CachePolicy, HitMode, SuccessModel};
use crate::coverage::Coverage;
use crate::error::{Error, Result};
use crate::params::{NetworkParams, ServiceParams};

/// Result of a partition-factor search.
#[derive(Debug, Clone)]
pub struct BetaOptimum {
    pub beta_star: f64,
    pub p_suc_star: f64,
    /// All (beta, P_suc) samples visited, sorted by beta.
    pub trace: Vec<(f64, f64)>,
}

/// Maximize the success probability over the bandwidth partition: a
/// uniform grid scan on [0, 1] (endpoints included; both degenerate
/// splits are meaningful) followed by golden-section refinement inside
/// the best grid bracket. No unimodality is assumed globally; the scan
/// owns the coarse picture and the refinement only polishes the winner.
pub fn optimize_beta(
    model: &SuccessModel,
    svc_template: &ServiceParams,
    policy: &CachePolicy,
    mode: HitMode,
    grid_n: usize,
) -> Result<BetaOptimum> {
    if grid_n < 11 {
        return Err(Error::Domain(format!("beta grid needs at least 11 points, got {grid_n}")));
    }
    let eval = |beta: f64| -> Result<f64> {
        let mut svc = svc_template.clone();
        svc.beta = beta;
        Ok(model.success(&svc, policy, mode)?.p_suc)
    };

    let mut trace = Vec::with_capacity(grid_n + 32);
    for i in 0..grid_n {
        let beta = i as f64 / (grid_n - 1) as f64;
        trace.push((beta, eval(beta)?));
    }
    let best = trace
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap();
    let (mut beta_star, mut p_star) = trace[best];

    // Bracket around the winning grid cell, clamped to the unit range.
    let mut lo = if best > 0 { trace[best - 1].0 } else { 0.0 };
    let mut hi = if best + 1 < grid_n { trace[best + 1].0 } else { 1.0 };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    trace.push((x1, f1));
    trace.push((x2, f2));
    while hi - lo > 1e-3 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = eval(x2)?;
            trace.push((x2, f2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = eval(x1)?;
            trace.push((x1, f1));
        }
    }
    for &(b, p) in &trace {
        if p > p_star {
            beta_star = b;
            p_star = p;
        }
    }
    trace.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(BetaOptimum { beta_star, p_suc_star: p_star, trace })
}

/// Axes of the experiment sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Cache size C (MPC size follows as C/2 unless pinned).
    CacheSize,
    /// Simultaneous users N_u.
    NUsers,
    /// UAV-AP density \[m^-3\].
    LambdaUa,
    /// Bandwidth partition factor.
    Beta,
    /// LoS UAV-AP height \[m\]; reports the association triple.
    Height,
    /// Access SINR threshold \[dB\]; reports overall coverage.
    Threshold,
    /// TBS density \[m^-2\]; reports the xHaul association split.
    LambdaM,
}

impl SweepAxis {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "cache" | "cache-size" | "cache_size" => Ok(SweepAxis::CacheSize),
            "users" | "n-users" | "n_users" => Ok(SweepAxis::NUsers),
            "lambda-ua" | "lambda_ua" => Ok(SweepAxis::LambdaUa),
            "beta" => Ok(SweepAxis::Beta),
            "height" => Ok(SweepAxis::Height),
            "threshold" => Ok(SweepAxis::Threshold),
            "lambda-m" | "lambda_m" => Ok(SweepAxis::LambdaM),
            other => Err(Error::Config(format!("unknown sweep axis '{other}'"))),
        }
    }
}

/// Column-named numeric table, the common output of every sweep.
#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }
}

/// Everything a sweep needs besides the axis itself.
#[derive(Debug, Clone)]
pub struct SweepContext {
    pub params: NetworkParams,
    pub svc: ServiceParams,
    pub library_size: usize,
    pub cache_size: usize,
    /// MPC slots; `None` applies the C0 = C/2 rule as the cache size
    /// varies.
    pub mpc_size: Option<usize>,
    pub gamma: f64,
    pub mode: HitMode,
}

impl SweepContext {
    fn policy_for_cache(&self, c: usize) -> Result<CachePolicy> {
        let c0 = self.mpc_size.map_or(c / 2, |m| m.min(c));
        CachePolicy::new(self.library_size, c, c0, self.gamma)
    }

    fn policy(&self) -> Result<CachePolicy> {
        self.policy_for_cache(self.cache_size)
    }
}

/// Run one sweep; rows come out in grid order.
pub fn sweep(ctx: &SweepContext, axis: SweepAxis, grid: &[f64]) -> Result<Table> {
    if grid.is_empty() {
        return Err(Error::Domain("sweep grid must be nonempty".into()));
    }
    match axis {
        SweepAxis::CacheSize => {
            let model = SuccessModel::new(&ctx.params)?;
            let mut t = Table::new(&["cache_size", "p_st", "p_sa", "p_sx", "p_suc"]);
            for &c in grid {
                let c = c.round().max(0.0) as usize;
                let policy = ctx.policy_for_cache(c.min(ctx.library_size))?;
                let b = model.success(&ctx.svc, &policy, ctx.mode)?;
                t.rows.push(vec![c as f64, b.p_st, b.p_sa, b.p_sx, b.p_suc]);
            }
            Ok(t)
        }
        SweepAxis::NUsers => {
            let model = SuccessModel::new(&ctx.params)?;
            let policy = ctx.policy()?;
            let mut t = Table::new(&["n_users", "p_st", "p_sa", "p_sx", "p_suc"]);
            for &n in grid {
                let mut svc = ctx.svc.clone();
                svc.n_users = n.round().max(1.0) as u32;
                let b = model.success(&svc, &policy, ctx.mode)?;
                t.rows.push(vec![f64::from(svc.n_users), b.p_st, b.p_sa, b.p_sx, b.p_suc]);
            }
            Ok(t)
        }
        SweepAxis::LambdaUa => {
            let policy = ctx.policy()?;
            let mut t = Table::new(&["lambda_ua", "p_st", "p_sa", "p_sx", "p_suc"]);
            for &lambda in grid {
                let mut p = ctx.params.clone();
                p.lambda_ua = lambda;
                let model = SuccessModel::new(&p)?;
                let b = model.success(&ctx.svc, &policy, ctx.mode)?;
                t.rows.push(vec![lambda, b.p_st, b.p_sa, b.p_sx, b.p_suc]);
            }
            Ok(t)
        }
        SweepAxis::Beta => {
            let model = SuccessModel::new(&ctx.params)?;
            let policy = ctx.policy()?;
            let mut t = Table::new(&["beta", "p_st", "p_sa", "p_sx", "p_suc"]);
            for &beta in grid {
                let mut svc = ctx.svc.clone();
                svc.beta = beta;
                let b = model.success(&svc, &policy, ctx.mode)?;
                t.rows.push(vec![beta, b.p_st, b.p_sa, b.p_sx, b.p_suc]);
            }
            Ok(t)
        }
        SweepAxis::Height => {
            let assoc = Association::new(&ctx.params)?;
            let mut t = Table::new(&["height_m", "a_ma", "a_ual", "a_uan", "sum"]);
            for pt in assoc.vs_height(grid)? {
                let r = pt.report;
                t.rows.push(vec![pt.height_m, r.a_ma, r.a_ual_bar, r.a_uan_bar, r.sum()]);
            }
            Ok(t)
        }
        SweepAxis::Threshold => {
            let cov = Coverage::new(&ctx.params)?;
            let mut t = Table::new(&["threshold_db", "coverage"]);
            for &t_db in grid {
                let v = cov.overall_access(10f64.powf(t_db / 10.0))?;
                t.rows.push(vec![t_db, v]);
            }
            Ok(t)
        }
        SweepAxis::LambdaM => {
            let mut t = Table::new(&["lambda_m", "a_ub", "a_mb"]);
            for &lambda in grid {
                let mut p = ctx.params.clone();
                p.lambda_m = lambda;
                let x = Association::new(&p)?.xhaul_deconditioned()?;
                t.rows.push(vec![lambda, x.a_ub, x.a_mb]);
            }
            Ok(t)
        }
    }
}

/// Optimal beta and success as a function of the cache size.
pub fn optimize_over_cache(ctx: &SweepContext, c_grid: &[f64], grid_n: usize) -> Result<Table> {
    let model = SuccessModel::new(&ctx.params)?;
    let mut t = Table::new(&["cache_size", "beta_star", "p_suc_star"]);
    for &c in c_grid {
        let c = (c.round().max(0.0) as usize).min(ctx.library_size);
        let policy = ctx.policy_for_cache(c)?;
        let opt = optimize_beta(&model, &ctx.svc, &policy, ctx.mode, grid_n)?;
        t.rows.push(vec![c as f64, opt.beta_star, opt.p_suc_star]);
    }
    Ok(t)
}

/// Optimal beta and success as a function of the popularity exponent.
pub fn optimize_over_gamma(ctx: &SweepContext, gamma_grid: &[f64], grid_n: usize) -> Result<Table> {
    let model = SuccessModel::new(&ctx.params)?;
    let mut t = Table::new(&["gamma", "beta_star", "p_suc_star"]);
    for &gamma in gamma_grid {
        let c0 = ctx.mpc_size.map_or(ctx.cache_size / 2, |m| m.min(ctx.cache_size));
        let policy = CachePolicy::new(ctx.library_size, ctx.cache_size, c0, gamma)?;
        let opt = optimize_beta(&model, &ctx.svc, &policy, ctx.mode, grid_n)?;
        t.rows.push(vec![gamma, opt.beta_star, opt.p_suc_star]);
    }
    Ok(t)
}
