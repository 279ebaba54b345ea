//! Command implementations behind the `uavnet` binary: configuration
//! resolution, sweep orchestration, CSV emission and run manifests.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;
use uavnet_core::association::Association;
use uavnet_core::config::{FileConfig, ResolvedConfig};
use uavnet_core::content::CachePolicy;
use uavnet_core::coverage::Coverage;
use uavnet_core::error::Error as CoreError;
use uavnet_core::geometry;
use uavnet_core::montecarlo::{self, DistanceKind};
use uavnet_core::optimizer::{self, SweepAxis, SweepContext, Table};
use uavnet_core::params::Environment;

/// Process exit codes: 2 config, 3 numerics, 4 validation failure.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerics(String),
    ValidationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerics(_) => 3,
            CliError::ValidationFailed(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) => format!("config error: {m}"),
            CliError::Numerics(m) => format!("numerical error: {m}"),
            CliError::ValidationFailed(n) => format!("validation failed: {n} check(s) out of tolerance"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonConvergent { .. } | CoreError::NonFinite { .. } => {
                CliError::Numerics(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "uavnet",
    version,
    about = "Association, coverage and content-delivery analysis for cache-enabled UAV HetNets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML configuration file (defaults are built in).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Blockage environment override.
    #[arg(long, global = true)]
    pub env: Option<String>,

    /// Monte-Carlo seed override.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Monte-Carlo realization count override.
    #[arg(long, global = true)]
    pub realizations: Option<u64>,

    /// Output directory for CSV tables and run manifests.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AssociationAxis {
    /// UAV-AP density sweep of the access triple.
    LambdaUa,
    /// LoS UAV-AP height sweep of the access triple.
    Height,
    /// TBS density sweep of the xHaul split.
    LambdaM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuccessAxis {
    Cache,
    Users,
    LambdaUa,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizeAxis {
    Cache,
    Gamma,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub points: usize,
    /// Logarithmic grid spacing.
    #[arg(long)]
    pub log: bool,
}

impl GridArgs {
    fn build(&self) -> Result<Vec<f64>, CliError> {
        if self.points == 0 {
            return Err(CliError::Config("--points must be at least 1".into()));
        }
        if self.points == 1 {
            return Ok(vec![self.from]);
        }
        if self.log && (self.from <= 0.0 || self.to <= 0.0) {
            return Err(CliError::Config("--log grids need positive endpoints".into()));
        }
        let n = self.points;
        let grid = (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.from.ln() + f * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + f * (self.to - self.from)
                }
            })
            .collect();
        Ok(grid)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Access or xHaul association probabilities along one axis.
    Association {
        #[arg(long, value_enum)]
        axis: AssociationAxis,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Overall access coverage versus SINR threshold, analytic and
    /// Monte-Carlo side by side.
    Coverage {
        /// Lowest threshold \[dB\].
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        from: f64,
        /// Highest threshold \[dB\].
        #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
    /// Content-delivery success probability along one axis.
    Success {
        #[arg(long, value_enum)]
        axis: SuccessAxis,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Optimal bandwidth partition over a cache-size or popularity grid.
    Optimize {
        #[arg(long, value_enum)]
        axis: OptimizeAxis,
        #[command(flatten)]
        grid: GridArgs,
        /// Beta grid resolution before golden-section refinement.
        #[arg(long, default_value_t = 17)]
        grid_n: usize,
    },
    /// Analytic-versus-Monte-Carlo invariant suite.
    Validate {},
}

#[derive(Debug, Serialize)]
struct RunManifest {
    command: String,
    tool_version: String,
    seed: u64,
    realizations: u64,
    resolved_config_toml: String,
    outputs: Vec<String>,
    rows_written: usize,
    wall_clock_s: f64,
}

fn resolve_config(cli: &Cli) -> Result<ResolvedConfig, CliError> {
    let mut cfg = ResolvedConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(&FileConfig::from_path(path)?)?;
    }
    if let Some(env) = &cli.env {
        cfg.network.env = Environment::from_str(env)?;
    }
    if let Some(seed) = cli.seed {
        cfg.sim.seed = seed;
    }
    if let Some(n) = cli.realizations {
        cfg.sim.realizations = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn format_cell(v: f64) -> String {
    format!("{v:.8e}")
}

fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    let mut text = table.headers.join(",");
    text.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_cell(v)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_manifest(
    out_dir: &Path,
    name: &str,
    cfg: &ResolvedConfig,
    outputs: &[PathBuf],
    rows: usize,
    started: Instant,
) -> Result<(), CliError> {
    let manifest = RunManifest {
        command: std::env::args().collect::<Vec<_>>().join(" "),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.sim.seed,
        realizations: cfg.sim.realizations,
        resolved_config_toml: cfg.to_toml_snapshot(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        rows_written: rows,
        wall_clock_s: started.elapsed().as_secs_f64(),
    };
    let path = out_dir.join(format!("{name}_manifest.json"));
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Config(format!("manifest serialization: {e}")))?;
    std::fs::write(&path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn sweep_context(cfg: &ResolvedConfig) -> SweepContext {
    SweepContext {
        params: cfg.network.clone(),
        svc: cfg.service.clone(),
        library_size: cfg.cache.library_size,
        cache_size: cfg.cache.cache_size,
        mpc_size: cfg.cache.mpc_size,
        gamma: cfg.cache.gamma,
        mode: cfg.cache.mode,
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        // Ignore the error if a global pool already exists (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let started = Instant::now();
    let cfg = resolve_config(cli)?;
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", cli.out.display())))?;

    match &cli.command {
        Command::Association { axis, grid } => {
            let grid = grid.build()?;
            let table = match axis {
                AssociationAxis::LambdaUa => {
                    let assoc = Association::new(&cfg.network)?;
                    let sweep = assoc.sweep_density(&grid)?;
                    let mut t = Table {
                        headers: ["lambda_ua", "a_ma", "a_ual", "a_uan", "sum"]
                            .iter()
                            .map(|s| s.to_string())
                            .collect(),
                        rows: Vec::new(),
                    };
                    for pt in &sweep.points {
                        let r = pt.report;
                        t.rows.push(vec![pt.lambda_ua, r.a_ma, r.a_ual_bar, r.a_uan_bar, r.sum()]);
                    }
                    t
                }
                AssociationAxis::Height => {
                    optimizer::sweep(&sweep_context(&cfg), SweepAxis::Height, &grid)?
                }
                AssociationAxis::LambdaM => {
                    let mut t =
                        optimizer::sweep(&sweep_context(&cfg), SweepAxis::LambdaM, &grid)?;
                    t.headers.push("sum".into());
                    for row in &mut t.rows {
                        let sum = row[1] + row[2];
                        row.push(sum);
                    }
                    t
                }
            };
            let path = cli.out.join("association.csv");
            write_csv(&path, &table)?;
            write_manifest(&cli.out, "association", &cfg, &[path], table.rows.len(), started)?;
            Ok(())
        }

        Command::Coverage { from, to, points } => {
            if *points < 2 {
                return Err(CliError::Config("--points must be at least 2".into()));
            }
            let cov = Coverage::new(&cfg.network)?;
            let t_db: Vec<f64> = (0..*points)
                .map(|i| from + (to - from) * i as f64 / (*points - 1) as f64)
                .collect();
            let linear: Vec<f64> = t_db.iter().map(|d| 10f64.powf(d / 10.0)).collect();
            let mc = montecarlo::estimate_access_coverage_curve(
                &cfg.network,
                &linear,
                cfg.sim.realizations,
                cfg.sim.seed,
            )?;
            let mut table = Table {
                headers: ["threshold_db", "analytic", "mc_estimate", "mc_std_err", "abs_diff"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                rows: Vec::new(),
            };
            for (i, &db) in t_db.iter().enumerate() {
                let ana = cov.overall_access(linear[i])?;
                table.rows.push(vec![
                    db,
                    ana,
                    mc[i].mean,
                    mc[i].std_err,
                    (ana - mc[i].mean).abs(),
                ]);
            }
            let path = cli.out.join("coverage.csv");
            write_csv(&path, &table)?;
            write_manifest(&cli.out, "coverage", &cfg, &[path], table.rows.len(), started)?;
            Ok(())
        }

        Command::Success { axis, grid } => {
            let grid = grid.build()?;
            let axis = match axis {
                SuccessAxis::Cache => SweepAxis::CacheSize,
                SuccessAxis::Users => SweepAxis::NUsers,
                SuccessAxis::LambdaUa => SweepAxis::LambdaUa,
                SuccessAxis::Beta => SweepAxis::Beta,
            };
            let table = optimizer::sweep(&sweep_context(&cfg), axis, &grid)?;
            let path = cli.out.join("success.csv");
            write_csv(&path, &table)?;
            write_manifest(&cli.out, "success", &cfg, &[path], table.rows.len(), started)?;
            Ok(())
        }

        Command::Optimize { axis, grid, grid_n } => {
            let grid = grid.build()?;
            let ctx = sweep_context(&cfg);
            let table = match axis {
                OptimizeAxis::Cache => optimizer::optimize_over_cache(&ctx, &grid, *grid_n)?,
                OptimizeAxis::Gamma => optimizer::optimize_over_gamma(&ctx, &grid, *grid_n)?,
            };
            let path = cli.out.join("optimize.csv");
            write_csv(&path, &table)?;
            write_manifest(&cli.out, "optimize", &cfg, &[path], table.rows.len(), started)?;
            Ok(())
        }

        Command::Validate {} => {
            let rows = run_validation(&cfg)?;
            let mut table = Table {
                headers: ["check_index", "measured", "tolerance", "passed"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                rows: Vec::new(),
            };
            let mut failures = 0usize;
            for (i, check) in rows.iter().enumerate() {
                let ok = check.measured <= check.tolerance;
                if !ok {
                    failures += 1;
                }
                println!(
                    "{} {}: measured {:.5} vs tolerance {:.5}",
                    if ok { "PASS" } else { "FAIL" },
                    check.name,
                    check.measured,
                    check.tolerance
                );
                table.rows.push(vec![
                    i as f64,
                    check.measured,
                    check.tolerance,
                    f64::from(u8::from(ok)),
                ]);
            }
            let path = cli.out.join("validate.csv");
            write_csv(&path, &table)?;
            write_manifest(&cli.out, "validate", &cfg, &[path], table.rows.len(), started)?;
            if failures > 0 {
                return Err(CliError::ValidationFailed(failures));
            }
            Ok(())
        }
    }
}

struct ValidationCheck {
    name: String,
    measured: f64,
    tolerance: f64,
}

/// The analytic-versus-simulation invariant suite: association deltas,
/// distance-law K-S statistics, coverage gaps, end-to-end success gap
/// and seed determinism. All checks run to completion; failures
/// aggregate rather than short-circuit.
fn run_validation(cfg: &ResolvedConfig) -> Result<Vec<ValidationCheck>, CliError> {
    let n = cfg.sim.realizations;
    if n < 1_000 {
        return Err(CliError::Config(format!(
            "validation needs at least 1000 realizations, got {n}"
        )));
    }
    let seed = cfg.sim.seed;
    let net = &cfg.network;
    let mut checks = Vec::new();

    // Association probabilities.
    let analytic = Association::new(net)?.report()?;
    let mc = montecarlo::estimate_association(net, n, seed)?;
    for (name, a, est) in [
        ("association A_MA", analytic.a_ma, mc.tbs),
        ("association A_UAL", analytic.a_ual_bar, mc.los_uav),
        ("association A_UAN", analytic.a_uan_bar, mc.nlos_uav),
    ] {
        checks.push(ValidationCheck {
            name: format!("{name} |analytic - MC|"),
            measured: (a - est.mean).abs(),
            tolerance: 0.01 + 2.0 * est.std_err,
        });
    }

    // Nearest-distance laws.
    let h = 100.0;
    let kinds: [(DistanceKind, Box<dyn Fn(f64) -> f64>, &str); 5] = {
        let w = Association::new(net)?.weights();
        [
            (
                DistanceKind::TbsAccess,
                Box::new({
                    let lm = net.lambda_m;
                    move |x| geometry::nearest_tbs_cdf(x, lm).unwrap_or(0.0)
                }),
                "d_MA",
            ),
            (
                DistanceKind::LosUav,
                Box::new({
                    let (lua, wl) = (net.lambda_ua, w.los);
                    move |x| geometry::nearest_uav_cdf(x, lua, wl).unwrap_or(0.0)
                }),
                "d_UAL",
            ),
            (
                DistanceKind::NlosUav,
                Box::new({
                    let (lua, wn) = (net.lambda_ua, w.nlos);
                    move |x| geometry::nearest_uav_cdf(x, lua, wn).unwrap_or(0.0)
                }),
                "d_UAN",
            ),
            (
                DistanceKind::XhaulTbs { height_m: h },
                Box::new({
                    let lm = net.lambda_m;
                    move |x| geometry::xhaul_tbs_cdf(x, h, lm).unwrap_or(0.0)
                }),
                "d_MB",
            ),
            (
                DistanceKind::XhaulUavBs { height_m: h },
                Box::new({
                    let lub = net.lambda_ub;
                    move |x| geometry::xhaul_uavbs_cdf(x, h, lub).unwrap_or(0.0)
                }),
                "d_UB",
            ),
        ]
    };
    for (i, (kind, cdf, name)) in kinds.into_iter().enumerate() {
        let mut samples =
            montecarlo::sample_nearest_distances(net, kind, n.min(10_000), seed + 100 + i as u64)?;
        let ks = montecarlo::ks_statistic(&mut samples, cdf.as_ref());
        // Floor at the reference tolerance; below the reference sample
        // size fall back to the 1%-significance K-S critical value.
        let tolerance = 0.02f64.max(1.63 / (samples.len() as f64).sqrt());
        checks.push(ValidationCheck {
            name: format!("distance law {name} K-S"),
            measured: ks,
            tolerance,
        });
    }

    // Coverage at three thresholds spanning the interesting range.
    let cov = Coverage::new(net)?;
    let thresholds = [0.1, 0.5, 2.0];
    let curve = montecarlo::estimate_access_coverage_curve(net, &thresholds, n, seed + 7)?;
    for (i, &t) in thresholds.iter().enumerate() {
        let ana = cov.overall_access(t)?;
        checks.push(ValidationCheck {
            name: format!("overall coverage gap at t = {t}"),
            measured: (ana - curve[i].mean).abs(),
            tolerance: 0.02 + 2.0 * curve[i].std_err,
        });
    }

    // End-to-end success.
    let policy: CachePolicy = cfg.cache.policy()?;
    let model = uavnet_core::content::SuccessModel::new(net)?;
    let analytic = model.success(&cfg.service, &policy, cfg.cache.mode)?;
    let sim = montecarlo::estimate_success(net, &cfg.service, &policy, n, seed + 13)?;
    checks.push(ValidationCheck {
        name: "success probability gap".into(),
        measured: (analytic.p_suc - sim.p_suc.mean).abs(),
        tolerance: 0.03 + 2.0 * sim.p_suc.std_err,
    });

    // Determinism: the same seed must reproduce bit-identical estimates.
    let again = montecarlo::estimate_association(net, n, seed)?;
    let identical = again.tbs.mean.to_bits() == mc.tbs.mean.to_bits()
        && again.los_uav.mean.to_bits() == mc.los_uav.mean.to_bits();
    checks.push(ValidationCheck {
        name: "fixed-seed determinism".into(),
        measured: f64::from(u8::from(!identical)),
        tolerance: 0.0,
    });

    Ok(checks)
}
