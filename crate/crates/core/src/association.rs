//! RSSI association probabilities for the access and xHaul links.
//!
//! The typical user joins the tier (TBS, LoS UAV-AP, NLoS UAV-AP) whose
//! nearest member delivers the strongest average received power; the
//! serving UAV-AP then picks a TBS or UAV-BS for its xHaul the same way.
//! Every probability below is an expectation of void probabilities over
//! the nearest-member distance laws of [`crate::geometry`].
//!
//! Each ordered-event probability is implemented twice: as the
//! ordered-event bracket integral (used by the reporting ops and the
//! special-case cross-check) and as the algebraically collapsed survival
//! product (used inside the triple-nested coverage/success integrals,
//! where it is hundreds of times cheaper). Unit tests pin the two routes
//! to each other.

use crate::channel::LosWeights;
use crate::error::{Error, Result};
use crate::geometry::{nearest_tbs_pdf_unchecked, nearest_uav_pdf_unchecked};
use crate::params::NetworkParams;
use crate::quadrature::{integrate, integrate_tail, QuadSpec};
use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

/// Access-tier association probabilities; the three entries partition
/// the sample space, so they sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationReport {
    pub a_ma: f64,
    pub a_ual_bar: f64,
    pub a_uan_bar: f64,
}

impl AssociationReport {
    pub fn sum(&self) -> f64 {
        self.a_ma + self.a_ual_bar + self.a_uan_bar
    }
}

/// xHaul-tier split for a tagged UAV-AP; `a_mb = 1 - a_ub` by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XhaulAssociation {
    pub a_ub: f64,
    pub a_mb: f64,
}

/// Access association triple at one LoS UAV-AP height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightPoint {
    pub height_m: f64,
    pub report: AssociationReport,
}

/// One entry of a UAV-AP density sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint {
    pub lambda_ua: f64,
    pub report: AssociationReport,
}

/// Density sweep with the location of the LoS association maximum.
#[derive(Debug, Clone)]
pub struct DensitySweep {
    pub points: Vec<DensityPoint>,
    /// argmax of the LoS association over the grid, golden-section
    /// refined when it is interior.
    pub argmax_lambda_ua: f64,
    pub argmax_a_ual: f64,
}

/// Association calculator for one parameter set.
#[derive(Debug, Clone)]
pub struct Association {
    p: NetworkParams,
    wl: f64,
    wn: f64,
    /// (2/3) pi lambda_UA W'_L and W'_N.
    c_l: f64,
    c_n: f64,
    /// (P_UA / P_M)^(1/alpha_L) and ^(1/alpha_N).
    r_al: f64,
    r_an: f64,
    /// (P_M / P_UA)^(1/alpha_N).
    r_an_inv: f64,
    /// alpha_N / alpha_L and its inverse.
    e_nl: f64,
    e_ln: f64,
    spec: QuadSpec,
}

impl Association {
    pub fn new(p: &NetworkParams) -> Result<Self> {
        let w = LosWeights::for_env(&p.env)?;
        Ok(Self::with_weights(p, &w))
    }

    pub fn with_weights(p: &NetworkParams, w: &LosWeights) -> Self {
        let ratio = p.p_ua / p.p_m;
        Association {
            p: p.clone(),
            wl: w.los,
            wn: w.nlos,
            c_l: 2.0 / 3.0 * PI * p.lambda_ua * w.los,
            c_n: 2.0 / 3.0 * PI * p.lambda_ua * w.nlos,
            r_al: ratio.powf(1.0 / p.alpha_l),
            r_an: ratio.powf(1.0 / p.alpha_n),
            r_an_inv: ratio.powf(-1.0 / p.alpha_n),
            e_nl: p.alpha_n / p.alpha_l,
            e_ln: p.alpha_l / p.alpha_n,
            spec: QuadSpec::default(),
        }
    }

    pub fn weights(&self) -> LosWeights {
        LosWeights { los: self.wl, nlos: self.wn }
    }

    pub fn params(&self) -> &NetworkParams {
        &self.p
    }

    /// Natural length scale of the nearest-TBS law.
    fn tbs_scale(&self) -> f64 {
        if self.p.lambda_m > 0.0 { (PI * self.p.lambda_m).sqrt().recip() } else { 1.0 }
    }

    fn los_scale(&self) -> f64 {
        if self.c_l > 0.0 { self.c_l.cbrt().recip() } else { 1.0 }
    }

    fn nlos_scale(&self) -> f64 {
        if self.c_n > 0.0 { self.c_n.cbrt().recip() } else { 1.0 }
    }

    fn f_tbs(&self, x: f64) -> f64 {
        nearest_tbs_pdf_unchecked(x, self.p.lambda_m)
    }

    fn f_los(&self, x: f64) -> f64 {
        nearest_uav_pdf_unchecked(x, self.p.lambda_ua, self.wl)
    }

    fn f_nlos(&self, x: f64) -> f64 {
        nearest_uav_pdf_unchecked(x, self.p.lambda_ua, self.wn)
    }

    /// P(no LoS UAV-AP within r).
    #[inline]
    fn los_void(&self, r: f64) -> f64 {
        (-self.c_l * r * r * r).exp()
    }

    #[inline]
    fn nlos_void(&self, r: f64) -> f64 {
        (-self.c_n * r * r * r).exp()
    }

    /// P(no TBS within r).
    #[inline]
    fn tbs_void(&self, r: f64) -> f64 {
        (-PI * self.p.lambda_m * r * r).exp()
    }

    // ------------------------------------------------------------------
    // Collapsed survival products
    // ------------------------------------------------------------------

    /// P(the LoS UAV-AP at distance `d` beats both other tiers): the TBS
    /// must lie beyond (P_M/P_UA)^(1/aN) d^(aL/aN) and the nearest NLoS
    /// UAV beyond d^(aL/aN).
    pub fn los_uav_given_closed(&self, d: f64) -> f64 {
        let boundary = d.powf(self.e_ln);
        self.nlos_void(boundary) * self.tbs_void(self.r_an_inv * boundary)
    }

    /// P(the NLoS UAV-AP at distance `d` beats both other tiers).
    pub fn nlos_uav_given_closed(&self, d: f64) -> f64 {
        self.los_void(d.powf(self.e_nl)) * self.tbs_void(self.r_an_inv * d)
    }

    /// P(the TBS at distance `w` beats both UAV classes).
    fn tbs_given_closed(&self, w: f64) -> f64 {
        self.los_void(self.r_al * w.powf(self.e_nl)) * self.nlos_void(self.r_an * w)
    }

    /// TBS association probability via the collapsed integrand.
    pub fn tbs_closed(&self) -> Result<f64> {
        if self.p.lambda_m <= 0.0 {
            return Ok(0.0);
        }
        integrate_tail(
            |w| self.f_tbs(w) * self.tbs_given_closed(w),
            0.0,
            self.tbs_scale(),
            &self.spec,
        )
    }

    // ------------------------------------------------------------------
    // Ordered-event bracket forms
    // ------------------------------------------------------------------

    /// TBS association split into the two ordered events
    /// (TBS > LoS > NLoS) and (TBS > NLoS > LoS), each a nested double
    /// integral over the nearest-TBS and nearest-UAV laws.
    pub fn tbs_split(&self) -> Result<(f64, f64)> {
        if self.p.lambda_m <= 0.0 {
            return Ok((0.0, 0.0));
        }
        if self.p.lambda_ua <= 0.0 {
            // Degenerate: with no UAV tier the ordered decomposition is
            // meaningless; all mass sits on the TBS.
            return Ok((self.tbs_closed()?, 0.0));
        }
        let inner_err: Cell<Option<Error>> = Cell::new(None);
        let catch = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        };

        // Event TBS > LoS > NLoS: inner over the nearest-NLoS distance x
        // from (P_UA/P_M)^(1/aN) w; the bracket is the LoS void gap.
        let a_prime = integrate_tail(
            |w| {
                let base = self.los_void(self.r_al * w.powf(self.e_nl));
                let inner = catch(integrate_tail(
                    |x| self.f_nlos(x) * (base - self.los_void(x.powf(self.e_nl))),
                    self.r_an * w,
                    self.nlos_scale(),
                    &self.spec,
                ));
                self.f_tbs(w) * inner
            },
            0.0,
            self.tbs_scale(),
            &self.spec,
        )?;

        // Event TBS > NLoS > LoS: inner over the nearest-LoS distance.
        let a_dprime = integrate_tail(
            |w| {
                let base = self.nlos_void(self.r_an * w);
                let inner = catch(integrate_tail(
                    |x| self.f_los(x) * (base - self.nlos_void(x.powf(self.e_ln))),
                    self.r_al * w.powf(self.e_nl),
                    self.los_scale(),
                    &self.spec,
                ));
                self.f_tbs(w) * inner
            },
            0.0,
            self.tbs_scale(),
            &self.spec,
        )?;

        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        Ok((a_prime, a_dprime))
    }

    /// TBS association probability A_MA via the ordered-event double
    /// integrals.
    pub fn tbs(&self) -> Result<f64> {
        let (a, b) = self.tbs_split()?;
        Ok(a + b)
    }

    /// Closed form of the first TBS event for the special case
    /// P_UA = P_M, alpha_N = alpha_L: all boundaries collapse and
    /// A'_MA = W'_L * int f_dMA(w) exp(-(2/3) pi lambda_UA w^3) dw.
    pub fn tbs_prime_special_closed(&self) -> Result<f64> {
        if (self.p.p_ua - self.p.p_m).abs() > 1e-12 * self.p.p_m
            || (self.p.alpha_n - self.p.alpha_l).abs() > 1e-12
        {
            return Err(Error::Domain(
                "special-case closed form requires P_UA = P_M and alpha_N = alpha_L".into(),
            ));
        }
        let c_total = self.c_l + self.c_n;
        let frac = self.wl / (self.wl + self.wn);
        let tail = integrate_tail(
            |w| self.f_tbs(w) * (-c_total * w * w * w).exp(),
            0.0,
            self.tbs_scale(),
            &self.spec,
        )?;
        Ok(frac * tail)
    }

    /// Conditional LoS association A_UAL(d): sum of the two ordered
    /// events, each a single integral with a void-probability bracket.
    pub fn los_uav_given(&self, d: f64) -> Result<f64> {
        if !(d > 0.0) {
            return Err(Error::Domain(format!("distance must be positive, got {d}")));
        }
        let boundary = d.powf(self.e_ln);
        let c_l1 = self.r_an_inv * boundary;

        // LoS > NLoS > TBS, integrated over the nearest-TBS distance.
        let nlos_gap_base = self.nlos_void(boundary);
        let ev1 = if self.p.lambda_m > 0.0 {
            integrate_tail(
                |x| self.f_tbs(x) * (nlos_gap_base - self.nlos_void(self.r_an * x)),
                c_l1,
                self.tbs_scale(),
                &self.spec,
            )?
        } else {
            // No TBS tier: the event reduces to "NLoS loses".
            nlos_gap_base
        };

        // LoS > TBS > NLoS, integrated over the nearest-NLoS distance.
        let tbs_gap_base = self.tbs_void(c_l1);
        let ev2 = if self.p.lambda_ua > 0.0 {
            integrate_tail(
                |x| self.f_nlos(x) * (tbs_gap_base - self.tbs_void(self.r_an_inv * x)),
                boundary,
                self.nlos_scale(),
                &self.spec,
            )?
        } else {
            0.0
        };

        Ok(ev1 + ev2)
    }

    /// Conditional NLoS association A_UAN(d).
    pub fn nlos_uav_given(&self, d: f64) -> Result<f64> {
        if !(d > 0.0) {
            return Err(Error::Domain(format!("distance must be positive, got {d}")));
        }
        let c_n1 = self.r_an_inv * d;
        let boundary = d.powf(self.e_nl);

        // NLoS > LoS > TBS, over the nearest-TBS distance.
        let los_gap_base = self.los_void(boundary);
        let ev1 = if self.p.lambda_m > 0.0 {
            integrate_tail(
                |x| self.f_tbs(x) * (los_gap_base - self.los_void(self.r_al * x.powf(self.e_nl))),
                c_n1,
                self.tbs_scale(),
                &self.spec,
            )?
        } else {
            los_gap_base
        };

        // NLoS > TBS > LoS, over the nearest-LoS distance.
        let tbs_gap_base = self.tbs_void(c_n1);
        let ev2 = if self.p.lambda_ua > 0.0 {
            integrate_tail(
                |x| {
                    self.f_los(x) * (tbs_gap_base - self.tbs_void(self.r_an_inv * x.powf(self.e_ln)))
                },
                boundary,
                self.los_scale(),
                &self.spec,
            )?
        } else {
            0.0
        };

        Ok(ev1 + ev2)
    }

    /// Deconditioned LoS association over the nearest-LoS distance law.
    pub fn los_uav(&self) -> Result<f64> {
        if self.p.lambda_ua <= 0.0 {
            return Ok(0.0);
        }
        integrate_tail(
            |x| self.f_los(x) * self.los_uav_given_closed(x),
            0.0,
            self.los_scale(),
            &self.spec,
        )
    }

    pub fn nlos_uav(&self) -> Result<f64> {
        if self.p.lambda_ua <= 0.0 {
            return Ok(0.0);
        }
        integrate_tail(
            |x| self.f_nlos(x) * self.nlos_uav_given_closed(x),
            0.0,
            self.nlos_scale(),
            &self.spec,
        )
    }

    /// Full association triple via the collapsed route.
    pub fn report(&self) -> Result<AssociationReport> {
        Ok(AssociationReport {
            a_ma: self.tbs_closed()?,
            a_ual_bar: self.los_uav()?,
            a_uan_bar: self.nlos_uav()?,
        })
    }

    /// Full triple via the ordered-event integrals (slow; used by the
    /// reporting ops and cross-checks).
    pub fn report_ordered_events(&self) -> Result<AssociationReport> {
        let a_ma = self.tbs()?;
        let inner_err: Cell<Option<Error>> = Cell::new(None);
        let catch = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        };
        let a_ual_bar = if self.p.lambda_ua > 0.0 {
            integrate_tail(
                |x| self.f_los(x) * catch(self.los_uav_given(x)),
                0.0,
                self.los_scale(),
                &self.spec,
            )?
        } else {
            0.0
        };
        let a_uan_bar = if self.p.lambda_ua > 0.0 {
            integrate_tail(
                |x| self.f_nlos(x) * catch(self.nlos_uav_given(x)),
                0.0,
                self.nlos_scale(),
                &self.spec,
            )?
        } else {
            0.0
        };
        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        Ok(AssociationReport { a_ma, a_ual_bar, a_uan_bar })
    }

    // ------------------------------------------------------------------
    // Height view
    // ------------------------------------------------------------------

    /// Association triple when the serving-candidate LoS UAV-AP hovers at
    /// a fixed height `h` and random orientation theta ~ U[-pi/2, pi/2]:
    /// its distance is h / cos(theta) and the other two tiers stay
    /// random.
    pub fn at_fixed_los_height(&self, h: f64) -> Result<AssociationReport> {
        if !(h > 0.0) {
            return Err(Error::Domain(format!("height must be positive, got {h}")));
        }
        // By symmetry integrate theta over [0, pi/2] with density 2/pi.
        let inner_err: Cell<Option<Error>> = Cell::new(None);
        let catch = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        };

        let a_ual = integrate(
            |theta| self.los_uav_given_closed(h / theta.cos()),
            0.0,
            FRAC_PI_2,
            &self.spec,
        )? * 2.0
            / PI;

        // NLoS wins: its nearest member must undercut u^(aL/aN) and beat
        // the TBS tier.
        let nlos_tail = 36.0f64.cbrt() * self.nlos_scale();
        let a_uan = integrate(
            |theta| {
                let u = h / theta.cos();
                let hi = u.powf(self.e_ln).min(nlos_tail);
                catch(integrate(
                    |v| self.f_nlos(v) * self.tbs_void(self.r_an_inv * v),
                    0.0,
                    hi,
                    &self.spec,
                ))
            },
            0.0,
            FRAC_PI_2,
            &self.spec,
        )? * 2.0
            / PI;

        // TBS wins: the nearest TBS must undercut the fixed LoS signal
        // and beat the NLoS class.
        let tbs_tail = 6.0 * self.tbs_scale();
        let a_ma = integrate(
            |theta| {
                let u = h / theta.cos();
                let hi = (self.r_an_inv * u.powf(self.e_ln)).min(tbs_tail);
                catch(integrate(
                    |w| self.f_tbs(w) * self.nlos_void(self.r_an * w),
                    0.0,
                    hi,
                    &self.spec,
                ))
            },
            0.0,
            FRAC_PI_2,
            &self.spec,
        )? * 2.0
            / PI;

        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        Ok(AssociationReport { a_ma, a_ual_bar: a_ual, a_uan_bar: a_uan })
    }

    pub fn vs_height(&self, heights_m: &[f64]) -> Result<Vec<HeightPoint>> {
        heights_m
            .iter()
            .map(|&h| Ok(HeightPoint { height_m: h, report: self.at_fixed_los_height(h)? }))
            .collect()
    }

    // ------------------------------------------------------------------
    // xHaul association
    // ------------------------------------------------------------------

    /// xHaul association of a tagged UAV-AP whose access geometry gives
    /// height `h = d_a cos(theta)`. The UAV-BS wins when its nearest
    /// member undercuts the RSSI boundary `(P_UB/P_M)^(1/aL) d_MB`.
    pub fn xhaul_given_height(&self, h: f64) -> Result<XhaulAssociation> {
        if !(h > 0.0) {
            return Err(Error::Domain(format!("height must be positive, got {h}")));
        }
        if self.p.lambda_ub <= 0.0 {
            return Ok(XhaulAssociation { a_ub: 0.0, a_mb: 1.0 });
        }
        if self.p.lambda_m <= 0.0 {
            return Ok(XhaulAssociation { a_ub: 1.0, a_mb: 0.0 });
        }
        let r = (self.p.p_ub / self.p.p_m).powf(1.0 / self.p.alpha_l);
        let ell = (h / r).max(h);
        let f_mb = |x: f64| crate::geometry::xhaul_tbs_pdf_unchecked(x, h, self.p.lambda_m);
        let cdf_ub = |y: f64| crate::geometry::xhaul_uavbs_cdf_unchecked(y, h, self.p.lambda_ub);
        let scale = self.tbs_scale();
        // Below ell the RSSI boundary r*x stays under the height (full
        // sphere CDF branch); above it the ground-cap branch applies.
        let lower = integrate(|x| cdf_ub(r * x) * f_mb(x), h, ell, &self.spec)?;
        let upper = integrate_tail(|x| cdf_ub(r * x) * f_mb(x), ell, scale, &self.spec)?;
        let a_ub = (lower + upper).clamp(0.0, 1.0);
        Ok(XhaulAssociation { a_ub, a_mb: 1.0 - a_ub })
    }

    /// Access-geometry form: distance and orientation of the tagged
    /// UAV-AP.
    pub fn xhaul(&self, d_a: f64, theta: f64) -> Result<XhaulAssociation> {
        if !(d_a > 0.0) {
            return Err(Error::Domain(format!("access distance must be positive, got {d_a}")));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&theta) {
            return Err(Error::Domain(format!(
                "orientation must lie in [-pi/2, pi/2], got {theta}"
            )));
        }
        self.xhaul_given_height((d_a * theta.cos()).max(f64::MIN_POSITIVE))
    }

    /// xHaul association of the tagged UAV-AP deconditioned over the
    /// serving-AP distance, orientation and visibility class.
    pub fn xhaul_deconditioned(&self) -> Result<XhaulAssociation> {
        let inner_err: Cell<Option<Error>> = Cell::new(None);
        let catch = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        };
        let a_ub_mean_over_theta = |x: f64| {
            catch(integrate(
                |theta| catch(self.xhaul_given_height(x * theta.cos()).map(|xa| xa.a_ub)),
                0.0,
                FRAC_PI_2,
                &self.spec,
            )) * 2.0
                / PI
        };
        // Weight by the access association events of the two UAV classes.
        let los_term = integrate_tail(
            |x| self.f_los(x) * self.los_uav_given_closed(x) * a_ub_mean_over_theta(x),
            0.0,
            self.los_scale(),
            &self.spec,
        )?;
        let nlos_term = integrate_tail(
            |x| self.f_nlos(x) * self.nlos_uav_given_closed(x) * a_ub_mean_over_theta(x),
            0.0,
            self.nlos_scale(),
            &self.spec,
        )?;
        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        let uav_mass = self.los_uav()? + self.nlos_uav()?;
        if uav_mass <= 0.0 {
            return Ok(XhaulAssociation { a_ub: 0.0, a_mb: 1.0 });
        }
        let a_ub = ((los_term + nlos_term) / uav_mass).clamp(0.0, 1.0);
        Ok(XhaulAssociation { a_ub, a_mb: 1.0 - a_ub })
    }

    // ------------------------------------------------------------------
    // Density sweep
    // ------------------------------------------------------------------

    /// LoS association as a function of the UAV-AP density alone, with
    /// everything else taken from this parameter set.
    fn a_ual_at_density(&self, lambda_ua: f64) -> Result<f64> {
        let mut p = self.p.clone();
        p.lambda_ua = lambda_ua;
        Association::with_weights(&p, &self.weights()).los_uav()
    }

    /// Sweep the UAV-AP density, reporting the association triple per
    /// grid point and the (refined) maximizer of the LoS association.
    pub fn sweep_density(&self, lambda_grid: &[f64]) -> Result<DensitySweep> {
        if lambda_grid.is_empty() {
            return Err(Error::Domain("density grid must be nonempty".into()));
        }
        if lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("density grid must be strictly ascending".into()));
        }
        let mut points = Vec::with_capacity(lambda_grid.len());
        for &lambda in lambda_grid {
            let mut p = self.p.clone();
            p.lambda_ua = lambda;
            let assoc = Association::with_weights(&p, &self.weights());
            points.push(DensityPoint { lambda_ua: lambda, report: assoc.report()? });
        }
        let best = points
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.report.a_ual_bar.total_cmp(&b.1.report.a_ual_bar))
            .map(|(i, _)| i)
            .unwrap();

        let (mut argmax_lambda, mut argmax_val) =
            (points[best].lambda_ua, points[best].report.a_ual_bar);

        // Golden-section refinement on log density, only with an interior
        // bracket: the grid scan owns the global picture.
        if best > 0 && best + 1 < points.len() {
            let mut lo = points[best - 1].lambda_ua.ln();
            let mut hi = points[best + 1].lambda_ua.ln();
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            let mut x1 = hi - phi * (hi - lo);
            let mut x2 = lo + phi * (hi - lo);
            let mut f1 = self.a_ual_at_density(x1.exp())?;
            let mut f2 = self.a_ual_at_density(x2.exp())?;
            for _ in 0..40 {
                if (hi - lo).abs() < 1e-4 {
                    break;
                }
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + phi * (hi - lo);
                    f2 = self.a_ual_at_density(x2.exp())?;
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - phi * (hi - lo);
                    f1 = self.a_ual_at_density(x1.exp())?;
                }
            }
            let (x_best, f_best) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
            if f_best > argmax_val {
                argmax_lambda = x_best.exp();
                argmax_val = f_best;
            }
        }

        Ok(DensitySweep { points, argmax_lambda_ua: argmax_lambda, argmax_a_ual: argmax_val })
    }
}
