//! Numerical programs around the positivity statement
//! `S_σ + T_σ t² + (t²+(1-σ)²)(t²+σ²) ∫ W_σ e^{-σx} cos(tx) dx > 0`.

mod montecarlo;
mod poly;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use montecarlo::{ks_critical_1pct, ks_statistic, mc_check, mc_reports, sample_x_sigma, MCReport, XSampler};
pub use poly::{
    check_prop_thmsd, check_prop_thmsd_ladder, lemma_moment_bound, partial_cosine_bound, poly_approx_v, truncation_levels,
    PolyApprox, ThmsdReport, TruncationLevels, DEFAULT_N2_CAP, EPSILON_LADDER,
};

use crate::config::{EvalConfig, SigmaParam};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate_oscillatory_cos, Decay, QuadResult};
use crate::representation::{quartic_factor, JRoute, ModulusRepresentation};
use crate::roots::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanRoute {
    /// `S + T t² + q(t) ∫ W e^{-σx} cos(tx) dx`.
    Representation,
    /// The same quantity through `J_τ` and `η_τ`.
    JEta,
    /// `2 ∫ K_σ(x) cos(tx) dx`, positive exactly when the others are.
    KFourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Positive,
    /// `|value| ≤ err_est`: refine before drawing conclusions.
    Indeterminate,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub sigma: f64,
    pub route: ScanRoute,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub errs: Vec<f64>,
    pub min_value: f64,
    pub min_t: f64,
    /// Points with `value + err_est < 0`.
    pub violations: Vec<f64>,
    pub indeterminate: Vec<f64>,
    pub err_est: f64,
}

impl ScanReport {
    pub fn all_positive(&self) -> bool {
        self.violations.is_empty() && self.indeterminate.is_empty()
    }
}

pub fn classify(value: f64, err: f64) -> PointStatus {
    if value + err < 0.0 {
        PointStatus::Violation
    } else if value - err <= 0.0 {
        PointStatus::Indeterminate
    } else {
        PointStatus::Positive
    }
}

/// `0, step, 2·step, …` up to and including `t_max` (within rounding).
pub fn t_grid(t_min: f64, t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) || !(t_max >= t_min) {
        return Err(Error::domain("t_grid", format!("bad grid [{t_min}, {t_max}] step {step}")));
    }
    let n = ((t_max - t_min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| t_min + i as f64 * step).collect())
}

/// One scanner per route, built once per `σ`.
pub enum Evaluator {
    Representation(ModulusRepresentation),
    JEta(JRoute),
    KFourier(KKernel),
}

impl Evaluator {
    pub fn new(sigma: SigmaParam, route: ScanRoute, cfg: &EvalConfig) -> Result<Self> {
        Ok(match route {
            ScanRoute::Representation => Evaluator::Representation(ModulusRepresentation::new(sigma, cfg)?),
            ScanRoute::JEta => Evaluator::JEta(JRoute::new(sigma.tau(), cfg)?),
            ScanRoute::KFourier => Evaluator::KFourier(KKernel::new(sigma, cfg)?),
        })
    }

    pub fn eval(&self, t: f64) -> Result<QuadResult> {
        match self {
            Evaluator::Representation(r) => r.twice_mod_sq(t),
            Evaluator::JEta(j) => j.twice_mod_sq(t),
            Evaluator::KFourier(k) => k.fourier(t),
        }
    }
}

/// Evaluates the chosen expression on `0..=t_max` in steps of `step`.
pub fn scan_inequality(sigma: SigmaParam, t_max: f64, step: f64, route: ScanRoute, cfg: &EvalConfig) -> Result<ScanReport> {
    sigma.require_nominal("scan_inequality")?;
    let grid = t_grid(0.0, t_max, step)?;
    let ev = Evaluator::new(sigma, route, cfg)?;
    let results = grid.par_iter().map(|&t| ev.eval(t)).collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = results.iter().map(|r| r.value).collect();
    let errs: Vec<f64> = results.iter().map(|r| r.err_est).collect();
    let (mut min_value, mut min_t) = (f64::INFINITY, f64::NAN);
    let mut violations = Vec::new();
    let mut indeterminate = Vec::new();
    for ((&t, &v), &e) in grid.iter().zip(&values).zip(&errs) {
        if v < min_value {
            min_value = v;
            min_t = t;
        }
        match classify(v, e) {
            PointStatus::Violation => violations.push(t),
            PointStatus::Indeterminate => indeterminate.push(t),
            PointStatus::Positive => {}
        }
    }
    Ok(ScanReport {
        sigma: sigma.value(),
        route,
        err_est: errs.iter().copied().fold(0.0, f64::max),
        grid,
        values,
        errs,
        min_value,
        min_t,
        violations,
        indeterminate,
    })
}

/// `K_σ(x) = c ℋ_σ(x) + σ[S - T(1-σ)²] e^{(σ-1)x} - (1-σ)[S - Tσ²] e^{-σx}`
/// with `c = 2^{σ+3/2} π^{-1} σ(1-σ)(2σ-1)`.
#[derive(Debug, Clone)]
pub struct KKernel {
    rep: ModulusRepresentation,
    /// `σ(1-σ)(2σ-1)`.
    c: f64,
    a1: f64,
    a2: f64,
}

impl KKernel {
    pub fn new(sigma: SigmaParam, cfg: &EvalConfig) -> Result<Self> {
        let s = sigma.require_nominal("k_sigma")?;
        let rep = ModulusRepresentation::new(sigma, cfg)?;
        Ok(Self::from_representation(rep, s))
    }

    pub fn from_representation(rep: ModulusRepresentation, s: f64) -> Self {
        KKernel {
            c: s * (1.0 - s) * (2.0 * s - 1.0),
            a1: rep.s_const - rep.t_const * (1.0 - s) * (1.0 - s),
            a2: rep.s_const - rep.t_const * s * s,
            rep,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.rep.sigma.value()
    }

    /// `K_σ(x)`; the `ℋ` part is `W_σ(x) e^{-σx}` up to the constant.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let s = self.sigma();
        Ok(self.c * self.rep.w(x)? * (-s * x).exp() + s * self.a1 * ((s - 1.0) * x).exp()
            - (1.0 - s) * self.a2 * (-s * x).exp())
    }

    /// The two exponential terms alone, the large-`x` form of `K_σ`.
    pub fn tail_form(&self, x: f64) -> f64 {
        let s = self.sigma();
        s * self.a1 * ((s - 1.0) * x).exp() - (1.0 - s) * self.a2 * (-s * x).exp()
    }

    /// `2 ∫_0^∞ K_σ(x) cos(tx) dx`, the exponential parts in closed form.
    pub fn fourier(&self, t: f64) -> Result<QuadResult> {
        let s = self.sigma();
        let i = self.rep.w_cosine_integral(t)?;
        let lap = |a: f64| a / (a * a + t * t);
        let exp_part = s * self.a1 * lap(1.0 - s) - (1.0 - s) * self.a2 * lap(s);
        Ok(QuadResult {
            value: 2.0 * (self.c * i.value + exp_part),
            err_est: 2.0 * (self.c * i.err_est + self.rep.constants_err * (1.0 + 1.0 / s + 1.0 / (1.0 - s))),
            ..i
        })
    }

    /// `4σ(1-σ)(2σ-1) |ξ(σ-it)|² / ((t²+(1-σ)²)(t²+σ²))`, for comparison with [`Self::fourier`].
    pub fn fourier_from_modulus(&self, xi_mod_sq: f64, t: f64) -> f64 {
        4.0 * self.c * xi_mod_sq / quartic_factor(self.sigma(), t)
    }

    /// `A_σ(t) = ∫ K cos(tx) / ∫ K`.
    pub fn autocorrelation(&self, t: f64, norm: f64) -> Result<QuadResult> {
        let f = self.fourier(t)?;
        Ok(QuadResult {
            value: f.value / norm,
            err_est: f.err_est / norm.abs(),
            ..f
        })
    }
}

pub fn k_sigma(sigma: SigmaParam, x: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("k_sigma", format!("need x >= 0, got {x}")));
    }
    KKernel::new(sigma, cfg)?.eval(x)
}

pub fn k_fourier(sigma: SigmaParam, t: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(KKernel::new(sigma, cfg)?.fourier(t)?.value)
}

pub fn autocorrelation_a(sigma: SigmaParam, t: f64, cfg: &EvalConfig) -> Result<f64> {
    let k = KKernel::new(sigma, cfg)?;
    let norm = k.fourier(0.0)?.value;
    Ok(k.autocorrelation(t, norm)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IotaCandidate {
    pub t: f64,
    pub bracket: (f64, f64),
    pub err_est: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoReport {
    pub iota_found: Option<IotaCandidate>,
    pub min_a: f64,
    pub min_t: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// Scans a normalized autocorrelation on `[step, t_max]` and bisects the
/// first trustworthy sign change.
///
/// A sign change counts only when both endpoint values exceed ten times
/// their error estimates.
pub fn orthogonalization_scan_with<F>(a: F, t_max: f64, step: f64, tol: f64) -> Result<OrthoReport>
where
    F: Fn(f64) -> Result<QuadResult> + Sync,
{
    let grid = t_grid(step, t_max, step)?;
    let res = grid.par_iter().map(|&t| a(t)).collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = res.iter().map(|r| r.value).collect();
    let (mut min_a, mut min_t) = (f64::INFINITY, f64::NAN);
    for (&t, &v) in grid.iter().zip(&values) {
        if v < min_a {
            min_a = v;
            min_t = t;
        }
    }
    let mut iota_found = None;
    for i in 0..res.len().saturating_sub(1) {
        let (l, r) = (res[i], res[i + 1]);
        let solid = l.value.abs() > 10.0 * l.err_est && r.value.abs() > 10.0 * r.err_est;
        if l.value * r.value < 0.0 && solid {
            let root = bisect(|t| Ok(a(t)?.value), grid[i], grid[i + 1], tol)?;
            iota_found = Some(IotaCandidate {
                t: root.t,
                bracket: root.bracket,
                err_est: root.bracket.1 - root.bracket.0,
            });
            break;
        }
    }
    Ok(OrthoReport {
        iota_found,
        min_a,
        min_t,
        grid,
        values,
    })
}

/// Scan of `A_σ` for its first zero.
pub fn orthogonalization_scan(sigma: SigmaParam, t_max: f64, step: f64, cfg: &EvalConfig) -> Result<OrthoReport> {
    let k = KKernel::new(sigma, cfg)?;
    let norm = k.fourier(0.0)?.value;
    orthogonalization_scan_with(|t| k.autocorrelation(t, norm), t_max, step, 1e-10)
}

/// Normalized transform of the unit box on `[0, 1]`, `sin t / t`, by
/// quadrature. Its first zero is `π`.
pub fn box_kernel_autocorrelation(t: f64, cfg: &EvalConfig) -> Result<QuadResult> {
    try_integrate_oscillatory_cos(|_| Ok(1.0), t, 0.0, Decay::Cutoff(1.0), cfg)
}

#[cfg(test)]
mod tests;
