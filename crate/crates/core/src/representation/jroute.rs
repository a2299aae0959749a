//! The route through `J_τ` and `η_τ`, and the Taylor coefficients of
//! `|ξ(σ-it)|²` in `t²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{EvalConfig, SigmaParam, TauParam};
use crate::error::{Error, Result};
use crate::quadrature::{
    try_integrate_eta_weighted, try_integrate_oscillatory_cos, try_integrate_semi_infinite, Decay, QuadResult,
};
use crate::special_series::j_tau;
use crate::xi_oracle::{u_sigma, u_sigma_decay, UForm};

/// Where `2πy(e^{2u} - 1)` passes `60 + extra`; beyond it the `u` integrand
/// is negligible next to its value at `u = 0`.
fn u_cutoff(y: f64, extra: f64) -> f64 {
    (0.5 * (1.0 + (60.0 + extra) / (2.0 * PI * y)).ln()).max(1.0)
}

/// Bound on the `y` integrands below: everything carries `e^{-2πy}` times
/// at most a cubic in `y`.
fn y_decay() -> Decay {
    Decay::Exponential { scale: 1e5, rate: 5.0 }
}

/// `∫_1^∞ ∫_1^∞ cos(2t ln x) J_τ(x²y) η_τ(y) dx dy`.
pub fn j_cosine_double_integral(tau: TauParam, t: f64, cfg: &EvalConfig) -> Result<QuadResult> {
    let inner = |y: f64| -> Result<f64> {
        // x = e^u
        let r = try_integrate_oscillatory_cos(
            |u| Ok(u.exp() * j_tau(tau, (2.0 * u).exp() * y, 0, cfg)?),
            2.0 * t,
            0.0,
            Decay::Cutoff(u_cutoff(y, 0.0)),
            cfg,
        )?;
        Ok(r.value)
    };
    try_integrate_eta_weighted(inner, tau.value(), Decay::Exponential { scale: 2.0, rate: 2.0 * PI }, cfg)
}

/// `a(k) = 2^{2k+1} ∫_1^∞ ∫_1^∞ (ln x)^{2k} J_τ(x²y) η_τ(y) dx dy`.
pub fn a_coeff(tau: TauParam, k: u32, cfg: &EvalConfig) -> Result<QuadResult> {
    let p = 2 * k as i32;
    let inner = |y: f64| -> Result<f64> {
        let r = try_integrate_semi_infinite(
            |u| Ok(u.powi(p) * u.exp() * j_tau(tau, (2.0 * u).exp() * y, 0, cfg)?),
            0.0,
            Decay::Cutoff(u_cutoff(y, 4.0 * k as f64)),
            cfg,
        )?;
        Ok(r.value)
    };
    let r = try_integrate_eta_weighted(inner, tau.value(), Decay::Exponential { scale: 1e3, rate: 2.0 * PI }, cfg)?;
    Ok(r.scaled(2f64.powi(p + 1)))
}

/// `∫_1^∞ (Σ_d p_d(y) J_τ^{(d)}(y)) η_τ(y) dy`, `p_d(y) = w_d y^d`.
fn j_moment(tau: TauParam, w: [f64; 4], cfg: &EvalConfig) -> Result<QuadResult> {
    try_integrate_eta_weighted(
        |y| {
            let mut acc = 0.0;
            for (d, &wd) in w.iter().enumerate() {
                if wd != 0.0 {
                    acc += wd * y.powi(d as i32) * j_tau(tau, y, d as u32, cfg)?;
                }
            }
            Ok(acc)
        },
        tau.value(),
        y_decay(),
        cfg,
    )
}

/// `S` and `T` through `J_τ`, cached for repeated evaluation in `t`.
#[derive(Debug, Clone)]
pub struct JRoute {
    pub tau: TauParam,
    pub s_const: f64,
    pub t_const: f64,
    pub err_est: f64,
    cfg: EvalConfig,
}

impl JRoute {
    pub fn new(tau: TauParam, cfg: &EvalConfig) -> Result<Self> {
        let t2 = tau.value() * tau.value();
        let s = j_moment(tau, [2.0 * t2 + 0.25, 4.0 * t2 - 5.5, -9.0, -2.0], cfg)?;
        let t = j_moment(tau, [1.0, 2.0, 0.0, 0.0], cfg)?;
        Ok(JRoute {
            tau,
            s_const: s.value,
            t_const: t.value,
            err_est: s.err_est + t.err_est,
            cfg: *cfg,
        })
    }

    /// `2|ξ(σ-it)|² = S + T t² + 4[(t²+τ²+1/4)² - τ²] D(t)`, with `D` the
    /// double integral of `J_τ` against `cos(2t ln x) η_τ(y)`.
    pub fn twice_mod_sq(&self, t: f64) -> Result<QuadResult> {
        let t2 = t * t;
        let tau2 = self.tau.value() * self.tau.value();
        let p = (t2 + tau2 + 0.25).powi(2) - tau2;
        let d = j_cosine_double_integral(self.tau, t, &self.cfg)?;
        Ok(QuadResult {
            value: self.s_const + self.t_const * t2 + 4.0 * p * d.value,
            err_est: self.err_est * (1.0 + t2) + 4.0 * p * d.err_est,
            evals: d.evals,
            truncation_point: d.truncation_point,
            converged: d.converged,
        })
    }
}

/// `2|ξ(σ-it)|²` through `J_τ`, `σ = τ + 1/2`.
pub fn modulus_rhs_via_j(tau: TauParam, t: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(JRoute::new(tau, cfg)?.twice_mod_sq(t)?.value)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeriesCoeffs {
    pub tau: f64,
    /// `a(0..=k_max)`.
    pub a: Vec<f64>,
    /// `c(0..=k_max)`, with `|ξ(σ-it)|² = Σ c(k) t^{2k}`.
    pub c: Vec<f64>,
    pub err_est: Vec<f64>,
}

impl PowerSeriesCoeffs {
    pub fn compute(tau: TauParam, k_max: u32, cfg: &EvalConfig) -> Result<Self> {
        let a = (0..=k_max).map(|k| a_coeff(tau, k, cfg)).collect::<Result<Vec<_>>>()?;
        let t2 = tau.value() * tau.value();
        let e0 = j_moment(tau, [(1.0 + 8.0 * t2) / 8.0, -(11.0 - 8.0 * t2) / 4.0, -4.5, -1.0], cfg)?;
        let e1 = j_moment(tau, [0.5, 1.0, 0.0, 0.0], cfg)?;
        let m = (t2 - 0.25).powi(2);
        let n = t2 + 0.25;
        let mut c = Vec::with_capacity(a.len());
        let mut err = Vec::with_capacity(a.len());
        for k in 0..=k_max as usize {
            let (v, e) = match k {
                0 => (e0.value + m * a[0].value, e0.err_est + m * a[0].err_est),
                1 => (
                    e1.value - 0.5 * m * a[1].value + 2.0 * n * a[0].value,
                    e1.err_est + 0.5 * m * a[1].err_est + 2.0 * n * a[0].err_est,
                ),
                _ => {
                    let kf = k as f64;
                    let w1 = 4.0 * kf * (2.0 * kf - 1.0) * n;
                    let w2 = 2.0 * kf * (2.0 * kf - 1.0) * (2.0 * kf - 2.0) * (2.0 * kf - 3.0);
                    let f = factorial(2 * k as u32);
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    (
                        sign / f * (m * a[k].value - w1 * a[k - 1].value + w2 * a[k - 2].value),
                        (m * a[k].err_est + w1 * a[k - 1].err_est + w2 * a[k - 2].err_est) / f,
                    )
                }
            };
            c.push(v);
            err.push(e);
        }
        Ok(PowerSeriesCoeffs {
            tau: tau.value(),
            a: a.iter().map(|r| r.value).collect(),
            c,
            err_est: err,
        })
    }

    /// `Σ c(k) t^{2k}`.
    pub fn eval(&self, t: f64) -> f64 {
        let t2 = t * t;
        self.c.iter().rev().fold(0.0, |acc, &ck| acc * t2 + ck)
    }
}

/// `c(k)` alone; computes `a(0..=k)`.
pub fn c_coeff(tau: TauParam, k: u32, cfg: &EvalConfig) -> Result<f64> {
    Ok(PowerSeriesCoeffs::compute(tau, k, cfg)?.c[k as usize])
}

/// `c(k) = (-1)^k / (2 (2k)!) ∫_0^∞ U_σ(y) y^{2k} dy`.
pub fn c_coeff_via_u(sigma: SigmaParam, k: u32, cfg: &EvalConfig) -> Result<QuadResult> {
    if !sigma.in_strip() {
        return Err(Error::domain("c_coeff_via_u", format!("sigma = {} outside (0, 1)", sigma.value())));
    }
    let p = 2 * k as i32;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let r = try_integrate_semi_infinite(
        |y| Ok(u_sigma(sigma, y, UForm::TwoTerm, cfg)? * y.powi(p)),
        0.0,
        Decay::Cutoff(u_moment_cutoff(k)),
        cfg,
    )?;
    Ok(r.scaled(sign / (2.0 * factorial(2 * k))))
}

/// First `Y ≥ 1` where the bound `K y^{2k} e^{y - e^y}` on the moment integrand
/// drops below `e^{-40}`.
fn u_moment_cutoff(k: u32) -> f64 {
    let ln_k = match u_sigma_decay() {
        Decay::DoubleExponential { scale, .. } => scale.ln(),
        _ => 0.0,
    };
    let mut y = 1.0f64;
    while y.exp() - y - 2.0 * f64::from(k) * y.ln() - ln_k < 40.0 {
        y += 0.125;
    }
    y
}

/// `48π⁸ (e^{15} 3^{2k+1} + k!) / (2k)!`.
pub fn c_magnitude_bound(k: u32) -> f64 {
    48.0 * PI.powi(8) * (15f64.exp() * 3f64.powi(2 * k as i32 + 1) + factorial(k)) / factorial(2 * k)
}
