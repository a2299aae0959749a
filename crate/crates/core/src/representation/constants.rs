//! The constants `S_σ` and `T_σ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{cal_g_capped, cal_h_derivs_at_0, w_prefactor, FRange};
use crate::config::{EvalConfig, SigmaParam};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate_semi_infinite, try_integrate_with_breaks, Decay, QuadResult};
use crate::special_series::{stable_combo_a, stable_combo_b, theta_r, theta_r_prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Closed form in `R`, `R'` with integrals over `(0, ∞)`.
    ADirect,
    /// Derivatives of `H_σ` at 0 through the double series in `F_σ`.
    BSeries,
    /// As `ADirect` with the part on `(0, 1)` folded onto `(1, ∞)` by `y -> 1/y`.
    CInversion,
}

/// Which closed form for `S_σ` the theta-function methods use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SFormula {
    /// Re-derived from `H'` and `H'''` at 0; agrees with the series method.
    Corrected,
    /// The fourteen-term expression as published. Off by about 0.084.
    Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationInfo {
    pub description: String,
    /// Integration window for the defining integrals, if truncated.
    pub integral_range: Option<(f64, f64)>,
    /// Cap on each of `m`, `n` in the double series.
    pub sum_cap: Option<usize>,
    /// Number of terms kept in `R`.
    pub theta_terms: Option<usize>,
}

impl TruncationInfo {
    fn converged(what: &str) -> Self {
        TruncationInfo {
            description: format!("{what}; series and integrals run to tolerance"),
            integral_range: None,
            sum_cap: None,
            theta_terms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub sigma: f64,
    pub s_value: f64,
    pub t_value: f64,
    pub method: Method,
    pub s_formula: SFormula,
    pub truncation: TruncationInfo,
    pub err_est: f64,
    /// Set when `σ` lies outside the range the method is stated for.
    pub warning: Option<String>,
}

/// Running value plus accumulated absolute error.
#[derive(Default)]
struct Acc {
    value: f64,
    err: f64,
}

impl Acc {
    fn add(&mut self, w: f64, r: QuadResult) {
        self.value += w * r.value;
        self.err += w.abs() * r.err_est;
    }
    fn add_exact(&mut self, v: f64) {
        self.value += v;
    }
}

/// `R` and `R'`, either converged or truncated to the first `n` terms with no inversion.
#[derive(Clone, Copy)]
struct Theta {
    terms: Option<usize>,
}

impl Theta {
    fn r(&self, y: f64, cfg: &EvalConfig) -> Result<f64> {
        match self.terms {
            None => theta_r(y, cfg),
            Some(n) => Ok((1..=n).map(|k| 2.0 * (-PI * (k * k) as f64 * y * y).exp()).sum()),
        }
    }
    fn rp(&self, y: f64, cfg: &EvalConfig) -> Result<f64> {
        match self.terms {
            None => theta_r_prime(y, cfg),
            Some(n) => Ok((1..=n)
                .map(|k| {
                    let k2 = (k * k) as f64;
                    -4.0 * PI * y * k2 * (-PI * k2 * y * y).exp()
                })
                .sum()),
        }
    }
    /// `yR + y - 1`.
    fn a(&self, y: f64, cfg: &EvalConfig) -> Result<f64> {
        match self.terms {
            None => stable_combo_a(y, cfg),
            Some(_) => Ok(y * self.r(y, cfg)? + y - 1.0),
        }
    }
    /// `y²R' + 1`.
    fn b(&self, y: f64, cfg: &EvalConfig) -> Result<f64> {
        match self.terms {
            None => stable_combo_b(y, cfg),
            Some(_) => Ok(y * y * self.rp(y, cfg)? + 1.0),
        }
    }
}

/// Integrals over `[1, top]` or `[1, ∞)`.
struct Upper<'a> {
    top: Option<f64>,
    cfg: &'a EvalConfig,
}

impl Upper<'_> {
    fn int<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<QuadResult> {
        match self.top {
            Some(b) => {
                let breaks: Vec<f64> = (0..10).map(|i| 1.0 + (b - 1.0) * i as f64 / 9.0).collect();
                try_integrate_with_breaks(f, &breaks, self.cfg)
            }
            // Every integrand carries a factor R(y) ≤ 2.01 e^{-πy²} and at
            // most y³ R'(y)²; e^{-πy} dominates both on [1, ∞).
            None => try_integrate_semi_infinite(f, 1.0, Decay::Exponential { scale: 1e3, rate: PI }, self.cfg),
        }
    }
}

/// `∫_0^1` of an integrand carrying `A(y)` or `B(y)`, both below `e^{-π/y²}`
/// up to powers of `1/y`: below `y = 0.05` the contribution is under 1e-500.
fn lower_int<F: Fn(f64) -> Result<f64>>(f: F, cfg: &EvalConfig) -> Result<QuadResult> {
    try_integrate_with_breaks(f, &[0.05, 0.1, 0.25, 0.5, 1.0], cfg)
}

fn strip_warning(sigma: SigmaParam) -> Option<String> {
    if sigma.in_strip() {
        None
    } else {
        Some(format!("sigma = {} outside (0, 1); identity not established there", sigma.value()))
    }
}

/// `S_σ` and `T_σ` by the chosen method, fully converged.
pub fn s_t_constants(sigma: SigmaParam, method: Method, cfg: &EvalConfig) -> Result<ConstantsReport> {
    match method {
        Method::BSeries => method_b_converged(sigma, cfg),
        Method::ADirect | Method::CInversion => theta_method(sigma, method, SFormula::Corrected, Theta { terms: None }, None, cfg),
    }
}

/// Reproduces the published numerical recipes.
///
/// * `BSeries`: `m, n ≤ 10`, `F` integrals over `y ∈ [0.001, 20]`.
/// * `CInversion`: `R` cut to five terms, integrals over `[1, 10]`, printed `S` formula.
/// * `ADirect` has no separate recipe and uses the same truncation as `CInversion`.
pub fn s_t_paper_recipe(sigma: SigmaParam, method: Method, cfg: &EvalConfig) -> Result<ConstantsReport> {
    match method {
        Method::BSeries => {
            let cap = 10;
            let range = FRange::PAPER;
            let s = sigma.value();
            let g = (0..4)
                .map(|d| cal_g_capped(sigma, 1.0, d, cap, range, cfg))
                .collect::<Result<Vec<_>>>()?;
            let (s_val, t_val, err) = b_from_g(s, [g[0], g[1], g[2], g[3]]);
            Ok(ConstantsReport {
                sigma: s,
                s_value: s_val,
                t_value: t_val,
                method,
                s_formula: SFormula::Corrected,
                truncation: TruncationInfo {
                    description: "m, n <= 10; F integrals over y in [0.001, 20]".into(),
                    integral_range: Some((0.001, 20.0)),
                    sum_cap: Some(cap),
                    theta_terms: None,
                },
                err_est: err,
                warning: strip_warning(sigma),
            })
        }
        Method::ADirect | Method::CInversion => {
            let mut r = theta_method(sigma, Method::CInversion, SFormula::Printed, Theta { terms: Some(5) }, Some(10.0), cfg)?;
            r.method = method;
            r.truncation = TruncationInfo {
                description: "R cut to n <= 5; integrals over [1, 10]; printed S formula".into(),
                integral_range: Some((1.0, 10.0)),
                sum_cap: None,
                theta_terms: Some(5),
            };
            Ok(r)
        }
    }
}

/// Evaluate a chosen theta-function method with explicit truncation, for
/// studying the published recipe one ingredient at a time.
pub fn s_t_theta_variant(
    sigma: SigmaParam,
    method: Method,
    formula: SFormula,
    theta_terms: Option<usize>,
    upper: Option<f64>,
    cfg: &EvalConfig,
) -> Result<ConstantsReport> {
    if method == Method::BSeries {
        return Err(Error::Unsupported("s_t_theta_variant: series method has no theta form".into()));
    }
    theta_method(sigma, method, formula, Theta { terms: theta_terms }, upper, cfg)
}

fn b_from_g(s: f64, g: [QuadResult; 4]) -> (f64, f64, f64) {
    let q = s * s + (1.0 - s) * (1.0 - s) - 0.25;
    let c = w_prefactor(s);
    let t = g[1].value - 0.5 * g[0].value;
    let sv = -g[3].value - 1.5 * g[2].value + q * t;
    let err = g[3].err_est + 1.5 * g[2].err_est + (q.abs() + 1.0) * (g[1].err_est + g[0].err_est);
    (c * sv, c * t, c * err)
}

fn method_b_converged(sigma: SigmaParam, cfg: &EvalConfig) -> Result<ConstantsReport> {
    let s = sigma.value();
    let h = cal_h_derivs_at_0(sigma, cfg)?;
    let c = w_prefactor(s);
    let q = s * s + (1.0 - s) * (1.0 - s);
    Ok(ConstantsReport {
        sigma: s,
        s_value: c * (q * h.h1 - h.h3),
        t_value: c * h.h1,
        method: Method::BSeries,
        s_formula: SFormula::Corrected,
        truncation: TruncationInfo::converged("double series grouped by mn"),
        err_est: c * (q + 1.0) * h.err_est,
        warning: strip_warning(sigma),
    })
}

fn theta_method(
    sigma: SigmaParam,
    method: Method,
    formula: SFormula,
    th: Theta,
    top: Option<f64>,
    cfg: &EvalConfig,
) -> Result<ConstantsReport> {
    let s = sigma.value();
    let u = Upper { top, cfg };
    let r1 = th.r(1.0, cfg)?;
    let rp1 = th.rp(1.0, cfg)?;
    let c = s * (1.0 - s) * (2.0 * s - 1.0);

    let mut sv = Acc::default();
    match formula {
        SFormula::Corrected => {
            sv.add_exact(-s * r1 - rp1 - (2.0 * s - 1.0) * r1 * r1 / 2.0 + (1.0 - 2.0 * s) * r1 * rp1);
            sv.add(2.0 * c, u.int(|y| Ok(y.powf(-2.0 * s) * th.r(y, cfg)?))?);
            sv.add(-2.0 * c, u.int(|y| Ok(y.powf(1.0 - 2.0 * s) * th.r(y, cfg)?))?);
            sv.add(-c, u.int(|y| Ok(y.powf(1.0 - 2.0 * s) * th.r(y, cfg)?.powi(2)))?);
            sv.add(-c, u.int(|y| Ok(y.powf(2.0 * s - 1.0) * th.r(y, cfg)?.powi(2)))?);
        }
        SFormula::Printed => {
            let s1 = 1.0 - s;
            sv.add_exact(
                -(s - 2.0 * s1 * s1) * r1 - s * rp1 + s1 * (1.0 + 2.0 * s) * r1 * r1 / 2.0 - s * r1 * rp1,
            );
            sv.add(2.0 * c, u.int(|y| Ok(y.powf(-2.0 * s) * th.r(y, cfg)?))?);
            sv.add(-2.0 * c, u.int(|y| Ok(y.powf(1.0 - 2.0 * s) * th.r(y, cfg)?))?);
            sv.add(2.0 * s1 * s1 * (2.0 * s - 1.0), u.int(|y| Ok(y.powf(2.0 * (s - 1.0)) * th.r(y, cfg)?))?);
            sv.add(-c, u.int(|y| Ok(y.powf(1.0 - 2.0 * s) * th.r(y, cfg)?.powi(2)))?);
            sv.add((2.0 * s + 1.0) / 2.0, u.int(|y| Ok(y.powf(2.0 * s) * th.r(y, cfg)?.powi(2)))?);
            sv.add(s1, u.int(|y| Ok(y.powf(3.0 - 2.0 * s) * th.rp(y, cfg)?.powi(2)))?);
            sv.add(-s1, u.int(|y| Ok(y.powf(1.0 - 2.0 * s) * (y * th.rp(y, cfg)?).powi(2)))?);
            sv.add(s, u.int(|y| Ok(y.powf(2.0 * s - 1.0) * (y * th.rp(y, cfg)?).powi(2)))?);
        }
    }

    let s_upper = |y: f64| -> Result<f64> {
        Ok(y.powf(2.0 * (s - 1.0)) * th.r(y, cfg)? * ((1.0 - s) * th.a(y, cfg)? + th.b(y, cfg)?))
    };
    let t_upper = |y: f64| -> Result<f64> {
        Ok(y.powf(2.0 * (s - 1.0)) * th.r(y, cfg)? * (s * th.a(y, cfg)? + th.b(y, cfg)?))
    };
    let mut tv = Acc::default();
    sv.add(-s * (1.0 - s), u.int(s_upper)?);
    tv.add(-1.0, u.int(t_upper)?);
    match method {
        Method::CInversion => {
            sv.add(
                s * (1.0 - s),
                u.int(|y| Ok(y.powf(-2.0 * s) * th.r(1.0 / y, cfg)? * (s * th.r(y, cfg)? + y * th.rp(y, cfg)?)))?,
            );
            tv.add(
                1.0,
                u.int(|y| {
                    Ok(y.powf(-2.0 * s) * th.r(1.0 / y, cfg)? * ((1.0 - s) * th.r(y, cfg)? + y * th.rp(y, cfg)?))
                })?,
            );
        }
        _ => {
            sv.add(-s * (1.0 - s), lower_int(s_upper, cfg)?);
            tv.add(-1.0, lower_int(t_upper, cfg)?);
        }
    }

    let truncation = match (th.terms, top) {
        (None, None) => TruncationInfo::converged(match method {
            Method::CInversion => "theta integrals on [1, inf) after inversion",
            _ => "theta integrals on (0, inf)",
        }),
        (terms, top) => TruncationInfo {
            description: "user-chosen truncation".into(),
            integral_range: top.map(|b| (1.0, b)),
            sum_cap: None,
            theta_terms: terms,
        },
    };
    Ok(ConstantsReport {
        sigma: s,
        s_value: sv.value,
        t_value: tv.value,
        method,
        s_formula: formula,
        truncation,
        err_est: sv.err + tv.err,
        warning: strip_warning(sigma),
    })
}
