//! The modulus representation
//! `2|ξ(σ-it)|² = S_σ + T_σ t² + (t²+(1-σ)²)(t²+σ²) ∫_0^∞ W_σ(x) e^{-σx} cos(tx) dx`
//! and the objects it is built from.

mod constants;
mod jroute;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use constants::{s_t_constants, s_t_paper_recipe, s_t_theta_variant, ConstantsReport, Method, SFormula, TruncationInfo};
pub use jroute::{
    a_coeff, c_coeff, c_coeff_via_u, c_magnitude_bound, j_cosine_double_integral, modulus_rhs_via_j, JRoute,
    PowerSeriesCoeffs,
};

use crate::config::{EvalConfig, SigmaParam};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate_finite, try_integrate_oscillatory_cos, try_integrate_with_breaks, Decay, QuadResult};
use crate::special_series::{divisor_sigma, sup_constant_cn, theta_r};

/// Integration range used for `F_σ` and its derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FRange {
    /// The full half line, truncated where the integrand is negligible.
    Full,
    /// `y ∈ [lo, hi]` in the original variable of the defining integral.
    Window { lo: f64, hi: f64 },
}

impl FRange {
    pub const PAPER: FRange = FRange::Window { lo: 0.001, hi: 20.0 };

    /// Range in `u`, where `y = 2(cosh u - 1)`.
    fn u_range(self, lambda: f64) -> (f64, f64) {
        match self {
            // Beyond this point e^{-2λ(cosh u - 1)} < e^{-80}.
            FRange::Full => (0.0, (1.0 + 40.0 / lambda).acosh()),
            FRange::Window { lo, hi } => ((1.0 + 0.5 * lo).acosh(), (1.0 + 0.5 * hi).acosh()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FForm {
    Direct,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WForm {
    Convolution,
    Closed,
}

/// `e^{2λ} F^{(deriv)}_σ(λ)` by the substitution `y = 2(cosh u - 1)`,
/// under which `√(y²+4y) = 2 sinh u` and `y + 2 ± √(y²+4y) = 2e^{±u}`.
fn f_scaled(sigma: f64, lambda: f64, deriv: u32, range: FRange, cfg: &EvalConfig) -> Result<QuadResult> {
    let tau = sigma - 0.5;
    let (a, b) = range.u_range(lambda);
    let poly = move |c: f64| -> f64 {
        match deriv {
            0 => lambda,
            1 => 1.0 - 2.0 * lambda * c,
            2 => -2.0 * c * (2.0 - 2.0 * lambda * c),
            _ => 4.0 * c * c * (3.0 - 2.0 * lambda * c),
        }
    };
    let r = try_integrate_finite(
        |u| {
            let c = u.cosh();
            // cosh u - 1 = 2 sinh²(u/2) avoids cancellation near 0.
            let s = (0.5 * u).sinh();
            Ok(poly(c) * (-4.0 * lambda * s * s).exp() * (tau * u).cosh())
        },
        a,
        b,
        cfg,
    )?;
    Ok(r.scaled(2f64.powf(-tau)))
}

/// `F^{(deriv)}_σ(λ)`.
///
/// The direct form supports derivatives up to third order; the η form only
/// the function itself.
pub fn f_sigma(sigma: SigmaParam, lambda: f64, deriv: u32, form: FForm, cfg: &EvalConfig) -> Result<f64> {
    f_sigma_in(sigma, lambda, deriv, form, FRange::Full, cfg).map(|r| r.value)
}

pub fn f_sigma_in(
    sigma: SigmaParam,
    lambda: f64,
    deriv: u32,
    form: FForm,
    range: FRange,
    cfg: &EvalConfig,
) -> Result<QuadResult> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain("f_sigma", format!("need lambda > 0, got {lambda}")));
    }
    if deriv > 3 {
        return Err(Error::domain("f_sigma", format!("derivative order {deriv} not in 0..=3")));
    }
    let s = sigma.value();
    let damp = (-2.0 * lambda).exp();
    match form {
        FForm::Direct => Ok(f_scaled(s, lambda, deriv, range, cfg)?.scaled(damp)),
        FForm::Eta if deriv > 0 => Err(Error::Unsupported(format!(
            "f_sigma: derivative order {deriv} is only available in the direct form"
        ))),
        FForm::Eta => {
            let tau = crate::config::TauParam::new(s - 0.5)?;
            let g = |y: f64| -> Result<f64> { Ok(lambda * (-2.0 * lambda * (y - 1.0)).exp()) };
            let y_cut = 1.0 + 40.0 / lambda;
            let r = crate::quadrature::try_integrate_eta_weighted(g, tau.value(), Decay::Cutoff(y_cut), cfg)?;
            Ok(r.scaled(2f64.powf(-(s + 0.5)) * damp))
        }
    }
}

/// `Σ_{mn=k} m^{-σ-1/2} n^{σ-3/2} = k^{σ-3/2} σ_{1-2σ}(k)`.
pub fn cal_g_coeff(sigma: f64, k: u64) -> f64 {
    (k as f64).powf(sigma - 1.5) * divisor_sigma(k, 1.0 - 2.0 * sigma)
}

/// `G^{(deriv)}_σ(λ) = Σ_{m,n} m^{-σ-1/2} n^{σ-3/2} (πmn)^deriv F^{(deriv)}_σ(πmnλ)`,
/// grouped by `k = mn`.
pub fn cal_g(sigma: SigmaParam, lambda: f64, deriv: u32, cfg: &EvalConfig) -> Result<f64> {
    cal_g_detail(sigma, lambda, deriv, cfg).map(|r| r.value)
}

pub fn cal_g_detail(sigma: SigmaParam, lambda: f64, deriv: u32, cfg: &EvalConfig) -> Result<QuadResult> {
    let s = sigma.value();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for k in 1..=cfg.series_max_terms as u64 {
        let pk = PI * k as f64;
        let f = f_sigma_in(sigma, pk * lambda, deriv, FForm::Direct, FRange::Full, cfg)?;
        let w = cal_g_coeff(s, k) * pk.powi(deriv as i32);
        let term = w * f.value;
        sum += term;
        err += w.abs() * f.err_est;
        evals += f.evals;
        if k >= 2 && term.abs() <= cfg.series_tol * sum.abs() {
            return Ok(QuadResult {
                value: sum,
                err_est: err,
                evals,
                truncation_point: Some(k as f64),
                converged: true,
            });
        }
    }
    Err(Error::SeriesConvergence {
        func: "cal_g",
        terms: cfg.series_max_terms,
    })
}

/// The double sum with both indices capped at `cap` and `F` integrated over
/// `range`.
pub fn cal_g_capped(sigma: SigmaParam, lambda: f64, deriv: u32, cap: usize, range: FRange, cfg: &EvalConfig) -> Result<QuadResult> {
    let s = sigma.value();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for m in 1..=cap {
        for n in 1..=cap {
            let pk = PI * (m * n) as f64;
            let f = f_sigma_in(sigma, pk * lambda, deriv, FForm::Direct, range, cfg)?;
            let w = (m as f64).powf(-s - 0.5) * (n as f64).powf(s - 1.5) * pk.powi(deriv as i32);
            sum += w * f.value;
            err += w.abs() * f.err_est;
            evals += f.evals;
        }
    }
    Ok(QuadResult {
        value: sum,
        err_est: err,
        evals,
        truncation_point: None,
        converged: true,
    })
}

/// `H_σ(x) = G_σ(e^x) e^{-x/2}`.
pub fn cal_h(sigma: SigmaParam, x: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(cal_g(sigma, x.exp(), 0, cfg)? * (-0.5 * x).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HDerivs {
    pub h0: f64,
    pub h1: f64,
    pub h3: f64,
    pub err_est: f64,
}

/// `H_σ(0)`, `H'_σ(0)`, `H'''_σ(0)` from `G_σ` and its derivatives at `λ = 1`.
pub fn cal_h_derivs_at_0(sigma: SigmaParam, cfg: &EvalConfig) -> Result<HDerivs> {
    let g = (0..4)
        .map(|d| cal_g_detail(sigma, 1.0, d, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(HDerivs {
        h0: g[0].value,
        h1: g[1].value - 0.5 * g[0].value,
        h3: g[3].value + 1.5 * g[2].value + 0.25 * g[1].value - 0.125 * g[0].value,
        err_est: g[3].err_est + 1.5 * g[2].err_est + 0.25 * g[1].err_est + 0.125 * g[0].err_est,
    })
}

/// `2^{σ+3/2} / π`.
pub fn w_prefactor(sigma: f64) -> f64 {
    2f64.powf(sigma + 1.5) / PI
}

/// `W_σ(x) = ∫ R(e^y) R(e^{x-y}) e^{x+(2σ-1)y} dy`.
pub fn w_sigma(sigma: SigmaParam, x: f64, form: WForm, cfg: &EvalConfig) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("w_sigma", format!("x = {x} is not finite")));
    }
    let s = sigma.value();
    match form {
        WForm::Closed => Ok(w_prefactor(s) * cal_g(sigma, x.exp(), 0, cfg)? * ((s - 0.5) * x).exp()),
        WForm::Convolution => {
            // R(e^z) < 1e-300 for z > 3; the window covers both factors.
            let lo = x.min(0.0) - 3.0;
            let hi = x.max(0.0) + 3.0;
            let mut breaks = vec![lo, lo + 2.0, 0.0f64.min(x), 0.0f64.max(x), hi - 2.0, hi];
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let r = try_integrate_with_breaks(
                |y| Ok(theta_r(y.exp(), cfg)? * theta_r((x - y).exp(), cfg)? * (x + (2.0 * s - 1.0) * y).exp()),
                &breaks,
                cfg,
            )?;
            Ok(r.value)
        }
    }
}

/// Certified decay `W_σ(x) ≤ (C_1 + C_{4c+3}) C_{2c+3} e^{-2(c+1)x}`, `c = ⌈|σ|⌉`.
pub fn w_decay_bound(sigma: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    let c = sigma.abs().ceil() as u32;
    let k = (sup_constant_cn(1, cfg)? + sup_constant_cn(4 * c + 3, cfg)?) * sup_constant_cn(2 * c + 3, cfg)?;
    Ok((k, 2.0 * (c as f64 + 1.0)))
}

/// `(t² + (1-σ)²)(t² + σ²)`.
pub fn quartic_factor(sigma: f64, t: f64) -> f64 {
    let t2 = t * t;
    (t2 + (1.0 - sigma) * (1.0 - sigma)) * (t2 + sigma * sigma)
}

/// Precomputed pieces of the modulus representation for one `σ`.
#[derive(Debug, Clone)]
pub struct ModulusRepresentation {
    pub sigma: SigmaParam,
    pub s_const: f64,
    pub t_const: f64,
    pub constants_err: f64,
    w_decay: Decay,
    cfg: EvalConfig,
}

impl ModulusRepresentation {
    pub fn new(sigma: SigmaParam, cfg: &EvalConfig) -> Result<Self> {
        let report = s_t_constants(sigma, Method::ADirect, cfg)?;
        Self::with_constants(sigma, report.s_value, report.t_value, report.err_est, cfg)
    }

    pub fn with_constants(sigma: SigmaParam, s_const: f64, t_const: f64, err: f64, cfg: &EvalConfig) -> Result<Self> {
        let s = sigma.value();
        let (k, rate) = w_decay_bound(s, cfg)?;
        Ok(ModulusRepresentation {
            sigma,
            s_const,
            t_const,
            constants_err: err,
            w_decay: Decay::Exponential { scale: k, rate: rate + s },
            cfg: *cfg,
        })
    }

    pub fn w(&self, x: f64) -> Result<f64> {
        w_sigma(self.sigma, x, WForm::Closed, &self.cfg)
    }

    /// `∫_0^∞ W_σ(x) e^{-σx} cos(tx) dx`.
    pub fn w_cosine_integral(&self, t: f64) -> Result<QuadResult> {
        let s = self.sigma.value();
        try_integrate_oscillatory_cos(|x| Ok(self.w(x)? * (-s * x).exp()), t, 0.0, self.w_decay, &self.cfg)
    }

    /// `∫_0^∞ W_σ(x) e^{-σx} x^{2n} dx` over `[0, upper]`.
    pub fn w_moment(&self, n: u32, upper: f64) -> Result<QuadResult> {
        let s = self.sigma.value();
        let p = 2 * n as i32;
        let mut breaks = vec![0.0];
        let mut b = 0.5;
        while b < upper {
            breaks.push(b);
            b *= 2.0;
        }
        breaks.push(upper);
        try_integrate_with_breaks(|x| Ok(self.w(x)? * (-s * x).exp() * x.powi(p)), &breaks, &self.cfg)
    }

    pub fn w_decay(&self) -> Decay {
        self.w_decay
    }

    /// `2|ξ(σ-it)|²` from the representation.
    pub fn twice_mod_sq(&self, t: f64) -> Result<QuadResult> {
        let s = self.sigma.value();
        let q = quartic_factor(s, t);
        let i = self.w_cosine_integral(t)?;
        Ok(QuadResult {
            value: self.s_const + self.t_const * t * t + q * i.value,
            err_est: self.constants_err * (1.0 + t * t) + q * i.err_est,
            evals: i.evals,
            truncation_point: i.truncation_point,
            converged: i.converged,
        })
    }

    /// `|ξ(σ-it)|²` from the representation.
    pub fn eval(&self, t: f64) -> Result<QuadResult> {
        Ok(self.twice_mod_sq(t)?.scaled(0.5))
    }
}

/// `|ξ(σ-it)|²` via the `S`, `T`, `W` representation.
pub fn modulus_rhs(sigma: SigmaParam, t: f64, cfg: &EvalConfig) -> Result<f64> {
    sigma.require_strip("modulus_rhs")?;
    Ok(ModulusRepresentation::new(sigma, cfg)?.eval(t)?.value)
}
