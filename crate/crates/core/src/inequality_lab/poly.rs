//! Polynomial truncations `V^N_σ` of the positivity statement and the
//! explicit truncation levels `N_{ε,σ,T}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::t_grid;
use crate::config::{EvalConfig, SigmaParam};
use crate::error::{Error, Result};
use crate::quadrature::{composite_kronrod, try_integrate_semi_infinite};
use crate::representation::{quartic_factor, ModulusRepresentation};
use crate::special_series::{sup_constant_c, sup_constant_cn};

/// Largest `N2` actually summed before substitution kicks in.
pub const DEFAULT_N2_CAP: u64 = 100_000;

/// `ε` values tried, in order, when no `ε` is given.
pub const EPSILON_LADDER: [f64; 5] = [0.5, 0.25, 0.1, 0.05, 0.01];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationLevels {
    pub epsilon: f64,
    pub sigma: f64,
    pub t_cap: u32,
    /// The supremum constant `C` used in both formulas.
    pub c_const: f64,
    pub n1: u64,
    pub n2: u128,
    /// `N2` did not fit in 128 bits and was clamped.
    pub n2_saturated: bool,
    /// `2C²(T²+1)² e^{-σ N1} / σ`.
    pub app1_bound: f64,
    /// `(T²+1)² ∫_{N1}^∞ W_σ e^{-σx} dx` by quadrature.
    pub app1_tail: f64,
    pub app1_passes: bool,
}

/// `N1 = ⌈ln(8C²(T²+1)²/(σε)) / σ⌉`, `N2 = ⌈(8C²(T²+1)²/(σε))²⌉`, with the
/// tail condition `(T²+1)² ∫_{N1}^∞ W_σ e^{-σx} dx < ε/4` checked both
/// through the bound and directly.
pub fn truncation_levels(epsilon: f64, sigma: SigmaParam, t_cap: u32, cfg: &EvalConfig) -> Result<TruncationLevels> {
    let s = sigma.require_nominal("truncation_levels")?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain("truncation_levels", format!("epsilon = {epsilon} not in (0, 1)")));
    }
    if t_cap == 0 {
        return Err(Error::domain("truncation_levels", "T must be a positive integer"));
    }
    let c = sup_constant_c(cfg)?;
    let tt = f64::from(t_cap);
    let p = (tt * tt + 1.0).powi(2);
    let base = 8.0 * c * c * p / (s * epsilon);
    let n1 = (base.ln() / s).ceil().max(1.0) as u64;
    let n2f = (base * base).ceil().max(1.0);
    let n2_saturated = n2f >= u128::MAX as f64;
    let n2 = if n2_saturated { u128::MAX } else { n2f as u128 };

    let app1_bound = 2.0 * c * c * p * (-s * n1 as f64).exp() / s;
    let rep = ModulusRepresentation::new(sigma, cfg)?;
    let tail = try_integrate_semi_infinite(|x| Ok(rep.w(x)? * (-s * x).exp()), n1 as f64, rep.w_decay(), cfg)?;
    let app1_tail = p * tail.value;
    Ok(TruncationLevels {
        epsilon,
        sigma: s,
        t_cap,
        c_const: c,
        n1,
        n2,
        n2_saturated,
        app1_bound,
        app1_tail,
        app1_passes: app1_bound < epsilon / 4.0 && app1_tail < epsilon / 4.0,
    })
}

/// `V^N_σ(t) = S + T t² + q(t) Σ_{n≤N2} (-1)^n t^{2n}/(2n)! ∫_0^{N1} W_σ e^{-σx} x^{2n} dx`.
///
/// The scaled moments `μ_n = ∫ W e^{-σx} x^{2n}/(2n)! dx` share one set of
/// `W` evaluations. Once `μ_n t_max^{2n}` has fallen below `1e-30 μ_0`
/// past its peak the remaining terms are dropped; `n_used` records where.
#[derive(Debug, Clone)]
pub struct PolyApprox {
    pub sigma: f64,
    pub upper: f64,
    pub n2: u64,
    pub n_used: u64,
    pub t_max: f64,
    pub mu: Vec<f64>,
    pub s_const: f64,
    pub t_const: f64,
}

impl PolyApprox {
    pub fn new(rep: &ModulusRepresentation, upper: f64, n2: u64, t_max: f64) -> Result<Self> {
        let s = rep.sigma.value();
        if !(upper > 0.0) {
            return Err(Error::domain("poly_approx_v", format!("N1 = {upper} must be positive")));
        }
        let panels = (64.0 * upper).ceil().max(8.0) as usize;
        let nodes = composite_kronrod(0.0, upper, panels);
        let weights = nodes
            .par_iter()
            .map(|&(x, w)| Ok((x.ln(), w * rep.w(x)? * (-s * x).exp())))
            .collect::<Result<Vec<_>>>()?;
        let lt = t_max.max(1e-300).ln();
        let mut mu = Vec::new();
        let mut log_fact = 0.0;
        let mut peaked = false;
        let mut prev = f64::INFINITY;
        for n in 0..=n2 {
            if n > 0 {
                let k = 2.0 * n as f64;
                log_fact += (k - 1.0).ln() + k.ln();
            }
            let twon = 2.0 * n as f64;
            let m: f64 = weights.iter().map(|&(lx, w)| w * (twon * lx - log_fact).exp()).sum();
            mu.push(m);
            let scaled = m * (twon * lt).exp();
            if scaled < prev {
                peaked = true;
            }
            prev = scaled;
            if peaked && scaled < 1e-30 * mu[0] {
                break;
            }
        }
        Ok(PolyApprox {
            sigma: s,
            upper,
            n2,
            n_used: mu.len() as u64 - 1,
            t_max,
            mu,
            s_const: rep.s_const,
            t_const: rep.t_const,
        })
    }

    /// `Σ (-1)^n t^{2n} μ_n`.
    pub fn cosine_part(&self, t: f64) -> f64 {
        let t2 = t * t;
        let mut pow = 1.0;
        let mut acc = 0.0;
        for (n, &m) in self.mu.iter().enumerate() {
            if m == 0.0 {
                break;
            }
            let term = pow * m;
            acc += if n % 2 == 0 { term } else { -term };
            pow *= t2;
        }
        acc
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.s_const + self.t_const * t * t + quartic_factor(self.sigma, t) * self.cosine_part(t)
    }
}

pub fn poly_approx_v(sigma: SigmaParam, n1: u64, n2: u64, t: f64, cfg: &EvalConfig) -> Result<f64> {
    if n1 < 1 || n2 < 1 {
        return Err(Error::domain("poly_approx_v", "N1 and N2 must be >= 1"));
    }
    let rep = ModulusRepresentation::new(sigma, cfg)?;
    Ok(PolyApprox::new(&rep, n1 as f64, n2, t.abs().max(1.0))?.eval(t))
}

/// Left side of the odd-count truncation: the cosine series cut after
/// `n = n_max` with full moments over `[0, ∞)`.
pub fn partial_cosine_bound(sigma: SigmaParam, n_max: u64, ts: &[f64], cfg: &EvalConfig) -> Result<Vec<f64>> {
    let rep = ModulusRepresentation::new(sigma, cfg)?;
    let (upper, _) = rep.w_decay().cutoff(0.0, cfg);
    let t_max = ts.iter().fold(1.0f64, |a, t| a.max(t.abs()));
    let mut p = PolyApprox::new(&rep, upper, n_max, t_max)?;
    // Keep every requested term, however small.
    while (p.mu.len() as u64) <= n_max {
        p.mu.push(0.0);
    }
    p.mu.truncate(n_max as usize + 1);
    Ok(ts.iter().map(|&t| p.eval(t)).collect())
}

/// `(T^{2n}/(2n)! ∫_0^∞ W e^{-σx} x^{2n} dx, (C_1+C_{4T+3}) C_{2T+3} T^{2n} / [2(T+1)]^{2n+1})`.
pub fn lemma_moment_bound(sigma: SigmaParam, t_cap: u32, n: u32, cfg: &EvalConfig) -> Result<(f64, f64)> {
    let rep = ModulusRepresentation::new(sigma, cfg)?;
    let (upper, _) = rep.w_decay().cutoff(0.0, cfg);
    let m = rep.w_moment(n, upper)?.value;
    let tt = f64::from(t_cap);
    let fact: f64 = (1..=2 * n).map(f64::from).product();
    let lhs = tt.powi(2 * n as i32) / fact * m;
    let k = (sup_constant_cn(1, cfg)? + sup_constant_cn(4 * t_cap + 3, cfg)?) * sup_constant_cn(2 * t_cap + 3, cfg)?;
    let rhs = k * tt.powi(2 * n as i32) / (2.0 * (tt + 1.0)).powi(2 * n as i32 + 1);
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThmsdReport {
    pub levels: TruncationLevels,
    pub n2_used: u64,
    /// `N2` exceeded the cap and was replaced by it.
    pub substituted: bool,
    /// Last series index that contributed above `1e-30` relative.
    pub n_effective: u64,
    pub grid_step: f64,
    pub min_v: f64,
    pub min_t: f64,
    pub threshold: f64,
    pub passes_23d3: bool,
    /// Bound on `max |V - V^N|` over `[0, T]` at the `N` actually used.
    pub approx_error_bound: f64,
}

/// Tests `min_{[0,T]} V^N(t) ≥ ε/2` at `N = N_{ε,σ,T}` on a grid of step 0.01.
pub fn check_prop_thmsd(sigma: SigmaParam, t_cap: u32, epsilon: f64, n2_cap: u64, cfg: &EvalConfig) -> Result<ThmsdReport> {
    let levels = truncation_levels(epsilon, sigma, t_cap, cfg)?;
    let substituted = levels.n2 > u128::from(n2_cap);
    let n2_used = if substituted { n2_cap } else { levels.n2 as u64 };
    let rep = ModulusRepresentation::new(sigma, cfg)?;
    let tt = f64::from(t_cap);
    let p = PolyApprox::new(&rep, levels.n1 as f64, n2_used, tt)?;
    let grid_step = 0.01;
    let grid = t_grid(0.0, tt, grid_step)?;
    let (mut min_v, mut min_t) = (f64::INFINITY, 0.0);
    for &t in &grid {
        let v = p.eval(t);
        if v < min_v {
            min_v = v;
            min_t = t;
        }
    }
    let s = levels.sigma;
    let c = levels.c_const;
    let k = 2.0 * n2_used as f64 + 1.0;
    let log_taylor = k * (tt * levels.n1 as f64).ln() - 0.5 * (2.0 * PI * k).ln() - k * (k.ln() - 1.0);
    let approx_error_bound = levels.app1_bound + 2.0 * c * c * (tt * tt + 1.0).powi(2) / s * log_taylor.exp();
    Ok(ThmsdReport {
        threshold: epsilon / 2.0,
        passes_23d3: min_v >= epsilon / 2.0,
        levels,
        n2_used,
        substituted,
        n_effective: p.n_used,
        grid_step,
        min_v,
        min_t,
        approx_error_bound,
    })
}

/// Runs [`check_prop_thmsd`] down `ladder` and stops at the first passing cell.
pub fn check_prop_thmsd_ladder(
    sigma: SigmaParam,
    t_cap: u32,
    ladder: &[f64],
    n2_cap: u64,
    cfg: &EvalConfig,
) -> Result<Vec<ThmsdReport>> {
    let mut out = Vec::new();
    for &eps in ladder {
        let r = check_prop_thmsd(sigma, t_cap, eps, n2_cap, cfg)?;
        let pass = r.passes_23d3;
        out.push(r);
        if pass {
            break;
        }
    }
    Ok(out)
}
