//! Theta series `R`, `G`, `H`, the double series `J_tau`, the weight
//! `eta_tau`, and the sup-constants `C_n` and `C`.
//!
//! Below `y = 1` every theta quantity is routed through the inversion
//! `G(y) = G(1/y) / y`, where the direct series would need `O(1/y)` terms.

use std::f64::consts::PI;

use crate::config::{EvalConfig, JTauMode, TauParam};
use crate::error::{Error, Result};

/// Minimum number of terms summed before the relative stopping test applies.
const MIN_TERMS: usize = 6;

/// Sums `term(1) + term(2) + ...` until a term is negligible against the
/// partial sum. `past_peak(n)` must hold once the terms decrease
/// monotonically in magnitude.
fn sum_series<T, P>(func: &'static str, cfg: &EvalConfig, term: T, past_peak: P) -> Result<f64>
where
    T: Fn(usize) -> f64,
    P: Fn(usize) -> bool,
{
    let mut sum = 0.0;
    for n in 1..=cfg.series_max_terms {
        let t = term(n);
        sum += t;
        if n >= MIN_TERMS && past_peak(n) && t.abs() <= cfg.series_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::SeriesConvergence {
        func,
        terms: cfg.series_max_terms,
    })
}

fn check_positive(func: &'static str, y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("need finite y > 0, got {y}")))
    }
}

/// `2 Σ e^{-πn²y²}` summed directly, without inversion.
pub fn theta_r_direct(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("theta_r", y)?;
    let y2 = y * y;
    sum_series(
        "theta_r",
        cfg,
        |n| 2.0 * (-PI * (n * n) as f64 * y2).exp(),
        |_| true,
    )
}

/// `-4πy Σ n² e^{-πn²y²}` summed directly.
pub fn theta_r_prime_direct(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("theta_r_prime", y)?;
    let y2 = y * y;
    let s = sum_series(
        "theta_r_prime",
        cfg,
        |n| {
            let n2 = (n * n) as f64;
            n2 * (-PI * n2 * y2).exp()
        },
        |n| PI * (n * n) as f64 * y2 >= 2.0,
    )?;
    Ok(-4.0 * PI * y * s)
}

/// `4π Σ [2π(ny)⁴ - 3(ny)²] e^{-πn²y²}` summed directly.
pub fn h_fn_direct(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("h_fn", y)?;
    let y2 = y * y;
    let s = sum_series(
        "h_fn",
        cfg,
        |n| {
            let x2 = (n * n) as f64 * y2;
            (2.0 * PI * x2 * x2 - 3.0 * x2) * (-PI * x2).exp()
        },
        |n| PI * (n * n) as f64 * y2 >= 4.0,
    )?;
    Ok(4.0 * PI * s)
}

/// `R(y) = 2 Σ_{n≥1} e^{-πn²y²}`.
pub fn theta_r(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("theta_r", y)?;
    if y >= 1.0 {
        theta_r_direct(y, cfg)
    } else {
        let w = 1.0 / y;
        Ok(w - 1.0 + w * theta_r_direct(w, cfg)?)
    }
}

/// `R'(y)`.
pub fn theta_r_prime(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("theta_r_prime", y)?;
    if y >= 1.0 {
        theta_r_prime_direct(y, cfg)
    } else {
        let w = 1.0 / y;
        let r = theta_r_direct(w, cfg)?;
        let rp = theta_r_prime_direct(w, cfg)?;
        Ok(-w * w * w * rp - w * w * (1.0 + r))
    }
}

/// `G(y) = 1 + R(y)`.
pub fn g_fn(y: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(1.0 + theta_r(y, cfg)?)
}

/// `H(y) = y [y G(y)]''`.
pub fn h_fn(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("h_fn", y)?;
    if y >= 1.0 {
        h_fn_direct(y, cfg)
    } else {
        let w = 1.0 / y;
        Ok(w * h_fn_direct(w, cfg)?)
    }
}

/// `y R(y) + y - 1`, which equals `R(1/y)` exactly.
pub fn stable_combo_a(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("stable_combo_a", y)?;
    if y >= 1.0 {
        Ok(y * theta_r_direct(y, cfg)? + y - 1.0)
    } else {
        theta_r_direct(1.0 / y, cfg)
    }
}

/// `y² R'(y) + 1`, which equals `-R'(1/y)/y - R(1/y)` exactly.
pub fn stable_combo_b(y: f64, cfg: &EvalConfig) -> Result<f64> {
    check_positive("stable_combo_b", y)?;
    if y >= 1.0 {
        Ok(y * y * theta_r_prime_direct(y, cfg)? + 1.0)
    } else {
        let w = 1.0 / y;
        Ok(-w * theta_r_prime_direct(w, cfg)? - theta_r_direct(w, cfg)?)
    }
}

/// `Σ_{d | k} d^a`.
pub fn divisor_sigma(k: u64, a: f64) -> f64 {
    assert!(k >= 1, "divisor_sigma needs k >= 1");
    let mut s = 0.0;
    let mut d = 1u64;
    while d * d <= k {
        if k % d == 0 {
            s += (d as f64).powf(a);
            let e = k / d;
            if e != d {
                s += (e as f64).powf(a);
            }
        }
        d += 1;
    }
    s
}

/// Coefficient of `e^{-2πky}` in `J_tau`: `σ_{2τ}(k) k^{-τ}`.
pub fn j_tau_coeff(tau: f64, k: u64) -> f64 {
    divisor_sigma(k, 2.0 * tau) * (k as f64).powf(-tau)
}

fn check_deriv(func: &'static str, deriv: u32) -> Result<()> {
    if deriv <= 3 {
        Ok(())
    } else {
        Err(Error::domain(func, format!("derivative order {deriv} not in 0..=3")))
    }
}

/// `d^deriv/dy^deriv Σ_{m,n≥1} (n/m)^τ e^{-2πmny}`.
pub fn j_tau(tau: TauParam, y: f64, deriv: u32, cfg: &EvalConfig) -> Result<f64> {
    check_positive("j_tau", y)?;
    check_deriv("j_tau", deriv)?;
    match cfg.j_tau_mode {
        JTauMode::DivisorSum => j_tau_divisor(tau.value(), y, deriv, cfg),
        JTauMode::NaiveDoubleSum => Ok(j_tau_naive(tau.value(), y, deriv, cfg.series_max_terms)),
    }
}

fn j_tau_divisor(tau: f64, y: f64, deriv: u32, cfg: &EvalConfig) -> Result<f64> {
    let d = deriv as i32;
    sum_series(
        "j_tau",
        cfg,
        |k| {
            let kf = k as f64;
            j_tau_coeff(tau, k as u64) * (-2.0 * PI * kf).powi(d) * (-2.0 * PI * kf * y).exp()
        },
        |k| 2.0 * PI * k as f64 * y >= f64::from(deriv) + 1.0 + 2.0 * tau.abs(),
    )
}

/// Both indices up to `cap`; terms whose exponential underflows are skipped
/// because they are exactly zero.
fn j_tau_naive(tau: f64, y: f64, deriv: u32, cap: usize) -> f64 {
    let d = deriv as i32;
    let mut sum = 0.0;
    for m in 1..=cap {
        let base = 2.0 * PI * m as f64 * y;
        if base > 745.2 {
            break;
        }
        for n in 1..=cap {
            let k = (m * n) as f64;
            let arg = 2.0 * PI * k * y;
            if arg > 745.2 {
                break;
            }
            sum += (n as f64 / m as f64).powf(tau) * (-2.0 * PI * k).powi(d) * (-arg).exp();
        }
    }
    sum
}

/// `η_τ(y) = [(y+√(y²-1))^τ + (y+√(y²-1))^{-τ}] / √(y²-1)` for `y > 1`.
pub fn eta_tau(tau: TauParam, y: f64) -> Result<f64> {
    if !(y > 1.0 && y.is_finite()) {
        return Err(Error::domain("eta_tau", format!("need y > 1, got {y}")));
    }
    let s = ((y - 1.0) * (y + 1.0)).sqrt();
    Ok(2.0 * (tau.value() * y.acosh()).cosh() / s)
}

/// Location and value of a supremum over `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supremum {
    pub value: f64,
    /// `None` when the supremum is a limit at `y → 0` or `y → ∞`.
    pub argmax: Option<f64>,
}

/// Log-grid scan on `[1e-4, 1e2]` followed by golden-section refinement,
/// compared against the limits at both ends.
pub fn locate_sup<F>(f: F, limit_at_zero: f64, limit_at_inf: f64, grid_points: usize) -> Result<Supremum>
where
    F: Fn(f64) -> Result<f64>,
{
    let (lo, hi) = (1e-4f64.ln(), 1e2f64.ln());
    let n = grid_points.max(3);
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let vals = xs.iter().map(|&x| f(x.exp())).collect::<Result<Vec<f64>>>()?;
    let (imax, &vmax) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is nonempty");

    let mut best = Supremum {
        value: vmax,
        argmax: Some(xs[imax].exp()),
    };
    if imax > 0 && imax < n - 1 {
        let g = |x: f64| f(x.exp());
        let (mut a, mut b) = (xs[imax - 1], xs[imax + 1]);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (g(c)?, g(d)?);
        while b - a > 1e-10 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = g(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = g(d)?;
            }
        }
        let x = 0.5 * (a + b);
        let v = g(x)?;
        if v > best.value {
            best = Supremum {
                value: v,
                argmax: Some(x.exp()),
            };
        }
    }
    for limit in [limit_at_zero, limit_at_inf] {
        if limit >= best.value {
            best = Supremum {
                value: limit,
                argmax: None,
            };
        }
    }
    Ok(best)
}

const SUP_GRID: usize = 256;

pub fn sup_constant_cn_detail(n: u32, grid_points: usize, cfg: &EvalConfig) -> Result<Supremum> {
    if n == 0 {
        return Ok(Supremum {
            value: f64::INFINITY,
            argmax: None,
        });
    }
    // y^n R(y) = y^{n-1} (1 - y + R(1/y)) near zero.
    let at_zero = if n == 1 { 1.0 } else { 0.0 };
    locate_sup(|y| Ok(y.powi(n as i32) * theta_r(y, cfg)?), at_zero, 0.0, grid_points)
}

/// `C_n = sup_{y>0} yⁿ R(y)`; `+∞` for `n = 0`, where `R(y) ~ 1/y`.
pub fn sup_constant_cn(n: u32, cfg: &EvalConfig) -> Result<f64> {
    Ok(sup_constant_cn_detail(n, SUP_GRID, cfg)?.value)
}

pub fn sup_constant_c_detail(cfg: &EvalConfig) -> Result<Supremum> {
    locate_sup(|y| Ok((y * y * y + y) * theta_r(y, cfg)?), 1.0, 0.0, SUP_GRID)
}

/// `C = sup_{y>0} (y³ + y) R(y)`.
pub fn sup_constant_c(cfg: &EvalConfig) -> Result<f64> {
    Ok(sup_constant_c_detail(cfg)?.value)
}
