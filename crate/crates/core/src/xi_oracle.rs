//! Reference values of ξ from the classical theta integral, and the
//! probabilistic objects built from `H`: the density `P_σ`, its
//! characteristic function `Ξ_σ`, and the autocorrelation kernel `U_σ`.
//!
//! The ξ route shares nothing with the representations in
//! [`crate::representation`] except the theta series itself.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{EvalConfig, SigmaParam};
use crate::error::{Error, Result};
use crate::quadrature::{
    try_integrate_finite, try_integrate_oscillatory_cos, try_integrate_semi_infinite, Decay, QuadResult,
};
use crate::special_series::{h_fn, theta_r_direct};

pub type ComplexPoint = Complex64;

/// `ψ(x) = Σ e^{-πn²x}` for `x ≥ 1`.
fn psi(x: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(0.5 * theta_r_direct(x.sqrt(), cfg)?)
}

/// Bound `K e^{-3x}` on `(x^{s/2-1} + x^{-(s+1)/2}) ψ(x)` over `x ≥ 1`.
fn xi_integrand_decay(sigma: f64) -> Decay {
    let p = (0.5 * sigma - 1.0).max(-0.5 * (sigma + 1.0)).max(0.0);
    let gap = PI - 3.0;
    let c = if p > 0.0 { (p / gap).powf(p) * (-p).exp() } else { 1.0 };
    Decay::Exponential {
        scale: 2.01 * c,
        rate: 3.0,
    }
}

/// `ξ(s) = 1/2 + s(s-1)/2 ∫_1^∞ (x^{s/2-1} + x^{-(s+1)/2}) ψ(x) dx`.
pub fn xi(s: ComplexPoint, cfg: &EvalConfig) -> Result<ComplexPoint> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::domain("xi", format!("s = {s} is not finite")));
    }
    let pre = 0.5 * s * (s - 1.0);
    if pre == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.5, 0.0));
    }
    let a = 0.5 * s - 1.0;
    let b = -0.5 * (s + 1.0);
    let kernel = |x: f64| -> Result<Complex64> {
        let lx = x.ln();
        Ok(((a * lx).exp() + (b * lx).exp()) * psi(x, cfg)?)
    };
    let decay = xi_integrand_decay(s.re);
    let re = try_integrate_semi_infinite(|x| Ok(kernel(x)?.re), 1.0, decay, cfg)?;
    let im = if s.im == 0.0 {
        0.0
    } else {
        try_integrate_semi_infinite(|x| Ok(kernel(x)?.im), 1.0, decay, cfg)?.value
    };
    Ok(0.5 + pre * Complex64::new(re.value, im))
}

pub fn xi_real(s: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(xi(Complex64::new(s, 0.0), cfg)?.re)
}

/// `|ξ(σ - it)|²`.
pub fn xi_mod_sq(sigma: SigmaParam, t: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(xi(Complex64::new(sigma.value(), -t), cfg)?.norm_sqr())
}

/// `Ξ_σ(t) = ξ(σ - it) / ξ(σ)`.
pub fn char_fn_xi(sigma: SigmaParam, t: f64, cfg: &EvalConfig) -> Result<ComplexPoint> {
    let num = xi(Complex64::new(sigma.value(), -t), cfg)?;
    Ok(num / xi_real(sigma.value(), cfg)?)
}

/// Density `P_σ(y)` given the value of `ξ(σ)`.
pub fn density_p_with(sigma: f64, xi_sigma: f64, y: f64, cfg: &EvalConfig) -> Result<f64> {
    let v = if y <= 0.0 {
        h_fn((-y).exp(), cfg)? * (-sigma * y).exp()
    } else {
        h_fn(y.exp(), cfg)? * ((1.0 - sigma) * y).exp()
    };
    Ok(v / (2.0 * xi_sigma))
}

/// `P_σ(y)`, the density whose characteristic function is `Ξ_σ`.
pub fn density_p(sigma: SigmaParam, y: f64, cfg: &EvalConfig) -> Result<f64> {
    let xs = xi_real(sigma.value(), cfg)?;
    density_p_with(sigma.value(), xs, y, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UForm {
    ThreeTerm,
    TwoTerm,
}

/// `H(e^z)` is below `1e-300` of its peak beyond this `z`.
const H_LOG_CUTOFF: f64 = 3.0;
/// Same cutoff in the `y = e^z` variable.
const H_CUTOFF: f64 = 20.085_536_923_187_668;

/// `U_σ(y)` for `y ≥ 0`.
pub fn u_sigma(sigma: SigmaParam, y: f64, form: UForm, cfg: &EvalConfig) -> Result<f64> {
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::domain("u_sigma", format!("need y >= 0, got {y}")));
    }
    let s = sigma.value();
    match form {
        UForm::ThreeTerm => {
            let tail = Decay::Cutoff(H_LOG_CUTOFF);
            let h_pair = |z: f64| -> Result<f64> { Ok(h_fn((y + z).exp(), cfg)? * h_fn(z.exp(), cfg)?) };
            let t1 = try_integrate_semi_infinite(|z| Ok(h_pair(z)? * (2.0 * (1.0 - s) * z).exp()), 0.0, tail, cfg)?;
            let t2 = try_integrate_finite(
                |z| Ok(h_fn((y - z).exp(), cfg)? * h_fn(z.exp(), cfg)? * ((2.0 * s - 1.0) * z).exp()),
                0.0,
                y,
                cfg,
            )?;
            let t3 = try_integrate_semi_infinite(|z| Ok(h_pair(z)? * (2.0 * s * z).exp()), 0.0, tail, cfg)?;
            Ok(((1.0 - s) * y).exp() * (t1.value + t2.value) + (s * y).exp() * t3.value)
        }
        UForm::TwoTerm => {
            let (ex, emx) = (y.exp(), (-y).exp());
            let tail = Decay::Cutoff(H_CUTOFF);
            let a = try_integrate_semi_infinite(
                |w| Ok(h_fn(w, cfg)? * h_fn(ex * w, cfg)? * w.powf(2.0 * s - 1.0)),
                1.0,
                tail,
                cfg,
            )?;
            let b = try_integrate_semi_infinite(
                |w| Ok(h_fn(w, cfg)? * h_fn(emx * w, cfg)? * w.powf(1.0 - 2.0 * s)),
                1.0,
                tail,
                cfg,
            )?;
            Ok((s * y).exp() * a.value + ((s - 1.0) * y).exp() * b.value)
        }
    }
}

/// `U_σ(y) ≤ K e^{y - e^y}`, weakened from `96π⁸ e^{5y - 2e^y}` using
/// `4y - e^y ≤ 4 ln 4 - 4`.
pub fn u_sigma_decay() -> Decay {
    Decay::DoubleExponential {
        scale: 96.0 * PI.powi(8) * (4.0 * 4f64.ln() - 4.0).exp(),
        rate: 1.0,
    }
}

pub fn u_sigma_bound(y: f64) -> f64 {
    96.0 * PI.powi(8) * (5.0 * y - 2.0 * y.exp()).exp()
}

/// `|ξ(σ - it)|² = ½ ∫_0^∞ U_σ(y) cos(ty) dy`.
pub fn xi_mod_sq_via_u(sigma: SigmaParam, t: f64, cfg: &EvalConfig) -> Result<QuadResult> {
    let r = try_integrate_oscillatory_cos(
        |y| u_sigma(sigma, y, UForm::TwoTerm, cfg),
        t,
        0.0,
        u_sigma_decay(),
        cfg,
    )?;
    Ok(r.scaled(0.5))
}

/// `P̄_σ(y) = U_σ(|y|) / (4 ξ(σ)²)`, the density of `Y_σ - Y'_σ`.
pub fn density_pbar(sigma: SigmaParam, y: f64, cfg: &EvalConfig) -> Result<f64> {
    let xs = xi_real(sigma.value(), cfg)?;
    Ok(u_sigma(sigma, y.abs(), UForm::TwoTerm, cfg)? / (4.0 * xs * xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::try_integrate_with_breaks;
    use approx::assert_relative_eq;

    const XI_HALF: f64 = 0.497_120_778_188_314_07;
    const XI_3_4: f64 = 0.497_839_133_885_880_71;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn sig(s: f64) -> SigmaParam {
        SigmaParam::new(s).unwrap()
    }

    #[test]
    fn endpoints_and_baselines() {
        let c = cfg();
        assert_eq!(xi_real(0.0, &c).unwrap(), 0.5);
        assert_eq!(xi_real(1.0, &c).unwrap(), 0.5);
        let t = EvalConfig::tight();
        assert_relative_eq!(xi_real(0.5, &t).unwrap(), XI_HALF, max_relative = 1e-14);
        assert_relative_eq!(xi_real(0.75, &t).unwrap(), XI_3_4, max_relative = 1e-14);
        for s in [0.1, 0.3, 0.9] {
            assert!(xi_real(s, &c).unwrap() > 0.0);
        }
    }

    #[test]
    fn functional_equation() {
        let c = cfg();
        let s = Complex64::new(0.3, 2.0);
        let d = xi(s, &c).unwrap() - xi(1.0 - s, &c).unwrap();
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn mod_sq_evenness_and_t0() {
        let c = cfg();
        let s = sig(0.75);
        let a = xi_mod_sq(s, 3.3, &c).unwrap();
        let b = xi_mod_sq(s, -3.3, &c).unwrap();
        assert!((a - b).abs() <= 1e-13 * a);
        assert_relative_eq!(xi_mod_sq(s, 0.0, &c).unwrap(), XI_3_4 * XI_3_4, max_relative = 1e-12);
    }

    #[test]
    fn critical_line_dips_near_first_zero() {
        let c = cfg();
        let s = sig(0.5);
        let floor = 1e-6 * XI_HALF * XI_HALF;
        let dip = (0..=200)
            .map(|i| xi_mod_sq(s, 14.0 + 0.001 * i as f64, &c).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(dip < floor, "dip = {dip}");
    }

    #[test]
    fn characteristic_function_properties() {
        let c = cfg();
        let s = sig(0.75);
        assert!((char_fn_xi(s, 0.0, &c).unwrap() - 1.0).norm() < 1e-15);
        for t in 1..=10 {
            let v = char_fn_xi(s, t as f64, &c).unwrap();
            assert!(v.norm() <= 1.0);
            let w = char_fn_xi(s, -(t as f64), &c).unwrap();
            assert!((v - w.conj()).norm() < 1e-12);
        }
    }

    fn p_integral(s: SigmaParam, t: f64, c: &EvalConfig) -> (f64, f64) {
        let xs = xi_real(s.value(), c).unwrap();
        let breaks = [-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0];
        let re = try_integrate_with_breaks(|y| Ok(density_p_with(s.value(), xs, y, c)? * (t * y).cos()), &breaks, c)
            .unwrap()
            .value;
        let im = try_integrate_with_breaks(|y| Ok(density_p_with(s.value(), xs, y, c)? * (t * y).sin()), &breaks, c)
            .unwrap()
            .value;
        (re, im)
    }

    #[test]
    fn density_normalizes_and_transforms_to_xi_ratio() {
        let c = cfg();
        let s = sig(0.75);
        let (mass, _) = p_integral(s, 0.0, &c);
        assert!((mass - 1.0).abs() < 1e-8, "mass = {mass}");
        let (re, im) = p_integral(s, 2.0, &c);
        let xi_ratio = char_fn_xi(s, 2.0, &c).unwrap();
        assert!((Complex64::new(re, im) - xi_ratio).norm() < 1e-8);
        for i in 0..=100 {
            assert!(density_p(s, -10.0 + 0.2 * i as f64, &c).unwrap() >= 0.0);
        }
    }

    #[test]
    fn u_forms_agree_and_respect_bound() {
        let c = cfg();
        let s = sig(0.75);
        for y in [0.0, 0.5, 1.0, 2.0] {
            let a = u_sigma(s, y, UForm::ThreeTerm, &c).unwrap();
            let b = u_sigma(s, y, UForm::TwoTerm, &c).unwrap();
            assert!(a > 0.0 && b > 0.0);
            assert_relative_eq!(a, b, max_relative = 1e-8);
            assert!(b < u_sigma_bound(y));
        }
    }

    #[test]
    fn u_route_matches_oracle() {
        let c = cfg();
        for (s, t, tol) in [(0.75, 0.0, 1e-7), (0.75, 5.0, 1e-7), (0.6, 12.0, 1e-6)] {
            let v = xi_mod_sq_via_u(sig(s), t, &c).unwrap().value;
            let o = xi_mod_sq(sig(s), t, &c).unwrap();
            assert!((v - o).abs() <= tol * o, "sigma={s} t={t}: {v} vs {o}");
        }
    }

    #[test]
    fn pbar_is_symmetric_density_and_a_convolution() {
        let c = cfg();
        let s = sig(0.75);
        assert_eq!(density_pbar(s, 0.7, &c).unwrap(), density_pbar(s, -0.7, &c).unwrap());
        let xs = xi_real(0.75, &c).unwrap();
        let mass = 2.0
            * try_integrate_semi_infinite(|y| u_sigma(s, y, UForm::TwoTerm, &c), 0.0, u_sigma_decay(), &c)
                .unwrap()
                .value
            / (4.0 * xs * xs);
        assert!((mass - 1.0).abs() < 1e-7);
        let y = 0.5;
        let conv = try_integrate_with_breaks(
            |z| Ok(density_p_with(0.75, xs, y + z, &c)? * density_p_with(0.75, xs, z, &c)?),
            &[-5.0, -2.0, -0.5, 0.0, 1.0, 3.0],
            &c,
        )
        .unwrap()
        .value;
        assert!((conv - density_pbar(s, y, &c).unwrap()).abs() < 1e-6);
    }
}
