//! Acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! Criterion 2 asks for `S_{3/4} = 0.38952` from the five-term, `[1, 10]`
//! recipe. That recipe, applied to the published formula, gives 0.411226,
//! and the converged value is 0.495669. No reading of the recipe we tried
//! reaches 0.38952, so that line is expected to print FAIL. The process
//! exits non-zero if any other criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xi_ineq::inequality_lab::{
    box_kernel_autocorrelation, check_prop_thmsd, ks_critical_1pct, ks_statistic, mc_reports, orthogonalization_scan,
    orthogonalization_scan_with, partial_cosine_bound, sample_x_sigma, truncation_levels, KKernel, XSampler,
    DEFAULT_N2_CAP,
};
use xi_ineq::representation::{
    c_coeff_via_u, c_magnitude_bound, s_t_constants, s_t_paper_recipe, JRoute, Method, ModulusRepresentation,
    PowerSeriesCoeffs,
};
use xi_ineq::roots::{bisect, sign_changes};
use xi_ineq::special_series::sup_constant_c;
use xi_ineq::xi_oracle::{xi, xi_mod_sq, xi_mod_sq_via_u};
use xi_ineq::{EvalConfig, Result, SigmaParam, TauParam};

const EXPECTED_FAIL: &[u32] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn sig(s: f64) -> SigmaParam {
    SigmaParam::new(s).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn within_time(o: Outcome, elapsed: Duration, limit: Option<Duration>) -> Outcome {
    match limit {
        Some(l) if elapsed > l => Outcome {
            pass: false,
            detail: format!("{}; took {:.1?}, limit {:.0?}", o.detail, elapsed, l),
        },
        _ => o,
    }
}

fn c1_appendix_b(cfg: &EvalConfig) -> Result<Outcome> {
    let r = s_t_paper_recipe(sig(0.75), Method::BSeries, cfg)?;
    let (es, et) = (rel(r.s_value, 0.473929), rel(r.t_value, -0.0218449));
    Ok(Outcome {
        pass: es <= 1e-4 && et <= 1e-4,
        detail: format!("S = {:.9}, T = {:.10} (rel err {es:.1e}, {et:.1e})", r.s_value, r.t_value),
    })
}

fn c2_appendix_c(cfg: &EvalConfig) -> Result<Outcome> {
    let r = s_t_paper_recipe(sig(0.75), Method::CInversion, cfg)?;
    let (es, et) = (rel(r.s_value, 0.38952), rel(r.t_value, -0.0232205));
    Ok(Outcome {
        pass: es <= 1e-4 && et <= 1e-4,
        detail: format!(
            "S = {:.9} vs 0.38952 (rel err {es:.1e}), T = {:.10} (rel err {et:.1e})",
            r.s_value, r.t_value
        ),
    })
}

fn c3_modulus(cfg: &EvalConfig) -> Result<Outcome> {
    let mut worst_norm = 0.0f64;
    let mut worst_point = 0.0f64;
    let mut at = (0.0, 0.0);
    for s in [0.55, 0.6, 0.75, 0.9] {
        let rep = ModulusRepresentation::new(sig(s), cfg)?;
        let at_zero = xi_mod_sq(sig(s), 0.0, cfg)?;
        for t in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 14.2, 20.0] {
            let o = xi_mod_sq(sig(s), t, cfg)?;
            let r = rep.eval(t)?.value;
            let d = (r - o).abs();
            let norm = d / at_zero.max(o);
            if norm > worst_norm {
                worst_norm = norm;
                at = (s, t);
            }
            worst_point = worst_point.max(d / o);
        }
    }
    Ok(Outcome {
        pass: worst_norm <= 1e-6,
        detail: format!(
            "max deviation / max(|xi(s)|^2, |xi(s-it)|^2) = {worst_norm:.2e} at {at:?}; pointwise relative {worst_point:.2e}"
        ),
    })
}

fn c4_j_route(cfg: &EvalConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for tau in [0.1, 0.25] {
        let j = JRoute::new(TauParam::new(tau)?, cfg)?;
        for t in [0.0, 1.0, 5.0] {
            let want = 2.0 * xi_mod_sq(sig(tau + 0.5), t, cfg)?;
            worst = worst.max(rel(j.twice_mod_sq(t)?.value, want));
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-5,
        detail: format!("max relative error {worst:.2e}"),
    })
}

fn c5_u_route(cfg: &EvalConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for t in [0.0, 5.0, 12.0] {
        let u = xi_mod_sq_via_u(sig(0.75), t, cfg)?.value;
        worst = worst.max(rel(u, xi_mod_sq(sig(0.75), t, cfg)?));
    }
    Ok(Outcome {
        pass: worst <= 1e-6,
        detail: format!("max relative error {worst:.2e}"),
    })
}

fn c6_constants(cfg: &EvalConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for s in [0.55, 0.6, 0.75, 0.9] {
        let r: Vec<_> = [Method::ADirect, Method::BSeries, Method::CInversion]
            .iter()
            .map(|&m| s_t_constants(sig(s), m, cfg))
            .collect::<Result<_>>()?;
        for a in &r {
            for b in &r {
                worst = worst.max(rel(a.s_value, b.s_value)).max(rel(a.t_value, b.t_value));
            }
        }
    }
    let mut signs_ok = true;
    for i in 0..20 {
        let s = 0.5 + 0.5 * (i as f64 + 0.5) / 20.0;
        let r = s_t_constants(sig(s), Method::ADirect, cfg)?;
        signs_ok &= r.s_value > 0.0 && r.t_value < 0.0 && r.s_value + r.t_value / 4.0 > 0.0;
    }
    Ok(Outcome {
        pass: worst <= 1e-6 && signs_ok,
        detail: format!("three-way max relative spread {worst:.2e}; sign facts on 20 sigma: {signs_ok}"),
    })
}

fn c7_power_series(cfg: &EvalConfig) -> Result<Outcome> {
    let p = PowerSeriesCoeffs::compute(TauParam::new(0.25)?, 10, cfg)?;
    let partial = PowerSeriesCoeffs {
        c: p.c[..=8].to_vec(),
        ..p.clone()
    };
    let mut worst_sum = 0.0f64;
    for i in 0..=20 {
        let t = -1.0 + 0.1 * i as f64;
        worst_sum = worst_sum.max(rel(partial.eval(t), xi_mod_sq(sig(0.75), t, cfg)?));
    }
    let signs = p.c.iter().enumerate().all(|(k, c)| if k % 2 == 0 { *c > 0.0 } else { *c < 0.0 });
    let bound = p.c.iter().enumerate().all(|(k, c)| c.abs() < c_magnitude_bound(k as u32));
    let mut worst_moment = 0.0f64;
    for k in 0..=4u32 {
        let u = c_coeff_via_u(sig(0.75), k, cfg)?.value;
        worst_moment = worst_moment.max(rel(u, p.c[k as usize]));
    }
    Ok(Outcome {
        pass: worst_sum <= 1e-5 && signs && bound && worst_moment <= 1e-5,
        detail: format!(
            "K=8 partial sum max rel err {worst_sum:.2e}; alternating signs k<=10: {signs}; magnitude bound k<=10: {bound}; moment identity max rel err {worst_moment:.2e}"
        ),
    })
}

fn c8_monte_carlo(cfg: &EvalConfig) -> Result<Outcome> {
    let rep = ModulusRepresentation::new(sig(0.75), cfg)?;
    let sampler = XSampler::from_representation(&rep, 0.75)?;
    let reps = mc_reports(&rep, &sampler, &[1.0, 5.0, 10.0], 1_000_000, 20_240_601)?;
    let zmax = reps.iter().map(|r| r.z_score).fold(0.0, f64::max);
    let mm = reps.iter().all(|r| r.mm_holds && r.mm_holds_mc);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let ks_n = 100_000;
    let xs: Vec<f64> = (0..ks_n).map(|_| sample_x_sigma(&sampler, &mut rng)).collect();
    let d = ks_statistic(&xs, |x| sampler.cdf(x));
    let crit = ks_critical_1pct(ks_n);
    Ok(Outcome {
        pass: zmax <= 4.0 && d < crit,
        detail: format!(
            "max |MC - quadrature| / SE = {zmax:.2} over t = 1, 5, 10 (n = 1e6, acceptance {:.3}); (MM) holds: {mm}; KS D = {d:.4} < {crit:.4}",
            reps[0].acceptance_rate
        ),
    })
}

fn c9_kernel(cfg: &EvalConfig) -> Result<Outcome> {
    let k = KKernel::new(sig(0.75), cfg)?;
    let mut positive = true;
    for i in 0..=40 {
        positive &= k.eval(0.5 * i as f64)? > 0.0;
    }
    let mut worst = 0.0f64;
    for t in [0.0, 1.0, 5.0, 10.0] {
        let want = k.fourier_from_modulus(xi_mod_sq(sig(0.75), t, cfg)?, t);
        worst = worst.max(rel(k.fourier(t)?.value, want));
    }
    let norm = k.fourier(0.0)?.value;
    let a0 = (k.autocorrelation(0.0, norm)?.value - 1.0).abs();
    let mut no_zero = true;
    let mut min_a = f64::INFINITY;
    for s in [0.6, 0.75, 0.9] {
        let r = orthogonalization_scan(sig(s), 30.0, 0.1, cfg)?;
        no_zero &= r.iota_found.is_none();
        min_a = min_a.min(r.min_a);
    }
    let synth = orthogonalization_scan_with(|t| box_kernel_autocorrelation(t, cfg), 5.0, 0.1, 1e-11)?;
    let zero_err = synth.iota_found.map_or(f64::INFINITY, |z| (z.t - PI).abs());
    Ok(Outcome {
        pass: positive && worst <= 1e-6 && a0 <= 1e-12 && no_zero && zero_err <= 1e-9,
        detail: format!(
            "K > 0 on [0, 20]: {positive}; Fourier identity max rel err {worst:.2e}; |A(0) - 1| = {a0:.1e}; no zero of A on [0, 30] for sigma 0.6/0.75/0.9: {no_zero} (min A = {min_a:.3e}); box-kernel zero error {zero_err:.1e}"
        ),
    })
}

fn c10_oracle(cfg: &EvalConfig) -> Result<Outcome> {
    let e0 = (xi(Complex64::new(0.0, 0.0), cfg)?.re - 0.5).abs();
    let e1 = (xi(Complex64::new(1.0, 0.0), cfg)?.re - 0.5).abs();
    let mut sym = 0.0f64;
    for i in 0..20 {
        let s = Complex64::new(-0.4 + 0.09 * i as f64, -6.0 + 0.7 * i as f64);
        let a = xi(s, cfg)?;
        let b = xi(Complex64::new(1.0, 0.0) - s, cfg)?;
        sym = sym.max((a - b).norm() / a.norm().max(1e-300));
    }
    let big_xi = |t: f64| -> Result<f64> { Ok(xi(Complex64::new(0.5, -t), cfg)?.re) };
    let grid: Vec<f64> = (0..=40).map(|i| 14.0 + 0.01 * i as f64).collect();
    let vals = grid.iter().map(|&t| big_xi(t)).collect::<Result<Vec<_>>>()?;
    let zero = match sign_changes(&vals).first() {
        Some(&i) => bisect(big_xi, grid[i], grid[i + 1], 1e-10)?.t,
        None => f64::NAN,
    };
    Ok(Outcome {
        pass: e0 <= 1e-12 && e1 <= 1e-12 && sym <= 1e-12 && zero > 14.10 && zero < 14.20,
        detail: format!(
            "|xi(0) - 1/2| = {e0:.1e}, |xi(1) - 1/2| = {e1:.1e}, functional equation max rel err {sym:.1e}; first zero at t = {zero:.6}"
        ),
    })
}

fn c11_levels(cfg: &EvalConfig) -> Result<Outcome> {
    let c = sup_constant_c(cfg)?;
    let mut exact = true;
    let mut app1 = true;
    for eps in [0.5, 0.1] {
        for s in [0.6, 0.75] {
            for t in [1u32, 2] {
                let l = truncation_levels(eps, sig(s), t, cfg)?;
                let base = 8.0 * c * c * f64::from(t * t + 1).powi(2) / (s * eps);
                exact &= l.n1 == (base.ln() / s).ceil() as u64 && l.n2 == (base * base).ceil() as u128;
                app1 &= l.app1_passes;
            }
        }
    }
    let ts: Vec<f64> = (0..=60).map(|i| 0.05 * i as f64).collect();
    let odd = partial_cosine_bound(sig(0.75), 2, &ts, cfg)?;
    let positive = odd.iter().all(|&v| v > 0.0);
    let cell = check_prop_thmsd(sig(0.75), 1, 0.5, DEFAULT_N2_CAP, cfg)?;
    Ok(Outcome {
        pass: exact && app1 && positive,
        detail: format!(
            "ceiling formulas exact on 8 cells: {exact}; tail bound passes: {app1}; m=2 truncation positive on [0, 3]: {positive} (min {:.4e}); (eps, T) = (0.5, 1): N = ({}, {}), min V = {:.6}, passes: {}",
            odd.iter().copied().fold(f64::INFINITY, f64::min),
            cell.levels.n1,
            cell.levels.n2,
            cell.min_v,
            cell.passes_23d3
        ),
    })
}

type Check = fn(&EvalConfig) -> Result<Outcome>;

fn main() -> ExitCode {
    let cfg = EvalConfig::default();
    let tight = EvalConfig::tight();
    let min = |m: u64| Some(Duration::from_secs(60 * m));
    let checks: [(u32, Check, &EvalConfig, Option<Duration>); 11] = [
        (1, c1_appendix_b, &cfg, min(1)),
        (2, c2_appendix_c, &cfg, min(1)),
        (3, c3_modulus, &cfg, min(5)),
        (4, c4_j_route, &cfg, min(5)),
        (5, c5_u_route, &cfg, None),
        (6, c6_constants, &tight, None),
        (7, c7_power_series, &tight, None),
        (8, c8_monte_carlo, &cfg, None),
        (9, c9_kernel, &cfg, None),
        (10, c10_oracle, &tight, None),
        (11, c11_levels, &cfg, None),
    ];
    let mut unexpected = Vec::new();
    for (n, check, c, limit) in checks {
        let start = Instant::now();
        let o = match check(c) {
            Ok(o) => within_time(o, start.elapsed(), limit),
            Err(e) => Outcome {
                pass: false,
                detail: format!("error: {e}"),
            },
        };
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:2}: {tag}  [{:.1?}] {}", start.elapsed(), o.detail);
        if !o.pass && !EXPECTED_FAIL.contains(&n) {
            unexpected.push(n);
        }
        if o.pass && EXPECTED_FAIL.contains(&n) {
            println!("             note: criterion {n} was expected to fail and passed");
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
