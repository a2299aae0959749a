use rayon::prelude::*;
use serde_json::Value;
use xi_ineq::inequality_lab::{
    classify, mc_reports, orthogonalization_scan, scan_inequality, t_grid, truncation_levels, KKernel, PointStatus,
    XSampler,
};
use xi_ineq::representation::{
    c_coeff_via_u, c_magnitude_bound, s_t_constants, s_t_paper_recipe, JRoute, ModulusRepresentation,
    PowerSeriesCoeffs,
};
use xi_ineq::xi_oracle::{xi, xi_mod_sq};
use xi_ineq::{ComplexPoint, ConstantsReport, Method, ScanRoute, SigmaParam, TauParam};

use crate::args::{Command, Recipe};
use crate::report::{Report, Status};
use crate::settings::RunConfig;
use crate::CliError;

/// Representation and oracle must agree to this, relative to
/// `max(|ξ(σ)|², |ξ(σ-it)|²)`.
const MODULUS_TOL: f64 = 1e-6;
const METHOD_SPREAD_TOL: f64 = 1e-6;
const Z_LIMIT: f64 = 4.0;

const PUBLISHED: [(Recipe, f64, f64); 2] = [(Recipe::B, 0.473929, -0.0218449), (Recipe::C, 0.38952, -0.0232205)];
const APPENDIX_TOL: f64 = 1e-4;

pub fn run(cmd: Command, rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = match cmd {
        Command::Constants => constants(rc),
        Command::VerifyModulus => verify_modulus(rc),
        Command::Scan => scan(rc),
        Command::Coeffs => coeffs(rc),
        Command::Montecarlo => montecarlo(rc),
        Command::Autocorr => autocorr(rc),
        Command::ReproduceAppendix => reproduce_appendix(rc),
        Command::Selftest => selftest(rc),
    }?;
    if let Some(p) = &rc.config_path {
        r.input("config_file", p.display().to_string());
    }
    r.input("eval_config", serde_json::to_value(rc.eval).expect("EvalConfig serializes"));
    Ok(r)
}

fn sig(s: f64) -> Result<SigmaParam, CliError> {
    Ok(SigmaParam::new(s)?)
}

fn sigmas(rc: &RunConfig, default: &[f64]) -> Vec<f64> {
    rc.flags.sigma.clone().unwrap_or_else(|| default.to_vec())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn name<T: serde::Serialize>(v: T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

fn constants_row(r: &mut Report, c: &ConstantsReport) {
    let combo = c.s_value + c.t_value / 4.0;
    let signs = c.s_value > 0.0 && c.t_value < 0.0 && combo > 0.0;
    r.row(vec![
        c.sigma.into(),
        name(c.method).into(),
        name(c.s_formula).into(),
        c.s_value.into(),
        c.t_value.into(),
        c.err_est.into(),
        combo.into(),
        signs.into(),
        c.truncation.description.clone().into(),
    ]);
    if !signs {
        r.flag(
            Status::Fail,
            format!("sign facts fail at sigma = {}: S = {}, T = {}", c.sigma, c.s_value, c.t_value),
        );
    }
}

fn constants(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new(
        "constants",
        vec!["sigma", "method", "s_formula", "s", "t", "err_est", "s_plus_t_over_4", "signs_ok", "truncation"],
    );
    let ss = sigmas(rc, &[0.75]);
    let method = rc.flags.method.clone().unwrap_or_else(|| "all".into());
    r.input("sigma", ss.clone());
    if let Some(recipe) = rc.flags.paper_truncation {
        let m = match recipe {
            Recipe::B => Method::BSeries,
            Recipe::C => Method::CInversion,
        };
        r.input("paper_truncation", format!("{recipe:?}"));
        for &s in &ss {
            constants_row(&mut r, &s_t_paper_recipe(sig(s)?, m, &rc.eval)?);
        }
        return Ok(r);
    }
    let methods = match method.to_ascii_lowercase().as_str() {
        "all" => vec![Method::ADirect, Method::BSeries, Method::CInversion],
        "a" => vec![Method::ADirect],
        "b" => vec![Method::BSeries],
        "c" => vec![Method::CInversion],
        m => return Err(CliError::Usage(format!("--method for constants is a, b, c or all, got {m:?}"))),
    };
    r.input("method", method);
    let mut spread = 0.0f64;
    for &s in &ss {
        let sp = sig(s)?;
        let reps: Vec<ConstantsReport> =
            methods.iter().map(|&m| s_t_constants(sp, m, &rc.eval)).collect::<Result<_, _>>()?;
        for c in &reps {
            constants_row(&mut r, c);
            spread = spread.max(rel(c.s_value, reps[0].s_value)).max(rel(c.t_value, reps[0].t_value));
        }
    }
    r.summary("max_method_spread", spread);
    if spread > METHOD_SPREAD_TOL {
        r.flag(Status::Indeterminate, format!("methods disagree: relative spread {spread:e}"));
    }
    Ok(r)
}

fn verify_modulus(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new(
        "verify-modulus",
        vec!["sigma", "t", "oracle", "representation", "j_eta_route", "rel_err", "scaled_err"],
    );
    let ss = sigmas(rc, &[0.55, 0.6, 0.75, 0.9]);
    let t_max = rc.flags.t_max.unwrap_or(20.0);
    let step = rc.flags.step.unwrap_or(1.0);
    r.input("sigma", ss.clone());
    r.input("t_max", t_max);
    r.input("step", step);
    r.input("tolerance", MODULUS_TOL);
    let ts = t_grid(0.0, t_max, step)?;
    let mut worst = 0.0f64;
    for &s in &ss {
        let sp = sig(s)?;
        let rep = ModulusRepresentation::new(sp, &rc.eval)?;
        let j = JRoute::new(sp.tau(), &rc.eval)?;
        let at_zero = xi_mod_sq(sp, 0.0, &rc.eval)?;
        let rows = ts
            .par_iter()
            .map(|&t| -> Result<_, CliError> {
                let o = xi_mod_sq(sp, t, &rc.eval)?;
                let a = rep.eval(t)?.value;
                let b = j.twice_mod_sq(t)?.value / 2.0;
                Ok((t, o, a, b))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (t, o, a, b) in rows {
            let d = (a - o).abs().max((b - o).abs());
            let scaled = d / at_zero.max(o);
            worst = worst.max(scaled);
            r.row(vec![s.into(), t.into(), o.into(), a.into(), b.into(), (d / o).into(), scaled.into()]);
            if !(scaled <= MODULUS_TOL) {
                r.flag(
                    Status::Fail,
                    format!("sigma = {s}, t = {t}: oracle {o}, representation {a}, J route {b}"),
                );
            }
        }
    }
    r.summary("max_scaled_err", worst);
    Ok(r)
}

fn scan_route(rc: &RunConfig) -> Result<ScanRoute, CliError> {
    match rc.flags.method.as_deref().unwrap_or("representation") {
        "representation" => Ok(ScanRoute::Representation),
        "j-eta" | "j_eta" => Ok(ScanRoute::JEta),
        "k-fourier" | "k_fourier" => Ok(ScanRoute::KFourier),
        m => Err(CliError::Usage(format!(
            "--method for scan is representation, j-eta or k-fourier, got {m:?}"
        ))),
    }
}

fn scan(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("scan", vec!["sigma", "t", "value", "err_est", "point_status"]);
    let ss = sigmas(rc, &[0.75]);
    let route = scan_route(rc)?;
    let t_max = rc.flags.t_max.unwrap_or(30.0);
    let step = rc.flags.step.unwrap_or(0.1);
    r.input("sigma", ss.clone());
    r.input("route", name(route));
    r.input("t_max", t_max);
    r.input("step", step);
    for &s in &ss {
        let rep = scan_inequality(sig(s)?, t_max, step, route, &rc.eval)?;
        for ((&t, &v), &e) in rep.grid.iter().zip(&rep.values).zip(&rep.errs) {
            let st = classify(v, e);
            r.row(vec![s.into(), t.into(), v.into(), e.into(), name(st).into()]);
            match st {
                PointStatus::Violation => r.flag(Status::Fail, format!("sigma = {s}, t = {t}: value {v} +/- {e}")),
                PointStatus::Indeterminate => {
                    r.flag(Status::Indeterminate, format!("sigma = {s}, t = {t}: value {v} +/- {e} unresolved"))
                }
                PointStatus::Positive => {}
            }
        }
        r.summary(format!("min_value[{s}]"), rep.min_value);
        r.summary(format!("min_t[{s}]"), rep.min_t);
    }
    Ok(r)
}

fn coeffs(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new(
        "coeffs",
        vec!["k", "a_k", "c_k", "err_est", "c_k_moment", "sign_ok", "bound", "bound_ok"],
    );
    let tau = rc.flags.tau.unwrap_or(0.25);
    let k_max = rc.flags.k_max.unwrap_or(10);
    r.input("tau", tau);
    r.input("k_max", k_max);
    let tp = TauParam::new(tau)?;
    let p = PowerSeriesCoeffs::compute(tp, k_max, &rc.eval)?;
    for k in 0..=k_max {
        let i = k as usize;
        let c = p.c[i];
        let sign_ok = if k % 2 == 0 { c > 0.0 } else { c < 0.0 };
        let bound = c_magnitude_bound(k);
        let bound_ok = c.abs() < bound;
        // The moment form loses digits quickly in k; report it where it is sharp.
        let moment = if k <= 4 { Some(c_coeff_via_u(tp.sigma(), k, &rc.eval)?.value) } else { None };
        r.row(vec![
            k.into(),
            p.a[i].into(),
            c.into(),
            p.err_est[i].into(),
            moment.into(),
            sign_ok.into(),
            bound.into(),
            bound_ok.into(),
        ]);
        if !sign_ok || !bound_ok {
            r.flag(Status::Fail, format!("k = {k}: c_k = {c}, bound {bound}"));
        }
    }
    Ok(r)
}

fn montecarlo(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new(
        "montecarlo",
        vec![
            "sigma",
            "t",
            "estimate",
            "std_error",
            "deterministic",
            "z_score",
            "mm_rhs",
            "mm_holds",
            "mm_holds_mc",
            "n_samples",
            "acceptance_rate",
            "seed",
        ],
    );
    let ss = sigmas(rc, &[0.75]);
    let ts = rc.flags.t_values.clone().unwrap_or_else(|| vec![1.0, 5.0, 10.0]);
    let n = rc.flags.samples.unwrap_or(100_000);
    let seed = rc.flags.seed.unwrap_or(1);
    r.input("sigma", ss.clone());
    r.input("t", ts.clone());
    r.input("samples", n);
    r.input("seed", seed);
    for &s in &ss {
        let sp = sig(s)?;
        let rep = ModulusRepresentation::new(sp, &rc.eval)?;
        let sampler = XSampler::from_representation(&rep, s)?;
        for m in mc_reports(&rep, &sampler, &ts, n, seed)? {
            r.row(vec![
                m.sigma.into(),
                m.t.into(),
                m.estimate.into(),
                m.std_error.into(),
                m.deterministic_value.into(),
                m.z_score.into(),
                m.mm_rhs.into(),
                m.mm_holds.into(),
                m.mm_holds_mc.into(),
                m.n_samples.into(),
                m.acceptance_rate.into(),
                m.seed.into(),
            ]);
            if !m.mm_holds {
                r.flag(
                    Status::Fail,
                    format!("sigma = {s}, t = {}: E[cos tX] = {} not above {}", m.t, m.deterministic_value, m.mm_rhs),
                );
            }
            if m.z_score > Z_LIMIT {
                r.flag(
                    Status::Indeterminate,
                    format!("sigma = {s}, t = {}: Monte Carlo off by {} standard errors", m.t, m.z_score),
                );
            }
        }
    }
    Ok(r)
}

fn autocorr(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("autocorr", vec!["sigma", "t", "a"]);
    let ss = sigmas(rc, &[0.75]);
    let t_max = rc.flags.t_max.unwrap_or(30.0);
    let step = rc.flags.step.unwrap_or(0.1);
    r.input("sigma", ss.clone());
    r.input("t_max", t_max);
    r.input("step", step);
    for &s in &ss {
        let o = orthogonalization_scan(sig(s)?, t_max, step, &rc.eval)?;
        r.row(vec![s.into(), 0.0.into(), 1.0.into()]);
        for (&t, &a) in o.grid.iter().zip(&o.values) {
            r.row(vec![s.into(), t.into(), a.into()]);
        }
        r.summary(format!("min_a[{s}]"), o.min_a);
        r.summary(format!("iota[{s}]"), o.iota_found.map(|c| c.t));
        if let Some(c) = o.iota_found {
            r.flag(
                Status::Fail,
                format!("sigma = {s}: A changes sign in [{}, {}]", c.bracket.0, c.bracket.1),
            );
        }
    }
    Ok(r)
}

fn reproduce_appendix(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new(
        "reproduce-appendix",
        vec!["recipe", "quantity", "computed", "published", "rel_err", "converged", "matches"],
    );
    let sp = sig(0.75)?;
    r.input("sigma", 0.75);
    r.input("tolerance", APPENDIX_TOL);
    let converged = s_t_constants(sp, Method::ADirect, &rc.eval)?;
    for (recipe, s_pub, t_pub) in PUBLISHED {
        let m = if recipe == Recipe::B { Method::BSeries } else { Method::CInversion };
        let c = s_t_paper_recipe(sp, m, &rc.eval)?;
        for (q, got, want, conv) in [
            ("S", c.s_value, s_pub, converged.s_value),
            ("T", c.t_value, t_pub, converged.t_value),
        ] {
            let e = rel(got, want);
            let ok = e <= APPENDIX_TOL;
            r.row(vec![
                format!("{recipe:?}").into(),
                q.into(),
                got.into(),
                want.into(),
                e.into(),
                conv.into(),
                ok.into(),
            ]);
            if !ok {
                r.flag(
                    Status::Fail,
                    format!("recipe {recipe:?}: {q} = {got} vs published {want} (relative error {e:e})"),
                );
            }
        }
    }
    Ok(r)
}

struct Checks<'a> {
    r: &'a mut Report,
}

impl Checks<'_> {
    fn check(&mut self, name: &str, value: f64, tol: f64, ok: bool) {
        self.r.row(vec![name.into(), value.into(), tol.into(), ok.into()]);
        if !ok {
            self.r.flag(Status::Fail, format!("{name}: {value} (tolerance {tol})"));
        }
    }

    fn at_most(&mut self, name: &str, value: f64, tol: f64) {
        self.check(name, value, tol, value <= tol);
    }
}

fn selftest(rc: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("selftest", vec!["check", "value", "tolerance", "pass"]);
    let seed = rc.flags.seed.unwrap_or(1);
    r.input("seed", seed);
    let cfg = &rc.eval;
    let mut c = Checks { r: &mut r };
    let s75 = sig(0.75)?;

    let one = ComplexPoint::new(1.0, 0.0);
    let e0 = (xi(ComplexPoint::new(0.0, 0.0), cfg)?.re - 0.5).abs();
    c.at_most("xi(0) = 1/2", e0, 1e-12);
    let mut fe = 0.0f64;
    for (a, b) in [(0.3, 2.0), (0.75, -7.5), (-0.5, 14.0), (1.4, 3.0)] {
        let s = ComplexPoint::new(a, b);
        let (x, y) = (xi(s, cfg)?, xi(one - s, cfg)?);
        fe = fe.max((x - y).norm() / x.norm());
    }
    c.at_most("functional equation", fe, 1e-12);

    let m: Vec<ConstantsReport> = [Method::ADirect, Method::BSeries, Method::CInversion]
        .iter()
        .map(|&m| s_t_constants(s75, m, cfg))
        .collect::<Result<_, _>>()?;
    let spread = m.iter().map(|x| rel(x.s_value, m[0].s_value).max(rel(x.t_value, m[0].t_value))).fold(0.0, f64::max);
    c.at_most("S, T three-method spread at 0.75", spread, METHOD_SPREAD_TOL);
    let mut worst_combo = f64::INFINITY;
    for s in [0.55, 0.65, 0.75, 0.85, 0.95] {
        let k = s_t_constants(sig(s)?, Method::ADirect, cfg)?;
        let v = if k.s_value > 0.0 && k.t_value < 0.0 { k.s_value + k.t_value / 4.0 } else { -1.0 };
        worst_combo = worst_combo.min(v);
    }
    c.check("S > 0, T < 0, S + T/4 > 0 (min of S + T/4)", worst_combo, 0.0, worst_combo > 0.0);

    let rep = ModulusRepresentation::new(s75, cfg)?;
    let at_zero = xi_mod_sq(s75, 0.0, cfg)?;
    let mut scaled = 0.0f64;
    for t in [0.0, 2.0, 10.0] {
        let o = xi_mod_sq(s75, t, cfg)?;
        scaled = scaled.max((rep.eval(t)?.value - o).abs() / at_zero.max(o));
    }
    c.at_most("representation vs oracle at 0.75", scaled, MODULUS_TOL);

    let j = JRoute::new(TauParam::new(0.25)?, cfg)?;
    let mut je = 0.0f64;
    for t in [0.0, 1.0, 5.0] {
        je = je.max(rel(j.twice_mod_sq(t)?.value / 2.0, xi_mod_sq(s75, t, cfg)?));
    }
    c.at_most("J route vs oracle at tau = 0.25", je, 1e-5);

    let p = PowerSeriesCoeffs::compute(TauParam::new(0.25)?, 6, cfg)?;
    let bad = p
        .c
        .iter()
        .enumerate()
        .filter(|&(k, &x)| (if k % 2 == 0 { x <= 0.0 } else { x >= 0.0 }) || x.abs() >= c_magnitude_bound(k as u32))
        .count();
    c.check("coefficient signs and bounds, k <= 6 (failures)", bad as f64, 0.0, bad == 0);

    let b = s_t_paper_recipe(s75, Method::BSeries, cfg)?;
    let be = rel(b.s_value, PUBLISHED[0].1).max(rel(b.t_value, PUBLISHED[0].2));
    c.at_most("series recipe vs published", be, APPENDIX_TOL);

    let sc = scan_inequality(s75, 10.0, 0.5, ScanRoute::Representation, cfg)?;
    c.check("scan on [0, 10] (min value)", sc.min_value, 0.0, sc.all_positive());

    let kk = KKernel::from_representation(rep.clone(), 0.75);
    let fe = rel(kk.fourier(1.0)?.value, kk.fourier_from_modulus(xi_mod_sq(s75, 1.0, cfg)?, 1.0));
    c.at_most("kernel Fourier identity at t = 1", fe, 1e-6);

    let sampler = XSampler::from_representation(&rep, 0.75)?;
    let mc = mc_reports(&rep, &sampler, &[1.0, 5.0], 20_000, seed)?;
    let z = mc.iter().map(|m| m.z_score).fold(0.0, f64::max);
    c.at_most("Monte Carlo z-score, n = 20000", z, Z_LIMIT);

    let l = truncation_levels(0.5, s75, 1, cfg)?;
    c.check(
        "truncation levels at (0.5, 0.75, 1): N1 = 6, N2 = 7282",
        l.n1 as f64,
        0.0,
        l.n1 == 6 && l.n2 == 7282 && l.app1_passes,
    );
    Ok(r)
}
