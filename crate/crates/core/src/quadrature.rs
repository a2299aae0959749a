//! Integration engines.
//!
//! All engines share one adaptive core: a 21-point Gauss-Kronrod rule with
//! QUADPACK-style error rescaling, driven by global bisection of the
//! subinterval with the largest error. Semi-infinite ranges are truncated at a
//! point derived from a caller-supplied [`Decay`] bound, never by guesswork.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// Hard cap on live subintervals in one adaptive run.
const MAX_SEGMENTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    pub evals: usize,
    pub truncation_point: Option<f64>,
    pub converged: bool,
}

impl QuadResult {
    fn zero(truncation_point: Option<f64>) -> Self {
        QuadResult {
            value: 0.0,
            err_est: 0.0,
            evals: 1,
            truncation_point,
            converged: true,
        }
    }

    /// Adds the tail mass that was cut off to the error estimate.
    fn with_tail(mut self, tail: f64) -> Self {
        self.err_est += tail;
        self
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.err_est *= factor.abs();
        self
    }
}

/// Bound on how fast an integrand decays beyond the lower limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    /// `|f(x)| <= scale * exp(-rate * x)`.
    Exponential { scale: f64, rate: f64 },
    /// `|f(x)| <= scale * exp(x - rate * e^x)`; the tail beyond `X` is then
    /// exactly bounded by `scale * exp(-rate * e^X) / rate`.
    DoubleExponential { scale: f64, rate: f64 },
    /// The integrand vanishes (or is ignored) beyond this point.
    Cutoff(f64),
}

impl Decay {
    pub fn exponential(rate: f64) -> Self {
        Decay::Exponential { scale: 1.0, rate }
    }

    /// Truncation point for an integral starting at `a`, and the bound on the
    /// discarded tail.
    pub fn cutoff(&self, a: f64, cfg: &EvalConfig) -> (f64, f64) {
        let target = cfg.upper_cutoff.tail_fraction * cfg.quad_abs_tol;
        let cap = a.max(cfg.upper_cutoff.max_cutoff);
        let (x, tail_at) = match *self {
            Decay::Cutoff(x) => return (x.max(a), 0.0),
            Decay::Exponential { scale, rate } => {
                let x = (scale.abs() / (rate * target)).ln() / rate;
                let tail = move |x: f64| scale.abs() * (-rate * x).exp() / rate;
                (x, Box::new(tail) as Box<dyn Fn(f64) -> f64>)
            }
            Decay::DoubleExponential { scale, rate } => {
                let inner = (scale.abs() / (rate * target)).ln() / rate;
                let x = if inner > 0.0 { inner.ln() } else { f64::NEG_INFINITY };
                let tail = move |x: f64| scale.abs() * (-rate * x.exp()).exp() / rate;
                (x, Box::new(tail) as Box<dyn Fn(f64) -> f64>)
            }
        };
        let x = if x.is_nan() { a } else { x.clamp(a, cap) };
        (x, tail_at(x))
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_478,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Nodes and weights of the 21-point Kronrod rule repeated over `panels`
/// equal pieces of `[a, b]`. For integrating many related integrands
/// against the same expensive factor.
pub fn composite_kronrod(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(21 * panels);
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for j in 0..10 {
            out.push((c - half * XGK[j], half * WGK[j]));
            out.push((c + half * XGK[j], half * WGK[j]));
        }
        out.push((c, half * WGK[10]));
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    resabs: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F>(f: &F, a: f64, b: f64, depth: u32) -> Result<Segment>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { x })
        }
    };

    let fc = eval(center)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment {
        a,
        b,
        value,
        err,
        resabs,
        depth,
    })
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Adaptive integration over the union of consecutive intervals between
/// `breaks` (sorted ascending, at least two points).
pub fn try_integrate_with_breaks<F>(f: F, breaks: &[f64], cfg: &EvalConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if breaks.len() < 2 {
        return Err(Error::domain("integrate", "need at least two break points"));
    }
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let mut evals = 0usize;
    for w in breaks.windows(2) {
        if !(w[0] < w[1]) {
            if w[0] == w[1] {
                continue;
            }
            return Err(Error::domain("integrate", format!("break points not ascending: {} > {}", w[0], w[1])));
        }
        heap.push(gk21(&f, w[0], w[1], 0)?);
        evals += 21;
    }
    if heap.is_empty() {
        return Ok(QuadResult::zero(None));
    }

    loop {
        let all = heap.iter().chain(frozen.iter());
        let (value, err, absint) = all.fold(
            (NeumaierSum::default(), 0.0, 0.0),
            |(mut v, e, r), s| {
                v.add(s.value);
                (v, e + s.err, r + s.resabs)
            },
        );
        let value = value.total();
        let target = cfg
            .quad_abs_tol
            .max(cfg.quad_rel_tol * value.abs())
            .max(100.0 * f64::EPSILON * absint);
        let result = |converged| QuadResult {
            value,
            err_est: err,
            evals,
            truncation_point: None,
            converged,
        };
        if err <= target {
            return Ok(result(true));
        }
        if heap.len() + frozen.len() > MAX_SEGMENTS {
            return Err(Error::QuadConvergence { partial: result(false) });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::QuadConvergence { partial: result(false) });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= cfg.quad_max_depth || !(worst.a < mid && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        heap.push(gk21(&f, worst.a, mid, worst.depth + 1)?);
        heap.push(gk21(&f, mid, worst.b, worst.depth + 1)?);
        evals += 42;
    }
}

pub fn try_integrate_finite<F>(f: F, a: f64, b: f64, cfg: &EvalConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate_finite", "limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult::zero(None));
    }
    if a > b {
        return try_integrate_finite(f, b, a, cfg).map(|r| r.scaled(-1.0));
    }
    try_integrate_with_breaks(f, &[a, b], cfg)
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, cfg: &EvalConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_finite(|x| Ok(f(x)), a, b, cfg)
}

/// Break points `a, a+1, a+2, a+4, ...` up to `x`, so long ranges start out
/// resolved near the lower limit where the mass sits.
fn geometric_breaks(a: f64, x: f64) -> Vec<f64> {
    let mut breaks = vec![a];
    let mut step = 1.0;
    let mut p = a + 0.25;
    while p < x {
        breaks.push(p);
        p = a + step;
        step *= 2.0;
    }
    breaks.push(x);
    breaks
}

pub fn try_integrate_semi_infinite<F>(f: F, a: f64, decay: Decay, cfg: &EvalConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let (x, tail) = decay.cutoff(a, cfg);
    if x <= a {
        return Ok(QuadResult::zero(Some(x)).with_tail(tail));
    }
    let mut r = try_integrate_with_breaks(f, &geometric_breaks(a, x), cfg)?;
    r.truncation_point = Some(x);
    Ok(r.with_tail(tail))
}

/// `∫_a^∞ f(x) dx`, truncated where the [`Decay`] bound makes the tail
/// negligible against `quad_abs_tol`.
pub fn integrate_semi_infinite<F>(f: F, a: f64, decay: Decay, cfg: &EvalConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), a, decay, cfg)
}

/// Maps a decay bound on `g(y)` (in `y`) to one on `g(cosh u) 2 cosh(tau u)`.
fn eta_decay(decay: Decay, tau: f64) -> Decay {
    match decay {
        Decay::Cutoff(y) => Decay::Cutoff(if y > 1.0 { y.acosh() } else { 0.0 }),
        // cosh(tau u) <= e^{|tau| u} <= e^u for |tau| <= 1 and cosh u >= e^u / 2.
        Decay::Exponential { scale, rate } if tau.abs() <= 1.0 => Decay::DoubleExponential {
            scale: 2.0 * scale,
            rate: 0.5 * rate,
        },
        Decay::Exponential { scale, rate } => {
            // (|tau| - 1) u <= (|tau| - 1) e^u absorbed by halving the rate again.
            let extra = (tau.abs() - 1.0) / (0.25 * rate);
            Decay::DoubleExponential {
                scale: 2.0 * scale * extra.exp().max(1.0) * 4.0,
                rate: 0.25 * rate,
            }
        }
        Decay::DoubleExponential { scale, rate } => Decay::DoubleExponential {
            scale: 2.0 * scale * (1.0 + tau.abs()).exp(),
            rate: 0.5 * rate,
        },
    }
}

pub fn try_integrate_eta_weighted<G>(g: G, tau: f64, decay: Decay, cfg: &EvalConfig) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<f64>,
{
    let integrand = |u: f64| -> Result<f64> { Ok(g(u.cosh())? * 2.0 * (tau * u).cosh()) };
    try_integrate_semi_infinite(integrand, 0.0, eta_decay(decay, tau), cfg)
}

/// `∫_1^∞ g(y) η_τ(y) dy`, evaluated after `y = cosh u`, which turns the
/// weight into `2 cosh(τu)` and removes the endpoint singularity.
///
/// `decay` bounds `g` as a function of `y`.
pub fn integrate_eta_weighted<G>(g: G, tau: f64, decay: Decay, cfg: &EvalConfig) -> Result<QuadResult>
where
    G: Fn(f64) -> f64,
{
    try_integrate_eta_weighted(|y| Ok(g(y)), tau, decay, cfg)
}

pub fn try_integrate_oscillatory_cos<F>(
    f: F,
    t: f64,
    a: f64,
    decay: Decay,
    cfg: &EvalConfig,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let w = t.abs();
    if w <= 1.0 {
        return try_integrate_semi_infinite(|x| Ok(f(x)? * (t * x).cos()), a, decay, cfg);
    }
    let (x_end, tail) = decay.cutoff(a, cfg);
    if x_end <= a {
        return Ok(QuadResult::zero(Some(x_end)).with_tail(tail));
    }
    let half = std::f64::consts::PI / w;
    let mut edges = vec![a];
    let mut k = (a / half).floor() + 1.0;
    loop {
        let p = k * half;
        if p >= x_end {
            break;
        }
        if p > a {
            edges.push(p);
        }
        k += 1.0;
    }
    edges.push(x_end);

    let panels = edges.len() - 1;
    let panel_cfg = EvalConfig {
        quad_abs_tol: cfg.quad_abs_tol / panels as f64,
        ..*cfg
    };
    let parts: Vec<Result<QuadResult>> = edges
        .par_windows(2)
        .map(|e| try_integrate_finite(|x| Ok(f(x)? * (t * x).cos()), e[0], e[1], &panel_cfg))
        .collect();

    let mut sum = NeumaierSum::default();
    let mut err = tail;
    let mut evals = 0;
    let mut converged = true;
    for part in parts {
        let p = match part {
            Ok(p) => p,
            Err(Error::QuadConvergence { partial }) => partial,
            Err(e) => return Err(e),
        };
        sum.add(p.value);
        err += p.err_est;
        evals += p.evals;
        converged &= p.converged;
    }
    let result = QuadResult {
        value: sum.total(),
        err_est: err,
        evals,
        truncation_point: Some(x_end),
        converged,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::QuadConvergence { partial: result })
    }
}

/// `∫_a^∞ f(x) cos(tx) dx` with the range cut into half-period panels.
pub fn integrate_oscillatory_cos<F>(f: F, t: f64, a: f64, decay: Decay, cfg: &EvalConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_integrate_oscillatory_cos(|x| Ok(f(x)), t, a, decay, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn polynomial_and_sine() {
        let r = integrate_finite(|x| x * x, 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-13);
        assert!(r.converged && r.evals >= 21);
        let r = integrate_finite(f64::sin, 0.0, PI, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate_finite(|x| x.exp(), 1.0, 0.0, &cfg()).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_closed_forms() {
        let r = integrate_semi_infinite(|x| (-x).exp(), 0.0, Decay::exponential(1.0), &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.truncation_point.unwrap() > 30.0);

        // Gamma integral: ∫ e^{-2(T+1)x} x^{2n} dx = (2n)! / (2(T+1))^{2n+1}, T = 1, n = 2.
        let rate = 4.0;
        let r = integrate_semi_infinite(
            |x| (-rate * x).exp() * x.powi(4),
            0.0,
            Decay::Exponential { scale: 1.0, rate: 2.0 },
            &cfg(),
        )
        .unwrap();
        let exact = 24.0 / rate.powi(5);
        assert!((r.value - exact).abs() < 1e-13, "{} vs {}", r.value, exact);

        let r = integrate_semi_infinite(
            |y| y.powi(-2),
            1.0,
            Decay::Cutoff(1e9),
            &EvalConfig {
                upper_cutoff: crate::config::UpperCutoffPolicy {
                    max_cutoff: 1e12,
                    ..Default::default()
                },
                ..cfg()
            },
        )
        .unwrap();
        // Algebraic tails need an explicit cutoff; the remainder is exactly 1e-9.
        assert!((r.value - (1.0 - 1e-9)).abs() < 1e-12);
    }

    #[test]
    fn double_exponential_cutoff_is_tight() {
        let d = Decay::DoubleExponential { scale: 1.0, rate: 2.0 * PI };
        let (x, tail) = d.cutoff(0.0, &cfg());
        assert!(x > 0.0 && x < 3.0, "x = {x}");
        assert!(tail <= 0.1 * cfg().quad_abs_tol * 1.000_001);
    }

    #[test]
    fn eta_weighted_window_and_linearity() {
        let c = cfg();
        let r = integrate_eta_weighted(|_| 1.0, 0.0, Decay::Cutoff(2.0), &c).unwrap();
        assert!((r.value - 2.0 * 2f64.acosh()).abs() < 1e-12);

        let g = |y: f64| (-2.0 * PI * y).exp();
        let d = Decay::Exponential { scale: 1.0, rate: 2.0 * PI };
        let base = integrate_eta_weighted(g, 0.3, d, &c).unwrap().value;
        let scaled = integrate_eta_weighted(|y| 3.5 * g(y), 0.3, d, &c).unwrap().value;
        assert!((scaled - 3.5 * base).abs() <= 1e-13 * scaled.abs());
    }

    #[test]
    fn eta_weighted_matches_offset_singular_integral() {
        // Direct integration of g(y) η_0(y) on [1 + 1e-8, ∞) misses
        // ∫_1^{1+δ} 2 e^{-2π}/sqrt(2(y-1)) dy ≈ 2 e^{-2π} sqrt(2δ).
        let c = cfg();
        let g = |y: f64| (-2.0 * PI * y).exp();
        let via_cosh = integrate_eta_weighted(g, 0.0, Decay::Exponential { scale: 1.0, rate: 2.0 * PI }, &c)
            .unwrap()
            .value;
        let delta = 1e-8;
        let eta0 = |y: f64| 2.0 / (y * y - 1.0).sqrt();
        let mut breaks = vec![1.0 + delta];
        let mut p = 1.0 + 1e-6;
        while p < 1.5 {
            breaks.push(p);
            p = 1.0 + (p - 1.0) * 10.0;
        }
        breaks.extend([1.5, 2.0, 4.0, 8.0]);
        let direct = try_integrate_with_breaks(|y| Ok(g(y) * eta0(y)), &breaks, &c).unwrap().value;
        let missing = 2.0 * (-2.0 * PI).exp() * (2.0 * delta).sqrt();
        assert!(((direct + missing) - via_cosh).abs() < 1e-8, "{direct} + {missing} vs {via_cosh}");
    }

    #[test]
    fn oscillatory_closed_forms() {
        let c = cfg();
        let d = Decay::exponential(1.0);
        for (t, exact) in [(3.0, 1.0 / 10.0), (20.0, 1.0 / 401.0)] {
            let r = integrate_oscillatory_cos(|x| (-x).exp(), t, 0.0, d, &c).unwrap();
            assert!((r.value - exact).abs() < 1e-11, "t={t}: {} vs {exact}", r.value);
        }
        let a = integrate_oscillatory_cos(|x| (-x).exp(), 0.0, 0.0, d, &c).unwrap().value;
        let b = integrate_semi_infinite(|x| (-x).exp(), 0.0, d, &c).unwrap().value;
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn non_finite_integrand_reports_abscissa() {
        let err = integrate_finite(|x| 1.0 / (x - 0.5), 0.0, 1.0, &cfg()).unwrap_err();
        match err {
            Error::Evaluation { x } => assert!((x - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn depth_exhaustion_is_a_convergence_error() {
        let c = EvalConfig {
            quad_max_depth: 2,
            quad_rel_tol: 1e-14,
            quad_abs_tol: 1e-16,
            ..cfg()
        };
        let err = integrate_finite(|x: f64| x.abs().sqrt(), -1.0, 1.0, &c).unwrap_err();
        match err {
            Error::QuadConvergence { partial } => {
                assert!((partial.value - 4.0 / 3.0).abs() < 1e-3);
                assert!(!partial.converged);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tightening_stays_within_reported_error() {
        let f = |x: f64| (x.sin() * 3.0).exp() / (1.0 + x * x);
        let loose = integrate_finite(f, 0.0, 10.0, &cfg().with_quad_tol(1e-7, 1e-10)).unwrap();
        let tight = integrate_finite(f, 0.0, 10.0, &cfg().with_quad_tol(1e-13, 1e-16)).unwrap();
        assert!((loose.value - tight.value).abs() <= loose.err_est);
        let deeper = EvalConfig {
            quad_max_depth: 80,
            ..cfg()
        };
        let again = integrate_finite(f, 0.0, 10.0, &deeper).unwrap();
        let base = integrate_finite(f, 0.0, 10.0, &cfg()).unwrap();
        assert!((again.value - base.value).abs() <= base.err_est);
    }

    #[test]
    fn neumaier_recovers_cancelled_digits() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.total(), 2.0);
    }
}
