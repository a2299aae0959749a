//! Sampling `X_σ` with density `ρ_σ ∝ W_σ(x) e^{-σx}` on `x ≥ 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{EvalConfig, SigmaParam};
use crate::error::{Error, Result};
use crate::representation::{quartic_factor, ModulusRepresentation};

const TABLE_NODES: usize = 4096;

/// Rejection sampler built on a monotone cubic table of `W_σ`.
///
/// Proposals are `Exp(σ)`; a proposal `x` is kept with probability
/// `W_σ(x) / M`, where `M` is the table maximum plus the table error.
#[derive(Debug, Clone)]
pub struct XSampler {
    pub sigma: f64,
    pub x_cut: f64,
    /// Largest observed `|table - W_σ|` at interval midpoints.
    pub table_err: f64,
    pub envelope: f64,
    /// `∫_0^{x_cut} W_σ e^{-σx} dx`.
    pub norm: f64,
    log_step: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    cdf: Vec<f64>,
}

/// Fritsch-Carlson slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    d[0] = del[0];
    d[n - 1] = del[n - 2];
    for i in 1..n - 1 {
        if del[i - 1] * del[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    d
}

impl XSampler {
    pub fn new(sigma: SigmaParam, cfg: &EvalConfig) -> Result<Self> {
        let s = sigma.require_nominal("sample_x_sigma")?;
        let rep = ModulusRepresentation::new(sigma, cfg)?;
        Self::from_representation(&rep, s)
    }

    pub fn from_representation(rep: &ModulusRepresentation, s: f64) -> Result<Self> {
        // W_σ(x) < 1e-300 well before x = 5.
        let x_cut: f64 = 5.0;
        let log_step = (1.0 + x_cut).ln() / (TABLE_NODES - 1) as f64;
        let x: Vec<f64> = (0..TABLE_NODES).map(|i| (i as f64 * log_step).exp_m1()).collect();
        let y = x.par_iter().map(|&xi| rep.w(xi)).collect::<Result<Vec<_>>>()?;
        let mids: Vec<f64> = x.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let ym = mids.par_iter().map(|&xi| rep.w(xi)).collect::<Result<Vec<_>>>()?;
        let d = pchip_slopes(&x, &y);
        let mut sampler = XSampler {
            sigma: s,
            x_cut,
            table_err: 0.0,
            envelope: 0.0,
            norm: 0.0,
            log_step,
            x,
            y,
            d,
            cdf: Vec::new(),
        };
        let mut err = 0.0f64;
        for (&m, &w) in mids.iter().zip(&ym) {
            err = err.max((sampler.w_table(m) - w).abs());
        }
        sampler.table_err = err;
        let wmax = sampler.y.iter().chain(&ym).copied().fold(0.0, f64::max);
        sampler.envelope = wmax * (1.0 + 1e-6) + err;

        // Simpson on each table interval with the exact midpoint values.
        let mut cdf = Vec::with_capacity(TABLE_NODES);
        cdf.push(0.0);
        let mut acc = 0.0;
        for i in 0..TABLE_NODES - 1 {
            let (a, b) = (sampler.x[i], sampler.x[i + 1]);
            let f = |xx: f64, w: f64| w * (-s * xx).exp();
            acc += (b - a) / 6.0 * (f(a, sampler.y[i]) + 4.0 * f(mids[i], ym[i]) + f(b, sampler.y[i + 1]));
            cdf.push(acc);
        }
        sampler.norm = acc;
        for c in &mut cdf {
            *c /= acc;
        }
        sampler.cdf = cdf;
        Ok(sampler)
    }

    fn interval(&self, x: f64) -> usize {
        (((1.0 + x).ln() / self.log_step) as usize).min(TABLE_NODES - 2)
    }

    /// Interpolated `W_σ(x)`, zero beyond the table.
    pub fn w_table(&self, x: f64) -> f64 {
        if !(x >= 0.0) || x > self.x_cut {
            return 0.0;
        }
        let i = self.interval(x);
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.y[i]
            + (t3 - 2.0 * t2 + t) * h * self.d[i]
            + (-2.0 * t3 + 3.0 * t2) * self.y[i + 1]
            + (t3 - t2) * h * self.d[i + 1]
    }

    /// `P(X_σ ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.x_cut {
            return 1.0;
        }
        let i = self.interval(x);
        let t = (x - self.x[i]) / (self.x[i + 1] - self.x[i]);
        self.cdf[i] + t * (self.cdf[i + 1] - self.cdf[i])
    }

    /// One draw and the number of proposals it took.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> (f64, u64) {
        let mut trials = 0;
        loop {
            trials += 1;
            let u: f64 = rng.random();
            let x = -(-u).ln_1p() / self.sigma;
            let v: f64 = rng.random();
            if v * self.envelope < self.w_table(x) {
                return (x, trials);
            }
        }
    }

    /// Draw `i` uses its own ChaCha stream, so the output does not depend on
    /// thread count or scheduling.
    pub fn sample_many(&self, n: usize, seed: u64) -> (Vec<f64>, u64) {
        let draws: Vec<(f64, u64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                self.sample(&mut rng)
            })
            .collect();
        let trials = draws.iter().map(|d| d.1).sum();
        (draws.into_iter().map(|d| d.0).collect(), trials)
    }
}

pub fn sample_x_sigma<R: Rng>(sampler: &XSampler, rng: &mut R) -> f64 {
    sampler.sample(rng).0
}

/// `sup |F_n - F|` for the sample against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic one-sample critical value at level 0.01.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCReport {
    pub sigma: f64,
    pub t: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub acceptance_rate: f64,
    pub seed: u64,
    /// `∫ cos(tx) ρ_σ(x) dx` by quadrature.
    pub deterministic_value: f64,
    /// `-(S + T t²) / (q(t) ∫ W e^{-σx})`, the bound `E[cos(tX)]` must exceed.
    pub mm_rhs: f64,
    pub mm_holds: bool,
    pub mm_holds_mc: bool,
    /// `|estimate - deterministic| / std_error`, zero when both are exact.
    pub z_score: f64,
}

/// Estimates `E[cos(tX_σ)]` for several `t` from one set of draws.
pub fn mc_reports(
    rep: &ModulusRepresentation,
    sampler: &XSampler,
    ts: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<MCReport>> {
    if n_samples < 1000 {
        return Err(Error::domain("mc_check", format!("need at least 1000 samples, got {n_samples}")));
    }
    let (xs, trials) = sampler.sample_many(n_samples, seed);
    let n = n_samples as f64;
    let norm = rep.w_cosine_integral(0.0)?.value;
    ts.iter()
        .map(|&t| {
            let (sum, sum2) = xs
                .iter()
                .map(|&x| (t * x).cos())
                .fold((0.0, 0.0), |(a, b), c| (a + c, b + c * c));
            let mean = sum / n;
            let var = ((sum2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
            let se = (var / n).sqrt();
            let det = rep.w_cosine_integral(t)?.value / norm;
            let rhs = -(rep.s_const + rep.t_const * t * t) / (norm * quartic_factor(sampler.sigma, t));
            let diff = (mean - det).abs();
            Ok(MCReport {
                sigma: sampler.sigma,
                t,
                estimate: mean,
                std_error: se,
                n_samples: n_samples as u64,
                acceptance_rate: n / trials as f64,
                seed,
                deterministic_value: det,
                mm_rhs: rhs,
                mm_holds: det > rhs,
                mm_holds_mc: mean > rhs,
                z_score: if se > 0.0 { diff / se } else if diff < 1e-12 { 0.0 } else { f64::INFINITY },
            })
        })
        .collect()
}

pub fn mc_check(sigma: SigmaParam, t: f64, n_samples: usize, seed: u64, cfg: &EvalConfig) -> Result<MCReport> {
    let s = sigma.require_nominal("mc_check")?;
    let rep = ModulusRepresentation::new(sigma, cfg)?;
    let sampler = XSampler::from_representation(&rep, s)?;
    Ok(mc_reports(&rep, &sampler, &[t], n_samples, seed)?.remove(0))
}
