//! Evaluation settings and the two line parameters.
//!
//! Every truncation and tolerance used by the library comes from an
//! [`EvalConfig`]; nothing downstream hard-codes a cutoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the double series `J_tau` is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum JTauMode {
    /// One-dimensional divisor-sum form.
    #[default]
    DivisorSum,
    /// Both indices summed up to `series_max_terms`. Only useful as an oracle.
    NaiveDoubleSum,
}

/// Maps a caller-supplied tail bound to a finite upper limit.
///
/// The cutoff `X` is the smallest point where the bounded tail mass drops to
/// `tail_fraction * quad_abs_tol`, capped at `max_cutoff`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperCutoffPolicy {
    pub tail_fraction: f64,
    pub max_cutoff: f64,
}

impl Default for UpperCutoffPolicy {
    fn default() -> Self {
        UpperCutoffPolicy {
            tail_fraction: 0.1,
            max_cutoff: 1.0e3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Relative size of the last retained series term.
    pub series_tol: f64,
    /// Cap on any summation index.
    pub series_max_terms: usize,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    /// Maximum bisection depth of any adaptive subinterval.
    pub quad_max_depth: u32,
    pub upper_cutoff: UpperCutoffPolicy,
    pub j_tau_mode: JTauMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            series_tol: 1e-14,
            series_max_terms: 100_000,
            quad_rel_tol: 1e-11,
            quad_abs_tol: 1e-15,
            quad_max_depth: 40,
            upper_cutoff: UpperCutoffPolicy::default(),
            j_tau_mode: JTauMode::DivisorSum,
        }
    }
}

impl EvalConfig {
    /// Settings used for regression baselines.
    pub fn tight() -> Self {
        EvalConfig {
            series_tol: 1e-16,
            quad_rel_tol: 1e-13,
            quad_abs_tol: 1e-17,
            quad_max_depth: 50,
            ..Self::default()
        }
    }

    /// Looser settings for quick exploratory runs.
    pub fn fast() -> Self {
        EvalConfig {
            quad_rel_tol: 1e-8,
            quad_abs_tol: 1e-12,
            ..Self::default()
        }
    }

    pub fn with_quad_tol(mut self, rel: f64, abs: f64) -> Self {
        self.quad_rel_tol = rel;
        self.quad_abs_tol = abs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("series_tol", self.series_tol)?;
        positive("quad_rel_tol", self.quad_rel_tol)?;
        positive("quad_abs_tol", self.quad_abs_tol)?;
        positive("upper_cutoff.tail_fraction", self.upper_cutoff.tail_fraction)?;
        positive("upper_cutoff.max_cutoff", self.upper_cutoff.max_cutoff)?;
        if self.series_max_terms < 1 {
            return Err(Error::Config("series_max_terms must be >= 1".into()));
        }
        if self.quad_max_depth < 1 {
            return Err(Error::Config("quad_max_depth must be >= 1".into()));
        }
        Ok(())
    }
}

/// `tau = sigma - 1/2`. Nominal range is `(0, 1/2)`; other finite values are
/// evaluated but flagged.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct TauParam(f64);

impl TauParam {
    pub fn new(tau: f64) -> Result<Self> {
        if tau.is_finite() {
            Ok(TauParam(tau))
        } else {
            Err(Error::domain("TauParam", format!("tau must be finite, got {tau}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_nominal(self) -> bool {
        self.0 > 0.0 && self.0 < 0.5
    }

    pub fn sigma(self) -> SigmaParam {
        SigmaParam(self.0 + 0.5)
    }
}

/// Real part of the evaluation line. Nominal range is `(1/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SigmaParam(f64);

impl SigmaParam {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() {
            Ok(SigmaParam(sigma))
        } else {
            Err(Error::domain("SigmaParam", format!("sigma must be finite, got {sigma}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_nominal(self) -> bool {
        self.0 > 0.5 && self.0 < 1.0
    }

    /// Several of the integral representations only converge for `0 < sigma < 1`.
    pub fn in_strip(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }

    pub fn tau(self) -> TauParam {
        TauParam(self.0 - 0.5)
    }

    pub(crate) fn require_strip(self, func: &'static str) -> Result<f64> {
        if self.in_strip() {
            Ok(self.0)
        } else {
            Err(Error::domain(func, format!("sigma = {} outside (0, 1)", self.0)))
        }
    }

    pub(crate) fn require_nominal(self, func: &'static str) -> Result<f64> {
        if self.is_nominal() {
            Ok(self.0)
        } else {
            Err(Error::domain(func, format!("sigma = {} outside (1/2, 1)", self.0)))
        }
    }
}
