//! Numerics for a family of inequalities equivalent to the Riemann hypothesis.
//!
//! The crate evaluates `|ξ(σ - it)|²` by several independent routes: the
//! classical theta integral ([`xi_oracle`]), the `S`, `T`, `W` representation
//! and the `J_τ`/`η_τ` route ([`representation`]). It also runs the numerical
//! programs built on them ([`inequality_lab`]).
//!
//! ```
//! use xi_ineq::{EvalConfig, SigmaParam, xi_mod_sq, modulus_rhs};
//! let cfg = EvalConfig::default();
//! let s = SigmaParam::new(0.75).unwrap();
//! let a = xi_mod_sq(s, 2.0, &cfg).unwrap();
//! let b = modulus_rhs(s, 2.0, &cfg).unwrap();
//! assert!((a - b).abs() < 1e-10);
//! ```

pub mod config;
pub mod error;
pub mod quadrature;
pub mod special_series;
pub mod roots;
pub mod xi_oracle;
pub mod representation;
pub mod inequality_lab;

pub use config::{EvalConfig, JTauMode, SigmaParam, TauParam, UpperCutoffPolicy};
pub use error::{Error, Result};
pub use inequality_lab::{MCReport, ScanReport, ScanRoute, TruncationLevels};
pub use quadrature::{Decay, QuadResult};
pub use representation::{modulus_rhs, modulus_rhs_via_j, ConstantsReport, Method, PowerSeriesCoeffs};
pub use xi_oracle::{xi, xi_mod_sq, ComplexPoint};
