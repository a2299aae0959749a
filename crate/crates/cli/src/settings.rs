//! Config file parsing and flag merging.
//!
//! The file is flat text, one `key = value` per line, `#` starts a comment.
//! Keys are the long flag names with `_` for `-`, plus the `EvalConfig`
//! fields.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use xi_ineq::{EvalConfig, JTauMode};

use crate::args::{Flags, Format, Recipe};
use crate::CliError;

pub const CONFIG_ENV: &str = "XI_INEQ_CONFIG";

/// Flags merged over the config file, plus the evaluation settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub flags: Flags,
    pub eval: EvalConfig,
    pub config_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn format(&self) -> Format {
        self.flags.format.unwrap_or(Format::Json)
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|p| parse(key, p.trim())).collect()
}

fn parse_enum<T: ValueEnum>(key: &str, v: &str) -> Result<T, CliError> {
    T::from_str(v, true).map_err(|_| CliError::Usage(format!("config key {key}: bad value {v:?}")))
}

/// Applies the file at `text` to `flags` and `eval`. Values already present
/// in `flags` win.
pub fn apply_config_text(text: &str, flags: &mut Flags, eval: &mut EvalConfig) -> Result<(), CliError> {
    let mut file = Flags::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let (key, v) = (key.trim().replace('-', "_"), value.trim());
        let k = key.as_str();
        match k {
            "sigma" => file.sigma = Some(parse_list(k, v)?),
            "tau" => file.tau = Some(parse(k, v)?),
            "t_max" => file.t_max = Some(parse(k, v)?),
            "step" => file.step = Some(parse(k, v)?),
            "t" => file.t_values = Some(parse_list(k, v)?),
            "method" => file.method = Some(v.to_string()),
            "seed" => file.seed = Some(parse(k, v)?),
            "samples" => file.samples = Some(parse(k, v)?),
            "k_max" => file.k_max = Some(parse(k, v)?),
            "out" => file.out = Some(PathBuf::from(v)),
            "format" => file.format = Some(parse_enum::<Format>(k, v)?),
            "paper_truncation" => file.paper_truncation = Some(parse_enum::<Recipe>(k, v)?),
            "threads" => file.threads = Some(parse(k, v)?),
            "series_tol" => eval.series_tol = parse(k, v)?,
            "series_max_terms" => eval.series_max_terms = parse(k, v)?,
            "quad_rel_tol" => eval.quad_rel_tol = parse(k, v)?,
            "quad_abs_tol" => eval.quad_abs_tol = parse(k, v)?,
            "quad_max_depth" => eval.quad_max_depth = parse(k, v)?,
            "upper_cutoff.tail_fraction" | "tail_fraction" => eval.upper_cutoff.tail_fraction = parse(k, v)?,
            "upper_cutoff.max_cutoff" | "max_cutoff" => eval.upper_cutoff.max_cutoff = parse(k, v)?,
            "j_tau_mode" => {
                eval.j_tau_mode = match v {
                    "divisor_sum" => JTauMode::DivisorSum,
                    "naive_double_sum" => JTauMode::NaiveDoubleSum,
                    _ => return Err(CliError::Usage(format!("config key j_tau_mode: bad value {v:?}"))),
                }
            }
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
    }
    macro_rules! fill {
        ($($f:ident),*) => { $( if flags.$f.is_none() { flags.$f = file.$f; } )* };
    }
    fill!(sigma, tau, t_max, step, t_values, method, seed, samples, k_max, out, format, paper_truncation, threads);
    Ok(())
}

pub fn resolve(mut flags: Flags) -> Result<RunConfig, CliError> {
    let path = flags
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty()).map(PathBuf::from));
    let mut eval = EvalConfig::default();
    if let Some(p) = &path {
        let text = read(p)?;
        apply_config_text(&text, &mut flags, &mut eval)?;
    }
    eval.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(s) = flags.step {
        if !(s > 0.0 && s.is_finite()) {
            return Err(CliError::Usage(format!("--step must be positive, got {s}")));
        }
    }
    if let Some(t) = flags.t_max {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--t-max must be finite and non-negative, got {t}")));
        }
    }
    if matches!(&flags.sigma, Some(v) if v.is_empty()) || matches!(&flags.t_values, Some(v) if v.is_empty()) {
        return Err(CliError::Usage("empty value list".into()));
    }
    Ok(RunConfig {
        flags,
        eval,
        config_path: path,
    })
}

fn read(p: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))
}
