//! Flat `key = value` config files overriding [`MetricConfig`] defaults.
//!
//! ```text
//! # comments and blank lines are ignored
//! alpha = 0.6
//! c3 = 550
//! gradient_variant = fused        # conventional | fused
//! chroma_variant = joint_cs_hat   # two_factor_cs | joint_cs_hat
//! combine = summation             # summation | multiplication
//! pooling = deviation             # deviation | mean | minkowski
//! rho = 1
//! q = 0.25
//! o = 0.25
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::pooling::PoolingStrategy;
use crate::similarity::{ChromaVariant, CombineScheme, GradientVariant, MetricConfig};

pub fn load_config(path: impl AsRef<Path>) -> Result<MetricConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

/// Applies every `key = value` line on top of the defaults.
pub fn parse_config(text: &str) -> Result<MetricConfig> {
    let mut cfg = MetricConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config { line: i + 1, message };
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim().to_ascii_lowercase(), value.trim());
        let num = || value.parse::<f64>().map_err(|_| err(format!("`{key}` expects a number, got `{value}`")));
        let choice = |options: &[&str]| {
            let v = value.to_ascii_lowercase();
            if options.contains(&v.as_str()) {
                Ok(v)
            } else {
                Err(err(format!("`{key}` must be one of {}, got `{value}`", options.join(" | "))))
            }
        };
        match key.as_str() {
            "alpha" => cfg.alpha = num()?,
            "c1" => cfg.c1 = num()?,
            "c2" => cfg.c2 = num()?,
            "c3" => cfg.c3 = num()?,
            "gamma" => cfg.gamma = num()?,
            "beta" => cfg.beta = num()?,
            "rho" => cfg.pooling.rho = num()?,
            "q" => cfg.pooling.q = num()?,
            "o" => cfg.pooling.o = num()?,
            "gradient_variant" => {
                cfg.gradient_variant = match choice(&["conventional", "fused"])?.as_str() {
                    "conventional" => GradientVariant::Conventional,
                    _ => GradientVariant::Fused,
                }
            }
            "chroma_variant" => {
                cfg.chroma_variant = match choice(&["two_factor_cs", "joint_cs_hat"])?.as_str() {
                    "two_factor_cs" => ChromaVariant::TwoFactorCs,
                    _ => ChromaVariant::JointCsHat,
                }
            }
            "combine" => {
                cfg.combine = match choice(&["summation", "multiplication"])?.as_str() {
                    "summation" => CombineScheme::Summation,
                    _ => CombineScheme::Multiplication,
                }
            }
            "pooling" | "strategy" => {
                cfg.pooling.strategy = match choice(&["deviation", "mean", "minkowski"])?.as_str() {
                    "deviation" => PoolingStrategy::Deviation,
                    "mean" => PoolingStrategy::Mean,
                    _ => PoolingStrategy::Minkowski,
                }
            }
            _ => return Err(err(format!("unknown key `{key}`"))),
        }
    }
    cfg.validate().map_err(|e| Error::Config { line: 0, message: e.to_string() })?;
    Ok(cfg)
}

/// Snake-case name of a unit enum variant, as serde writes it.
pub(crate) fn label<T: serde::Serialize>(v: T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

/// Renders a config in the same format [`parse_config`] reads.
pub fn to_config_text(cfg: &MetricConfig) -> String {
    format!(
        "alpha = {:?}\nc1 = {:?}\nc2 = {:?}\nc3 = {:?}\ngradient_variant = {}\nchroma_variant = {}\ncombine = {}\n\
         gamma = {:?}\nbeta = {:?}\npooling = {}\nrho = {:?}\nq = {:?}\no = {:?}\n",
        cfg.alpha,
        cfg.c1,
        cfg.c2,
        cfg.c3,
        label(cfg.gradient_variant),
        label(cfg.chroma_variant),
        label(cfg.combine),
        cfg.gamma,
        cfg.beta,
        label(cfg.pooling.strategy),
        cfg.pooling.rho,
        cfg.pooling.q,
        cfg.pooling.o,
    )
}
