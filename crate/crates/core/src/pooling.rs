//! Collapsing a similarity map to a scalar.
//!
//! The metric uses deviation pooling: the Minkowski distance of order `rho`
//! between the power-transformed values `x^q` and their mean, raised to the
//! power `o`. Mean and Minkowski pooling exist for ablations.
//!
//! Maps may contain negative values, so fractional powers go through
//! [`signed_pow`]. All reductions run left to right in input order, which
//! keeps scores bit-reproducible.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolingStrategy {
    Deviation,
    Mean,
    Minkowski,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolingConfig {
    pub strategy: PoolingStrategy,
    /// Order of the deviation (1 = mean absolute deviation, 2 = standard deviation).
    pub rho: f64,
    /// Power applied to every map value before pooling.
    pub q: f64,
    /// Power applied to the pooled deviation.
    pub o: f64,
}

impl Default for PoolingConfig {
    fn default() -> Self {
        Self { strategy: PoolingStrategy::Deviation, rho: 1.0, q: 0.25, o: 0.25 }
    }
}

impl PoolingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return Err(Error::DegenerateInput(format!("rho must be >= 1, got {}", self.rho)));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(Error::DegenerateInput(format!("q must be > 0, got {}", self.q)));
        }
        if !(self.o > 0.0 && self.o.is_finite()) {
            return Err(Error::DegenerateInput(format!("o must be > 0, got {}", self.o)));
        }
        Ok(())
    }

    /// Pools `values` with the configured strategy.
    pub fn pool(&self, values: &[f64]) -> Result<f64> {
        match self.strategy {
            PoolingStrategy::Deviation => deviation_pool(values, self),
            PoolingStrategy::Mean => {
                let powered: Vec<f64> = values.iter().map(|&x| signed_pow(x, self.q)).collect();
                mean_pool(&powered)
            }
            PoolingStrategy::Minkowski => minkowski_pool(values, self.q),
        }
    }
}

/// `x^q` extended to negative `x` as the real part of the principal complex
/// root, `|x|^q cos(q pi)`.
pub fn signed_pow(x: f64, q: f64) -> f64 {
    if x >= 0.0 {
        x.powf(q)
    } else {
        (-x).powf(q) * (q * PI).cos()
    }
}

/// `[ (1/N) sum |x_i^q - mean(x^q)|^rho ]^(o/rho)`. Zero iff all transformed
/// values are equal.
pub fn deviation_pool(values: &[f64], cfg: &PoolingConfig) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let powered: Vec<f64> = values.iter().map(|&x| signed_pow(x, cfg.q)).collect();
    let first = powered[0];
    if powered.iter().all(|&y| y == first) {
        return Ok(0.0);
    }
    let n = powered.len() as f64;
    let mean = powered.iter().sum::<f64>() / n;
    let spread = if cfg.rho == 1.0 {
        powered.iter().map(|y| (y - mean).abs()).sum::<f64>() / n
    } else {
        powered.iter().map(|y| (y - mean).abs().powf(cfg.rho)).sum::<f64>() / n
    };
    Ok(spread.powf(cfg.o / cfg.rho))
}

/// Arithmetic mean.
pub fn mean_pool(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// `(1/N) sum |x_i^p|`, i.e. deviation pooling about zero with `rho = o = 1`.
pub fn minkowski_pool(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(values.iter().map(|&x| signed_pow(x, p).abs()).sum::<f64>() / values.len() as f64)
}
