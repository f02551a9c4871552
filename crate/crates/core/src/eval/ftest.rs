//! Variance-ratio significance test on regression residuals.

use serde::{Deserialize, Serialize};

use super::special::f_quantile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The first residual set has significantly smaller variance.
    ABetter,
    BBetter,
    Indistinguishable,
}

impl Verdict {
    /// `+1` if A is significantly better, `-1` if worse, `0` otherwise.
    pub fn sign(self) -> i8 {
        match self {
            Verdict::ABetter => 1,
            Verdict::BBetter => -1,
            Verdict::Indistinguishable => 0,
        }
    }
}

fn sample_variance(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Two-tailed F-test of `var(a) / var(b)` with `(n_a - 1, n_b - 1)` degrees
/// of freedom at the given significance level (0.05 for 95%).
pub fn f_test(residuals_a: &[f64], residuals_b: &[f64], significance: f64) -> Result<Verdict> {
    if residuals_a.is_empty() || residuals_b.is_empty() {
        return Err(Error::EmptyInput);
    }
    if residuals_a.len() < 2 || residuals_b.len() < 2 {
        return Err(Error::DegenerateInput("F-test needs at least 2 residuals per side".into()));
    }
    if !(significance > 0.0 && significance < 1.0) {
        return Err(Error::DegenerateInput(format!("significance must lie in (0, 1), got {significance}")));
    }
    let va = sample_variance(residuals_a);
    let vb = sample_variance(residuals_b);
    if !(va.is_finite() && vb.is_finite()) {
        return Err(Error::DegenerateInput("non-finite residuals".into()));
    }
    match (va == 0.0, vb == 0.0) {
        (true, true) => return Err(Error::DegenerateInput("both residual sets have zero variance".into())),
        (true, false) => return Ok(Verdict::ABetter),
        (false, true) => return Ok(Verdict::BBetter),
        _ => {}
    }
    let ratio = va / vb;
    let (d1, d2) = ((residuals_a.len() - 1) as f64, (residuals_b.len() - 1) as f64);
    let lower = f_quantile(significance / 2.0, d1, d2);
    let upper = f_quantile(1.0 - significance / 2.0, d1, d2);
    Ok(if ratio < lower {
        Verdict::ABetter
    } else if ratio > upper {
        Verdict::BBetter
    } else {
        Verdict::Indistinguishable
    })
}
