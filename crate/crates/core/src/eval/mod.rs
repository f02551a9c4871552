//! Dataset-level agreement between metric scores and subjective ratings.

mod correlation;
mod ftest;
mod logistic;
pub mod special;

use serde::Serialize;

pub use correlation::{kendall, mid_ranks, pearson, spearman};
pub use ftest::{f_test, Verdict};
pub use logistic::{fit_logistic, LogisticParams};

use crate::error::{Error, Result};

/// Correlation and accuracy figures for one set of (score, MOS) pairs.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub n: usize,
    /// Spearman rank-order correlation on raw scores.
    pub src: f64,
    /// Kendall tau-b on raw scores.
    pub krc: f64,
    /// Pearson correlation on raw scores, before the logistic mapping.
    pub lpcc: f64,
    /// Pearson correlation after the logistic mapping.
    pub pcc: f64,
    pub rmse: f64,
    pub params: LogisticParams,
    /// `f(score_i) - mos_i`
    pub residuals: Vec<f64>,
}

pub fn evaluate(scores: &[f64], mos: &[f64]) -> Result<EvalReport> {
    let src = spearman(scores, mos)?;
    let krc = kendall(scores, mos)?;
    let lpcc = pearson(scores, mos)?;
    let params = fit_logistic(scores, mos)?;
    let mapped: Vec<f64> = scores.iter().map(|&s| params.eval(s)).collect();
    let pcc = pearson(&mapped, mos)?;
    let residuals: Vec<f64> = mapped.iter().zip(mos).map(|(f, m)| f - m).collect();
    let rmse = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(EvalReport { n: scores.len(), src, krc, lpcc, pcc, rmse, params, residuals })
}

/// Averages of the four headline figures across datasets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub src: f64,
    pub krc: f64,
    pub pcc: f64,
    pub rmse: f64,
}

/// Plain mean across reports.
pub fn direct_average(reports: &[&EvalReport]) -> Result<Summary> {
    weighted(reports, |_| 1.0)
}

/// Mean weighted by dataset size.
pub fn size_weighted_average(reports: &[&EvalReport]) -> Result<Summary> {
    weighted(reports, |r| r.n as f64)
}

fn weighted(reports: &[&EvalReport], weight: impl Fn(&EvalReport) -> f64) -> Result<Summary> {
    if reports.is_empty() {
        return Err(Error::EmptyInput);
    }
    let total: f64 = reports.iter().map(|r| weight(r)).sum();
    let avg = |f: fn(&EvalReport) -> f64| reports.iter().map(|r| weight(r) * f(r)).sum::<f64>() / total;
    Ok(Summary { src: avg(|r| r.src), krc: avg(|r| r.krc), pcc: avg(|r| r.pcc), rmse: avg(|r| r.rmse) })
}

/// `avg`, `min` and population `std` of a list of per-group correlations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub avg: f64,
    pub min: f64,
    pub std: f64,
}

pub fn spread(values: &[f64]) -> Result<Spread> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len() as f64;
    let avg = values.iter().sum::<f64>() / n;
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let std = (values.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / n).sqrt();
    Ok(Spread { avg, min, std })
}
