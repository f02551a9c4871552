//! Batch scoring, dataset evaluation and variant sweeps over manifests.
//!
//! Entries are scored in parallel on a dedicated pool and collected in
//! manifest order, so results do not depend on the thread count. A failing
//! entry is excluded and reported; more than 10% failures aborts the run.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::label;
use crate::error::{Error, Result};
use crate::eval::{evaluate, f_test, spearman, spread, EvalReport, Spread};
use crate::manifest::{group_by_distortion, Dataset};
use crate::metric::{mdsi, similarity_maps};
use crate::pooling::{PoolingConfig, PoolingStrategy};
use crate::raster::load_image;
use crate::similarity::{ChromaVariant, CombineScheme, GradientVariant, MetricConfig};

/// One entry that could not be scored.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub index: usize,
    pub message: String,
}

/// Per-entry scores in manifest order; `None` marks a failed entry.
#[derive(Debug, Clone)]
pub struct BatchScores {
    pub scores: Vec<Option<f64>>,
    pub failures: Vec<Failure>,
}

impl BatchScores {
    /// Scores and MOS of the successfully scored entries.
    pub fn paired(&self, ds: &Dataset) -> (Vec<f64>, Vec<f64>) {
        self.scores
            .iter()
            .zip(&ds.entries)
            .filter_map(|(s, e)| s.map(|s| (s, e.mos)))
            .unzip()
    }
}

fn run_parallel<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::DegenerateInput(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(job))
}

fn check_failures(failed: usize, total: usize) -> Result<()> {
    if failed * 10 > total {
        return Err(Error::TooManyFailures { failed, total });
    }
    Ok(())
}

/// Scores every entry of `ds`.
pub fn score_dataset(ds: &Dataset, cfg: &MetricConfig, threads: usize) -> Result<BatchScores> {
    cfg.validate()?;
    let results: Vec<Result<f64>> = run_parallel(threads, || {
        ds.entries
            .par_iter()
            .map(|e| {
                let r = load_image(&e.ref_path)?;
                let d = load_image(&e.dist_path)?;
                Ok(mdsi(&r, &d, cfg)?.value)
            })
            .collect()
    })?;
    let mut failures = Vec::new();
    let scores = results
        .into_iter()
        .enumerate()
        .map(|(index, r)| match r {
            Ok(v) => Some(v),
            Err(e) => {
                failures.push(Failure { index, message: e.to_string() });
                None
            }
        })
        .collect();
    Ok(BatchScores { scores, failures })
}

/// Per-group figures and their `avg / min / std` summary.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionBreakdown {
    pub groups: Vec<GroupResult>,
    pub src: Spread,
    pub pcc: Spread,
    /// Groups too small or too uniform to evaluate.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupResult {
    pub label: String,
    pub n: usize,
    pub src: f64,
    pub krc: f64,
    pub pcc: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetEvaluation {
    pub name: String,
    pub total: usize,
    pub failures: Vec<Failure>,
    pub report: EvalReport,
    pub per_distortion: Option<DistortionBreakdown>,
}

/// Scores a dataset and evaluates scores against MOS.
pub fn evaluate_dataset(
    ds: &Dataset,
    cfg: &MetricConfig,
    threads: usize,
    per_distortion: bool,
) -> Result<DatasetEvaluation> {
    let batch = score_dataset(ds, cfg, threads)?;
    check_failures(batch.failures.len(), ds.len())?;
    let (scores, mos) = batch.paired(ds);
    let report = evaluate(&scores, &mos)?;

    let per_distortion = if per_distortion {
        let scored = Dataset {
            name: ds.name.clone(),
            entries: ds
                .entries
                .iter()
                .zip(&batch.scores)
                .filter(|(_, s)| s.is_some())
                .map(|(e, _)| e.clone())
                .collect(),
        };
        let score_of: Vec<f64> = scores.clone();
        let groups = group_by_distortion(&scored)?;
        let mut results = Vec::new();
        let mut skipped = Vec::new();
        for (label, group) in &groups {
            let idx: Vec<usize> = scored
                .entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.distortion.as_deref() == Some(label.as_str()))
                .map(|(i, _)| i)
                .collect();
            let s: Vec<f64> = idx.iter().map(|&i| score_of[i]).collect();
            match evaluate(&s, &group.mos()) {
                Ok(r) => results.push(GroupResult {
                    label: label.clone(),
                    n: r.n,
                    src: r.src,
                    krc: r.krc,
                    pcc: r.pcc,
                    rmse: r.rmse,
                }),
                Err(_) => skipped.push(label.clone()),
            }
        }
        let src = spread(&results.iter().map(|g| g.src).collect::<Vec<_>>())?;
        let pcc = spread(&results.iter().map(|g| g.pcc).collect::<Vec<_>>())?;
        Some(DistortionBreakdown { groups: results, src, pcc, skipped })
    } else {
        None
    };

    Ok(DatasetEvaluation { name: ds.name.clone(), total: ds.len(), failures: batch.failures, report, per_distortion })
}

/// One configuration in a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct Variant {
    /// Which comparison the variant belongs to: `pooling`, `combine`, `chroma` or `gradient`.
    pub group: &'static str,
    pub label: String,
    pub config: MetricConfig,
}

fn q_label(q: f64) -> String {
    if q < 1.0 {
        format!("1/{}", (1.0 / q).round())
    } else {
        format!("{q}")
    }
}

/// Pooling strategy x `q` grid, summation vs multiplication, two-factor vs
/// joint chroma similarity, and conventional vs fused gradient similarity.
/// Constants come from `base`.
pub fn standard_sweep(base: &MetricConfig) -> Vec<Variant> {
    let mut out = Vec::new();
    for q in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let pools = [
            ("mean", PoolingConfig { strategy: PoolingStrategy::Mean, q, ..base.pooling }),
            ("mad", PoolingConfig { strategy: PoolingStrategy::Deviation, rho: 1.0, q, ..base.pooling }),
            ("sd", PoolingConfig { strategy: PoolingStrategy::Deviation, rho: 2.0, q, ..base.pooling }),
        ];
        for (name, pooling) in pools {
            out.push(Variant { group: "pooling", label: format!("{name} q={}", q_label(q)), config: MetricConfig { pooling, ..*base } });
        }
    }
    for combine in [CombineScheme::Summation, CombineScheme::Multiplication] {
        out.push(Variant { group: "combine", label: label(combine), config: MetricConfig { combine, ..*base } });
    }
    for chroma_variant in [ChromaVariant::JointCsHat, ChromaVariant::TwoFactorCs] {
        out.push(Variant { group: "chroma", label: label(chroma_variant), config: MetricConfig { chroma_variant, ..*base } });
    }
    for gradient_variant in [GradientVariant::Fused, GradientVariant::Conventional] {
        out.push(Variant { group: "gradient", label: label(gradient_variant), config: MetricConfig { gradient_variant, ..*base } });
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationCell {
    pub group: &'static str,
    pub label: String,
    pub src: Option<f64>,
    /// Full evaluation, when the variant's scores allow a logistic fit.
    #[serde(skip)]
    pub report: Option<EvalReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationReport {
    pub name: String,
    pub total: usize,
    pub failures: Vec<Failure>,
    pub cells: Vec<AblationCell>,
    /// `ftest[i][j]`: +1 if cell `i` is significantly better than cell `j`,
    /// -1 if worse, 0 if indistinguishable. `None` entries could not be tested.
    pub ftest: Option<Vec<Vec<Option<i8>>>>,
}

/// Scores every entry once per variant and evaluates each variant.
///
/// Feature maps are computed once per entry with `base`'s constants and
/// reused across variants.
pub fn ablate(ds: &Dataset, base: &MetricConfig, variants: &[Variant], threads: usize, with_ftest: bool) -> Result<AblationReport> {
    base.validate()?;
    for v in variants {
        v.config.validate()?;
    }
    let per_entry: Vec<Result<Vec<f64>>> = run_parallel(threads, || {
        ds.entries
            .par_iter()
            .map(|e| {
                let maps = similarity_maps(&load_image(&e.ref_path)?, &load_image(&e.dist_path)?, base)?;
                variants
                    .iter()
                    .map(|v| v.config.pooling.pool(maps.combine_for(&v.config)?.values()))
                    .collect()
            })
            .collect()
    })?;

    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut mos = Vec::new();
    for (index, (r, e)) in per_entry.into_iter().zip(&ds.entries).enumerate() {
        match r {
            Ok(row) => {
                rows.push(row);
                mos.push(e.mos);
            }
            Err(err) => failures.push(Failure { index, message: err.to_string() }),
        }
    }
    check_failures(failures.len(), ds.len())?;

    let cells: Vec<AblationCell> = variants
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let scores: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            let src = spearman(&scores, &mos);
            let report = evaluate(&scores, &mos).ok();
            AblationCell {
                group: v.group,
                label: v.label.clone(),
                src: src.as_ref().ok().copied(),
                error: src.err().map(|e| e.to_string()),
                report,
            }
        })
        .collect();

    let ftest = with_ftest.then(|| {
        cells
            .iter()
            .map(|a| {
                cells
                    .iter()
                    .map(|b| match (&a.report, &b.report) {
                        (Some(ra), Some(rb)) => f_test(&ra.residuals, &rb.residuals, 0.05).ok().map(|v| v.sign()),
                        _ => None,
                    })
                    .collect()
            })
            .collect()
    });

    Ok(AblationReport { name: ds.name.clone(), total: ds.len(), failures, cells, ftest })
}
