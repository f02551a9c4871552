//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::load_config;
use crate::error::{Error, Result};
use crate::eval::{direct_average, size_weighted_average, Summary};
use crate::harness::{ablate, evaluate_dataset, standard_sweep, AblationReport, DatasetEvaluation};
use crate::manifest::load_manifest;
use crate::metric::{mdsi_with_maps, psnr};
use crate::raster::load_image;
use crate::similarity::MetricConfig;

#[derive(Debug, Parser)]
#[command(name = "mdsi", version, about = "Mean deviation similarity index: full-reference image quality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one distorted image against its reference.
    Score(ScoreArgs),
    /// Score manifests and report SRC/KRC/PCC/RMSE against MOS.
    Evaluate(EvaluateArgs),
    /// Sweep pooling, combination, chroma and gradient variants over a manifest.
    Ablate(AblateArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Flat `key = value` file overriding the default metric constants.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    reference: PathBuf,
    distorted: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Write the similarity maps as CSV grids into this directory.
    #[arg(long, value_name = "DIR")]
    dump_maps: Option<PathBuf>,
    /// Also report PSNR.
    #[arg(long)]
    baseline: bool,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(required = true)]
    manifests: Vec<PathBuf>,
    #[command(flatten)]
    common: Common,
    /// Add per-distortion reports with avg/min/std summaries.
    #[arg(long)]
    per_distortion: bool,
    /// Add the dataset-size-weighted average across manifests.
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
struct AblateArgs {
    manifest: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Pairwise F-test matrix on logistic-fit residuals.
    #[arg(long)]
    ftest: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Score(a) => score(a, out),
        Command::Evaluate(a) => evaluate_cmd(a, out, err),
        Command::Ablate(a) => ablate_cmd(a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn config(common: &Common) -> Result<MetricConfig> {
    match &common.config {
        Some(p) => load_config(p),
        None => Ok(MetricConfig::default()),
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::Io { path: PathBuf::from("<stdout>"), source: e }
}

fn score(a: ScoreArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = config(&a.common)?;
    let reference = load_image(&a.reference)?;
    let distorted = load_image(&a.distorted)?;
    let result = mdsi_with_maps(&reference, &distorted, &cfg)?;
    let baseline = if a.baseline { Some(psnr(&reference, &distorted)?) } else { None };

    if let (Some(dir), Some(maps)) = (&a.dump_maps, &result.maps) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        for (name, plane) in maps.named() {
            let path = dir.join(format!("{name}.csv"));
            std::fs::write(&path, plane.to_csv()).map_err(io_err(&path))?;
        }
    }

    if a.common.json {
        let mut doc = json!({
            "score": result.value,
            "config": cfg,
            "dims": { "width": reference.width(), "height": reference.height() },
        });
        if let Some(p) = baseline {
            doc["psnr"] = match p.db() {
                v if v.is_finite() => json!(v),
                _ => json!("inf"),
            };
        }
        writeln!(out, "{doc}").map_err(stdout_err)?;
    } else {
        writeln!(out, "{:.6}", result.value).map_err(stdout_err)?;
        if let Some(p) = baseline {
            writeln!(out, "psnr {p}").map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn warn_failures(err: &mut dyn Write, name: &str, total: usize, failures: &[crate::harness::Failure]) {
    if failures.is_empty() {
        return;
    }
    let _ = writeln!(err, "warning: {} of {total} entries in {name} failed and were excluded", failures.len());
    for f in failures {
        let _ = writeln!(err, "  entry {}: {}", f.index, f.message);
    }
}

fn evaluate_cmd(a: EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = config(&a.common)?;
    let mut evals: Vec<DatasetEvaluation> = Vec::new();
    for path in &a.manifests {
        let ds = load_manifest(path)?;
        let ev = evaluate_dataset(&ds, &cfg, a.threads, a.per_distortion)?;
        warn_failures(err, &ev.name, ev.total, &ev.failures);
        evals.push(ev);
    }
    let reports: Vec<_> = evals.iter().map(|e| &e.report).collect();
    let direct = if evals.len() > 1 { Some(direct_average(&reports)?) } else { None };
    let weighted = if a.weighted { Some(size_weighted_average(&reports)?) } else { None };

    if a.common.json {
        let doc = json!({
            "config": cfg,
            "datasets": evals,
            "direct_average": direct,
            "weighted_average": weighted,
        });
        writeln!(out, "{doc}").map_err(stdout_err)?;
        return Ok(());
    }

    let mut text = String::new();
    text.push_str(&format!(
        "{:<24} {:>6} {:>7} {:>8} {:>8} {:>8} {:>8} {:>10}\n",
        "dataset", "n", "failed", "SRC", "KRC", "PCC", "LPCC", "RMSE"
    ));
    for e in &evals {
        let r = &e.report;
        text.push_str(&format!(
            "{:<24} {:>6} {:>7} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>10.4}\n",
            e.name,
            r.n,
            e.failures.len(),
            r.src,
            r.krc,
            r.pcc,
            r.lpcc,
            r.rmse
        ));
    }
    let summary_row = |name: &str, s: &Summary| {
        format!(
            "{:<24} {:>6} {:>7} {:>8.4} {:>8.4} {:>8.4} {:>8} {:>10.4}\n",
            name, "", "", s.src, s.krc, s.pcc, "", s.rmse
        )
    };
    if let Some(s) = &direct {
        text.push_str(&summary_row("direct average", s));
    }
    if let Some(s) = &weighted {
        text.push_str(&summary_row("weighted average", s));
    }
    for e in &evals {
        if let Some(b) = &e.per_distortion {
            text.push_str(&format!("\n{} by distortion\n", e.name));
            text.push_str(&format!("{:<24} {:>6} {:>8} {:>8} {:>8} {:>10}\n", "distortion", "n", "SRC", "KRC", "PCC", "RMSE"));
            for g in &b.groups {
                text.push_str(&format!(
                    "{:<24} {:>6} {:>8.4} {:>8.4} {:>8.4} {:>10.4}\n",
                    g.label, g.n, g.src, g.krc, g.pcc, g.rmse
                ));
            }
            text.push_str(&format!("{:<24} {:>8} {:>8} {:>8}\n", "", "avg", "min", "std"));
            text.push_str(&format!("{:<24} {:>8.4} {:>8.4} {:>8.4}\n", "SRC", b.src.avg, b.src.min, b.src.std));
            text.push_str(&format!("{:<24} {:>8.4} {:>8.4} {:>8.4}\n", "PCC", b.pcc.avg, b.pcc.min, b.pcc.std));
            if !b.skipped.is_empty() {
                text.push_str(&format!("skipped (too few or constant): {}\n", b.skipped.join(", ")));
            }
        }
    }
    out.write_all(text.as_bytes()).map_err(stdout_err)
}

fn ablate_cmd(a: AblateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = config(&a.common)?;
    let ds = load_manifest(&a.manifest)?;
    let variants = standard_sweep(&cfg);
    let report = ablate(&ds, &cfg, &variants, a.threads, a.ftest)?;
    warn_failures(err, &report.name, report.total, &report.failures);

    if a.common.json {
        writeln!(out, "{}", json!({ "config": cfg, "ablation": report })).map_err(stdout_err)?;
        return Ok(());
    }
    out.write_all(render_ablation(&report).as_bytes()).map_err(stdout_err)
}

fn fmt_src(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"))
}

fn render_ablation(report: &AblationReport) -> String {
    let mut text = format!("{}: SRC per variant ({} entries)\n", report.name, report.total - report.failures.len());
    let pooling: Vec<_> = report.cells.iter().filter(|c| c.group == "pooling").collect();
    if !pooling.is_empty() {
        text.push_str(&format!("\n{:<10} {:>8} {:>8} {:>8}\n", "pooling", "Mean", "MAD", "SD"));
        for row in pooling.chunks(3) {
            let q = row[0].label.split_once(' ').map_or("", |(_, q)| q);
            text.push_str(&format!("{:<10}", q));
            for c in row {
                text.push_str(&format!(" {:>8}", fmt_src(c.src)));
            }
            text.push('\n');
        }
    }
    for group in ["combine", "chroma", "gradient"] {
        let cells: Vec<_> = report.cells.iter().filter(|c| c.group == group).collect();
        if cells.is_empty() {
            continue;
        }
        text.push_str(&format!("\n{group}\n"));
        for c in cells {
            text.push_str(&format!("  {:<16} {:>8}\n", c.label, fmt_src(c.src)));
        }
    }
    if let Some(m) = &report.ftest {
        text.push_str("\nF-test (+1 row significantly better than column, -1 worse, 0 neither)\n");
        for (i, c) in report.cells.iter().enumerate() {
            text.push_str(&format!("{:>2} {:<10} {}\n", i + 1, c.group, c.label));
        }
        text.push_str("   ");
        for j in 0..m.len() {
            text.push_str(&format!("{:>3}", j + 1));
        }
        text.push('\n');
        for (i, row) in m.iter().enumerate() {
            text.push_str(&format!("{:>2} ", i + 1));
            for v in row {
                text.push_str(&match v {
                    Some(1) => " +1".to_string(),
                    Some(v) => format!("{v:>3}"),
                    None => "  .".to_string(),
                });
            }
            text.push('\n');
        }
    }
    text
}
