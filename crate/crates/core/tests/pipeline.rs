mod support;

use mdsi::eval::{kendall, spearman};
use mdsi::harness::{evaluate_dataset, score_dataset};
use mdsi::manifest::load_manifest;
use mdsi::{mdsi, MetricConfig};
use support::oracle::{self, OracleConfig};
use support::*;

fn library(r: &mdsi::RgbImage, d: &mdsi::RgbImage) -> f64 {
    mdsi(r, d, &MetricConfig::default()).unwrap().value
}

fn oracle_score(r: &mdsi::RgbImage, d: &mdsi::RgbImage) -> f64 {
    oracle::mdsi(&to_nested(r), &to_nested(d), &OracleConfig::default())
}

#[test]
fn matches_oracle_with_downsampling() {
    // factors 2 and 3, odd and even sizes
    for (seed, (w, h)) in [(1u64, (520usize, 530usize)), (2, (771, 700))] {
        let r = seed_image(seed, w, h);
        let d = add_noise(&gaussian_blur(&r, 1.0), 8.0, seed);
        let (a, b) = (library(&r, &d), oracle_score(&r, &d));
        assert!((a - b).abs() <= 1e-10, "{w}x{h}: {a} vs {b}");
    }
}

#[test]
fn matches_oracle_on_small_random_pairs() {
    let mut g = rng(7);
    for _ in 0..10 {
        let r = random_image(13, 9, &mut g);
        let d = random_image(13, 9, &mut g);
        let (a, b) = (library(&r, &d), oracle_score(&r, &d));
        assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
    }
}

#[test]
fn blur_is_monotone() {
    for seed in 0..3 {
        let r = seed_image(100 + seed, 64, 64);
        let scores: Vec<f64> = BLUR_SIGMAS.iter().map(|&s| library(&r, &gaussian_blur(&r, s))).collect();
        assert!(scores.windows(2).all(|w| w[0] < w[1]), "{scores:?}");
    }
}

#[test]
fn noise_is_monotone() {
    let r = seed_image(5, 64, 64);
    let scores: Vec<f64> = NOISE_AMPLITUDES.iter().map(|&a| library(&r, &add_noise(&r, a, 9))).collect();
    assert!(scores.windows(2).all(|w| w[0] < w[1]), "{scores:?}");
}

#[test]
fn thread_count_does_not_change_scores() {
    let dir = tempfile::tempdir().unwrap();
    let (blur, _) = ladder_manifests(dir.path(), &[1, 2], 48, 40);
    let ds = load_manifest(&blur).unwrap();
    let one = score_dataset(&ds, &MetricConfig::default(), 1).unwrap();
    let four = score_dataset(&ds, &MetricConfig::default(), 4).unwrap();
    assert_eq!(one.scores, four.scores);
    assert!(one.failures.is_empty());
}

#[test]
fn broken_entries_are_excluded_up_to_the_limit() {
    let dir = tempfile::tempdir().unwrap();
    let (blur, _) = ladder_manifests(dir.path(), &[1, 2, 3], 32, 32);
    let mut text = std::fs::read_to_string(&blur).unwrap();
    // 1 of 13 broken: tolerated
    text.push_str("missing.png,missing.png,-5.0,blur,5\n");
    std::fs::write(&blur, &text).unwrap();
    let ev = evaluate_dataset(&load_manifest(&blur).unwrap(), &MetricConfig::default(), 2, true).unwrap();
    assert_eq!(ev.failures.len(), 1);
    assert_eq!(ev.failures[0].index, 12);
    assert_eq!(ev.report.n, 12);

    // 3 of 15 broken: too many
    text.push_str("missing.png,missing.png,-5.0,blur,5\nmissing.png,missing.png,-5.0,blur,5\n");
    std::fs::write(&blur, &text).unwrap();
    let err = evaluate_dataset(&load_manifest(&blur).unwrap(), &MetricConfig::default(), 2, false).unwrap_err();
    assert!(matches!(err, mdsi::Error::TooManyFailures { failed: 3, total: 15 }), "{err}");
}

/// MOS is `-level` and shared across images, so it carries ties. A perfect
/// ranking then reaches the tie-limited Spearman value rather than 1, with
/// no discordant pairs.
#[test]
fn ladder_evaluation_ranks_perfectly() {
    let dir = tempfile::tempdir().unwrap();
    let (blur, noise) = ladder_manifests(dir.path(), &[11, 12, 13], 128, 128);
    for m in [blur, noise] {
        let ds = load_manifest(&m).unwrap();
        let ev = evaluate_dataset(&ds, &MetricConfig::default(), 2, true).unwrap();
        let mos = ds.mos();
        let ideal: Vec<f64> = mos.iter().enumerate().map(|(i, m)| -m * 1e3 + i as f64).collect();
        assert_eq!(ev.report.src, spearman(&ideal, &mos).unwrap(), "{}", m.display());
        assert_eq!(ev.report.krc, kendall(&ideal, &mos).unwrap(), "{}", m.display());
    }
}
