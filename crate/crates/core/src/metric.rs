//! The full scoring pipeline and the PSNR baseline.

use serde::Serialize;

use crate::colorspace::{to_lhm, ChannelTriplet};
use crate::error::Result;
use crate::gradient::prewitt_magnitude;
use crate::preprocess::{box_filter_downsample, downsample_factor};
use crate::raster::{validate_pair, Plane, RgbImage};
use crate::similarity::{
    combine, cs_hat, cs_two_factor, fused_luma, gs_hat_from_gradients, gs_map, ChromaVariant, CombineScheme,
    GradientVariant, MetricConfig,
};

/// Intermediate maps of one scored pair, at the downsampled resolution.
#[derive(Debug, Clone)]
pub struct SimilarityMaps {
    /// Conventional gradient similarity (uses `c1`).
    pub gs: Plane,
    /// Fused gradient similarity.
    pub gs_hat: Plane,
    /// Two-factor chroma similarity.
    pub cs: Plane,
    /// Joint chroma similarity.
    pub cs_hat: Plane,
    /// `alpha * gs_hat + (1 - alpha) * cs_hat`.
    pub gcs_hat: Plane,
    /// The map actually pooled under the active configuration.
    pub combined: Plane,
}

impl SimilarityMaps {
    /// Combined map for an arbitrary variant, reusing the stored feature maps.
    /// Only the variant switches and `alpha`/`gamma`/`beta` of `cfg` are
    /// honoured; `c1..c3` are baked into the stored maps.
    pub fn combine_for(&self, cfg: &MetricConfig) -> Result<Plane> {
        let gs = match cfg.gradient_variant {
            GradientVariant::Conventional => &self.gs,
            GradientVariant::Fused => &self.gs_hat,
        };
        let cs = match cfg.chroma_variant {
            ChromaVariant::TwoFactorCs => &self.cs,
            ChromaVariant::JointCsHat => &self.cs_hat,
        };
        combine(gs, cs, cfg)
    }

    /// `(file stem, map)` pairs for export.
    pub fn named(&self) -> [(&'static str, &Plane); 6] {
        [
            ("gs", &self.gs),
            ("gs_hat", &self.gs_hat),
            ("cs", &self.cs),
            ("cs_hat", &self.cs_hat),
            ("gcs_hat", &self.gcs_hat),
            ("combined", &self.combined),
        ]
    }
}

/// Result of scoring one pair. Larger values mean stronger distortion; an
/// undistorted pair scores exactly 0 under the default configuration.
#[derive(Debug, Clone)]
pub struct QualityScore {
    pub value: f64,
    pub config: MetricConfig,
    pub maps: Option<SimilarityMaps>,
}

/// Downsamples by the size-dependent factor, then converts to `(L, H, M)`.
pub fn prepare(img: &RgbImage) -> Result<ChannelTriplet> {
    let m = downsample_factor(img.height(), img.width());
    Ok(to_lhm(&box_filter_downsample(img, m)?))
}

/// Computes every feature map for a validated pair.
pub fn similarity_maps(reference: &RgbImage, distorted: &RgbImage, cfg: &MetricConfig) -> Result<SimilarityMaps> {
    validate_pair(reference, distorted)?;
    cfg.validate()?;
    let r = prepare(reference)?;
    let d = prepare(distorted)?;
    maps_from_channels(&r, &d, cfg)
}

fn maps_from_channels(r: &ChannelTriplet, d: &ChannelTriplet, cfg: &MetricConfig) -> Result<SimilarityMaps> {
    let gr = prewitt_magnitude(&r.luma);
    let gd = prewitt_magnitude(&d.luma);
    let gf = prewitt_magnitude(&fused_luma(&r.luma, &d.luma)?);
    let gs = gs_map(&gr, &gd, cfg.c1)?;
    let gs_hat = gs_hat_from_gradients(&gr, &gd, &gf, cfg.c1, cfg.c2)?;
    let cs = cs_two_factor(&r.h, &d.h, &r.m, &d.m, cfg.c3)?;
    let cs_hat = cs_hat(&r.h, &d.h, &r.m, &d.m, cfg.c3)?;
    let summation = MetricConfig { combine: CombineScheme::Summation, ..*cfg };
    let gcs_hat = combine(&gs_hat, &cs_hat, &summation)?;
    let mut maps = SimilarityMaps { gs, gs_hat, cs, cs_hat, combined: gcs_hat.clone(), gcs_hat };
    maps.combined = maps.combine_for(cfg)?;
    Ok(maps)
}

/// Scores a distorted image against its reference.
pub fn mdsi(reference: &RgbImage, distorted: &RgbImage, cfg: &MetricConfig) -> Result<QualityScore> {
    let mut score = mdsi_with_maps(reference, distorted, cfg)?;
    score.maps = None;
    Ok(score)
}

/// Like [`mdsi`] but keeps the intermediate maps.
pub fn mdsi_with_maps(reference: &RgbImage, distorted: &RgbImage, cfg: &MetricConfig) -> Result<QualityScore> {
    let maps = similarity_maps(reference, distorted, cfg)?;
    let value = cfg.pooling.pool(maps.combined.values())?;
    Ok(QualityScore { value, config: *cfg, maps: Some(maps) })
}

/// Peak signal-to-noise ratio over all RGB samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Psnr {
    Db(f64),
    /// Identical inputs.
    Perfect,
}

impl Psnr {
    pub fn db(self) -> f64 {
        match self {
            Psnr::Db(v) => v,
            Psnr::Perfect => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Psnr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Psnr::Db(v) => write!(f, "{v:.6}"),
            Psnr::Perfect => f.write_str("inf"),
        }
    }
}

pub fn psnr(reference: &RgbImage, distorted: &RgbImage) -> Result<Psnr> {
    validate_pair(reference, distorted)?;
    let sse: f64 = reference.data().iter().zip(distorted.data()).map(|(a, b)| (a - b) * (a - b)).sum();
    if sse == 0.0 {
        return Ok(Psnr::Perfect);
    }
    let mse = sse / reference.data().len() as f64;
    Ok(Psnr::Db(10.0 * (255.0 * 255.0 / mse).log10()))
}
