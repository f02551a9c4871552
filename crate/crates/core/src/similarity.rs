//! Per-pixel similarity maps and their combination.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gradient::prewitt_magnitude;
use crate::pooling::PoolingConfig;
use crate::raster::Plane;

/// Which gradient similarity feeds the combined map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientVariant {
    /// Plain reference-vs-distorted gradient similarity.
    Conventional,
    /// Gradient similarity corrected against the averaged (fused) luminance.
    Fused,
}

/// Which chromaticity similarity feeds the combined map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChromaVariant {
    /// Product of one similarity term per chroma channel.
    TwoFactorCs,
    /// Single term over both chroma channels jointly.
    JointCsHat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineScheme {
    /// `alpha * gs + (1 - alpha) * cs`
    Summation,
    /// `max(gs, 0)^gamma * max(cs, 0)^beta`
    Multiplication,
}

/// Every tunable constant and switch of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub gradient_variant: GradientVariant,
    pub chroma_variant: ChromaVariant,
    pub combine: CombineScheme,
    pub gamma: f64,
    pub beta: f64,
    pub pooling: PoolingConfig,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            alpha: 0.6,
            c1: 140.0,
            c2: 55.0,
            c3: 550.0,
            gradient_variant: GradientVariant::Fused,
            chroma_variant: ChromaVariant::JointCsHat,
            combine: CombineScheme::Summation,
            gamma: 0.2,
            beta: 0.1,
            pooling: PoolingConfig::default(),
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::DegenerateInput(msg));
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha must lie in [0, 1], got {}", self.alpha));
        }
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("c3", self.c3)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.gamma.is_finite() && self.beta.is_finite()) {
            return bad("gamma and beta must be finite".into());
        }
        self.pooling.validate()
    }
}

#[inline]
fn ratio(a: f64, b: f64, c: f64) -> f64 {
    (2.0 * a * b + c) / (a * a + b * b + c)
}

/// Gradient similarity `(2 g_r g_d + c) / (g_r^2 + g_d^2 + c)`.
pub fn gs_map(gr: &Plane, gd: &Plane, c: f64) -> Result<Plane> {
    gr.zip_with(gd, |a, b| ratio(a, b, c))
}

/// Pointwise average of two luminance planes.
pub fn fused_luma(lr: &Plane, ld: &Plane) -> Result<Plane> {
    lr.zip_with(ld, |a, b| 0.5 * (a + b))
}

/// Fused gradient similarity from precomputed gradient magnitudes of the
/// reference, distorted and fused luminance.
///
/// `GS(g_r, g_d; c1) + GS(g_d, g_f; c2) - GS(g_r, g_f; c2)`
pub fn gs_hat_from_gradients(gr: &Plane, gd: &Plane, gf: &Plane, c1: f64, c2: f64) -> Result<Plane> {
    gr.check_same(gd)?;
    gr.check_same(gf)?;
    let values = gr
        .values()
        .iter()
        .zip(gd.values())
        .zip(gf.values())
        .map(|((&r, &d), &f)| ratio(r, d, c1) + (ratio(d, f, c2) - ratio(r, f, c2)))
        .collect();
    Plane::new(gr.width(), gr.height(), values)
}

/// Fused gradient similarity of two luminance planes. Values fall in `(-1, 2)`
/// and equal 1 exactly when the planes are identical.
///
/// The fused gradient is taken of the averaged luminance, which in general is
/// not the average of the two gradient magnitudes.
pub fn gs_hat_map(lr: &Plane, ld: &Plane, c1: f64, c2: f64) -> Result<Plane> {
    let fused = fused_luma(lr, ld)?;
    gs_hat_from_gradients(&prewitt_magnitude(lr), &prewitt_magnitude(ld), &prewitt_magnitude(&fused), c1, c2)
}

fn check4(a: &Plane, b: &Plane, c: &Plane, d: &Plane) -> Result<()> {
    a.check_same(b)?;
    a.check_same(c)?;
    a.check_same(d)
}

/// Product of per-channel chroma similarities.
pub fn cs_two_factor(hr: &Plane, hd: &Plane, mr: &Plane, md: &Plane, c3: f64) -> Result<Plane> {
    check4(hr, hd, mr, md)?;
    let values = (0..hr.values().len())
        .map(|i| {
            ratio(hr.values()[i], hd.values()[i], c3) * ratio(mr.values()[i], md.values()[i], c3)
        })
        .collect();
    Plane::new(hr.width(), hr.height(), values)
}

/// Joint chroma similarity over both channels at once:
/// `(2 (h_r h_d + m_r m_d) + c) / (h_r^2 + h_d^2 + m_r^2 + m_d^2 + c)`.
///
/// Not clamped; opposite chroma drives it below zero.
pub fn cs_hat(hr: &Plane, hd: &Plane, mr: &Plane, md: &Plane, c3: f64) -> Result<Plane> {
    check4(hr, hd, mr, md)?;
    let (w, h) = hr.dims();
    let (hr, hd, mr, md) = (hr.values(), hd.values(), mr.values(), md.values());
    let values = (0..hr.len())
        .map(|i| {
            // Grouped per image so identical inputs give exactly 1.
            let energy_r = hr[i] * hr[i] + mr[i] * mr[i];
            let energy_d = hd[i] * hd[i] + md[i] * md[i];
            (2.0 * (hr[i] * hd[i] + mr[i] * md[i]) + c3) / (energy_r + energy_d + c3)
        })
        .collect();
    Plane::new(w, h, values)
}

/// Merges a gradient map and a chroma map according to `cfg.combine`.
///
/// The multiplication scheme clamps both bases at 0 before the fractional
/// exponents.
pub fn combine(gs: &Plane, cs: &Plane, cfg: &MetricConfig) -> Result<Plane> {
    match cfg.combine {
        CombineScheme::Summation => {
            let a = cfg.alpha;
            gs.zip_with(cs, |g, c| a * g + (1.0 - a) * c)
        }
        CombineScheme::Multiplication => {
            let (gamma, beta) = (cfg.gamma, cfg.beta);
            gs.zip_with(cs, |g, c| g.max(0.0).powf(gamma) * c.max(0.0).powf(beta))
        }
    }
}
