//! Mean deviation similarity index (MDSI): a full-reference image quality
//! metric built from gradient similarity, joint chromaticity similarity and
//! deviation pooling, plus the statistics used to validate quality metrics
//! against subjective scores.
//!
//! ```no_run
//! use mdsi::{load_image, mdsi, MetricConfig};
//!
//! let reference = load_image("ref.png")?;
//! let distorted = load_image("dist.png")?;
//! let score = mdsi(&reference, &distorted, &MetricConfig::default())?;
//! println!("{:.6}", score.value);
//! # Ok::<(), mdsi::Error>(())
//! ```

pub mod cli;
pub mod colorspace;
pub mod config;
pub mod error;
pub mod eval;
pub mod gradient;
pub mod harness;
pub mod manifest;
pub mod metric;
pub mod pooling;
pub mod preprocess;
pub mod raster;
pub mod similarity;

pub use colorspace::{to_lhm, ChannelTriplet};
pub use error::{Error, Result};
pub use metric::{mdsi, mdsi_with_maps, psnr, Psnr, QualityScore, SimilarityMaps};
pub use pooling::{PoolingConfig, PoolingStrategy};
pub use raster::{load_image, validate_pair, Plane, RgbImage};
pub use similarity::{ChromaVariant, CombineScheme, GradientVariant, MetricConfig};
