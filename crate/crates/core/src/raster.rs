//! Image and plane containers plus file decoding.
//!
//! Samples are kept as `f64` on the 0..=255 scale. No normalization to the
//! unit interval happens anywhere: the metric constants assume 8-bit range.

use std::path::Path;

use image::DynamicImage;

use crate::error::{Error, Result};

/// Interleaved RGB image with real-valued samples in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl RgbImage {
    /// Builds an image from interleaved `R, G, B` samples in row-major order.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!("image must be non-empty, got {width}x{height}")));
        }
        if data.len() != width * height * 3 {
            return Err(Error::Dimension(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height * 3,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=255.0).contains(*v)) {
            return Err(Error::Dimension(format!("sample {bad} outside [0, 255]")));
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel. Samples are clamped to `[0, 255]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [f64; 3]) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend(f(x, y).iter().map(|v| v.clamp(0.0, 255.0)));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `(width, height)`
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// Splits into three single-channel planes.
    pub fn channels(&self) -> [Plane; 3] {
        let n = self.width * self.height;
        let mut out = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
        for px in self.data.chunks_exact(3) {
            out[0].push(px[0]);
            out[1].push(px[1]);
            out[2].push(px[2]);
        }
        out.map(|values| Plane { width: self.width, height: self.height, values })
    }

    /// Reassembles an image from three planes of equal size.
    pub fn from_channels(r: &Plane, g: &Plane, b: &Plane) -> Result<Self> {
        r.check_same(g)?;
        r.check_same(b)?;
        let data = r
            .values
            .iter()
            .zip(&g.values)
            .zip(&b.values)
            .flat_map(|((&r, &g), &b)| [r, g, b])
            .collect();
        Self::new(r.width, r.height, data)
    }
}

/// Single-channel grid of real values, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!("plane must be non-empty, got {width}x{height}")));
        }
        if values.len() != width * height {
            return Err(Error::Dimension(format!(
                "expected {} values for {width}x{height}, got {}",
                width * height,
                values.len()
            )));
        }
        Ok(Self { width, height, values })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self::new(width, height, values)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `(width, height)`
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn transpose(&self) -> Plane {
        let mut values = Vec::with_capacity(self.values.len());
        for x in 0..self.width {
            for y in 0..self.height {
                values.push(self.get(x, y));
            }
        }
        Plane { width: self.height, height: self.width, values }
    }

    /// Pointwise map into a new plane of the same shape.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane { width: self.width, height: self.height, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise binary operation. Fails when shapes differ.
    pub fn zip_with(&self, other: &Plane, f: impl Fn(f64, f64) -> f64) -> Result<Plane> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Plane { width: self.width, height: self.height, values })
    }

    pub(crate) fn check_same(&self, other: &Plane) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch { reference: self.dims(), distorted: other.dims() });
        }
        Ok(())
    }

    /// Row-major CSV rendering with full `f64` round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 20);
        for row in self.values.chunks_exact(self.width) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Reads a PNG, JPEG or BMP file.
///
/// 8-bit channels map directly to reals; 16-bit channels are rescaled by
/// `255 / 65535`. Grayscale inputs are replicated to three channels and any
/// alpha channel is dropped.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let decoded = image::load_from_memory(&bytes)
        .map_err(|e| Error::Decode { path: path.to_path_buf(), message: e.to_string() })?;
    Ok(from_dynamic(&decoded))
}

fn from_dynamic(img: &DynamicImage) -> RgbImage {
    let (width, height) = (img.width() as usize, img.height() as usize);
    let data: Vec<f64> = match img {
        DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgb8(_)
        | DynamicImage::ImageRgba8(_) => img.to_rgb8().into_raw().into_iter().map(f64::from).collect(),
        _ => img.to_rgb16().into_raw().into_iter().map(|v| f64::from(v) * 255.0 / 65535.0).collect(),
    };
    RgbImage { width, height, data }
}

/// Succeeds iff both images have identical dimensions.
pub fn validate_pair(reference: &RgbImage, distorted: &RgbImage) -> Result<()> {
    if reference.dims() != distorted.dims() {
        return Err(Error::ShapeMismatch { reference: reference.dims(), distorted: distorted.dims() });
    }
    Ok(())
}
