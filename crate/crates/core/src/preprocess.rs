//! Mean-filter downsampling applied to both images before any feature is
//! extracted.

use crate::error::{Error, Result};
use crate::raster::RgbImage;

/// Scale at which images are assessed: `round(min(h, w) / 256)`, never below 1.
///
/// Ties round away from zero, so a 384x512 image gives 2.
pub fn downsample_factor(height: usize, width: usize) -> usize {
    let m = (height.min(width) as f64 / 256.0).round() as usize;
    m.max(1)
}

/// Convolves each channel with an `m x m` mean kernel (zero padded) and keeps
/// rows and columns `0, m, 2m, ...`.
///
/// The window around sample `i` spans `i - (m-1)/2 ..= i + m/2`, the centring
/// a "same"-size convolution uses for even kernels. Output size is
/// `ceil(h/m) x ceil(w/m)`; `m = 1` returns the input unchanged.
pub fn box_filter_downsample(img: &RgbImage, m: usize) -> Result<RgbImage> {
    if m == 0 {
        return Err(Error::Dimension("downsample factor must be at least 1".into()));
    }
    if m == 1 {
        return Ok(img.clone());
    }
    let (w, h) = img.dims();
    let (out_w, out_h) = (w.div_ceil(m), h.div_ceil(m));
    if out_w == 0 || out_h == 0 {
        return Err(Error::Dimension(format!("{w}x{h} downsampled by {m} is empty")));
    }

    let before = ((m - 1) / 2) as isize;
    let after = (m / 2) as isize;
    let norm = 1.0 / (m * m) as f64;
    let src = img.data();
    let mut out = Vec::with_capacity(out_w * out_h * 3);

    for oy in 0..out_h {
        let cy = (oy * m) as isize;
        let y0 = (cy - before).max(0) as usize;
        let y1 = (cy + after).min(h as isize - 1) as usize;
        for ox in 0..out_w {
            let cx = (ox * m) as isize;
            let x0 = (cx - before).max(0) as usize;
            let x1 = (cx + after).min(w as isize - 1) as usize;
            let mut acc = [0.0f64; 3];
            for y in y0..=y1 {
                let row = &src[(y * w + x0) * 3..(y * w + x1 + 1) * 3];
                for px in row.chunks_exact(3) {
                    acc[0] += px[0];
                    acc[1] += px[1];
                    acc[2] += px[2];
                }
            }
            out.extend(acc.iter().map(|s| s * norm));
        }
    }
    RgbImage::new(out_w, out_h, out)
}
