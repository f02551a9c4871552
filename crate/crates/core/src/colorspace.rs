//! Luminance plus the two chromaticity channels of a Gaussian color model.

use crate::raster::{Plane, RgbImage};

const LUMA: [f64; 3] = [0.2989, 0.5870, 0.1140];
const CHROMA_H: [f64; 3] = [0.30, 0.04, -0.35];
const CHROMA_M: [f64; 3] = [0.34, -0.6, 0.17];

/// `(L, H, M)` decomposition of one image. All planes share its dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTriplet {
    pub luma: Plane,
    /// First chromaticity channel, signed.
    pub h: Plane,
    /// Second chromaticity channel, signed.
    pub m: Plane,
}

#[inline]
fn dot(row: &[f64; 3], px: &[f64]) -> f64 {
    row[0] * px[0] + row[1] * px[1] + row[2] * px[2]
}

/// Projects every pixel onto the fixed luminance and chromaticity rows.
/// Chromaticity values are left signed.
pub fn to_lhm(img: &RgbImage) -> ChannelTriplet {
    let n = img.width() * img.height();
    let (mut l, mut h, mut m) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for px in img.data().chunks_exact(3) {
        l.push(dot(&LUMA, px));
        h.push(dot(&CHROMA_H, px));
        m.push(dot(&CHROMA_M, px));
    }
    let (w, ht) = img.dims();
    let plane = |v| Plane::new(w, ht, v).expect("dims come from a valid image");
    ChannelTriplet { luma: plane(l), h: plane(h), m: plane(m) }
}
