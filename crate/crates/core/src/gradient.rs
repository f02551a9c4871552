//! Prewitt gradient magnitude.
//!
//! `h_x = 1/3 [[1, 0, -1]; [1, 0, -1]; [1, 0, -1]]`, `h_y = h_x^T`, applied as
//! a true convolution with zero padding and "same" output size. The kernel is
//! separable, so each component is a three-tap box sum along one axis
//! followed by a central difference along the other.

use crate::raster::Plane;

const NORM: f64 = 1.0 / 3.0;

/// `sqrt(G_x^2 + G_y^2)` of a luminance plane. Output is non-negative and has
/// the input's shape.
pub fn prewitt_magnitude(lum: &Plane) -> Plane {
    let (w, h) = lum.dims();
    let src = lum.values();
    let at = |x: isize, y: isize| -> f64 {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            0.0
        } else {
            src[y as usize * w + x as usize]
        }
    };

    // Three-tap sums along columns (for G_x) and along rows (for G_y).
    let mut col_sum = vec![0.0; w * h];
    let mut row_sum = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            col_sum[i] = at(x, y - 1) + at(x, y) + at(x, y + 1);
            row_sum[i] = at(x - 1, y) + at(x, y) + at(x + 1, y);
        }
    }
    let col = |x: isize, y: usize| if x < 0 || x >= w as isize { 0.0 } else { col_sum[y * w + x as usize] };
    let row = |x: usize, y: isize| if y < 0 || y >= h as isize { 0.0 } else { row_sum[y as usize * w + x] };

    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let gx = NORM * (col(x as isize + 1, y) - col(x as isize - 1, y));
            let gy = NORM * (row(x, y as isize + 1) - row(x, y as isize - 1));
            out.push((gx * gx + gy * gy).sqrt());
        }
    }
    Plane::new(w, h, out).expect("same shape as input")
}
