//! Straight-line scalar re-implementation of the metric used as a test
//! oracle. It shares no code with the library: images are nested `Vec`s,
//! filters are computed as full 2-D convolutions cropped to "same" size, and
//! negative fractional powers go through complex arithmetic.

use num_complex::Complex64;

pub type Grid = Vec<Vec<f64>>;

/// `[row][col][channel]`
pub type Rgb = Vec<Vec<[f64; 3]>>;

pub struct OracleConfig {
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { alpha: 0.6, c1: 140.0, c2: 55.0, c3: 550.0 }
    }
}

/// Full convolution followed by the centred crop a "same"-size convolution
/// returns (offset `k / 2` for a `k`-tap kernel).
pub fn conv2_same(img: &Grid, kernel: &Grid) -> Grid {
    let (h, w) = (img.len(), img[0].len());
    let (kh, kw) = (kernel.len(), kernel[0].len());
    let mut full = vec![vec![0.0; w + kw - 1]; h + kh - 1];
    for (i, row) in full.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = 0.0;
            for (a, krow) in kernel.iter().enumerate() {
                for (b, kv) in krow.iter().enumerate() {
                    let (y, x) = (i as isize - a as isize, j as isize - b as isize);
                    if y >= 0 && x >= 0 && (y as usize) < h && (x as usize) < w {
                        s += kv * img[y as usize][x as usize];
                    }
                }
            }
            *cell = s;
        }
    }
    let (oy, ox) = (kh / 2, kw / 2);
    (0..h).map(|i| (0..w).map(|j| full[i + oy][j + ox]).collect()).collect()
}

fn channel(img: &Rgb, c: usize) -> Grid {
    img.iter().map(|row| row.iter().map(|px| px[c]).collect()).collect()
}

pub fn downsample(img: &Rgb) -> Rgb {
    let (h, w) = (img.len(), img[0].len());
    let m = ((h.min(w) as f64 / 256.0).round() as usize).max(1);
    if m == 1 {
        return img.clone();
    }
    let kernel = vec![vec![1.0 / (m * m) as f64; m]; m];
    let filtered: Vec<Grid> = (0..3).map(|c| conv2_same(&channel(img, c), &kernel)).collect();
    (0..h)
        .step_by(m)
        .map(|i| (0..w).step_by(m).map(|j| [filtered[0][i][j], filtered[1][i][j], filtered[2][i][j]]).collect())
        .collect()
}

fn prewitt(l: &Grid) -> Grid {
    let third = 1.0 / 3.0;
    let hx = vec![vec![third, 0.0, -third]; 3];
    let hy = vec![vec![third; 3], vec![0.0; 3], vec![-third; 3]];
    let gx = conv2_same(l, &hx);
    let gy = conv2_same(l, &hy);
    gx.iter()
        .zip(&gy)
        .map(|(rx, ry)| rx.iter().zip(ry).map(|(a, b)| (a * a + b * b).sqrt()).collect())
        .collect()
}

fn sim(a: f64, b: f64, c: f64) -> f64 {
    (2.0 * a * b + c) / (a * a + b * b + c)
}

/// Real part of the principal complex root.
pub fn principal_pow(x: f64, q: f64) -> f64 {
    Complex64::new(x, 0.0).powf(q).re
}

/// Per-pixel combined map at the downsampled resolution.
pub fn gcs_hat_map(reference: &Rgb, distorted: &Rgb, cfg: &OracleConfig) -> Vec<f64> {
    let r = downsample(reference);
    let d = downsample(distorted);
    let (h, w) = (r.len(), r[0].len());
    let luma = |img: &Rgb| -> Grid {
        img.iter().map(|row| row.iter().map(|p| 0.2989 * p[0] + 0.5870 * p[1] + 0.1140 * p[2]).collect()).collect()
    };
    let chroma_h = |p: &[f64; 3]| 0.30 * p[0] + 0.04 * p[1] - 0.35 * p[2];
    let chroma_m = |p: &[f64; 3]| 0.34 * p[0] - 0.6 * p[1] + 0.17 * p[2];

    let (lr, ld) = (luma(&r), luma(&d));
    let lf: Grid = lr.iter().zip(&ld).map(|(a, b)| a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()).collect();
    let (gr, gd, gf) = (prewitt(&lr), prewitt(&ld), prewitt(&lf));

    let mut out = Vec::with_capacity(h * w);
    for i in 0..h {
        for j in 0..w {
            let gs = sim(gr[i][j], gd[i][j], cfg.c1);
            let gs_rf = sim(gr[i][j], gf[i][j], cfg.c2);
            let gs_df = sim(gd[i][j], gf[i][j], cfg.c2);
            let gs_hat = gs + (gs_df - gs_rf);
            let (hr, hd) = (chroma_h(&r[i][j]), chroma_h(&d[i][j]));
            let (mr, md) = (chroma_m(&r[i][j]), chroma_m(&d[i][j]));
            let cs_hat = (2.0 * (hr * hd + mr * md) + cfg.c3) / (hr * hr + hd * hd + mr * mr + md * md + cfg.c3);
            out.push(cfg.alpha * gs_hat + (1.0 - cfg.alpha) * cs_hat);
        }
    }
    out
}

/// `[ mean | x^(1/4) - mean(x^(1/4)) | ]^(1/4)`
pub fn mdsi(reference: &Rgb, distorted: &Rgb, cfg: &OracleConfig) -> f64 {
    let gcs = gcs_hat_map(reference, distorted, cfg);
    let n = gcs.len() as f64;
    let powered: Vec<f64> = gcs.iter().map(|&v| principal_pow(v, 0.25)).collect();
    let mean = powered.iter().sum::<f64>() / n;
    let mad = powered.iter().map(|v| (v - mean).abs()).sum::<f64>() / n;
    mad.powf(0.25)
}
