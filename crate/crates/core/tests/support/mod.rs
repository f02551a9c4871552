//! Shared helpers for integration tests: synthetic images, degradations,
//! PNG/manifest writers and the scalar reference implementation.

#![allow(dead_code)]

pub mod oracle;

use std::path::{Path, PathBuf};

use mdsi::RgbImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random pixels in `[0, 255]`.
pub fn random_image(width: usize, height: usize, rng: &mut ChaCha8Rng) -> RgbImage {
    RgbImage::from_fn(width, height, |_, _| {
        [rng.random_range(0.0..=255.0), rng.random_range(0.0..=255.0), rng.random_range(0.0..=255.0)]
    })
    .unwrap()
}

/// Natural-looking test scene: smooth colour ramps, a few sharp-edged
/// rectangles and discs, and a sinusoidal texture. All seeds share the same
/// statistics so degradation strength dominates content.
pub fn seed_image(seed: u64, width: usize, height: usize) -> RgbImage {
    let mut r = rng(seed);
    let base: [f64; 3] = [r.random_range(60.0..120.0), r.random_range(60.0..120.0), r.random_range(60.0..120.0)];
    let slope: [f64; 3] = [r.random_range(-60.0..60.0), r.random_range(-60.0..60.0), r.random_range(-60.0..60.0)];
    let mut shapes = Vec::new();
    for _ in 0..12 {
        let cx = r.random_range(0.0..width as f64);
        let cy = r.random_range(0.0..height as f64);
        let size = r.random_range(6.0..(width.min(height) as f64 / 4.0));
        let colour = [r.random_range(0.0..255.0), r.random_range(0.0..255.0), r.random_range(0.0..255.0)];
        let disc = r.random_bool(0.5);
        shapes.push((cx, cy, size, colour, disc));
    }
    let freq = r.random_range(0.15..0.35);
    let phase = r.random_range(0.0..std::f64::consts::TAU);
    RgbImage::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64, y as f64);
        let t = (fx / width as f64 + fy / height as f64) * 0.5;
        let mut px = [0.0; 3];
        for c in 0..3 {
            px[c] = base[c] + slope[c] * t;
        }
        for &(cx, cy, size, colour, disc) in &shapes {
            let inside = if disc {
                (fx - cx).hypot(fy - cy) < size
            } else {
                (fx - cx).abs() < size && (fy - cy).abs() < size * 0.6
            };
            if inside {
                px = colour;
            }
        }
        let tex = 20.0 * (freq * fx + phase).sin() * (freq * 0.7 * fy).cos();
        for v in &mut px {
            *v = (*v + tex).clamp(0.0, 255.0);
        }
        px
    })
    .unwrap()
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let k: Vec<f64> = (-radius..=radius).map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let s: f64 = k.iter().sum();
    k.into_iter().map(|v| v / s).collect()
}

fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let mut i = i;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

/// Separable Gaussian blur with symmetric borders.
pub fn gaussian_blur(img: &RgbImage, sigma: f64) -> RgbImage {
    let (w, h) = img.dims();
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as isize;
    let pass = |src: &dyn Fn(usize, usize) -> [f64; 3], horizontal: bool| -> Vec<[f64; 3]> {
        let mut out = vec![[0.0; 3]; w * h];
        for y in 0..h {
            for x in 0..w {
                let mut acc = [0.0; 3];
                for (t, kv) in k.iter().enumerate() {
                    let o = t as isize - r;
                    let p = if horizontal {
                        src(reflect(x as isize + o, w), y)
                    } else {
                        src(x, reflect(y as isize + o, h))
                    };
                    for c in 0..3 {
                        acc[c] += kv * p[c];
                    }
                }
                out[y * w + x] = acc;
            }
        }
        out
    };
    let first = pass(&|x, y| img.pixel(x, y), true);
    let second = pass(&|x, y| first[y * w + x], false);
    RgbImage::from_fn(w, h, |x, y| second[y * w + x]).unwrap()
}

/// Additive Gaussian noise with standard deviation `amplitude`, clipped to
/// the valid range.
pub fn add_noise(img: &RgbImage, amplitude: f64, seed: u64) -> RgbImage {
    let mut r = rng(seed);
    let normal = Normal::new(0.0, amplitude).unwrap();
    RgbImage::from_fn(img.width(), img.height(), |x, y| {
        let p = img.pixel(x, y);
        [0, 1, 2].map(|c| (p[c] + normal.sample(&mut r)).clamp(0.0, 255.0))
    })
    .unwrap()
}

/// Rounds to 8 bits.
pub fn quantize(img: &RgbImage) -> RgbImage {
    RgbImage::from_fn(img.width(), img.height(), |x, y| img.pixel(x, y).map(f64::round)).unwrap()
}

pub fn write_png(img: &RgbImage, path: &Path) {
    let (w, h) = img.dims();
    let mut buf = image::RgbImage::new(w as u32, h as u32);
    for y in 0..h {
        for x in 0..w {
            let p = img.pixel(x, y).map(|v| v.round().clamp(0.0, 255.0) as u8);
            buf.put_pixel(x as u32, y as u32, image::Rgb(p));
        }
    }
    buf.save(path).unwrap();
}

pub fn to_nested(img: &RgbImage) -> oracle::Rgb {
    (0..img.height()).map(|y| (0..img.width()).map(|x| img.pixel(x, y)).collect()).collect()
}

/// One row of a test manifest.
pub struct Row {
    pub reference: PathBuf,
    pub distorted: PathBuf,
    pub mos: f64,
    pub distortion: &'static str,
    pub level: i64,
}

pub fn write_manifest(path: &Path, rows: &[Row]) {
    let mut text = String::from("ref,dist,mos,distortion,level\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{:?},{},{}\n",
            r.reference.display(),
            r.distorted.display(),
            r.mos,
            r.distortion,
            r.level
        ));
    }
    std::fs::write(path, text).unwrap();
}

pub const BLUR_SIGMAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const NOISE_AMPLITUDES: [f64; 4] = [5.0, 10.0, 20.0, 40.0];

/// Writes `seeds` reference images plus blur and noise ladders into `dir`
/// and returns the paths of the two manifests (`mos = -level`).
pub fn ladder_manifests(dir: &Path, seeds: &[u64], width: usize, height: usize) -> (PathBuf, PathBuf) {
    let mut blur_rows = Vec::new();
    let mut noise_rows = Vec::new();
    for &seed in seeds {
        let reference = quantize(&seed_image(seed, width, height));
        let ref_path = dir.join(format!("ref{seed}.png"));
        write_png(&reference, &ref_path);
        for (level, sigma) in BLUR_SIGMAS.iter().enumerate() {
            let p = dir.join(format!("blur{seed}_{level}.png"));
            write_png(&gaussian_blur(&reference, *sigma), &p);
            blur_rows.push(Row {
                reference: ref_path.clone(),
                distorted: p,
                mos: -(level as f64 + 1.0),
                distortion: "blur",
                level: level as i64 + 1,
            });
        }
        for (level, amp) in NOISE_AMPLITUDES.iter().enumerate() {
            let p = dir.join(format!("noise{seed}_{level}.png"));
            write_png(&add_noise(&reference, *amp, seed * 31 + level as u64), &p);
            noise_rows.push(Row {
                reference: ref_path.clone(),
                distorted: p,
                mos: -(level as f64 + 1.0),
                distortion: "noise",
                level: level as i64 + 1,
            });
        }
    }
    let blur = dir.join("blur.csv");
    let noise = dir.join("noise.csv");
    write_manifest(&blur, &blur_rows);
    write_manifest(&noise, &noise_rows);
    (blur, noise)
}
