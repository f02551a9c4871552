//! Five-parameter logistic mapping from metric scores to MOS.
//!
//! `f(x) = b1 (1/2 - 1 / (1 + exp(b2 (x - b3)))) + b4 x + b5`
//!
//! Fitting runs in standardized coordinates (scores and MOS shifted to zero
//! mean and unit spread), which keeps the slope parameter near 1 regardless
//! of the metric's numeric range. Each restart runs Levenberg-Marquardt
//! followed by a Nelder-Mead refinement; the lowest SSE wins.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RESTARTS: usize = 5;
const SEED: u64 = 0x6d64_7369;
const MAX_EVALS: usize = 10_000;
const STALL_WINDOW: usize = 50;
const STALL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
}

impl LogisticParams {
    pub fn eval(&self, x: f64) -> f64 {
        self.beta1 * (0.5 - inv_one_plus_exp(self.beta2 * (x - self.beta3))) + self.beta4 * x + self.beta5
    }

    pub fn is_finite(&self) -> bool {
        [self.beta1, self.beta2, self.beta3, self.beta4, self.beta5].iter().all(|v| v.is_finite())
    }
}

/// `1 / (1 + e^t)` without overflow.
fn inv_one_plus_exp(t: f64) -> f64 {
    if t >= 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

type Params = [f64; 5];

fn model(p: &Params, x: f64) -> f64 {
    p[0] * (0.5 - inv_one_plus_exp(p[1] * (x - p[2]))) + p[3] * x + p[4]
}

fn sse(p: &Params, xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter().zip(ys).map(|(&x, &y)| (model(p, x) - y).powi(2)).sum()
}

struct Standardizer {
    mean: f64,
    scale: f64,
}

impl Standardizer {
    fn new(v: &[f64]) -> Self {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let sd = (v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n).sqrt();
        Self { mean, scale: if sd > 0.0 { sd } else { 1.0 } }
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|a| (a - self.mean) / self.scale).collect()
    }
}

/// Fits the logistic mapping by least squares. Needs at least 5 points and a
/// non-constant score vector.
pub fn fit_logistic(scores: &[f64], mos: &[f64]) -> Result<LogisticParams> {
    if scores.len() != mos.len() {
        return Err(Error::LengthMismatch { left: scores.len(), right: mos.len() });
    }
    if scores.len() < 5 {
        return Err(Error::DegenerateInput(format!("logistic fit needs at least 5 points, got {}", scores.len())));
    }
    if scores.iter().chain(mos).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("non-finite sample".into()));
    }
    if scores.iter().all(|&s| s == scores[0]) {
        return Err(Error::DegenerateInput("constant score vector".into()));
    }

    let sx = Standardizer::new(scores);
    let sy = Standardizer::new(mos);
    let xs = sx.apply(scores);
    let ys = sy.apply(mos);

    let mut best: Option<(f64, Params)> = None;
    for start in initial_guesses(&xs, &ys) {
        let p = levenberg_marquardt(start, &xs, &ys);
        let p = nelder_mead(p, &xs, &ys);
        let e = sse(&p, &xs, &ys);
        if e.is_finite() && best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e, p));
        }
    }
    let (_, c) = best.ok_or_else(|| Error::FitDiverged("no restart produced a finite SSE".into()))?;

    // Undo the standardization: f(x) = my + sy * g((x - mx) / sx).
    let params = LogisticParams {
        beta1: sy.scale * c[0],
        beta2: c[1] / sx.scale,
        beta3: sx.mean + sx.scale * c[2],
        beta4: sy.scale * c[3] / sx.scale,
        beta5: sy.mean + sy.scale * (c[4] - c[3] * sx.mean / sx.scale),
    };
    if !params.is_finite() {
        return Err(Error::FitDiverged(format!("non-finite parameters {params:?}")));
    }
    Ok(params)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Data-driven seed, a purely affine seed, then seeded random perturbations.
fn initial_guesses(xs: &[f64], ys: &[f64]) -> Vec<Params> {
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let y_range = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let x_range = (hi - lo).max(f64::EPSILON);
    let (slope, intercept) = line_fit(xs, ys);
    let mid = median(xs);
    let sign = if slope < 0.0 { -1.0 } else { 1.0 };

    let data_driven = [sign * y_range, 4.0 / x_range, mid, slope, intercept];
    let affine = [0.0, 4.0 / x_range, mid, slope, intercept];
    let mut guesses = vec![data_driven, affine];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    while guesses.len() < RESTARTS {
        let b1 = sign * y_range * rng.random_range(0.25..2.0);
        let b2 = 4.0 / x_range * rng.random_range(0.2f64..5.0);
        let b3 = rng.random_range(lo..=hi);
        let b4 = slope * rng.random_range(0.0..1.0);
        guesses.push([b1, b2, b3, b4, intercept]);
    }
    guesses
}

fn jacobian_row(p: &Params, x: f64) -> [f64; 5] {
    let s = inv_one_plus_exp(p[1] * (x - p[2]));
    let ds = s * (1.0 - s);
    [0.5 - s, p[0] * ds * (x - p[2]), -p[0] * ds * p[1], x, 1.0]
}

/// Solves `a x = b` for a small dense system by Gaussian elimination with
/// partial pivoting. Returns `None` if singular.
fn solve5(mut a: [[f64; 5]; 5], mut b: [f64; 5]) -> Option<[f64; 5]> {
    for col in 0..5 {
        let piv = (col..5).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..5 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, pv) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= f * pv;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 5];
    for row in (0..5).rev() {
        let s: f64 = (row + 1..5).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn levenberg_marquardt(mut p: Params, xs: &[f64], ys: &[f64]) -> Params {
    let mut lambda = 1e-3;
    let mut cost = sse(&p, xs, ys);
    if !cost.is_finite() {
        return p;
    }
    for _ in 0..500 {
        let mut jtj = [[0.0; 5]; 5];
        let mut jtr = [0.0; 5];
        for (&x, &y) in xs.iter().zip(ys) {
            let j = jacobian_row(&p, x);
            let r = y - model(&p, x);
            for a in 0..5 {
                jtr[a] += j[a] * r;
                for b in 0..5 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = jtj;
            for (k, row) in damped.iter_mut().enumerate() {
                row[k] += lambda * jtj[k][k].max(1e-12);
            }
            if let Some(step) = solve5(damped, jtr) {
                let trial = std::array::from_fn(|k| p[k] + step[k]);
                let c = sse(&trial, xs, ys);
                if c.is_finite() && c < cost {
                    let rel = (cost - c) / cost.max(f64::MIN_POSITIVE);
                    p = trial;
                    cost = c;
                    lambda = (lambda * 0.3).max(1e-12);
                    improved = true;
                    if rel < 1e-15 {
                        return p;
                    }
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved || cost == 0.0 {
            break;
        }
    }
    p
}

fn nelder_mead(start: Params, xs: &[f64], ys: &[f64]) -> Params {
    let f = |p: &Params| {
        let v = sse(p, xs, ys);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Params, f64)> = Vec::with_capacity(6);
    simplex.push((start, f(&start)));
    for k in 0..5 {
        let mut p = start;
        p[k] += if p[k].abs() > 1e-8 { 0.05 * p[k] } else { 0.05 };
        simplex.push((p, f(&p)));
    }
    let mut evals = simplex.len();
    let mut history: Vec<f64> = Vec::new();

    while evals < MAX_EVALS {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        history.push(best);
        if history.len() > STALL_WINDOW {
            let old = history[history.len() - 1 - STALL_WINDOW];
            if old - best <= STALL_TOL * old.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }

        let centroid: Params = std::array::from_fn(|k| simplex[..5].iter().map(|(p, _)| p[k]).sum::<f64>() / 5.0);
        let worst = simplex[5];
        let along = |t: f64| -> Params { std::array::from_fn(|k| centroid[k] + t * (worst.0[k] - centroid[k])) };

        let reflected = along(-1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            evals += 1;
            simplex[5] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[4].1 {
            simplex[5] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { along(-0.5) } else { along(0.5) };
            let fc = f(&contracted);
            evals += 1;
            if fc < worst.1.min(fr) {
                simplex[5] = (contracted, fc);
            } else {
                let anchor = simplex[0].0;
                for (p, v) in simplex.iter_mut().skip(1) {
                    *p = std::array::from_fn(|k| anchor[k] + 0.5 * (p[k] - anchor[k]));
                    *v = f(p);
                }
                evals += 5;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0].0
}
