//! Pearson, Spearman and Kendall tau-b correlation.

use std::cmp::Ordering;

use crate::error::{Error, Result};

fn check(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::DegenerateInput(format!("need at least 2 samples, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("non-finite sample".into()));
    }
    Ok(())
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&a| a == v[0])
}

/// Linear correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    if is_constant(x) || is_constant(y) {
        return Err(Error::DegenerateInput("constant vector".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based fractional ranks; tied values share the mean of their positions.
pub fn mid_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank-order correlation: Pearson correlation of mid-ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    pearson(&mid_ranks(x), &mid_ranks(y))
}

/// Kendall tau-b, `(C - D) / sqrt((n0 - t_x)(n0 - t_y))` where `t_x`, `t_y`
/// count pairs tied in `x` and in `y`.
pub fn kendall(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    let n = x.len();
    let (mut concordant, mut discordant, mut tied_x, mut tied_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let sx = x[i].partial_cmp(&x[j]).unwrap_or(Ordering::Equal);
            let sy = y[i].partial_cmp(&y[j]).unwrap_or(Ordering::Equal);
            match (sx, sy) {
                (Ordering::Equal, Ordering::Equal) => {
                    tied_x += 1;
                    tied_y += 1;
                }
                (Ordering::Equal, _) => tied_x += 1,
                (_, Ordering::Equal) => tied_y += 1,
                (a, b) if a == b => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as i64;
    let (dx, dy) = (n0 - tied_x, n0 - tied_y);
    if dx == 0 || dy == 0 {
        return Err(Error::DegenerateInput("constant vector".into()));
    }
    Ok((concordant - discordant) as f64 / ((dx as f64) * (dy as f64)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spearman_examples() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[1.0, 4.0, 9.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        // ranks x = [1, 2.5, 2.5, 4], y = [1, 3, 2, 4]; sxy = 4.5, sxx = 4.5, syy = 5
        let r = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 4.5 / (4.5f64 * 5.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kendall_examples() {
        assert_eq!(kendall(&[1.0, 2.0, 3.0, 4.0], &[2.0, 3.0, 7.0, 8.0]).unwrap(), 1.0);
        assert_eq!(kendall(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]).unwrap(), -1.0);
        // x = [1,2,2,3,4], y = [1,3,2,4,5]: C = 9, D = 0, one x-tie, n0 = 10
        let t = kendall(&[1.0, 2.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0, 5.0]).unwrap();
        assert!((t - 9.0 / (9.0f64 * 10.0).sqrt()).abs() < 1e-15);
        // x = [1,2,3,4,5], y = [2,1,4,3,5]: C = 8, D = 2
        let t = kendall(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 4.0, 3.0, 5.0]).unwrap();
        assert!((t - 0.6).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(spearman(&[1.0, 2.0], &[1.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(kendall(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::DegenerateInput(_))));
        assert!(matches!(pearson(&[1.0, 2.0], &[5.0, 5.0]), Err(Error::DegenerateInput(_))));
        assert!(spearman(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn mid_ranks_ties() {
        assert_eq!(mid_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    proptest! {
        #[test]
        fn monotone_transform_invariance(x in prop::collection::vec(-100.0f64..100.0, 3..40), noise in prop::collection::vec(-5.0f64..5.0, 40)) {
            prop_assume!(!is_constant(&x));
            let y: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| a + e).collect();
            prop_assume!(!is_constant(&y));
            let fx: Vec<f64> = x.iter().map(|v| (v / 30.0).exp()).collect();
            let fy: Vec<f64> = y.iter().map(|v| v * v * v + 2.0).collect();
            prop_assert!((spearman(&x, &y).unwrap() - spearman(&fx, &fy).unwrap()).abs() < 1e-12);
            prop_assert!((kendall(&x, &y).unwrap() - kendall(&fx, &fy).unwrap()).abs() < 1e-12);
            prop_assert!((spearman(&x, &x).unwrap() - 1.0).abs() < 1e-12);
            prop_assert!((kendall(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
