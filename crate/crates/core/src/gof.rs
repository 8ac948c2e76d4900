//! Kolmogorov–Smirnov and Cramér–von Mises distances to a fitted model.

use serde::{Deserialize, Serialize};

use crate::distribution::WeibullParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub ks: f64,
    pub cvm: f64,
    pub n: usize,
}

/// max_i max{ i/n − F(x_(i)), F(x_(i)) − (i−1)/n } over ascending `sorted`.
pub fn ks_distance(sorted: &[f64], p: &WeibullParams) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = p.cdf_unchecked(x);
            let i = (k + 1) as f64;
            (i / n - f).max(f - (i - 1.0) / n)
        })
        .fold(0.0, f64::max)
}

/// 1/(12n) + Σ_i ((2i − 1)/(2n) − F(x_(i)))² over ascending `sorted`.
pub fn cvm_distance(sorted: &[f64], p: &WeibullParams) -> f64 {
    let n = sorted.len() as f64;
    let sum: f64 = sorted
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let d = (2.0 * (k + 1) as f64 - 1.0) / (2.0 * n) - p.cdf_unchecked(x);
            d * d
        })
        .sum();
    1.0 / (12.0 * n) + sum
}

pub fn gof_report(sorted: &[f64], p: &WeibullParams) -> GofReport {
    GofReport {
        ks: ks_distance(sorted, p),
        cvm: cvm_distance(sorted, p),
        n: sorted.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn centered(p: &WeibullParams, n: usize) -> Vec<f64> {
        (1..=n)
            .map(|i| {
                p.quantile((2.0 * i as f64 - 1.0) / (2.0 * n as f64))
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn centered_points_attain_minimum() {
        let p = WeibullParams::new(1.7, 3.2).unwrap();
        for n in [1, 4, 25] {
            let x = centered(&p, n);
            assert_relative_eq!(ks_distance(&x, &p), 0.5 / n as f64, max_relative = 1e-12);
            assert_relative_eq!(
                cvm_distance(&x, &p),
                1.0 / (12.0 * n as f64),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn single_point_at_median() {
        let p = WeibullParams::new(2.0, 1.0).unwrap();
        let x = [p.quantile(0.5).unwrap()];
        assert_relative_eq!(ks_distance(&x, &p), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn ties_use_order_statistics_verbatim() {
        let p = WeibullParams::new(1.0, 1.0).unwrap();
        let x = [1.0, 1.0];
        let f = 1.0 - (-1f64).exp();
        assert_relative_eq!(
            ks_distance(&x, &p),
            (1.0 - f).max(f - 0.0),
            max_relative = 1e-14
        );
    }
}
