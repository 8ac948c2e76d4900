//! Pairwise U-statistic estimators of 1/α and log β.
//!
//! For iid Weibull draws, min(X₁, X₂) has the law of 2^{−1/α}X₁, which makes
//!
//! ```text
//! H1(x1, x2) = (log x1 + log x2) / (2 log 2) − log min(x1, x2) / log 2
//! H2(x1, x2) = (log x1 + log x2) / 2 − ψ(1) · H1(x1, x2)
//! ```
//!
//! unbiased kernels for 1/α and log β. Averaging them over all C(n, 2) pairs
//! gives the U-statistics; α̂ and β̂ follow by plug-in inversion.
//!
//! H1 reduces to |log x1 − log x2| / (2 log 2), so on sorted logs L₁ ≤ … ≤ Lₙ
//! the pair sum collapses to Σᵢ (2i − n − 1) Lᵢ / (4 log 2). [`estimate_u`]
//! uses that single pass; [`estimate_u_pairwise`] is the literal double loop.

use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Method};
use crate::sample::SortedSample;
use crate::special::{LN_2, PSI_1};

/// The two kernel values for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPairValue {
    pub h1: f64,
    pub h2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UStatEstimate {
    /// U-statistic for 1/α.
    pub u_alpha: f64,
    /// U-statistic for log β.
    pub u_logbeta: f64,
    pub alpha_hat: f64,
    pub beta_hat: f64,
}

impl UStatEstimate {
    fn from_stats(u_alpha: f64, u_logbeta: f64) -> Result<Self> {
        if !(u_alpha > 0.0) {
            return Err(Error::Degenerate(
                "all observations equal; U-statistic for 1/alpha is zero",
            ));
        }
        Ok(Self {
            u_alpha,
            u_logbeta,
            alpha_hat: 1.0 / u_alpha,
            beta_hat: u_logbeta.exp(),
        })
    }
}

fn check_pair(x1: f64, x2: f64) -> Result<()> {
    for x in [x1, x2] {
        if !(x > 0.0) {
            return Err(Error::Domain {
                what: "kernel argument",
                value: x,
                reason: "must be positive",
            });
        }
    }
    Ok(())
}

/// H1(x1, x2); expectation 1/α under the Weibull model.
pub fn kernel_h1(x1: f64, x2: f64) -> Result<f64> {
    check_pair(x1, x2)?;
    let (l1, l2) = (x1.ln(), x2.ln());
    Ok((l1 + l2) / (2.0 * LN_2) - l1.min(l2) / LN_2)
}

/// H2(x1, x2); expectation log β under the Weibull model.
pub fn kernel_h2(x1: f64, x2: f64) -> Result<f64> {
    check_pair(x1, x2)?;
    let (l1, l2) = (x1.ln(), x2.ln());
    let c = PSI_1 / LN_2;
    Ok((l1 + l2) / 2.0 * (1.0 - c) + c * l1.min(l2))
}

pub fn kernel_pair(x1: f64, x2: f64) -> Result<KernelPairValue> {
    Ok(KernelPairValue {
        h1: kernel_h1(x1, x2)?,
        h2: kernel_h2(x1, x2)?,
    })
}

/// Both U-statistics in one pass over the sorted logs.
pub fn estimate_u(s: &SortedSample) -> Result<UStatEstimate> {
    let logs = s.logs();
    let n = logs.len();
    let nf = n as f64;
    // H1 is invariant to a common shift of the logs; centring on the minimum
    // keeps the weighted sum free of a large cancelling offset.
    let base = logs[0];
    let mut weighted = 0.0;
    let mut total = 0.0;
    for (i, &l) in logs.iter().enumerate() {
        let d = l - base;
        weighted += (2.0 * (i as f64 + 1.0) - nf - 1.0) * d;
        total += l;
    }
    let pairs = nf * (nf - 1.0) / 2.0;
    let u_alpha = weighted / (2.0 * LN_2) / pairs;
    let u_logbeta = total / nf - PSI_1 * u_alpha;
    UStatEstimate::from_stats(u_alpha, u_logbeta)
}

/// O(n²) reference: averages the kernels over every unordered pair.
pub fn estimate_u_pairwise(s: &SortedSample) -> Result<UStatEstimate> {
    let x = s.values();
    let n = x.len();
    let (mut s1, mut s2) = (0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let k = kernel_pair(x[i], x[j])?;
            s1 += k.h1;
            s2 += k.h2;
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    UStatEstimate::from_stats(s1 / pairs, s2 / pairs)
}

pub fn fit_ustat(s: &SortedSample) -> Result<EstimateResult> {
    let u = estimate_u(s)?;
    EstimateResult::new(Method::Ustat, u.alpha_hat, u.beta_hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn h1_examples() {
        for x in [0.1, 1.0, 7.5] {
            assert_eq!(kernel_h1(x, x).unwrap(), 0.0);
        }
        assert_relative_eq!(
            kernel_h1(1.0, E).unwrap(),
            1.0 / (2.0 * LN_2),
            max_relative = 1e-14
        );
        assert_relative_eq!(kernel_h1(2.0, 8.0).unwrap(), 1.0, max_relative = 1e-14);
        assert!(kernel_h1(0.0, 1.0).is_err());
    }

    #[test]
    fn h2_examples() {
        for x in [0.1, 1.0, 7.5] {
            assert_relative_eq!(kernel_h2(x, x).unwrap(), x.ln(), epsilon = 1e-15);
        }
        assert_relative_eq!(
            kernel_h2(1.0, E).unwrap(),
            0.5 - PSI_1 / (2.0 * LN_2),
            epsilon = 1e-14
        );
        for (a, b) in [(0.3, 4.0), (12.0, 1.5), (2.0, 2.0)] {
            let want = (f64::ln(a) + f64::ln(b)) / 2.0 - PSI_1 * kernel_h1(a, b).unwrap();
            assert!((kernel_h2(a, b).unwrap() - want).abs() < 1e-14);
        }
        assert!(kernel_h2(1.0, -2.0).is_err());
    }

    #[test]
    fn kernels_are_symmetric_and_h1_nonnegative() {
        for (a, b) in [(0.3, 4.0), (12.0, 1.5), (1e-5, 1e5)] {
            assert_eq!(kernel_h1(a, b).unwrap(), kernel_h1(b, a).unwrap());
            assert_eq!(kernel_h2(a, b).unwrap(), kernel_h2(b, a).unwrap());
            assert!(kernel_h1(a, b).unwrap() >= 0.0);
        }
    }

    #[test]
    fn single_pair_estimate() {
        let s = SortedSample::new(vec![1.0, E]).unwrap();
        let u = estimate_u(&s).unwrap();
        assert_relative_eq!(u.u_alpha, 0.721_347_520_444_482, max_relative = 1e-12);
        assert_relative_eq!(u.alpha_hat, 2.0 * LN_2, max_relative = 1e-12);
        assert_relative_eq!(u.beta_hat, u.u_logbeta.exp());
    }

    #[test]
    fn degenerate_sample_is_an_error() {
        let s = SortedSample::new(vec![3.0; 5]).unwrap();
        assert!(matches!(estimate_u(&s), Err(Error::Degenerate(_))));
        assert!(matches!(estimate_u_pairwise(&s), Err(Error::Degenerate(_))));
    }
}
