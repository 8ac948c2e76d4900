//! Closed-form and one-dimensional classical estimators: L-moments (LM),
//! logarithmic moments (MLM), percentiles (PM) and the method of moments (MM).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{Diagnostics, EstimateResult, Method};
use crate::roots::{brent, expand_positive_bracket};
use crate::sample::SortedSample;
use crate::special::{gamma, ln_gamma, LN_2, PSI_1, TRIGAMMA_1};

/// First two sample L-moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LMomentSummary {
    pub m1: f64,
    pub m2: f64,
}

/// Mean and (n − 1)-divisor variance of the log data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMomentSummary {
    pub mean_log: f64,
    pub var_log: f64,
}

/// Empirical quantile conventions (Hyndman–Fan continuous types).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantileRule {
    /// Type 5, plotting points (i − 0.5)/n.
    Hazen,
    /// Type 6, plotting points i/(n + 1).
    Weibull,
    /// Type 7, plotting points (i − 1)/(n − 1); the R and NumPy default.
    Linear,
    /// Type 8, plotting points (i − 1/3)/(n + 1/3).
    MedianUnbiased,
}

impl QuantileRule {
    pub const ALL: [QuantileRule; 4] = [
        QuantileRule::Hazen,
        QuantileRule::Weibull,
        QuantileRule::Linear,
        QuantileRule::MedianUnbiased,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QuantileRule::Hazen => "hazen",
            QuantileRule::Weibull => "weibull",
            QuantileRule::Linear => "linear",
            QuantileRule::MedianUnbiased => "median-unbiased",
        }
    }

    /// Probability assigned to the i-th order statistic (1-based).
    pub fn plotting_point(self, i: usize, n: usize) -> f64 {
        let (i, n) = (i as f64, n as f64);
        match self {
            QuantileRule::Hazen => (i - 0.5) / n,
            QuantileRule::Weibull => i / (n + 1.0),
            QuantileRule::Linear => (i - 1.0) / (n - 1.0),
            QuantileRule::MedianUnbiased => (i - 1.0 / 3.0) / (n + 1.0 / 3.0),
        }
    }

    /// Empirical quantile of sorted `x` at probability `p`.
    pub fn quantile(self, x: &[f64], p: f64) -> f64 {
        let n = x.len();
        let nf = n as f64;
        let m = match self {
            QuantileRule::Hazen => 0.5,
            QuantileRule::Weibull => p,
            QuantileRule::Linear => 1.0 - p,
            QuantileRule::MedianUnbiased => (p + 1.0) / 3.0,
        };
        let h = nf * p + m;
        let j = h.floor();
        let g = h - j;
        if j < 1.0 {
            return x[0];
        }
        if j >= nf {
            return x[n - 1];
        }
        let j = j as usize;
        (1.0 - g) * x[j - 1] + g * x[j]
    }
}

impl fmt::Display for QuantileRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuantileRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuantileRule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config {
                field: "quantile_rule",
                reason: format!("unknown rule `{s}`"),
            })
    }
}

/// 1 − e^{−1}, the probability at which every Weibull quantile equals β.
pub const SCALE_PROBABILITY: f64 = 0.632_120_558_828_557_7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercentileConfig {
    p: f64,
    quantile_rule: QuantileRule,
}

impl PercentileConfig {
    pub fn new(p: f64, quantile_rule: QuantileRule) -> Result<Self> {
        if !(p > 0.0 && p < SCALE_PROBABILITY) {
            return Err(Error::Config {
                field: "p",
                reason: format!("{p} must lie in (0, 1 - exp(-1))"),
            });
        }
        Ok(Self { p, quantile_rule })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn quantile_rule(&self) -> QuantileRule {
        self.quantile_rule
    }
}

impl Default for PercentileConfig {
    fn default() -> Self {
        Self {
            p: 0.31,
            quantile_rule: QuantileRule::Linear,
        }
    }
}

pub fn sample_lmoments(s: &SortedSample) -> LMomentSummary {
    let x = s.values();
    let n = x.len() as f64;
    let m1 = s.mean();
    let weighted: f64 = x.iter().enumerate().map(|(i, v)| i as f64 * v).sum();
    let m2 = 2.0 / (n * (n - 1.0)) * weighted - m1;
    LMomentSummary { m1, m2 }
}

pub fn log_moments(s: &SortedSample) -> LogMomentSummary {
    let mean_log = s.mean_log();
    let ss: f64 = s.logs().iter().map(|l| (l - mean_log).powi(2)).sum();
    LogMomentSummary {
        mean_log,
        var_log: ss / (s.len() as f64 - 1.0),
    }
}

pub fn fit_lm(s: &SortedSample) -> Result<EstimateResult> {
    let LMomentSummary { m1, m2 } = sample_lmoments(s);
    if !(m2 > 0.0) || s.all_equal() {
        return Err(Error::Degenerate("second L-moment is zero"));
    }
    let ratio = m2 / m1;
    if ratio >= 1.0 {
        return Err(Error::InvalidRatio { ratio });
    }
    let alpha = -LN_2 / (-ratio).ln_1p();
    let beta = m1 / gamma(1.0 / alpha + 1.0)?;
    EstimateResult::new(Method::Lm, alpha, beta)
}

pub fn fit_mlm(s: &SortedSample) -> Result<EstimateResult> {
    let LogMomentSummary { mean_log, var_log } = log_moments(s);
    if !(var_log > 0.0) {
        return Err(Error::Degenerate("variance of log data is zero"));
    }
    let alpha = (TRIGAMMA_1 / var_log).sqrt();
    let beta = (mean_log - PSI_1 / alpha).exp();
    EstimateResult::new(Method::Mlm, alpha, beta)
}

pub fn fit_pm(s: &SortedSample, cfg: &PercentileConfig) -> Result<EstimateResult> {
    let rule = cfg.quantile_rule();
    let x_p = rule.quantile(s.values(), cfg.p());
    let x_scale = rule.quantile(s.values(), SCALE_PROBABILITY);
    let denom = x_p.ln() - x_scale.ln();
    if !(denom < 0.0) {
        return Err(Error::Degenerate(
            "empirical quantiles at p and 0.632 coincide",
        ));
    }
    let alpha = (-(-cfg.p()).ln_1p()).ln() / denom;
    EstimateResult::new(Method::Pm, alpha, x_scale)
}

/// Squared coefficient of variation of a Weibull(α, ·) law, in logs:
/// ln Γ(1 + 2/α) − 2 ln Γ(1 + 1/α) = ln(1 + CV²).
fn log_one_plus_cv2(alpha: f64) -> f64 {
    ln_gamma(1.0 + 2.0 / alpha) - 2.0 * ln_gamma(1.0 + 1.0 / alpha)
}

/// Γ(1 + 2/α)/Γ²(1 + 1/α) − 1, the population S²/X̄² at shape α.
pub fn moment_ratio(alpha: f64) -> f64 {
    log_one_plus_cv2(alpha).exp_m1()
}

pub fn fit_mm(s: &SortedSample) -> Result<EstimateResult> {
    let mean = s.mean();
    let var = s.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s.len() as f64 - 1.0);
    if !(var > 0.0) {
        return Err(Error::Degenerate("sample variance is zero"));
    }
    let target = (var / (mean * mean)).ln_1p();
    let g = |a: f64| log_one_plus_cv2(a) - target;
    let (lo, hi) = expand_positive_bracket(g, 0.05, 100.0, 10.0, 3)?;
    let root = brent(g, lo, hi, 1e-10 * lo.min(1.0))?;
    let alpha = root.x;
    let beta = mean / gamma(1.0 / alpha + 1.0)?;
    let diagnostics = Diagnostics {
        iterations: Some(root.iterations),
        residual: Some(moment_ratio(alpha) - var / (mean * mean)),
        bracket: Some((lo, hi)),
        warnings: Vec::new(),
    };
    Ok(EstimateResult::new(Method::Mm, alpha, beta)?.with_diagnostics(diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn s(v: &[f64]) -> SortedSample {
        SortedSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn lmoments_two_points() {
        let l = sample_lmoments(&s(&[1.0, 2.0]));
        assert_relative_eq!(l.m1, 1.5);
        assert_relative_eq!(l.m2, 0.5);
        let l = sample_lmoments(&s(&[4.0; 6]));
        assert_relative_eq!(l.m1, 4.0);
        assert!(l.m2.abs() < 1e-14);
    }

    #[test]
    fn lm_two_points() {
        let r = fit_lm(&s(&[1.0, 2.0])).unwrap();
        let alpha = LN_2 / (3f64.ln() - LN_2);
        assert_relative_eq!(r.shape(), alpha, max_relative = 1e-13);
        assert_relative_eq!(r.shape(), 1.709_511_291_351_455, max_relative = 1e-12);
        assert_relative_eq!(
            r.scale(),
            1.5 / gamma(1.0 / alpha + 1.0).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn lm_exponential_fixed_point() {
        // {1, 3}: m1 = 2, m2 = 1, ratio 1/2 gives α = 1
        let r = fit_lm(&s(&[1.0, 3.0])).unwrap();
        assert_relative_eq!(r.shape(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn lm_degenerate() {
        assert!(matches!(fit_lm(&s(&[2.0; 4])), Err(Error::Degenerate(_))));
    }

    #[test]
    fn mlm_unit_fixed_point() {
        // two points with log-variance π²/6: logs ±d with 2d² = π²/6
        let d = (TRIGAMMA_1 / 2.0).sqrt();
        let r = fit_mlm(&s(&[(-d).exp(), d.exp()])).unwrap();
        assert_relative_eq!(r.shape(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(r.scale(), (-PSI_1).exp(), max_relative = 1e-14);
        assert!(fit_mlm(&s(&[5.0, 5.0])).is_err());
    }

    #[test]
    fn mm_exponential_fixed_point() {
        // {1, 3 + 2√2} has S² = X̄² with the n − 1 divisor
        let b = 3.0 + 2.0 * 2f64.sqrt();
        let x = s(&[1.0, b]);
        let mean = x.mean();
        let var = x.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>();
        assert_relative_eq!(var / (mean * mean), 1.0, max_relative = 1e-14);
        let r = fit_mm(&x).unwrap();
        assert_relative_eq!(r.shape(), 1.0, max_relative = 1e-9);
        assert!(fit_mm(&s(&[2.0, 2.0])).is_err());
    }

    #[test]
    fn moment_ratio_is_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let a = 10f64.powf(-1.3 + 3.3 * k as f64 / 199.0);
            let r = moment_ratio(a);
            assert!(r < prev, "not decreasing at α = {a}");
            assert!(r > 0.0);
            prev = r;
        }
        assert_relative_eq!(moment_ratio(1.0), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn quantile_rules_match_reference() {
        // numpy.quantile([1..5], 0.3, method=...) reference values
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_relative_eq!(
            QuantileRule::Linear.quantile(&x, 0.3),
            2.2,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            QuantileRule::Hazen.quantile(&x, 0.3),
            2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            QuantileRule::Weibull.quantile(&x, 0.3),
            1.8,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            QuantileRule::MedianUnbiased.quantile(&x, 0.3),
            1.933_333_333_333_333,
            max_relative = 1e-14
        );
        assert_eq!(QuantileRule::Linear.quantile(&x, 0.0), 1.0);
        assert_eq!(QuantileRule::Weibull.quantile(&x, 0.99), 5.0);
    }

    #[test]
    fn quantile_rule_hits_plotting_points() {
        let x: Vec<f64> = (1..=9).map(|v| v as f64 * 1.5).collect();
        for rule in QuantileRule::ALL {
            for i in 2..=8 {
                let p = rule.plotting_point(i, x.len());
                assert_relative_eq!(rule.quantile(&x, p), x[i - 1], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn percentile_config_validation() {
        assert!(PercentileConfig::new(0.7, QuantileRule::Linear).is_err());
        assert!(PercentileConfig::new(0.0, QuantileRule::Linear).is_err());
        assert!(PercentileConfig::new(0.15, QuantileRule::Hazen).is_ok());
        assert_eq!(
            "median-unbiased".parse::<QuantileRule>().unwrap(),
            QuantileRule::MedianUnbiased
        );
    }

    #[test]
    fn pm_degenerate_quantiles() {
        let r = fit_pm(&s(&[3.0, 3.0, 3.0, 3.0]), &PercentileConfig::default());
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }
}
