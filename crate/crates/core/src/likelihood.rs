//! Maximum likelihood (MLE) and weighted maximum likelihood (WMLE).
//!
//! Both solve a one-dimensional equation in α on the profile likelihood.
//! Powers x^α are evaluated as exp(α(log x − log x_max)) so neither the
//! score nor the scale back-transform overflows for large α or wide data.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::distr::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::fit_mlm;
use crate::error::{Error, Result};
use crate::estimate::{Diagnostics, EstimateResult, Method};
use crate::numfmt::format_sig;
use crate::rng::{substream, WEIGHT_CELL};
use crate::roots::{brent, expand_positive_bracket, golden_min_positive, Root};
use crate::sample::SortedSample;

const ALPHA_TOL: f64 = 1e-10;

/// Medians of the WMLE weight pivots W₁ and W₂ at one sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPair {
    pub w1: f64,
    pub w2: f64,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
}

/// Solver diagnostics for a likelihood root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootDiagnostics {
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub residual: f64,
}

impl From<Root> for RootDiagnostics {
    fn from(r: Root) -> Self {
        Self {
            iterations: r.iterations,
            bracket: r.bracket,
            residual: r.residual,
        }
    }
}

/// Σ x_i^α log x_i / Σ x_i^α and log Σ x_i^α, both overflow-safe.
fn power_moments(logs: &[f64], alpha: f64) -> (f64, f64) {
    let lmax = logs[logs.len() - 1];
    let (mut sw, mut swl) = (0.0, 0.0);
    for &l in logs {
        let d = l - lmax;
        let w = (alpha * d).exp();
        sw += w;
        swl += w * d;
    }
    (swl / sw + lmax, sw.ln() + alpha * lmax)
}

/// Profile score g(α) = 1/α + mean(log x) − Σ x^α log x / Σ x^α.
///
/// Its unique root is the MLE of α; it is strictly decreasing for any
/// sample with at least two distinct values.
pub fn profile_score(s: &SortedSample, alpha: f64) -> f64 {
    let (weighted_log, _) = power_moments(s.logs(), alpha);
    1.0 / alpha + s.mean_log() - weighted_log
}

/// (Σ x^α / (n·w1))^{1/α} evaluated in logs.
fn scale_at(s: &SortedSample, alpha: f64, w1: f64) -> f64 {
    let (_, log_sum) = power_moments(s.logs(), alpha);
    ((log_sum - (s.len() as f64 * w1).ln()) / alpha).exp()
}

fn check_spread(s: &SortedSample) -> Result<f64> {
    if s.all_equal() {
        return Err(Error::Degenerate("all observations equal"));
    }
    Ok(fit_mlm(s)?.shape())
}

fn solve_decreasing<F: Fn(f64) -> f64 + Copy>(f: F, seed: f64) -> Result<Root> {
    let (lo, hi) = expand_positive_bracket(f, 0.2 * seed, 5.0 * seed, 10.0, 3)?;
    let mut root = brent(f, lo, hi, ALPHA_TOL)?;
    root.bracket = (lo, hi);
    Ok(root)
}

pub fn fit_mle(s: &SortedSample) -> Result<EstimateResult> {
    let seed = check_spread(s)?;
    let root = solve_decreasing(|a| profile_score(s, a), seed)?;
    let alpha = root.x;
    let beta = scale_at(s, alpha, 1.0);
    Ok(EstimateResult::new(Method::Mle, alpha, beta)?.with_diagnostics(diagnostics(root, s)))
}

fn diagnostics(root: Root, s: &SortedSample) -> Diagnostics {
    let mut warnings = Vec::new();
    if s.has_ties() {
        warnings.push("sample contains ties".to_string());
    }
    Diagnostics {
        iterations: Some(root.iterations),
        residual: Some(root.residual),
        bracket: Some(root.bracket),
        warnings,
    }
}

/// Inner WMLE expression w2/α + mean(log x) − Σ x^α log x / Σ x^α.
pub fn weighted_score(s: &SortedSample, alpha: f64, w2: f64) -> f64 {
    let (weighted_log, _) = power_moments(s.logs(), alpha);
    w2 / alpha + s.mean_log() - weighted_log
}

pub fn fit_wmle(s: &SortedSample, weights: &WeightPair) -> Result<EstimateResult> {
    if weights.n != s.len() {
        return Err(Error::WeightSizeMismatch {
            weights_n: weights.n,
            sample_n: s.len(),
        });
    }
    let seed = check_spread(s)?;
    let f = |a: f64| weighted_score(s, a, weights.w2);
    let root = match solve_decreasing(f, seed) {
        Ok(r) => r,
        // No sign change: minimize the squared expression instead.
        Err(Error::BracketFailure { .. }) => {
            let (lo, hi) = (0.2 * seed / 1e3, 5.0 * seed * 1e3);
            let mut r = golden_min_positive(|a| f(a).powi(2), lo, hi, ALPHA_TOL)?;
            if !r.residual.is_finite() {
                return Err(Error::Optimization("WMLE objective is not finite"));
            }
            r.residual = f(r.x);
            r
        }
        Err(e) => return Err(e),
    };
    let alpha = root.x;
    let beta = scale_at(s, alpha, weights.w1);
    Ok(EstimateResult::new(Method::Wmle, alpha, beta)?.with_diagnostics(diagnostics(root, s)))
}

/// W₁ and W₂ for one vector of standard exponential pivots.
pub fn weight_pivots(e: &[f64]) -> (f64, f64) {
    let n = e.len() as f64;
    let (mut se, mut sell, mut sl) = (0.0, 0.0, 0.0);
    for &v in e {
        let l = v.ln();
        se += v;
        sell += v * l;
        sl += l;
    }
    (se / n, sell / se - sl / n)
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Monte Carlo medians of W₁ and W₂ at sample size `n`.
///
/// Under the true model −log(1 − F(X)) is standard exponential, so both
/// pivots depend on `n` only. Replication `r` draws from substream `r` of
/// the weight cell, so results do not depend on the thread count.
pub fn simulate_weight_medians(n: usize, replications: usize, seed: u64) -> Result<WeightPair> {
    if n < 1 {
        return Err(Error::SampleTooSmall { min: 1, got: n });
    }
    if replications < 1000 {
        return Err(Error::Config {
            field: "replications",
            reason: format!("{replications} < 1000"),
        });
    }
    let cell = WEIGHT_CELL - n as u64;
    let pivots: Vec<(f64, f64)> = (0..replications)
        .into_par_iter()
        .map_init(
            || vec![0.0; n],
            |buf, r| {
                let mut rng = substream(seed, cell, r as u64);
                for e in buf.iter_mut() {
                    let u: f64 = rng.sample(Open01);
                    *e = -u.ln();
                }
                weight_pivots(buf)
            },
        )
        .collect();
    let (mut w1s, mut w2s): (Vec<f64>, Vec<f64>) = pivots.into_iter().unzip();
    Ok(WeightPair {
        w1: median(&mut w1s),
        w2: median(&mut w2s),
        n,
        replications,
        seed,
    })
}

/// Cache of weight medians keyed by sample size.
///
/// On disk: one record per line, `n w1_median w2_median replications seed`,
/// whitespace separated, medians with 12 significant digits. Lines starting
/// with `#` are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightTable {
    entries: BTreeMap<usize, WeightPair>,
}

impl WeightTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: usize) -> Option<&WeightPair> {
        self.entries.get(&n)
    }

    pub fn insert(&mut self, pair: WeightPair) {
        self.entries.insert(pair.n, pair);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeightPair> {
        self.entries.values()
    }

    /// Returns the cached pair for `n`, simulating and inserting it if absent.
    pub fn get_or_simulate(
        &mut self,
        n: usize,
        replications: usize,
        seed: u64,
    ) -> Result<WeightPair> {
        if let Some(p) = self.entries.get(&n) {
            return Ok(*p);
        }
        let p = simulate_weight_medians(n, replications, seed)?;
        self.insert(p);
        Ok(p)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut table = Self::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            }
            let int = |s: &str| s.parse::<u64>().map_err(|e| err(format!("`{s}`: {e}")));
            let real = |s: &str| s.parse::<f64>().map_err(|e| err(format!("`{s}`: {e}")));
            table.insert(WeightPair {
                n: int(fields[0])? as usize,
                w1: real(fields[1])?,
                w2: real(fields[2])?,
                replications: int(fields[3])? as usize,
                seed: int(fields[4])?,
            });
        }
        Ok(table)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for p in self.entries.values() {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                p.n,
                format_sig(p.w1, 12),
                format_sig(p.w2, 12),
                p.replications,
                p.seed
            ));
        }
        out
    }

    /// Loads `path`, treating a missing file as an empty table.
    pub fn load(path: &Path) -> Result<Self> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text, path),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.render().as_bytes())
            .map_err(|e| Error::io(path, e))
    }
}
