//! Probability-plot regression estimators GLS1, GLS2 and WLS.
//!
//! The model is log x_(i) = log β + (1/α) · log(−log(1 − F(x_(i)))), with
//! F replaced by a plotting position. The ordered responses are correlated;
//! V is the usual first-order surrogate for their covariance,
//!
//! ```text
//! v_ij = i/(n+1−i) · 1/(log(n+1−i) − log(n+1)) · 1/(log(n+1−j) − log(n+1)),  i ≤ j
//! ```
//!
//! Every design matrix depends on `n` and the plotting rule only, so each
//! fitter reduces to a fixed 2×n coefficient matrix `A` with
//! `(log β̂, 1/α̂)ᵀ = A · y`. [`RegressionPlan`] holds that matrix; building
//! it costs one Cholesky factorization of V, applying it is O(n).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{Diagnostics, EstimateResult, Method};
use crate::sample::SortedSample;

/// Surrogate for F(x_(i)) in the regression design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum PlottingRule {
    /// i/(n + 1)
    #[default]
    #[serde(rename = "i/(n+1)")]
    MeanRank,
    /// (i − 0.3)/(n + 0.4)
    #[serde(rename = "(i-0.3)/(n+0.4)")]
    MedianRank,
}

impl PlottingRule {
    pub const ALL: [PlottingRule; 2] = [PlottingRule::MeanRank, PlottingRule::MedianRank];

    pub fn name(self) -> &'static str {
        match self {
            PlottingRule::MeanRank => "i/(n+1)",
            PlottingRule::MedianRank => "(i-0.3)/(n+0.4)",
        }
    }

    fn position(self, i: usize, n: usize) -> f64 {
        let (i, n) = (i as f64, n as f64);
        match self {
            PlottingRule::MeanRank => i / (n + 1.0),
            PlottingRule::MedianRank => (i - 0.3) / (n + 0.4),
        }
    }
}

impl fmt::Display for PlottingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlottingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "i/(n+1)" | "mean-rank" => Ok(PlottingRule::MeanRank),
            "(i-0.3)/(n+0.4)" | "median-rank" => Ok(PlottingRule::MedianRank),
            _ => Err(Error::Config {
                field: "rule",
                reason: format!("unknown plotting rule `{s}`"),
            }),
        }
    }
}

/// How the v_ij entries fill the covariance matrix.
///
/// `Symmetric` mirrors the i ≤ j entries below the diagonal and is the
/// statistically meaningful layout. `UpperTriangular` stores only the i ≤ j
/// entries and leaves the lower triangle zero; it is kept because the
/// reference GLS1 figures for the bundled lifetime data come from that layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovarianceLayout {
    #[default]
    Symmetric,
    UpperTriangular,
}

impl CovarianceLayout {
    pub fn name(self) -> &'static str {
        match self {
            CovarianceLayout::Symmetric => "symmetric",
            CovarianceLayout::UpperTriangular => "upper-triangular",
        }
    }
}

impl FromStr for CovarianceLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "symmetric" => Ok(CovarianceLayout::Symmetric),
            "upper-triangular" | "upper" => Ok(CovarianceLayout::UpperTriangular),
            _ => Err(Error::Config {
                field: "covariance_layout",
                reason: format!("unknown layout `{s}`"),
            }),
        }
    }
}

/// Plotting positions F̂(x_(i)), strictly increasing inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PlottingPositions {
    pub rule: PlottingRule,
    pub values: Vec<f64>,
}

pub fn build_positions(n: usize, rule: PlottingRule) -> PlottingPositions {
    PlottingPositions {
        rule,
        values: (1..=n).map(|i| rule.position(i, n)).collect(),
    }
}

/// The symmetric n×n matrix of v_ij.
pub fn build_v(n: usize) -> DMatrix<f64> {
    build_v_with(n, CovarianceLayout::Symmetric)
}

pub fn build_v_with(n: usize, layout: CovarianceLayout) -> DMatrix<f64> {
    let np1 = (n + 1) as f64;
    let ln_np1 = np1.ln();
    let t: Vec<f64> = (1..=n).map(|i| i as f64 / (np1 - i as f64)).collect();
    let c: Vec<f64> = (1..=n)
        .map(|i| 1.0 / ((np1 - i as f64).ln() - ln_np1))
        .collect();
    DMatrix::from_fn(n, n, |r, col| {
        let (i, j) = (r.min(col), r.max(col));
        if layout == CovarianceLayout::UpperTriangular && r > col {
            0.0
        } else {
            t[i] * c[i] * c[j]
        }
    })
}

/// log(−log(1 − p)) for each plotting position.
fn link(pos: &PlottingPositions) -> Vec<f64> {
    pos.values.iter().map(|p| (-(-p).ln_1p()).ln()).collect()
}

/// Second column of the GLS2 instrument matrix Z.
fn instrument(pos: &PlottingPositions) -> Vec<f64> {
    pos.values
        .iter()
        .map(|p| {
            let q = 1.0 - p;
            let lq = (-p).ln_1p();
            (-lq).ln() - 0.5 - lq / (q * lq).powi(2)
        })
        .collect()
}

fn design(col: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(col.len(), 2, |r, c| if c == 0 { 1.0 } else { col[r] })
}

/// All matrices of the regression problem for one sample.
#[derive(Debug, Clone)]
pub struct GlsSystem {
    pub design_x: DMatrix<f64>,
    pub design_z: DMatrix<f64>,
    pub response_y: Vec<f64>,
    pub cov_v: DMatrix<f64>,
    pub weights_w: Vec<f64>,
}

impl GlsSystem {
    pub fn build(s: &SortedSample, pos: &PlottingPositions) -> Result<Self> {
        check_positions(s, pos)?;
        let cov_v = build_v(s.len());
        let weights_w = cov_v.diagonal().iter().copied().collect();
        Ok(Self {
            design_x: design(&link(pos)),
            design_z: design(&instrument(pos)),
            response_y: s.logs().to_vec(),
            cov_v,
            weights_w,
        })
    }
}

fn check_positions(s: &SortedSample, pos: &PlottingPositions) -> Result<()> {
    if pos.values.len() != s.len() {
        return Err(Error::Config {
            field: "positions",
            reason: format!(
                "{} positions for {} observations",
                pos.values.len(),
                s.len()
            ),
        });
    }
    Ok(())
}

/// Which regression estimator a plan implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegressionKind {
    Gls1,
    Gls2,
    Wls,
}

impl RegressionKind {
    pub fn method(self) -> Method {
        match self {
            RegressionKind::Gls1 => Method::Gls1,
            RegressionKind::Gls2 => Method::Gls2,
            RegressionKind::Wls => Method::Wls,
        }
    }

    pub fn from_method(m: Method) -> Option<Self> {
        match m {
            Method::Gls1 => Some(RegressionKind::Gls1),
            Method::Gls2 => Some(RegressionKind::Gls2),
            Method::Wls => Some(RegressionKind::Wls),
            _ => None,
        }
    }
}

/// Precomputed 2×n map from log data to (log β̂, 1/α̂).
#[derive(Debug, Clone)]
pub struct RegressionPlan {
    kind: RegressionKind,
    coef: DMatrix<f64>,
}

/// Ratio below which a 2×2 normal matrix counts as singular.
const SINGULAR_RCOND: f64 = 1e-14;

fn solve_2x2(m: Matrix2<f64>) -> Result<Matrix2<f64>> {
    let scale = m.abs().max();
    if !(m.determinant().abs() > SINGULAR_RCOND * scale * scale) {
        return Err(Error::Singular("2x2 normal equations"));
    }
    m.try_inverse()
        .ok_or(Error::Singular("2x2 normal equations"))
}

impl RegressionPlan {
    pub fn new(
        kind: RegressionKind,
        pos: &PlottingPositions,
        layout: CovarianceLayout,
    ) -> Result<Self> {
        let n = pos.values.len();
        if n < 2 {
            return Err(Error::SampleTooSmall { min: 2, got: n });
        }
        let x = design(&link(pos));
        // left = Dᵀ·V⁻¹ (or Dᵀ·W⁻¹) for the row design D
        let row_design = match kind {
            RegressionKind::Gls2 => design(&instrument(pos)),
            _ => x.clone(),
        };
        let left_t: DMatrix<f64> = match kind {
            RegressionKind::Wls => {
                let v = build_v(n);
                let mut d = row_design;
                for r in 0..n {
                    let w = v[(r, r)];
                    d[(r, 0)] /= w;
                    d[(r, 1)] /= w;
                }
                d
            }
            _ => match layout {
                CovarianceLayout::Symmetric => {
                    let chol = build_v(n).cholesky().ok_or(Error::Singular(
                        "covariance matrix is not positive definite",
                    ))?;
                    chol.solve(&row_design)
                }
                CovarianceLayout::UpperTriangular => {
                    // (Dᵀ V⁻¹)ᵀ = V⁻ᵀ D, and Vᵀ is lower triangular
                    let vt = build_v_with(n, layout).transpose();
                    vt.solve_lower_triangular(&row_design)
                        .ok_or(Error::Singular("triangular covariance matrix"))?
                }
            },
        };
        let normal = left_t.transpose() * &x;
        let m = Matrix2::new(
            normal[(0, 0)],
            normal[(0, 1)],
            normal[(1, 0)],
            normal[(1, 1)],
        );
        let inv = solve_2x2(m)?;
        let inv = DMatrix::from_column_slice(2, 2, inv.as_slice());
        let coef = inv * left_t.transpose();
        if coef.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular("non-finite regression coefficients"));
        }
        Ok(Self { kind, coef })
    }

    pub fn n(&self) -> usize {
        self.coef.ncols()
    }

    pub fn kind(&self) -> RegressionKind {
        self.kind
    }

    /// (intercept, slope) = (log β̂, 1/α̂) for log responses `y`.
    pub fn coefficients(&self, y: &[f64]) -> Vector2<f64> {
        let (mut b0, mut b1) = (0.0, 0.0);
        for (k, &v) in y.iter().enumerate() {
            b0 += self.coef[(0, k)] * v;
            b1 += self.coef[(1, k)] * v;
        }
        Vector2::new(b0, b1)
    }

    pub fn fit(&self, s: &SortedSample) -> Result<EstimateResult> {
        if s.len() != self.n() {
            return Err(Error::Config {
                field: "n",
                reason: format!("plan built for n = {}, sample has {}", self.n(), s.len()),
            });
        }
        if s.all_equal() {
            return Err(Error::Degenerate("all observations equal"));
        }
        let b = self.coefficients(s.logs());
        if !(b[1] > 0.0) {
            return Err(Error::Degenerate("fitted slope 1/alpha is not positive"));
        }
        let mut diagnostics = Diagnostics::default();
        if s.has_ties() {
            diagnostics
                .warnings
                .push("sample contains ties".to_string());
        }
        Ok(
            EstimateResult::new(self.kind.method(), 1.0 / b[1], b[0].exp())?
                .with_diagnostics(diagnostics),
        )
    }
}

type PlanKey = (RegressionKind, usize, PlottingRule, CovarianceLayout);

/// Plans shared across threads; concurrent readers, built on first use.
#[derive(Debug, Default)]
pub struct PlanCache {
    plans: RwLock<HashMap<PlanKey, Arc<RegressionPlan>>>,
}

impl PlanCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        kind: RegressionKind,
        n: usize,
        rule: PlottingRule,
        layout: CovarianceLayout,
    ) -> Result<Arc<RegressionPlan>> {
        let key = (kind, n, rule, layout);
        if let Some(p) = self.plans.read().expect("plan cache poisoned").get(&key) {
            return Ok(Arc::clone(p));
        }
        let plan = Arc::new(RegressionPlan::new(
            kind,
            &build_positions(n, rule),
            layout,
        )?);
        let mut w = self.plans.write().expect("plan cache poisoned");
        Ok(Arc::clone(w.entry(key).or_insert(plan)))
    }
}

fn fit_with(
    kind: RegressionKind,
    s: &SortedSample,
    pos: &PlottingPositions,
    layout: CovarianceLayout,
) -> Result<EstimateResult> {
    check_positions(s, pos)?;
    RegressionPlan::new(kind, pos, layout)?.fit(s)
}

pub fn fit_gls1(s: &SortedSample, pos: &PlottingPositions) -> Result<EstimateResult> {
    fit_with(RegressionKind::Gls1, s, pos, CovarianceLayout::Symmetric)
}

pub fn fit_gls2(s: &SortedSample, pos: &PlottingPositions) -> Result<EstimateResult> {
    fit_with(RegressionKind::Gls2, s, pos, CovarianceLayout::Symmetric)
}

pub fn fit_wls(s: &SortedSample, pos: &PlottingPositions) -> Result<EstimateResult> {
    fit_with(RegressionKind::Wls, s, pos, CovarianceLayout::Symmetric)
}

/// GLS1 or GLS2 with an explicit covariance layout.
pub fn fit_regression(
    kind: RegressionKind,
    s: &SortedSample,
    pos: &PlottingPositions,
    layout: CovarianceLayout,
) -> Result<EstimateResult> {
    fit_with(kind, s, pos, layout)
}
