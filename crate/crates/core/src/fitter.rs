//! Dispatch from a [`Method`] tag to its estimator.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classical::{fit_lm, fit_mlm, fit_mm, fit_pm, PercentileConfig};
use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Method};
use crate::likelihood::{fit_mle, fit_wmle, WeightPair};
use crate::regression::{CovarianceLayout, PlanCache, PlottingRule, RegressionKind};
use crate::sample::SortedSample;
use crate::ustat::fit_ustat;

/// Settings shared by every fit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FitOptions {
    pub percentile: PercentileConfig,
    pub plotting_rule: PlottingRule,
    pub covariance_layout: CovarianceLayout,
}

/// Fits any of the ten methods, caching regression plans per sample size.
///
/// WMLE needs weight medians for the sample size being fitted; supply them
/// with [`Fitter::with_weights`] or [`Fitter::insert_weights`].
#[derive(Debug, Default)]
pub struct Fitter {
    options: FitOptions,
    plans: PlanCache,
    weights: HashMap<usize, WeightPair>,
}

impl Fitter {
    pub fn new(options: FitOptions) -> Self {
        Self {
            options,
            plans: PlanCache::new(),
            weights: HashMap::new(),
        }
    }

    pub fn with_weights(mut self, pairs: impl IntoIterator<Item = WeightPair>) -> Self {
        for p in pairs {
            self.insert_weights(p);
        }
        self
    }

    pub fn insert_weights(&mut self, pair: WeightPair) {
        self.weights.insert(pair.n, pair);
    }

    pub fn options(&self) -> &FitOptions {
        &self.options
    }

    pub fn fit(&self, method: Method, s: &SortedSample) -> Result<EstimateResult> {
        match method {
            Method::Ustat => fit_ustat(s),
            Method::Mle => fit_mle(s),
            Method::Wmle => {
                let w = self
                    .weights
                    .get(&s.len())
                    .ok_or(Error::MissingWeights { n: s.len() })?;
                fit_wmle(s, w)
            }
            Method::Gls1 | Method::Gls2 | Method::Wls => {
                let kind = RegressionKind::from_method(method).expect("regression method");
                // WLS is diagonal; the layout only affects the full-matrix fits
                let layout = if kind == RegressionKind::Wls {
                    CovarianceLayout::Symmetric
                } else {
                    self.options.covariance_layout
                };
                self.plans
                    .get(kind, s.len(), self.options.plotting_rule, layout)?
                    .fit(s)
            }
            Method::Lm => fit_lm(s),
            Method::Mlm => fit_mlm(s),
            Method::Pm => fit_pm(s, &self.options.percentile),
            Method::Mm => fit_mm(s),
        }
    }
}
