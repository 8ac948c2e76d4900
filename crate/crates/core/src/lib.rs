//! Estimation of the two-parameter Weibull distribution.
//!
//! Ten point estimators share one [`EstimateResult`] shape: pairwise
//! U-statistics (`USTAT`), maximum likelihood (`MLE`) and its weighted
//! variant (`WMLE`), three regression fits on the log-log probability plot
//! (`GLS1`, `GLS2`, `WLS`), and the classical L-moment, log-moment,
//! percentile and moment estimators (`LM`, `MLM`, `PM`, `MM`).
//!
//! ```
//! use weibull_estlab::{Fitter, Method, SortedSample};
//!
//! let s = SortedSample::new(vec![0.8, 1.3, 0.4, 2.2, 1.1]).unwrap();
//! let fit = Fitter::default().fit(Method::Ustat, &s).unwrap();
//! assert!(fit.shape() > 0.0 && fit.scale() > 0.0);
//! ```
//!
//! [`simlab`] runs seeded Monte Carlo comparisons whose output does not
//! depend on the number of worker threads.

// `!(x > 0.0)` is used on purpose so NaN takes the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod dataset;
pub mod distribution;
pub mod error;
pub mod estimate;
pub mod fitter;
pub mod gof;
pub mod likelihood;
pub mod numfmt;
pub mod regression;
pub mod report;
pub mod rng;
pub mod roots;
pub mod sample;
pub mod simlab;
pub mod special;
pub mod ustat;

pub use classical::{PercentileConfig, QuantileRule};
pub use dataset::{parse_dataset, Dataset, BUNDLED_LIFETIME};
pub use distribution::WeibullParams;
pub use error::{Error, Result};
pub use estimate::{Diagnostics, EstimateResult, Method};
pub use fitter::{FitOptions, Fitter};
pub use gof::{gof_report, GofReport};
pub use likelihood::{simulate_weight_medians, WeightPair, WeightTable};
pub use regression::{CovarianceLayout, PlottingRule};
pub use report::{fit_dataset, FitReport, MethodOutcome};
pub use sample::SortedSample;
pub use simlab::{MetricTable, Preset, SimulationConfig};
pub use ustat::UStatEstimate;
