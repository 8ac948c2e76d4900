//! TOML simulation config files.

use serde::Deserialize;
use weibull_estlab::simlab::{Metric, SimulationConfig, DEFAULT_WEIGHT_REPLICATIONS};
use weibull_estlab::{
    Error, FitOptions, Method, PercentileConfig, PlottingRule, QuantileRule, WeibullParams,
};

/// Either `"all"` or an explicit list of method names.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MethodSpec {
    Text(String),
    List(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    methods: MethodSpec,
    sample_sizes: Vec<usize>,
    /// `[shape, scale]` pairs.
    levels: Vec<[f64; 2]>,
    replications: usize,
    seed: Option<u64>,
    metric: Option<String>,
    rule: Option<String>,
    covariance_layout: Option<String>,
    pm_p: Option<f64>,
    pm_quantile: Option<String>,
    weight_replications: Option<usize>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn into_config(self, default_seed: u64) -> weibull_estlab::Result<SimulationConfig> {
        let methods = match self.methods {
            MethodSpec::Text(s) => Method::parse_list(&s)?,
            MethodSpec::List(v) => Method::parse_list(&v.join(","))?,
        };
        let mut param_levels = Vec::with_capacity(self.levels.len());
        for [a, b] in self.levels {
            param_levels.push(WeibullParams::new(a, b).map_err(|e| Error::Config {
                field: "levels",
                reason: e.to_string(),
            })?);
        }
        let mut fit_options = FitOptions::default();
        if let Some(r) = self.rule {
            fit_options.plotting_rule = r.parse::<PlottingRule>()?;
        }
        if let Some(l) = self.covariance_layout {
            fit_options.covariance_layout = l.parse()?;
        }
        if self.pm_p.is_some() || self.pm_quantile.is_some() {
            let p = self.pm_p.unwrap_or(fit_options.percentile.p());
            let q = match self.pm_quantile {
                Some(q) => q.parse::<QuantileRule>()?,
                None => fit_options.percentile.quantile_rule(),
            };
            fit_options.percentile = PercentileConfig::new(p, q)?;
        }
        let cfg = SimulationConfig {
            methods,
            sample_sizes: self.sample_sizes,
            param_levels,
            replications: self.replications,
            master_seed: self.seed.unwrap_or(default_seed),
            metric: match self.metric {
                Some(m) => m.parse::<Metric>()?,
                None => Metric::Both,
            },
            fit_options,
            weight_replications: self
                .weight_replications
                .unwrap_or(DEFAULT_WEIGHT_REPLICATIONS),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
