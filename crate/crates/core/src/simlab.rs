//! Monte Carlo comparison of the estimators: bias and RMSE of α̂ and β̂ over
//! a grid of sample sizes and parameter levels.
//!
//! Replication `r` of grid cell `(n, level)` draws its sample from
//! [`substream`]`(master_seed, cell, r)` and every method is fitted to that
//! same sample. Estimates are collected in replication order and summed
//! sequentially with compensated summation, so a run is bit-identical for
//! any number of worker threads.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::WeibullParams;
use crate::error::{Error, Result};
use crate::estimate::Method;
use crate::fitter::{FitOptions, Fitter};
use crate::likelihood::simulate_weight_medians;
use crate::numfmt::format_sig;
use crate::rng::substream;
use crate::sample::SortedSample;

/// Header of the metric CSV.
pub const METRIC_CSV_HEADER: &str =
    "method,n,alpha,beta,bias_alpha,bias_beta,rmse_alpha,rmse_beta,reps,failures";

pub const DEFAULT_WEIGHT_REPLICATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Metric {
    Bias,
    Rmse,
    Both,
}

impl Metric {
    fn includes_bias(self) -> bool {
        matches!(self, Metric::Bias | Metric::Both)
    }

    fn includes_rmse(self) -> bool {
        matches!(self, Metric::Rmse | Metric::Both)
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BIAS" => Ok(Metric::Bias),
            "RMSE" => Ok(Metric::Rmse),
            "BOTH" => Ok(Metric::Both),
            _ => Err(Error::Config {
                field: "metric",
                reason: format!("unknown metric `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub methods: Vec<Method>,
    pub sample_sizes: Vec<usize>,
    pub param_levels: Vec<WeibullParams>,
    pub replications: usize,
    pub master_seed: u64,
    pub metric: Metric,
    pub fit_options: FitOptions,
    /// Pivot replications used to precompute WMLE weight medians per n.
    pub weight_replications: usize,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config {
                field: "methods",
                reason: "must name at least one method".into(),
            });
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::Config {
                field: "sample_sizes",
                reason: "must list at least one sample size".into(),
            });
        }
        if let Some(n) = self.sample_sizes.iter().find(|n| **n < 2) {
            return Err(Error::Config {
                field: "sample_sizes",
                reason: format!("sample size {n} < 2"),
            });
        }
        if self.param_levels.is_empty() {
            return Err(Error::Config {
                field: "param_levels",
                reason: "must list at least one (alpha, beta) level".into(),
            });
        }
        if self.replications < 100 {
            return Err(Error::Config {
                field: "replications",
                reason: format!("{} < 100", self.replications),
            });
        }
        if self.methods.contains(&Method::Wmle) && self.weight_replications < 1000 {
            return Err(Error::Config {
                field: "weight_replications",
                reason: format!("{} < 1000", self.weight_replications),
            });
        }
        Ok(())
    }
}

/// Named experiment grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Small-sample bias grid: n ∈ {5, 10, 30}, four levels, all methods.
    Table1,
    /// Large-sample bias grid: n ∈ {1000, 4000}, six methods.
    Table3,
    /// RMSE grid: n ∈ {5, …, 200}, α ∈ {0.5, 1, 2.5} × β ∈ {0.5, 2, 5}.
    Figures,
}

impl Preset {
    pub const NAMES: [&'static str; 5] = ["table1", "table2", "table3", "table4", "figures"];

    pub fn config(self, master_seed: u64) -> SimulationConfig {
        let lv = |a: f64, b: f64| WeibullParams::new(a, b).expect("preset levels are valid");
        let four_levels = vec![lv(0.5, 0.5), lv(0.5, 2.5), lv(2.5, 0.5), lv(2.5, 2.5)];
        let (methods, sample_sizes, param_levels, replications, metric) = match self {
            Preset::Table1 => (
                Method::ALL.to_vec(),
                vec![5, 10, 30],
                four_levels,
                10_000,
                Metric::Bias,
            ),
            Preset::Table3 => (
                vec![
                    Method::Gls1,
                    Method::Wls,
                    Method::Gls2,
                    Method::Mle,
                    Method::Lm,
                    Method::Ustat,
                ],
                vec![1000, 4000],
                four_levels,
                2_000,
                Metric::Bias,
            ),
            Preset::Figures => {
                let mut levels = Vec::new();
                for a in [0.5, 1.0, 2.5] {
                    for b in [0.5, 2.0, 5.0] {
                        levels.push(lv(a, b));
                    }
                }
                (
                    Method::ALL.to_vec(),
                    vec![5, 10, 15, 30, 50, 100, 200],
                    levels,
                    10_000,
                    Metric::Rmse,
                )
            }
        };
        SimulationConfig {
            methods,
            sample_sizes,
            param_levels,
            replications,
            master_seed,
            metric,
            fit_options: FitOptions::default(),
            weight_replications: DEFAULT_WEIGHT_REPLICATIONS,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table1" | "table2" => Ok(Preset::Table1),
            "table3" | "table4" => Ok(Preset::Table3),
            "figures" | "fig1" | "fig2" | "rmse" => Ok(Preset::Figures),
            _ => Err(Error::Config {
                field: "preset",
                reason: format!("unknown preset `{s}` (expected one of {:?})", Preset::NAMES),
            }),
        }
    }
}

/// Bias and RMSE of one method at one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub method: Method,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub bias_alpha: f64,
    pub bias_beta: f64,
    pub rmse_alpha: f64,
    pub rmse_beta: f64,
    pub replications_used: usize,
    pub failures: usize,
}

/// A cell where every replication failed; it has no metric row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedCell {
    pub method: Method,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricTable {
    pub rows: Vec<MetricRow>,
    pub failed_cells: Vec<FailedCell>,
}

/// Identifies one (n, α, β) cell of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellKey {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} alpha={} beta={}", self.n, self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankTarget {
    AlphaBias,
    BetaBias,
    AlphaRmse,
    BetaRmse,
}

impl RankTarget {
    fn value(self, r: &MetricRow) -> f64 {
        match self {
            RankTarget::AlphaBias => r.bias_alpha,
            RankTarget::BetaBias => r.bias_beta,
            RankTarget::AlphaRmse => r.rmse_alpha,
            RankTarget::BetaRmse => r.rmse_beta,
        }
    }
}

impl MetricTable {
    pub fn row(&self, method: Method, cell: CellKey) -> Option<&MetricRow> {
        self.rows.iter().find(|r| {
            r.method == method && r.n == cell.n && r.alpha == cell.alpha && r.beta == cell.beta
        })
    }

    /// Writes the metric CSV with 6 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{METRIC_CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                r.method,
                r.n,
                format_sig(r.alpha, 6),
                format_sig(r.beta, 6),
                format_sig(r.bias_alpha, 6),
                format_sig(r.bias_beta, 6),
                format_sig(r.rmse_alpha, 6),
                format_sig(r.rmse_beta, 6),
                r.replications_used,
                r.failures
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

type Estimates = Vec<Option<(f64, f64)>>;

/// Runs the experiment on rayon's global pool with the standard estimators.
pub fn run_experiment(cfg: &SimulationConfig) -> Result<MetricTable> {
    run_experiment_on(cfg, None)
}

/// As [`run_experiment`] on a dedicated pool of `workers` threads.
pub fn run_experiment_on(cfg: &SimulationConfig, workers: Option<usize>) -> Result<MetricTable> {
    cfg.validate()?;
    let mut fitter = Fitter::new(cfg.fit_options);
    if cfg.methods.contains(&Method::Wmle) {
        for &n in &cfg.sample_sizes {
            fitter.insert_weights(simulate_weight_medians(
                n,
                cfg.weight_replications,
                cfg.master_seed,
            )?);
        }
    }
    run_experiment_with(cfg, workers, |m, s| {
        fitter.fit(m, s).map(|r| (r.shape(), r.scale()))
    })
}

/// Core loop with a caller-supplied estimator, used for fault injection.
pub fn run_experiment_with<F>(
    cfg: &SimulationConfig,
    workers: Option<usize>,
    fit: F,
) -> Result<MetricTable>
where
    F: Fn(Method, &SortedSample) -> Result<(f64, f64)> + Sync,
{
    cfg.validate()?;
    match workers {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Config {
                    field: "workers",
                    reason: e.to_string(),
                })?;
            pool.install(|| run_grid(cfg, &fit))
        }
        None => run_grid(cfg, &fit),
    }
}

fn run_grid<F>(cfg: &SimulationConfig, fit: &F) -> Result<MetricTable>
where
    F: Fn(Method, &SortedSample) -> Result<(f64, f64)> + Sync,
{
    let mut table = MetricTable::default();
    let levels = cfg.param_levels.len();
    for (ni, &n) in cfg.sample_sizes.iter().enumerate() {
        for (li, level) in cfg.param_levels.iter().enumerate() {
            let cell = (ni * levels + li) as u64;
            let per_rep: Vec<Estimates> = (0..cfg.replications)
                .into_par_iter()
                .map(|r| {
                    let mut rng = substream(cfg.master_seed, cell, r as u64);
                    match level.sample(n, &mut rng) {
                        Ok(s) => cfg
                            .methods
                            .iter()
                            .map(|&m| {
                                fit(m, &s)
                                    .ok()
                                    .filter(|(a, b)| a.is_finite() && b.is_finite())
                            })
                            .collect(),
                        Err(_) => vec![None; cfg.methods.len()],
                    }
                })
                .collect();
            for (mi, &method) in cfg.methods.iter().enumerate() {
                accumulate(&mut table, method, n, level, per_rep.iter().map(|e| e[mi]));
            }
        }
    }
    Ok(table)
}

fn accumulate(
    table: &mut MetricTable,
    method: Method,
    n: usize,
    level: &WeibullParams,
    estimates: impl Iterator<Item = Option<(f64, f64)>>,
) {
    let (alpha, beta) = (level.shape(), level.scale());
    let mut ea = CompensatedSum::default();
    let mut eb = CompensatedSum::default();
    let mut sa = CompensatedSum::default();
    let mut sb = CompensatedSum::default();
    let (mut ok, mut failures) = (0usize, 0usize);
    for e in estimates {
        match e {
            Some((a, b)) => {
                let (da, db) = (a - alpha, b - beta);
                ea.add(da);
                eb.add(db);
                sa.add(da * da);
                sb.add(db * db);
                ok += 1;
            }
            None => failures += 1,
        }
    }
    if ok == 0 {
        table.failed_cells.push(FailedCell {
            method,
            n,
            alpha,
            beta,
            failures,
        });
        return;
    }
    let k = ok as f64;
    let bias_alpha = ea.value() / k;
    let bias_beta = eb.value() / k;
    // RMSE ≥ |bias| holds in exact arithmetic; clamp away rounding
    let rmse_alpha = (sa.value() / k).sqrt().max(bias_alpha.abs());
    let rmse_beta = (sb.value() / k).sqrt().max(bias_beta.abs());
    table.rows.push(MetricRow {
        method,
        n,
        alpha,
        beta,
        bias_alpha,
        bias_beta,
        rmse_alpha,
        rmse_beta,
        replications_used: ok,
        failures,
    });
}

/// Methods at `cell` ordered by |value| ascending, ties by method name.
pub fn rank_methods(
    t: &MetricTable,
    cell: CellKey,
    target: RankTarget,
) -> Result<Vec<(Method, f64)>> {
    let mut ranked: Vec<(Method, f64)> = t
        .rows
        .iter()
        .filter(|r| r.n == cell.n && r.alpha == cell.alpha && r.beta == cell.beta)
        .map(|r| (r.method, target.value(r)))
        .collect();
    if ranked.is_empty() {
        return Err(Error::EmptyCell(cell.to_string()));
    }
    ranked.sort_by(|a, b| {
        a.1.abs()
            .total_cmp(&b.1.abs())
            .then_with(|| a.0.name().cmp(b.0.name()))
    });
    Ok(ranked)
}

/// Header of every plot-data CSV.
pub const PLOT_CSV_HEADER: &str = "method,n,alpha,beta,value";

/// Writes one CSV per (metric, parameter) into `dir`, named e.g.
/// `rmse_alpha.csv`. Rows are sorted by method then n; values use the
/// shortest decimal form that parses back to the same `f64`.
pub fn emit_plot_data(t: &MetricTable, metric: Metric, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut targets = Vec::new();
    if metric.includes_bias() {
        targets.push(("bias_alpha", RankTarget::AlphaBias));
        targets.push(("bias_beta", RankTarget::BetaBias));
    }
    if metric.includes_rmse() {
        targets.push(("rmse_alpha", RankTarget::AlphaRmse));
        targets.push(("rmse_beta", RankTarget::BetaRmse));
    }
    let mut rows: Vec<&MetricRow> = t.rows.iter().collect();
    rows.sort_by(|a, b| {
        a.method
            .name()
            .cmp(b.method.name())
            .then(a.n.cmp(&b.n))
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.beta.total_cmp(&b.beta))
    });
    let mut written = Vec::new();
    for (stem, target) in targets {
        let path = dir.join(format!("{stem}.csv"));
        let mut out = String::from(PLOT_CSV_HEADER);
        out.push('\n');
        for r in &rows {
            out.push_str(&format!(
                "{},{},{:?},{:?},{:?}\n",
                r.method,
                r.n,
                r.alpha,
                r.beta,
                target.value(r)
            ));
        }
        fs::write(&path, out).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(methods: Vec<Method>) -> SimulationConfig {
        SimulationConfig {
            methods,
            sample_sizes: vec![10],
            param_levels: vec![WeibullParams::new(2.0, 1.0).unwrap()],
            replications: 200,
            master_seed: 3,
            metric: Metric::Both,
            fit_options: FitOptions::default(),
            weight_replications: 1000,
        }
    }

    #[test]
    fn config_validation() {
        let mut c = tiny(vec![Method::Lm]);
        c.replications = 0;
        assert!(matches!(
            c.validate(),
            Err(Error::Config {
                field: "replications",
                ..
            })
        ));
        let mut c = tiny(vec![]);
        assert!(c.validate().is_err());
        c.methods = vec![Method::Lm];
        c.sample_sizes = vec![1];
        assert!(c.validate().is_err());
    }

    #[test]
    fn presets() {
        let t1 = Preset::Table1.config(1);
        assert_eq!(t1.sample_sizes, vec![5, 10, 30]);
        assert_eq!(t1.param_levels.len(), 4);
        assert_eq!(t1.methods.len(), 10);
        let t3: Preset = "table3".parse().unwrap();
        let c = t3.config(1);
        assert_eq!(c.sample_sizes, vec![1000, 4000]);
        assert_eq!(
            c.methods,
            vec![
                Method::Gls1,
                Method::Wls,
                Method::Gls2,
                Method::Mle,
                Method::Lm,
                Method::Ustat
            ]
        );
        assert_eq!(Preset::Figures.config(1).param_levels.len(), 9);
        assert!("table9".parse::<Preset>().is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..10 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 10.0);
    }

    #[test]
    fn single_method_rank() {
        let t = run_experiment(&tiny(vec![Method::Lm])).unwrap();
        let cell = CellKey {
            n: 10,
            alpha: 2.0,
            beta: 1.0,
        };
        let r = rank_methods(&t, cell, RankTarget::AlphaBias).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, Method::Lm);
        let missing = CellKey { n: 11, ..cell };
        assert!(matches!(
            rank_methods(&t, missing, RankTarget::AlphaBias),
            Err(Error::EmptyCell(_))
        ));
    }

    #[test]
    fn csv_header_is_exact() {
        let t = run_experiment(&tiny(vec![Method::Ustat])).unwrap();
        let csv = t.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), METRIC_CSV_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "USTAT");
        assert_eq!(row[1], "10");
        assert_eq!(row[8], "200");
    }
}
