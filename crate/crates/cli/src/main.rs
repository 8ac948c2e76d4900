use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use weibull_estlab::report::TOOL_VERSION;
use weibull_estlab::simlab::{emit_plot_data, run_experiment_on, Preset, SimulationConfig};
use weibull_estlab::{
    fit_dataset, gof_report, CovarianceLayout, Dataset, FitOptions, Fitter, Method,
    PercentileConfig, PlottingRule, QuantileRule, WeibullParams, WeightTable,
};

mod config;

/// Seed used whenever `--seed` is absent.
const DEFAULT_SEED: u64 = 20_240_521;
const WEIGHTS_ENV: &str = "WEIBULL_ESTLAB_WEIGHTS";
const DEFAULT_WEIGHTS_PATH: &str = "weibull-weights.txt";

const EXIT_METHOD_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "weibull-estlab",
    version,
    about = "Weibull parameter estimation and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one or more estimators to a dataset.
    Fit(FitArgs),
    /// KS and CVM distances of a dataset to given parameters.
    Gof(GofArgs),
    /// Run a Monte Carlo bias/RMSE experiment.
    Simulate(SimulateArgs),
    /// Simulate WMLE weight medians and add them to the weight table.
    Weights(WeightsArgs),
}

#[derive(Args)]
struct FitOptionArgs {
    /// Plotting positions for GLS1, GLS2 and WLS: `i/(n+1)` or `(i-0.3)/(n+0.4)`.
    #[arg(long, default_value = "i/(n+1)")]
    rule: String,
    /// Covariance layout for GLS1 and GLS2: `symmetric` or `upper-triangular`.
    #[arg(long, default_value = "symmetric")]
    layout: String,
    /// Lower percentile for PM.
    #[arg(long = "pm-p", default_value_t = 0.31)]
    pm_p: f64,
    /// Empirical quantile rule for PM: hazen, weibull, linear, median-unbiased.
    #[arg(long = "pm-quantile", default_value = "linear")]
    pm_quantile: String,
}

impl FitOptionArgs {
    fn options(&self) -> weibull_estlab::Result<FitOptions> {
        Ok(FitOptions {
            percentile: PercentileConfig::new(
                self.pm_p,
                self.pm_quantile.parse::<QuantileRule>()?,
            )?,
            plotting_rule: self.rule.parse::<PlottingRule>()?,
            covariance_layout: self.layout.parse::<CovarianceLayout>()?,
        })
    }
}

#[derive(Args)]
struct FitArgs {
    /// Data file, or `bundled:lifetime48`.
    #[arg(long)]
    data: String,
    /// Comma-separated method names, or `all`.
    #[arg(long, default_value = "all")]
    methods: String,
    /// Write the machine-readable report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for WMLE weight simulation when the table lacks this n.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Replications for WMLE weight simulation.
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    /// Weight table file (overrides the environment variable).
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Record the wall-clock time in the report.
    #[arg(long)]
    timestamp: bool,
    #[command(flatten)]
    fit: FitOptionArgs,
}

#[derive(Args)]
struct GofArgs {
    #[arg(long)]
    data: String,
    #[arg(long)]
    shape: f64,
    #[arg(long)]
    scale: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// table1, table3 or figures (table2, table4, fig1, fig2 are aliases).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// TOML experiment description.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Override the replication count.
    #[arg(long)]
    reps: Option<usize>,
    /// Restrict to these methods.
    #[arg(long)]
    methods: Option<String>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    rule: Option<String>,
    #[arg(long = "pm-p")]
    pm_p: Option<f64>,
}

#[derive(Args)]
struct WeightsArgs {
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Table file; defaults to the environment variable, then `weibull-weights.txt`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A problem with how the tool was invoked.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Gof(a) => cmd_gof(a).map(|_| true),
        Command::Simulate(a) => cmd_simulate(a).map(|_| true),
        Command::Weights(a) => cmd_weights(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_METHOD_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn weights_path(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var_os(WEIGHTS_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_WEIGHTS_PATH))
}

/// Returns whether every method succeeded.
fn cmd_fit(a: FitArgs) -> Result<bool> {
    let methods = Method::parse_list(&a.methods).map_err(usage)?;
    let options = a.fit.options().map_err(usage)?;
    let dataset = Dataset::load(&a.data)?;
    let mut fitter = Fitter::new(options);
    let n = dataset.observations.len();
    if methods.contains(&Method::Wmle) && n >= 2 {
        let table = WeightTable::load(&weights_path(a.weights))?;
        let pair = match table.get(n) {
            Some(p) => *p,
            None => weibull_estlab::simulate_weight_medians(n, a.reps, a.seed).map_err(usage)?,
        };
        fitter.insert_weights(pair);
    }
    let mut report = fit_dataset(&dataset, &methods, &fitter);
    if a.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report.timestamp = Some(format!("unix:{secs}"));
    }
    print!("{}", report.to_table());
    if let Some(out) = &a.out {
        report.save(out)?;
    }
    Ok(!report.any_failed())
}

fn write_flat(path: &Path, map: BTreeMap<String, Value>) -> Result<()> {
    let obj: serde_json::Map<String, Value> = map.into_iter().collect();
    let mut text = serde_json::to_string_pretty(&Value::Object(obj))?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_gof(a: GofArgs) -> Result<()> {
    let params = WeibullParams::new(a.shape, a.scale).map_err(usage)?;
    let dataset = Dataset::load(&a.data)?;
    let mut x = dataset.observations.clone();
    x.sort_by(f64::total_cmp);
    let g = gof_report(&x, &params);
    println!("dataset: {} (n = {})", dataset.name, g.n);
    println!("KS  {:.4}", g.ks);
    println!("CVM {:.4}", g.cvm);
    if let Some(out) = &a.out {
        let mut m = BTreeMap::new();
        m.insert("dataset".to_string(), Value::from(dataset.name));
        m.insert("n".into(), g.n.into());
        m.insert("shape".into(), a.shape.into());
        m.insert("scale".into(), a.scale.into());
        m.insert("ks".into(), g.ks.into());
        m.insert("cvm".into(), g.cvm.into());
        m.insert("tool_version".into(), TOOL_VERSION.into());
        write_flat(out, m)?;
    }
    Ok(())
}

fn simulation_config(a: &SimulateArgs) -> Result<SimulationConfig> {
    let seed = a.seed.unwrap_or(DEFAULT_SEED);
    let mut cfg = match (&a.preset, &a.config) {
        (Some(p), None) => p.parse::<Preset>().map_err(usage)?.config(seed),
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = config::ConfigFile::parse(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mut cfg = file.into_config(seed).map_err(usage)?;
            if let Some(s) = a.seed {
                cfg.master_seed = s;
            }
            cfg
        }
        _ => return Err(usage("simulate needs exactly one of --preset or --config")),
    };
    if let Some(r) = a.reps {
        cfg.replications = r;
    }
    if let Some(m) = &a.methods {
        cfg.methods = Method::parse_list(m).map_err(usage)?;
    }
    if let Some(r) = &a.rule {
        cfg.fit_options.plotting_rule = r.parse().map_err(usage)?;
    }
    if let Some(p) = a.pm_p {
        cfg.fit_options.percentile =
            PercentileConfig::new(p, cfg.fit_options.percentile.quantile_rule()).map_err(usage)?;
    }
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let cfg = simulation_config(&a)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let start = Instant::now();
    let table = run_experiment_on(&cfg, a.workers)?;
    let wall = start.elapsed().as_secs_f64();

    let csv_path = a.out.join("metrics.csv");
    let mut f =
        fs::File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    table.write_csv(&mut f)?;
    f.flush()?;
    emit_plot_data(&table, cfg.metric, &a.out)?;

    let mut m = BTreeMap::new();
    m.insert("tool_version".to_string(), Value::from(TOOL_VERSION));
    m.insert("seed".into(), cfg.master_seed.into());
    m.insert(
        "config.preset".into(),
        a.preset.clone().unwrap_or_default().into(),
    );
    m.insert(
        "config.methods".into(),
        join(cfg.methods.iter().map(|m| m.name())).into(),
    );
    m.insert("config.sample_sizes".into(), join(&cfg.sample_sizes).into());
    m.insert(
        "config.levels".into(),
        join(
            cfg.param_levels
                .iter()
                .map(|p| format!("{:?}:{:?}", p.shape(), p.scale())),
        )
        .into(),
    );
    m.insert("config.replications".into(), cfg.replications.into());
    m.insert(
        "config.metric".into(),
        format!("{:?}", cfg.metric).to_lowercase().into(),
    );
    m.insert(
        "config.rule".into(),
        cfg.fit_options.plotting_rule.name().into(),
    );
    m.insert(
        "config.covariance_layout".into(),
        cfg.fit_options.covariance_layout.name().into(),
    );
    m.insert("config.pm_p".into(), cfg.fit_options.percentile.p().into());
    m.insert(
        "config.pm_quantile".into(),
        cfg.fit_options.percentile.quantile_rule().name().into(),
    );
    m.insert(
        "config.weight_replications".into(),
        cfg.weight_replications.into(),
    );
    m.insert("rows".into(), table.rows.len().into());
    m.insert("failed_cells".into(), table.failed_cells.len().into());
    m.insert("wall_time_seconds".into(), wall.into());
    write_flat(&a.out.join("manifest.json"), m)?;

    println!(
        "{} rows, {} failed cells in {wall:.1}s -> {}",
        table.rows.len(),
        table.failed_cells.len(),
        a.out.display()
    );
    for c in &table.failed_cells {
        println!(
            "  every replication failed: {} n={} alpha={} beta={}",
            c.method, c.n, c.alpha, c.beta
        );
    }
    Ok(())
}

fn cmd_weights(a: WeightsArgs) -> Result<()> {
    if let Some(n) = a.n.iter().find(|&&n| n < 2) {
        return Err(usage(format!("sample size {n} < 2")));
    }
    let path = weights_path(a.out);
    let mut table = WeightTable::load(&path)?;
    for &n in &a.n {
        let p = weibull_estlab::simulate_weight_medians(n, a.reps, a.seed).map_err(usage)?;
        table.insert(p);
        println!("n = {n}: w1 = {:.6}, w2 = {:.6}", p.w1, p.w2);
    }
    table.save(&path)?;
    println!("{} records in {}", table.len(), path.display());
    Ok(())
}
