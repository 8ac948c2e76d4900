use weibull_estlab::simlab::{
    emit_plot_data, rank_methods, run_experiment, run_experiment_on, run_experiment_with, CellKey,
    Metric, RankTarget, SimulationConfig, METRIC_CSV_HEADER, PLOT_CSV_HEADER,
};
use weibull_estlab::{Error, FitOptions, Method, MetricTable, WeibullParams};

fn cfg(methods: Vec<Method>, sizes: Vec<usize>, reps: usize) -> SimulationConfig {
    SimulationConfig {
        methods,
        sample_sizes: sizes,
        param_levels: vec![
            WeibullParams::new(0.5, 2.5).unwrap(),
            WeibullParams::new(2.5, 0.5).unwrap(),
        ],
        replications: reps,
        master_seed: 42,
        metric: Metric::Both,
        fit_options: FitOptions::default(),
        weight_replications: 2000,
    }
}

#[test]
fn ustat_bias_at_large_n() {
    let c = SimulationConfig {
        param_levels: vec![WeibullParams::new(2.5, 2.5).unwrap()],
        ..cfg(vec![Method::Ustat], vec![1000], 2000)
    };
    let t = run_experiment(&c).unwrap();
    let b = t.rows[0].bias_alpha;
    assert!((b - 0.0036).abs() <= 0.004, "{b}");
}

#[test]
fn worker_count_does_not_change_results() {
    let c = cfg(Method::ALL.to_vec(), vec![5, 30], 300);
    let one = run_experiment_on(&c, Some(1)).unwrap();
    let eight = run_experiment_on(&c, Some(8)).unwrap();
    assert_eq!(one, eight);
    for r in &one.rows {
        assert_eq!(r.replications_used + r.failures, 300);
        assert!(r.rmse_alpha >= r.bias_alpha.abs() && r.rmse_beta >= r.bias_beta.abs());
    }
}

#[test]
fn injected_failures_are_counted() {
    let c = cfg(vec![Method::Lm, Method::Mle], vec![10], 200);
    let t = run_experiment_with(&c, Some(2), |m, s| {
        if m == Method::Mle {
            return Err(Error::Optimization("injected"));
        }
        if s.values()[0] < s.values()[1] * 0.5 {
            return Err(Error::Degenerate("injected"));
        }
        Ok((1.0, 1.0))
    })
    .unwrap();
    assert_eq!(t.failed_cells.len(), 2);
    assert!(t
        .failed_cells
        .iter()
        .all(|f| f.method == Method::Mle && f.failures == 200));
    for r in &t.rows {
        assert_eq!(r.method, Method::Lm);
        assert!(r.failures > 0 && r.replications_used > 0);
        assert_eq!(r.failures + r.replications_used, 200);
    }
}

#[test]
fn ranking_is_by_magnitude() {
    let c = cfg(vec![Method::Ustat, Method::Mle, Method::Lm], vec![10], 500);
    let t = run_experiment(&c).unwrap();
    let cell = CellKey {
        n: 10,
        alpha: 0.5,
        beta: 2.5,
    };
    let r = rank_methods(&t, cell, RankTarget::AlphaRmse).unwrap();
    assert_eq!(r.len(), 3);
    assert!(r.windows(2).all(|w| w[0].1.abs() <= w[1].1.abs()));
}

#[test]
fn plot_files_shape() {
    let c = SimulationConfig {
        metric: Metric::Rmse,
        ..cfg(Method::ALL.to_vec(), vec![5, 10], 100)
    };
    let t = run_experiment(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = emit_plot_data(&t, Metric::Rmse, dir.path()).unwrap();
    assert_eq!(files.len(), 2);
    for f in &files {
        let text = std::fs::read_to_string(f).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), PLOT_CSV_HEADER);
        let series: std::collections::BTreeSet<&str> =
            lines.map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(series.len(), 10);
    }
    let empty = emit_plot_data(&MetricTable::default(), Metric::Rmse, dir.path()).unwrap();
    for f in empty {
        assert_eq!(
            std::fs::read_to_string(f).unwrap(),
            format!("{PLOT_CSV_HEADER}\n")
        );
    }
}

#[test]
fn csv_is_byte_stable() {
    let c = cfg(vec![Method::Gls1, Method::Wls], vec![8], 150);
    let a = run_experiment(&c).unwrap().to_csv_string();
    let b = run_experiment_on(&c, Some(3)).unwrap().to_csv_string();
    assert_eq!(a, b);
    assert!(a.starts_with(METRIC_CSV_HEADER));
    assert_eq!(a.lines().count(), 1 + 4);
}
