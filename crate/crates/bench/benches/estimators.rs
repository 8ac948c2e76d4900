use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weibull_estlab::simlab::{run_experiment, Metric, SimulationConfig};
use weibull_estlab::ustat::{estimate_u, estimate_u_pairwise};
use weibull_estlab::{
    simulate_weight_medians, FitOptions, Fitter, Method, SortedSample, WeibullParams,
};

fn sample(n: usize) -> SortedSample {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    WeibullParams::new(2.5, 2.5)
        .unwrap()
        .sample(n, &mut rng)
        .unwrap()
}

fn ustat(c: &mut Criterion) {
    let mut g = c.benchmark_group("ustat");
    for n in [50, 1000, 4000] {
        let s = sample(n);
        g.bench_with_input(BenchmarkId::new("fast", n), &s, |b, s| {
            b.iter(|| estimate_u(s).unwrap())
        });
        if n <= 1000 {
            g.bench_with_input(BenchmarkId::new("pairwise", n), &s, |b, s| {
                b.iter(|| estimate_u_pairwise(s).unwrap())
            });
        }
    }
    g.finish();
}

fn methods(c: &mut Criterion) {
    let mut g = c.benchmark_group("fit");
    for n in [30, 1000] {
        let s = sample(n);
        let f = Fitter::new(FitOptions::default())
            .with_weights([simulate_weight_medians(n, 2000, 1).unwrap()]);
        for m in Method::ALL {
            // warm the regression plan cache outside the timed loop
            let _ = f.fit(m, &s);
            g.bench_with_input(BenchmarkId::new(m.name(), n), &s, |b, s| {
                b.iter(|| f.fit(m, s))
            });
        }
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let cfg = SimulationConfig {
        methods: vec![Method::Ustat, Method::Mle, Method::Lm, Method::Gls1],
        sample_sizes: vec![10, 30],
        param_levels: vec![WeibullParams::new(0.5, 2.5).unwrap()],
        replications: 1000,
        master_seed: 1,
        metric: Metric::Both,
        fit_options: FitOptions::default(),
        weight_replications: 1000,
    };
    let mut g = c.benchmark_group("simlab");
    g.sample_size(10);
    g.bench_function("grid_4x2x1000", |b| {
        b.iter(|| run_experiment(&cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, ustat, methods, simulation);
criterion_main!(benches);
