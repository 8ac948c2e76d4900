//! Randomized invariants.

use proptest::prelude::*;
use weibull_estlab::classical::QuantileRule;
use weibull_estlab::regression::{build_positions, build_v, PlottingRule};
use weibull_estlab::rng::stream;
use weibull_estlab::ustat::{estimate_u, estimate_u_pairwise};
use weibull_estlab::{
    gof_report, simulate_weight_medians, FitOptions, Fitter, Method, SortedSample, WeibullParams,
};

fn sample_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..1e3, 3..60)
}

fn distinct(v: Vec<f64>) -> Option<SortedSample> {
    let s = SortedSample::new(v).ok()?;
    (!s.all_equal()).then_some(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_method_is_scale_equivariant(v in sample_strategy(), c in 1e-3f64..1e3) {
        let Some(s) = distinct(v) else { return Ok(()); };
        let sc = s.scaled(c).unwrap();
        let f = Fitter::new(FitOptions::default())
            .with_weights([simulate_weight_medians(s.len(), 1000, 1).unwrap()]);
        for m in Method::ALL {
            match (f.fit(m, &s), f.fit(m, &sc)) {
                (Ok(a), Ok(b)) => {
                    prop_assert!((b.shape() / a.shape() - 1.0).abs() < 1e-8, "{m}: {} vs {}", a.shape(), b.shape());
                    prop_assert!((b.scale() / (c * a.scale()) - 1.0).abs() < 1e-8, "{m}");
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{m}: {a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn ustat_fast_path_matches_pairwise(v in sample_strategy()) {
        let Some(s) = distinct(v) else { return Ok(()); };
        let (f, o) = (estimate_u(&s).unwrap(), estimate_u_pairwise(&s).unwrap());
        prop_assert!((f.u_alpha / o.u_alpha - 1.0).abs() < 1e-12);
        prop_assert!((f.u_logbeta - o.u_logbeta).abs() <= 1e-12 * o.u_logbeta.abs().max(1.0));
    }

    #[test]
    fn cvm_and_ks_bounds(
        x in prop::collection::vec(1e-4f64..1e4, 1..80),
        a in 0.1f64..10.0,
        b in 0.01f64..100.0,
    ) {
        let mut x = x;
        x.sort_by(f64::total_cmp);
        let p = WeibullParams::new(a, b).unwrap();
        let g = gof_report(&x, &p);
        let n = x.len() as f64;
        prop_assert!(g.cvm >= (1.0 / (12.0 * n)) * (1.0 - 1e-12));
        prop_assert!(g.ks >= 0.5 / n * (1.0 - 1e-12) && g.ks <= 1.0);
    }

    #[test]
    fn quantile_inverts_cdf(a in 0.1f64..20.0, b in 1e-3f64..1e3, p in 1e-6f64..0.999_999) {
        let w = WeibullParams::new(a, b).unwrap();
        let x = w.quantile(p).unwrap();
        prop_assert!((w.cdf(x).unwrap() - p).abs() < 1e-10);
    }

    #[test]
    fn plotting_positions_increase(n in 1usize..500) {
        for rule in PlottingRule::ALL {
            let pos = build_positions(n, rule);
            prop_assert!(pos.values.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(pos.values.iter().all(|&p| p > 0.0 && p < 1.0));
        }
    }

    #[test]
    fn quantile_rules_are_monotone(v in sample_strategy(), p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let s = SortedSample::new(v).unwrap();
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        for rule in [QuantileRule::Hazen, QuantileRule::Weibull, QuantileRule::Linear, QuantileRule::MedianUnbiased] {
            prop_assert!(rule.quantile(s.values(), lo) <= rule.quantile(s.values(), hi));
        }
    }
}

#[test]
fn covariance_matrix_positive_definite_up_to_200() {
    for n in 2..=200 {
        let v = build_v(n);
        assert!(v.clone().cholesky().is_some(), "n = {n}");
        assert_eq!(v.transpose(), v);
    }
}

#[test]
fn sampling_is_seed_determined() {
    let p = WeibullParams::new(1.3, 2.0).unwrap();
    let a = p.sample(500, &mut stream(4)).unwrap();
    let b = p.sample(500, &mut stream(4)).unwrap();
    let c = p.sample(500, &mut stream(5)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
