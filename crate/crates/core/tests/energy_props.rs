use menger_core::energy::{constants_ledger, energy_brute, energy_mc, BRUTE_BUDGET};
use menger_core::flatness::{beta_number, FlatnessOptions};
use menger_core::generators::{generate, GeneratorSpec, Shape};
use menger_core::pointcloud::{sample_centers, PointCloud};
use proptest::prelude::*;

fn three_points() -> PointCloud {
    PointCloud::from_points(1, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0; 3]).unwrap()
}

#[test]
fn monte_carlo_is_unbiased() {
    let cloud = three_points();
    let exact = energy_brute(&cloud, 2.0, None, BRUTE_BUDGET).unwrap().value;
    let runs: Vec<f64> = (0..400).map(|s| energy_mc(&cloud, 2.0, 20_000, s, 500).unwrap().value).collect();
    let mean = runs.iter().sum::<f64>() / runs.len() as f64;
    let var = runs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (runs.len() - 1) as f64;
    let se = (var / runs.len() as f64).sqrt();
    assert!((mean - exact).abs() <= 2.0 * se, "mean {mean} exact {exact} se {se}");
}

#[test]
fn beta_estimate_holds_on_sphere() {
    let (m, p) = (2usize, 16.0);
    let sphere = generate(&GeneratorSpec::new(Shape::Sphere { m, n: 3, radius: 1.0 }, 4000, 5)).unwrap();
    let e = energy_mc(&sphere, p, 50_000, 5, 500).unwrap().value;
    let l = constants_ledger(e, m, p, 0.25).unwrap();
    let opts = FlatnessOptions::default();
    for c in sample_centers(&sphere, 10, 6) {
        for r in [0.2, 0.4, 0.8] {
            let (b, _, _) = beta_number(&sphere, sphere.point(c), r, &opts).unwrap();
            assert!(b <= l.c_beta_est * e.powf(1.0 / l.kappa) * r.powf(l.tau), "beta {b} at r {r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ledger_monotone(m in 1usize..=3, extra in 0.5f64..40.0, e in 1e-3f64..1e3, factor in 1.1f64..100.0) {
        let p = (m * (m + 2)) as f64 + extra;
        let a = constants_ledger(e, m, p, 0.25).unwrap();
        let b = constants_ledger(e * factor, m, p, 0.25).unwrap();
        prop_assert!(b.log10_r_uar < a.log10_r_uar);
        let q = constants_ledger(e, m, p + 1.0, 0.25).unwrap();
        prop_assert!(q.tau > a.tau);
        prop_assert!(q.alpha > a.alpha);
    }

    #[test]
    fn energy_scaling(s in 0.2f64..5.0, p in 3.5f64..8.0) {
        let cloud = three_points();
        let base = energy_brute(&cloud, p, None, BRUTE_BUDGET).unwrap().value;
        let scaled = energy_brute(&cloud.scaled(s).unwrap(), p, None, BRUTE_BUDGET).unwrap().value;
        prop_assert!((scaled - s.powf(3.0 - p) * base).abs() <= 1e-9 * scaled.abs().max(1e-300));
    }
}
