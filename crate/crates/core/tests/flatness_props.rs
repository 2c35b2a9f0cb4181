use menger_core::flatness::{flatness, gap_ratio_scan, FlatnessOptions, PairStatus, BETA_FLOOR};
use menger_core::generators::{generate, GeneratorSpec, Shape};
use menger_core::pointcloud::{sample_centers, PointCloud};
use menger_core::rng::{gaussian_vec, stream};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn beta_bar_below_theta_bar(n in 2usize..=3, count in 30usize..120, seed in any::<u64>(), r in 0.5f64..2.0) {
        let mut rng = stream(seed, 0);
        let pts: Vec<Vec<f64>> = (0..count).map(|_| gaussian_vec(&mut rng, n)).collect();
        let cloud = PointCloud::from_points(1, &pts, vec![1.0; count]).unwrap();
        let opts = FlatnessOptions { seed, ..FlatnessOptions::default() };
        let f = flatness(&cloud, cloud.point(0), r, &opts).unwrap();
        // θ̄ is minimized over a disk grid, β̄ by a descent; both carry solver error
        let slack = 2.0 * r / (opts.disk_grid as f64 - 1.0) + 1e-7;
        prop_assert!(f.beta_bar <= f.theta_bar + slack, "{} > {}", f.beta_bar, f.theta_bar);
        prop_assert!(f.beta <= f.beta_bar + 1e-7);
        prop_assert!(f.theta <= 3.0 * f.theta_bar + 1e-7);
    }
}

/// An intact square side has β̄ = 0 exactly, while θ̄ still sees the sampling
/// gaps; away from that floor the ratio stays below 6.
#[test]
fn intact_square_is_fine_up_to_sampling() {
    let count = 10_000;
    let square = generate(&GeneratorSpec::new(Shape::GapSquare { gap: 0.0 }, count, 3)).unwrap();
    let spacing = 4.0 / count as f64;
    let radii = [0.02, 0.05, 0.1];
    let scan = gap_ratio_scan(&square, &radii, &sample_centers(&square, 30, 4), &FlatnessOptions::default(), BETA_FLOOR).unwrap();
    for row in &scan.rows {
        match row.status {
            PairStatus::Ratio => assert!(row.ratio <= 6.0, "{row:?}"),
            // one jittered gap is at most two spacings; θ̄ sees half of it plus rim slack
            PairStatus::Unbounded => assert!(row.theta_bar <= 4.0 * spacing / row.radius, "{row:?}"),
            PairStatus::Skipped => {}
        }
    }
}

#[test]
fn gap_square_fails_next_to_gap() {
    let gap = 0.1;
    let square = generate(&GeneratorSpec::new(Shape::GapSquare { gap }, 10_000, 3)).unwrap();
    let end = (0..square.len())
        .filter(|&i| square.point(i)[1].abs() < 1e-12 && square.point(i)[0] < 0.5)
        .max_by(|&a, &b| square.point(a)[0].total_cmp(&square.point(b)[0]))
        .unwrap();
    let scan = gap_ratio_scan(&square, &[0.03, 0.05], &[end], &FlatnessOptions::default(), BETA_FLOOR).unwrap();
    for row in &scan.rows {
        assert!(row.status == PairStatus::Unbounded || row.ratio > 10.0, "{row:?}");
    }
}
