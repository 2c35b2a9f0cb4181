use menger_core::pointcloud::{ball_query, hausdorff_distance, Closure, PointCloud};
use menger_core::rng::{gaussian_vec, stream};
use menger_core::vecops::dist;
use proptest::prelude::*;

fn cloud(n: usize, count: usize, seed: u64) -> PointCloud {
    let mut rng = stream(seed, 0);
    let pts: Vec<Vec<f64>> = (0..count).map(|_| gaussian_vec(&mut rng, n)).collect();
    PointCloud::from_points(1, &pts, vec![1.0; count]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ball_query_matches_linear_scan(n in 2usize..=5, count in 1usize..400, seed in any::<u64>(), r in 0.0f64..2.0) {
        let c = cloud(n, count, seed);
        let x = gaussian_vec(&mut stream(seed, 1), n);
        let mut got = ball_query(&c, &x, r, Closure::Closed);
        got.sort_unstable();
        let tol = 1e-7;
        let strict: Vec<usize> = (0..count).filter(|&i| dist(c.point(i), &x) <= r - tol).collect();
        let loose: Vec<usize> = (0..count).filter(|&i| dist(c.point(i), &x) <= r + tol).collect();
        // points within tol of the sphere may go either way
        prop_assert!(strict.iter().all(|i| got.binary_search(i).is_ok()));
        prop_assert!(got.iter().all(|i| loose.binary_search(i).is_ok()));
        let mut open = ball_query(&c, &x, r, Closure::Open);
        open.sort_unstable();
        prop_assert!(open.iter().all(|&i| dist(c.point(i), &x) < r + tol));
    }

    #[test]
    fn hausdorff_symmetric_and_zero_on_permutation(n in 1usize..=4, a in 1usize..40, b in 1usize..40, seed in any::<u64>()) {
        let mut rng = stream(seed, 2);
        let pa: Vec<Vec<f64>> = (0..a).map(|_| gaussian_vec(&mut rng, n)).collect();
        let pb: Vec<Vec<f64>> = (0..b).map(|_| gaussian_vec(&mut rng, n)).collect();
        prop_assert_eq!(hausdorff_distance(&pa, &pb).unwrap(), hausdorff_distance(&pb, &pa).unwrap());
        let mut rev = pa.clone();
        rev.reverse();
        rev.push(pa[0].clone());
        prop_assert!(hausdorff_distance(&pa, &rev).unwrap() <= 1e-7);
        if a > 1 {
            prop_assert!(hausdorff_distance(&pa, &pa[..1]).unwrap() > 0.0 || pa.iter().all(|p| p == &pa[0]));
        }
    }

    #[test]
    fn csv_round_trip(n in 1usize..=4, count in 1usize..50, seed in any::<u64>()) {
        let c = cloud(n, count, seed);
        let back = PointCloud::from_csv(&c.to_csv()).unwrap();
        prop_assert_eq!(back.coords(), c.coords());
        prop_assert_eq!(back.weights(), c.weights());
    }
}
