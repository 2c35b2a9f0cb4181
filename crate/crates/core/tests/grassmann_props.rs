use menger_core::grassmann::{
    frame_distance, grass_distance, inverse_projection, InverseMode, ProjectMode, Subspace,
};
use menger_core::rng::{gaussian_vec, stream};
use menger_core::vecops::{dist, dot, norm, sub};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=8).prop_flat_map(|n| (1usize..=4.min(n - 1), Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metric_axioms((m, n) in dims(), seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let (u, v, w) = (Subspace::random(n, m, &mut rng), Subspace::random(n, m, &mut rng), Subspace::random(n, m, &mut rng));
        let duv = grass_distance(&u, &v).unwrap();
        prop_assert_eq!(duv, grass_distance(&v, &u).unwrap());
        prop_assert!(duv <= grass_distance(&u, &w).unwrap() + grass_distance(&w, &v).unwrap() + 1e-9);
        prop_assert!(grass_distance(&u, &u).unwrap() <= 1e-7);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&duv));
    }

    #[test]
    fn alt_metric_direction((m, n) in dims(), seed in any::<u64>()) {
        let mut rng = stream(seed, 1);
        let (u, v) = (Subspace::random(n, m, &mut rng), Subspace::random(n, m, &mut rng));
        let fd = frame_distance(&u, &v).unwrap();
        prop_assert!(grass_distance(&u, &v).unwrap() <= 2.0 * m as f64 * fd + 1e-9);
    }

    #[test]
    fn ang_dist((m, n) in dims(), seed in any::<u64>()) {
        let mut rng = stream(seed, 2);
        let (u, v) = (Subspace::random(n, m, &mut rng), Subspace::random(n, m, &mut rng));
        let x = v.embed(&gaussian_vec(&mut rng, m));
        prop_assert!(u.perp_norm(&x) <= norm(&x) * grass_distance(&v, &u).unwrap() + 1e-9);
    }

    #[test]
    fn projection_idempotent_and_pythagorean((m, n) in dims(), seed in any::<u64>()) {
        let mut rng = stream(seed, 3);
        let h = Subspace::random(n, m, &mut rng);
        let x = gaussian_vec(&mut rng, n);
        let p = h.project(&x, ProjectMode::Onto).unwrap();
        let q = h.project(&x, ProjectMode::Complement).unwrap();
        prop_assert!(dist(&h.project(&p, ProjectMode::Onto).unwrap(), &p) <= 1e-10);
        prop_assert!((dot(&p, &p) + dot(&q, &q) - dot(&x, &x)).abs() <= 1e-10 * dot(&x, &x).max(1.0));
        prop_assert!(dot(&p, &q).abs() <= 1e-10 * dot(&x, &x).max(1.0));
    }

    #[test]
    fn inverse_projection_is_two_sided((m, n) in dims(), seed in any::<u64>(), s in 0.0f64..0.3) {
        let mut rng = stream(seed, 4);
        let u = Subspace::random(n, m, &mut rng);
        let tilted: Vec<Vec<f64>> = u
            .vectors()
            .iter()
            .map(|e| e.iter().zip(gaussian_vec(&mut rng, n)).map(|(a, g)| a + s * g).collect())
            .collect();
        let v = Subspace::span(&tilted).unwrap();
        prop_assume!(grass_distance(&u, &v).unwrap() < 0.9);
        // π_U restricted to V, then its inverse
        let y = u.embed(&gaussian_vec(&mut rng, m));
        let w = inverse_projection(&u, &v, &y, InverseMode::Plane).unwrap();
        prop_assert!(v.perp_norm(&w) <= 1e-7 * norm(&w).max(1.0));
        prop_assert!(dist(&u.onto(&w), &y) <= 1e-7 * norm(&y).max(1.0));
        let z = v.embed(&gaussian_vec(&mut rng, m));
        let back = inverse_projection(&u, &v, &u.onto(&z), InverseMode::Plane).unwrap();
        prop_assert!(norm(&sub(&back, &z)) <= 1e-7 * norm(&z).max(1.0));
    }
}
