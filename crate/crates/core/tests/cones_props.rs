use menger_core::cones::{cone_membership, cone_path, min_cone_ratio, sphere_flatten, two_cones_check, ConeSpec};
use menger_core::error::Error;
use menger_core::grassmann::Subspace;
use menger_core::rng::{gaussian_vec, stream, unit_vec};
use menger_core::vecops::norm;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6).prop_flat_map(|n| (1usize..n, Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn complement_cone_is_closure_of_complement((m, n) in dims(), seed in any::<u64>(), delta in 0.05f64..0.95) {
        let mut rng = stream(seed, 0);
        let h = Subspace::random(n, m, &mut rng);
        let x = gaussian_vec(&mut rng, n);
        let outer = ConeSpec::new(h.complement(), (1.0 - delta * delta).sqrt()).unwrap();
        let r = norm(&x);
        let qh = h.perp_norm(&x);
        // away from the common boundary |Q_H x| = δ|x|
        prop_assume!((qh - delta * r).abs() > 1e-9 * r);
        let in_interior = qh > delta * r;
        prop_assert_eq!(cone_membership(&outer, &x).unwrap(), !in_interior);
    }

    #[test]
    fn cone_path_stays_in_cone((m, n) in dims(), seed in any::<u64>(), delta in 0.1f64..0.6) {
        let mut rng = stream(seed, 1);
        let h = Subspace::random(n, m, &mut rng);
        let hp = h.complement();
        let tilted: Vec<Vec<f64>> = hp
            .vectors()
            .iter()
            .map(|e| e.iter().zip(gaussian_vec(&mut rng, n)).map(|(a, g)| a + 0.3 * g).collect())
            .collect();
        let v = Subspace::span(&tilted).unwrap();
        prop_assume!(min_cone_ratio(&v, &h) >= delta);
        let path = cone_path(&v, &h, delta, 32).unwrap();
        for step in &path {
            prop_assert!(min_cone_ratio(step, &h) >= delta - 1e-9);
            for _ in 0..100 {
                let u = step.embed(&unit_vec(&mut rng, step.dim()));
                prop_assert!(h.perp_norm(&u) >= delta - 1e-9);
            }
        }
    }

    #[test]
    fn sphere_flatten_ratio_monotone((m, n) in dims(), seed in any::<u64>(), t in 0.0f64..=1.0, r in 0.1f64..2.0) {
        let mut rng = stream(seed, 2);
        let h = Subspace::random(n, m, &mut rng);
        let x = h.embed(&gaussian_vec(&mut rng, m));
        let delta = 0.5 * r / (r * r + norm(&x).powi(2)).sqrt();
        let f = sphere_flatten(&x, r, &h, delta, t, 64, seed).unwrap();
        prop_assert!(f.ratio_monotone);
    }

    // the inclusion needs π_{H₁}(L) = H₁ for the common line L, so lines only
    #[test]
    fn two_cones_no_violations(n in 2usize..=6, seed in any::<u64>(), alpha in 0.01f64..0.3, beta in 0.01f64..0.3) {
        let mut rng = stream(seed, 3);
        let h0 = Subspace::random(n, 1, &mut rng);
        let tilted: Vec<Vec<f64>> = h0
            .vectors()
            .iter()
            .map(|e| e.iter().zip(gaussian_vec(&mut rng, n)).map(|(a, g)| a + 0.05 * g).collect())
            .collect();
        let h1 = Subspace::span(&tilted).unwrap();
        match two_cones_check(&h0, &h1, alpha, beta, 0.05, 2000, seed, None) {
            Ok(rep) => prop_assert_eq!(rep.violations, 0),
            Err(Error::HypothesisViolated(_) | Error::IntersectionNotWitnessed) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn two_cones_fails_for_planes() {
    // two planes in R³ share a line, so the hypothesis holds however far apart they are
    let h0 = Subspace::coordinate(3, &[0, 1]);
    let h1 = Subspace::coordinate(3, &[0, 2]);
    let rep = two_cones_check(&h0, &h1, 0.1, 0.1, 0.05, 10_000, 7, Some(&[1.0, 0.0, 0.0])).unwrap();
    assert!(rep.violations > 0);
}
