use menger_core::rng::{gaussian_vec, stream};
use menger_core::simplex::{
    curvature_k, heights, measure, menger_curvature, min_enclosing_ball, perturbation_constant, voluminous_classify,
    Curvature, Simplex, VolClassParams,
};
use menger_core::vecops::{dist, scale};
use proptest::prelude::*;

fn refs(v: &[Vec<f64>]) -> Vec<&[f64]> {
    v.iter().map(|p| p.as_slice()).collect()
}

fn tuple() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=4).prop_flat_map(|k| (Just(k), (k + 1)..=6usize, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn volume_is_height_times_face((k, n, seed) in tuple()) {
        let mut rng = stream(seed, 0);
        let v: Vec<Vec<f64>> = (0..k + 2).map(|_| gaussian_vec(&mut rng, n)).collect();
        let pts = refs(&v);
        let vol = measure(&pts);
        for (i, h) in heights(&pts).iter().enumerate() {
            let face: Vec<&[f64]> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p).collect();
            let rhs = h * measure(&face) / (k as f64 + 1.0);
            prop_assert!((vol - rhs).abs() <= 1e-7 * vol.max(1.0));
        }
    }

    #[test]
    fn curvature_scales_inversely((k, n, seed) in tuple(), a in 0.1f64..10.0) {
        let mut rng = stream(seed, 1);
        let v: Vec<Vec<f64>> = (0..k + 2).map(|_| gaussian_vec(&mut rng, n)).collect();
        let w: Vec<Vec<f64>> = v.iter().map(|p| scale(p, a)).collect();
        for c in [Curvature::K, Curvature::KPrime, Curvature::KDoublePrime] {
            let k0 = menger_curvature(&refs(&v), c).unwrap();
            let k1 = menger_curvature(&refs(&w), c).unwrap();
            prop_assert!((k1 * a - k0).abs() <= 1e-9 * k0.max(1.0));
        }
    }

    #[test]
    fn members_survive_perturbation((k, n, seed) in tuple(), shrink in 0.0f64..0.2) {
        let mut rng = stream(seed, 2);
        let v: Vec<Vec<f64>> = (0..k + 2).map(|_| gaussian_vec(&mut rng, n)).collect();
        let pts = refs(&v);
        let d = min_enclosing_ball(&pts).radius * 1.2;
        let base = measure(&pts[..k + 1]);
        let h = menger_core::simplex::dist_to_affine_hull(pts[k + 1], &pts[..k + 1]);
        let eta = base.powf(1.0 / k as f64).min(h) / d * (1.0 - shrink);
        prop_assume!(eta > 1e-3 && eta < 1.0);
        let t = Simplex::new(v.clone()).unwrap();
        let params = VolClassParams { eta, d, k };
        prop_assert!(voluminous_classify(&t, &params).unwrap().member);
        let bound = (eta * d).powi(k as i32 + 1) / ((k as f64 + 1.0) * (2.0 * d).powi(k as i32 + 2));
        prop_assert!(curvature_k(&pts) >= bound * (1.0 - 1e-9));
        let s = perturbation_constant(k, eta).unwrap().varsigma * d;
        let moved: Vec<Vec<f64>> = v
            .iter()
            .map(|p| {
                let g = gaussian_vec(&mut rng, n);
                let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                p.iter().zip(&g).map(|(a, b)| a + s * b / len).collect()
            })
            .collect();
        for (a, b) in v.iter().zip(&moved) {
            prop_assert!(dist(a, b) <= s * (1.0 + 1e-9) + 1e-15);
        }
        let t2 = Simplex::new(moved).unwrap();
        let relaxed = VolClassParams { eta: 0.5 * eta, d: 1.5 * d, k };
        prop_assert!(voluminous_classify(&t2, &relaxed).unwrap().member);
    }
}
