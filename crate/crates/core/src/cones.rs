//! Cones C(δ,H), conical caps, the two-cones inclusion, sphere flattening and
//! the cone-constrained rotation path in the Grassmannian.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::Subspace;
use crate::rng::{stream, unit_vec};
use crate::tol::{TOL_GEOM, TOL_LINALG};
use crate::vecops::{dot, norm};

/// C(δ,H) = {x : |Q_H x| ≥ δ|x|}, optionally intersected with the open shell r < |x| < R.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pub h: Subspace,
    pub delta: f64,
    pub shell: Option<(f64, f64)>,
}

impl ConeSpec {
    pub fn new(h: Subspace, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidInput(format!("delta = {delta} not in (0,1)")));
        }
        Ok(ConeSpec { h, delta, shell: None })
    }

    pub fn cap(h: Subspace, delta: f64, r: f64, big_r: f64) -> Result<Self> {
        if !(r >= 0.0 && big_r > r) {
            return Err(Error::InvalidInput(format!("shell radii {r}, {big_r} invalid")));
        }
        let mut c = ConeSpec::new(h, delta)?;
        c.shell = Some((r, big_r));
        Ok(c)
    }
}

pub fn cone_membership(spec: &ConeSpec, x: &[f64]) -> Result<bool> {
    if x.len() != spec.h.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: spec.h.ambient_dim(), got: x.len() });
    }
    let r = norm(x);
    if let Some((lo, hi)) = spec.shell {
        if !(r > lo && r < hi) {
            return Ok(false);
        }
    }
    Ok(spec.h.perp_norm(x) >= spec.delta * r)
}

/// |Q_H x| / |x|, taken as 1 at the origin.
pub fn cone_ratio(h: &Subspace, x: &[f64]) -> f64 {
    let r = norm(x);
    if r == 0.0 {
        1.0
    } else {
        h.perp_norm(x) / r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    /// (α+β)/√(1−β²); the left cone uses this plus ε.
    pub threshold: f64,
    pub witness_ray: Vec<f64>,
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub special_case_applies: bool,
    pub special_case_samples: usize,
    pub special_case_violations: usize,
}

fn common_ray_ok(h0: &Subspace, h1: &Subspace, alpha: f64, beta: f64, y: &[f64]) -> bool {
    let r = norm(y);
    r > 0.0 && h0.perp_norm(y) <= alpha * r + TOL_LINALG && h1.perp_norm(y) <= beta * r + TOL_LINALG
}

/// Top right singular vector of `aᵀb`, mapped into the span of `b`.
fn best_aligned(a: &Subspace, b: &Subspace) -> Option<Vec<f64>> {
    if a.dim() == 0 || b.dim() == 0 {
        return None;
    }
    let g = a.frame().transpose() * b.frame();
    let svd = g.svd(false, true);
    let vt = svd.v_t?;
    let (imax, _) = svd.singular_values.argmax();
    let r: Vec<f64> = vt.row(imax).iter().copied().collect();
    Some(b.embed(&r))
}

fn find_common_ray(h0: &Subspace, h1: &Subspace, alpha: f64, beta: f64, budget: usize, seed: u64) -> Option<Vec<f64>> {
    for cand in [best_aligned(h0, h1), best_aligned(h1, h0)].into_iter().flatten() {
        if common_ray_ok(h0, h1, alpha, beta, &cand) {
            return Some(cand);
        }
    }
    let n = h0.ambient_dim();
    let mut rng = stream(seed, u64::MAX);
    for _ in 0..budget {
        let y = unit_vec(&mut rng, n);
        if common_ray_ok(h0, h1, alpha, beta, &y) {
            return Some(y);
        }
        // bias the search toward H0 ∩ H1 directions
        let z = h0.onto(&h1.onto(&y));
        if common_ray_ok(h0, h1, alpha, beta, &z) {
            return Some(z);
        }
    }
    None
}

/// Sampled test of C((α+β)/√(1−β²) + ε, H0) ⊆ C(ε, H1).
#[allow(clippy::too_many_arguments)]
pub fn two_cones_check(
    h0: &Subspace,
    h1: &Subspace,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    samples: usize,
    seed: u64,
    common_ray: Option<&[f64]>,
) -> Result<InclusionReport> {
    if h0.ambient_dim() != h1.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: h0.ambient_dim(), got: h1.ambient_dim() });
    }
    if !(alpha > 0.0 && beta > 0.0 && beta < 1.0) {
        return Err(Error::HypothesisViolated("alpha, beta must be positive and beta < 1".into()));
    }
    let sb = (1.0 - beta * beta).sqrt();
    if alpha + beta >= sb {
        return Err(Error::HypothesisViolated(format!(
            "alpha + beta = {} >= sqrt(1 - beta^2) = {sb}",
            alpha + beta
        )));
    }
    let witness = match common_ray {
        Some(y) if common_ray_ok(h0, h1, alpha, beta, y) => y.to_vec(),
        Some(_) => return Err(Error::IntersectionNotWitnessed),
        None => find_common_ray(h0, h1, alpha, beta, samples.max(1000), seed)
            .ok_or(Error::IntersectionNotWitnessed)?,
    };
    let threshold = (alpha + beta) / sb;
    let s0 = threshold + epsilon;
    let c0 = h0.complement();

    const CHUNK: usize = 4096;
    let chunks = samples.div_ceil(CHUNK);
    let (samples_done, violations, worst) = if s0 >= 1.0 || c0.dim() == 0 {
        (0, 0, f64::INFINITY)
    } else {
        let phi0 = s0.asin();
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = stream(seed, c as u64);
                let count = CHUNK.min(samples - c * CHUNK);
                let mut viol = 0usize;
                let mut worst = f64::INFINITY;
                for _ in 0..count {
                    let phi = phi0 + (std::f64::consts::FRAC_PI_2 - phi0) * rand::Rng::random::<f64>(&mut rng);
                    let b = c0.embed(&unit_vec(&mut rng, c0.dim()));
                    let x: Vec<f64> = if h0.dim() > 0 {
                        let a = h0.embed(&unit_vec(&mut rng, h0.dim()));
                        a.iter().zip(&b).map(|(ai, bi)| phi.cos() * ai + phi.sin() * bi).collect()
                    } else {
                        b
                    };
                    let margin = h1.perp_norm(&x) - epsilon * norm(&x);
                    worst = worst.min(margin);
                    if margin < -TOL_GEOM {
                        viol += 1;
                    }
                }
                (count, viol, worst)
            })
            .reduce(|| (0, 0, f64::INFINITY), |a, b| (a.0 + b.0, a.1 + b.1, a.2.min(b.2)))
    };

    let special = alpha + beta <= (1.0 - beta) * sb;
    let mut sc_samples = 0;
    let mut sc_viol = 0;
    if special && c0.dim() > 0 {
        let mut rng = stream(seed, u64::MAX - 1);
        sc_samples = samples.min(10_000);
        for _ in 0..sc_samples {
            let x = c0.embed(&unit_vec(&mut rng, c0.dim()));
            let r = norm(&x);
            if h0.perp_norm(&x) < alpha * r - TOL_GEOM || h1.perp_norm(&x) < beta * r - TOL_GEOM {
                sc_viol += 1;
            }
        }
    }
    Ok(InclusionReport {
        threshold,
        witness_ray: witness,
        samples: samples_done,
        violations,
        worst_margin: worst,
        special_case_applies: special,
        special_case_samples: sc_samples,
        special_case_violations: sc_viol,
    })
}

/// min over unit v ∈ V of |Q_H v|.
pub fn min_cone_ratio(v: &Subspace, h: &Subspace) -> f64 {
    if h.dim() == 0 || v.dim() == 0 {
        return 1.0;
    }
    let s = (h.frame().transpose() * v.frame()).singular_values().max().min(1.0);
    (1.0 - s * s).max(0.0).sqrt()
}

/// Singular values and the full set of right singular vectors of Hᵀ·B_V.
fn right_singular(h: &Subspace, v: &Subspace) -> (Vec<f64>, DMatrix<f64>) {
    let k = v.dim();
    let g = h.frame().transpose() * v.frame();
    let rows = g.nrows().max(k);
    let mut padded = DMatrix::zeros(rows, k);
    padded.view_mut((0, 0), (g.nrows(), k)).copy_from(&g);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested");
    (svd.singular_values.iter().copied().collect(), vt.transpose())
}

/// dim(V ∩ H^⊥), by counting vanishing singular values of Hᵀ·B_V.
pub fn intersection_dim(v: &Subspace, h: &Subspace, tol: f64) -> usize {
    if h.dim() == 0 {
        return v.dim();
    }
    right_singular(h, v).0.iter().filter(|&&s| s <= tol).count()
}

/// Discrete rotation path from V ∈ G(n, n−m) to H^⊥ inside the set of
/// subspaces whose unit vectors all lie in C(δ,H).
pub fn cone_path(v: &Subspace, h: &Subspace, delta: f64, steps_per_rotation: usize) -> Result<Vec<Subspace>> {
    let n = h.ambient_dim();
    if v.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.ambient_dim() });
    }
    if v.dim() + h.dim() != n {
        return Err(Error::DimensionMismatch { expected: n - h.dim(), got: v.dim() });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta = {delta} not in (0,1)")));
    }
    let steps = steps_per_rotation.max(1);
    let ratio = min_cone_ratio(v, h);
    if ratio < delta - TOL_GEOM {
        return Err(Error::NotInCone { min_ratio: ratio, delta });
    }
    let mut path = vec![v.clone()];
    let mut current = v.clone();
    let max_stages = v.dim() + 1;
    for _stage in 0..max_stages {
        let (sv, r) = right_singular(h, &current);
        // smallest nonvanishing singular value maximizes |Q_H| on the non-intersecting part
        let pick = sv
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > TOL_LINALG)
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i);
        let Some(i1) = pick else {
            return Ok(path);
        };
        let basis = current.frame() * &r;
        let v1: Vec<f64> = basis.column(i1).iter().copied().collect();
        let h1 = h.perp(&v1);
        let hn = norm(&h1);
        let alpha = (hn.min(1.0)).acos();
        let mut u1: Vec<f64> = h1.iter().zip(&v1).map(|(a, b)| a - dot(&h1, &v1) * b).collect();
        let un = norm(&u1);
        if un <= TOL_LINALG {
            return Err(Error::MaxStagesExceeded(path.len()));
        }
        u1.iter_mut().for_each(|x| *x /= un);
        for s in 1..=steps {
            let a = alpha * s as f64 / steps as f64;
            let mut frame = basis.clone();
            for row in 0..n {
                frame[(row, i1)] = a.cos() * v1[row] + a.sin() * u1[row];
            }
            path.push(Subspace::from_frame(frame)?);
        }
        current = path.last().expect("nonempty").clone();
    }
    if intersection_dim(&current, h, 1e3 * TOL_LINALG) == current.dim() {
        Ok(path)
    } else {
        Err(Error::MaxStagesExceeded(max_stages))
    }
}

/// F(x + r y, t) = (1−t)x + y √(r² + |x|² − |(1−t)x|²) for x ∈ H, y a unit vector in H^⊥.
pub fn flatten_point(x: &[f64], r: f64, y: &[f64], t: f64) -> Vec<f64> {
    let x2 = dot(x, x);
    let s = (r * r + x2 - (1.0 - t) * (1.0 - t) * x2).max(0.0).sqrt();
    x.iter().zip(y).map(|(xi, yi)| (1.0 - t) * xi + s * yi).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FlattenResult {
    pub t: f64,
    pub center_image: Vec<f64>,
    pub radius_image: f64,
    pub sources: Vec<Vec<f64>>,
    pub images: Vec<Vec<f64>>,
    /// Every sample satisfies ratio(F) ≥ ratio(z) ≥ δ.
    pub ratio_monotone: bool,
    pub min_ratio_gain: f64,
}

/// Samples S(x,r) ∩ (x + H^⊥) and maps it through the flattening isotopy at time t.
#[allow(clippy::too_many_arguments)]
pub fn sphere_flatten(
    x: &[f64],
    r: f64,
    h: &Subspace,
    delta: f64,
    t: f64,
    samples: usize,
    seed: u64,
) -> Result<FlattenResult> {
    let n = h.ambient_dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    if !(r > 0.0) || !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("need r > 0 and t in [0,1], got r = {r}, t = {t}")));
    }
    if !h.contains(x, TOL_GEOM) {
        return Err(Error::HypothesisViolated("center is not in H".into()));
    }
    let start_ratio = r / (r * r + dot(x, x)).sqrt();
    if start_ratio < delta {
        return Err(Error::HypothesisViolated(format!(
            "sphere leaves the cone: ratio {start_ratio} < delta {delta}"
        )));
    }
    let hp = h.complement();
    if hp.dim() == 0 {
        return Err(Error::HypothesisViolated("H has no orthogonal complement".into()));
    }
    let mut rng = stream(seed, 0);
    let mut sources = Vec::with_capacity(samples);
    let mut images = Vec::with_capacity(samples);
    let mut monotone = true;
    let mut gain = f64::INFINITY;
    for _ in 0..samples {
        let y = hp.embed(&unit_vec(&mut rng, hp.dim()));
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + r * b).collect();
        let f = flatten_point(x, r, &y, t);
        let (rz, rf) = (cone_ratio(h, &z), cone_ratio(h, &f));
        gain = gain.min(rf - rz);
        if rf < rz - TOL_LINALG || rz < delta - TOL_LINALG {
            monotone = false;
        }
        sources.push(z);
        images.push(f);
    }
    let center_image: Vec<f64> = x.iter().map(|v| (1.0 - t) * v).collect();
    let x2 = dot(x, x);
    Ok(FlattenResult {
        t,
        center_image,
        radius_image: (r * r + x2 - (1.0 - t) * (1.0 - t) * x2).sqrt(),
        sources,
        images,
        ratio_monotone: monotone,
        min_ratio_gain: gain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let h = Subspace::coordinate(2, &[0]);
        let c = ConeSpec::new(h.clone(), 0.6).unwrap();
        assert!(cone_membership(&c, &[0.8, 0.6]).unwrap());
        assert!(cone_membership(&c, &[0.0, 2.0]).unwrap());
        assert!(!cone_membership(&c, &[1.0, 0.0]).unwrap());
        let cap = ConeSpec::cap(h, 0.6, 1.0, 2.0).unwrap();
        assert!(!cone_membership(&cap, &[0.0, 1.0]).unwrap());
        assert!(cone_membership(&cap, &[0.0, 1.5]).unwrap());
    }

    #[test]
    fn two_cones_threshold() {
        let h = Subspace::coordinate(3, &[0]);
        let rep = two_cones_check(&h, &h, 0.1, 0.1, 0.01, 2000, 1, None).unwrap();
        assert!((rep.threshold - 0.2 / 0.99f64.sqrt()).abs() < 1e-12);
        assert!((rep.threshold - 0.20101).abs() < 1e-5);
        assert!(rep.special_case_applies);
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.special_case_violations, 0);
        assert!(two_cones_check(&h, &h, 0.5, 0.6, 0.01, 10, 1, None).is_err());
    }

    #[test]
    fn path_trivial_and_rotating() {
        let h = Subspace::coordinate(3, &[0]);
        let hp = h.complement();
        assert_eq!(cone_path(&hp, &h, 0.5, 8).unwrap().len(), 1);
        let th: f64 = 0.3;
        let v = Subspace::span(&[
            vec![0.0, 1.0, 0.0],
            vec![th.sin(), 0.0, th.cos()],
        ])
        .unwrap();
        let path = cone_path(&v, &h, 0.9, 16).unwrap();
        assert_eq!(path.len(), 17);
        let last = path.last().unwrap();
        assert!(crate::grassmann::grass_distance(last, &hp).unwrap() < 1e-9);
        for s in &path {
            assert!(min_cone_ratio(s, &h) >= 0.9 - 1e-9);
        }
        let far = Subspace::span(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(cone_path(&far, &h, 0.5, 4), Err(Error::NotInCone { .. })));
    }

    #[test]
    fn flatten_radius() {
        let h = Subspace::coordinate(3, &[0]);
        let res = sphere_flatten(&[0.5, 0.0, 0.0], 1.0, &h, 0.5, 0.5, 1000, 3).unwrap();
        assert!((res.radius_image - 1.1875f64.sqrt()).abs() < 1e-12);
        assert!(res.ratio_monotone);
        let id = sphere_flatten(&[0.5, 0.0, 0.0], 1.0, &h, 0.5, 0.0, 50, 3).unwrap();
        for (a, b) in id.sources.iter().zip(&id.images) {
            assert!(crate::vecops::dist(a, b) < 1e-15);
        }
        assert!(sphere_flatten(&[5.0, 0.0, 0.0], 1.0, &h, 0.5, 0.5, 5, 3).is_err());
    }
}
