//! Simplex measures, heights, enclosing balls, discrete curvatures and the
//! voluminous class V_k(η,d).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::vecops::{dist, dot, norm, sub};

/// Ordered tuple of k+1 vertices in R^n. Degenerate tuples are allowed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simplex {
    pub vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.first().map(|v| v.len()).ok_or(Error::EmptySet)?;
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        Ok(Simplex { vertices })
    }

    /// Simplex dimension k (number of vertices minus one).
    pub fn k(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn refs(&self) -> Vec<&[f64]> {
        self.vertices.iter().map(|v| v.as_slice()).collect()
    }

    /// fc_i T: drop vertex i.
    pub fn face(&self, i: usize) -> Simplex {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        Simplex { vertices }
    }

    pub fn scaled(&self, s: f64) -> Simplex {
        Simplex { vertices: self.vertices.iter().map(|v| v.iter().map(|x| x * s).collect()).collect() }
    }
}

/// Residual of `v` against the span of `edges`, modified Gram–Schmidt with one
/// reorthogonalization pass. Returns the orthonormal directions actually used.
fn residual_against(v: &[f64], dirs: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for e in dirs {
            let c = dot(&w, e);
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= c * ei;
            }
        }
    }
    w
}

/// Orthonormal directions of the affine hull of `pts` (based at `pts[0]`),
/// skipping numerically dependent edges.
fn affine_directions(pts: &[&[f64]]) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    if pts.is_empty() {
        return dirs;
    }
    let scale = pts.iter().map(|p| dist(p, pts[0])).fold(0.0, f64::max);
    for p in &pts[1..] {
        let w = residual_against(&sub(p, pts[0]), &dirs);
        let wn = norm(&w);
        if wn > 1e-13 * scale {
            dirs.push(w.into_iter().map(|x| x / wn).collect());
        }
    }
    dirs
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// H^k of the simplex: sqrt(det(MᵀM))/k! with M the edge matrix from vertex 0,
/// the determinant taken as the squared product of the QR diagonal of M.
pub fn measure(pts: &[&[f64]]) -> f64 {
    if pts.len() <= 1 {
        return if pts.is_empty() { 0.0 } else { 1.0 };
    }
    let k = pts.len() - 1;
    let scale = pts.iter().map(|p| dist(p, pts[0])).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut prod = 1.0;
    for p in &pts[1..] {
        let w = residual_against(&sub(p, pts[0]), &dirs);
        let wn = norm(&w);
        if wn <= 1e-13 * scale {
            return 0.0;
        }
        prod *= wn;
        dirs.push(w.into_iter().map(|x| x / wn).collect());
    }
    prod / factorial(k)
}

/// Distance from `x` to the affine hull of `pts`.
pub fn dist_to_affine_hull(x: &[f64], pts: &[&[f64]]) -> f64 {
    if pts.is_empty() {
        return f64::INFINITY;
    }
    let dirs = affine_directions(pts);
    norm(&residual_against(&sub(x, pts[0]), &dirs))
}

pub fn diameter(pts: &[&[f64]]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max(dist(pts[i], pts[j]));
        }
    }
    d
}

/// Heights h_i: distance from vertex i to the affine hull of fc_i.
pub fn heights(pts: &[&[f64]]) -> Vec<f64> {
    (0..pts.len())
        .map(|i| {
            let face: Vec<&[f64]> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p).collect();
            if face.is_empty() {
                0.0
            } else {
                dist_to_affine_hull(pts[i], &face)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        dist(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-15
    }
}

/// Smallest ball with every point of `boundary` on its sphere, centered in their affine hull.
fn circumball(boundary: &[&[f64]]) -> Option<Ball> {
    let p0 = *boundary.first()?;
    let j = boundary.len() - 1;
    if j == 0 {
        return Some(Ball { center: p0.to_vec(), radius: 0.0 });
    }
    let edges: Vec<Vec<f64>> = boundary[1..].iter().map(|p| sub(p, p0)).collect();
    let a = DMatrix::from_fn(j, j, |r, c| 2.0 * dot(&edges[r], &edges[c]));
    let b = DVector::from_fn(j, |r, _| dot(&edges[r], &edges[r]));
    let eps = 1e-14 * a.amax().max(1e-300);
    let lam = a.svd(true, true).solve(&b, eps).ok()?;
    let mut center = p0.to_vec();
    for (l, e) in lam.iter().zip(&edges) {
        for (c, ei) in center.iter_mut().zip(e) {
            *c += l * ei;
        }
    }
    let radius = boundary.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
    Some(Ball { center, radius })
}

fn welzl<'a>(pts: &[&'a [f64]], boundary: &mut Vec<&'a [f64]>, dim: usize) -> Option<Ball> {
    if pts.is_empty() || boundary.len() == dim + 1 {
        return circumball(boundary);
    }
    let (p, rest) = pts.split_last().expect("nonempty");
    if let Some(b) = welzl(rest, boundary, dim) {
        if b.contains(p) {
            return Some(b);
        }
    }
    boundary.push(p);
    let b = welzl(rest, boundary, dim);
    boundary.pop();
    b
}

/// Minimum enclosing ball by Welzl's move-to-front recursion.
pub fn min_enclosing_ball(pts: &[&[f64]]) -> Ball {
    if pts.is_empty() {
        return Ball { center: Vec::new(), radius: 0.0 };
    }
    let dim = pts[0].len();
    let mut boundary = Vec::new();
    welzl(pts, &mut boundary, dim).unwrap_or_else(|| {
        // degenerate support sets only; fall back to the bounding sphere of the centroid
        let n = pts.len() as f64;
        let c: Vec<f64> = (0..dim).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / n).collect();
        let r = pts.iter().map(|p| dist(p, &c)).fold(0.0, f64::max);
        Ball { center: c, radius: r }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexMetrics {
    pub measure: f64,
    pub diam: f64,
    pub heights: Vec<f64>,
    pub hmin: f64,
    pub face_measures: Vec<f64>,
    pub enclosing_radius: f64,
}

pub fn simplex_metrics(t: &Simplex) -> SimplexMetrics {
    let pts = t.refs();
    let hs = heights(&pts);
    let face_measures = (0..pts.len()).map(|i| measure(&t.face(i).refs())).collect();
    SimplexMetrics {
        measure: measure(&pts),
        diam: diameter(&pts),
        hmin: hs.iter().copied().fold(f64::INFINITY, f64::min),
        heights: hs,
        face_measures,
        enclosing_radius: min_enclosing_ball(&pts).radius,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Curvature {
    K,
    KPrime,
    KDoublePrime,
}

/// K = H^{m+1}/diam^{m+2}, K′ = H^{m+1}/(Σ face measures · diam²), K″ = hmin/diam²,
/// for a tuple of m+2 points.
pub fn menger_curvature(pts: &[&[f64]], variant: Curvature) -> Result<f64> {
    let d = diameter(pts);
    if d == 0.0 {
        return Err(Error::ZeroDiameter);
    }
    let k = pts.len() - 1;
    Ok(match variant {
        Curvature::K => measure(pts) / d.powi(k as i32 + 1),
        Curvature::KPrime => {
            let area: f64 = (0..pts.len())
                .map(|i| {
                    let f: Vec<&[f64]> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p).collect();
                    measure(&f)
                })
                .sum();
            if area == 0.0 {
                0.0
            } else {
                measure(pts) / (area * d * d)
            }
        }
        Curvature::KDoublePrime => {
            heights(pts).into_iter().fold(f64::INFINITY, f64::min) / (d * d)
        }
    })
}

/// K with degenerate single-point tuples mapped to 0; the energy integrand.
#[inline]
pub fn curvature_k(pts: &[&[f64]]) -> f64 {
    menger_curvature(pts, Curvature::K).unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolClassParams {
    pub eta: f64,
    pub d: f64,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolClass {
    pub member: bool,
    pub enclosing_radius: f64,
    pub base_measure: f64,
    pub height: f64,
}

/// Membership in V_k(η,d) for a simplex with k+2 vertices; the base is fc_{k+1}
/// and the height is h_{k+1}.
pub fn voluminous_classify(t: &Simplex, params: &VolClassParams) -> Result<VolClass> {
    if t.vertices.len() != params.k + 2 {
        return Err(Error::InvalidInput(format!(
            "expected {} vertices for k = {}, got {}",
            params.k + 2,
            params.k,
            t.vertices.len()
        )));
    }
    let pts = t.refs();
    let last = pts.len() - 1;
    let base = &pts[..last];
    let enclosing_radius = min_enclosing_ball(&pts).radius;
    let base_measure = measure(base);
    let height = dist_to_affine_hull(pts[last], base);
    let ed = params.eta * params.d;
    let member =
        enclosing_radius <= params.d && base_measure >= ed.powi(params.k as i32) && height >= ed;
    Ok(VolClass { member, enclosing_radius, base_measure, height })
}

/// ω_k = π^{k/2}/Γ(k/2+1) via ω_k = ω_{k−2}·2π/k.
pub fn unit_ball_volume(k: usize) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut w = if k.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut j = if k.is_multiple_of(2) { 2 } else { 3 };
    while j <= k {
        w *= two_pi / j as f64;
        j += 2;
    }
    w
}

/// Ω = sup_k ω_k, attained at k = 5.
pub fn big_omega() -> f64 {
    (0..=32).map(unit_ball_volume).fold(0.0, f64::max)
}

/// Υ(k) = (1 + (3/4)^{1/(k+2)}) / (1 − (3/4)^{1/(k+2)}).
pub fn upsilon(k: usize) -> f64 {
    let a = 0.75f64.powf(1.0 / (k as f64 + 2.0));
    (1.0 + a) / (1.0 - a)
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaConstScan {
    pub value: f64,
    /// (k+1)²(2^{1/(k+1)²} − 1) for k = 1..=64.
    pub first_bounds: Vec<f64>,
    /// 2Υ(k)Ω^{k+2}k!/(k+1)² for k = 1..=64.
    pub second_bounds: Vec<f64>,
    pub first_monotone_decreasing: bool,
    pub second_increasing_tail_from: Option<usize>,
}

/// Largest c with √c below both per-k bounds for every k ≥ 1.
///
/// The first bound x(2^{1/x} − 1), x = (k+1)², decreases to its limit ln 2, so
/// its infimum over all k is ln 2 rather than any finite-k value. The second
/// bound grows factorially once its minimum is passed, so its finite scan is exact.
pub fn c_eta_const_scan() -> EtaConstScan {
    let omega = big_omega();
    let first: Vec<f64> = (1..=64)
        .map(|k| {
            let x = ((k + 1) * (k + 1)) as f64;
            x * (2f64.powf(1.0 / x) - 1.0)
        })
        .collect();
    let second: Vec<f64> = (1..=64usize)
        .map(|k| {
            let x = ((k + 1) * (k + 1)) as f64;
            2.0 * upsilon(k) * omega.powi(k as i32 + 2) * factorial(k) / x
        })
        .collect();
    let dec = first.windows(2).all(|w| w[1] < w[0]) && first.iter().all(|&b| b > std::f64::consts::LN_2);
    let tail = (0..second.len()).find(|&i| second[i..].windows(2).all(|w| w[1] > w[0])).map(|i| i + 1);
    let s2 = second.iter().copied().fold(f64::INFINITY, f64::min);
    let root = std::f64::consts::LN_2.min(s2).min(1.0);
    EtaConstScan {
        value: root * root,
        first_bounds: first,
        second_bounds: second,
        first_monotone_decreasing: dec,
        second_increasing_tail_from: tail,
    }
}

pub fn c_eta_const() -> f64 {
    c_eta_const_scan().value
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationConstant {
    pub varsigma: f64,
    pub upsilon: f64,
    pub lower: f64,
    pub upper: f64,
}

/// ς_k(η) with Υ(k) and the two-sided η-bracket.
pub fn perturbation_constant(k: usize, eta: f64) -> Result<PerturbationConstant> {
    if k == 0 || !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidInput(format!("need k >= 1 and eta in (0,1), got k = {k}, eta = {eta}")));
    }
    let ups = upsilon(k);
    let kk = ((k + 1) * (k + 1)) as f64;
    let fact = factorial(k);
    let upper = eta.powf(kk) / (2.0 * ups * unit_ball_volume(k).powi(k as i32 + 2) * fact);
    let lower = c_eta_const() * eta.powf(kk) / (2.0 * ups * big_omega().powi(k as i32 + 2) * fact);
    let varsigma = (2f64.powf(1.0 / kk) - 1.0).min(upper);
    Ok(PerturbationConstant { varsigma, upsilon: ups, lower, upper })
}

/// Maximum vertex displacement bound ‖T − T′‖, minimized over vertex matchings.
pub fn pseudo_distance(t: &Simplex, t2: &Simplex) -> Result<f64> {
    let n = t.vertices.len();
    if n != t2.vertices.len() {
        return Err(Error::DimensionMismatch { expected: n, got: t2.vertices.len() });
    }
    if n > 9 {
        return Err(Error::TooManyVertices(n));
    }
    let d: Vec<Vec<f64>> = t
        .vertices
        .iter()
        .map(|a| t2.vertices.iter().map(|b| dist(a, b)).collect())
        .collect();
    let mut used = vec![false; n];
    let mut best = f64::INFINITY;
    fn go(i: usize, cur: f64, d: &[Vec<f64>], used: &mut [bool], best: &mut f64) {
        if cur >= *best {
            return;
        }
        if i == d.len() {
            *best = cur;
            return;
        }
        for j in 0..d.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, cur.max(d[i][j]), d, used, best);
                used[j] = false;
            }
        }
    }
    go(0, 0.0, &d, &mut used, &mut best);
    Ok(if n == 0 { 0.0 } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Simplex {
        Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn right_triangle_metrics() {
        let m = simplex_metrics(&tri());
        assert!((m.measure - 0.5).abs() < 1e-15);
        assert!((m.diam - 2f64.sqrt()).abs() < 1e-15);
        let s = 0.5f64.sqrt();
        for (h, e) in m.heights.iter().zip([s, 1.0, 1.0]) {
            assert!((h - e).abs() < 1e-14);
        }
        assert!((m.hmin - s).abs() < 1e-14);
        assert!((m.enclosing_radius - s).abs() < 1e-14);
        let k = menger_curvature(&tri().refs(), Curvature::K).unwrap();
        assert!((k - 2f64.sqrt() / 8.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_cases() {
        let c = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let m = simplex_metrics(&c);
        assert_eq!(m.measure, 0.0);
        assert!(m.hmin < 1e-15);
        assert_eq!(menger_curvature(&c.refs(), Curvature::K).unwrap(), 0.0);
        let p = Simplex::new(vec![vec![1.0, 2.0]; 3]).unwrap();
        assert_eq!(menger_curvature(&p.refs(), Curvature::K), Err(Error::ZeroDiameter));
        let v = voluminous_classify(&c, &VolClassParams { eta: 0.01, d: 10.0, k: 1 }).unwrap();
        assert!(!v.member);
    }

    #[test]
    fn unit_regular_triangle_member() {
        let t = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).unwrap();
        let v = voluminous_classify(&t, &VolClassParams { eta: 0.5, d: 1.0, k: 1 }).unwrap();
        assert!(v.member);
        assert!((v.enclosing_radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((v.base_measure - 1.0).abs() < 1e-15);
        assert!((v.height - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(0), 1.0);
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((big_omega() - 8.0 * std::f64::consts::PI.powi(2) / 15.0).abs() < 1e-12);
    }

    #[test]
    fn varsigma_example() {
        let p = perturbation_constant(1, 1.0 - 1e-15).unwrap();
        let expect = 1.0 / (2.0 * upsilon(1) * 8.0);
        assert!((p.varsigma - expect).abs() < 1e-12);
        assert!(p.lower <= p.varsigma && p.varsigma <= p.upper);
    }

    #[test]
    fn eta_const_is_ln2_squared() {
        let s = c_eta_const_scan();
        assert!(s.first_monotone_decreasing);
        assert!((s.value - std::f64::consts::LN_2.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn pseudo_distance_examples() {
        let t = tri();
        let mut sw = t.clone();
        sw.vertices.swap(0, 2);
        assert_eq!(pseudo_distance(&t, &sw).unwrap(), 0.0);
        let tr = Simplex::new(t.vertices.iter().map(|v| vec![v[0] + 0.3, v[1] - 0.4]).collect()).unwrap();
        assert!((pseudo_distance(&t, &tr).unwrap() - 0.5).abs() < 1e-15);
    }
}
