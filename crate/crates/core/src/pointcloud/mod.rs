//! Weighted point clouds, spatial queries, measure-in-ball and the sum-form
//! Hausdorff distance.

mod kdtree;

pub use kdtree::KdTree;

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stream;
use crate::simplex::unit_ball_volume;
use crate::tol::TOL_GEOM;

/// Weighted sample of an m-dimensional set in R^n; weights are per-point H^m masses.
#[derive(Debug, Clone)]
pub struct PointCloud {
    n: usize,
    m: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    pub provenance: Option<String>,
    index: OnceLock<KdTree>,
}

impl PartialEq for PointCloud {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.coords == other.coords && self.weights == other.weights
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Open,
    Closed,
}

impl PointCloud {
    pub fn new(m: usize, n: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if n == 0 || m > n {
            return Err(Error::InvalidInput(format!("need 0 < n and m <= n, got m = {m}, n = {n}")));
        }
        if coords.len() != n * weights.len() {
            return Err(Error::DimensionMismatch { expected: n * weights.len(), got: coords.len() });
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate {c}")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidInput(format!("weight {w} must be finite and positive")));
        }
        Ok(PointCloud { n, m, coords, weights, provenance: None, index: OnceLock::new() })
    }

    pub fn from_points(m: usize, points: &[Vec<f64>], weights: Vec<f64>) -> Result<Self> {
        let n = points.first().map(|p| p.len()).ok_or(Error::EmptySet)?;
        let mut coords = Vec::with_capacity(n * points.len());
        for p in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.len() });
            }
            coords.extend_from_slice(p);
        }
        PointCloud::new(m, n, coords, weights)
    }

    pub fn with_provenance(mut self, tag: impl Into<String>) -> Self {
        self.provenance = Some(tag.into());
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.n)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn index(&self) -> &KdTree {
        self.index.get_or_init(|| KdTree::new(&self.coords, self.n))
    }

    /// Same points with replaced weights.
    pub fn reweighted(&self, weights: Vec<f64>) -> Result<Self> {
        let mut c = PointCloud::new(self.m, self.n, self.coords.clone(), weights)?;
        c.provenance = self.provenance.clone();
        Ok(c)
    }

    /// Points scaled by s, weights by s^m.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let w = s.abs().powi(self.m as i32);
        PointCloud::new(
            self.m,
            self.n,
            self.coords.iter().map(|c| c * s).collect(),
            self.weights.iter().map(|x| x * w).collect(),
        )
    }

    /// The subcloud with the given indices.
    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(idx.len() * self.n);
        for &i in idx {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud::new(self.m, self.n, coords, idx.iter().map(|&i| self.weights[i]).collect())
    }

    pub fn diameter_bound(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.n];
        let mut hi = vec![f64::NEG_INFINITY; self.n];
        for p in self.points() {
            for d in 0..self.n {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("#menger m={} n={}\n", self.m, self.n);
        if let Some(p) = &self.provenance {
            let _ = writeln!(s, "# {p}");
        }
        for (p, w) in self.points().zip(&self.weights) {
            for c in p {
                let _ = write!(s, "{c:.16e},");
            }
            let _ = writeln!(s, "{w:.16e}");
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::HeaderMismatch("empty file".into()))?;
        let (m, n) = parse_header(header)?;
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        let mut provenance = None;
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                provenance.get_or_insert_with(|| c.trim().to_string());
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
            if fields.len() != n + 1 {
                return Err(Error::HeaderMismatch(format!(
                    "line {}: {} fields, header declares n = {n} plus a weight",
                    i + 1,
                    fields.len()
                )));
            }
            for (j, f) in fields.iter().enumerate() {
                let v: f64 = f
                    .parse()
                    .map_err(|_| Error::ParseError { line: i + 1, msg: format!("bad number '{f}'") })?;
                if !v.is_finite() {
                    return Err(Error::ParseError { line: i + 1, msg: format!("non-finite value '{f}'") });
                }
                if j == n {
                    if v <= 0.0 {
                        return Err(Error::ParseError { line: i + 1, msg: format!("weight {v} must be positive") });
                    }
                    weights.push(v);
                } else {
                    coords.push(v);
                }
            }
        }
        let mut c = PointCloud::new(m, n, coords, weights)?;
        c.provenance = provenance;
        Ok(c)
    }
}

fn parse_header(h: &str) -> Result<(usize, usize)> {
    let rest = h
        .trim()
        .strip_prefix("#menger")
        .ok_or_else(|| Error::HeaderMismatch(format!("expected '#menger m=<m> n=<n>', got '{h}'")))?;
    let (mut m, mut n) = (None, None);
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("m=") {
            m = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        }
    }
    match (m, n) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => Err(Error::HeaderMismatch(format!("header '{h}' lacks m= and n="))),
    }
}

pub fn load_cloud(path: &Path) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path)?;
    PointCloud::from_csv(&text)
}

/// Indices of points in B(x,r): `|p − x| < r` (open) or `≤ r + tol.geom` (closed).
pub fn ball_query(cloud: &PointCloud, x: &[f64], r: f64, closure: Closure) -> Vec<usize> {
    match closure {
        Closure::Open => cloud.index().within_open(x, r * r),
        Closure::Closed => {
            let rr = r + TOL_GEOM;
            cloud.index().within(x, rr * rr)
        }
    }
}

/// Σ weights over the closed ball.
pub fn measure_in_ball(cloud: &PointCloud, x: &[f64], r: f64) -> f64 {
    ball_query(cloud, x, r, Closure::Closed).iter().map(|&i| cloud.weights[i]).sum()
}

fn one_sided(a: &[Vec<f64>], tree_b: &KdTree) -> f64 {
    a.par_iter().map(|p| tree_b.nearest_d2(p)).reduce(|| 0.0, f64::max).sqrt()
}

/// d_H(A,B) = sup_{a∈A} dist(a,B) + sup_{b∈B} dist(b,A) (sum of the one-sided terms).
pub fn hausdorff_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a[0].len();
    let flat = |s: &[Vec<f64>]| -> Vec<f64> { s.iter().flatten().copied().collect() };
    let (ta, tb) = (KdTree::new(&flat(a), n), KdTree::new(&flat(b), n));
    Ok(one_sided(a, &tb) + one_sided(b, &ta))
}

/// Density weights ω_m r_k^m / k from the distance to the k-th neighbor.
pub fn knn_weights(cloud: &PointCloud, k: usize) -> Result<Vec<f64>> {
    let m = cloud.intrinsic_dim();
    if k < m + 1 || k >= cloud.len() {
        return Err(Error::TooFewPoints { needed: (m + 1).max(k + 1), got: cloud.len() });
    }
    let wm = unit_ball_volume(m);
    Ok((0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let nn = cloud.index().knn(cloud.point(i), k + 1);
            let rk = nn.last().map(|c| c.0.sqrt()).unwrap_or(0.0);
            wm * rk.powi(m as i32) / k as f64
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct AhlforsScan {
    pub radii: Vec<f64>,
    pub min_ratio: Vec<f64>,
    pub worst_point: Vec<usize>,
    pub centers: usize,
}

/// Deterministic choice of up to `count` cloud indices, ascending.
pub fn sample_centers(cloud: &PointCloud, count: usize, seed: u64) -> Vec<usize> {
    if count >= cloud.len() {
        return (0..cloud.len()).collect();
    }
    let mut rng = stream(seed, 0);
    let mut v = sample(&mut rng, cloud.len(), count).into_vec();
    v.sort_unstable();
    v
}

/// Per-radius minimum over sampled centers of (weight in B(x,r)) / r^m.
pub fn ahlfors_scan(cloud: &PointCloud, radii: &[f64], sample_count: usize, seed: u64) -> Result<AhlforsScan> {
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::InvalidInput(format!("radius {r} must be positive")));
    }
    let centers = sample_centers(cloud, sample_count, seed);
    let m = cloud.intrinsic_dim() as i32;
    let mut min_ratio = Vec::with_capacity(radii.len());
    let mut worst_point = Vec::with_capacity(radii.len());
    for &r in radii {
        let (ratio, idx) = centers
            .par_iter()
            .map(|&i| (measure_in_ball(cloud, cloud.point(i), r) / r.powi(m), i))
            .reduce(|| (f64::INFINITY, usize::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
        min_ratio.push(ratio);
        worst_point.push(idx);
    }
    Ok(AhlforsScan { radii: radii.to_vec(), min_ratio, worst_point, centers: centers.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> PointCloud {
        PointCloud::from_points(1, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0; 3]).unwrap()
    }

    #[test]
    fn csv_roundtrip() {
        let c = tri();
        assert_eq!(c.total_mass(), 3.0);
        let text = c.to_csv();
        let d = PointCloud::from_csv(&text).unwrap();
        assert_eq!(c, d);
        let bad = "#menger m=1 n=2\n0,0,-1\n";
        assert!(matches!(PointCloud::from_csv(bad), Err(Error::ParseError { line: 2, .. })));
        assert!(matches!(PointCloud::from_csv("x\n"), Err(Error::HeaderMismatch(_))));
        assert!(matches!(PointCloud::from_csv("#menger m=1 n=2\n0,1\n"), Err(Error::HeaderMismatch(_))));
        assert!(PointCloud::from_csv("#menger m=1 n=2\n0,inf,1\n").is_err());
    }

    #[test]
    fn ball_examples() {
        let c = tri();
        assert_eq!(ball_query(&c, &[1.0, 0.0], 0.0, Closure::Closed), vec![1]);
        assert!(ball_query(&c, &[1.0, 0.0], 0.0, Closure::Open).is_empty());
        assert_eq!(ball_query(&c, &[0.0, 0.0], 10.0, Closure::Open), vec![0, 1, 2]);
    }

    #[test]
    fn hausdorff_sum_convention() {
        let a = vec![vec![0.0]];
        let b = vec![vec![1.0]];
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 2.0);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &[]), Err(Error::EmptySet));
    }

    #[test]
    fn knn_segment_mass() {
        let pts: Vec<Vec<f64>> = (0..1000).map(|i| vec![(i as f64 + 0.5) / 1000.0]).collect();
        let c = PointCloud::from_points(1, &pts, vec![1.0; 1000]).unwrap();
        let w = knn_weights(&c, 8).unwrap();
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 0.05, "{total}");
        assert!(knn_weights(&c, 1000).is_err());
    }
}
