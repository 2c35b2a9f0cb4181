//! Synthetic weighted clouds with analytic ground truth.
//!
//! Every generator stratifies a parameter box into exactly `count` cells,
//! jitters one sample per cell and weights it by the H^m measure of the cell's
//! image. Spheres, disks, tori, polygons and the snowflake use closed-form
//! cell integrals; graphs and the spiral use 3-point Gauss quadrature.

use std::f64::consts::PI;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;
use crate::rng::{stream, Rng};

/// Height function of a graph generator: `coeff · |w|^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Height {
    pub coeff: f64,
    pub power: f64,
}

impl Height {
    pub fn eval(&self, w: &[f64]) -> f64 {
        let r = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.coeff * r.powf(self.power)
    }

    /// Gradient; finite at the origin because `power ≥ 1`.
    pub fn grad(&self, w: &[f64]) -> Vec<f64> {
        let r = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r == 0.0 {
            let g = if self.power == 1.0 { f64::NAN } else { 0.0 };
            return vec![g; w.len()];
        }
        let s = self.coeff * self.power * r.powf(self.power - 2.0);
        w.iter().map(|x| s * x).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Round m-sphere of the given radius centred at 0 in R^n.
    Sphere { m: usize, n: usize, radius: f64 },
    /// Standard 2-torus in R³.
    Torus { major: f64, minor: f64 },
    /// Graph of `height` over [−half_width, half_width]^m in R^{m+1}.
    Graph { m: usize, half_width: f64, height: Height },
    /// Flat m-disk B ∩ H in the first m coordinates of R^n.
    PlaneDisk { m: usize, n: usize, radius: f64 },
    /// γ([t_min, t_max]) × [0,1]^{m−1} in R^{m+1}.
    Spiral { m: usize, t_min: f64, t_max: f64 },
    /// Boundary of the level-`level` snowflake built on the unit triangle.
    Koch { level: u32 },
    /// ∂[0,1]² with an open interval of length `gap` removed from the middle of the bottom side.
    GapSquare { gap: f64 },
    /// Two m-spheres centred at ±offset·e₁.
    UnionSpheres { m: usize, n: usize, radius: f64, offset: f64 },
    /// Segment [0, length]·e₁ in R^n.
    HalfSegment { n: usize, length: f64 },
}

pub const KINDS: [&str; 9] =
    ["sphere", "torus", "graph", "plane_disk", "spiral", "koch", "gap_square", "union_spheres", "half_segment"];

impl Shape {
    /// Default shape of a kind; `m` is ignored for kinds of fixed dimension.
    pub fn default_for(kind: &str, m: usize) -> Result<Shape> {
        Ok(match kind {
            "sphere" => Shape::Sphere { m, n: m + 1, radius: 1.0 },
            "torus" => Shape::Torus { major: 2.0, minor: 1.0 },
            "graph" => Shape::Graph { m, half_width: 1.0, height: Height { coeff: 1.0, power: 1.5 } },
            "plane_disk" => Shape::PlaneDisk { m, n: m + 1, radius: 1.0 },
            "spiral" => Shape::Spiral { m, t_min: 0.125, t_max: 1.0 },
            "koch" => Shape::Koch { level: 6 },
            "gap_square" => Shape::GapSquare { gap: 0.1 },
            "union_spheres" => Shape::UnionSpheres { m, n: m + 1, radius: 1.0, offset: 0.5 },
            "half_segment" => Shape::HalfSegment { n: 2, length: 1.0 },
            _ => return Err(Error::InvalidSpec(format!("unknown kind {kind:?}; expected one of {}", KINDS.join(", ")))),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Sphere { .. } => "sphere",
            Shape::Torus { .. } => "torus",
            Shape::Graph { .. } => "graph",
            Shape::PlaneDisk { .. } => "plane_disk",
            Shape::Spiral { .. } => "spiral",
            Shape::Koch { .. } => "koch",
            Shape::GapSquare { .. } => "gap_square",
            Shape::UnionSpheres { .. } => "union_spheres",
            Shape::HalfSegment { .. } => "half_segment",
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match *self {
            Shape::Sphere { m, .. }
            | Shape::Graph { m, .. }
            | Shape::PlaneDisk { m, .. }
            | Shape::Spiral { m, .. }
            | Shape::UnionSpheres { m, .. } => m,
            Shape::Torus { .. } => 2,
            Shape::Koch { .. } | Shape::GapSquare { .. } | Shape::HalfSegment { .. } => 1,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            Shape::Sphere { n, .. } | Shape::PlaneDisk { n, .. } | Shape::UnionSpheres { n, .. } | Shape::HalfSegment { n, .. } => n,
            Shape::Torus { .. } => 3,
            Shape::Graph { m, .. } | Shape::Spiral { m, .. } => m + 1,
            Shape::Koch { .. } | Shape::GapSquare { .. } => 2,
        }
    }

    /// Exact H^m measure where it has a closed form.
    pub fn analytic_measure(&self) -> Option<f64> {
        match *self {
            Shape::Sphere { m, radius, .. } => Some(sphere_area(m) * radius.powi(m as i32)),
            Shape::Torus { major, minor } => Some(4.0 * PI * PI * major * minor),
            Shape::PlaneDisk { m, radius, .. } => Some(crate::simplex::unit_ball_volume(m) * radius.powi(m as i32)),
            Shape::Koch { level } => Some(3.0 * (4.0f64 / 3.0).powi(level as i32)),
            Shape::GapSquare { gap } => Some(4.0 - gap),
            Shape::HalfSegment { length, .. } => Some(length),
            Shape::UnionSpheres { m, radius, .. } => Some(2.0 * sphere_area(m) * radius.powi(m as i32)),
            Shape::Graph { .. } | Shape::Spiral { .. } => None,
        }
    }

    /// Reach of a closed smooth shape.
    pub fn analytic_reach(&self) -> Option<f64> {
        match *self {
            Shape::Sphere { radius, .. } => Some(radius),
            Shape::Torus { major, minor } => Some(minor.min(major - minor)),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        let pos = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let m = self.intrinsic_dim();
        if m == 0 {
            return bad("intrinsic dimension must be at least 1".into());
        }
        match *self {
            Shape::Sphere { m, n, radius } | Shape::UnionSpheres { m, n, radius, .. } => {
                pos("radius", radius)?;
                if n < m + 1 {
                    return bad(format!("an {m}-sphere needs n >= {}, got {n}", m + 1));
                }
                if let Shape::UnionSpheres { offset, .. } = *self {
                    if !(offset.is_finite() && offset >= 0.0) {
                        return bad(format!("offset must be finite and non-negative, got {offset}"));
                    }
                    if offset == 0.0 {
                        return bad("offset 0 makes the spheres coincide".into());
                    }
                }
            }
            Shape::Torus { major, minor } => {
                pos("minor", minor)?;
                if !(major > minor && major.is_finite()) {
                    return bad(format!("need major > minor, got {major} <= {minor}"));
                }
            }
            Shape::Graph { half_width, height, .. } => {
                pos("half_width", half_width)?;
                if !height.coeff.is_finite() {
                    return bad("height coefficient must be finite".into());
                }
                if !(height.power >= 1.0 && height.power.is_finite()) {
                    return bad(format!("height power must be >= 1, got {}", height.power));
                }
            }
            Shape::PlaneDisk { m, n, radius } => {
                pos("radius", radius)?;
                if n < m {
                    return bad(format!("need n >= m, got n = {n}, m = {m}"));
                }
            }
            Shape::Spiral { t_min, t_max, .. } => {
                // below ~0.1 the radius 2^{-2^{1/t}} underflows
                if !(t_min >= 0.11 && t_min < t_max && t_max <= 1.0) {
                    return bad(format!("need 0.11 <= t_min < t_max <= 1, got t_min = {t_min}, t_max = {t_max}"));
                }
            }
            Shape::Koch { level } => {
                if level > 10 {
                    return bad(format!("koch level must be at most 10, got {level}"));
                }
            }
            Shape::GapSquare { gap } => {
                if !(0.0..1.0).contains(&gap) {
                    return bad(format!("gap must lie in [0, 1), got {gap}"));
                }
            }
            Shape::HalfSegment { n, length } => {
                pos("length", length)?;
                if n < 1 {
                    return bad("n must be at least 1".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub shape: Shape,
    pub count: usize,
    pub seed: u64,
    /// Fraction of each cell over which the sample is jittered; 0 gives cell centres.
    #[serde(default = "one")]
    pub jitter: f64,
}

fn one() -> f64 {
    1.0
}

impl GeneratorSpec {
    pub fn new(shape: Shape, count: usize, seed: u64) -> Self {
        GeneratorSpec { shape, count, seed, jitter: 1.0 }
    }

    pub fn with_jitter(mut self, jitter: f64) -> Self {
        self.jitter = jitter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        let need = 4 * (self.shape.intrinsic_dim() + 2);
        if self.count < need {
            return Err(Error::InvalidSpec(format!("count must be at least 4(m+2) = {need}, got {}", self.count)));
        }
        if !(0.0..=1.0).contains(&self.jitter) {
            return Err(Error::InvalidSpec(format!("jitter must lie in [0, 1], got {}", self.jitter)));
        }
        Ok(())
    }
}

/// H^m measure of the unit m-sphere.
pub fn sphere_area(m: usize) -> f64 {
    (m as f64 + 1.0) * crate::simplex::unit_ball_volume(m + 1)
}

#[derive(Debug, Clone)]
struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
    at: Vec<f64>,
}

impl Cell {
    fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

/// Partition of the box into exactly `count` cells, each with one jittered sample.
fn stratify(lo: &[f64], hi: &[f64], count: usize, jitter: f64, rng: &mut Rng) -> Vec<Cell> {
    let mut boxes = Vec::with_capacity(count);
    split(lo.to_vec(), hi.to_vec(), 0, count, &mut boxes);
    boxes
        .into_iter()
        .map(|(lo, hi)| {
            let at = lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| {
                    let u: f64 = rng.random();
                    a + (b - a) * (0.5 + jitter * (u - 0.5))
                })
                .collect();
            Cell { lo, hi, at }
        })
        .collect()
}

fn split(lo: Vec<f64>, hi: Vec<f64>, dim: usize, count: usize, out: &mut Vec<(Vec<f64>, Vec<f64>)>) {
    let d = lo.len() - dim;
    if d == 0 || count == 0 {
        if count == 1 {
            out.push((lo, hi));
        }
        return;
    }
    let rows = if d == 1 {
        count
    } else {
        let lens: Vec<f64> = (dim..lo.len()).map(|k| hi[k] - lo[k]).collect();
        let geo = lens.iter().map(|l| l.ln()).sum::<f64>() / d as f64;
        ((count as f64).powf(1.0 / d as f64) * lens[0] / geo.exp()).round().clamp(1.0, count as f64) as usize
    };
    let h = (hi[dim] - lo[dim]) / rows as f64;
    let (base, extra) = (count / rows, count % rows);
    for i in 0..rows {
        let c = base + usize::from(i < extra);
        let mut l = lo.clone();
        let mut u = hi.clone();
        l[dim] = lo[dim] + i as f64 * h;
        u[dim] = if i + 1 == rows { hi[dim] } else { lo[dim] + (i + 1) as f64 * h };
        split(l, u, dim + 1, c, out);
    }
}

/// ∫_a^b sin^k.
fn sin_pow_integral(k: u32, a: f64, b: f64) -> f64 {
    match k {
        0 => b - a,
        1 => a.cos() - b.cos(),
        _ => {
            let kf = k as f64;
            let edge = |t: f64| -t.sin().powi(k as i32 - 1) * t.cos() / kf;
            edge(b) - edge(a) + (kf - 1.0) / kf * sin_pow_integral(k - 2, a, b)
        }
    }
}

/// Coordinates of S^k: polar angles θ₁…θ_{k−2} ∈ [0,π], z = cos θ_{k−1} ∈ [−1,1]
/// and φ ∈ [0,2π). The area element is ∏ sin^{k−j}θ_j dθ dz dφ.
fn sphere_box(k: usize) -> (Vec<f64>, Vec<f64>) {
    match k {
        1 => (vec![0.0], vec![2.0 * PI]),
        _ => {
            let mut lo = vec![0.0; k - 2];
            let mut hi = vec![PI; k - 2];
            lo.extend([-1.0, 0.0]);
            hi.extend([1.0, 2.0 * PI]);
            (lo, hi)
        }
    }
}

fn sphere_point(k: usize, u: &[f64]) -> Vec<f64> {
    if k == 1 {
        return vec![u[0].cos(), u[0].sin()];
    }
    let mut x = Vec::with_capacity(k + 1);
    let mut s = 1.0;
    for &t in &u[..k - 2] {
        x.push(s * t.cos());
        s *= t.sin();
    }
    let z = u[k - 2].clamp(-1.0, 1.0);
    let phi = u[k - 1];
    x.push(s * z);
    let r = s * (1.0 - z * z).sqrt();
    x.push(r * phi.cos());
    x.push(r * phi.sin());
    x
}

fn sphere_cell_area(k: usize, lo: &[f64], hi: &[f64]) -> f64 {
    if k == 1 {
        return hi[0] - lo[0];
    }
    let mut a = (hi[k - 2] - lo[k - 2]) * (hi[k - 1] - lo[k - 1]);
    for j in 0..k - 2 {
        a *= sin_pow_integral((k - 1 - j) as u32, lo[j], hi[j]);
    }
    a
}

fn pad(mut x: Vec<f64>, n: usize) -> Vec<f64> {
    x.resize(n, 0.0);
    x
}

fn sphere_cloud(m: usize, n: usize, radius: f64, center: &[f64], count: usize, jitter: f64, rng: &mut Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let (lo, hi) = sphere_box(m);
    let rm = radius.powi(m as i32);
    stratify(&lo, &hi, count, jitter, rng)
        .into_iter()
        .map(|c| {
            let mut x = pad(sphere_point(m, &c.at), n);
            for (xi, ci) in x.iter_mut().zip(center) {
                *xi = *xi * radius + ci;
            }
            (x, rm * sphere_cell_area(m, &c.lo, &c.hi))
        })
        .unzip()
}

const GAUSS3: [(f64, f64); 3] = [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];

/// Tensor 3-point Gauss rule over the cell.
fn gauss(cell: &Cell, f: impl Fn(&[f64]) -> f64) -> f64 {
    let d = cell.lo.len();
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let mut sum = 0.0;
    loop {
        let mut w = 1.0;
        for k in 0..d {
            let (t, wk) = GAUSS3[idx[k]];
            let half = 0.5 * (cell.hi[k] - cell.lo[k]);
            x[k] = cell.lo[k] + half * (1.0 + t);
            w *= wk * half;
        }
        sum += w * f(&x);
        let mut k = 0;
        loop {
            if k == d {
                return sum;
            }
            idx[k] += 1;
            if idx[k] < 3 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn spiral_point(t: f64) -> [f64; 2] {
    let r = (-(2f64.powf(1.0 / t)) * std::f64::consts::LN_2).exp();
    let a = PI / (2.0 * t);
    [r * a.cos(), r * a.sin()]
}

/// |γ'(t)| for γ(t) = 2^{−2^{1/t}}(cos π/2t, sin π/2t).
fn spiral_speed(t: f64) -> f64 {
    let r = (-(2f64.powf(1.0 / t)) * std::f64::consts::LN_2).exp();
    let dlnr = std::f64::consts::LN_2 * std::f64::consts::LN_2 * 2f64.powf(1.0 / t) / (t * t);
    let dang = PI / (2.0 * t * t);
    r * dlnr.hypot(dang)
}

fn koch_vertices(level: u32) -> Vec<[f64; 2]> {
    let h = 3f64.sqrt() / 2.0;
    // clockwise so that the bumps point outward
    let mut v = vec![[0.0, 0.0], [0.5, h], [1.0, 0.0], [0.0, 0.0]];
    let (c, s) = ((PI / 3.0).cos(), (PI / 3.0).sin());
    for _ in 0..level {
        let mut next = Vec::with_capacity(4 * v.len());
        for w in v.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = [(b[0] - a[0]) / 3.0, (b[1] - a[1]) / 3.0];
            let p = [a[0] + d[0], a[1] + d[1]];
            let q = [a[0] + 2.0 * d[0], a[1] + 2.0 * d[1]];
            let apex = [p[0] + c * d[0] - s * d[1], p[1] + s * d[0] + c * d[1]];
            next.extend([a, p, apex, q]);
        }
        next.push(*v.last().expect("closed polygon"));
        v = next;
    }
    v
}

/// Point at arclength `s` along a polyline with cumulative lengths `cum`.
fn along(v: &[[f64; 2]], cum: &[f64], s: f64) -> Vec<f64> {
    let i = cum.partition_point(|&c| c <= s).clamp(1, v.len() - 1) - 1;
    let len = cum[i + 1] - cum[i];
    let t = if len > 0.0 { ((s - cum[i]) / len).clamp(0.0, 1.0) } else { 0.0 };
    vec![v[i][0] + t * (v[i + 1][0] - v[i][0]), v[i][1] + t * (v[i + 1][1] - v[i][1])]
}

fn polyline_cloud(v: &[[f64; 2]], count: usize, jitter: f64, rng: &mut Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut cum = vec![0.0];
    for w in v.windows(2) {
        let l = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        cum.push(cum.last().expect("non-empty") + l);
    }
    let total = *cum.last().expect("non-empty");
    stratify(&[0.0], &[total], count, jitter, rng)
        .into_iter()
        .map(|c| (along(v, &cum, c.at[0]), c.volume()))
        .unzip()
}

/// Samples the shape described by `spec`; provenance records the spec as JSON.
pub fn generate(spec: &GeneratorSpec) -> Result<PointCloud> {
    spec.validate()?;
    let mut rng = stream(spec.seed, 0);
    let (count, jitter) = (spec.count, spec.jitter);
    let (points, weights): (Vec<Vec<f64>>, Vec<f64>) = match spec.shape {
        Shape::Sphere { m, n, radius } => sphere_cloud(m, n, radius, &vec![0.0; n], count, jitter, &mut rng),
        Shape::UnionSpheres { m, n, radius, offset } => {
            let mut c = vec![0.0; n];
            c[0] = -offset;
            let (mut p, mut w) = sphere_cloud(m, n, radius, &c, count / 2, jitter, &mut rng);
            c[0] = offset;
            let (p2, w2) = sphere_cloud(m, n, radius, &c, count - count / 2, jitter, &mut rng);
            p.extend(p2);
            w.extend(w2);
            (p, w)
        }
        Shape::Torus { major, minor } => stratify(&[0.0, 0.0], &[2.0 * PI, 2.0 * PI], count, jitter, &mut rng)
            .into_iter()
            .map(|c| {
                let (u, v) = (c.at[0], c.at[1]);
                let ring = major + minor * v.cos();
                let x = vec![ring * u.cos(), ring * u.sin(), minor * v.sin()];
                let w = (c.hi[0] - c.lo[0])
                    * minor
                    * (major * (c.hi[1] - c.lo[1]) + minor * (c.hi[1].sin() - c.lo[1].sin()));
                (x, w)
            })
            .unzip(),
        Shape::Graph { m, half_width, height } => {
            stratify(&vec![-half_width; m], &vec![half_width; m], count, jitter, &mut rng)
                .into_iter()
                .map(|c| {
                    let mut x = c.at.clone();
                    x.push(height.eval(&c.at));
                    let w = gauss(&c, |u| (1.0 + height.grad(u).iter().map(|g| g * g).sum::<f64>()).sqrt());
                    (x, w)
                })
                .unzip()
        }
        Shape::PlaneDisk { m, n, radius } => {
            if m == 1 {
                stratify(&[-radius], &[radius], count, jitter, &mut rng)
                    .into_iter()
                    .map(|c| (pad(c.at.clone(), n), c.volume()))
                    .unzip()
            } else {
                // u = ρ^m makes the radial factor of the volume element constant
                let (slo, shi) = sphere_box(m - 1);
                let mut lo = vec![0.0];
                let mut hi = vec![radius.powi(m as i32)];
                lo.extend(slo);
                hi.extend(shi);
                stratify(&lo, &hi, count, jitter, &mut rng)
                    .into_iter()
                    .map(|c| {
                        let rho = c.at[0].powf(1.0 / m as f64);
                        let dir = sphere_point(m - 1, &c.at[1..]);
                        let x = pad(dir.into_iter().map(|d| d * rho).collect(), n);
                        let w = (c.hi[0] - c.lo[0]) / m as f64 * sphere_cell_area(m - 1, &c.lo[1..], &c.hi[1..]);
                        (x, w)
                    })
                    .unzip()
            }
        }
        Shape::Spiral { m, t_min, t_max } => {
            let mut lo = vec![t_min];
            let mut hi = vec![t_max];
            lo.extend(vec![0.0; m - 1]);
            hi.extend(vec![1.0; m - 1]);
            stratify(&lo, &hi, count, jitter, &mut rng)
                .into_iter()
                .map(|c| {
                    let mut x = spiral_point(c.at[0]).to_vec();
                    x.extend_from_slice(&c.at[1..]);
                    let t_cell = Cell { lo: vec![c.lo[0]], hi: vec![c.hi[0]], at: vec![] };
                    let w = gauss(&t_cell, |t| spiral_speed(t[0])) * c.volume() / (c.hi[0] - c.lo[0]);
                    (x, w)
                })
                .unzip()
        }
        Shape::Koch { level } => polyline_cloud(&koch_vertices(level), count, jitter, &mut rng),
        Shape::GapSquare { gap } => {
            let a = 0.5 - 0.5 * gap;
            let v = [[0.5 + 0.5 * gap, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0], [a, 0.0]];
            polyline_cloud(&v, count, jitter, &mut rng)
        }
        Shape::HalfSegment { n, length } => stratify(&[0.0], &[length], count, jitter, &mut rng)
            .into_iter()
            .map(|c| (pad(c.at.clone(), n), c.volume()))
            .unzip(),
    };
    let m = spec.shape.intrinsic_dim();
    let tag = serde_json::to_string(spec).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    Ok(PointCloud::from_points(m, &points, weights)?.with_provenance(format!("generate {tag}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn circle_length() {
        let c = generate(&GeneratorSpec::new(Shape::default_for("sphere", 1).unwrap(), 10_000, 1)).unwrap();
        assert_eq!(c.len(), 10_000);
        assert!(rel(c.total_mass(), 2.0 * PI) < 1e-12);
        for p in c.points() {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_area_exact() {
        for m in 2..=4 {
            let s = GeneratorSpec::new(Shape::Sphere { m, n: m + 2, radius: 1.5 }, 5000, 2);
            let c = generate(&s).unwrap();
            assert_eq!(c.len(), 5000);
            assert!(rel(c.total_mass(), s.shape.analytic_measure().unwrap()) < 1e-10, "m = {m}");
            for p in c.points() {
                assert!((crate::vecops::norm(p) - 1.5).abs() < 1e-12);
            }
        }
        assert!(rel(sphere_area(2), 4.0 * PI) < 1e-14);
    }

    #[test]
    fn exact_masses() {
        for kind in ["torus", "plane_disk", "koch", "gap_square", "union_spheres", "half_segment"] {
            for m in [1, 2] {
                let s = GeneratorSpec::new(Shape::default_for(kind, m).unwrap(), 3000, 5);
                let c = generate(&s).unwrap();
                assert_eq!(c.len(), 3000);
                assert!(rel(c.total_mass(), s.shape.analytic_measure().unwrap()) < 1e-10, "{kind} m={m}");
            }
        }
    }

    #[test]
    fn graph_area_converges() {
        // no closed form for the paraboloid over a square; compare two resolutions
        let h = Height { coeff: 1.0, power: 2.0 };
        let shape = Shape::Graph { m: 2, half_width: 1.0, height: h };
        let a = generate(&GeneratorSpec::new(shape.clone(), 2500, 1)).unwrap().total_mass();
        let b = generate(&GeneratorSpec::new(shape, 10_000, 1)).unwrap().total_mass();
        assert!(rel(a, b) < 1e-4);
        // |w|^2 on [-1,1]: arclength = √5 + asinh(2)/2
        let line = Shape::Graph { m: 1, half_width: 1.0, height: h };
        let l = generate(&GeneratorSpec::new(line, 1000, 1)).unwrap().total_mass();
        assert!(rel(l, 5f64.sqrt() + 2f64.asinh() / 2.0) < 1e-8);
    }

    #[test]
    fn spiral_radii() {
        let s = GeneratorSpec::new(Shape::Spiral { m: 1, t_min: 0.2, t_max: 1.0 }, 400, 9).with_jitter(0.0);
        let c = generate(&s).unwrap();
        let h = 0.8 / 400.0;
        for (i, p) in c.points().enumerate() {
            let t = 0.2 + (i as f64 + 0.5) * h;
            let r = p[0].hypot(p[1]);
            let want = 2f64.powf(-(2f64.powf(1.0 / t)));
            assert!(rel(r, want) < 1e-12, "t = {t}");
        }
        // first point sits super-exponentially close to the origin
        assert!(c.point(0)[0].hypot(c.point(0)[1]) < 1e-9);
    }

    #[test]
    fn koch_level_one_has_twelve_sides() {
        let v = koch_vertices(1);
        assert_eq!(v.len(), 13);
        for w in v.windows(2) {
            assert!(((w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]) - 1.0 / 3.0).abs() < 1e-14);
        }
        // the bump on the base edge points away from the triangle
        assert!(v[10][1] < 0.0);
    }

    #[test]
    fn gap_is_empty() {
        let c = generate(&GeneratorSpec::new(Shape::GapSquare { gap: 0.2 }, 2000, 3)).unwrap();
        assert!(c.points().all(|p| !(p[1] == 0.0 && p[0] > 0.4 && p[0] < 0.6)));
    }

    #[test]
    fn invalid_specs() {
        let s = GeneratorSpec::new(Shape::default_for("sphere", 2).unwrap(), 15, 0);
        assert!(matches!(generate(&s), Err(Error::InvalidSpec(_))));
        let s = GeneratorSpec::new(Shape::Torus { major: 1.0, minor: 1.0 }, 100, 0);
        assert!(matches!(generate(&s), Err(Error::InvalidSpec(_))));
        assert!(matches!(Shape::default_for("blob", 1), Err(Error::InvalidSpec(_))));
        let s = GeneratorSpec::new(Shape::Spiral { m: 1, t_min: 0.05, t_max: 1.0 }, 100, 0);
        assert!(matches!(generate(&s), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn deterministic() {
        let s = GeneratorSpec::new(Shape::default_for("torus", 2).unwrap(), 500, 11);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
        let t = GeneratorSpec { seed: 12, ..s.clone() };
        assert_ne!(generate(&s).unwrap(), generate(&t).unwrap());
    }
}
