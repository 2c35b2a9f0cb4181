//! Cone-growing search for a voluminous simplex rooted at a cloud point.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::constants::h0_choice;
use crate::cones::cone_ratio;
use crate::error::{Error, Result};
use crate::flatness::{default_schedule, tangent_plane, FlatnessOptions, PlaneFit};
use crate::grassmann::Subspace;
use crate::pointcloud::{ball_query, Closure, KdTree, PointCloud};
use crate::rng::stream;
use crate::simplex::{voluminous_classify, Simplex, VolClass, VolClassParams};
use crate::vecops::{norm, sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub delta: f64,
    /// Allowed offset of an axis point from its target, relative to ρ.
    pub point_tol: f64,
    pub max_stages: usize,
    /// Initial radius of the tangent schedule; a quarter of the cloud's
    /// diameter bound when absent.
    pub tangent_r0: Option<f64>,
    /// Random rotations of the stage frame tried when m ≥ 2.
    pub frames: usize,
    pub seed: u64,
    pub flat: FlatnessOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            delta: 0.25,
            point_tol: 0.05,
            max_stages: 32,
            tangent_r0: None,
            frames: 64,
            seed: 0,
            flat: FlatnessOptions { restarts: 4, certify: false, ..FlatnessOptions::default() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    A,
    B,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageLog {
    pub rho: f64,
    pub plane: Subspace,
    pub case: Case,
    /// Largest projected offset of an axis point from its target, relative to ρ.
    pub target_offset: f64,
    /// Largest distance from P found in the annulus, relative to ρ.
    pub max_height: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub simplex: Simplex,
    pub vertices: Vec<usize>,
    pub stopping_distance: f64,
    /// η(δ, m); membership is verified at half this value.
    pub eta: f64,
    pub classify: VolClass,
    pub tangent: Subspace,
    pub stages: Vec<StageLog>,
}

/// First entry of the cloud into x₀ + C(δ, H) beyond `after`.
fn first_entry(cloud: &PointCloud, x0: &[f64], h: &Subspace, delta: f64, after: f64) -> Option<f64> {
    cloud
        .points()
        .filter_map(|p| {
            let v = sub(p, x0);
            let r = norm(&v);
            (r > after && cone_ratio(h, &v) >= delta).then_some(r)
        })
        .min_by(f64::total_cmp)
}

/// Random orthogonal m×m matrices; the identity and sign flips come first.
fn rotations(m: usize, count: usize, seed: u64, stage: usize) -> Vec<DMatrix<f64>> {
    let mut out = vec![DMatrix::identity(m, m)];
    for s in 0..m {
        let mut f = DMatrix::identity(m, m);
        f[(s, s)] = -1.0;
        out.push(f);
    }
    if m >= 2 {
        let mut rng = stream(seed, stage as u64);
        for _ in 0..count {
            let g = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng));
            out.push(g.qr().q());
        }
    }
    out
}

struct AxisPick {
    offset: f64,
    points: Vec<usize>,
    axis: usize,
}

/// For each axis of the rotated frame, the ball point whose projection is closest to r·e_i.
fn pick_axes(ball: &[usize], proj: &[Vec<f64>], rot: &DMatrix<f64>, r: f64) -> AxisPick {
    let m = rot.nrows();
    let mut offset = 0.0f64;
    let mut worst_axis = 0;
    let mut points = Vec::with_capacity(m);
    for i in 0..m {
        let target: Vec<f64> = (0..m).map(|k| r * rot[(k, i)]).collect();
        let (d, j) = ball
            .iter()
            .zip(proj)
            .map(|(&j, p)| (norm(&sub(p, &target)), j))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .unwrap_or((f64::INFINITY, usize::MAX));
        if d > offset {
            offset = d;
            worst_axis = i;
        }
        points.push(j);
    }
    AxisPick { offset, points, axis: worst_axis }
}

/// Stage-by-stage search for T = simp(x₀, …, x_{m+1}) ∈ V_m(η, d).
///
/// Axis points are chosen by their projection onto the stage plane, within
/// `point_tol·ρ` of the target; this replaces the linking argument that
/// guarantees them for admissible sets.
pub fn voluminous_search(cloud: &PointCloud, x0_index: usize, opts: &SearchOptions) -> Result<SearchOutcome> {
    let delta = opts.delta;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta must lie in (0,1), got {delta}")));
    }
    if x0_index >= cloud.len() {
        return Err(Error::InvalidInput(format!("point index {x0_index} out of range")));
    }
    let m = cloud.intrinsic_dim();
    let x0 = cloud.point(x0_index).to_vec();
    let h0 = h0_choice(delta)?;
    let mf = m as f64;
    let fact: f64 = (1..=m).map(|i| i as f64).product();
    let eta = ((1.0 - delta * delta).sqrt() / (2.0 * fact.powf(1.0 / mf))).min(0.5 * h0 * delta);

    let r0 = opts.tangent_r0.unwrap_or(0.25 * cloud.diameter_bound());
    let tangent = tangent_plane(cloud, &x0, &default_schedule(r0, 16), PlaneFit::Minimax, &opts.flat)?.tangent;

    let mut plane = tangent.clone();
    let mut rho = first_entry(cloud, &x0, &plane, delta, 0.0).ok_or(Error::MaxStagesExceeded(0))?;
    let mut stages = Vec::new();
    for stage in 1..=opts.max_stages {
        let r = (1.0 - delta * delta).sqrt() * rho;
        let ball = ball_query(cloud, &x0, 2.0 * rho, Closure::Closed);
        let proj: Vec<Vec<f64>> = ball.iter().map(|&i| plane.coords(&sub(cloud.point(i), &x0))).collect();
        let best = rotations(m, opts.frames, opts.seed, stage)
            .iter()
            .map(|rot| pick_axes(&ball, &proj, rot, r))
            .min_by(|a, b| a.offset.total_cmp(&b.offset))
            .expect("at least the identity frame");
        if best.offset > opts.point_tol * rho {
            return Err(Error::TargetPointMissing { stage, axis: best.axis });
        }
        let spokes: Vec<Vec<f64>> = best.points.iter().map(|&i| sub(cloud.point(i), &x0)).collect();
        let p = Subspace::span(&spokes).map_err(|_| Error::TargetPointMissing { stage, axis: best.axis })?;

        // case A: a point of the annulus A(ρ/2, 2ρ) far from x₀ + P
        let (height, z) = ball
            .iter()
            .filter_map(|&i| {
                let v = sub(cloud.point(i), &x0);
                let nv = norm(&v);
                (nv >= 0.5 * rho).then(|| (p.perp_norm(&v), i))
            })
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
            .unwrap_or((0.0, usize::MAX));
        if height >= h0 * delta * rho {
            stages.push(StageLog { rho, plane: plane.clone(), case: Case::A, target_offset: best.offset / rho, max_height: height / rho });
            let mut vertices = vec![x0_index];
            vertices.extend(&best.points);
            vertices.push(z);
            let simplex = Simplex::new(vertices.iter().map(|&i| cloud.point(i).to_vec()).collect())?;
            let d = 2.0 * rho;
            let classify = voluminous_classify(&simplex, &VolClassParams { eta: 0.5 * eta, d, k: m })?;
            return Ok(SearchOutcome { simplex, vertices, stopping_distance: d, eta, classify, tangent, stages });
        }
        stages.push(StageLog { rho, plane: plane.clone(), case: Case::B, target_offset: best.offset / rho, max_height: height / rho });
        plane = p;
        rho = first_entry(cloud, &x0, &plane, delta, rho).ok_or(Error::MaxStagesExceeded(stage))?;
    }
    Err(Error::MaxStagesExceeded(opts.max_stages))
}

/// Fraction of grid nodes of (x+H) ∩ B(x, √(1−δ²)ρ) within one grid spacing of
/// the projection of Σ ∩ B(x, ρ).
pub fn big_projection_check(cloud: &PointCloud, x: &[f64], rho: f64, h: &Subspace, delta: f64, grid: usize) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidInput(format!("rho must be positive, got {rho}")));
    }
    let m = h.dim();
    let s = (1.0 - delta * delta).sqrt() * rho;
    let g = grid.max(2);
    let step = 2.0 * s / (g - 1) as f64;
    let idx = ball_query(cloud, x, rho, Closure::Closed);
    if idx.is_empty() {
        return Ok(0.0);
    }
    let flat: Vec<f64> = idx.iter().flat_map(|&i| h.coords(&sub(cloud.point(i), x))).collect();
    let tree = KdTree::new(&flat, m);
    let mut total = 0usize;
    let mut covered = 0usize;
    let mut ix = vec![0usize; m];
    loop {
        let u: Vec<f64> = ix.iter().map(|&i| -s + step * i as f64).collect();
        if u.iter().map(|c| c * c).sum::<f64>() <= s * s * (1.0 + 1e-12) {
            total += 1;
            if tree.nearest_d2(&u) <= step * step {
                covered += 1;
            }
        }
        let mut k = 0;
        loop {
            if k == m {
                return Ok(covered as f64 / total.max(1) as f64);
            }
            ix[k] += 1;
            if ix[k] < g {
                break;
            }
            ix[k] = 0;
            k += 1;
        }
    }
}
