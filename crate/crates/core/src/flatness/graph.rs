//! Tangent planes from shrinking balls, graph patches F_x and their derivatives.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{beta_number, flatness, FlatnessOptions};
use crate::error::{Error, Result};
use crate::grassmann::{grass_distance, inverse_projection, InverseMode, Subspace};
use crate::pointcloud::{ball_query, Closure, PointCloud};
use crate::vecops::{norm, sub};

/// Which plane is fitted at each radius of a tangent schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneFit {
    /// θ̄-optimal (best approximating) plane.
    Bap,
    /// β̄-optimal minimax plane; cheaper.
    Minimax,
}

#[derive(Debug, Clone, Serialize)]
pub struct TangentRow {
    pub radius: f64,
    pub points: usize,
    pub beta_bar: f64,
    /// dgras to the plane at the previous (larger) radius.
    pub dist_to_prev: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TangentEstimate {
    pub tangent: Subspace,
    pub final_radius: f64,
    pub table: Vec<TangentRow>,
    /// First radius that retained too few points, if the schedule was cut short.
    pub truncated_at: Option<f64>,
    /// Consecutive distances never increased.
    pub cauchy: bool,
    /// Plane at the radius where consecutive planes moved least: below it
    /// sampling noise grows faster than the planes converge.
    pub settled: Subspace,
    pub settled_radius: f64,
}

/// Which plane of a tangent schedule a graph patch uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TangentStop {
    /// Smallest radius holding enough points.
    Smallest,
    /// Radius of the smallest consecutive distance.
    Settled,
}

impl TangentEstimate {
    pub fn plane(&self, stop: TangentStop) -> &Subspace {
        match stop {
            TangentStop::Smallest => &self.tangent,
            TangentStop::Settled => &self.settled,
        }
    }
}

/// ρ_k = 2^{−k} r₀ for k = 0..steps.
pub fn default_schedule(r0: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|k| r0 * 0.5f64.powi(k as i32)).collect()
}

/// Points a radius must retain to be used: max(3(m+2), 20).
pub fn min_points(m: usize) -> usize {
    (3 * (m + 2)).max(20)
}

fn fit_plane(cloud: &PointCloud, x: &[f64], r: f64, fit: PlaneFit, opts: &FlatnessOptions) -> Result<(Subspace, f64)> {
    match fit {
        PlaneFit::Bap => {
            let f = flatness(cloud, x, r, opts)?;
            Ok((f.best_plane, f.beta_bar))
        }
        PlaneFit::Minimax => {
            let (b, h, _) = beta_number(cloud, x, r, opts)?;
            Ok((h, b))
        }
    }
}

/// Plane fits along a decreasing schedule; the tangent is the plane at the
/// smallest radius that still holds enough points.
pub fn tangent_plane(
    cloud: &PointCloud,
    x: &[f64],
    schedule: &[f64],
    fit: PlaneFit,
    opts: &FlatnessOptions,
) -> Result<TangentEstimate> {
    let need = min_points(cloud.intrinsic_dim());
    let mut table: Vec<TangentRow> = Vec::new();
    let mut last: Option<(Subspace, f64)> = None;
    let mut planes: Vec<Subspace> = Vec::new();
    let mut truncated_at = None;
    for &r in schedule {
        let count = ball_query(cloud, x, r, Closure::Closed).len();
        if count < need {
            truncated_at = Some(r);
            break;
        }
        let (plane, beta_bar) = fit_plane(cloud, x, r, fit, opts)?;
        let dist_to_prev = match &last {
            Some((p, _)) => Some(grass_distance(p, &plane)?),
            None => None,
        };
        table.push(TangentRow { radius: r, points: count, beta_bar, dist_to_prev });
        planes.push(plane.clone());
        last = Some((plane, r));
    }
    let Some((tangent, final_radius)) = last else {
        let r = schedule.first().copied().unwrap_or(0.0);
        let got = ball_query(cloud, x, r, Closure::Closed).len();
        return Err(Error::InsufficientPoints { radius: r, needed: need, got });
    };
    let dists: Vec<f64> = table.iter().filter_map(|t| t.dist_to_prev).collect();
    let cauchy = dists.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let settled_at = dists
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map_or(planes.len() - 1, |(i, _)| i + 1);
    Ok(TangentEstimate {
        tangent,
        final_radius,
        settled: planes[settled_at].clone(),
        settled_radius: table[settled_at].radius,
        table,
        truncated_at,
        cauchy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphOptions {
    /// Multiplies the two-sheet threshold 4·resolution.
    pub lip_slack: f64,
    /// Steps of the tangent schedule at each fiber point.
    pub schedule_steps: usize,
    pub stop: TangentStop,
    pub flat: FlatnessOptions,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            lip_slack: 1.0,
            schedule_steps: 12,
            stop: TangentStop::Settled,
            flat: FlatnessOptions { restarts: 2, certify: false, ..FlatnessOptions::default() },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphNode {
    /// Coordinates of the node in the tangent frame.
    pub w: Vec<f64>,
    /// Index of the fiber representative.
    pub point: usize,
    /// Tangent coordinates π_x(y − x) of the representative; DF belongs here.
    pub rep_w: Vec<f64>,
    /// F_x(w) = Q_x(y − x), an ambient vector.
    pub value: Vec<f64>,
    /// DF_x(w) as an n×m ambient matrix, row-major; `None` if the local tangent
    /// is too far from T_x to invert the projection.
    pub df: Option<Vec<f64>>,
    /// ‖(π_x restricted to T_y)^{-1}‖.
    pub l_norm: f64,
    /// Tangent estimate at the representative.
    pub local_tangent: Subspace,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphPatch {
    pub base: Vec<f64>,
    pub base_index: usize,
    pub tangent: Subspace,
    pub radius: f64,
    pub resolution: f64,
    pub nodes: Vec<GraphNode>,
    pub empty_nodes: usize,
    pub empty_fraction: f64,
}

impl GraphPatch {
    pub fn df_matrix(&self, i: usize) -> Option<DMatrix<f64>> {
        let n = self.base.len();
        let m = self.tangent.dim();
        self.nodes[i].df.as_ref().map(|d| DMatrix::from_row_slice(n, m, d))
    }
}

fn grid_nodes(m: usize, half: f64, h: f64) -> Vec<Vec<f64>> {
    let k = (half / h).floor() as i64;
    let mut out = Vec::new();
    let mut idx = vec![-k; m];
    loop {
        let w: Vec<f64> = idx.iter().map(|&i| i as f64 * h).collect();
        if w.iter().map(|c| c * c).sum::<f64>() <= half * half * (1.0 + 1e-12) {
            out.push(w);
        }
        let mut d = 0;
        loop {
            if d == m {
                return out;
            }
            idx[d] += 1;
            if idx[d] <= k {
                break;
            }
            idx[d] = -k;
            d += 1;
        }
    }
}

/// DF_x at y: Q_x ∘ L_y on the frame of T_x, with L_y = (π_x|T_y)^{-1}.
fn derivative(tx: &Subspace, ty: &Subspace) -> Result<(DMatrix<f64>, f64)> {
    let n = tx.ambient_dim();
    let m = tx.dim();
    let mut df = DMatrix::zeros(n, m);
    for j in 0..m {
        let e = tx.vector(j);
        let l = inverse_projection(tx, ty, &e, InverseMode::Plane)?;
        let q = tx.perp(&l);
        for d in 0..n {
            df[(d, j)] = q[d];
        }
    }
    let s = (tx.frame().transpose() * ty.frame()).singular_values();
    let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((df, 1.0 / smin))
}

/// Samples F_x on a grid of T_x ∩ B(½R) with spacing `resolution`.
///
/// A node's fiber is the set of cloud points in B(x, 2R) whose tangent
/// projection lies within `resolution` of the node. Two fiber points farther
/// apart than 4·lip_slack·resolution mean a second sheet.
pub fn graph_extract(
    cloud: &PointCloud,
    x_index: usize,
    big_r: f64,
    resolution: f64,
    opts: &GraphOptions,
) -> Result<GraphPatch> {
    if !(big_r > 0.0 && resolution > 0.0) {
        return Err(Error::InvalidInput("R and resolution must be positive".into()));
    }
    let m = cloud.intrinsic_dim();
    let x = cloud.point(x_index).to_vec();
    let schedule = default_schedule(0.5 * big_r, opts.schedule_steps);
    let tx = tangent_plane(cloud, &x, &schedule, PlaneFit::Minimax, &opts.flat)?.plane(opts.stop).clone();
    let cand = ball_query(cloud, &x, 2.0 * big_r, Closure::Closed);
    let proj: Vec<Vec<f64>> = cand.iter().map(|&i| tx.coords(&sub(cloud.point(i), &x))).collect();
    let threshold = 4.0 * opts.lip_slack * resolution;
    let ws = grid_nodes(m, 0.5 * big_r, resolution);

    let fibers: Vec<Option<usize>> = ws
        .par_iter()
        .map(|w| {
            let fiber: Vec<(f64, usize)> = cand
                .iter()
                .zip(&proj)
                .filter_map(|(&i, p)| {
                    let d = norm(&sub(p, w));
                    (d <= resolution).then_some((d, i))
                })
                .collect();
            for (a, &(_, i)) in fiber.iter().enumerate() {
                for &(_, j) in &fiber[a + 1..] {
                    let spread = norm(&sub(cloud.point(i), cloud.point(j)));
                    if spread > threshold {
                        return Err(Error::MultiSheet { node: tx.embed(w), spread, threshold });
                    }
                }
            }
            Ok(fiber.iter().min_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1))).map(|&(_, i)| i))
        })
        .collect::<Result<_>>()?;

    let mut nodes = Vec::new();
    let mut empty_nodes = 0;
    let built: Vec<Option<GraphNode>> = ws
        .par_iter()
        .zip(&fibers)
        .map(|(w, f)| {
            let &Some(i) = f else { return Ok(None) };
            let origin = w.iter().all(|&c| c == 0.0);
            let n = cloud.ambient_dim();
            if origin {
                // F_x(0) = 0 and DF_x(0) = 0 by construction
                return Ok(Some(GraphNode {
                    w: w.clone(),
                    point: x_index,
                    rep_w: vec![0.0; m],
                    value: vec![0.0; n],
                    df: Some(vec![0.0; n * m]),
                    l_norm: 1.0,
                    local_tangent: tx.clone(),
                }));
            }
            let y = cloud.point(i);
            let value = tx.perp(&sub(y, &x));
            let sched = default_schedule(0.5 * big_r, opts.schedule_steps);
            let ty = tangent_plane(cloud, y, &sched, PlaneFit::Minimax, &opts.flat)?.plane(opts.stop).clone();
            let (df, l_norm) = match derivative(&tx, &ty) {
                Ok((d, l)) => (Some(d.transpose().as_slice().to_vec()), l),
                Err(_) => (None, f64::INFINITY),
            };
            let rep_w = tx.coords(&sub(y, &x));
            Ok(Some(GraphNode { w: w.clone(), point: i, rep_w, value, df, l_norm, local_tangent: ty }))
        })
        .collect::<Result<_>>()?;
    for b in built {
        match b {
            Some(node) => nodes.push(node),
            None => empty_nodes += 1,
        }
    }
    let total = ws.len().max(1);
    Ok(GraphPatch {
        base: x,
        base_index: x_index,
        tangent: tx,
        radius: big_r,
        resolution,
        nodes,
        empty_nodes,
        empty_fraction: empty_nodes as f64 / total as f64,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderFit {
    /// Slope of the upper envelope of log‖ΔDF‖ against log|Δw|.
    pub exponent: f64,
    /// exp(intercept) of the envelope fit.
    pub constant: f64,
    /// Slope of the plain least-squares fit over all pairs.
    pub pairwise_slope: f64,
    pub pairs: usize,
    pub bins: usize,
    pub r_squared: f64,
}

fn op_norm(a: &DMatrix<f64>) -> f64 {
    a.singular_values().iter().copied().fold(0.0, f64::max)
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

/// Empirical Hölder exponent of DF over a patch, against the distance of the
/// fiber representatives where each DF was estimated.
///
/// Pairs are binned by log-distance and the largest ‖ΔDF‖ in each bin is kept,
/// which estimates the modulus of continuity; the slope of its log-log fit is the
/// exponent. Pairs with ‖ΔDF‖ below `noise_floor` are dropped.
pub fn holder_exponent(patch: &GraphPatch, noise_floor: f64) -> Result<HolderFit> {
    let with_df: Vec<(Vec<f64>, DMatrix<f64>)> = (0..patch.nodes.len())
        .filter_map(|i| patch.df_matrix(i).map(|d| (patch.nodes[i].rep_w.clone(), d)))
        .collect();
    if with_df.len() < 10 {
        return Err(Error::InsufficientPairs(with_df.len() * with_df.len().saturating_sub(1) / 2));
    }
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for i in 0..with_df.len() {
        for j in i + 1..with_df.len() {
            let dw = norm(&sub(&with_df[i].0, &with_df[j].0));
            let ddf = op_norm(&(&with_df[i].1 - &with_df[j].1));
            if dw > 0.0 && ddf > noise_floor {
                pairs.push((dw.ln(), ddf.ln()));
            }
        }
    }
    if pairs.len() < 10 {
        return Err(Error::InsufficientPairs(pairs.len()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    let (pairwise_slope, _, _) = least_squares(&xs, &ys);
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let nb = 12usize;
    let width = (hi - lo) / nb as f64;
    let mut env: Vec<Option<(f64, f64)>> = vec![None; nb];
    for &(x, y) in &pairs {
        let b = if width > 0.0 { (((x - lo) / width) as usize).min(nb - 1) } else { 0 };
        if env[b].is_none_or(|(_, ey)| y > ey) {
            env[b] = Some((x, y));
        }
    }
    let pts: Vec<(f64, f64)> = env.into_iter().flatten().collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPairs(pairs.len()));
    }
    let (ex, ey): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let (slope, intercept, r2) = least_squares(&ex, &ey);
    Ok(HolderFit {
        exponent: slope,
        constant: intercept.exp(),
        pairwise_slope,
        pairs: pairs.len(),
        bins: pts.len(),
        r_squared: r2,
    })
}

/// ‖DF(w₁) − DF(w₀)‖ against 4·dgras(T_{y₀}, T_{y₁}) over node pairs whose
/// projection inverses have norm ≤ 2. Returns (pairs checked, violations, worst excess).
pub fn derivative_angle_check(patch: &GraphPatch, slack: f64) -> Result<(usize, usize, f64)> {
    let ok: Vec<usize> = (0..patch.nodes.len())
        .filter(|&i| patch.nodes[i].df.is_some() && patch.nodes[i].l_norm <= 2.0)
        .collect();
    let mut checked = 0;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for (a, &i) in ok.iter().enumerate() {
        let di = patch.df_matrix(i).expect("filtered");
        for &j in &ok[a + 1..] {
            let dj = patch.df_matrix(j).expect("filtered");
            let lhs = op_norm(&(&di - &dj));
            let rhs = 4.0 * grass_distance(&patch.nodes[i].local_tangent, &patch.nodes[j].local_tangent)?;
            checked += 1;
            worst = worst.max(lhs - rhs);
            if lhs > rhs + slack {
                violations += 1;
            }
        }
    }
    Ok((checked, violations, worst))
}
