//! β and θ flatness numbers, best approximating planes and the gap-ratio scan.

mod graph;

pub use graph::{
    default_schedule, derivative_angle_check, graph_extract, holder_exponent, min_points, tangent_plane, GraphNode, GraphOptions, GraphPatch,
    HolderFit, PlaneFit, TangentEstimate, TangentRow, TangentStop,
};

use nalgebra::DMatrix;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::Subspace;
use crate::pointcloud::{ball_query, Closure, KdTree, PointCloud};
use crate::rng::stream;
use crate::tol::TOL_GEOM;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatnessOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub disk_grid: usize,
    /// Dense Grassmannian net after the local search, for n ≤ 4 and m ≤ 2.
    pub certify: bool,
    /// Objective evaluations allowed in the θ refinement.
    pub theta_evals: usize,
    pub seed: u64,
}

impl Default for FlatnessOptions {
    fn default() -> Self {
        FlatnessOptions { restarts: 8, max_iters: 200, disk_grid: 33, certify: true, theta_evals: 400, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverDiagnostics {
    pub restarts: usize,
    pub iterations: usize,
    /// Net optimum minus the returned value; `None` when no net was run.
    pub certified_gap: Option<f64>,
    pub theta_evals: usize,
    pub grid_nodes: usize,
    pub grid_spacing: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatnessResult {
    pub center: Vec<f64>,
    pub radius: f64,
    pub beta_bar: f64,
    /// Open-ball variant.
    pub beta: f64,
    pub theta_bar: f64,
    /// Open-ball variant, evaluated at the θ̄-optimal plane.
    pub theta: f64,
    /// Best approximating plane (θ̄-optimal).
    pub best_plane: Subspace,
    /// Minimax plane realizing `beta_bar`.
    pub beta_plane: Subspace,
    pub point_count: usize,
    pub diagnostics: SolverDiagnostics,
}

/// Points of a ball relative to its center, with cached squared norms.
struct Local {
    v: DMatrix<f64>,
    nv2: Vec<f64>,
}

impl Local {
    fn new(cloud: &PointCloud, x: &[f64], idx: &[usize]) -> Self {
        let n = cloud.ambient_dim();
        let mut v = DMatrix::zeros(n, idx.len());
        let mut nv2 = Vec::with_capacity(idx.len());
        for (j, &i) in idx.iter().enumerate() {
            let p = cloud.point(i);
            let mut s = 0.0;
            for d in 0..n {
                let c = p[d] - x[d];
                v[(d, j)] = c;
                s += c * c;
            }
            nv2.push(s);
        }
        Local { v, nv2 }
    }

    fn len(&self) -> usize {
        self.nv2.len()
    }

    /// max_i dist(v_i, H) for a plane given by its frame.
    fn max_dist(&self, frame: &DMatrix<f64>) -> f64 {
        if self.len() == 0 {
            return 0.0;
        }
        let c = frame.transpose() * &self.v;
        (0..self.len())
            .map(|j| (self.nv2[j] - c.column(j).norm_squared()).max(0.0))
            .fold(0.0, f64::max)
            .sqrt()
    }
}

/// Planes near a base plane T: H(A) = span(T + N A) with A an (n−m)×m matrix.
struct Chart {
    t: DMatrix<f64>,
    nrm: DMatrix<f64>,
    /// T^T v and N^T v for every local point.
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    nv2: Vec<f64>,
}

impl Chart {
    fn new(base: &Subspace, local: &Local) -> Self {
        let t = base.frame().clone();
        let nrm = base.complement().frame().clone();
        let a = t.transpose() * &local.v;
        let b = nrm.transpose() * &local.v;
        Chart { t, nrm, a, b, nv2: local.nv2.clone() }
    }

    fn frame(&self, amat: &DMatrix<f64>) -> DMatrix<f64> {
        let raw = &self.t + &self.nrm * amat;
        raw.qr().q()
    }

    fn plane(&self, amat: &DMatrix<f64>) -> Subspace {
        Subspace::from_frame(self.frame(amat)).expect("QR frame is orthonormal")
    }

    /// Distances of all points to H(A), plus the solved coefficients and residual data.
    fn eval(&self, amat: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
        let m = self.t.ncols();
        let g = &self.a + amat.transpose() * &self.b;
        let mm = DMatrix::<f64>::identity(m, m) + amat.transpose() * amat;
        let c = mm.cholesky().expect("I + A^T A is positive definite").solve(&g);
        let d = (0..self.nv2.len())
            .map(|j| (self.nv2[j] - g.column(j).dot(&c.column(j))).max(0.0).sqrt())
            .collect();
        (d, c)
    }

    /// Gradient of dist_j with respect to A: −(b_j − A c_j) c_j^T / d_j.
    fn grad(&self, amat: &DMatrix<f64>, c: &DMatrix<f64>, j: usize, dj: f64) -> DMatrix<f64> {
        let cj = c.column(j).into_owned();
        let r = self.b.column(j) - amat * &cj;
        -(r * cj.transpose()) / dj.max(1e-300)
    }
}

fn argmax2(d: &[f64]) -> (usize, Option<usize>) {
    let mut best = 0;
    let mut second: Option<usize> = None;
    for i in 1..d.len() {
        if d[i] > d[best] {
            second = Some(best);
            best = i;
        } else if second.is_none_or(|s| d[i] > d[s]) {
            second = Some(i);
        }
    }
    (best, second)
}

/// Min-norm point of the segment between two gradients.
fn min_norm_pair(g1: &DMatrix<f64>, g2: &DMatrix<f64>) -> DMatrix<f64> {
    let diff = g1 - g2;
    let dd = diff.norm_squared();
    if dd == 0.0 {
        return g1.clone();
    }
    let t = (-(g2.dot(&diff)) / dd).clamp(0.0, 1.0);
    g1 * t + g2 * (1.0 - t)
}

/// Subgradient descent with backtracking on max_j dist_j(A).
fn minimax_descent(chart: &Chart, a0: DMatrix<f64>, max_iters: usize) -> (f64, DMatrix<f64>, usize) {
    let mut a = a0;
    let (mut d, mut c) = chart.eval(&a);
    let (mut i, mut i2) = argmax2(&d);
    let mut f = d[i];
    let mut step = 0.25;
    let mut iters = 0;
    while iters < max_iters && step > 1e-13 && f > 0.0 {
        iters += 1;
        let g1 = chart.grad(&a, &c, i, d[i]);
        let mut dirs = vec![g1.clone()];
        if let Some(j) = i2 {
            if d[j] >= f - 4.0 * step * g1.norm() {
                dirs.push(min_norm_pair(&g1, &chart.grad(&a, &c, j, d[j])));
            }
        }
        let mut moved = false;
        for g in dirs {
            let gn = g.norm();
            if gn < 1e-15 {
                continue;
            }
            let cand = &a - g * (step / gn);
            let (dc, cc) = chart.eval(&cand);
            let (ic, ic2) = argmax2(&dc);
            if dc[ic] < f {
                a = cand;
                d = dc;
                c = cc;
                i = ic;
                i2 = ic2;
                f = d[i];
                moved = true;
                break;
            }
        }
        if moved {
            step *= 1.2;
        } else {
            step *= 0.5;
        }
    }
    (f, a, iters)
}

/// PCA plane through the origin of the weighted second-moment matrix.
fn pca_plane(local: &Local, weights: &[f64], m: usize) -> Subspace {
    let n = local.v.nrows();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for (j, w) in weights.iter().enumerate().take(local.len()) {
        let col = local.v.column(j);
        s += col * col.transpose() * *w;
    }
    let eig = s.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| eig.eigenvalues[q].total_cmp(&eig.eigenvalues[p]).then(p.cmp(&q)));
    let mut frame = DMatrix::zeros(n, m);
    for (k, &o) in order.iter().take(m).enumerate() {
        frame.set_column(k, &eig.eigenvectors.column(o));
    }
    Subspace::from_frame(frame.qr().q()).expect("eigenvectors are orthonormal")
}

fn fibonacci_dirs(n_dirs: usize) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n_dirs)
        .map(|i| {
            // upper hemisphere suffices for lines and hyperplane normals
            let z = (i as f64 + 0.5) / n_dirs as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            vec![r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// A dense set of planes in G(n,m) for n ≤ 4, m ≤ 2.
fn grassmann_net(n: usize, m: usize, seed: u64) -> Vec<Subspace> {
    match (n, m) {
        (2, 1) => (0..2000)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / 2000.0;
                Subspace::span(&[vec![t.cos(), t.sin()]]).expect("unit vector")
            })
            .collect(),
        (3, 1) => fibonacci_dirs(4000).into_iter().map(|d| Subspace::span(&[d]).expect("unit vector")).collect(),
        (3, 2) => fibonacci_dirs(4000)
            .into_iter()
            .map(|d| Subspace::span(&[d]).expect("unit vector").complement())
            .collect(),
        _ => {
            let mut rng = stream(seed, 1 << 32);
            (0..20_000).map(|_| Subspace::random(n, m, &mut rng)).collect()
        }
    }
}

struct BetaSolve {
    value: f64,
    plane: Subspace,
    iterations: usize,
    certified_gap: Option<f64>,
}

fn solve_beta(local: &Local, weights: &[f64], m: usize, opts: &FlatnessOptions) -> BetaSolve {
    let n = local.v.nrows();
    if local.len() == 0 || m == n {
        let plane = if m == n {
            Subspace::coordinate(n, &(0..n).collect::<Vec<_>>())
        } else {
            Subspace::coordinate(n, &(0..m).collect::<Vec<_>>())
        };
        return BetaSolve { value: 0.0, plane, iterations: 0, certified_gap: None };
    }
    let base = pca_plane(local, weights, m);
    let chart = Chart::new(&base, local);
    let k = n - m;
    let normal = Normal::new(0.0, 0.3).expect("valid sigma");
    let mut best: Option<(f64, DMatrix<f64>)> = None;
    let mut iterations = 0;
    for r in 0..opts.restarts.max(1) {
        let a0 = if r == 0 {
            DMatrix::zeros(k, m)
        } else {
            let mut rng = stream(opts.seed, r as u64);
            DMatrix::from_fn(k, m, |_, _| normal.sample(&mut rng))
        };
        let (f, a, it) = minimax_descent(&chart, a0, opts.max_iters);
        iterations += it;
        if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
            best = Some((f, a));
        }
    }
    let (mut value, a) = best.expect("at least one restart");
    let mut plane = chart.plane(&a);
    let mut certified_gap = None;
    if opts.certify && n <= 4 && m <= 2 {
        let net = grassmann_net(n, m, opts.seed);
        let (net_val, net_idx) = net
            .par_iter()
            .enumerate()
            .map(|(i, h)| (local.max_dist(h.frame()), i))
            .reduce(|| (f64::INFINITY, usize::MAX), |p, q| if q.0 < p.0 || (q.0 == p.0 && q.1 < p.1) { q } else { p });
        if net_val < value {
            let chart2 = Chart::new(&net[net_idx], local);
            let (f, a2, it) = minimax_descent(&chart2, DMatrix::zeros(k, m), opts.max_iters);
            iterations += it;
            if f < value {
                value = f;
                plane = chart2.plane(&a2);
            }
        }
        certified_gap = Some(net_val - value);
    }
    BetaSolve { value, plane, iterations, certified_gap }
}

/// Grid of the closed m-disk of radius r, per-axis count capped so the total stays ≤ 4096.
fn disk_grid(m: usize, r: f64, per_axis: usize) -> (Vec<Vec<f64>>, f64) {
    let cap = (4096f64.powf(1.0 / m as f64).floor() as usize).max(2);
    let g = per_axis.clamp(2, cap);
    let h = 2.0 * r / (g - 1) as f64;
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let u: Vec<f64> = idx.iter().map(|&i| -r + h * i as f64).collect();
        if u.iter().map(|c| c * c).sum::<f64>() <= r * r * (1.0 + 1e-12) {
            out.push(u);
        }
        let mut k = 0;
        loop {
            if k == m {
                return (out, h);
            }
            idx[k] += 1;
            if idx[k] < g {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Sum-form Hausdorff distance between ball points and the disk (x+H) ∩ B(x,r).
///
/// The cloud-to-disk side is exact; the disk side uses the grid nodes.
struct ThetaObjective<'a> {
    local: &'a Local,
    tree: KdTree,
    grid: &'a [Vec<f64>],
    r: f64,
}

impl ThetaObjective<'_> {
    fn eval(&self, frame: &DMatrix<f64>) -> f64 {
        if self.local.len() == 0 {
            return f64::INFINITY;
        }
        let c = frame.transpose() * &self.local.v;
        let mut s1 = 0.0f64;
        for j in 0..self.local.len() {
            let a2 = c.column(j).norm_squared();
            let over = (a2.sqrt() - self.r).max(0.0);
            s1 = s1.max((self.local.nv2[j] - a2).max(0.0) + over * over);
        }
        let mut s2 = 0.0f64;
        let n = frame.nrows();
        let mut p = vec![0.0; n];
        for u in self.grid {
            for (d, pd) in p.iter_mut().enumerate() {
                *pd = (0..u.len()).map(|k| frame[(d, k)] * u[k]).sum();
            }
            s2 = s2.max(self.tree.nearest_d2(&p));
        }
        s1.sqrt() + s2.sqrt()
    }
}

fn local_tree(local: &Local) -> KdTree {
    let n = local.v.nrows();
    KdTree::new(local.v.as_slice(), n)
}

/// Pattern search on the chart around `start`.
fn refine_theta(obj: &ThetaObjective, local: &Local, start: &Subspace, budget: usize) -> (f64, Subspace, usize) {
    let n = start.ambient_dim();
    let m = start.dim();
    let chart = Chart::new(start, local);
    let mut a = DMatrix::<f64>::zeros(n - m, m);
    let mut f = obj.eval(start.frame());
    let mut evals = 1;
    let mut step = 0.05;
    while step > 1e-4 && evals < budget {
        let mut best: Option<(f64, DMatrix<f64>)> = None;
        for idx in 0..a.len() {
            for sgn in [1.0, -1.0] {
                let mut cand = a.clone();
                cand[idx] += sgn * step;
                let fc = obj.eval(&chart.frame(&cand));
                evals += 1;
                if fc < f && best.as_ref().is_none_or(|(bf, _)| fc < *bf) {
                    best = Some((fc, cand));
                }
            }
        }
        match best {
            Some((fc, cand)) => {
                f = fc;
                a = cand;
            }
            None => step *= 0.5,
        }
    }
    (f, chart.plane(&a), evals)
}

fn check_ball(cloud: &PointCloud, x: &[f64], r: f64) -> Result<()> {
    if x.len() != cloud.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: cloud.ambient_dim(), got: x.len() });
    }
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// β̄ only: minimax plane through x over the closed ball.
pub fn beta_number(cloud: &PointCloud, x: &[f64], r: f64, opts: &FlatnessOptions) -> Result<(f64, Subspace, SolverDiagnostics)> {
    check_ball(cloud, x, r)?;
    let idx = ball_query(cloud, x, r, Closure::Closed);
    if idx.is_empty() {
        return Err(Error::EmptyBall);
    }
    let local = Local::new(cloud, x, &idx);
    let w: Vec<f64> = idx.iter().map(|&i| cloud.weights()[i]).collect();
    let s = solve_beta(&local, &w, cloud.intrinsic_dim(), opts);
    Ok((
        s.value / r,
        s.plane,
        SolverDiagnostics {
            restarts: opts.restarts,
            iterations: s.iterations,
            certified_gap: s.certified_gap.map(|g| g / r),
            theta_evals: 0,
            grid_nodes: 0,
            grid_spacing: 0.0,
        },
    ))
}

/// β̄, β, θ̄ and θ at (x, r).
///
/// Every plane visited is a feasible point for the β infimum, so β̄ is lowered
/// to the θ-optimal plane's value when that is smaller.
pub fn flatness(cloud: &PointCloud, x: &[f64], r: f64, opts: &FlatnessOptions) -> Result<FlatnessResult> {
    check_ball(cloud, x, r)?;
    let m = cloud.intrinsic_dim();
    let idx = ball_query(cloud, x, r, Closure::Closed);
    if idx.is_empty() {
        return Err(Error::EmptyBall);
    }
    let local = Local::new(cloud, x, &idx);
    let w: Vec<f64> = idx.iter().map(|&i| cloud.weights()[i]).collect();
    let bs = solve_beta(&local, &w, m, opts);
    let (grid, h) = disk_grid(m, r, opts.disk_grid);
    let obj = ThetaObjective { local: &local, tree: local_tree(&local), grid: &grid, r };
    let pca = pca_plane(&local, &w, m);
    let start = if obj.eval(pca.frame()) < obj.eval(bs.plane.frame()) { pca } else { bs.plane.clone() };
    let (theta_val, theta_plane, evals) = refine_theta(&obj, &local, &start, opts.theta_evals);

    let (mut beta_val, mut beta_plane) = (bs.value, bs.plane);
    let via_theta = local.max_dist(theta_plane.frame());
    if via_theta < beta_val {
        beta_val = via_theta;
        beta_plane = theta_plane.clone();
    }

    // open-ball variants
    let open: Vec<usize> = (0..idx.len()).filter(|&j| local.nv2[j] < r * r).collect();
    let open_local = Local::new(cloud, x, &open.iter().map(|&j| idx[j]).collect::<Vec<_>>());
    let beta_open = if open_local.len() == 0 {
        0.0
    } else {
        let ow: Vec<f64> = open.iter().map(|&j| w[j]).collect();
        let so = solve_beta(&open_local, &ow, m, &FlatnessOptions { certify: false, ..*opts });
        so.value.min(open_local.max_dist(beta_plane.frame()))
    };
    let theta_open = if open_local.len() == 0 {
        f64::INFINITY
    } else {
        let open_grid: Vec<Vec<f64>> =
            grid.iter().filter(|u| u.iter().map(|c| c * c).sum::<f64>() < r * r).cloned().collect();
        let o = ThetaObjective { local: &open_local, tree: local_tree(&open_local), grid: &open_grid, r };
        o.eval(theta_plane.frame())
    };

    Ok(FlatnessResult {
        center: x.to_vec(),
        radius: r,
        beta_bar: beta_val / r,
        beta: beta_open / r,
        theta_bar: theta_val / r,
        theta: theta_open / r,
        best_plane: theta_plane,
        beta_plane,
        point_count: idx.len(),
        diagnostics: SolverDiagnostics {
            restarts: opts.restarts,
            iterations: bs.iterations,
            certified_gap: bs.certified_gap.map(|g| g / r),
            theta_evals: evals,
            grid_nodes: grid.len(),
            grid_spacing: h,
        },
    })
}

/// θ̄ at (x, r); same computation as [`flatness`].
pub fn theta_number(cloud: &PointCloud, x: &[f64], r: f64, opts: &FlatnessOptions) -> Result<FlatnessResult> {
    flatness(cloud, x, r, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    /// β̄ above the floor: ratio θ̄/β̄ is finite.
    Ratio,
    /// β̄ below the floor but θ̄ above it: the gap condition fails for every M.
    Unbounded,
    /// Both below the floor: no information.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapRow {
    pub center: usize,
    pub radius: f64,
    pub beta_bar: f64,
    pub theta_bar: f64,
    pub ratio: f64,
    pub status: PairStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapScan {
    /// Largest finite θ̄/β̄.
    pub max_ratio: f64,
    pub unbounded_pairs: usize,
    pub skipped_pairs: usize,
    pub beta_floor: f64,
    pub rows: Vec<GapRow>,
}

/// Empirical M_Σ: max θ̄/β̄ over the given centers and radii.
pub fn gap_ratio_scan(
    cloud: &PointCloud,
    radii: &[f64],
    centers: &[usize],
    opts: &FlatnessOptions,
    beta_floor: f64,
) -> Result<GapScan> {
    let pairs: Vec<(usize, f64)> = centers.iter().flat_map(|&c| radii.iter().map(move |&r| (c, r))).collect();
    let rows: Vec<GapRow> = pairs
        .par_iter()
        .map(|&(c, r)| {
            let f = flatness(cloud, cloud.point(c), r, opts)?;
            let (ratio, status) = if f.beta_bar >= beta_floor {
                (f.theta_bar / f.beta_bar, PairStatus::Ratio)
            } else if f.theta_bar >= beta_floor {
                (f64::INFINITY, PairStatus::Unbounded)
            } else {
                (f64::NAN, PairStatus::Skipped)
            };
            Ok(GapRow { center: c, radius: r, beta_bar: f.beta_bar, theta_bar: f.theta_bar, ratio, status })
        })
        .collect::<Result<_>>()?;
    let max_ratio = rows.iter().filter(|r| r.status == PairStatus::Ratio).map(|r| r.ratio).fold(0.0, f64::max);
    Ok(GapScan {
        max_ratio,
        unbounded_pairs: rows.iter().filter(|r| r.status == PairStatus::Unbounded).count(),
        skipped_pairs: rows.iter().filter(|r| r.status == PairStatus::Skipped).count(),
        beta_floor,
        rows,
    })
}

/// Default floor below which β̄ counts as zero in the gap scan.
pub const BETA_FLOOR: f64 = TOL_GEOM;

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> PointCloud {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        PointCloud::from_points(1, &pts, vec![2.0 * std::f64::consts::PI / n as f64; n]).unwrap()
    }

    #[test]
    fn collinear_beta_zero() {
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![0.1 * i as f64, 0.2 * i as f64, -0.05 * i as f64]).collect();
        let c = PointCloud::from_points(1, &pts, vec![1.0; 20]).unwrap();
        let (b, _, _) = beta_number(&c, &pts[5], 0.6, &FlatnessOptions::default()).unwrap();
        assert!(b < 1e-12, "{b}");
    }

    #[test]
    fn circle_beta_half_radius() {
        let c = circle(10_000);
        for &r in &[0.05, 0.1, 0.3] {
            let f = flatness(&c, &[1.0, 0.0], r, &FlatnessOptions::default()).unwrap();
            assert!((f.beta_bar - r / 2.0).abs() <= 0.05 * r / 2.0, "r={r}: {}", f.beta_bar);
            assert!(f.beta <= f.beta_bar);
            assert!(f.beta_bar <= f.theta_bar);
            assert!(f.theta <= 3.0 * f.theta_bar);
            assert!(f.theta_bar / f.beta_bar < 6.0);
        }
    }

    #[test]
    fn empty_ball() {
        let c = circle(100);
        assert!(matches!(beta_number(&c, &[5.0, 5.0], 0.1, &FlatnessOptions::default()), Err(Error::EmptyBall)));
    }

    #[test]
    fn grid_counts() {
        let (g, h) = disk_grid(1, 1.0, 33);
        assert_eq!(g.len(), 33);
        assert!((h - 1.0 / 16.0).abs() < 1e-15);
        let (g3, _) = disk_grid(3, 1.0, 33);
        assert!(g3.len() <= 4096);
    }
}
