//! The acceptance property suite, criteria 1–12.
//!
//! Each criterion runs a fixed battery of checks and reports every measured
//! value next to the bound it is compared against.

use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::energy::{
    balance_check, big_projection_check, constants_ledger, energy_brute, energy_mc, exponents, h0_choice,
    max_curvature_sampled, voluminous_search, SearchOptions, SearchOutcome, BRUTE_BUDGET,
};
use crate::error::{Error, Result};
use crate::flatness::{
    derivative_angle_check, flatness, gap_ratio_scan, graph_extract, holder_exponent, FlatnessOptions, GraphOptions,
    PairStatus, BETA_FLOOR,
};
use crate::generators::{generate, GeneratorSpec, Height, Shape};
use crate::grassmann::{
    frame_distance, grass_constants, grass_distance, orthonormalize, red_parameters, verify_perturbation_bounds, Basis,
    GsMode, PerturbationTrial, Subspace,
};
use crate::pointcloud::{ahlfors_scan, measure_in_ball, sample_centers, PointCloud};
use crate::report::{strip_timestamp, to_value, Report};
use crate::rng::{gaussian_vec, stream, unit_vec, Rng};
use crate::simplex::{
    big_omega, curvature_k, heights, measure, menger_curvature, perturbation_constant, pseudo_distance, unit_ball_volume,
    upsilon, voluminous_classify, Curvature, Simplex, VolClassParams,
};
use crate::tol::{Tolerances, TOL_GEOM};
use crate::vecops::{dist, norm, scale};

/// Tolerance of the Grassmannian suite.
pub const GRASS_TOL: f64 = 1e-9;
/// Relative discretization slack for β̄ ≤ r/(2ε) on sampled manifolds.
pub const C2_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub passed: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, limit: f64) -> Check {
        Check { name: name.into(), value, bound: format!("<= {limit}"), passed: value <= limit }
    }

    pub fn ge(name: impl Into<String>, value: f64, limit: f64) -> Check {
        Check { name: name.into(), value, bound: format!(">= {limit}"), passed: value >= limit }
    }

    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Check {
        Check { name: name.into(), value, bound: format!("{target} ± {tol}"), passed: (value - target).abs() <= tol }
    }

    pub fn exact(name: impl Into<String>, value: f64, target: f64) -> Check {
        Check { name: name.into(), value, bound: format!("== {target}"), passed: value == target }
    }

    pub fn violations(name: impl Into<String>, count: usize, trials: usize) -> Check {
        Check { name: format!("{} ({trials} trials)", name.into()), value: count as f64, bound: "== 0".into(), passed: count == 0 }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), value: f64::from(u8::from(ok)), bound: "== 1".into(), passed: ok }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub seconds: f64,
    /// Desk-scale runtime target; informational.
    pub target_seconds: f64,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let tail = if failed.is_empty() { String::new() } else { format!(" failed: {}", failed.join("; ")) };
        format!(
            "{} criterion {:>2} {} ({} checks, {:.1}s){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len(),
            self.seconds,
            tail
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

pub const CRITERIA: [(u32, &str, f64); 12] = [
    (1, "grassmannian suite", 30.0),
    (2, "constants golden values", 1.0),
    (3, "simplex suite", 30.0),
    (4, "curvature calibrations", 1.0),
    (5, "energy oracle", 60.0),
    (6, "flatness calibrations", 180.0),
    (7, "fine-set discrimination", 120.0),
    (8, "voluminous search end-to-end", 180.0),
    (9, "balance and regularity consistency", 120.0),
    (10, "graph and hoelder", 180.0),
    (11, "spiral boundedness", 120.0),
    (12, "determinism", 60.0),
];

/// "all" or a comma-separated list of criterion numbers.
pub fn parse_suite(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("all") {
        return Ok(CRITERIA.iter().map(|c| c.0).collect());
    }
    let mut ids = Vec::new();
    for part in s.split(',') {
        let id: u32 = part
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("suite must be 'all' or criterion numbers 1-12, got {part:?}")))?;
        if !(1..=12).contains(&id) {
            return Err(Error::InvalidInput(format!("no criterion {id}; expected 1-12")));
        }
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

pub fn run_suite(ids: &[u32], seed: u64) -> SuiteReport {
    let criteria: Vec<CriterionReport> = ids.iter().map(|&id| run_criterion(id, seed)).collect();
    SuiteReport { seed, passed: criteria.iter().all(|c| c.passed), criteria }
}

pub fn run_criterion(id: u32, seed: u64) -> CriterionReport {
    let (_, title, target) = CRITERIA[(id as usize).clamp(1, 12) - 1];
    let start = Instant::now();
    let checks = match id {
        1 => c1_grassmann(seed),
        2 => c2_constants(),
        3 => c3_simplex(seed),
        4 => c4_curvature(),
        5 => c5_energy(seed),
        6 => c6_flatness(seed),
        7 => c7_fine(seed),
        8 => c8_search(seed).map(|(c, _)| c),
        9 => c9_balance(seed),
        10 => c10_graph(seed),
        11 => c11_spiral(seed),
        12 => c12_determinism(seed),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    let checks = checks.unwrap_or_else(|e| vec![Check { name: format!("error: {e}"), value: f64::NAN, bound: "no error".into(), passed: false }]);
    CriterionReport {
        id,
        title,
        passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
        seconds: start.elapsed().as_secs_f64(),
        target_seconds: target,
        checks,
    }
}

fn trials<T: Send>(seed: u64, salt: u64, count: usize, f: impl Fn(&mut Rng) -> T + Sync) -> Vec<T> {
    (0..count as u64).into_par_iter().map(|i| f(&mut stream(seed ^ salt, i))).collect()
}

fn dims(rng: &mut Rng, max_m: usize, max_n: usize) -> (usize, usize) {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=max_m.min(n - 1));
    (m, n)
}

fn log_uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Orthonormal frame close to `e`, with perturbation size `s`.
fn nudge(rng: &mut Rng, e: &[Vec<f64>], s: f64) -> Result<Vec<Vec<f64>>> {
    let n = e[0].len();
    let raw: Vec<Vec<f64>> = e.iter().map(|v| v.iter().zip(gaussian_vec(rng, n)).map(|(a, g)| a + s * g).collect()).collect();
    Ok(orthonormalize(&Basis::new(raw)?, GsMode::Unit)?.vectors)
}

/// A ρεδ-basis near ρ·e with the tightest (ε, δ), inflated past rounding.
fn red_basis(rng: &mut Rng, e: &[Vec<f64>], rho: f64, s: f64) -> Result<(Basis, f64, f64)> {
    let n = e[0].len();
    let v: Vec<Vec<f64>> =
        e.iter().map(|v| v.iter().zip(gaussian_vec(rng, n)).map(|(a, g)| rho * (a + s * g)).collect()).collect();
    let basis = Basis::new(v)?;
    let (eps, delta) = red_parameters(&basis, rho);
    Ok((basis, eps * (1.0 + 1e-9) + 1e-15, delta * (1.0 + 1e-9) + 1e-15))
}

fn c1_grassmann(seed: u64) -> Result<Vec<Check>> {
    const N: usize = 10_000;
    let tol = Tolerances::default();

    // metric axioms
    let axioms = trials(seed, 0x11, N, |rng| -> Result<[bool; 4]> {
        let (m, n) = dims(rng, 4, 8);
        let (u, v, w) = (Subspace::random(n, m, rng), Subspace::random(n, m, rng), Subspace::random(n, m, rng));
        let duv = grass_distance(&u, &v)?;
        let symmetric = duv == grass_distance(&v, &u)?;
        let triangle = duv <= grass_distance(&u, &w)? + grass_distance(&w, &v)? + GRASS_TOL;
        // same span from a rotated frame
        let rotated = nudge(rng, &u.vectors(), 0.3)?;
        let mix: Vec<Vec<f64>> = rotated.iter().map(|r| u.onto(r)).collect();
        let same = grass_distance(&u, &Subspace::span(&mix)?)? <= tol.geom;
        let distinct = m == n || duv > tol.geom;
        Ok([symmetric, triangle, same, distinct])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let count = |k: usize| axioms.iter().filter(|a| !a[k]).count();

    let ang_dist = trials(seed, 0x12, N, |rng| -> Result<bool> {
        let (m, n) = dims(rng, 4, 8);
        let (u, v) = (Subspace::random(n, m, rng), Subspace::random(n, m, rng));
        let c: Vec<f64> = gaussian_vec(rng, m);
        let x = v.embed(&c);
        Ok(u.perp_norm(&x) <= norm(&x) * grass_distance(&v, &u)? + GRASS_TOL)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let bound_ok = |r: crate::grassmann::BoundReport| r.lhs <= r.rhs + GRASS_TOL;
    let close = trials(seed, 0x13, N, |rng| -> Result<(bool, bool)> {
        let (m, n) = dims(rng, 4, 8);
        let e = Subspace::random(n, m, rng).vectors();
        let s = log_uniform(rng, 1e-6, 0.1);
        let f = nudge(rng, &e, s)?;
        let theta = e.iter().zip(&f).map(|(a, b)| dist(a, b)).fold(0.0, f64::max) * (1.0 + 1e-12);
        let r = verify_perturbation_bounds(&PerturbationTrial::CloseBases { e: e.clone(), f: f.clone(), theta }, &tol)?;
        // alt-grass-metric direction: dgras ≤ 2m · frame distance
        let (u, v) = (Subspace::span(&e)?, Subspace::span(&f)?);
        let alt = grass_distance(&u, &v)? <= 2.0 * m as f64 * frame_distance(&u, &v)? + GRASS_TOL;
        Ok((bound_ok(r), alt))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let gs_red = trials(seed, 0x14, N, |rng| -> Result<bool> {
        let (m, n) = dims(rng, 4, 8);
        let e = Subspace::random(n, m, rng).vectors();
        let rho = log_uniform(rng, 0.1, 10.0);
        let s = log_uniform(rng, 1e-7, 1e-2);
        let (basis, eps, delta) = red_basis(rng, &e, rho, s)?;
        let r = verify_perturbation_bounds(&PerturbationTrial::GsRed { basis, rho, eps, delta }, &tol)?;
        Ok(bound_ok(r))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let dist_ang = trials(seed, 0x15, N, |rng| -> Result<bool> {
        let (m, n) = dims(rng, 4, 8);
        let u = Subspace::random(n, m, rng);
        let s = log_uniform(rng, 1e-6, 0.05);
        let frame = nudge(rng, &u.vectors(), s)?;
        let theta = frame.iter().map(|f| u.perp_norm(f)).fold(0.0, f64::max) * (1.0 + 1e-12) + 1e-300;
        let r = verify_perturbation_bounds(&PerturbationTrial::DistAng { u, frame, theta }, &tol)?;
        Ok(bound_ok(r))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let red_ang = trials(seed, 0x16, N, |rng| -> Result<bool> {
        let (m, n) = dims(rng, 4, 8);
        let c = grass_constants(m)?;
        // keep C₃(C₁ε + C₂δ) well below 1
        let s_max = 0.05 / (c.c_dist_ang * (c.c_gs_eps + c.c_gs_del) * (n as f64).sqrt());
        let e = Subspace::random(n, m, rng).vectors();
        let rho = log_uniform(rng, 0.1, 10.0);
        let s = log_uniform(rng, 1e-3 * s_max, s_max);
        let (v, eps, delta) = red_basis(rng, &e, rho, s)?;
        let s2 = log_uniform(rng, 1e-6, 0.05);
        let u_vecs: Vec<Vec<f64>> =
            v.vectors.iter().map(|x| x.iter().zip(gaussian_vec(rng, n)).map(|(a, g)| a + rho * s2 * g).collect()).collect();
        let theta = v.vectors.iter().zip(&u_vecs).map(|(a, b)| dist(a, b)).fold(0.0, f64::max) / rho * (1.0 + 1e-12);
        let u = Basis::new(u_vecs)?;
        let r = verify_perturbation_bounds(&PerturbationTrial::RedAng { v, u, rho, eps, delta, theta }, &tol)?;
        Ok(bound_ok(r))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let bad = |v: &[bool]| v.iter().filter(|ok| !**ok).count();
    Ok(vec![
        Check::violations("symmetry (exact)", count(0), N),
        Check::violations("triangle inequality", count(1), N),
        Check::violations("same span gives zero", count(2), N),
        Check::violations("distinct spans give positive distance", count(3), N),
        Check::violations("|Q_U v| <= |v| dgras(V,U)", bad(&ang_dist), N),
        Check::violations("close-bases dgras <= 2m theta", close.iter().filter(|c| !c.0).count(), N),
        Check::violations("dgras <= 2m frame distance", close.iter().filter(|c| !c.1).count(), N),
        Check::violations("gs-red |v - v_hat| <= (C1 eps + C2 delta) rho", bad(&gs_red), N),
        Check::violations("dist-ang dgras <= C3 theta", bad(&dist_ang), N),
        Check::violations("red-ang dgras <= C4 theta", bad(&red_ang), N),
    ])
}

fn c2_constants() -> Result<Vec<Check>> {
    let g1 = grass_constants(1)?;
    let g2 = grass_constants(2)?;
    let ex = exponents(2, 16.0)?;
    Ok(vec![
        Check::exact("grass_constants(1).c_gs_eps", g1.c_gs_eps, 1.0),
        Check::exact("grass_constants(1).c_gs_del", g1.c_gs_del, 0.0),
        Check::exact("grass_constants(1).c_dist_ang", g1.c_dist_ang, 4.0),
        Check::exact("grass_constants(2).c_gs_eps", g2.c_gs_eps, 5.0),
        Check::exact("grass_constants(2).c_gs_del", g2.c_gs_del, 2.0),
        Check::exact("grass_constants(2).c_dist_ang", g2.c_dist_ang, 32.0),
        Check::near("upsilon(1)", upsilon(1), 20.8810, 1e-3),
        Check::near("big omega", big_omega(), 8.0 * std::f64::consts::PI.powi(2) / 15.0, 1e-9),
        Check::exact("lambda(2,16)", ex.lambda, 8.0),
        Check::exact("kappa(2,16)", ex.kappa, 120.0),
        Check::exact("tau(2,16)", ex.tau, 1.0 / 15.0),
        Check::exact("alpha(2,16)", ex.alpha, 0.5),
        Check::exact("h0(0.25)", h0_choice(0.25)?, 0.5),
    ])
}

/// Random T ∈ V_k(η, d) with its (η, d).
fn random_voluminous(rng: &mut Rng) -> Result<(Simplex, usize, f64, f64)> {
    loop {
        let k = rng.random_range(1..=4usize);
        let n = rng.random_range(k + 1..=6usize);
        let t = Simplex::new((0..k + 2).map(|_| gaussian_vec(rng, n)).collect())?;
        let pts = t.refs();
        let r = crate::simplex::min_enclosing_ball(&pts).radius;
        let d = r * (1.0 + 0.5 * rng.random::<f64>());
        let base = measure(&pts[..k + 1]);
        let h = crate::simplex::dist_to_affine_hull(pts[k + 1], &pts[..k + 1]);
        let eta = (base.powf(1.0 / k as f64).min(h) / d) * (1.0 - 0.1 * rng.random::<f64>());
        if eta > 1e-3 && eta < 1.0 {
            return Ok((t, k, eta, d));
        }
    }
}

fn c3_simplex(seed: u64) -> Result<Vec<Check>> {
    const N: usize = 1000;
    let rel = |a: f64, b: f64| (a - b).abs() <= TOL_GEOM * a.abs().max(b.abs()).max(1.0);
    let le = |a: f64, b: f64| a <= b * (1.0 + TOL_GEOM) + 1e-300;
    let chain = trials(seed, 0x31, N, |rng| -> Result<[bool; 9]> {
        let (t, k, eta, d) = random_voluminous(rng)?;
        let pts = t.refs();
        let vol = measure(&pts);
        let faces: Vec<f64> = (0..k + 2).map(|i| measure(&t.face(i).refs())).collect();
        let hs = heights(&pts);
        let hmin = hs.iter().copied().fold(f64::INFINITY, f64::min);
        let kf = k as f64;
        let fact = |j: usize| (1..=j).map(|i| i as f64).product::<f64>();
        let ito = (0..k + 2).all(|i| rel(vol, hs[i] * faces[i] / (kf + 1.0)));
        let fmax = faces.iter().copied().fold(0.0, f64::max);
        let hmin_formula = rel(hmin, (kf + 1.0) * vol / fmax);
        let meas_low = le((eta * d).powi(k as i32 + 1) / (kf + 1.0), vol);
        let diam_low = (0..k + 2).all(|i| (i + 1..k + 2).all(|j| le(hmin, dist(pts[i], pts[j]))));
        let meas_t = le(hmin.powi(k as i32 + 1) / fact(k + 1), vol) && le(vol, unit_ball_volume(k + 1) * d.powi(k as i32 + 1));
        let meas_face = faces
            .iter()
            .all(|&f| le(hmin.powi(k as i32) / fact(k), f) && le(f, unit_ball_volume(k) * d.powi(k as i32)));
        let hmin_est = le(d * eta.powi(k as i32 + 1) / unit_ball_volume(k), hmin)
            && le(hmin, d * (unit_ball_volume(k) * fact(k)).powf(1.0 / kf));
        let member = voluminous_classify(&t, &VolClassParams { eta, d, k })?.member;
        let reg_curv = le((eta * d).powi(k as i32 + 1) / ((kf + 1.0) * (2.0 * d).powi(k as i32 + 2)), curvature_k(&pts));
        Ok([ito, hmin_formula, meas_low, diam_low, meas_t, meas_face, hmin_est, member, reg_curv])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let count = |j: usize| chain.iter().filter(|c| !c[j]).count();

    let perturb = trials(seed, 0x32, N, |rng| -> Result<(bool, bool)> {
        let (t, k, eta, d) = random_voluminous(rng)?;
        let s = perturbation_constant(k, eta)?.varsigma * d;
        let n = t.vertices[0].len();
        let moved = Simplex::new(
            t.vertices
                .iter()
                .map(|v| {
                    let u = unit_vec(rng, n);
                    let r = s * rng.random::<f64>();
                    v.iter().zip(&u).map(|(a, b)| a + r * b).collect()
                })
                .collect(),
        )?;
        // ς d sits far below the coordinate ulp, so allow for the rounding of v + r u
        let scale_max = t.vertices.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
        let close = pseudo_distance(&t, &moved)? <= s * (1.0 + 1e-12) + 4.0 * f64::EPSILON * scale_max;
        let member = voluminous_classify(&moved, &VolClassParams { eta: 0.5 * eta, d: 1.5 * d, k })?.member;
        Ok((close, member))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    Ok(vec![
        Check::violations("generated simplices are voluminous", count(7), N),
        Check::violations("H^{k+1} = h_i H^k(fc_i)/(k+1)", count(0), N),
        Check::violations("hmin = (k+1) H^{k+1} / max face", count(1), N),
        Check::violations("H^{k+1} >= (eta d)^{k+1}/(k+1)", count(2), N),
        Check::violations("|x_i - x_j| >= hmin", count(3), N),
        Check::violations("hmin^{k+1}/(k+1)! <= H^{k+1} <= omega_{k+1} d^{k+1}", count(4), N),
        Check::violations("hmin^k/k! <= H^k(fc_i) <= omega_k d^k", count(5), N),
        Check::violations("d eta^{k+1}/omega_k <= hmin <= d (omega_k k!)^{1/k}", count(6), N),
        Check::violations("K(T) >= (eta d)^{k+1}/((k+1)(2d)^{k+2})", count(8), N),
        Check::violations("perturbation within varsigma d", perturb.iter().filter(|p| !p.0).count(), N),
        Check::violations("T' in V_k(eta/2, 3d/2)", perturb.iter().filter(|p| !p.1).count(), N),
    ])
}

fn refs(v: &[Vec<f64>]) -> Vec<&[f64]> {
    v.iter().map(|p| p.as_slice()).collect()
}

fn c4_curvature() -> Result<Vec<Check>> {
    let tri: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let k = menger_curvature(&refs(&tri), Curvature::K)?;
    let mut checks = vec![Check::near("K(unit right triangle)", k, 2f64.sqrt() / 8.0, 1e-12)];
    let mut worst = 0.0f64;
    let mut rng = stream(4, 0);
    for _ in 0..100 {
        let m = rng.random_range(1..=3usize);
        let pts: Vec<Vec<f64>> = (0..m + 2).map(|_| gaussian_vec(&mut rng, m + 2)).collect();
        let a = log_uniform(&mut rng, 1e-3, 1e3);
        let scaled: Vec<Vec<f64>> = pts.iter().map(|p| scale(p, a)).collect();
        let k0 = menger_curvature(&refs(&pts), Curvature::K)?;
        let ka = menger_curvature(&refs(&scaled), Curvature::K)?;
        worst = worst.max((ka * a - k0).abs());
    }
    checks.push(Check::le("max |K(aT) a - K(T)| over 100 tuples", worst, 1e-9));
    let s = 1.0 / 2f64.sqrt();
    let tet: Vec<Vec<f64>> = vec![vec![s, 0.0, 0.0, 0.0], vec![0.0, s, 0.0, 0.0], vec![0.0, 0.0, s, 0.0], vec![0.0, 0.0, 0.0, s]];
    let kt = menger_curvature(&refs(&tet), Curvature::K)?;
    let kp = menger_curvature(&refs(&tet), Curvature::KPrime)?;
    checks.push(Check::near("regular tetrahedron K' - K/sqrt 3", kp - kt / 3f64.sqrt(), 0.0, 1e-9));
    Ok(checks)
}

fn unit_circle(count: usize, seed: u64) -> Result<PointCloud> {
    generate(&GeneratorSpec::new(Shape::Sphere { m: 1, n: 2, radius: 1.0 }, count, seed))
}

fn c5_energy(seed: u64) -> Result<Vec<Check>> {
    let tri = PointCloud::from_points(1, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0; 3])?;
    let exact = energy_brute(&tri, 2.0, None, BRUTE_BUDGET)?;
    let mc = energy_mc(&tri, 2.0, 100_000, seed, 1000)?;
    let circle = unit_circle(30, seed)?;
    let cb = energy_brute(&circle, 4.0, None, BRUTE_BUDGET)?;
    let cm = energy_mc(&circle, 4.0, 100_000, seed, 1000)?;
    let mut checks = vec![
        Check::exact("brute E_2(three points)", exact.value, 0.1875),
        Check::le("|MC - brute| / stderr, three points", (mc.value - exact.value).abs() / mc.stderr, 3.0),
        Check::le("|MC - brute| / stderr, 30-point circle p=4", (cm.value - cb.value).abs() / cm.stderr, 3.0),
    ];
    for (s, p) in [(2.5, 4.0), (0.3, 6.5)] {
        let base = energy_brute(&circle, p, None, BRUTE_BUDGET)?.value;
        let scaled = energy_brute(&circle.scaled(s)?, p, None, BRUTE_BUDGET)?.value;
        let want = s.powf(3.0 - p) * base;
        checks.push(Check::le(format!("scaling law rel. error s={s} p={p}"), (scaled - want).abs() / want.abs(), 1e-6));
    }
    Ok(checks)
}

fn c6_flatness(seed: u64) -> Result<Vec<Check>> {
    let opts = FlatnessOptions { seed, ..FlatnessOptions::default() };
    let circle = unit_circle(10_000, seed)?;
    let mut checks = Vec::new();
    let centers = sample_centers(&circle, 5, seed);
    let mut worst = 0.0f64;
    for &c in &centers {
        for r in [0.05, 0.1, 0.2, 0.3] {
            let f = flatness(&circle, circle.point(c), r, &opts)?;
            worst = worst.max((f.beta_bar / (0.5 * r) - 1.0).abs());
        }
    }
    checks.push(Check::le("circle max |beta_bar/(r/2) - 1|", worst, 0.05));

    // 100-pair scan over circle and sphere
    let sphere = generate(&GeneratorSpec::new(Shape::Sphere { m: 2, n: 3, radius: 1.0 }, 10_000, seed))?;
    let mut pairs: Vec<(&PointCloud, usize, f64)> = Vec::new();
    for (cloud, radii) in [(&circle, [0.02, 0.05, 0.1, 0.2, 0.4]), (&sphere, [0.15, 0.2, 0.3, 0.4, 0.6])] {
        for c in sample_centers(cloud, 10, seed ^ 6) {
            for r in radii {
                pairs.push((cloud, c, r));
            }
        }
    }
    let rows: Vec<(f64, f64, f64, f64)> = pairs
        .par_iter()
        .map(|&(cloud, c, r)| {
            let f = flatness(cloud, cloud.point(c), r, &opts)?;
            Ok((f.beta, f.beta_bar, f.theta, f.theta_bar))
        })
        .collect::<Result<_>>()?;
    let beta_bad = rows.iter().filter(|r| r.0 > r.1 + TOL_GEOM).count();
    let theta_bad = rows.iter().filter(|r| r.2 > 3.0 * r.3 + TOL_GEOM).count();
    checks.push(Check::violations("beta <= beta_bar", beta_bad, rows.len()));
    checks.push(Check::violations("theta <= 3 theta_bar", theta_bad, rows.len()));

    // C² bound β̄ ≤ r/(2ε) on sphere and torus
    let torus_shape = Shape::Torus { major: 2.0, minor: 1.0 };
    let torus = generate(&GeneratorSpec::new(torus_shape.clone(), 20_000, seed))?;
    for (name, cloud, reach) in [("sphere", &sphere, 1.0), ("torus", &torus, torus_shape.analytic_reach().unwrap_or(1.0))] {
        let mut excess = f64::NEG_INFINITY;
        for c in sample_centers(cloud, 10, seed ^ 7) {
            for r in [0.2, 0.3, 0.5] {
                let (b, _, _) = crate::flatness::beta_number(cloud, cloud.point(c), r, &opts)?;
                let bound = r / (2.0 * reach);
                excess = excess.max(b - bound * (1.0 + C2_SLACK));
            }
        }
        checks.push(Check::le(format!("{name} max beta_bar - (1+slack) r/(2 reach)"), excess, 0.0));
    }
    Ok(checks)
}

fn c7_fine(seed: u64) -> Result<Vec<Check>> {
    let opts = FlatnessOptions { seed, ..FlatnessOptions::default() };
    let mut checks = Vec::new();
    let circle = unit_circle(10_000, seed)?;
    let sphere = generate(&GeneratorSpec::new(Shape::Sphere { m: 2, n: 3, radius: 1.0 }, 10_000, seed))?;
    // radii at least 50 mean spacings, below which θ̄ measures the sampling gaps
    for (name, cloud, radii) in [("circle", &circle, vec![0.05, 0.1, 0.2, 0.3]), ("sphere", &sphere, vec![0.2, 0.3, 0.4])] {
        let scan = gap_ratio_scan(cloud, &radii, &sample_centers(cloud, 10, seed ^ 8), &opts, BETA_FLOOR)?;
        checks.push(Check::le(format!("{name} max theta_bar/beta_bar"), scan.max_ratio, 6.0));
        checks.push(Check::violations(format!("{name} pairs with beta_bar = 0 < theta_bar"), scan.unbounded_pairs, scan.rows.len()));
    }

    let gap = 0.1;
    let square = generate(&GeneratorSpec::new(Shape::GapSquare { gap }, 10_000, seed))?;
    let near = |target: [f64; 2]| {
        (0..square.len()).min_by(|&a, &b| dist(square.point(a), &target).total_cmp(&dist(square.point(b), &target))).unwrap_or(0)
    };
    let centers = [near([0.5 - 0.5 * gap, 0.0]), near([0.5 + 0.5 * gap, 0.0])];
    let scan = gap_ratio_scan(&square, &[0.02, 0.05], &centers, &opts, BETA_FLOOR)?;
    let worst = scan
        .rows
        .iter()
        .map(|r| match r.status {
            PairStatus::Unbounded => f64::INFINITY,
            PairStatus::Ratio => r.ratio,
            PairStatus::Skipped => 0.0,
        })
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::ge("gap-square min ratio at gap-adjacent centers", worst, 10.0));

    let seg = generate(&GeneratorSpec::new(Shape::HalfSegment { n: 2, length: 1.0 }, 10_000, seed))?;
    let end = (0..seg.len()).min_by(|&a, &b| seg.point(a)[0].total_cmp(&seg.point(b)[0])).unwrap_or(0);
    for r in [0.01, 0.05, 0.1] {
        let f = flatness(&seg, seg.point(end), r, &opts)?;
        checks.push(Check::ge(format!("half-segment endpoint theta_bar r={r}"), f.theta_bar, 0.9));
    }
    Ok(checks)
}

struct SearchCase {
    name: &'static str,
    cloud: PointCloud,
    outcome: SearchOutcome,
}

fn search_cases(seed: u64) -> Result<Vec<SearchCase>> {
    let opts = SearchOptions { seed, ..SearchOptions::default() };
    let mut out = Vec::new();
    for (name, m) in [("circle", 1), ("sphere", 2)] {
        let cloud = generate(&GeneratorSpec::new(Shape::Sphere { m, n: m + 1, radius: 1.0 }, 10_000, seed))?;
        let x0 = sample_centers(&cloud, 1, seed)[0];
        let outcome = voluminous_search(&cloud, x0, &opts)?;
        out.push(SearchCase { name, cloud, outcome });
    }
    Ok(out)
}

fn c8_search(seed: u64) -> Result<(Vec<Check>, Vec<SearchCase>)> {
    let mut checks = Vec::new();
    let cases = search_cases(seed)?;
    for case in &cases {
        let o = &case.outcome;
        checks.push(Check::holds(format!("{} simplex in V_m(eta/2, d), d = {:.4}", case.name, o.stopping_distance), o.classify.member));
        let x = &o.simplex.vertices[0];
        for frac in [0.25, 0.5] {
            let rho = frac * o.stopping_distance;
            let cov = big_projection_check(&case.cloud, x, rho, &o.tangent, 0.25, coverage_grid(&case.cloud, rho, 0.25))?;
            checks.push(Check::ge(format!("{} big projection coverage rho = {frac} d", case.name), cov, 0.99));
        }
    }
    let disk = generate(&GeneratorSpec::new(Shape::PlaneDisk { m: 2, n: 3, radius: 1.0 }, 10_000, seed))?;
    let center = (0..disk.len()).min_by(|&a, &b| norm(disk.point(a)).total_cmp(&norm(disk.point(b)))).unwrap_or(0);
    let res = voluminous_search(&disk, center, &SearchOptions { seed, ..SearchOptions::default() });
    let failed = matches!(res, Err(Error::MaxStagesExceeded(_)) | Err(Error::TargetPointMissing { .. }));
    checks.push(Check::holds("flat disk search fails", failed));
    Ok((checks, cases))
}

/// Grid size whose step is at least 1.5 mean sample spacings, at most 41 nodes.
fn coverage_grid(cloud: &PointCloud, rho: f64, delta: f64) -> usize {
    let m = cloud.intrinsic_dim() as f64;
    let spacing = (cloud.total_mass() / cloud.len() as f64).powf(1.0 / m);
    let s = (1.0 - delta * delta).sqrt() * rho;
    ((2.0 * s / (1.5 * spacing)).floor() as usize + 1).clamp(3, 41)
}

/// p used with an m-dimensional cloud in the balance criterion.
fn balance_p(m: usize) -> f64 {
    if m == 1 { 4.0 } else { 16.0 }
}

fn c9_balance(seed: u64) -> Result<Vec<Check>> {
    let cases = search_cases(seed)?;
    let mut checks = Vec::new();
    for case in &cases {
        let cloud = &case.cloud;
        let m = cloud.intrinsic_dim();
        let p = balance_p(m);
        let e_hat = energy_mc(cloud, p, 200_000, seed, 1000)?.value;
        let radii: Vec<f64> = (0..6).map(|k| 0.5 * 0.5f64.powi(k)).collect();
        let a_hat = ahlfors_scan(cloud, &radii, 200, seed)?.min_ratio.iter().copied().fold(f64::INFINITY, f64::min);
        let o = &case.outcome;
        let bal = balance_check(o.eta, o.stopping_distance, e_hat, a_hat, m, p)?;
        checks.push(Check::holds(format!("{} balance d = {:.4} vs {:.4e} (E = {e_hat:.4e}, A = {a_hat:.4})", case.name, o.stopping_distance, bal.rhs), bal.holds));
        let ledger = constants_ledger(e_hat, m, p, 0.25)?;
        let floor = (1.0 - 0.0625f64).powf(m as f64 / 2.0) * unit_ball_volume(m) * 0.9;
        let mut worst = f64::INFINITY;
        let mut tested = 0usize;
        if ledger.r_uar > 0.0 {
            for c in sample_centers(cloud, 100, seed ^ 9) {
                for k in 0..8 {
                    let rho = ledger.r_uar * 0.5f64.powi(k);
                    if rho > 0.0 {
                        worst = worst.min(measure_in_ball(cloud, cloud.point(c), rho) / (floor * rho.powi(m as i32)));
                        tested += 1;
                    }
                }
            }
        }
        let name = format!("{} min measure/((1-delta^2)^(m/2) omega_m rho^m 0.9), rho <= R_uar = 10^{:.1} ({tested} balls)", case.name, ledger.log10_r_uar);
        checks.push(Check::ge(name, if tested == 0 { f64::INFINITY } else { worst }, 1.0));
    }
    Ok(checks)
}

fn c10_graph(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let gopts = GraphOptions::default();
    let sphere = generate(&GeneratorSpec::new(Shape::Sphere { m: 2, n: 3, radius: 1.0 }, 40_000, seed))?;
    let pole = (0..sphere.len()).max_by(|&a, &b| sphere.point(a)[2].total_cmp(&sphere.point(b)[2])).unwrap_or(0);
    let res = 0.03;
    let patch = graph_extract(&sphere, pole, 0.4, res, &gopts)?;
    let worst = patch
        .nodes
        .iter()
        .map(|n| {
            let w2: f64 = n.w.iter().map(|c| c * c).sum();
            (norm(&n.value) - (1.0 - (1.0 - w2).sqrt())).abs()
        })
        .fold(0.0, f64::max);
    checks.push(Check::le("sphere |F(w)| - analytic height", worst, 2.0 * res));
    let origin = patch.nodes.iter().find(|n| n.w.iter().all(|&c| c == 0.0));
    let zero = origin.is_some_and(|n| n.value.iter().all(|&v| v == 0.0) && n.df.as_ref().is_some_and(|d| d.iter().all(|&v| v == 0.0)));
    checks.push(Check::holds("F(0) = 0 and DF(0) = 0 exactly", zero));
    let fit = holder_exponent(&patch, 1e-12)?;
    checks.push(Check::near("sphere DF hoelder exponent", fit.exponent, 1.0, 0.1));
    let (pairs, violations, _) = derivative_angle_check(&patch, 1e-9)?;
    checks.push(Check::violations("sphere |DF_1 - DF_0| <= 4 dgras", violations, pairs));

    let graph = Shape::Graph { m: 1, half_width: 1.0, height: Height { coeff: 1.0, power: 1.5 } };
    let cloud = generate(&GeneratorSpec::new(graph, 20_000, seed))?;
    let base = (0..cloud.len()).min_by(|&a, &b| cloud.point(a)[0].abs().total_cmp(&cloud.point(b)[0].abs())).unwrap_or(0);
    let patch = graph_extract(&cloud, base, 0.4, 0.005, &gopts)?;
    let fit = holder_exponent(&patch, 1e-12)?;
    checks.push(Check::near("|w|^{3/2} graph DF hoelder exponent", fit.exponent, 0.5, 0.1));
    let (pairs, violations, _) = derivative_angle_check(&patch, 1e-9)?;
    checks.push(Check::violations("graph |DF_1 - DF_0| <= 4 dgras", violations, pairs));
    Ok(checks)
}

fn c11_spiral(seed: u64) -> Result<Vec<Check>> {
    let (t_min, t_split) = (0.125, 0.35);
    let count = 10_000;
    let coarse = generate(&GeneratorSpec::new(Shape::Spiral { m: 1, t_min, t_max: 1.0 }, count, seed))?;
    let near: Vec<Vec<f64>> = coarse.points().filter(|p| norm(p) <= spiral_radius(t_split)).map(|p| p.to_vec()).collect();
    let extra = generate(&GeneratorSpec::new(Shape::Spiral { m: 1, t_min, t_max: t_split }, 3 * near.len().max(1), seed ^ 11))?;
    let mut pts: Vec<Vec<f64>> = coarse.points().map(|p| p.to_vec()).collect();
    pts.extend(extra.points().map(|p| p.to_vec()));
    let mut w = coarse.weights().to_vec();
    w.extend_from_slice(extra.weights());
    let fine = PointCloud::from_points(1, &pts, w)?;
    let tuples = 1_000_000;
    let k0 = max_curvature_sampled(&coarse, tuples, seed);
    let k1 = max_curvature_sampled(&fine, tuples, seed);
    Ok(vec![
        Check::ge("local points near 0 after refinement / before", (near.len() + extra.len()) as f64 / near.len().max(1) as f64, 4.0),
        Check::le(format!("max sampled K refined / coarse ({k1:.4e} / {k0:.4e})"), k1 / k0, 1.1),
    ])
}

fn spiral_radius(t: f64) -> f64 {
    2f64.powf(-(2f64.powf(1.0 / t)))
}

/// A fixed small pipeline rendered as a report.
pub fn determinism_report(seed: u64) -> Result<String> {
    let cloud = unit_circle(2000, seed)?;
    let e = energy_mc(&cloud, 4.0, 20_000, seed, 1000)?;
    let opts = FlatnessOptions { seed, ..FlatnessOptions::default() };
    let f = flatness(&cloud, cloud.point(0), 0.2, &opts)?;
    let scan = gap_ratio_scan(&cloud, &[0.05, 0.1], &sample_centers(&cloud, 5, seed), &opts, BETA_FLOOR)?;
    let r = Report::new(
        "determinism",
        json!({"seed": seed, "points": cloud.len()}),
        json!({"energy": to_value(&e)?, "flatness": to_value(&f)?, "gap_scan": to_value(&scan)?}),
        json!({}),
    );
    Ok(r.to_json())
}

fn c12_determinism(seed: u64) -> Result<Vec<Check>> {
    let a = determinism_report(seed)?;
    let b = determinism_report(seed)?;
    let c = determinism_report(seed.wrapping_add(1))?;
    Ok(vec![
        Check::holds("identical reports modulo timestamp", strip_timestamp(&a) == strip_timestamp(&b)),
        Check::holds("different seed changes the report", strip_timestamp(&a) != strip_timestamp(&c)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!(parse_suite("all").unwrap().len(), 12);
        assert_eq!(parse_suite("3, 1,3").unwrap(), vec![3, 1]);
        assert!(parse_suite("13").is_err());
        assert!(parse_suite("x").is_err());
    }

    #[test]
    fn cheap_criteria_run() {
        let r = run_criterion(4, 0);
        assert!(r.passed, "{}", r.line());
        assert!(r.line().starts_with("PASS criterion  4"));
    }
}
