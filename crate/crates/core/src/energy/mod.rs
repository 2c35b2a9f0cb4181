//! Integral p-energy of weighted clouds, the η–d balance condition and the
//! explicit constants chain.

mod constants;
mod search;

pub use constants::{
    balance_check, constants_ledger, constants_ledger_with, exponents, h0_choice, psi0, BalanceCheck, ConstantsLedger,
    Exponents, LedgerInputs,
};
pub use search::{
    big_projection_check, voluminous_search, Case, SearchOptions, SearchOutcome, StageLog,
};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pointcloud::{ball_query, Closure, PointCloud};
use crate::rng::stream;
use crate::simplex::{curvature_k, measure};
use crate::vecops::dist2;

/// Default enumeration budget for [`energy_brute`], in ordered tuples.
pub const BRUTE_BUDGET: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub p: f64,
    pub value: f64,
    pub method: Method,
    pub samples: u64,
    pub stderr: f64,
    pub max_curvature_seen: f64,
}

fn pow_p(k: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
        k.powi(p as i32)
    } else {
        k.powf(p)
    }
}

/// (K, K^p) of a tuple, from the measure and the squared diameter so that even
/// integer powers of an exact configuration stay exact.
fn curvature_pow(pts: &[&[f64]], p: f64) -> (f64, f64) {
    let mut d2 = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d2 = d2.max(dist2(pts[i], pts[j]));
        }
    }
    if d2 == 0.0 {
        return (0.0, 0.0);
    }
    let mu = measure(pts);
    if mu == 0.0 {
        return (0.0, 0.0);
    }
    let e = 0.5 * pts.len() as f64;
    (mu / pow_p(d2, e), pow_p(mu, p) / pow_p(d2, e * p))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Visits every increasing index tuple `first < idx[1] < ...` of length `len`.
fn for_each_combination(n: usize, first: usize, len: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    idx[0] = first;
    if len == 1 {
        f(&idx);
        return;
    }
    fn rec(idx: &mut Vec<usize>, pos: usize, n: usize, f: &mut impl FnMut(&[usize])) {
        let start = idx[pos - 1] + 1;
        let remaining = idx.len() - pos;
        for i in start..=n.saturating_sub(remaining) {
            idx[pos] = i;
            if pos + 1 == idx.len() {
                f(idx);
            } else {
                rec(idx, pos + 1, n, f);
            }
        }
    }
    rec(&mut idx, 1, n, f);
}

/// Exact weighted sum of K^p over ordered (m+2)-tuples.
///
/// K is symmetric in its arguments and vanishes on tuples with a repeated point,
/// so the sum runs over increasing index tuples and is multiplied by (m+2)!.
/// With `restrict_ball = Some((a, ρ))` only tuples inside the closed ball count.
pub fn energy_brute(cloud: &PointCloud, p: f64, restrict_ball: Option<(&[f64], f64)>, budget: f64) -> Result<EnergyEstimate> {
    if !(p > 0.0) {
        return Err(Error::InvalidInput(format!("p must be positive, got {p}")));
    }
    let k = cloud.intrinsic_dim() + 2;
    let idx: Vec<usize> = match restrict_ball {
        Some((a, rho)) => ball_query(cloud, a, rho, Closure::Closed),
        None => (0..cloud.len()).collect(),
    };
    let n = idx.len();
    let tuples = (n as f64).powi(k as i32);
    if tuples > budget {
        return Err(Error::BudgetExceeded { tuples, budget });
    }
    let w = cloud.weights();
    let partial: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut sum = 0.0;
            let mut kmax = 0.0f64;
            let mut pts: Vec<&[f64]> = Vec::with_capacity(k);
            for_each_combination(n, first, k, &mut |c| {
                pts.clear();
                pts.extend(c.iter().map(|&i| cloud.point(idx[i])));
                let (kk, kp) = curvature_pow(&pts, p);
                if kk > 0.0 {
                    let wp: f64 = c.iter().map(|&i| w[idx[i]]).product();
                    sum += kp * wp;
                    kmax = kmax.max(kk);
                }
            });
            (sum, kmax)
        })
        .collect();
    let (sum, kmax) = partial.iter().fold((0.0, 0.0f64), |(s, m), &(a, b)| (s + a, m.max(b)));
    Ok(EnergyEstimate {
        p,
        value: sum * factorial(k),
        method: Method::Brute,
        samples: tuples as u64,
        stderr: 0.0,
        max_curvature_seen: kmax,
    })
}

/// Importance-sampled estimate of the ordered-tuple energy.
///
/// Each coordinate of a tuple is drawn independently with probability
/// proportional to its weight, so `mass^{m+2} · mean(K^p)` is unbiased. Batches of
/// `batch` samples draw from their own substream; the standard error comes from
/// the spread of batch means.
pub fn energy_mc(cloud: &PointCloud, p: f64, samples: u64, seed: u64, batch: u64) -> Result<EnergyEstimate> {
    if !(p > 0.0) {
        return Err(Error::InvalidInput(format!("p must be positive, got {p}")));
    }
    if samples < 1000 {
        return Err(Error::InvalidInput(format!("need at least 1000 samples, got {samples}")));
    }
    if batch == 0 {
        return Err(Error::InvalidInput("batch must be positive".into()));
    }
    let k = cloud.intrinsic_dim() + 2;
    if cloud.len() < k {
        return Err(Error::TooFewPoints { needed: k, got: cloud.len() });
    }
    let dist = WeightedIndex::new(cloud.weights()).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let nb = samples.div_ceil(batch);
    let stats: Vec<(u64, f64, f64)> = (0..nb)
        .into_par_iter()
        .map(|b| {
            let len = if b + 1 == nb { samples - b * batch } else { batch };
            let mut rng = stream(seed, b);
            let mut pts: Vec<&[f64]> = Vec::with_capacity(k);
            let (mut sum, mut kmax) = (0.0, 0.0f64);
            for _ in 0..len {
                pts.clear();
                for _ in 0..k {
                    pts.push(cloud.point(dist.sample(&mut rng)));
                }
                let (kk, kp) = curvature_pow(&pts, p);
                sum += kp;
                kmax = kmax.max(kk);
            }
            (len, sum, kmax)
        })
        .collect();
    let total: f64 = stats.iter().map(|s| s.1).sum();
    let mean = total / samples as f64;
    let kmax = stats.iter().map(|s| s.2).fold(0.0, f64::max);
    let scale = cloud.total_mass().powi(k as i32);
    let stderr = if nb >= 2 {
        let var: f64 = stats
            .iter()
            .map(|&(len, s, _)| {
                let frac = len as f64 / samples as f64;
                let bm = s / len as f64;
                frac * frac * (bm - mean) * (bm - mean)
            })
            .sum::<f64>()
            * nb as f64
            / (nb - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };
    Ok(EnergyEstimate {
        p,
        value: scale * mean,
        method: Method::MonteCarlo,
        samples,
        stderr: scale * stderr,
        max_curvature_seen: kmax,
    })
}

/// Largest K over `tuples` index tuples drawn uniformly (not by weight).
pub fn max_curvature_sampled(cloud: &PointCloud, tuples: u64, seed: u64) -> f64 {
    let k = cloud.intrinsic_dim() + 2;
    let n = cloud.len();
    if n < k {
        return 0.0;
    }
    const CHUNK: u64 = 65_536;
    (0..tuples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c);
            let len = CHUNK.min(tuples - c * CHUNK);
            let mut pts: Vec<&[f64]> = Vec::with_capacity(k);
            let mut best = 0.0f64;
            for _ in 0..len {
                pts.clear();
                for _ in 0..k {
                    pts.push(cloud.point(rng.random_range(0..n)));
                }
                best = best.max(curvature_k(&pts));
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> PointCloud {
        PointCloud::from_points(1, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0; 3]).unwrap()
    }

    #[test]
    fn three_point_brute() {
        let e = energy_brute(&tri(), 2.0, None, BRUTE_BUDGET).unwrap();
        assert_eq!(e.value, 0.1875);
        assert_eq!(e.samples, 27);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn collinear_is_zero() {
        let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let c = PointCloud::from_points(1, &pts, vec![1.0; 7]).unwrap();
        assert_eq!(energy_brute(&c, 3.5, None, BRUTE_BUDGET).unwrap().value, 0.0);
    }

    #[test]
    fn budget() {
        let pts: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let c = PointCloud::from_points(1, &pts, vec![1.0; 50]).unwrap();
        assert!(matches!(energy_brute(&c, 2.0, None, 1e4), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn restricted_ball_drops_far_points() {
        let c = PointCloud::from_points(
            1,
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![10.0, 10.0]],
            vec![1.0; 4],
        )
        .unwrap();
        let e = energy_brute(&c, 2.0, Some((&[0.0, 0.0], 1.5)), BRUTE_BUDGET).unwrap();
        assert_eq!(e.value, 0.1875);
    }

    #[test]
    fn mc_matches_three_point() {
        let e = energy_mc(&tri(), 2.0, 100_000, 3, 1000).unwrap();
        assert!((e.value - 0.1875).abs() < 3.0 * e.stderr, "{e:?}");
        let again = energy_mc(&tri(), 2.0, 100_000, 3, 1000).unwrap();
        assert_eq!(e, again);
    }
}
