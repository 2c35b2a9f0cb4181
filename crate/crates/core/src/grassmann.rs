//! Linear subspaces, projections, the Grassmannian metric and Gram–Schmidt
//! perturbation bounds.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol::{Tolerances, TOL_GEOM, TOL_LINALG};
use crate::vecops::{dot, norm, sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectMode {
    Onto,
    Complement,
}

/// An m-dimensional linear subspace of R^n stored as an n×m orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    frame: DMatrix<f64>,
}

impl Subspace {
    /// Wraps an n×k matrix whose columns are already orthonormal.
    pub fn from_frame(frame: DMatrix<f64>) -> Result<Self> {
        let k = frame.ncols();
        if k > frame.nrows() {
            return Err(Error::DimensionMismatch { expected: frame.nrows(), got: k });
        }
        let g = frame.transpose() * &frame;
        let err = (g - DMatrix::<f64>::identity(k, k)).amax();
        if err > 1e3 * TOL_LINALG {
            return Err(Error::InvalidInput(format!("frame not orthonormal (error {err:e})")));
        }
        Ok(Subspace { frame })
    }

    /// The span of the given vectors, orthonormalized in order.
    pub fn span(vectors: &[Vec<f64>]) -> Result<Self> {
        let b = Basis::new(vectors.to_vec())?;
        let o = orthonormalize(&b, GsMode::Unit)?;
        Ok(Subspace { frame: o.to_matrix() })
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(n: usize, axes: &[usize]) -> Self {
        let mut frame = DMatrix::zeros(n, axes.len());
        for (j, &i) in axes.iter().enumerate() {
            frame[(i, j)] = 1.0;
        }
        Subspace { frame }
    }

    /// The trivial subspace {0} of R^n.
    pub fn zero(n: usize) -> Self {
        Subspace { frame: DMatrix::zeros(n, 0) }
    }

    /// Orthonormalized Gaussian frame: rotation-invariant random element of G(n,k).
    pub fn random<R: rand::Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        loop {
            let vs: Vec<Vec<f64>> = (0..k).map(|_| crate::rng::gaussian_vec(rng, n)).collect();
            if let Ok(s) = Subspace::span(&vs) {
                return s;
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.frame.column(i).iter().copied().collect()
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }

    pub fn projector(&self) -> DMatrix<f64> {
        &self.frame * self.frame.transpose()
    }

    /// Coordinates of π_H(v) in the frame.
    pub fn coords(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| dot(self.frame.column(j).as_slice(), v))
            .collect()
    }

    /// Point of H with the given frame coordinates.
    pub fn embed(&self, c: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dim()];
        for (j, cj) in c.iter().enumerate() {
            for (o, f) in out.iter_mut().zip(self.frame.column(j).iter()) {
                *o += cj * f;
            }
        }
        out
    }

    pub fn project(&self, v: &[f64], mode: ProjectMode) -> Result<Vec<f64>> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: v.len() });
        }
        Ok(match mode {
            ProjectMode::Onto => self.onto(v),
            ProjectMode::Complement => self.perp(v),
        })
    }

    /// π_H(v) without the dimension check.
    pub fn onto(&self, v: &[f64]) -> Vec<f64> {
        self.embed(&self.coords(v))
    }

    /// Q_H(v) = v − π_H(v) without the dimension check.
    pub fn perp(&self, v: &[f64]) -> Vec<f64> {
        sub(v, &self.onto(v))
    }

    /// |Q_H(v)|
    pub fn perp_norm(&self, v: &[f64]) -> f64 {
        norm(&self.perp(v))
    }

    /// The orthogonal complement H^⊥, completed greedily from the standard basis.
    pub fn complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let mut cols: Vec<Vec<f64>> = self.vectors();
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(n - self.dim());
        while cols.len() < n {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for i in 0..n {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                let r = residual(&e, &cols);
                let rn = norm(&r);
                if best.as_ref().is_none_or(|(b, _)| rn > *b) {
                    best = Some((rn, r));
                }
            }
            let (rn, r) = best.expect("n > 0");
            let u: Vec<f64> = r.iter().map(|x| x / rn).collect();
            cols.push(u.clone());
            out.push(u);
        }
        let mut frame = DMatrix::zeros(n, out.len());
        for (j, v) in out.iter().enumerate() {
            frame.set_column(j, &DVector::from_column_slice(v));
        }
        Subspace { frame }
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        self.perp_norm(v) <= tol * norm(v).max(1.0)
    }
}

impl Serialize for Subspace {
    /// Serialized as the list of orthonormal frame vectors.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vectors().serialize(s)
    }
}

/// Residual of `v` against an orthonormal list, with one reorthogonalization pass.
fn residual(v: &[f64], ortho: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for e in ortho {
            let c = dot(&w, e);
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= c * ei;
            }
        }
    }
    w
}

/// An ordered list of vectors in R^n, not necessarily orthonormal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Basis {
    pub vectors: Vec<Vec<f64>>,
}

impl Basis {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let n = vectors.first().map(|v| v.len()).ok_or(Error::EmptySet)?;
        for v in &vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        Ok(Basis { vectors })
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.ambient_dim(), self.len());
        for (j, v) in self.vectors.iter().enumerate() {
            m.set_column(j, &DVector::from_column_slice(v));
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GsMode {
    Unit,
    /// Ortho-ρ-normal output.
    Scaled(f64),
}

/// Gram–Schmidt in the given order. Each residual `w_k` is computed against the
/// already produced unit vectors (re-orthogonalized once, which changes nothing
/// in exact arithmetic). Fails when `|w_k| < tol.linalg · |v_k|`.
pub fn orthonormalize(basis: &Basis, mode: GsMode) -> Result<Basis> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for (k, v) in basis.vectors.iter().enumerate() {
        let w = residual(v, &out);
        let wn = norm(&w);
        let vn = norm(v);
        if !(wn > TOL_LINALG * vn) || vn == 0.0 {
            return Err(Error::DegenerateBasis { index: k, residual: wn });
        }
        out.push(w.iter().map(|x| x / wn).collect());
    }
    if let GsMode::Scaled(rho) = mode {
        for v in out.iter_mut() {
            v.iter_mut().for_each(|x| *x *= rho);
        }
    }
    Ok(Basis { vectors: out })
}

fn check_dims(u: &Subspace, v: &Subspace) -> Result<()> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: u.ambient_dim(), got: v.ambient_dim() });
    }
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: v.dim() });
    }
    Ok(())
}

fn lex_cmp(a: &DMatrix<f64>, b: &DMatrix<f64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// dgras(U,V) = ‖π_U − π_V‖, the largest singular value of the projector difference.
///
/// The difference is always formed in a canonical order of the two projectors so
/// the result is bit-for-bit symmetric.
pub fn grass_distance(u: &Subspace, v: &Subspace) -> Result<f64> {
    check_dims(u, v)?;
    let (pu, pv) = (u.projector(), v.projector());
    let d = if lex_cmp(&pu, &pv) == std::cmp::Ordering::Greater { pv - pu } else { pu - pv };
    let s = d.singular_values().max();
    Ok(s.clamp(0.0, 1.0))
}

/// Closed form of the frame metric 𝔡(U,V) via cross-Gram singular values.
pub fn frame_distance(u: &Subspace, v: &Subspace) -> Result<f64> {
    check_dims(u, v)?;
    let m = u.dim() as f64;
    let s: f64 = (u.frame().transpose() * v.frame()).singular_values().sum();
    Ok((2.0 * m - 2.0 * s).max(0.0).sqrt())
}

/// Orthonormal frames of U and V realizing the frame metric.
pub fn aligned_frames(u: &Subspace, v: &Subspace) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    check_dims(u, v)?;
    let g = u.frame().transpose() * v.frame();
    let svd = g.svd(true, true);
    let a = svd.u.expect("requested");
    let b = svd.v_t.expect("requested").transpose();
    let e = u.frame() * a;
    let f = v.frame() * b;
    let cols = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.ncols()).map(|j| m.column(j).iter().copied().collect()).collect()
    };
    Ok((cols(&e), cols(&f)))
}

/// ρεδ-basis test: norms in [(1−ε)ρ, (1+ε)ρ], off-diagonal |⟨v_i,v_j⟩| ≤ δρ².
pub fn is_red_basis(basis: &Basis, rho: f64, eps: f64, delta: f64) -> bool {
    let vs = &basis.vectors;
    for (i, vi) in vs.iter().enumerate() {
        let r = norm(vi);
        if r < (1.0 - eps) * rho || r > (1.0 + eps) * rho {
            return false;
        }
        for vj in &vs[i + 1..] {
            if dot(vi, vj).abs() > delta * rho * rho {
                return false;
            }
        }
    }
    true
}

/// Smallest (ε, δ) for which `basis` is a ρεδ-basis.
pub fn red_parameters(basis: &Basis, rho: f64) -> (f64, f64) {
    let vs = &basis.vectors;
    let mut eps = 0.0f64;
    let mut delta = 0.0f64;
    for (i, vi) in vs.iter().enumerate() {
        eps = eps.max((norm(vi) / rho - 1.0).abs());
        for vj in &vs[i + 1..] {
            delta = delta.max(dot(vi, vj).abs() / (rho * rho));
        }
    }
    (eps, delta)
}

/// Gram–Schmidt perturbation constants for dimension m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrassConstants {
    pub m: usize,
    pub c_gs_eps: f64,
    pub c_gs_del: f64,
    pub c_dist_ang: f64,
}

impl GrassConstants {
    /// C_dist-ang / (1 − C_dist-ang (C_gs-eps ε + C_gs-del δ)).
    pub fn c_red_ang(&self, eps: f64, delta: f64) -> Result<f64> {
        let denom = 1.0 - self.c_dist_ang * (self.c_gs_eps * eps + self.c_gs_del * delta);
        if denom <= 0.0 {
            return Err(Error::ConstantUndefined(format!(
                "red-ang denominator {denom} <= 0 for eps = {eps}, delta = {delta}"
            )));
        }
        Ok(self.c_dist_ang / denom)
    }
}

pub fn grass_constants(m: usize) -> Result<GrassConstants> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let (mut sa, mut sb) = (0.0, 0.0);
    let (mut a, mut b) = (0.0, 0.0);
    for k in 1..=m {
        a = 1.0 + 4.0 * sa;
        b = 2.0 * (k as f64 - 1.0) + 4.0 * sb;
        sa += a;
        sb += b;
    }
    Ok(GrassConstants {
        m,
        c_gs_eps: a,
        c_gs_del: b,
        c_dist_ang: 2.0 * m as f64 * (a + b + 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseMode {
    Plane,
    Complement,
}

fn solve_on_frames(a: &DMatrix<f64>, b: &DMatrix<f64>, v: &[f64]) -> Result<Vec<f64>> {
    let g = a.transpose() * b;
    let rhs = a.transpose() * DVector::from_column_slice(v);
    let c = g
        .lu()
        .solve(&rhs)
        .ok_or(Error::AngleTooLarge(1.0))?;
    Ok((b * c).iter().copied().collect())
}

/// The unique w ∈ V (resp. V^⊥) with π_U(w) = v (resp. Q_U(w) = v).
pub fn inverse_projection(u: &Subspace, v: &Subspace, x: &[f64], mode: InverseMode) -> Result<Vec<f64>> {
    check_dims(u, v)?;
    if x.len() != u.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: u.ambient_dim(), got: x.len() });
    }
    let d = grass_distance(u, v)?;
    if d >= 1.0 - TOL_GEOM {
        return Err(Error::AngleTooLarge(d));
    }
    let scale = norm(x).max(1.0);
    match mode {
        InverseMode::Plane => {
            if u.perp_norm(x) > TOL_GEOM * scale {
                return Err(Error::NotInDomain("vector is not in U".into()));
            }
            if u.dim() == 0 {
                return Ok(vec![0.0; x.len()]);
            }
            solve_on_frames(u.frame(), v.frame(), x)
        }
        InverseMode::Complement => {
            if norm(&u.onto(x)) > TOL_GEOM * scale {
                return Err(Error::NotInDomain("vector is not in the complement of U".into()));
            }
            let (uc, vc) = (u.complement(), v.complement());
            if uc.dim() == 0 {
                return Ok(vec![0.0; x.len()]);
            }
            solve_on_frames(uc.frame(), vc.frame(), x)
        }
    }
}

/// Input to [`verify_perturbation_bounds`]; one variant per perturbation bound.
#[derive(Debug, Clone)]
pub enum PerturbationTrial {
    /// Orthonormal frames with |e_i − f_i| ≤ θ; bound dgras ≤ 2mθ.
    CloseBases { e: Vec<Vec<f64>>, f: Vec<Vec<f64>>, theta: f64 },
    /// ρεδ-basis vs its ortho-ρ-normal Gram–Schmidt output; bound (C₁ε + C₂δ)ρ.
    GsRed { basis: Basis, rho: f64, eps: f64, delta: f64 },
    /// Orthonormal frame of V with |Q_U e_i| ≤ θ; bound dgras ≤ C₃θ.
    DistAng { u: Subspace, frame: Vec<Vec<f64>>, theta: f64 },
    /// ρεδ-basis v of V and basis u of U with |u_i − v_i| ≤ θρ; bound dgras ≤ C₄θ.
    RedAng { v: Basis, u: Basis, rho: f64, eps: f64, delta: f64, theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

fn is_orthonormal(vs: &[Vec<f64>], tol: f64) -> bool {
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            if (dot(a, b) - target).abs() > tol {
                return false;
            }
        }
    }
    true
}

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!("{name} = {x} not in (0,1)")))
    }
}

pub fn verify_perturbation_bounds(trial: &PerturbationTrial, tol: &Tolerances) -> Result<BoundReport> {
    let report = |lhs: f64, rhs: f64| BoundReport { lhs, rhs, satisfied: lhs <= rhs + tol.geom };
    match trial {
        PerturbationTrial::CloseBases { e, f, theta } => {
            if e.len() != f.len() || e.is_empty() {
                return Err(Error::HypothesisViolated("frames of different length".into()));
            }
            if !is_orthonormal(e, 1e3 * tol.linalg) || !is_orthonormal(f, 1e3 * tol.linalg) {
                return Err(Error::HypothesisViolated("frames are not orthonormal".into()));
            }
            for (a, b) in e.iter().zip(f) {
                if crate::vecops::dist(a, b) > theta + tol.linalg {
                    return Err(Error::HypothesisViolated("|e_i - f_i| > theta".into()));
                }
            }
            let d = grass_distance(&Subspace::span(e)?, &Subspace::span(f)?)?;
            Ok(report(d, 2.0 * e.len() as f64 * theta))
        }
        PerturbationTrial::GsRed { basis, rho, eps, delta } => {
            open_unit("eps", *eps)?;
            open_unit("delta", *delta)?;
            if !is_red_basis(basis, *rho, *eps, *delta) {
                return Err(Error::HypothesisViolated("not a rho-eps-delta basis".into()));
            }
            let c = grass_constants(basis.len())?;
            let hat = orthonormalize(basis, GsMode::Scaled(*rho))?;
            let lhs = basis
                .vectors
                .iter()
                .zip(&hat.vectors)
                .map(|(a, b)| crate::vecops::dist(a, b))
                .fold(0.0, f64::max);
            Ok(report(lhs, (c.c_gs_eps * eps + c.c_gs_del * delta) * rho))
        }
        PerturbationTrial::DistAng { u, frame, theta } => {
            open_unit("theta", *theta)?;
            if frame.len() != u.dim() || !is_orthonormal(frame, 1e3 * tol.linalg) {
                return Err(Error::HypothesisViolated("frame of V is not orthonormal of dim m".into()));
            }
            if frame.iter().any(|e| u.perp_norm(e) > theta + tol.linalg) {
                return Err(Error::HypothesisViolated("|Q_U e_i| > theta".into()));
            }
            let c = grass_constants(u.dim())?;
            let d = grass_distance(u, &Subspace::span(frame)?)?;
            Ok(report(d, c.c_dist_ang * theta))
        }
        PerturbationTrial::RedAng { v, u, rho, eps, delta, theta } => {
            open_unit("eps", *eps)?;
            open_unit("delta", *delta)?;
            open_unit("theta", *theta)?;
            if v.len() != u.len() {
                return Err(Error::HypothesisViolated("bases of different length".into()));
            }
            if !is_red_basis(v, *rho, *eps, *delta) {
                return Err(Error::HypothesisViolated("v is not a rho-eps-delta basis".into()));
            }
            for (a, b) in u.vectors.iter().zip(&v.vectors) {
                if crate::vecops::dist(a, b) > theta * rho + tol.linalg {
                    return Err(Error::HypothesisViolated("|u_i - v_i| > theta rho".into()));
                }
            }
            let c = grass_constants(v.len())?;
            let c4 = c
                .c_red_ang(*eps, *delta)
                .map_err(|e| Error::HypothesisViolated(format!("cond eps-del: {e}")))?;
            let d = grass_distance(&Subspace::span(&u.vectors)?, &Subspace::span(&v.vectors)?)?;
            Ok(report(d, c4 * theta))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn gs_orders_and_normalizes() {
        let b = Basis::new(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let o = orthonormalize(&b, GsMode::Unit).unwrap();
        assert_eq!(o.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let d = Basis::new(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(orthonormalize(&d, GsMode::Unit), Err(Error::DegenerateBasis { index: 1, .. })));
    }

    #[test]
    fn projections() {
        let h = Subspace::coordinate(2, &[0]);
        assert_eq!(h.project(&[3.0, 4.0], ProjectMode::Onto).unwrap(), vec![3.0, 0.0]);
        assert_eq!(h.project(&[3.0, 4.0], ProjectMode::Complement).unwrap(), vec![0.0, 4.0]);
        assert!(h.project(&[1.0], ProjectMode::Onto).is_err());
    }

    #[test]
    fn distances_on_lines() {
        let u = Subspace::coordinate(2, &[0]);
        let v = Subspace::coordinate(2, &[1]);
        assert!((grass_distance(&u, &v).unwrap() - 1.0).abs() < 1e-15);
        assert!((frame_distance(&u, &v).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(grass_distance(&u, &u).unwrap(), 0.0);
        let phi = std::f64::consts::PI / 6.0;
        let w = Subspace::span(&[vec![phi.cos(), phi.sin()]]).unwrap();
        assert!((grass_distance(&u, &w).unwrap() - 0.5).abs() < 1e-12);
        let x = inverse_projection(&u, &w, &[1.0, 0.0], InverseMode::Plane).unwrap();
        assert!((norm(&x) - 1.0 / phi.cos()).abs() < 1e-12);
        assert!(matches!(
            inverse_projection(&u, &v, &[1.0, 0.0], InverseMode::Plane),
            Err(Error::AngleTooLarge(_))
        ));
        assert!(matches!(
            inverse_projection(&u, &w, &[0.0, 1.0], InverseMode::Plane),
            Err(Error::NotInDomain(_))
        ));
    }

    #[test]
    fn constants_recurrences() {
        let c1 = grass_constants(1).unwrap();
        assert_eq!((c1.c_gs_eps, c1.c_gs_del, c1.c_dist_ang), (1.0, 0.0, 4.0));
        let c2 = grass_constants(2).unwrap();
        assert_eq!((c2.c_gs_eps, c2.c_gs_del, c2.c_dist_ang), (5.0, 2.0, 32.0));
        let r = c2.c_red_ang(0.001, 0.001).unwrap();
        assert!((r - 32.0 / (1.0 - 32.0 * 0.007)).abs() < 1e-12);
        assert!((r - 41.24).abs() < 0.01);
        assert!(c2.c_red_ang(0.1, 0.1).is_err());
        let c3 = grass_constants(3).unwrap();
        assert_eq!((c3.c_gs_eps, c3.c_gs_del), (25.0, 12.0));
    }

    #[test]
    fn red_basis_examples() {
        let b = Basis::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert!(!is_red_basis(&b, 1.0, 0.3, 0.4));
        let s = Basis::new(vec![vec![1.2, 0.0], vec![0.0, 1.2]]).unwrap();
        assert!(!is_red_basis(&s, 1.0, 0.1, 0.5));
        let o = Basis::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(is_red_basis(&o, 1.0, 0.01, 0.01));
    }

    #[test]
    fn complement_is_orthogonal() {
        let mut rng = stream(3, 0);
        let h = Subspace::random(6, 2, &mut rng);
        let c = h.complement();
        assert_eq!(c.dim(), 4);
        let g = h.frame().transpose() * c.frame();
        assert!(g.amax() < 1e-12);
        assert!(Subspace::from_frame(c.frame().clone()).is_ok());
    }

    #[test]
    fn perturbation_trivial_report() {
        let e = vec![vec![1.0, 0.0, 0.0]];
        let r = verify_perturbation_bounds(
            &PerturbationTrial::CloseBases { e: e.clone(), f: e, theta: 0.0 },
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!((r.lhs, r.rhs, r.satisfied), (0.0, 0.0, true));
    }
}
