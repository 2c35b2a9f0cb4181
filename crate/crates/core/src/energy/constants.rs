use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::grass_constants;
use crate::simplex::{big_omega, c_eta_const, perturbation_constant, unit_ball_volume, upsilon};
use crate::tol::TOL_GEOM;

const LN10: f64 = std::f64::consts::LN_10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents {
    pub lambda: f64,
    pub kappa: f64,
    pub tau: f64,
    pub alpha: f64,
}

/// λ = p − m(m+2), κ = (m+1)(m(m+1)(m+2)+p), τ = λ/κ, α = 1 − m(m+2)/p.
pub fn exponents(m: usize, p: f64) -> Result<Exponents> {
    let mf = m as f64;
    let critical = mf * (mf + 2.0);
    if m == 0 || !(p > critical) {
        return Err(Error::SubcriticalExponent { p, critical });
    }
    let lambda = p - critical;
    let kappa = (mf + 1.0) * (mf * (mf + 1.0) * (mf + 2.0) + p);
    Ok(Exponents { lambda, kappa, tau: lambda / kappa, alpha: 1.0 - critical / p })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Largest h₀ ≤ ½ with δ + 2h₀δ ≤ (1 − 2h₀δ)√(1 − (2h₀δ)²).
pub fn h0_choice(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::NoValidH0(delta));
    }
    if delta <= 0.25 {
        return Ok(0.5);
    }
    let g = |h: f64| {
        let s = 2.0 * h * delta;
        (1.0 - s) * (1.0 - s * s).sqrt() - delta - s
    };
    if g(0.5) >= 0.0 {
        return Ok(0.5);
    }
    // g(0) = 1 − δ > 0 and g is decreasing in h
    let (mut lo, mut hi) = (0.0, 0.5);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= 0.0 {
        return Err(Error::NoValidH0(delta));
    }
    Ok(lo)
}

/// Smallest positive root of Ψ = (1 − Ψ)√(1 − Ψ²) − Lδ.
pub fn psi0(l_delta: f64) -> Result<f64> {
    if !(l_delta > 0.0 && l_delta < 1.0) {
        return Err(Error::InvalidInput(format!("L*delta = {l_delta} must lie in (0,1)")));
    }
    let f = |s: f64| (1.0 - s) * (1.0 - s * s).sqrt() - l_delta - s;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// L in (√((2−δ)/δ), 1/δ): 3 when admissible, otherwise the midpoint.
fn choose_l(delta: f64) -> f64 {
    let (lo, hi) = (((2.0 - delta) / delta).sqrt(), 1.0 / delta);
    if lo < 3.0 && 3.0 < hi {
        3.0
    } else {
        0.5 * (lo + hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LedgerInputs {
    pub e: f64,
    pub m: usize,
    pub p: f64,
    pub delta: f64,
    /// Gap constant; 5 when absent.
    pub m_sigma: Option<f64>,
    /// Ahlfors constant; (1−δ²)^{m/2}ω_m when absent.
    pub a_sigma: Option<f64>,
}

/// Every constant of the chain, in dependency order. Constants that underflow
/// `f64` are also given as base-10 logarithms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsLedger {
    pub e: f64,
    pub m: usize,
    pub p: f64,
    pub delta: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub tau: f64,
    pub alpha: f64,
    pub omega_m: f64,
    pub big_omega: f64,
    pub upsilon_m: f64,
    /// Implementation-defined: the paper only asserts that it exists.
    pub c_eta_const: f64,
    pub c_eta_d1: f64,
    pub log10_c_eta_d1: f64,
    pub c_eta_d2: f64,
    pub h0: f64,
    pub eta: f64,
    pub varsigma_m: f64,
    pub a1: f64,
    pub log10_a1: f64,
    pub c_uahlreg1: f64,
    pub log10_c_uahlreg1: f64,
    pub c_uahlreg2: f64,
    pub log10_c_uahlreg2: f64,
    pub r_uar: f64,
    pub log10_r_uar: f64,
    pub l: f64,
    pub gamma: f64,
    pub psi0: f64,
    pub r_adm_fine: f64,
    pub m_sigma: f64,
    pub a_sigma: f64,
    pub r_sigma: f64,
    pub c_dist_ang: f64,
    pub c_beta_est: f64,
    pub c_bap_osc: f64,
    pub c_tan_dist: f64,
    pub c_tan_point: f64,
    pub c_lip_const: f64,
    pub c_tan_osc: f64,
    pub c_holder_norm: f64,
    pub r_beta_rad: f64,
    pub r_graph_rad: f64,
    pub r_smooth_rad: f64,
    pub c_smooth_rad_const: f64,
}

/// Natural logs of the δ-dependent pieces, kept in log space.
struct Uahl {
    h0: f64,
    eta: f64,
    varsigma: f64,
    ln_a1: f64,
    ln_c1: f64,
    ln_c2: f64,
}

fn ln_eta_d1(m: usize) -> f64 {
    let mf = m as f64;
    let base = c_eta_const() / (2.0 * upsilon(m) * big_omega().powi(m as i32 + 2) * factorial(m));
    mf * (mf + 2.0) * base.ln()
}

fn ln_eta_d2(m: usize) -> f64 {
    -(((m + 1) as f64) * 2f64.powi(m as i32 + 2)).ln()
}

fn uahl(m: usize, delta: f64) -> Result<Uahl> {
    let mf = m as f64;
    let h0 = h0_choice(delta)?;
    let eta = ((1.0 - delta * delta).sqrt() / (2.0 * factorial(m).powf(1.0 / mf))).min(0.5 * h0 * delta);
    let varsigma = perturbation_constant(m, eta)?.varsigma;
    let ln_a1 = 0.5 * (1.0 - delta * delta).ln() + unit_ball_volume(m).ln() + mf * varsigma.ln();
    let ln_c1 = ln_eta_d1(m) + (mf + 2.0) * ln_a1 + mf * (mf + 1.0) * (mf + 1.0) * (mf + 2.0) * eta.ln();
    let ln_c2 = ln_eta_d2(m) + (mf + 1.0) * eta.ln();
    Ok(Uahl { h0, eta, varsigma, ln_a1, ln_c1, ln_c2 })
}

/// The tangent-plane constants that depend on (m, p, A_Σ, M_Σ) only.
struct TanChain {
    c_dist_ang: f64,
    c_beta_est: f64,
    c_bap_osc: f64,
    c_tan_dist: f64,
    c_tan_point: f64,
    c_lip_const: f64,
    c_tan_osc: f64,
    c_holder_norm: f64,
}

fn tan_chain(m: usize, p: f64, ex: &Exponents, a_sigma: f64, m_sigma: f64) -> Result<TanChain> {
    let mf = m as f64;
    let c_dist_ang = grass_constants(m)?.c_dist_ang;
    let ln_den = ln_eta_d1(m) + p * ln_eta_d2(m) + (mf + 2.0) * a_sigma.ln();
    let c_beta_est = 2.0 / factorial(m).powf(1.0 / mf) * (-ln_den / ex.kappa).exp();
    let tau = ex.tau;
    let c_bap_osc = 8.0 / 3.0 * (m_sigma + 2.0) * c_dist_ang * c_beta_est;
    let c_tan_dist = c_bap_osc * 2f64.powf(1.0 + tau) / (2f64.powf(tau) - 1.0);
    let c_tan_point = c_tan_dist + c_beta_est;
    let c_lip_const = c_tan_point / (4.0 * c_beta_est * m_sigma);
    let c_tan_osc = c_bap_osc + 2.0 * c_tan_dist;
    let denom = 2.0 * c_tan_osc - 3.0 * c_tan_point;
    if denom <= 0.0 {
        return Err(Error::ConstantUndefined(format!("2 C_tan-osc - 3 C_tan-point = {denom} <= 0")));
    }
    let c_holder_norm = 4.0 * c_tan_osc * (4.0 * c_tan_osc / denom).powf(tau);
    Ok(TanChain { c_dist_ang, c_beta_est, c_bap_osc, c_tan_dist, c_tan_point, c_lip_const, c_tan_osc, c_holder_norm })
}

/// (7γΨ₀ / (16 C_beta-est))^{1/τ}, without the E factor.
fn adm_fine_coeff(gamma: f64, psi: f64, c_beta_est: f64, tau: f64) -> f64 {
    (7.0 * gamma * psi / (16.0 * c_beta_est)).powf(1.0 / tau)
}

pub fn constants_ledger(e: f64, m: usize, p: f64, delta: f64) -> Result<ConstantsLedger> {
    constants_ledger_with(&LedgerInputs { e, m, p, delta, m_sigma: None, a_sigma: None })
}

pub fn constants_ledger_with(inp: &LedgerInputs) -> Result<ConstantsLedger> {
    let LedgerInputs { e, m, p, delta, .. } = *inp;
    let ex = exponents(m, p)?;
    if !(e > 0.0) {
        return Err(Error::InvalidInput(format!("E must be positive, got {e}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta must lie in (0,1), got {delta}")));
    }
    let mf = m as f64;
    let omega_m = unit_ball_volume(m);
    let m_sigma = inp.m_sigma.unwrap_or(5.0);
    let a_sigma = inp.a_sigma.unwrap_or((1.0 - delta * delta).powf(mf / 2.0) * omega_m);
    let u = uahl(m, delta)?;
    let ln_e = e.ln();
    let ln_r_uar = (u.ln_c1 + p * u.ln_c2 - ln_e) / ex.lambda;
    let e_fac = (-ln_e / ex.lambda).exp();

    let tc = tan_chain(m, p, &ex, a_sigma, m_sigma)?;
    let l = choose_l(delta);
    let gamma = (1.0 - (l * delta).powi(2)).sqrt();
    let psi = psi0(l * delta)?;
    let r_adm_fine = adm_fine_coeff(gamma, psi, tc.c_beta_est, ex.tau) * e_fac;
    let r_uar = ln_r_uar.exp();
    let r_sigma = r_uar.min(r_adm_fine);
    let tau = ex.tau;
    let r_beta_rad = ((4.0 * tc.c_beta_est * m_sigma).powf(-1.0 / tau) * e_fac).min(r_sigma);
    let r_graph_rad = (0.5 * e_fac * (tc.c_tan_osc + tc.c_tan_point * (2.0 * tc.c_lip_const).powf(tau)).powf(-1.0 / tau))
        .min(r_beta_rad / (4.0 * tc.c_lip_const));
    let r_smooth_rad =
        0.5 * (e_fac * (2.0 * tc.c_tan_osc).powf(-1.0 / tau)).min(r_graph_rad).min(0.5 * r_beta_rad);

    // the E-free constant is always evaluated at δ = ¼ with the default A_Σ, M_Σ
    let c_smooth_rad_const = {
        let d: f64 = 0.25;
        let a = (1.0 - d * d).powf(mf / 2.0) * omega_m;
        let t = tan_chain(m, p, &ex, a, 5.0)?;
        let uq = uahl(m, d)?;
        let uar = ((uq.ln_c1 + p * uq.ln_c2) / ex.lambda).exp();
        let psi_q = psi0(3.0 * d)?;
        let adm = (7.0 * 7f64.sqrt() * psi_q / (64.0 * t.c_beta_est)).powf(1.0 / tau);
        let inner = (4.0 * t.c_beta_est * 5.0).powf(-1.0 / tau).min(uar).min(adm);
        0.5 * (2.0 * t.c_tan_osc)
            .powf(-1.0 / tau)
            .min(0.5 * (t.c_tan_osc + t.c_tan_point * (2.0 * t.c_lip_const).powf(tau)).powf(-1.0 / tau))
            .min(inner / (4.0 * t.c_lip_const))
    };

    let ln_d1 = ln_eta_d1(m);
    Ok(ConstantsLedger {
        e,
        m,
        p,
        delta,
        lambda: ex.lambda,
        kappa: ex.kappa,
        tau: ex.tau,
        alpha: ex.alpha,
        omega_m,
        big_omega: big_omega(),
        upsilon_m: upsilon(m),
        c_eta_const: c_eta_const(),
        c_eta_d1: ln_d1.exp(),
        log10_c_eta_d1: ln_d1 / LN10,
        c_eta_d2: ln_eta_d2(m).exp(),
        h0: u.h0,
        eta: u.eta,
        varsigma_m: u.varsigma,
        a1: u.ln_a1.exp(),
        log10_a1: u.ln_a1 / LN10,
        c_uahlreg1: u.ln_c1.exp(),
        log10_c_uahlreg1: u.ln_c1 / LN10,
        c_uahlreg2: u.ln_c2.exp(),
        log10_c_uahlreg2: u.ln_c2 / LN10,
        r_uar,
        log10_r_uar: ln_r_uar / LN10,
        l,
        gamma,
        psi0: psi,
        r_adm_fine,
        m_sigma,
        a_sigma,
        r_sigma,
        c_dist_ang: tc.c_dist_ang,
        c_beta_est: tc.c_beta_est,
        c_bap_osc: tc.c_bap_osc,
        c_tan_dist: tc.c_tan_dist,
        c_tan_point: tc.c_tan_point,
        c_lip_const: tc.c_lip_const,
        c_tan_osc: tc.c_tan_osc,
        c_holder_norm: tc.c_holder_norm,
        r_beta_rad,
        r_graph_rad,
        r_smooth_rad,
        c_smooth_rad_const,
    })
}

impl ConstantsLedger {
    /// (name, value, formula) rows in dependency order.
    pub fn rows(&self) -> Vec<(&'static str, f64, &'static str)> {
        vec![
            ("E", self.e, "input"),
            ("m", self.m as f64, "input"),
            ("p", self.p, "input"),
            ("delta", self.delta, "input"),
            ("lambda", self.lambda, "p - m(m+2)"),
            ("kappa", self.kappa, "(m+1)(m(m+1)(m+2)+p)"),
            ("tau", self.tau, "lambda/kappa"),
            ("alpha", self.alpha, "1 - m(m+2)/p"),
            ("omega_m", self.omega_m, "volume of the unit m-ball"),
            ("Omega", self.big_omega, "max_k omega_k"),
            ("Upsilon_m", self.upsilon_m, "(1+(3/4)^(1/(m+2)))/(1-(3/4)^(1/(m+2)))"),
            ("C_eta_const", self.c_eta_const, "implementation-defined: min(ln 2, min_k second bound)^2"),
            ("C_eta_d1", self.c_eta_d1, "(C_eta_const/(2 Upsilon(m) Omega^(m+2) m!))^(m(m+2))"),
            ("log10_C_eta_d1", self.log10_c_eta_d1, "log10 of C_eta_d1"),
            ("C_eta_d2", self.c_eta_d2, "1/((m+1) 2^(m+2))"),
            ("h0", self.h0, "largest h0 <= 1/2 with delta+2h0 delta <= (1-2h0 delta)sqrt(1-(2h0 delta)^2)"),
            ("eta", self.eta, "min(sqrt(1-delta^2)/(2 (m!)^(1/m)), h0 delta/2)"),
            ("varsigma_m", self.varsigma_m, "perturbation radius at eta"),
            ("A_1", self.a1, "sqrt(1-delta^2) omega_m varsigma_m^m"),
            ("log10_A_1", self.log10_a1, "log10 of A_1"),
            ("C_uahlreg1", self.c_uahlreg1, "C_eta_d1 A_1^(m+2) eta^(m(m+1)^2(m+2))"),
            ("log10_C_uahlreg1", self.log10_c_uahlreg1, "log10 of C_uahlreg1"),
            ("C_uahlreg2", self.c_uahlreg2, "C_eta_d2 eta^(m+1)"),
            ("log10_C_uahlreg2", self.log10_c_uahlreg2, "log10 of C_uahlreg2"),
            ("R_uar", self.r_uar, "(C_uahlreg1 C_uahlreg2^p / E)^(1/lambda)"),
            ("log10_R_uar", self.log10_r_uar, "log10 of R_uar"),
            ("L", self.l, "3 if in (sqrt((2-delta)/delta), 1/delta), else the midpoint"),
            ("gamma", self.gamma, "sqrt(1-(L delta)^2)"),
            ("Psi_0", self.psi0, "smallest positive root of Psi = (1-Psi)sqrt(1-Psi^2) - L delta"),
            ("R_adm_fine", self.r_adm_fine, "(7 gamma Psi_0/(16 C_beta_est))^(1/tau) E^(-1/lambda)"),
            ("M_Sigma", self.m_sigma, "gap constant"),
            ("A_Sigma", self.a_sigma, "Ahlfors constant"),
            ("R_Sigma", self.r_sigma, "min(R_uar, R_adm_fine)"),
            ("C_dist_ang", self.c_dist_ang, "2m(A_m+B_m+1)"),
            ("C_beta_est", self.c_beta_est, "2/(m!)^(1/m) (C_eta_d1 C_eta_d2^p A_Sigma^(m+2))^(-1/kappa)"),
            ("C_bap_osc", self.c_bap_osc, "(8/3)(M_Sigma+2) C_dist_ang C_beta_est"),
            ("C_tan_dist", self.c_tan_dist, "C_bap_osc 2^(1+tau)/(2^tau-1)"),
            ("C_tan_point", self.c_tan_point, "C_tan_dist + C_beta_est"),
            ("C_lip_const", self.c_lip_const, "C_tan_point/(4 C_beta_est M_Sigma)"),
            ("C_tan_osc", self.c_tan_osc, "C_bap_osc + 2 C_tan_dist"),
            ("C_holder_norm", self.c_holder_norm, "4 C_tan_osc (4 C_tan_osc/(2 C_tan_osc - 3 C_tan_point))^tau"),
            ("R_beta_rad", self.r_beta_rad, "min((4 C_beta_est M_Sigma)^(-1/tau) E^(-1/lambda), R_Sigma)"),
            (
                "R_graph_rad",
                self.r_graph_rad,
                "min(E^(-1/lambda)(C_tan_osc + C_tan_point (2 C_lip_const)^tau)^(-1/tau)/2, R_beta_rad/(4 C_lip_const))",
            ),
            (
                "R_smooth_rad",
                self.r_smooth_rad,
                "min(E^(-1/lambda)(2 C_tan_osc)^(-1/tau), R_graph_rad, R_beta_rad/2)/2",
            ),
            ("C_smooth_rad_const", self.c_smooth_rad_const, "E-free smooth radius at delta = 1/4"),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,value,formula\n");
        for (name, value, formula) in self.rows() {
            s.push_str(&format!("{name},{value:.16e},\"{formula}\"\n"));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalanceCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// d ≥ (C_eta-d1 C_eta-d2^p A^{m+2} / E)^{1/λ} η^{κ/λ}.
pub fn balance_check(eta: f64, d: f64, e: f64, a_sigma: f64, m: usize, p: f64) -> Result<BalanceCheck> {
    let ex = exponents(m, p)?;
    if !(eta > 0.0 && d > 0.0 && e > 0.0 && a_sigma > 0.0) {
        return Err(Error::InvalidInput("balance check inputs must be positive".into()));
    }
    let mf = m as f64;
    let ln_rhs = (ln_eta_d1(m) + p * ln_eta_d2(m) + (mf + 2.0) * a_sigma.ln() - e.ln()) / ex.lambda
        + ex.kappa / ex.lambda * eta.ln();
    let rhs = ln_rhs.exp();
    Ok(BalanceCheck { holds: d >= rhs - TOL_GEOM * rhs.max(1.0), lhs: d, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_exponents() {
        let e = exponents(2, 16.0).unwrap();
        assert_eq!((e.lambda, e.kappa, e.tau, e.alpha), (8.0, 120.0, 1.0 / 15.0, 0.5));
        let e = exponents(1, 4.0).unwrap();
        assert_eq!((e.lambda, e.kappa, e.tau, e.alpha), (1.0, 20.0, 0.05, 0.25));
        assert!(matches!(exponents(1, 3.0), Err(Error::SubcriticalExponent { .. })));
    }

    #[test]
    fn h0_values() {
        assert_eq!(h0_choice(0.25).unwrap(), 0.5);
        let d = 0.6;
        let h = h0_choice(d).unwrap();
        assert!(h > 0.0 && h < 0.5);
        let s = 2.0 * h * d;
        assert!((d + s - (1.0 - s) * (1.0 - s * s).sqrt()).abs() < 1e-9);
        assert!(h0_choice(1.0).is_err());
    }

    #[test]
    fn psi_root() {
        let p = psi0(0.75).unwrap();
        assert!((p - ((1.0 - p) * (1.0 - p * p).sqrt() - 0.75)).abs() < 1e-12);
        assert!(p > 0.0 && p < 0.25);
    }

    #[test]
    fn ledger_shape() {
        let l = constants_ledger(1.0, 2, 16.0, 0.25).unwrap();
        assert!((l.c_eta_d2 - 1.0 / 48.0).abs() < 1e-15);
        assert_eq!(l.h0, 0.5);
        assert_eq!(l.l, 3.0);
        assert!((l.gamma - 7f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((l.big_omega - 8.0 * std::f64::consts::PI.powi(2) / 15.0).abs() < 1e-12);
        for (name, v, _) in l.rows() {
            assert!(v.is_finite(), "{name} = {v}");
        }
        assert!(l.r_uar > 0.0 && l.r_beta_rad > 0.0 && l.r_graph_rad > 0.0 && l.r_smooth_rad > 0.0);
        assert!(l.c_holder_norm > 0.0);
    }

    #[test]
    fn smooth_constant_matches_radius_at_quarter() {
        // with δ = ¼ and the default A_Σ, M_Σ the radius factorizes as const · E^{-1/λ}
        for &(m, p, e) in &[(1usize, 4.0, 2.0), (1, 10.0, 0.5), (2, 16.0, 3.0)] {
            let l = constants_ledger(e, m, p, 0.25).unwrap();
            let expect = l.c_smooth_rad_const * e.powf(-1.0 / l.lambda);
            assert!(l.c_lip_const >= 0.5);
            assert!((l.r_smooth_rad - expect).abs() <= 1e-12 * expect, "{} vs {}", l.r_smooth_rad, expect);
        }
    }

    #[test]
    fn balance_limits() {
        assert!(balance_check(1e-6, 0.1, 1.0, 1.0, 1, 4.0).unwrap().holds);
        assert!(balance_check(0.3, 0.1, 1e300, 1.0, 1, 4.0).unwrap().holds);
    }
}
