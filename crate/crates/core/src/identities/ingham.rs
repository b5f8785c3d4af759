//! Scalar (c = 1, β = 2) Ingham–Siegel integral
//! ∫ exp(−iρσ) (−i(σ + iε))^{−a} dσ = 2π ρ^{a−1} e^{−ερ} Θ(ρ) / Γ(a).

use crate::error::{Error, Result};
use crate::integrator::quadrature::{affine, gauss_laguerre, gauss_legendre};
use crate::report::{SpecEcho, VerificationReport};
use crate::scalar::C64;
use crate::special::gamma_f64;
use std::f64::consts::PI;

/// Nodes for the real segment and for each vertical ray.
#[derive(Clone, Copy, Debug)]
pub struct ContourSpec {
    pub half_width: f64,
    pub segment_nodes: usize,
    pub ray_nodes: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec { half_width: 16.0, segment_nodes: 1500, ray_nodes: 64 }
    }
}

fn echo(a: usize) -> SpecEcho {
    SpecEcho { beta: 2, a, b: 0, c: 1, d: 0, e: 0 }
}

/// 2π ρ^{a−1} e^{−ερ} / Γ(a) for ρ > 0, zero otherwise.
pub fn ingham_siegel_closed_form(a: usize, rho: f64, eps: f64) -> Result<f64> {
    if a == 0 {
        return Err(Error::Precondition("a ≥ 1".into()));
    }
    if rho <= 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * PI * rho.powi(a as i32 - 1) * (-eps * rho).exp() / gamma_f64(a as f64)?)
}

/// The Fourier integral along ℝ. The tails beyond ±L are turned into vertical rays into the
/// half plane where e^{−iρσ} decays; no singularity is crossed since the pole sits at σ = −iε.
pub fn ingham_siegel_numeric(a: usize, rho: f64, eps: f64, q: ContourSpec) -> Result<C64> {
    if a == 0 {
        return Err(Error::Precondition("a ≥ 1".into()));
    }
    if rho == 0.0 || eps <= 0.0 {
        return Err(Error::Divergent("the contour needs ρ ≠ 0 and ε > 0".into()));
    }
    let f = |s: C64| (C64::new(0.0, -rho) * s).exp() * (C64::new(0.0, -1.0) * (s + C64::new(0.0, eps))).powi(-(a as i32));
    let l = q.half_width;
    let seg = affine(&gauss_legendre(q.segment_nodes)?, -l, l);
    let mut total: C64 = seg.nodes.iter().zip(&seg.weights).map(|(&x, &w)| f(C64::new(x, 0.0)) * w).sum();
    // direction of the rays: downward for ρ > 0, upward for ρ < 0; parameter t = u/|ρ|
    let dir = if rho > 0.0 { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) };
    let lag = gauss_laguerre(q.ray_nodes, 0.0)?;
    let r = rho.abs();
    for (&u, &w) in lag.nodes.iter().zip(&lag.weights) {
        let t = u / r;
        // the weight e^{−u} is divided out of f
        let scale = w * u.exp() / r;
        total += (f(C64::new(l, 0.0) + dir * t) - f(C64::new(-l, 0.0) + dir * t)) * dir * scale;
    }
    Ok(total)
}

/// Finite-ε comparison.
pub fn ingham_siegel_scalar(a: usize, rho: f64, eps: f64, tol: f64) -> Result<VerificationReport> {
    let lhs = ingham_siegel_numeric(a, rho, eps, ContourSpec::default())?;
    let rhs = ingham_siegel_closed_form(a, rho, eps)?;
    let rep = VerificationReport::new("ingham_siegel", format!("rho={rho} eps={eps}"), echo(a), lhs, C64::new(rhs, 0.0), tol);
    Ok(if rho > 0.0 { rep.relative_only(0.0) } else { rep })
}

/// ε → 0⁺ by three-point Richardson extrapolation of ln I(ε) at ε ∈ {1, 1/2, 1/4}.
/// For ρ ≤ 0 the extrapolated value is replaced by the largest |I(ε)|, which must vanish.
pub fn ingham_siegel_extrapolated(a: usize, rho: f64, tol: f64) -> Result<VerificationReport> {
    let q = ContourSpec::default();
    let vals: Vec<C64> = [1.0, 0.5, 0.25].iter().map(|&e| ingham_siegel_numeric(a, rho, e, q)).collect::<Result<_>>()?;
    let rhs = ingham_siegel_closed_form(a, rho, 0.0)?;
    if rho <= 0.0 {
        let m = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        return Ok(VerificationReport::new("ingham_siegel", format!("rho={rho} theta"), echo(a), C64::new(m, 0.0), C64::new(0.0, 0.0), tol));
    }
    let l: Vec<C64> = vals.iter().map(|v| v.ln()).collect();
    // quadratic through (1, l0), (1/2, l1), (1/4, l2) evaluated at 0
    let l0 = l[0] * (1.0 / 3.0) - l[1] * 2.0 + l[2] * (8.0 / 3.0);
    let lhs = l0.exp();
    Ok(VerificationReport::new("ingham_siegel", format!("rho={rho} eps->0"), echo(a), lhs, C64::new(rhs, 0.0), tol).relative_only(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((ingham_siegel_closed_form(2, 1.0, 0.0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((ingham_siegel_closed_form(1, 1.0, 0.0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert_eq!(ingham_siegel_closed_form(3, -1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn grid() {
        for a in 1..=3 {
            for rho in [0.5, 1.0, 2.0] {
                let r = ingham_siegel_extrapolated(a, rho, 1e-4).unwrap();
                assert!(r.passed, "{}", r.line());
                let f = ingham_siegel_scalar(a, rho, 0.5, 1e-6).unwrap();
                assert!(f.passed, "{}", f.line());
            }
            let z = ingham_siegel_extrapolated(a, -1.0, 1e-4).unwrap();
            assert!(z.passed, "{}", z.line());
        }
    }
}
