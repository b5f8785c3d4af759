//! Circular and Laguerre versions of Selberg's integral.

use super::constants::gamma_product;
use crate::error::{Error, Result};
use crate::integrator::quadrature::{affine, gauss_laguerre, gauss_legendre, trapezoid_periodic};
use crate::report::{SpecEcho, VerificationReport};
use crate::scalar::C64;
use crate::special::{gamma_rational, PiRational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::f64::consts::PI;

fn check_beta_tilde(bt: u8) -> Result<()> {
    if ![1, 2, 4].contains(&bt) {
        return Err(Error::Config(format!("4/β must be 1, 2 or 4, got {bt}")));
    }
    Ok(())
}

/// γ₁ of the ensemble with Dyson index 4/β̃.
pub fn gamma1_for(beta_tilde: u8) -> usize {
    if beta_tilde == 4 {
        2
    } else {
        1
    }
}

fn echo(beta_tilde: u8, a: usize, d: usize) -> SpecEcho {
    SpecEcho { beta: 4 / beta_tilde, a, b: 0, c: 0, d, e: 0 }
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// γ₁^{ad} ∏ Γ(1+nβ̃/2) / (Γ(1+β̃/2) Γ(a+1+(n−1)β̃/2)).
pub fn circular_closed_form(d: usize, beta_tilde: u8, a: usize) -> Result<f64> {
    let bt = beta_tilde as i64;
    let mut v = PiRational::one();
    for n in 1..=d as i64 {
        let num = gamma_rational(&(BigRational::one() + half(n * bt)))?;
        let den = gamma_rational(&(BigRational::one() + half(bt)))?
            .mul(&gamma_rational(&(BigRational::from_integer(BigInt::from(a as i64 + 1)) + half((n - 1) * bt)))?);
        v = v.mul(&num.div(&den)?);
    }
    Ok(v.to_f64() * (gamma1_for(beta_tilde) as f64).powi((a * d) as i32))
}

/// Same integral with the sign-adjusted Vandermonde in place of 2^{β̃}|sin|^{β̃}.
pub fn circular_signed_closed_form(d: usize, beta_tilde: u8, a: usize) -> Result<C64> {
    let gk = BigRational::from_integer(BigInt::from(a as i64 + 1)) + half(beta_tilde as i64 * (d as i64 - 1));
    let (ipow, v) = gamma_product(4 / beta_tilde, d, &gk)?;
    Ok(crate::scalar::i_pow::<f64>(ipow) * v.to_f64() * (gamma1_for(beta_tilde) as f64).powi((a * d) as i32))
}

/// ∏_{n<m} sgn(φ_n − φ_m)(e^{iφ_n} − e^{iφ_m}), angles taken in [0, 2π).
pub fn signed_vandermonde(phi: &[f64]) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for n in 0..phi.len() {
        for m in n + 1..phi.len() {
            let (x, y) = (phi[n].rem_euclid(2.0 * PI), phi[m].rem_euclid(2.0 * PI));
            let diff = C64::from_polar(1.0, x) - C64::from_polar(1.0, y);
            v *= if y < x { diff } else { -diff };
        }
    }
    v
}

/// Torus average of h over [0, 2π)^d, d ≤ 2; d = 0 evaluates h once. `smooth` selects the plain trapezoid product;
/// otherwise the d = 2 average runs over (φ₁, θ = φ₁ − φ₂) with Gauss–Legendre in θ,
/// which keeps spectral accuracy across the kink on the diagonal.
pub(crate) fn torus_average(d: usize, nodes: usize, theta_nodes: usize, smooth: bool, h: impl Fn(&[f64]) -> C64) -> Result<C64> {
    let t = trapezoid_periodic(nodes)?;
    match d {
        0 => Ok(h(&[])),
        1 => Ok(t.nodes.iter().zip(&t.weights).map(|(&p, &w)| h(&[p]) * w).sum::<C64>()),
        2 if smooth => {
            let mut s = C64::new(0.0, 0.0);
            for (&p, &w) in t.nodes.iter().zip(&t.weights) {
                for (&q, &u) in t.nodes.iter().zip(&t.weights) {
                    s += h(&[p, q]) * (w * u);
                }
            }
            Ok(s)
        }
        2 => {
            let g = affine(&gauss_legendre(theta_nodes)?, 0.0, 2.0 * PI);
            let mut s = C64::new(0.0, 0.0);
            for (&th, &v) in g.nodes.iter().zip(&g.weights) {
                for (&p, &w) in t.nodes.iter().zip(&t.weights) {
                    s += h(&[p, (p - th).rem_euclid(2.0 * PI)]) * (v * w);
                }
            }
            Ok(s / (2.0 * PI))
        }
        _ => Err(Error::Unsupported(format!("circle integrals for d = {d} (only d ≤ 2)"))),
    }
}

fn circle_weight(phi: &[f64], gamma1: f64, a: usize) -> C64 {
    phi.iter()
        .map(|&p| (C64::from_polar(gamma1, p)).exp() * C64::from_polar(1.0, -(a as f64) * p))
        .product()
}

/// 2^{β̃d(d−1)/2} ∮ ∏|sin((φ_n−φ_m)/2)|^{β̃} ∏ exp(γ₁e^{iφ})e^{−iaφ} dφ/2π against the closed form.
pub fn circular_selberg_check(d: usize, beta_tilde: u8, a: usize, nodes: usize, tol: f64) -> Result<VerificationReport> {
    check_beta_tilde(beta_tilde)?;
    let g1 = gamma1_for(beta_tilde) as f64;
    let bt = beta_tilde as f64;
    let lhs = torus_average(d, nodes, nodes / 4, beta_tilde % 2 == 0, |phi| {
        let mut v = 1.0;
        for n in 0..phi.len() {
            for m in n + 1..phi.len() {
                v *= (2.0 * ((phi[n] - phi[m]) / 2.0).sin().abs()).powf(bt);
            }
        }
        circle_weight(phi, g1, a) * v
    })?;
    let rhs = circular_closed_form(d, beta_tilde, a)?;
    Ok(VerificationReport::new("circular", "abs", echo(beta_tilde, a, d), lhs, C64::new(rhs, 0.0), tol))
}

/// The signed-Vandermonde form of the same integral: ∮ |Δ(e^{iφ})|^{β̃} ∏ exp(γ₁e^{iφ})e^{i(1−γ₁κ)φ} dφ/2π
/// with γ₁κ = a + 1 + β̃(d−1)/2.
pub fn circular_signed_check(d: usize, beta_tilde: u8, a: usize, nodes: usize, tol: f64) -> Result<VerificationReport> {
    check_beta_tilde(beta_tilde)?;
    let g1 = gamma1_for(beta_tilde) as f64;
    let shift = 1.0 - (a as f64 + 1.0 + beta_tilde as f64 * (d as f64 - 1.0) / 2.0);
    let lhs = torus_average(d, nodes, nodes / 4, beta_tilde % 2 == 0, |phi| {
        let phase: C64 = phi.iter().map(|&p| C64::from_polar(1.0, (shift + a as f64) * p)).product();
        signed_vandermonde(phi).powi(beta_tilde as i32) * circle_weight(phi, g1, a) * phase
    })?;
    let rhs = circular_signed_closed_form(d, beta_tilde, a)?;
    Ok(VerificationReport::new("circular", "signed", echo(beta_tilde, a, d), lhs, rhs, tol))
}

/// ∏ Γ(1+nβ̃/2) Γ(ξ+1+(n−1)β̃/2) / (γ₁^{ξ+1+β̃(d−1)/2} Γ(1+β̃/2)).
pub fn laguerre_closed_form(d: usize, beta_tilde: u8, xi: usize) -> Result<f64> {
    let bt = beta_tilde as i64;
    let mut v = PiRational::one();
    for n in 1..=d as i64 {
        let num = gamma_rational(&(BigRational::one() + half(n * bt)))?
            .mul(&gamma_rational(&(BigRational::from_integer(BigInt::from(xi as i64 + 1)) + half((n - 1) * bt)))?);
        v = v.mul(&num.div(&gamma_rational(&(BigRational::one() + half(bt)))?)?);
    }
    let g1 = gamma1_for(beta_tilde) as f64;
    Ok(v.to_f64() / g1.powf((xi as f64 + 1.0 + beta_tilde as f64 * (d as f64 - 1.0) / 2.0) * d as f64))
}

/// ∫_{ℝ₊^d} |Δ(x)|^{β̃} ∏ e^{−γ₁x}x^ξ dx by Gauss–Laguerre on the ordered simplex
/// x_k = t₁ + … + t_k; the integrand is then a polynomial in t.
pub fn laguerre_selberg_check(d: usize, beta_tilde: u8, xi: usize, nodes: usize, tol: f64) -> Result<VerificationReport> {
    check_beta_tilde(beta_tilde)?;
    if d == 0 || d > 3 {
        return Err(Error::Unsupported(format!("d = {d} (only 1 ≤ d ≤ 3)")));
    }
    let g1 = gamma1_for(beta_tilde) as f64;
    let rule = gauss_laguerre(nodes, 0.0)?;
    let rates: Vec<f64> = (0..d).map(|k| (d - k) as f64 * g1).collect();
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    'outer: loop {
        let mut x = vec![0.0; d];
        let mut w = 1.0;
        let mut acc = 0.0;
        for k in 0..d {
            acc += rule.nodes[idx[k]] / rates[k];
            x[k] = acc;
            w *= rule.weights[idx[k]] / rates[k];
        }
        let mut f: f64 = x.iter().map(|v| v.powi(xi as i32)).product();
        for n in 0..d {
            for m in n + 1..d {
                f *= (x[m] - x[n]).powi(beta_tilde as i32);
            }
        }
        total += w * f;
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < nodes {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let lhs = total * fact;
    let rhs = laguerre_closed_form(d, beta_tilde, xi)?;
    Ok(VerificationReport::new("laguerre_selberg", format!("xi={xi}"), echo(beta_tilde, 0, d), C64::new(lhs, 0.0), C64::new(rhs, 0.0), tol)
        .relative_only(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_examples() {
        assert!((circular_closed_form(1, 2, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((circular_closed_form(1, 2, 1).unwrap() - 1.0).abs() < 1e-15);
        let r = circular_selberg_check(1, 2, 2, 256, 1e-10).unwrap();
        assert!(r.passed && (r.lhs_value.re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn circular_grid() {
        for bt in [1u8, 2, 4] {
            for d in 1..=2 {
                for a in 1..=4 {
                    let r = circular_selberg_check(d, bt, a, 256, 1e-10).unwrap();
                    assert!(r.passed, "{}", r.line());
                    let s = circular_signed_check(d, bt, a, 256, 1e-10).unwrap();
                    assert!(s.passed, "{}", s.line());
                }
            }
        }
    }

    #[test]
    fn signed_vandermonde_is_not_a_modulus() {
        let v = signed_vandermonde(&[0.3, 2.0]);
        let expect = C64::new(0.0, 2.0) * ((2.0f64 - 0.3) / 2.0).sin() * C64::from_polar(1.0, 1.15);
        assert!((v - expect).norm() < 1e-14);
        assert!(v.im.abs() > 0.1 || v.re < 0.0);
    }

    #[test]
    fn laguerre_examples() {
        // d = 1: Γ(ξ+1)/γ₁^{ξ+1}
        assert!((laguerre_closed_form(1, 2, 2).unwrap() - 2.0).abs() < 1e-14);
        assert!((laguerre_closed_form(1, 4, 2).unwrap() - 0.25).abs() < 1e-14);
        assert!((laguerre_closed_form(1, 2, 0).unwrap() - 1.0).abs() < 1e-15);
        for bt in [1u8, 2, 4] {
            for d in 1..=3 {
                for xi in 0..=2 {
                    let r = laguerre_selberg_check(d, bt, xi, 16, 1e-8).unwrap();
                    assert!(r.passed, "{}", r.line());
                }
            }
        }
    }
}
