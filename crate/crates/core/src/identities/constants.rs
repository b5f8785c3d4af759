//! Normalization constants of both integral theorems and their ratio.

use crate::ensembles::{KappaVariant, WishartSpec};
use crate::error::{Error, Result};
use crate::integrator::spec_echo;
use crate::report::VerificationReport;
use crate::scalar::{i_pow, C64};
use crate::special::{flag_ratio_fu, gamma_rational, vol_u, PiRational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use std::f64::consts::PI;

/// Spec with b = 0 for the constants of the two b = 0 theorems.
fn spec0(beta: u8, a: usize, c: usize, d: usize) -> Result<WishartSpec> {
    if a < c {
        return Err(Error::Precondition(format!("the constants need a ≥ c, got a = {a}, c = {c}")));
    }
    WishartSpec::new(beta, a, 0, c, d)
}

/// κ of the b = 0 theorems, exact.
pub fn kappa(beta: u8, a: usize, c: usize, d: usize) -> Result<BigRational> {
    WishartSpec::new(beta, a, 0, c, d)?.kappa(KappaVariant::Thm1)
}

/// γ₁κ, which is an integer or a half-integer.
pub fn gamma1_kappa(spec: &WishartSpec) -> Result<BigRational> {
    Ok(spec.kappa(KappaVariant::Thm1)? * BigRational::from_integer(BigInt::from(spec.gamma1())))
}

fn r(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

/// Ratio of group volumes, as appears in both constants.
pub fn vol_ratio(beta: u8, a: usize, c: usize) -> Result<f64> {
    Ok(vol_u(beta, a)?.div(&vol_u(beta, a - c)?)?.to_f64())
}

/// The flag-manifold factor FU_d of the fermionic group, i.e. for the Dyson index 4/β.
pub fn fu(beta: u8, d: usize) -> Result<f64> {
    Ok(flag_ratio_fu(4 / beta, d)?.to_f64())
}

/// C of the superbosonization formula.
pub fn constant_c(beta: u8, a: usize, c: usize, d: usize) -> Result<C64> {
    let s = spec0(beta, a, c, d)?;
    let (g1, g2, gt) = (s.gamma1() as f64, s.gamma2() as f64, s.gamma_tilde() as f64);
    let gk = gamma1_kappa(&s)?;
    let mut v = C64::new(
        (-2.0 * PI * g1).powi(-((a * d) as i32))
            * (-2.0 * PI / g2).powi((c * d) as i32)
            * 2f64.powi(-(c as i32))
            * gt.powf(beta as f64 * (a * c) as f64 / 2.0)
            * vol_ratio(beta, a, c)?,
        0.0,
    );
    for n in 1..=d as i64 {
        let arg = &gk + r(2 * (n - d as i64), beta as i64);
        let g = gamma_rational(&arg)?;
        let pi_pow = PiRational { q: BigRational::one(), half_pi_power: 4 * (n - 1) / beta as i64 };
        v *= g.div(&pi_pow)?.to_f64();
        v /= i_pow::<f64>(4 * (n - 1) / beta as i64);
    }
    Ok(v)
}

/// C̃ of the Hubbard–Stratonovich transformation.
pub fn constant_ctilde(beta: u8, a: usize, c: usize, d: usize) -> Result<C64> {
    let s = spec0(beta, a, c, d)?;
    let (g1, g2, gt) = (s.gamma1() as f64, s.gamma2() as f64, s.gamma_tilde() as f64);
    Ok(C64::new(
        2f64.powi(-(c as i32))
            * (2.0 * PI * g1).powi(-((a * d) as i32))
            * (2.0 * PI / g2).powi((c * d) as i32)
            * gt.powf(beta as f64 * (a * c) as f64 / 2.0)
            * vol_ratio(beta, a, c)?
            / fu(beta, d)?,
        0.0,
    ))
}

/// ∏_{n ≤ d} i^{4(n−1)/β} Γ(1+2n/β) / (Γ(2/β+1) Γ(γ₁κ − 2(n−1)/β)), split into a power of i and q·π^{k/2}.
pub fn gamma_product(beta: u8, d: usize, gk: &BigRational) -> Result<(i64, PiRational)> {
    let b = beta as i64;
    let mut ipow = 0;
    let mut v = PiRational::one();
    for n in 1..=d as i64 {
        ipow += 4 * (n - 1) / b;
        let num = gamma_rational(&(BigRational::one() + r(2 * n, b)))?;
        let den = gamma_rational(&(r(2, b) + BigRational::one()))?;
        let arg = gk - r(2 * (n - 1), b);
        let den2 = gamma_rational(&arg)?;
        v = v.mul(&num).div(&den.mul(&den2))?;
    }
    Ok((ipow, v))
}

/// (−1)^{d(a−c)} times the gamma product: the predicted C̃/C.
pub fn constant_ratio(beta: u8, a: usize, c: usize, d: usize) -> Result<C64> {
    let s = spec0(beta, a, c, d)?;
    let (ipow, v) = gamma_product(beta, d, &gamma1_kappa(&s)?)?;
    let sign = if (d * (a - c)) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(i_pow::<f64>(ipow) * v.to_f64() * sign)
}

/// C̃/C from the two closed forms against the gamma-product ratio.
pub fn constants_check(beta: u8, a: usize, c: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let s = spec0(beta, a, c, d)?;
    let lhs = constant_ctilde(beta, a, c, d)? / constant_c(beta, a, c, d)?;
    let rhs = constant_ratio(beta, a, c, d)?;
    Ok(VerificationReport::new("constants", "ratio", spec_echo(&s, 0), lhs, rhs, tol).relative_only(0.0))
}

/// Gauss–Laguerre weight exponent for ∫ λ^{γ₂κ} e^{−λ} …: the fractional part shifted below zero, if any.
pub fn laguerre_alpha(x: &BigRational) -> f64 {
    let frac = x - x.floor();
    let f = frac.to_f64().unwrap_or(0.0);
    if f > 0.0 {
        f - 1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(2, 3, 1, 1).unwrap(), r(3, 1));
        assert_eq!(kappa(1, 2, 2, 1).unwrap(), r(1, 2));
    }

    #[test]
    fn small_constants() {
        // β = 2, a = c = d = 1: C = π, C̃ = π
        assert!((constant_c(2, 1, 1, 1).unwrap() - C64::new(PI, 0.0)).norm() < 1e-14);
        assert!((constant_ctilde(2, 1, 1, 1).unwrap() - C64::new(PI, 0.0)).norm() < 1e-14);
        // d = 0 reduces to 2^{−c} γ̃^{βac/2} Vol(U(a))/Vol(U(a−c))
        let c0 = constant_c(1, 3, 2, 0).unwrap();
        let expect = 0.25 * 2f64.powf(3.0) * vol_ratio(1, 3, 2).unwrap();
        assert!((c0.re - expect).abs() < 1e-12 * expect && c0.im == 0.0);
    }

    #[test]
    fn ratio_for_unitary_d1() {
        for amc in 0..4usize {
            let v = constant_ratio(2, 1 + amc, 1, 1).unwrap();
            let expect = if amc % 2 == 0 { 1.0 } else { -1.0 } / (1..=amc).product::<usize>() as f64;
            assert!((v - C64::new(expect, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn precondition() {
        assert!(constant_c(2, 1, 2, 1).is_err());
    }
}
