//! The general-dimension theorem: B̃ = B̃₁ + 𝔖(B̃₂) after enlarging a and b by e, with one
//! superbosonization integral for each part.
//!
//! For F a polynomial in Str (possibly times exp(−t Str)) the double integral factorizes after a
//! binomial expansion, because Str(ρ⁽¹⁾ + e^{iψ}ρ⁽²⁾) = Str ρ⁽¹⁾ − e^{iψ} Str σ with ρ⁽²⁾ = 𝔖(σ).

use super::constants::constant_c;
use super::superbosonization::{gamma1_of, gamma2_of, sigma_integral, superfunction_weight, RhsQuadrature};
use crate::ensembles::{KappaVariant, WishartSpec};
use crate::error::{Error, Result};
use crate::integrator::{lhs_integral, spec_echo, QuadratureSpec, Superfunction};
use crate::report::VerificationReport;
use crate::scalar::C64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Enlarged dimensions (ã, b̃) = (a + γ₁e, b + γ₂e), checked against ã ≥ c and b̃ ≥ d.
/// b̃ = 0 leaves the 𝔖 part empty and needs no condition on d.
pub fn enlarged_dims(spec: &WishartSpec, e: usize) -> Result<(usize, usize)> {
    let at = spec.a + gamma1_of(spec.beta) * e;
    let bt = spec.b + gamma2_of(spec.beta) * e;
    if at < spec.c || (bt > 0 && bt < spec.d) {
        return Err(Error::Precondition(format!("need a + γ₁e ≥ c and b + γ₂e ≥ d, got ã = {at}, b̃ = {bt}")));
    }
    Ok((at, bt))
}

/// (−2/γ₁)^{γ₂ec} (2/γ₂)^{γ₁ed} C_{β,ã,c,d} C_{4/β,b̃,d,c}.
pub fn constant_sf(spec: &WishartSpec, e: usize) -> Result<C64> {
    let (at, bt) = enlarged_dims(spec, e)?;
    let (g1, g2) = (gamma1_of(spec.beta), gamma2_of(spec.beta));
    let lift = (-2.0 / g1 as f64).powi((g2 * e * spec.c) as i32) * (2.0 / g2 as f64).powi((g1 * e * spec.d) as i32);
    let c2 = if bt == 0 { C64::new(1.0, 0.0) } else { constant_c(4 / spec.beta, bt, spec.d, spec.c)? };
    Ok(constant_c(spec.beta, at, spec.c, spec.d)? * c2 * lift)
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// C_SF ∫∫ F(ρ⁽¹⁾ + e^{iψ}ρ⁽²⁾) exp(−ε Str(ρ⁽¹⁾ + e^{iψ}ρ⁽²⁾)) Sdet^{κ+b̃/γ₂}ρ⁽¹⁾ Sdet^{κ−ã/γ₁}ρ⁽²⁾.
///
/// Implemented for β = 2 and F built from powers of Str; the second factor needs e^{iψ} = −1 so
/// that its Boson–Boson integral converges on the real axis.
pub fn theorem4_rhs(spec: &WishartSpec, e: usize, f: &Superfunction, eps: f64, psi: f64, quad: &RhsQuadrature) -> Result<C64> {
    if spec.beta != 2 {
        return Err(Error::Unsupported("the split integral is implemented for β = 2".into()));
    }
    let (at, bt) = enlarged_dims(spec, e)?;
    if f.terms().iter().any(|(_, p)| p.len() > 1 && p[1..].iter().any(|&k| k > 0)) {
        return Err(Error::Unsupported("F may only depend on Str".into()));
    }
    let kappa = spec.kappa(KappaVariant::Thm4)?;
    let g1 = BigRational::from_integer(BigInt::from(gamma1_of(spec.beta)));
    let g2 = BigRational::from_integer(BigInt::from(gamma2_of(spec.beta)));
    let k1 = &kappa + BigRational::from_integer(BigInt::from(bt)) / &g2;
    // Sdet 𝔖(σ) = (−1)^{m₂}/Sdet σ, with m₂ = c for β = 2
    let k2 = BigRational::from_integer(BigInt::from(at)) / &g1 - &kappa;
    let flip = k2.is_integer() && (k2.to_integer() * BigInt::from(spec.c)) % BigInt::from(2) != BigInt::from(0);
    let phase = C64::from_polar(1.0, psi);
    let s = eps + f.damping();
    let s2 = -phase * s;
    if bt > 0 && (s2.im.abs() > 1e-12 || s2.re <= 0.0) {
        return Err(Error::Divergent(format!("the 𝔖 factor needs e^{{iψ}} = −1, got ψ = {psi}")));
    }
    let kmax = f.terms().iter().map(|(_, p)| p.first().copied().unwrap_or(0)).max().unwrap_or(0);
    let moments = |beta: u8, p: usize, q: usize, kap: &BigRational, s: f64, empty: bool| -> Result<Vec<C64>> {
        (0..=kmax)
            .map(|j| {
                if empty {
                    return Ok(if j == 0 { C64::new(1.0, 0.0) } else { C64::zero() });
                }
                let sf = Superfunction::str_b_pow(j);
                let w = superfunction_weight(&sf);
                sigma_integral(beta, p, q, kap, s, &w, quad)
            })
            .collect()
    };
    let m1 = moments(spec.beta, spec.c, spec.d, &k1, s, false)?;
    let m2 = moments(4 / spec.beta, spec.d, spec.c, &k2, s2.re, bt == 0)?;
    let mut total = C64::zero();
    for (c, p) in f.terms() {
        let k = p.first().copied().unwrap_or(0);
        for j in 0..=k {
            total += c * binom(k, j) * m1[j as usize] * (-phase).powi((k - j) as i32) * m2[(k - j) as usize];
        }
    }
    let sign = if bt > 0 && flip { -1.0 } else { 1.0 };
    Ok(total * constant_sf(spec, e)? * sign)
}

/// LHS through the integrator with the Wick rotation ψ against the split right-hand side.
pub fn theorem4_check(spec: &WishartSpec, e: usize, f: &Superfunction, q: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let lhs = lhs_integral(spec, f, q)?;
    let rhs = theorem4_rhs(spec, e, f, q.epsilon, q.wick_angle, &RhsQuadrature::default())?;
    Ok(VerificationReport::with_errors(
        "theorem4",
        format!("psi={}", q.wick_angle),
        spec_echo(spec, e),
        lhs.value,
        rhs,
        (lhs.value - rhs).norm(),
        (lhs.value - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE),
        tol,
    )
    .relative_only(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::superbosonization::rhs_superbosonization;
    use std::f64::consts::PI;

    fn q(psi: f64) -> QuadratureSpec {
        QuadratureSpec { wick_angle: psi, ..QuadratureSpec::default() }
    }

    #[test]
    fn smallest_case() {
        let s = WishartSpec::new(2, 1, 0, 2, 1).unwrap();
        let rhs = theorem4_rhs(&s, 1, &Superfunction::one(), 1.0, PI, &RhsQuadrature::default()).unwrap();
        assert!((rhs - C64::new(PI / 2.0, 0.0)).norm() < 1e-8, "{rhs}");
        for f in [Superfunction::one(), Superfunction::str_b_pow(1), Superfunction::str_b_pow(2), Superfunction::exp_str(1.0)] {
            let r = theorem4_check(&s, 1, &f, &q(PI), 1e-3).unwrap();
            assert!(r.passed, "{f:?} {}", r.line());
        }
    }

    #[test]
    fn degenerates_without_enlargement() {
        for (a, c, d) in [(1, 1, 1), (2, 1, 1), (2, 2, 1)] {
            let s = WishartSpec::new(2, a, 0, c, d).unwrap();
            let f = Superfunction::str_b_pow(1);
            let x = theorem4_rhs(&s, 0, &f, 1.0, 0.0, &RhsQuadrature::default()).unwrap();
            let y = rhs_superbosonization(&s, &f, 1.0, &RhsQuadrature::default()).unwrap();
            assert!((x - y).norm() < 1e-12 * y.norm().max(1.0));
        }
    }

    #[test]
    fn precondition() {
        let s = WishartSpec::new(2, 1, 0, 2, 1).unwrap();
        assert!(matches!(theorem4_rhs(&s, 0, &Superfunction::one(), 1.0, PI, &RhsQuadrature::default()), Err(Error::Precondition(_))));
    }
}
