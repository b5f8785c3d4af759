//! The circle-integral / differential-operator identity linking the two theorems.
//!
//! Left side: ∫ F̃(e^{iφ}) |Δ(e^{iφ})|^{4/β} ∏ e^{i(1−γ₁κ)φ_n} dφ_n/2π with the signed
//! Vandermonde. For even 4/β the signed Vandermonde to that power is the holomorphic Δ^{4/β},
//! so the integral is a constant term. For 4/β = 1 and d = 2 it equals 2i|sin((φ₁−φ₂)/2)|
//! e^{i(φ₁+φ₂)/2}, whose Fourier moments are known in closed form.

use super::constants::{gamma1_kappa, gamma_product};
use super::polynomial::{sekiguchi_power, vandermonde, Poly};
use crate::ensembles::WishartSpec;
use crate::error::{Error, Result};
use crate::integrator::spec_echo;
use crate::report::VerificationReport;
use crate::scalar::{i_pow, to_c64, C64, QC};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::f64::consts::PI;

/// Both sides of the identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Sides {
    Exact(QC, QC),
    Numeric(C64, C64),
}

fn validate(spec: &WishartSpec, f: &Poly<BigRational>) -> Result<()> {
    if spec.b != 0 || spec.a < spec.c {
        return Err(Error::Precondition("the identity needs b = 0 and a ≥ c".into()));
    }
    if spec.d == 0 || spec.d > 2 {
        return Err(Error::Unsupported(format!("d = {} (only d ∈ {{1, 2}})", spec.d)));
    }
    if f.nvars() != spec.d {
        return Err(Error::Dimension(format!("F̃ has {} variables, expected d = {}", f.nvars(), spec.d)));
    }
    if f.terms().any(|(e, _)| e.iter().any(|&k| k < 0)) {
        return Err(Error::Precondition("F̃ must be a polynomial".into()));
    }
    Ok(())
}

fn as_int(q: &BigRational) -> Option<i32> {
    if q.is_integer() {
        q.to_integer().to_i32()
    } else {
        None
    }
}

/// Circle integral, exact when the integrand is a Laurent polynomial.
pub fn circle_side(spec: &WishartSpec, f: &Poly<BigRational>) -> Result<Sides> {
    validate(spec, f)?;
    let d = spec.d;
    let bt = 4 / spec.beta as u32;
    let gk = gamma1_kappa(spec)?;
    if bt % 2 == 0 || d == 1 {
        let k = as_int(&gk).ok_or_else(|| Error::Internal("γ₁κ is not an integer".into()))?;
        let g = f.mul(&vandermonde(d).pow(bt)).shift(&vec![1 - k; d]);
        return Ok(Sides::Exact(g.constant_term(), QC::zero()));
    }
    // 4/β = 1, d = 2: phases combine to (z₁z₂)^{3/2−γ₁κ}
    let e = as_int(&(BigRational::new(BigInt::from(3), BigInt::from(2)) - &gk))
        .ok_or_else(|| Error::Internal("3/2 − γ₁κ is not an integer".into()))?;
    let g = f.shift(&[e, e]);
    let mut q = QC::zero();
    for (ex, c) in g.terms() {
        if ex[0] + ex[1] != 0 {
            continue;
        }
        let p = BigInt::from(ex[0]);
        // moment 2/(π(1−4p²)); the factors 2i and 1/π are applied below
        let m = BigRational::new(BigInt::from(2), BigInt::from(1) - BigInt::from(4) * &p * &p);
        q = q + c * Complex::new(m, BigRational::zero());
    }
    Ok(Sides::Numeric(C64::new(0.0, 2.0) * to_c64(&q) / PI, C64::zero()))
}

/// Gamma-product prefactor times (D^{a−c} F̃)(0).
pub fn operator_side(spec: &WishartSpec, f: &Poly<BigRational>) -> Result<Sides> {
    validate(spec, f)?;
    let gk = gamma1_kappa(spec)?;
    let (ipow, pre) = gamma_product(spec.beta, spec.d, &gk)?;
    let alpha = BigRational::new(BigInt::from(2), BigInt::from(spec.beta as i64));
    let df = sekiguchi_power(f, &alpha, spec.a - spec.c)?.constant_term();
    if pre.half_pi_power == 0 {
        let v = i_pow::<BigRational>(ipow) * df * Complex::new(pre.q, BigRational::zero());
        Ok(Sides::Exact(v, QC::zero()))
    } else {
        Ok(Sides::Numeric(i_pow::<f64>(ipow) * to_c64(&df) * pre.to_f64(), C64::zero()))
    }
}

/// Compares both sides: exact equality where both are exact, otherwise within `tol`.
pub fn identity61_check(spec: &WishartSpec, f: &Poly<BigRational>, label: &str, tol: f64) -> Result<VerificationReport> {
    let l = circle_side(spec, f)?;
    let r = operator_side(spec, f)?;
    let echo = spec_echo(spec, 0);
    Ok(match (l, r) {
        (Sides::Exact(x, _), Sides::Exact(y, _)) => {
            let diff = to_c64(&(x.clone() - y.clone())).norm();
            let exact_equal = x == y;
            let mut rep = VerificationReport::with_errors(
                "equivalence61",
                format!("exact {label}"),
                echo,
                to_c64(&x),
                to_c64(&y),
                diff,
                if exact_equal { 0.0 } else { f64::INFINITY },
                0.0,
            );
            rep.passed = exact_equal;
            rep
        }
        (l, r) => {
            let x = to_numeric(l);
            let y = to_numeric(r);
            VerificationReport::new("equivalence61", format!("numeric {label}"), echo, x, y, tol)
        }
    })
}

fn to_numeric(s: Sides) -> C64 {
    match s {
        Sides::Exact(x, _) => to_c64(&x),
        Sides::Numeric(x, _) => x,
    }
}

/// All monomial symmetric F̃ of total degree ≤ `max_degree`.
pub fn identity61_grid(spec: &WishartSpec, max_degree: u32, tol: f64) -> Result<Vec<VerificationReport>> {
    Poly::<BigRational>::monomial_symmetric_basis(spec.d, max_degree)
        .into_iter()
        .map(|(part, p)| identity61_check(spec, &p, &format!("m{part:?}"), tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cint;

    #[test]
    fn residue_example() {
        // d = 1, β = 2, a − c = 2, F̃ = r²: both sides 1
        let s = WishartSpec::new(2, 3, 0, 1, 1).unwrap();
        let f = Poly::<BigRational>::monomial(1, cint(1), vec![2]);
        assert_eq!(circle_side(&s, &f).unwrap(), Sides::Exact(cint(1), QC::zero()));
        assert!(identity61_check(&s, &f, "r²", 0.0).unwrap().passed);
    }

    #[test]
    fn product_power_d2() {
        for amc in 0..3usize {
            let s = WishartSpec::new(2, 1 + amc, 0, 1, 2).unwrap();
            let f = Poly::<BigRational>::monomial_symmetric(2, &[amc as u32, amc as u32]).unwrap();
            assert!(identity61_check(&s, &f, "", 0.0).unwrap().passed);
        }
    }

    #[test]
    fn quaternion_d2_constant() {
        // a = c, F̃ = 1: both sides 4i/π
        let s = WishartSpec::new(4, 1, 0, 1, 2).unwrap();
        let f = Poly::<BigRational>::constant(2, cint(1));
        let r = identity61_check(&s, &f, "1", 1e-12).unwrap();
        assert!(r.passed);
        assert!((C64::from(r.lhs_value) - C64::new(0.0, 4.0 / PI)).norm() < 1e-14);
    }

    #[test]
    fn grid_all_ensembles() {
        for beta in [1u8, 2, 4] {
            for d in 1..=2usize {
                for amc in 0..=3usize {
                    let s = WishartSpec::new(beta, 1 + amc, 0, 1, d).unwrap();
                    for r in identity61_grid(&s, 6, 1e-12).unwrap() {
                        assert!(r.passed, "β={beta} d={d} a−c={amc} {}: {:?} vs {:?}", r.detail, r.lhs_value, r.rhs_value);
                    }
                }
            }
        }
    }
}
