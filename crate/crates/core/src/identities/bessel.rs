//! Matrix Bessel functions φ_d(r, s) = ∫ exp(i tr r U s U†) dμ(U) for d ≤ 2 and the eigenvalue
//! equation of the Sekiguchi-type operator.

use super::polynomial::{sekiguchi_apply, Poly};
use super::selberg::gamma1_for;
use crate::error::{Error, Result};
use crate::integrator::quadrature::{affine, gauss_legendre};
use crate::report::{SpecEcho, VerificationReport};
use crate::scalar::{to_c64, C64, QC};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex hyper-dual number v + d₁ε₁ + d₂ε₂ + d₁₂ε₁ε₂ with ε₁² = ε₂² = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperDual {
    pub v: C64,
    pub d1: C64,
    pub d2: C64,
    pub d12: C64,
}

impl HyperDual {
    pub fn constant(v: C64) -> Self {
        HyperDual { v, d1: C64::zero(), d2: C64::zero(), d12: C64::zero() }
    }

    /// x + ε₁ (k = 1) or x + ε₂ (k = 2).
    pub fn variable(x: f64, k: usize) -> Self {
        let mut h = Self::constant(C64::new(x, 0.0));
        if k == 1 {
            h.d1 = C64::one();
        } else {
            h.d2 = C64::one();
        }
        h
    }

    pub fn scale(self, c: C64) -> Self {
        HyperDual { v: self.v * c, d1: self.d1 * c, d2: self.d2 * c, d12: self.d12 * c }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        HyperDual { v: e, d1: e * self.d1, d2: e * self.d2, d12: e * (self.d12 + self.d1 * self.d2) }
    }

    pub fn recip(self) -> Self {
        let r = self.v.inv();
        HyperDual { v: r, d1: -self.d1 * r * r, d2: -self.d2 * r * r, d12: (self.d1 * self.d2 * r * 2.0 - self.d12) * r * r }
    }
}

impl Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        HyperDual { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2, d12: self.d12 + o.d12 }
    }
}

impl Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for HyperDual {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        HyperDual {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + self.v * o.d2,
            d12: self.d12 * o.v + self.d1 * o.d2 + self.d2 * o.d1 + self.v * o.d12,
        }
    }
}

impl Div for HyperDual {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

/// ∫_0^{π/2} |sin 2θ|^{β̃−1} dθ.
fn radial_norm(beta_tilde: u8) -> f64 {
    match beta_tilde {
        1 => PI / 2.0,
        2 => 1.0,
        _ => 2.0 / 3.0,
    }
}

fn check(beta_tilde: u8, r: &[f64], s: &[f64]) -> Result<()> {
    if ![1, 2, 4].contains(&beta_tilde) {
        return Err(Error::Config(format!("4/β must be 1, 2 or 4, got {beta_tilde}")));
    }
    if r.len() != s.len() {
        return Err(Error::Dimension("r and s need the same length".into()));
    }
    if r.is_empty() || r.len() > 2 {
        return Err(Error::Unsupported(format!("matrix Bessel functions for d = {}", r.len())));
    }
    Ok(())
}

/// Haar average reduced to the single angle θ with |U₁₁|² = cos²θ, whose distribution is
/// ∝ |sin 2θ|^{β̃−1} dθ on [0, π/2].
pub fn bessel_phi_quadrature_hd(beta_tilde: u8, r: [HyperDual; 2], s: [f64; 2], nodes: usize) -> Result<HyperDual> {
    let g1 = gamma1_for(beta_tilde) as f64;
    let rule = affine(&gauss_legendre(nodes)?, 0.0, PI / 2.0);
    let mut acc = HyperDual::constant(C64::zero());
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (c2, s2) = (t.cos().powi(2), t.sin().powi(2));
        let a = r[0].scale(C64::new(s[0] * c2 + s[1] * s2, 0.0)) + r[1].scale(C64::new(s[1] * c2 + s[0] * s2, 0.0));
        let dens = (2.0 * t).sin().abs().powi(beta_tilde as i32 - 1);
        acc = acc + a.scale(C64::new(0.0, g1)).exp().scale(C64::new(w * dens, 0.0));
    }
    Ok(acc.scale(C64::new(1.0 / radial_norm(beta_tilde), 0.0)))
}

/// (e^{iA} − e^{iB}) / (i(A − B)) with A = r₁s₁ + r₂s₂, B = r₁s₂ + r₂s₁; the unitary case.
pub fn bessel_phi_hciz_hd(r: [HyperDual; 2], s: [f64; 2]) -> HyperDual {
    let i = C64::new(0.0, 1.0);
    let a = r[0].scale(C64::new(s[0], 0.0)) + r[1].scale(C64::new(s[1], 0.0));
    let b = r[0].scale(C64::new(s[1], 0.0)) + r[1].scale(C64::new(s[0], 0.0));
    (a.scale(i).exp() - b.scale(i).exp()) / (a - b).scale(i)
}

/// φ_d^{(β̃)}(r, s).
pub fn bessel_phi(beta_tilde: u8, r: &[f64], s: &[f64]) -> Result<C64> {
    check(beta_tilde, r, s)?;
    let g1 = gamma1_for(beta_tilde) as f64;
    if r.len() == 1 {
        return Ok(C64::new(0.0, g1 * r[0] * s[0]).exp());
    }
    let rh = [HyperDual::constant(C64::new(r[0], 0.0)), HyperDual::constant(C64::new(r[1], 0.0))];
    if beta_tilde == 2 && (r[0] - r[1]) * (s[0] - s[1]) != 0.0 {
        return Ok(bessel_phi_hciz_hd(rh, [s[0], s[1]]).v);
    }
    Ok(bessel_phi_quadrature_hd(beta_tilde, rh, [s[0], s[1]], 48)?.v)
}

/// D φ = ∂₁∂₂φ + (β̃/2)(∂₂φ − ∂₁φ)/(r₁ − r₂) from the hyper-dual parts.
fn apply_d2(h: &HyperDual, beta_tilde: u8, r: [f64; 2]) -> C64 {
    h.d12 + (h.d2 - h.d1) * (beta_tilde as f64 / 2.0) / (r[0] - r[1])
}

/// D φ against (iγ₁)^d det s^{1/γ₁} φ at `draws` random points, d = 2. The unitary case uses the
/// closed form, the others the Haar quadrature.
pub fn bessel_eigen_check_d2(beta_tilde: u8, draws: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    check(beta_tilde, &[0.0, 1.0], &[0.0, 1.0])?;
    let g1 = gamma1_for(beta_tilde) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (C64::zero(), C64::zero());
    let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < draws {
        let r: [f64; 2] = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let s: [f64; 2] = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        if (r[0] - r[1]).abs() < 0.1 {
            continue;
        }
        done += 1;
        let rh = [HyperDual::variable(r[0], 1), HyperDual::variable(r[1], 2)];
        let h = if beta_tilde == 2 && (s[0] - s[1]).abs() > 1e-3 {
            bessel_phi_hciz_hd(rh, s)
        } else {
            bessel_phi_quadrature_hd(beta_tilde, rh, s, 64)?
        };
        let lhs = apply_d2(&h, beta_tilde, r);
        let rhs = h.v * (-g1 * g1 * s[0] * s[1]);
        let e = (lhs - rhs).norm();
        if e >= max_abs {
            worst = (lhs, rhs);
        }
        max_abs = max_abs.max(e);
        max_rel = max_rel.max(e / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE));
    }
    let form = if beta_tilde == 2 { "closed" } else { "haar" };
    let echo = SpecEcho { beta: 4 / beta_tilde, a: 0, b: 0, c: 0, d: 2, e: 0 };
    let mut rep = VerificationReport::with_errors("bessel_eigen", format!("d=2 {form} n={draws}"), echo, worst.0, worst.1, max_abs, max_rel, tol)
        .with_seed(seed);
    rep.passed = max_abs <= tol;
    Ok(rep)
}

/// d = 1, exact: the degree-N Taylor polynomial of e^{iγ₁rs} at rational s is mapped by D = ∂_r to
/// iγ₁s times the degree-(N−1) polynomial, coefficient by coefficient.
pub fn bessel_eigen_check_d1(beta_tilde: u8, s: &BigRational, order: i32) -> Result<VerificationReport> {
    check(beta_tilde, &[0.0], &[0.0])?;
    let g1 = gamma1_for(beta_tilde) as i64;
    let z: QC = Complex::new(BigRational::zero(), s * BigRational::from_integer(BigInt::from(g1)));
    let taylor = |n: i32| {
        let mut p = Poly::<BigRational>::zero(1);
        let mut c = QC::one();
        for k in 0..=n {
            p = p.add(&Poly::monomial(1, c.clone(), vec![k]));
            c = c * z.clone() / Complex::new(BigRational::from_integer(BigInt::from(k + 1)), BigRational::zero());
        }
        p
    };
    let alpha = BigRational::new(BigInt::from(beta_tilde as i64), BigInt::from(2));
    let lhs = sekiguchi_apply(&taylor(order), &alpha)?;
    let rhs = taylor(order - 1).scale(&z);
    let exact = lhs == rhs;
    let x = BigRational::new(BigInt::from(1), BigInt::from(3));
    let (lv, rv) = (to_c64(&lhs.evaluate(&[Complex::new(x.clone(), BigRational::zero())])), to_c64(&rhs.evaluate(&[Complex::new(x, BigRational::zero())])));
    let echo = SpecEcho { beta: 4 / beta_tilde, a: 0, b: 0, c: 0, d: 1, e: 0 };
    let mut rep = VerificationReport::with_errors(
        "bessel_eigen",
        format!("d=1 exact order={order}"),
        echo,
        lv,
        rv,
        if exact { 0.0 } else { (lv - rv).norm().max(f64::MIN_POSITIVE) },
        0.0,
        0.0,
    );
    rep.passed = exact;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperdual_derivatives() {
        // f = exp(x y) at (x, y) = (0.5, 2): ∂x = y f, ∂y = x f, ∂x∂y = (1 + x y) f
        let x = HyperDual::variable(0.5, 1);
        let y = HyperDual::variable(2.0, 2);
        let f = (x * y).exp();
        let e = 1f64.exp();
        assert!((f.d1 - 2.0 * e).norm() < 1e-14 && (f.d2 - 0.5 * e).norm() < 1e-14);
        assert!((f.d12 - 2.0 * e).norm() < 1e-14);
        let g = x.recip();
        assert!((g.d1 + 4.0).norm() < 1e-14);
    }

    #[test]
    fn haar_normalization_and_identity_argument() {
        for bt in [1u8, 2, 4] {
            let g1 = gamma1_for(bt) as f64;
            let one = bessel_phi(bt, &[0.0, 0.0], &[0.3, -1.0]).unwrap();
            assert!((one - C64::new(1.0, 0.0)).norm() < 1e-12);
            let v = bessel_phi(bt, &[0.7, -0.2], &[1.0, 1.0]).unwrap();
            assert!((v - C64::new(0.0, g1 * 0.5).exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn hciz_matches_quadrature() {
        let rh = [HyperDual::variable(0.4, 1), HyperDual::variable(-1.3, 2)];
        let a = bessel_phi_hciz_hd(rh, [1.1, 0.2]);
        let b = bessel_phi_quadrature_hd(2, rh, [1.1, 0.2], 48).unwrap();
        for (x, y) in [(a.v, b.v), (a.d1, b.d1), (a.d2, b.d2), (a.d12, b.d12)] {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn eigen_equation() {
        for bt in [1u8, 2, 4] {
            let r = bessel_eigen_check_d2(bt, 20, 7, if bt == 2 { 1e-8 } else { 1e-5 }).unwrap();
            assert!(r.passed, "{}", r.line());
            assert!(r.abs_error < 1e-10);
            let e = bessel_eigen_check_d1(bt, &BigRational::new(BigInt::from(3), BigInt::from(7)), 12).unwrap();
            assert!(e.passed);
        }
    }
}
