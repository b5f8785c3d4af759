//! Right-hand side of the superbosonization formula: an integral over supermatrices with a
//! positive definite Boson–Boson block and a circular Fermion–Fermion block.
//!
//! Both diagonal blocks are reduced to eigenvalues. This is exact for integrands built from
//! supertraces and superdeterminants, which are invariant under U(p) × U(q) acting on σ and η.

use super::constants::{constant_c, laguerre_alpha};
use super::selberg::{signed_vandermonde, torus_average};
use crate::ensembles::{KappaVariant, WishartSpec};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::integrator::quadrature::gauss_laguerre;
use crate::integrator::Superfunction;
use crate::linalg::{gm_det, gm_mul, gm_sub, GMatrix};
use crate::scalar::C64;
use crate::special::{flag_ratio_fu, vol_u};
use crate::supermatrix::{Block, SuperMatrix, SuperShape};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;


type G = GrassmannElement<f64>;

/// Node counts of the eigenvalue quadratures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhsQuadrature {
    /// Gauss–Laguerre nodes per Boson–Boson eigenvalue.
    pub laguerre_nodes: usize,
    /// Trapezoid nodes per eigenphase.
    pub circle_nodes: usize,
    /// Gauss–Legendre nodes in the phase difference, used when the Vandermonde power is odd.
    pub theta_nodes: usize,
}

impl Default for RhsQuadrature {
    fn default() -> Self {
        RhsQuadrature { laguerre_nodes: 24, circle_nodes: 32, theta_nodes: 32 }
    }
}

pub(crate) fn gamma1_of(beta: u8) -> usize {
    if beta == 1 {
        2
    } else {
        1
    }
}

pub(crate) fn gamma2_of(beta: u8) -> usize {
    if beta == 4 {
        2
    } else {
        1
    }
}

/// Vol(U^{(β)}(p)) / (p! Vol(U^{(β)}(1))^p): Jacobian of the eigenvalue decomposition of Herm(β, p).
pub fn eigen_jacobian(beta: u8, p: usize) -> Result<f64> {
    let fact: f64 = (1..=p).map(|k| k as f64).product();
    Ok(vol_u(beta, p)?.to_f64() / (fact * vol_u(beta, 1)?.to_f64().powi(p as i32)))
}

/// Point of Σ_{β,pq} with Boson–Boson block diag(λ) ⊗ 1_{γ₂}, Fermion–Fermion block
/// diag(x) ⊗ 1_{γ₁} and the Boson–Fermion block built from p·q complex Grassmann pairs η_{nm}
/// (generators 2(nq+m) and 2(nq+m)+1):
/// β = 2: η;  β = 1: [η, η*];  β = 4: [η; η*].  The Fermion–Boson block is −(Boson–Fermion)†.
pub fn sigma_point(beta: u8, lambda: &[C64], x: &[C64]) -> Result<SuperMatrix<f64>> {
    let (p, q) = (lambda.len(), x.len());
    let (g1, g2) = (gamma1_of(beta), gamma2_of(beta));
    let n = (2 * p * q) as u32;
    let (bb, ff) = (g2 * p, g1 * q);
    let eta = |i: usize, m: usize, star: bool| G::generator(n, (2 * (i * q + m) + star as usize) as u32);
    let mut bf: GMatrix<f64> = vec![vec![G::zero(n); ff]; bb];
    for i in 0..p {
        for m in 0..q {
            bf[i][m] = eta(i, m, false)?;
            match beta {
                1 => bf[i][q + m] = eta(i, m, true)?,
                4 => bf[p + i][m] = eta(i, m, true)?,
                _ => {}
            }
        }
    }
    let mut fb: GMatrix<f64> = vec![vec![G::zero(n); bb]; ff];
    for (i, row) in bf.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            fb[j][i] = v.conj()?.neg();
        }
    }
    let diag = |vals: &[C64], copies: usize| -> GMatrix<f64> {
        let k = vals.len() * copies;
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { G::scalar(n, vals[i % vals.len()]) } else { G::zero(n) }).collect())
            .collect()
    };
    Ok(SuperMatrix::from_blocks(SuperShape::square(bb, ff), n, &diag(lambda, g2), &bf, &fb, &diag(x, g1)))
}

/// det(σ₁ − σ_BF σ₂⁻¹ σ_FB), the numerator of Sdet σ.
pub fn sdet_numerator(sigma: &SuperMatrix<f64>) -> Result<G> {
    let n = sigma.generator_count();
    let (a, b, c, d) = (sigma.block(Block::BB), sigma.block(Block::BF), sigma.block(Block::FB), sigma.block(Block::FF));
    if a.is_empty() {
        return Ok(G::one(n));
    }
    if d.is_empty() {
        return gm_det(&a, n);
    }
    let dinv: GMatrix<f64> = (0..d.len())
        .map(|i| {
            (0..d.len())
                .map(|j| if i == j { G::scalar(n, C64::new(1.0, 0.0) / d[i][i].body()) } else { G::zero(n) })
                .collect()
        })
        .collect();
    if d.iter().enumerate().any(|(i, r)| r.iter().enumerate().any(|(j, v)| i != j && !v.is_zero()) || !r[i].soul().is_zero()) {
        return Err(Error::Internal("Fermion–Fermion block must be diagonal without soul".into()));
    }
    gm_det(&gm_sub(&a, &gm_mul(&gm_mul(&b, &dinv, n), &c, n)), n)
}

/// Grassmann part of the integrand: F without its exponential damping.
pub type Weight<'a> = dyn Fn(&SuperMatrix<f64>) -> Result<G> + Sync + 'a;

/// J_p ∫_{λ > 0} |Δ(λ)|^β ∏ λ^{γ₂κ} e^{−sγ₂Σλ} h(λ) dλ by Gauss–Laguerre in u = sγ₂λ.
/// h must be polynomial in λ and 1/λ with powers that keep the integrand integrable.
pub(crate) fn boson_eigen_integral(
    beta: u8,
    p: usize,
    kappa: &BigRational,
    s: f64,
    nodes: usize,
    h: impl Fn(&[f64]) -> Result<C64> + Sync,
) -> Result<C64> {
    if p > 2 {
        return Err(Error::Unsupported(format!("eigenvalue integrals need p ≤ 2, got p = {p}")));
    }
    if beta == 1 && p == 2 {
        return Err(Error::Unsupported("|Δ(λ)| for β = 1 and p = 2".into()));
    }
    if p == 0 {
        return h(&[]);
    }
    if !(s > 0.0) {
        return Err(Error::Divergent(format!("the Boson–Boson integral needs Re s > 0, got s = {s}")));
    }
    let g2 = gamma2_of(beta) as f64;
    let g2k = kappa * BigRational::from_integer((gamma2_of(beta) as i64).into());
    let g2kf = g2k.to_f64().ok_or_else(|| Error::Internal("κ not representable".into()))?;
    let alpha = if p == 1 { laguerre_alpha(&g2k) } else { 0.0 };
    if p == 2 && !g2k.is_integer() {
        return Err(Error::Unsupported("non-integer γ₂κ with p = 2".into()));
    }
    let rule = gauss_laguerre(nodes, alpha)?;
    let rate = s * g2;
    let nl = rule.len();
    let point = |idx: usize| -> Result<C64> {
        let mut lam = Vec::with_capacity(p);
        let mut w = 1.0;
        let mut r = idx;
        for _ in 0..p {
            let u = rule.nodes[r % nl];
            w *= rule.weights[r % nl] * u.powf(g2kf - alpha) / rate.powf(g2kf + 1.0);
            lam.push(u / rate);
            r /= nl;
        }
        let mut vdm = 1.0;
        for i in 0..p {
            for j in i + 1..p {
                vdm *= (lam[i] - lam[j]).abs().powi(beta as i32);
            }
        }
        Ok(h(&lam)? * w * vdm)
    };
    let vals: Vec<C64> = (0..nl.pow(p as u32)).into_par_iter().map(point).collect::<Result<_>>()?;
    Ok(crate::integrator::quadrature::pairwise_sum(&vals) * eigen_jacobian(beta, p)?)
}

/// ∫ W(σ) exp(−s Str σ) Sdet^κ σ d[σ] over Σ_{β,pq} with σ₁ > 0 and σ₂ in the circular ensemble:
/// J_p ∫ |Δ(λ)|^β dλ · FU_q ∮ |Δ(e^{iφ})|^{4/β} ∏ e^{iφ} dφ/2π · ∫ d[η], with the sign-adjusted
/// Vandermonde on the circle and φ ∈ [0, 2π) fixing the branch of det σ₂^{−κ}.
pub fn sigma_integral(beta: u8, p: usize, q: usize, kappa: &BigRational, s: f64, weight: &Weight, quad: &RhsQuadrature) -> Result<C64> {
    if ![1, 2, 4].contains(&beta) {
        return Err(Error::Config(format!("invalid β={beta}")));
    }
    if q > 2 {
        return Err(Error::Unsupported(format!("Σ integrals need q ≤ 2, got q = {q}")));
    }
    let g1 = gamma1_of(beta) as f64;
    let kf = kappa.to_f64().ok_or_else(|| Error::Internal("κ not representable".into()))?;
    let bt = 4 / beta as i32;
    let smooth = bt % 2 == 0 || q < 2;
    let inner = |lam: &[f64]| -> Result<C64> {
        let lam_c: Vec<C64> = lam.iter().map(|&l| C64::new(l, 0.0)).collect();
        let err = std::cell::RefCell::new(None);
        let v = torus_average(q, quad.circle_nodes, quad.theta_nodes, smooth, |phi| {
            let x: Vec<C64> = phi.iter().map(|&t| C64::from_polar(1.0, t)).collect();
            let eval = || -> Result<C64> {
                let sigma = sigma_point(beta, &lam_c, &x)?;
                let num = sdet_numerator(&sigma)?;
                // the body ∏λ^{γ₂κ} is supplied by the eigenvalue rule
                let sp = if p == 0 { num } else { num.pow_even(kf, C64::new(1.0, 0.0))? };
                let berezin = weight(&sigma)?.try_mul(&sp)?.integrate_all()?;
                let circle: C64 = phi
                    .iter()
                    .zip(&x)
                    .map(|(&t, &z)| (z * s * g1).exp() * C64::from_polar(1.0, (1.0 - g1 * kf) * t))
                    .product();
                Ok(berezin * circle * signed_vandermonde(phi).powi(bt))
            };
            eval().unwrap_or_else(|e| {
                err.borrow_mut().get_or_insert(e);
                C64::zero()
            })
        });
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        v
    };
    Ok(boson_eigen_integral(beta, p, kappa, s, quad.laguerre_nodes, inner)? * flag_ratio_fu(4 / beta, q)?.to_f64())
}

/// Weight of a superfunction: its polynomial part in Str σ^m.
pub fn superfunction_weight(f: &Superfunction) -> impl Fn(&SuperMatrix<f64>) -> Result<G> + Sync + '_ {
    move |sigma: &SuperMatrix<f64>| {
        let strs = crate::ensembles::str_powers(sigma, f.max_power().max(1) as u32)?;
        f.polynomial(&strs, sigma.generator_count())
    }
}

/// C ∫ F(ρ) exp(−ε Str ρ) Sdet^κ ρ d[ρ].
pub fn rhs_superbosonization(spec: &WishartSpec, f: &Superfunction, eps: f64, quad: &RhsQuadrature) -> Result<C64> {
    if spec.b != 0 {
        return Err(Error::Precondition("the superbosonization formula needs b = 0".into()));
    }
    if spec.a < spec.c {
        return Err(Error::Precondition(format!("a ≥ c is required, got a = {}, c = {}", spec.a, spec.c)));
    }
    if f.is_zero() {
        return Ok(C64::zero());
    }
    let kappa = spec.kappa(KappaVariant::Thm1)?;
    let w = superfunction_weight(f);
    let v = sigma_integral(spec.beta, spec.c, spec.d, &kappa, eps + f.damping(), &w, quad)?;
    Ok(v * constant_c(spec.beta, spec.a, spec.c, spec.d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::supermatrix::{sigma_membership, SigmaSet};

    #[test]
    fn sigma_points_are_members() {
        for beta in [1u8, 2, 4] {
            for (p, q) in [(1, 1), (2, 1), (1, 2)] {
                let lam: Vec<C64> = (0..p).map(|k| C64::new(0.5 + k as f64, 0.0)).collect();
                let x: Vec<C64> = (0..q).map(|k| C64::from_polar(1.0, 0.3 + k as f64)).collect();
                let s = sigma_point(beta, &lam, &x).unwrap();
                assert!(sigma_membership(&s, SigmaSet::Circular { beta }), "β={beta} p={p} q={q}");
            }
        }
    }

    #[test]
    fn jacobian_values() {
        assert!((eigen_jacobian(2, 2).unwrap() - PI / 2.0).abs() < 1e-14);
        assert!((eigen_jacobian(1, 2).unwrap() - PI / 2.0).abs() < 1e-14);
        assert!((eigen_jacobian(2, 1).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn smallest_unitary() {
        let s = WishartSpec::new(2, 1, 0, 1, 1).unwrap();
        let v = rhs_superbosonization(&s, &Superfunction::one(), 1.0, &RhsQuadrature::default()).unwrap();
        assert!((v - C64::new(-0.5, 0.0)).norm() < 1e-12, "{v}");
        let v = rhs_superbosonization(&WishartSpec::new(2, 2, 0, 1, 1).unwrap(), &Superfunction::one(), 1.0, &RhsQuadrature::default()).unwrap();
        assert!((v - C64::new(0.25, 0.0)).norm() < 1e-12, "{v}");
    }

    fn lhs(s: &WishartSpec, f: &Superfunction) -> C64 {
        crate::integrator::lhs_integral(s, f, &crate::integrator::QuadratureSpec::default()).unwrap().value
    }

    #[test]
    fn agrees_with_lhs() {
        let q = RhsQuadrature::default();
        for (beta, a, c, d) in [(2u8, 1, 0, 1), (2, 2, 0, 1), (2, 1, 0, 2), (1, 1, 0, 1), (4, 1, 0, 1), (2, 2, 1, 1), (2, 2, 2, 1), (2, 2, 1, 2), (1, 2, 1, 1), (4, 1, 1, 1)] {
            let s = WishartSpec::new(beta, a, 0, c, d).unwrap();
            for f in [Superfunction::one(), Superfunction::str_b_pow(1), Superfunction::str_b_pow(2), Superfunction::exp_str(0.5)] {
                let l = lhs(&s, &f);
                let r = rhs_superbosonization(&s, &f, 1.0, &q).unwrap();
                assert!((l - r).norm() <= 1e-8 * l.norm().max(1e-3), "β={beta} a={a} c={c} d={d} {f:?}: {l} vs {r}");
            }
        }
    }

    #[test]
    fn quaternion_smallest() {
        let s = WishartSpec::new(4, 1, 0, 1, 1).unwrap();
        let v = rhs_superbosonization(&s, &Superfunction::one(), 1.0, &RhsQuadrature::default()).unwrap();
        assert!((v - C64::new(-PI / 2.0, 0.0)).norm() < 1e-10, "{v}");
    }

    #[test]
    fn precondition() {
        let s = WishartSpec::new(2, 1, 0, 2, 1).unwrap();
        assert!(matches!(rhs_superbosonization(&s, &Superfunction::one(), 1.0, &RhsQuadrature::default()), Err(Error::Precondition(_))));
    }
}
