//! Right-hand side of the generalized Hubbard–Stratonovich transformation.
//!
//! The Fermion–Fermion block ρ₂ = diag(r) ⊗ 1_{γ₁} is real and enters through the distribution
//! δ(r)/|Δ(r)|^{4/β} acted on by powers of D. After integrating by parts only the Taylor
//! coefficients of G(r) = ∫d[η] F(ρ̂) exp(−ε Str ρ̂) at r = 0 are needed. They are read off a
//! Cauchy contour integral on |r_n| = R.

use super::constants::{constant_ctilde, gamma1_kappa};
use super::polynomial::{sekiguchi_power, vandermonde, Poly};
use super::superbosonization::{boson_eigen_integral, eigen_jacobian, gamma2_of, sigma_point};
use crate::ensembles::{str_powers, KappaVariant, WishartSpec};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::integrator::Superfunction;
use crate::linalg::{gm_mul, GMatrix};
use crate::scalar::C64;
use crate::special::{flag_ratio_fu, gamma_f64};
use crate::supermatrix::{Block, SuperMatrix, SuperShape};
use num_traits::{ToPrimitive, Zero};
use std::f64::consts::PI;

type G = GrassmannElement<f64>;

/// Node counts for the HS right-hand side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HsQuadrature {
    pub laguerre_nodes: usize,
    /// Points per variable on the Cauchy circle.
    pub cauchy_nodes: usize,
    pub cauchy_radius: f64,
}

impl Default for HsQuadrature {
    fn default() -> Self {
        HsQuadrature { laguerre_nodes: 24, cauchy_nodes: 24, cauchy_radius: 1.0 }
    }
}

/// How the differential operator is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsRoute {
    /// ((−1)^d D)^{a−c} applied to the Taylor polynomial of G.
    Operator,
    /// The closed form of D^{a−c} δ(r)/|Δ(r)|^{4/β} as a product of δ-derivatives (β ∈ {1, 2}).
    DeltaDerivatives,
}

/// ρ̂ with ρ₁ = diag(λ) ⊗ 1_{γ₂} and ρ̂₂₂ = diag(r) ⊗ 1_{γ₁} + ρ_FB ρ₁⁻¹ ρ_BF.
pub fn rho_hat(beta: u8, lambda: &[f64], r: &[C64]) -> Result<SuperMatrix<f64>> {
    let lam: Vec<C64> = lambda.iter().map(|&l| C64::new(l, 0.0)).collect();
    let sigma = sigma_point(beta, &lam, r)?;
    let n = sigma.generator_count();
    let (bb, bf, fb, ff) = (sigma.block(Block::BB), sigma.block(Block::BF), sigma.block(Block::FB), sigma.block(Block::FF));
    if bb.is_empty() {
        return Ok(sigma);
    }
    let inv: GMatrix<f64> = (0..bb.len())
        .map(|i| (0..bb.len()).map(|j| if i == j { G::scalar(n, C64::new(1.0, 0.0) / bb[i][i].body()) } else { G::zero(n) }).collect())
        .collect();
    let corr = gm_mul(&gm_mul(&fb, &inv, n), &bf, n);
    let mut ff2 = ff.clone();
    for (i, row) in ff2.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = v.try_add(&corr[i][j])?;
        }
    }
    Ok(SuperMatrix::from_blocks(SuperShape::square(bb.len(), ff.len()), n, &bb, &bf, &fb, &ff2))
}

/// ∫d[η] F(ρ̂) exp(−s Str ρ̂) with the scalar factor exp(−sγ₂Σλ) removed.
fn reduced_g(beta: u8, f: &Superfunction, s: f64, lambda: &[f64], r: &[C64]) -> Result<C64> {
    let rho = rho_hat(beta, lambda, r)?;
    let n = rho.generator_count();
    let strs = str_powers(&rho, f.max_power().max(1) as u32)?;
    let body: f64 = gamma2_of(beta) as f64 * lambda.iter().sum::<f64>();
    let shifted = strs[0].try_sub(&G::real(n, body))?;
    f.polynomial(&strs, n)?.try_mul(&shifted.scale_real(-s).exp_even()?)?.integrate_all()
}

/// Taylor polynomial of h around 0 up to total degree `degree`, from a trapezoid rule on the
/// torus |r_n| = R.
pub fn taylor_from_contour(d: usize, degree: usize, q: &HsQuadrature, h: impl Fn(&[C64]) -> Result<C64>) -> Result<Poly<f64>> {
    let m = q.cauchy_nodes;
    if m <= degree {
        return Err(Error::Config(format!("{m} contour points cannot resolve degree {degree}")));
    }
    let mut out = Poly::zero(d);
    if d == 0 {
        return Ok(Poly::constant(0, h(&[])?));
    }
    let total = m.pow(d as u32);
    let mut samples = Vec::with_capacity(total);
    for idx in 0..total {
        let mut r = Vec::with_capacity(d);
        let mut k = idx;
        for _ in 0..d {
            r.push(C64::from_polar(q.cauchy_radius, 2.0 * PI * (k % m) as f64 / m as f64));
            k /= m;
        }
        samples.push((r.clone(), h(&r)?));
    }
    let mut exps = vec![0i32; d];
    loop {
        if exps.iter().sum::<i32>() as usize <= degree {
            let mut c = C64::zero();
            for (r, v) in &samples {
                let mono: C64 = r.iter().zip(&exps).map(|(x, &e)| x.powi(-e)).product();
                c += v * mono;
            }
            c /= total as f64;
            out = out.add(&Poly::monomial(d, c, exps.clone()));
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            exps[i] += 1;
            if exps[i] as usize <= degree {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

fn hs_validate(spec: &WishartSpec) -> Result<()> {
    if spec.b != 0 {
        return Err(Error::Precondition("the HS transformation needs b = 0".into()));
    }
    if spec.a < spec.c {
        return Err(Error::Precondition(format!("a ≥ c is required, got a = {}, c = {}", spec.a, spec.c)));
    }
    if spec.d > 2 {
        return Err(Error::Unsupported(format!("d = {} (only d ≤ 2)", spec.d)));
    }
    Ok(())
}

/// Value of the r-part at fixed λ for the chosen route, without C̃ and J_d.
fn fermion_part(spec: &WishartSpec, f: &Superfunction, s: f64, lambda: &[f64], route: HsRoute, q: &HsQuadrature) -> Result<C64> {
    let (beta, d, amc) = (spec.beta, spec.d, spec.a - spec.c);
    let g = |r: &[C64]| reduced_g(beta, f, s, lambda, r);
    if d == 0 {
        return g(&[]);
    }
    match route {
        HsRoute::Operator => {
            let taylor = taylor_from_contour(d, d * amc, q, g)?;
            let dg = sekiguchi_power(&taylor, &(2.0 / beta as f64), amc)?.constant_term();
            Ok(if (d * amc) % 2 == 1 { -dg } else { dg })
        }
        HsRoute::DeltaDerivatives => {
            if beta == 4 {
                return Err(Error::Unsupported("the δ-derivative form needs β ∈ {1, 2}".into()));
            }
            let gk = gamma1_kappa(spec)?.to_integer().to_usize().ok_or_else(|| Error::Internal("γ₁κ".into()))?;
            let k = gk - 1;
            let taylor = taylor_from_contour(d, d * k, q, g)?;
            let vdm: Poly<f64> = vandermonde(d).pow(4 / beta as u32);
            let coef = vdm.mul(&taylor).coefficient(&vec![k as i32; d]);
            let kfact = gamma_f64(gk as f64)?;
            let mut pre = flag_ratio_fu(4 / beta, d)?.to_f64();
            for n in 1..=d {
                let e = 2.0 * (n - 1) as f64 / beta as f64;
                pre *= gamma_f64(amc as f64 + 1.0 + e)? / ((-PI).powi(e as i32) * kfact);
            }
            let sign = if (d * k) % 2 == 1 { -1.0 } else { 1.0 };
            Ok(coef * pre * sign * kfact.powi(d as i32))
        }
    }
}

/// C̃ ∫ d[ρ₁] d[η] det ρ₁^κ ∫ d[ρ₂] δ(r)/|Δ(r)|^{4/β} ((−1)^d D)^{a−c} F(ρ̂) exp(−ε Str ρ̂).
pub fn rhs_hubbard_stratonovich(spec: &WishartSpec, f: &Superfunction, eps: f64, route: HsRoute, q: &HsQuadrature) -> Result<C64> {
    hs_validate(spec)?;
    if f.is_zero() {
        return Ok(C64::zero());
    }
    let kappa = spec.kappa(KappaVariant::Thm1)?;
    let s = eps + f.damping();
    let inner = |lam: &[f64]| fermion_part(spec, f, s, lam, route, q);
    let v = boson_eigen_integral(spec.beta, spec.c, &kappa, s, q.laguerre_nodes, inner)?;
    let jd = eigen_jacobian(4 / spec.beta, spec.d)?;
    Ok(v * jd * constant_ctilde(spec.beta, spec.a, spec.c, spec.d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::superbosonization::{rhs_superbosonization, RhsQuadrature};
    use crate::integrator::{lhs_integral, QuadratureSpec};

    #[test]
    fn taylor_of_exponential() {
        let q = HsQuadrature::default();
        let p = taylor_from_contour(2, 4, &q, |r| Ok((r[0] * 2.0 + r[1]).exp())).unwrap();
        assert!((p.coefficient(&[2, 1]) - C64::new(2.0, 0.0)).norm() < 1e-13);
        assert!((p.coefficient(&[0, 3]) - C64::new(1.0 / 6.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn smallest_unitary() {
        let s = WishartSpec::new(2, 1, 0, 1, 1).unwrap();
        for route in [HsRoute::Operator, HsRoute::DeltaDerivatives] {
            let v = rhs_hubbard_stratonovich(&s, &Superfunction::one(), 1.0, route, &HsQuadrature::default()).unwrap();
            assert!((v - C64::new(-0.5, 0.0)).norm() < 1e-12, "{route:?} {v}");
        }
    }

    #[test]
    fn agrees_with_lhs_and_superbosonization() {
        let hq = HsQuadrature::default();
        for (beta, a, c, d) in [(2u8, 1, 1, 1), (2, 2, 1, 1), (2, 3, 1, 1), (2, 2, 2, 1), (2, 1, 0, 2), (2, 2, 1, 2), (1, 1, 1, 1), (1, 2, 1, 1), (4, 1, 1, 1), (4, 2, 1, 1)] {
            let s = WishartSpec::new(beta, a, 0, c, d).unwrap();
            for f in [Superfunction::one(), Superfunction::str_b_pow(1), Superfunction::str_b_pow(2), Superfunction::exp_str(0.5)] {
                let l = lhs_integral(&s, &f, &QuadratureSpec::default()).unwrap().value;
                let sb = rhs_superbosonization(&s, &f, 1.0, &RhsQuadrature::default()).unwrap();
                let hs = rhs_hubbard_stratonovich(&s, &f, 1.0, HsRoute::Operator, &hq).unwrap();
                let scale = l.norm().max(1e-3);
                assert!((l - hs).norm() <= 1e-8 * scale, "β={beta} a={a} c={c} d={d} {f:?}: lhs {l} hs {hs} sb {sb}");
                if beta != 4 {
                    let alt = rhs_hubbard_stratonovich(&s, &f, 1.0, HsRoute::DeltaDerivatives, &hq).unwrap();
                    assert!((alt - hs).norm() <= 1e-8 * scale, "β={beta} a={a} c={c} d={d} {f:?}: {alt} vs {hs}");
                }
            }
        }
    }
}
