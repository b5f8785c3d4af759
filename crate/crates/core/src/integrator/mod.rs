//! Left-hand sides: exact Berezin integration followed by quadrature over the
//! ordinary coordinates of V.

pub mod quadrature;

use crate::ensembles::{build_b, build_v, str_powers, OrdinarySample, WishartSpec};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::report::{SpecEcho, VerificationReport};
use crate::scalar::C64;
use crate::supermatrix::{SuperMatrix, WickRotation, WickSide};
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Zero};
use quadrature::{gauss_hermite, pairwise_sum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type G = GrassmannElement<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    GaussHermiteTensor,
    MonteCarlo,
    GaussLaguerreRadial,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Upper bound; the tensor rule lowers it so that the grid has at most `max_points` nodes.
    pub nodes_per_dim: usize,
    pub max_points: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub wick_angle: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::GaussHermiteTensor,
            nodes_per_dim: 32,
            max_points: 200_000,
            mc_samples: 200_000,
            seed: 7,
            epsilon: 1.0,
            wick_angle: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_dim < 2 {
            return Err(Error::Config("nodes_per_dim must be at least 2".into()));
        }
        if !(self.epsilon >= 0.0) || !self.wick_angle.is_finite() {
            return Err(Error::Config("ε must be non-negative and ψ finite".into()));
        }
        Ok(())
    }
}

/// Σ_k c_k ∏_m (Str B^m)^{p_km} · exp(−t Str B).
#[derive(Clone, Debug, PartialEq)]
pub struct Superfunction {
    terms: Vec<(C64, Vec<u32>)>,
    damping: f64,
}

impl Superfunction {
    pub fn zero() -> Self {
        Superfunction { terms: Vec::new(), damping: 0.0 }
    }

    pub fn one() -> Self {
        Self::monomial(C64::one(), vec![])
    }

    pub fn monomial(c: C64, powers: Vec<u32>) -> Self {
        Superfunction { terms: vec![(c, powers)], damping: 0.0 }
    }

    /// (Str B)^k
    pub fn str_b_pow(k: u32) -> Self {
        Self::monomial(C64::one(), vec![k])
    }

    /// Str B^m
    pub fn str_of_power(m: usize) -> Self {
        let mut p = vec![0; m];
        p[m - 1] = 1;
        Self::monomial(C64::one(), p)
    }

    /// exp(−t Str B)
    pub fn exp_str(t: f64) -> Self {
        Self::one().with_damping(t)
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "one" | "1" => Ok(Self::one()),
            "str" => Ok(Self::str_b_pow(1)),
            "str2" => Ok(Self::str_b_pow(2)),
            "exp" => Ok(Self::exp_str(1.0)),
            _ => Err(Error::Config(format!("unknown superfunction '{name}' (expected one, str, str2 or exp)"))),
        }
    }

    pub fn with_damping(mut self, t: f64) -> Self {
        self.damping = t;
        self
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn terms(&self) -> &[(C64, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == C64::zero())
    }

    pub fn scale(&self, s: C64) -> Self {
        Superfunction { terms: self.terms.iter().map(|(c, p)| (c * s, p.clone())).collect(), damping: self.damping }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if self.damping != o.damping && !self.is_zero() && !o.is_zero() {
            return Err(Error::Config("superfunctions with different damping cannot be added".into()));
        }
        let damping = if self.is_zero() { o.damping } else { self.damping };
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(Superfunction { terms, damping })
    }

    /// Largest m with Str B^m appearing.
    pub fn max_power(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|(_, p)| p.iter().rposition(|&e| e > 0).map(|i| i + 1))
            .max()
            .unwrap_or(0)
    }

    /// Polynomial part, given strs[m−1] = Str B^m.
    pub fn polynomial(&self, strs: &[G], n: u32) -> Result<G> {
        let mut out = G::zero(n);
        for (c, p) in &self.terms {
            let mut t = G::scalar(n, *c);
            for (m, &e) in p.iter().enumerate() {
                for _ in 0..e {
                    t = t.try_mul(&strs[m])?;
                }
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// F(σ) for a square supermatrix.
    pub fn evaluate(&self, sigma: &SuperMatrix<f64>) -> Result<G> {
        let n = sigma.generator_count();
        let strs = str_powers(sigma, self.max_power().max(1) as u32)?;
        let p = self.polynomial(&strs, n)?;
        if self.damping == 0.0 {
            return Ok(p);
        }
        p.try_mul(&strs[0].scale_real(-self.damping).exp_even()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
    pub points: usize,
}

/// Grassmann-integrated integrand with the Gaussian body factor exp(−s·body Str B_ψ) removed.
pub fn reduced_integrand(spec: &WishartSpec, f: &Superfunction, s: f64, psi: f64, x: &OrdinarySample) -> Result<C64> {
    let n = spec.generator_count();
    let v = build_v::<f64>(spec, x)?;
    let mut b = build_b(spec, &v)?;
    if psi != 0.0 {
        b = b.wick_rotate(WickRotation { angle: psi, side: WickSide::Column })?;
    }
    let strs = str_powers(&b, f.max_power().max(1) as u32)?;
    let soul = strs[0].soul();
    let g = f.polynomial(&strs, n)?.try_mul(&soul.scale_real(-s).exp_even()?)?;
    g.integrate_all()
}

/// Body of Str B_ψ as a function of the real coordinates.
fn body_str(spec: &WishartSpec, psi: f64, x: &OrdinarySample) -> Result<C64> {
    let v = build_v::<f64>(spec, x)?;
    let mut b = build_b(spec, &v)?;
    if psi != 0.0 {
        b = b.wick_rotate(WickRotation { angle: psi, side: WickSide::Column })?;
    }
    Ok(b.str()?.body())
}

/// λ_k with body Str B_ψ = Σ λ_k x_k², checked to be diagonal.
pub fn gaussian_weights(spec: &WishartSpec, psi: f64) -> Result<Vec<C64>> {
    let dims = spec.real_dims();
    let unit = |k: usize| {
        let mut c = vec![0.0; dims];
        c[k] = 1.0;
        OrdinarySample { coords: c }
    };
    let w: Vec<C64> = (0..dims).map(|k| body_str(spec, psi, &unit(k))).collect::<Result<_>>()?;
    let probe: Vec<f64> = (0..dims).map(|k| 0.3 + 0.7 * ((k * 7 % 5) as f64) - 1.1 * (k % 2) as f64).collect();
    let direct = body_str(spec, psi, &OrdinarySample { coords: probe.clone() })?;
    let diag: C64 = w.iter().zip(&probe).map(|(w, x)| w * x * x).sum();
    if (direct - diag).norm() > 1e-10 * (1.0 + direct.norm()) {
        return Err(Error::Internal("body of Str B is not diagonal in the coordinates".into()));
    }
    Ok(w)
}

/// ∫ F(B̂_ψ) exp(−ε Str B̂_ψ) d[V̂].
pub fn lhs_integral(spec: &WishartSpec, f: &Superfunction, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    if f.is_zero() {
        return Ok(Estimate { value: C64::zero(), error: 0.0, points: 0 });
    }
    let s = q.epsilon + f.damping();
    let psi = q.wick_angle;
    let dims = spec.real_dims();
    if dims == 0 {
        let v = reduced_integrand(spec, f, s, psi, &OrdinarySample { coords: vec![] })?;
        return Ok(Estimate { value: v, error: 0.0, points: 1 });
    }
    let w = gaussian_weights(spec, psi)?;
    let lambda: Vec<f64> = w
        .iter()
        .map(|&wk| {
            let l = wk * s;
            if l.re <= 0.0 || l.im.abs() > 1e-12 * l.norm() {
                Err(Error::Divergent(format!(
                    "Gaussian weight {l} is not positive; choose ε > 0 and a Wick angle making Str B̂_ψ positive"
                )))
            } else {
                Ok(l.re)
            }
        })
        .collect::<Result<_>>()?;
    let eval = |u: &[f64]| -> Result<C64> {
        let coords: Vec<f64> = u.iter().zip(&lambda).map(|(u, l)| u / l.sqrt()).collect();
        reduced_integrand(spec, f, s, psi, &OrdinarySample { coords })
    };
    let jac: f64 = lambda.iter().map(|l| l.powf(-0.5)).product();
    match q.scheme {
        Scheme::MonteCarlo => {
            let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
            let samples: Vec<Vec<f64>> = (0..q.mc_samples)
                .map(|_| (0..dims).map(|_| StandardNormal.sample(&mut rng)).collect::<Vec<f64>>())
                .collect();
            // u ~ N(0, 1/2) per coordinate matches the weight e^{−u²}
            let vals: Vec<C64> = samples
                .par_iter()
                .map(|z| eval(&z.iter().map(|v| v * std::f64::consts::FRAC_1_SQRT_2).collect::<Vec<_>>()))
                .collect::<Result<_>>()?;
            let norm = PI.powf(dims as f64 / 2.0) * jac;
            let m = q.mc_samples as f64;
            let mean = pairwise_sum(&vals) / m;
            let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (m - 1.0).max(1.0);
            Ok(Estimate { value: mean * norm, error: (var / m).sqrt() * norm, points: q.mc_samples })
        }
        Scheme::GaussHermiteTensor | Scheme::GaussLaguerreRadial => {
            let n = tensor_nodes(q.nodes_per_dim, q.max_points, dims);
            let hi = tensor_gh(&eval, dims, n)?;
            let lo = if n > 2 { tensor_gh(&eval, dims, n - 1)? } else { hi };
            Ok(Estimate { value: hi * jac, error: (hi - lo).norm() * jac, points: n.pow(dims as u32) })
        }
    }
}

/// Nodes per dimension for a tensor grid with at most `max_points` nodes.
pub fn tensor_nodes(cap: usize, max_points: usize, dims: usize) -> usize {
    let mut n = cap.max(2);
    while n > 2 && (n as f64).powi(dims as i32) > max_points as f64 {
        n -= 1;
    }
    n
}

fn tensor_gh(eval: &(dyn Fn(&[f64]) -> Result<C64> + Sync), dims: usize, n: usize) -> Result<C64> {
    let rule = gauss_hermite(n)?;
    let total = n.pow(dims as u32);
    let vals: Vec<C64> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut u = Vec::with_capacity(dims);
            let mut w = 1.0;
            let mut r = idx;
            for _ in 0..dims {
                u.push(rule.nodes[r % n]);
                w *= rule.weights[r % n];
                r /= n;
            }
            Ok(eval(&u)? * w)
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&vals))
}

pub fn spec_echo(spec: &WishartSpec, e: usize) -> SpecEcho {
    SpecEcho { beta: spec.beta, a: spec.a, b: spec.b, c: spec.c, d: spec.d, e }
}

/// ∫ exp(tr B̂) d[V̂] for c = 0, evaluated in exact arithmetic; expected (−2π)^{−ad}.
pub fn calibration_check(spec: &WishartSpec) -> Result<VerificationReport> {
    if spec.c != 0 || spec.b != 0 {
        return Err(Error::Precondition("calibration needs b = c = 0".into()));
    }
    let x = OrdinarySample::zeros(spec);
    let v = build_v::<BigRational>(spec, &x)?;
    let b = build_b(spec, &v)?;
    // c = 0: the trace is minus the supertrace
    let tr = b.str()?.neg();
    let raw = tr.exp_even()?.integrate_all_raw()?;
    let ad = (spec.a * spec.d) as i32;
    let expect_raw = if ad % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let exact = raw.re == expect_raw && raw.im.is_zero();
    let nu2 = (2.0 * PI).powi(-ad);
    let lhs = crate::scalar::to_c64(&raw) * nu2;
    let rhs = C64::new((-2.0 * PI).powi(-ad), 0.0);
    let err = if exact { 0.0 } else { (lhs - rhs).norm() };
    Ok(VerificationReport::with_errors("calibration", "exact Berezin", spec_echo(spec, 0), lhs, rhs, err, err, 0.0))
}

/// ∫ exp(ı tr B̂ σ⁺) d[V̂] for d = 0 by quadrature, against det(σ⁺/(ıγ₁π))^{−a/γ₁}.
pub fn gaussian_vector_integral(spec: &WishartSpec, sigma_plus: &DMatrix<C64>, nodes: usize) -> Result<(C64, C64)> {
    if spec.d != 0 || spec.b != 0 {
        return Err(Error::Precondition("the Gaussian vector integral needs b = d = 0".into()));
    }
    let rows = spec.gamma2() * spec.c;
    if sigma_plus.nrows() != rows || sigma_plus.ncols() != rows {
        return Err(Error::Dimension(format!("σ⁺ must be {rows}×{rows}")));
    }
    let one = WishartSpec::new(spec.beta, 1, 0, spec.c, 0)?;
    let dims = one.real_dims();
    let sig = SuperMatrix::<f64>::from_fn(crate::supermatrix::SuperShape::square(rows, 0), 0, |i, j| {
        G::scalar(0, sigma_plus[(i, j)])
    });
    let f = |x: &[f64]| -> Result<C64> {
        let v = build_v::<f64>(&one, &OrdinarySample { coords: x.to_vec() })?;
        let b = build_b(&one, &v)?;
        Ok(b.try_mul(&sig)?.str()?.body())
    };
    // tr(B σ⁺) = xᵀ A x with complex symmetric A
    let mut a = DMatrix::<C64>::zeros(dims, dims);
    let e = |k: usize| {
        let mut c = vec![0.0; dims];
        c[k] = 1.0;
        c
    };
    for i in 0..dims {
        a[(i, i)] = f(&e(i))?;
    }
    for i in 0..dims {
        for j in i + 1..dims {
            let mut c = e(i);
            c[j] = 1.0;
            let v = (f(&c)? - a[(i, i)] - a[(j, j)]) / 2.0;
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let probe: Vec<f64> = (0..dims).map(|k| 0.4 - 0.3 * k as f64).collect();
    let pv = nalgebra::DVector::from_vec(probe.iter().map(|&x| C64::new(x, 0.0)).collect());
    if (f(&probe)? - (pv.transpose() * &a * &pv)[(0, 0)]).norm() > 1e-10 {
        return Err(Error::Internal("tr Bσ⁺ is not a quadratic form".into()));
    }
    // ı xᵀAx = −xᵀ M x + ı xᵀ H x
    let m = a.map(|z| z.im);
    let h = a.map(|z| z.re);
    let chol = nalgebra::Cholesky::new(m.clone())
        .ok_or_else(|| Error::Divergent("Im σ⁺ must be positive definite".into()))?;
    let l = chol.l();
    let linv_t = l.clone().try_inverse().ok_or_else(|| Error::Singular("Cholesky factor".into()))?.transpose();
    let det_l: f64 = (0..dims).map(|i| l[(i, i)]).product();
    let nmat = linv_t.transpose() * &h * &linv_t;
    let rule = gauss_hermite(nodes)?;
    let total = nodes.pow(dims as u32);
    let vals: Vec<C64> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut u = nalgebra::DVector::<f64>::zeros(dims);
            let mut w = 1.0;
            let mut r = idx;
            for k in 0..dims {
                u[k] = rule.nodes[r % nodes];
                w *= rule.weights[r % nodes];
                r /= nodes;
            }
            let q = (u.transpose() * &nmat * &u)[(0, 0)];
            C64::from_polar(w, q)
        })
        .collect();
    let single = pairwise_sum(&vals) / det_l;
    let lhs = single.powi(spec.a as i32);
    let g1 = spec.gamma1() as f64;
    let scaled = sigma_plus.map(|z| z / C64::new(0.0, g1 * PI));
    let eig = nalgebra::Schur::new(scaled).eigenvalues().ok_or_else(|| Error::Internal("Schur failed".into()))?;
    let p = -(spec.a as f64) / g1;
    let rhs: C64 = eig.iter().map(|z| z.powf(p)).product();
    Ok((lhs, rhs))
}

/// b̃ and ã of the dimension reduction.
pub fn reduction_dims(spec: &WishartSpec) -> Result<(usize, usize)> {
    let bt = if spec.beta == 4 && spec.b % 2 == 1 { 1 } else { 0 };
    let drop = 2 * (spec.b - bt);
    if drop % spec.beta as usize != 0 || drop / spec.beta as usize > spec.a {
        return Err(Error::Precondition(format!("ã = a − 2(b − b̃)/β is negative for {spec:?}")));
    }
    Ok((spec.a - drop / spec.beta as usize, bt))
}

/// Full V̂ integral against C times the reduced Ṽ integral.
pub fn corollary2_check(spec: &WishartSpec, f: &Superfunction, q: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let (at, bt) = reduction_dims(spec)?;
    let red = WishartSpec::new(spec.beta, at, bt, spec.c, spec.d)?;
    let g1 = spec.gamma1() as f64;
    let g2 = spec.gamma2() as f64;
    let cst = (-g1 / 2.0).powi(((spec.b - bt) * spec.c) as i32) * (g2 / 2.0).powi(((spec.a - at) * spec.d) as i32);
    let lhs = lhs_integral(spec, f, q)?;
    let rhs = lhs_integral(&red, f, q)?;
    Ok(VerificationReport::new("corollary2", format!("ã={at} b̃={bt}"), spec_echo(spec, 0), lhs.value, rhs.value * cst, tol)
        .relative_only(1e-14))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(beta: u8, a: usize, b: usize, c: usize, d: usize) -> WishartSpec {
        WishartSpec::new(beta, a, b, c, d).unwrap()
    }

    #[test]
    fn smallest_unitary_lhs() {
        let v = lhs_integral(&spec(2, 1, 0, 1, 1), &Superfunction::one(), &QuadratureSpec::default()).unwrap();
        assert!((v.value - C64::new(-0.5, 0.0)).norm() < 1e-12, "{:?}", v);
    }

    #[test]
    fn calibration_passes() {
        for (a, d) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let r = calibration_check(&spec(2, a, 0, 0, d)).unwrap();
            assert!(r.passed && r.abs_error == 0.0, "{}", r.line());
        }
    }

    #[test]
    fn zero_function_gives_zero() {
        let v = lhs_integral(&spec(2, 1, 0, 1, 1), &Superfunction::zero(), &QuadratureSpec::default()).unwrap();
        assert_eq!(v.value, C64::zero());
    }

    #[test]
    fn gaussian_plane_integral() {
        let s = DMatrix::from_element(1, 1, C64::new(0.0, 1.0));
        let (l, r) = gaussian_vector_integral(&spec(2, 1, 0, 1, 0), &s, 8).unwrap();
        assert!((l - C64::new(PI, 0.0)).norm() < 1e-12 && (r - C64::new(PI, 0.0)).norm() < 1e-12);
        let (l, _) = gaussian_vector_integral(&spec(2, 2, 0, 1, 0), &s, 8).unwrap();
        assert!((l - C64::new(PI * PI, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn reduction_dimensions() {
        assert_eq!(reduction_dims(&spec(2, 1, 1, 1, 0)).unwrap(), (0, 0));
        assert_eq!(reduction_dims(&spec(4, 1, 1, 1, 1)).unwrap(), (1, 1));
        assert!(reduction_dims(&spec(2, 0, 1, 1, 0)).is_err());
    }
}
