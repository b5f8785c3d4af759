//! Registry of verification checks shared by the command line and the acceptance suite.

use crate::ensembles::{build_v, duality_check, OrdinarySample, WishartSpec};
use crate::error::{Error, Result};
use crate::identities::{
    bessel_eigen_check_d1, bessel_eigen_check_d2, circular_selberg_check, circular_signed_check, constants_check,
    identity61_grid, ingham_siegel_extrapolated, laguerre_selberg_check, rhs_hubbard_stratonovich, rhs_superbosonization,
    s_operator_check, split_check, theorem4_check, HsQuadrature, HsRoute, RhsQuadrature,
};
use crate::integrator::{calibration_check, corollary2_check, gaussian_vector_integral, lhs_integral, spec_echo, QuadratureSpec, Superfunction};
use crate::report::VerificationReport;
use crate::scalar::C64;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Identity ids accepted by [`run_check`].
pub const IDENTITY_IDS: [&str; 14] = [
    "duality",
    "corollary2",
    "theorem1",
    "theorem2",
    "equivalence61",
    "theorem4",
    "ingham_siegel",
    "circular",
    "laguerre_selberg",
    "bessel_eigen",
    "calibration",
    "constants",
    "gaussian_vector",
    "s_operator",
];

/// Parameters of a single check. Fields a check does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    pub beta: u8,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
    pub m_max: u32,
    /// one, str, str2 or exp
    pub f: String,
    pub eps: f64,
    pub psi: f64,
    /// Quadrature nodes per dimension; 0 picks the default of the check.
    pub nodes: usize,
    /// Random draws for sampled checks.
    pub samples: usize,
    pub seed: u64,
    /// Overrides the default tolerance of the check.
    pub tol: Option<f64>,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            beta: 2,
            a: 1,
            b: 0,
            c: 1,
            d: 1,
            e: 0,
            m_max: 4,
            f: "one".into(),
            eps: 1.0,
            psi: 0.0,
            nodes: 0,
            samples: 100,
            seed: 7,
            tol: None,
        }
    }
}

impl CheckParams {
    fn spec(&self) -> Result<WishartSpec> {
        WishartSpec::new(self.beta, self.a, self.b, self.c, self.d)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn nodes_or(&self, default: usize) -> usize {
        if self.nodes == 0 {
            default
        } else {
            self.nodes
        }
    }

    fn superfunction(&self) -> Result<Superfunction> {
        Superfunction::from_name(&self.f)
    }

    fn quadrature(&self) -> QuadratureSpec {
        let mut q = QuadratureSpec { epsilon: self.eps, wick_angle: self.psi, seed: self.seed, ..QuadratureSpec::default() };
        if self.nodes > 0 {
            q.nodes_per_dim = self.nodes;
        }
        q
    }

    fn beta_tilde(&self) -> u8 {
        4 / self.beta
    }
}

fn duality(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let spec = p.spec()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut worst = 0.0f64;
    let mut worst_pair = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for _ in 0..p.samples.max(1) {
        let x = OrdinarySample::random(&spec, &mut rng);
        let v = build_v::<f64>(&spec, &x)?;
        for e in duality_check(&spec, &v, p.m_max)? {
            let rel = e.deviation / e.scale;
            if rel >= worst {
                worst = rel;
                worst_pair = (e.lhs.body(), e.rhs.body());
            }
        }
    }
    let detail = format!("m<={} draws={}", p.m_max, p.samples.max(1));
    let r = VerificationReport::with_errors("duality", detail, spec_echo(&spec, 0), worst_pair.0, worst_pair.1, worst, worst, p.tol(1e-12));
    Ok(vec![r.with_seed(p.seed)])
}

fn theorem1(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let spec = p.spec()?;
    let f = p.superfunction()?;
    let q = p.quadrature();
    let lhs = lhs_integral(&spec, &f, &q)?.value;
    let rhs = rhs_superbosonization(&spec, &f, p.eps, &RhsQuadrature::default())?;
    Ok(vec![VerificationReport::new("theorem1", format!("F={}", p.f), spec_echo(&spec, 0), lhs, rhs, p.tol(2e-4)).relative_only(1e-12)])
}

fn theorem2(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let spec = p.spec()?;
    let f = p.superfunction()?;
    let q = p.quadrature();
    let tol = p.tol(if spec.beta == 4 { 1e-3 } else { 2e-4 });
    let lhs = lhs_integral(&spec, &f, &q)?.value;
    let sb = rhs_superbosonization(&spec, &f, p.eps, &RhsQuadrature::default())?;
    let route = if spec.beta == 4 { HsRoute::Operator } else { HsRoute::DeltaDerivatives };
    let hs = rhs_hubbard_stratonovich(&spec, &f, p.eps, route, &HsQuadrature::default())?;
    let echo = spec_echo(&spec, 0);
    Ok(vec![
        VerificationReport::new("theorem2", format!("F={} hs-lhs", p.f), echo, hs, lhs, tol).relative_only(1e-12),
        VerificationReport::new("theorem2", format!("F={} hs-sb", p.f), echo, hs, sb, tol).relative_only(1e-12),
    ])
}

fn theorem4(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let spec = p.spec()?;
    let f = p.superfunction()?;
    let mut r = theorem4_check(&spec, p.e, &f, &p.quadrature(), p.tol(1e-3))?;
    r.detail = format!("F={} {}", p.f, r.detail);
    Ok(vec![r])
}

fn equivalence61(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let spec = WishartSpec::new(p.beta, p.a, 0, p.c, p.d)?;
    identity61_grid(&spec, 6, p.tol(1e-8))
}

fn ingham(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    [0.5, 1.0, 2.0, -1.0].iter().map(|&rho| ingham_siegel_extrapolated(p.a, rho, p.tol(1e-4))).collect()
}

fn circular(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let nodes = p.nodes_or(256);
    let tol = p.tol(1e-10);
    Ok(vec![
        circular_selberg_check(p.d, p.beta_tilde(), p.a, nodes, tol)?,
        circular_signed_check(p.d, p.beta_tilde(), p.a, nodes, tol)?,
    ])
}

fn bessel(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let bt = p.beta_tilde();
    match p.d {
        1 => Ok(vec![bessel_eigen_check_d1(bt, &BigRational::new(BigInt::from(3), BigInt::from(7)), 12)?]),
        2 => Ok(vec![bessel_eigen_check_d2(bt, p.samples.clamp(1, 20), p.seed, p.tol(if bt == 2 { 1e-8 } else { 1e-5 }))?.with_seed(p.seed)]),
        d => Err(Error::Unsupported(format!("matrix Bessel functions need d ∈ {{1, 2}}, got {d}"))),
    }
}

/// H + ıM with H Hermitian and M positive definite.
fn sigma_plus(size: usize) -> Result<DMatrix<C64>> {
    let (h, m) = match size {
        1 => (vec![C64::new(0.3, 0.0)], vec![C64::new(1.1, 0.0)]),
        2 => (
            vec![C64::new(0.3, 0.0), C64::new(0.2, 0.1), C64::new(0.2, -0.1), C64::new(-0.4, 0.0)],
            vec![C64::new(1.2, 0.0), C64::new(0.3, -0.2), C64::new(0.3, 0.2), C64::new(0.9, 0.0)],
        ),
        _ => return Err(Error::Unsupported(format!("Gaussian vector check needs a block of size ≤ 2, got {size}"))),
    };
    let h = DMatrix::from_row_slice(size, size, &h);
    let m = DMatrix::from_row_slice(size, size, &m);
    Ok(h + m * C64::new(0.0, 1.0))
}

fn gaussian_vector(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let spec = WishartSpec::new(p.beta, p.a, 0, p.c, 0)?;
    let (lhs, rhs) = gaussian_vector_integral(&spec, &sigma_plus(spec.gamma2() * p.c)?, p.nodes_or(32))?;
    Ok(vec![VerificationReport::new("gaussian_vector", "sigma+ fixed", spec_echo(&spec, 0), lhs, rhs, p.tol(1e-8)).relative_only(0.0)])
}

fn s_operator(p: &CheckParams) -> Result<Vec<VerificationReport>> {
    let mut out = s_operator_check(p.samples, p.seed)?;
    out.push(split_check(&p.spec()?, p.samples, p.seed)?);
    Ok(out)
}

/// Runs one identity check.
pub fn run_check(id: &str, p: &CheckParams) -> Result<Vec<VerificationReport>> {
    match id {
        "duality" => duality(p),
        "corollary2" => Ok(vec![corollary2_check(&p.spec()?, &p.superfunction()?, &p.quadrature(), p.tol(1e-4))?]),
        "theorem1" => theorem1(p),
        "theorem2" => theorem2(p),
        "equivalence61" => equivalence61(p),
        "theorem4" => theorem4(p),
        "ingham_siegel" => ingham(p),
        "circular" => circular(p),
        "laguerre_selberg" => Ok(vec![laguerre_selberg_check(p.d, p.beta_tilde(), p.a, p.nodes_or(16), p.tol(1e-8))?]),
        "bessel_eigen" => bessel(p),
        "calibration" => Ok(vec![calibration_check(&WishartSpec::new(p.beta, p.a, 0, 0, p.d)?)?]),
        "constants" => Ok(vec![constants_check(p.beta, p.a, p.c, p.d, p.tol(1e-12))?]),
        "gaussian_vector" => gaussian_vector(p),
        "s_operator" => s_operator(p),
        _ => Err(Error::Config(format!("unknown identity '{id}'; expected one of {}", IDENTITY_IDS.join(", ")))),
    }
}

fn params(seed: u64, beta: u8, a: usize, b: usize, c: usize, d: usize) -> CheckParams {
    CheckParams { beta, a, b, c, d, seed, ..CheckParams::default() }
}

/// The (identity, parameters) pairs of one acceptance criterion, 1 ≤ k ≤ 14.
pub fn criterion_grid(k: u8, seed: u64) -> Vec<(&'static str, CheckParams)> {
    let mut g = Vec::new();
    match k {
        1 => {
            for beta in [1, 2, 4] {
                for a in 1..=2 {
                    for c in 1..=2 {
                        for b in 0..=2 {
                            for d in 0..=2 {
                                g.push(("duality", CheckParams { m_max: 4, samples: 100, ..params(seed, beta, a, b, c, d) }));
                            }
                        }
                    }
                }
            }
        }
        2 => {
            for a in 1..=2 {
                for d in 1..=2 {
                    g.push(("calibration", params(seed, 2, a, 0, 0, d)));
                }
            }
        }
        3 => {
            for a in 1..=2 {
                for c in 1..=2 {
                    g.push(("gaussian_vector", params(seed, 2, a, 0, c, 0)));
                }
            }
        }
        4 => {
            for a in 1..=3 {
                g.push(("ingham_siegel", params(seed, 2, a, 0, 1, 0)));
            }
        }
        5 => {
            for beta in [1, 2, 4] {
                for d in 1..=2 {
                    for a in 1..=4 {
                        g.push(("circular", params(seed, beta, a, 0, 0, d)));
                    }
                }
            }
        }
        6 => {
            for beta in [1, 2, 4] {
                for d in 1..=3 {
                    for xi in 0..=2 {
                        g.push(("laguerre_selberg", params(seed, beta, xi, 0, 0, d)));
                    }
                }
            }
        }
        7 => {
            for beta in [1, 2, 4] {
                for d in 1..=2 {
                    g.push(("bessel_eigen", CheckParams { samples: 20, ..params(seed, beta, 1, 0, 0, d) }));
                }
            }
        }
        8 => {
            for beta in [1, 2, 4] {
                for d in 1..=2 {
                    for amc in 0..=3 {
                        g.push(("equivalence61", params(seed, beta, 1 + amc, 0, 1, d)));
                    }
                }
            }
        }
        9 => {
            for beta in [1, 2, 4] {
                for d in 0..=2 {
                    for c in 1..=2 {
                        for amc in 0..=3 {
                            g.push(("constants", params(seed, beta, c + amc, 0, c, d)));
                        }
                    }
                }
            }
        }
        10 | 11 => {
            let id = if k == 10 { "theorem1" } else { "theorem2" };
            for (a, c, d) in [(1, 1, 1), (2, 1, 1), (2, 2, 1)] {
                for f in ["one", "str", "str2"] {
                    g.push((id, CheckParams { f: f.into(), ..params(seed, 2, a, 0, c, d) }));
                }
            }
            if k == 11 {
                g.push(("theorem2", params(seed, 4, 1, 0, 1, 1)));
            }
        }
        12 => {
            for a in 1..=2 {
                g.push(("corollary2", CheckParams { f: "exp".into(), eps: 0.0, ..params(seed, 2, a, 1, 1, 0) }));
            }
        }
        13 => {
            for beta in [1, 2, 4] {
                g.push(("s_operator", params(seed, beta, 2, 1, 1, 2)));
            }
        }
        14 => {
            for f in ["one", "str", "str2"] {
                g.push(("theorem4", CheckParams { e: 1, psi: PI, f: f.into(), ..params(seed, 2, 1, 0, 2, 1) }));
            }
        }
        _ => {}
    }
    g
}

/// Runs a list of checks in parallel; the result order follows the input.
pub fn run_grid(grid: &[(&str, CheckParams)]) -> Result<Vec<VerificationReport>> {
    let per: Vec<Vec<VerificationReport>> = grid.par_iter().map(|(id, p)| run_check(id, p)).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// All acceptance checks of criteria 1–14.
pub fn full_grid(seed: u64) -> Vec<(&'static str, CheckParams)> {
    (1..=14).flat_map(|k| criterion_grid(k, seed)).collect()
}
