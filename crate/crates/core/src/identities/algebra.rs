//! Exact checks of the 𝔖 operator and of the split B = B₁ + 𝔖(B₂) on random rational supermatrices.

use crate::ensembles::{build_b, build_v, split_b, OrdinarySample, WishartSpec};
use crate::error::Result;
use crate::grassmann::GrassmannElement;
use crate::integrator::spec_echo;
use crate::report::{SpecEcho, VerificationReport};
use crate::scalar::C64;
use crate::supermatrix::{SuperMatrix, SuperShape};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;
type QMatrix = SuperMatrix<Q>;

const GENERATORS: u32 = 4;

fn small_rational<R: Rng>(rng: &mut R) -> Q {
    Q::new(BigInt::from(rng.random_range(-4i64..=4)), BigInt::from(rng.random_range(1i64..=3)))
}

fn random_element<R: Rng>(rng: &mut R, odd: bool, shift: i64) -> GrassmannElement<Q> {
    let mut terms: Vec<(u64, Complex<Q>)> = Vec::new();
    for m in 0u64..1 << GENERATORS {
        if (m.count_ones() % 2 == 1) != odd || (!(m == 0 && shift != 0) && !rng.random_bool(0.6)) {
            continue;
        }
        let mut c = Complex::new(small_rational(rng), small_rational(rng));
        if m == 0 {
            c.re += Q::from_integer(BigInt::from(shift));
        }
        terms.push((m, c));
    }
    GrassmannElement::from_terms(GENERATORS, terms).expect("masks within range")
}

/// Random supermatrix with even diagonal and odd off-diagonal blocks. A diagonal shift keeps
/// the bodies of both diagonal blocks invertible.
fn random_supermatrix<R: Rng>(rng: &mut R, shape: SuperShape, shift: i64) -> QMatrix {
    SuperMatrix::from_fn(shape, GENERATORS, |i, j| {
        let bi = i < shape.boson_rows;
        let bj = j < shape.boson_cols;
        random_element(rng, bi != bj, if i == j { shift } else { 0 })
    })
}

fn random_shape<R: Rng>(rng: &mut R) -> (usize, usize) {
    (rng.random_range(1..=2), rng.random_range(1..=2))
}

fn exact_report(id: &str, detail: &str, echo: SpecEcho, failures: usize, draws: usize, seed: u64) -> VerificationReport {
    let mut r = VerificationReport::with_errors(
        id,
        format!("{detail} draws={draws}"),
        echo,
        C64::new(failures as f64, 0.0),
        C64::new(0.0, 0.0),
        failures as f64,
        if failures == 0 { 0.0 } else { f64::INFINITY },
        0.0,
    )
    .with_seed(seed);
    r.passed = failures == 0;
    r
}

/// 𝔖(σ†) = 𝔖(σ)†, 𝔖(σ*) = 𝔖(σ)*, 𝔖²(σ) = −σ, 𝔖(σρ) = 𝔖(σ)𝔖(ρ) for ρ with vanishing
/// lower block row, and Sdet 𝔖(σ) = (−1)^{m₂} / Sdet σ.
/// Returns the number of draws violating each relation, in that order.
pub fn s_operator_failures(draws: usize, seed: u64) -> Result<[usize; 5]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = [0usize; 5];
    for _ in 0..draws {
        let (m1, m2) = random_shape(&mut rng);
        let (n1, n2) = random_shape(&mut rng);
        let sigma = random_supermatrix(&mut rng, SuperShape::new(m1, m2, n1, n2), 0);
        let s = sigma.s_operator();
        fails[0] += (sigma.adjoint()?.s_operator() != s.adjoint()?) as usize;
        fails[1] += (sigma.conj()?.s_operator() != s.conj()?) as usize;
        fails[2] += (s.s_operator() != sigma.map(|x| x.neg())) as usize;

        let (k1, k2) = random_shape(&mut rng);
        let full = random_supermatrix(&mut rng, SuperShape::new(n1, n2, k1, k2), 0);
        let rho = SuperMatrix::from_fn(full.shape(), GENERATORS, |i, j| {
            if i < n1 {
                full.get(i, j).clone()
            } else {
                GrassmannElement::zero(GENERATORS)
            }
        });
        fails[3] += (sigma.try_mul(&rho)?.s_operator() != s.try_mul(&rho.s_operator())?) as usize;

        let sq = random_supermatrix(&mut rng, SuperShape::square(m1, m2), 20);
        let sign = if m2 % 2 == 1 { -Q::one() } else { Q::one() };
        let lhs = sq.s_operator().sdet()?;
        let rhs = sq.sdet()?.inverse()?.scale(&Complex::new(sign, Q::zero()));
        fails[4] += (lhs != rhs) as usize;
    }
    Ok(fails)
}

pub fn s_operator_check(draws: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let fails = s_operator_failures(draws, seed)?;
    let echo = SpecEcho { beta: 2, a: 0, b: 0, c: 0, d: 0, e: 0 };
    let names = ["adjoint", "conjugate", "square", "product", "sdet"];
    Ok(names.iter().zip(fails).map(|(n, f)| exact_report("s_operator", n, echo.clone(), f, draws, seed)).collect())
}

/// B = B₁ + 𝔖(B₂) in exact arithmetic, for V built from random dyadic coordinates.
pub fn split_check(spec: &WishartSpec, draws: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..draws {
        // multiples of 1/8 convert to rationals without rounding
        let coords = (0..spec.real_dims()).map(|_| rng.random_range(-16i32..=16) as f64 / 8.0).collect();
        let x = OrdinarySample::new(spec, coords)?;
        let v = build_v::<Q>(spec, &x)?;
        let b = build_b(spec, &v)?;
        let (b1, b2) = split_b(spec, &v)?;
        if b1.try_add(&b2.s_operator())? != b {
            failures += 1;
        }
    }
    Ok(exact_report("split", "exact", spec_echo(spec, 0), failures, draws, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_relations() {
        assert_eq!(s_operator_failures(100, 3).unwrap(), [0; 5]);
    }

    #[test]
    fn wrong_sign_is_detected() {
        // Sdet 𝔖(σ) without (−1)^{m₂} fails for odd m₂
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sq = random_supermatrix(&mut rng, SuperShape::square(1, 1), 20);
        assert_ne!(sq.s_operator().sdet().unwrap(), sq.sdet().unwrap().inverse().unwrap());
    }

    #[test]
    fn split_reconstruction() {
        for beta in [1u8, 2, 4] {
            for (a, b, c, d) in [(1, 1, 1, 1), (2, 1, 1, 2), (1, 2, 2, 1)] {
                let s = WishartSpec::new(beta, a, b, c, d).unwrap();
                let r = split_check(&s, 20, 9).unwrap();
                assert!(r.passed, "β={beta} {:?}", (a, b, c, d));
            }
        }
    }
}
