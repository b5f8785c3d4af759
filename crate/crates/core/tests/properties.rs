use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supercalc::ensembles::{build_b, build_k, build_v, OrdinarySample, WishartSpec};
use supercalc::identities::{constants_check, s_operator_failures, sekiguchi_apply, split_check, vandermonde, Poly};
use supercalc::report::{ReportFile, VerificationReport};
use supercalc::scalar::C64;
use supercalc::{GrassmannElement, SuperMatrix, SuperShape};

type Q = BigRational;
type GQ = GrassmannElement<Q>;

const N: u32 = 4;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn element(rng: &mut ChaCha8Rng, parity: Option<bool>, body: i64) -> GQ {
    let mut terms = Vec::new();
    for m in (body != 0) as u64..1 << N {
        let odd = m.count_ones() % 2 == 1;
        if parity.is_some_and(|p| p != odd) || !rng.random_bool(0.5) {
            continue;
        }
        terms.push((m, Complex::new(q(rng.random_range(-3..=3), rng.random_range(1..=2)), q(rng.random_range(-3..=3), 2))));
    }
    if body != 0 {
        terms.push((0, Complex::new(q(body, 1), Q::zero())));
    }
    GQ::from_terms(N, terms).unwrap()
}

/// Even supermatrix; `shift` on the diagonal keeps both diagonal blocks invertible.
fn supermatrix(rng: &mut ChaCha8Rng, b: usize, f: usize, shift: i64) -> SuperMatrix<Q> {
    SuperMatrix::from_fn(SuperShape::square(b, f), N, |i, j| {
        let odd = (i < b) != (j < b);
        let mut x = element(rng, Some(odd), 0);
        if i == j {
            x = x.try_add(&GQ::real(N, q(shift + i as i64, 1))).unwrap();
        }
        x
    })
}

fn power_strs(a: &SuperMatrix<Q>, m_max: u32) -> Vec<GQ> {
    let mut p = a.clone();
    let mut out = vec![p.str().unwrap()];
    for _ in 1..m_max {
        p = p.try_mul(a).unwrap();
        out.push(p.str().unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grassmann_ring_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (element(&mut rng, None, 0), element(&mut rng, None, 0), element(&mut rng, None, 1));
        prop_assert_eq!(x.try_mul(&y).unwrap().try_mul(&z).unwrap(), x.try_mul(&y.try_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.try_mul(&y.try_add(&z).unwrap()).unwrap(), x.try_mul(&y).unwrap().try_add(&x.try_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(z.try_mul(&z.inverse().unwrap()).unwrap(), GQ::one(N));
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>(), px in any::<bool>(), py in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (element(&mut rng, Some(px), 0), element(&mut rng, Some(py), 0));
        let yx = y.try_mul(&x).unwrap();
        let expected = if px && py { yx.neg() } else { yx };
        prop_assert_eq!(x.try_mul(&y).unwrap(), expected);
        if px {
            prop_assert!(x.try_mul(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn supertrace_is_cyclic(seed in any::<u64>(), b in 0usize..3, f in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (supermatrix(&mut rng, b, f, 0), supermatrix(&mut rng, b, f, 0));
        prop_assert_eq!(x.try_mul(&y).unwrap().str().unwrap(), y.try_mul(&x).unwrap().str().unwrap());
    }

    #[test]
    fn superdeterminant_is_multiplicative(seed in any::<u64>(), b in 0usize..3, f in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (supermatrix(&mut rng, b, f, 10), supermatrix(&mut rng, b, f, 10));
        let lhs = x.try_mul(&y).unwrap().sdet().unwrap();
        prop_assert_eq!(&lhs, &x.sdet().unwrap().try_mul(&y.sdet().unwrap()).unwrap());
        prop_assert_eq!(x.sdet().unwrap(), x.sdet_bb().unwrap());
    }

    #[test]
    fn duality_is_exact(seed in any::<u64>(), beta in prop::sample::select(vec![1u8, 2, 4]), a in 1usize..3, b in 0usize..2, c in 1usize..3, d in 0usize..2) {
        let spec = WishartSpec::new(beta, a, b, c, d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..spec.real_dims()).map(|_| rng.random_range(-8i32..=8) as f64 / 4.0).collect();
        let v = build_v::<Q>(&spec, &OrdinarySample::new(&spec, coords).unwrap()).unwrap();
        let bm = build_b(&spec, &v).unwrap();
        let km = build_k(&spec, &v).unwrap();
        prop_assert_eq!(power_strs(&km, 3), power_strs(&bm, 3));
    }

    #[test]
    fn split_reconstructs(seed in any::<u64>(), beta in prop::sample::select(vec![1u8, 2, 4]), a in 1usize..3, b in 0usize..3, c in 1usize..3, d in 0usize..3) {
        let spec = WishartSpec::new(beta, a, b, c, d).unwrap();
        prop_assert!(split_check(&spec, 2, seed).unwrap().passed);
    }

    #[test]
    fn s_operator_relations(seed in any::<u64>()) {
        prop_assert_eq!(s_operator_failures(3, seed).unwrap(), [0; 5]);
    }

    #[test]
    fn constant_ratio_matches(beta in prop::sample::select(vec![1u8, 2, 4]), c in 0usize..4, extra in 0usize..4, d in 0usize..4) {
        let r = constants_check(beta, c + extra, c, d, 1e-12).unwrap();
        prop_assert!(r.passed, "{}", r.line());
    }

    #[test]
    fn vandermonde_is_alternating(x in prop::collection::vec(-3.0f64..3.0, 3), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let v = vandermonde::<f64>(3);
        let pt: Vec<C64> = x.iter().map(|&t| C64::new(t, 0.0)).collect();
        let mut sw = pt.clone();
        sw.swap(i, j);
        prop_assert!((v.evaluate(&pt) + v.evaluate(&sw)).norm() < 1e-9);
    }

    #[test]
    fn sekiguchi_preserves_symmetry_and_degree(parts in prop::collection::vec(0u32..3, 2), alpha in prop::sample::select(vec![q(1, 2), q(1, 1), q(2, 1)])) {
        let mut partition = parts;
        partition.sort_unstable_by(|a, b| b.cmp(a));
        let p = Poly::<Q>::monomial_symmetric(2, &partition).unwrap();
        let dp = sekiguchi_apply(&p, &alpha).unwrap();
        prop_assert!(dp.is_symmetric());
        // D lowers the degree by the number of variables
        let deg = partition.iter().sum::<u32>() as i32;
        prop_assert!(dp.terms().all(|(e, _)| e.iter().sum::<i32>() == deg - 2));
        let doubled = sekiguchi_apply(&p.scale(&Complex::new(q(2, 1), Q::zero())), &alpha).unwrap();
        prop_assert_eq!(doubled, dp.scale(&Complex::new(q(2, 1), Q::zero())));
    }

    #[test]
    fn report_json_roundtrip(lhs in -1e3f64..1e3, rhs in -1e3f64..1e3, seed in any::<u64>()) {
        let spec = WishartSpec::new(2, 1, 0, 1, 1).unwrap();
        let echo = supercalc::integrator::spec_echo(&spec, 0);
        let r = VerificationReport::new("theorem1", "F=one", echo, C64::new(lhs, 0.0), C64::new(rhs, 0.0), 1e-8).with_seed(seed);
        let file = ReportFile::new(seed, vec![r]);
        let back: ReportFile = serde_json::from_str(&file.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), file.to_json());
        prop_assert_eq!(back.summary.pass + back.summary.fail, 1);
    }
}

#[test]
fn one_is_neutral() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = element(&mut rng, None, 0);
    assert_eq!(x.try_mul(&GQ::one(N)).unwrap(), x);
    assert!(Q::one() == q(2, 2));
}
