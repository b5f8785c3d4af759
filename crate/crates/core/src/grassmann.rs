//! Finite complex Grassmann algebra with sparse bitset terms.
//!
//! Generators come in conjugate pairs: generator `2k` is ζ_k and `2k+1` is ζ_k*.
//! Conjugation is antilinear, order preserving on products, and satisfies
//! (ζ*)* = −ζ. Berezin integration strips a generator from the right end of a
//! monomial; ∫ ζ dζ = ν = (2π)^{-1/2}.

use crate::error::{Error, Result};
use crate::scalar::{Real, C64};
use num_complex::Complex;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_GENERATORS: u32 = 64;

/// Berezin normalization ν.
pub fn nu() -> f64 {
    (2.0 * std::f64::consts::PI).powf(-0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement<T: Real = f64> {
    n: u32,
    terms: Vec<(u64, Complex<T>)>,
}

/// Sign of moving monomial `b` past monomial `a` into canonical order (true = negative).
#[inline]
pub fn merge_sign(a: u64, b: u64) -> bool {
    let mut cnt = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        cnt += ((a >> j) >> 1).count_ones();
        bb &= bb - 1;
    }
    cnt & 1 == 1
}

fn mask_ok(n: u32, m: u64) -> bool {
    n >= 64 || m >> n == 0
}

/// Sparse accumulator used by products and matrix multiplication.
pub(crate) struct Acc<T: Real> {
    n: u32,
    dense: Option<Vec<Complex<T>>>,
    touched: Vec<u64>,
    pairs: Vec<(u64, Complex<T>)>,
}

impl<T: Real> Acc<T> {
    pub(crate) fn new(n: u32, expected: usize) -> Self {
        let dense = if n <= 16 && expected > 2048 {
            Some(vec![Complex::<T>::zero(); 1usize << n])
        } else {
            None
        };
        Acc { n, dense, touched: Vec::new(), pairs: Vec::with_capacity(expected.min(1 << 16)) }
    }

    #[inline]
    fn push(&mut self, m: u64, c: Complex<T>) {
        match &mut self.dense {
            Some(d) => {
                let slot = &mut d[m as usize];
                if slot.is_zero() {
                    self.touched.push(m);
                }
                *slot = slot.clone() + c;
            }
            None => self.pairs.push((m, c)),
        }
    }

    pub(crate) fn add_product(&mut self, x: &GrassmannElement<T>, y: &GrassmannElement<T>) {
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                let c = if merge_sign(*a, *b) { -c } else { c };
                self.push(a | b, c);
            }
        }
    }

    pub(crate) fn finish(mut self) -> GrassmannElement<T> {
        match self.dense.take() {
            Some(mut d) => {
                self.touched.sort_unstable();
                self.touched.dedup();
                let mut terms = Vec::with_capacity(self.touched.len());
                for m in self.touched {
                    let c = std::mem::replace(&mut d[m as usize], Complex::zero());
                    if !c.is_zero() {
                        terms.push((m, c));
                    }
                }
                GrassmannElement { n: self.n, terms }
            }
            None => GrassmannElement::from_unsorted(self.n, self.pairs),
        }
    }
}

impl<T: Real> GrassmannElement<T> {
    pub fn zero(n: u32) -> Self {
        GrassmannElement { n, terms: Vec::new() }
    }

    pub fn one(n: u32) -> Self {
        Self::scalar(n, Complex::one())
    }

    pub fn scalar(n: u32, c: Complex<T>) -> Self {
        if c.is_zero() {
            Self::zero(n)
        } else {
            GrassmannElement { n, terms: vec![(0, c)] }
        }
    }

    pub fn real(n: u32, x: T) -> Self {
        Self::scalar(n, Complex::new(x, T::zero()))
    }

    pub fn generator(n: u32, i: u32) -> Result<Self> {
        if i >= n {
            return Err(Error::Dimension(format!("generator {i} out of range for {n} generators")));
        }
        Ok(GrassmannElement { n, terms: vec![(1u64 << i, Complex::one())] })
    }

    /// Builds an element from (mask, coefficient) pairs, merging duplicates and dropping zeros.
    pub fn from_terms(n: u32, terms: impl IntoIterator<Item = (u64, Complex<T>)>) -> Result<Self> {
        if n > MAX_GENERATORS {
            return Err(Error::Dimension(format!("at most {MAX_GENERATORS} generators")));
        }
        let v: Vec<_> = terms.into_iter().collect();
        if v.iter().any(|(m, _)| !mask_ok(n, *m)) {
            return Err(Error::Dimension("term references a generator out of range".into()));
        }
        Ok(Self::from_unsorted(n, v))
    }

    fn from_unsorted(n: u32, mut v: Vec<(u64, Complex<T>)>) -> Self {
        v.sort_by_key(|(m, _)| *m);
        let mut terms: Vec<(u64, Complex<T>)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.clone() + c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        GrassmannElement { n, terms }
    }

    pub fn generator_count(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &[(u64, Complex<T>)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> Complex<T> {
        match self.terms.binary_search_by_key(&mask, |(m, _)| *m) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Complex::zero(),
        }
    }

    pub fn body(&self) -> Complex<T> {
        self.coefficient(0)
    }

    pub fn soul(&self) -> Self {
        GrassmannElement { n: self.n, terms: self.terms.iter().filter(|(m, _)| *m != 0).cloned().collect() }
    }

    pub fn parity(&self) -> Parity {
        let even = self.terms.iter().all(|(m, _)| m.count_ones() % 2 == 0);
        let odd = self.terms.iter().all(|(m, _)| m.count_ones() % 2 == 1);
        match (even, odd) {
            (true, _) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_odd(&self) -> bool {
        self.is_zero() || self.parity() == Parity::Odd
    }

    /// Same element viewed inside a larger algebra.
    pub fn embed(&self, n: u32) -> Result<Self> {
        if n < self.n && self.terms.iter().any(|(m, _)| !mask_ok(n, *m)) {
            return Err(Error::Dimension("cannot shrink algebra below used generators".into()));
        }
        Ok(GrassmannElement { n, terms: self.terms.clone() })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "generator counts differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                out.push(other.terms[j].clone());
                j += 1;
            } else {
                let c = self.terms[i].1.clone() + other.terms[j].1.clone();
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(GrassmannElement { n: self.n, terms: out })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc = Acc::new(self.n, self.terms.len() * other.terms.len());
        acc.add_product(self, other);
        Ok(acc.finish())
    }

    pub fn neg(&self) -> Self {
        GrassmannElement { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        GrassmannElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, c.clone() * s.clone())).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(&Complex::new(s, T::zero()))
    }

    /// Antilinear conjugation with ζ ↦ ζ*, ζ* ↦ −ζ and (xy)* = x* y*.
    pub fn conj(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut seq: Vec<u32> = Vec::with_capacity(m.count_ones() as usize);
            let mut neg = false;
            let mut mm = *m;
            while mm != 0 {
                let i = mm.trailing_zeros();
                mm &= mm - 1;
                let p = i ^ 1;
                if p >= self.n {
                    return Err(Error::Config(format!("generator {i} has no conjugate partner")));
                }
                if i % 2 == 1 {
                    neg = !neg;
                }
                seq.push(p);
            }
            let mut inv = 0usize;
            for a in 0..seq.len() {
                for b in a + 1..seq.len() {
                    if seq[a] > seq[b] {
                        inv += 1;
                    }
                }
            }
            if inv % 2 == 1 {
                neg = !neg;
            }
            let nm = seq.iter().fold(0u64, |acc, p| acc | (1u64 << p));
            let cc = c.conj();
            out.push((nm, if neg { -cc } else { cc }));
        }
        Ok(Self::from_unsorted(self.n, out))
    }

    /// Berezin integral over generator `g` with unit normalization ∫ g dg = 1.
    pub fn berezin_raw(&self, g: u32) -> Result<Self> {
        if g >= self.n {
            return Err(Error::Dimension(format!("generator {g} out of range")));
        }
        let bit = 1u64 << g;
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let above = (m >> g >> 1).count_ones();
            let c = if above % 2 == 1 { -c.clone() } else { c.clone() };
            out.push((m & !bit, c));
        }
        Ok(GrassmannElement { n: self.n, terms: out })
    }

    /// Iterated raw integration over conjugate pairs, ∫ f ∏(dζ dζ*) with dζ innermost.
    pub fn berezin_pairs_raw(&self, pairs: &[u32]) -> Result<Self> {
        let mut x = self.clone();
        for &k in pairs {
            x = x.berezin_raw(2 * k)?.berezin_raw(2 * k + 1)?;
        }
        Ok(x)
    }

    /// Raw integral over all generator pairs, returned as a scalar.
    pub fn integrate_all_raw(&self) -> Result<Complex<T>> {
        if self.n % 2 == 1 {
            return Err(Error::Config("odd generator count has an unpaired generator".into()));
        }
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let top = GrassmannElement { n: self.n, terms: vec![(full, self.coefficient(full))] };
        let pairs: Vec<u32> = (0..self.n / 2).collect();
        Ok(top.berezin_pairs_raw(&pairs)?.body())
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    /// exp of an even element: exp(body) Σ soul^k / k!, which terminates.
    pub fn exp_even(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::Parity("exp requires an even element".into()));
        }
        let b = self.body();
        let eb = T::cexp(&b).ok_or_else(|| Error::Config("exp of the body is not representable".into()))?;
        let s = self.soul();
        let mut out = Self::one(self.n);
        let mut p = Self::one(self.n);
        let mut k = 1i64;
        loop {
            p = p.try_mul(&s)?.scale_real(T::one() / T::from_i64(k));
            if p.is_zero() {
                break;
            }
            out = out.try_add(&p)?;
            k += 1;
        }
        Ok(out.scale(&eb))
    }

    /// Inverse of an element with invertible body: b^{-1} Σ (−s/b)^k.
    pub fn inverse(&self) -> Result<Self> {
        let b = self.body();
        if b.is_zero() {
            return Err(Error::Singular("element has zero body".into()));
        }
        let binv = Complex::<T>::one() / b;
        let t = self.soul().scale(&(-binv.clone()));
        let mut out = Self::one(self.n);
        let mut p = Self::one(self.n);
        loop {
            p = p.try_mul(&t)?;
            if p.is_zero() {
                break;
            }
            out = out.try_add(&p)?;
        }
        Ok(out.scale(&binv))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| crate::scalar::norm_f64(c)).fold(0.0, f64::max)
    }

    /// Largest coefficient deviation between two elements.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        match self.try_sub(other) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }
}

impl GrassmannElement<f64> {
    /// Berezin integral over generator `g` with ∫ g dg = ν.
    pub fn berezin(&self, g: u32) -> Result<Self> {
        Ok(self.berezin_raw(g)?.scale_real(nu()))
    }

    /// ∫ f ∏(dζ_k dζ_k*) over the listed pairs with ν normalization.
    pub fn berezin_pairs(&self, pairs: &[u32]) -> Result<Self> {
        let x = self.berezin_pairs_raw(pairs)?;
        Ok(x.scale_real(nu().powi(2 * pairs.len() as i32)))
    }

    /// Integral over every generator pair, ν-normalized.
    pub fn integrate_all(&self) -> Result<C64> {
        Ok(self.integrate_all_raw()? * nu().powi(self.n as i32))
    }

    /// x^κ for an even element with nonzero body; `body_pow` fixes the branch of body^κ.
    pub fn pow_even(&self, kappa: f64, body_pow: C64) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::Parity("power requires an even element".into()));
        }
        let b = self.body();
        if b.norm() == 0.0 {
            return Err(Error::Singular("power of an element with zero body".into()));
        }
        let t = self.soul().scale(&(C64::one() / b));
        let mut out = Self::one(self.n);
        let mut p = Self::one(self.n);
        let mut coef = 1.0;
        let mut k = 0.0;
        loop {
            p = p.try_mul(&t)?;
            if p.is_zero() {
                break;
            }
            coef *= (kappa - k) / (k + 1.0);
            k += 1.0;
            out = out.try_add(&p.scale_real(coef))?;
        }
        Ok(out.scale(&body_pow))
    }
}

impl<T: Real> fmt::Display for GrassmannElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", crate::scalar::to_c64(c))?;
            let mut mm = *m;
            while mm != 0 {
                let i = mm.trailing_zeros();
                mm &= mm - 1;
                if i % 2 == 0 {
                    write!(f, "·θ{}", i / 2)?;
                } else {
                    write!(f, "·θ{}*", i / 2)?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl<'a, T: Real> std::ops::$tr<&'a GrassmannElement<T>> for &'a GrassmannElement<T> {
            type Output = GrassmannElement<T>;
            fn $m(self, rhs: &'a GrassmannElement<T>) -> GrassmannElement<T> {
                self.$call(rhs).expect("generator counts must agree")
            }
        }
        impl<T: Real> std::ops::$tr for GrassmannElement<T> {
            type Output = GrassmannElement<T>;
            fn $m(self, rhs: GrassmannElement<T>) -> GrassmannElement<T> {
                self.$call(&rhs).expect("generator counts must agree")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<T: Real> std::ops::Neg for GrassmannElement<T> {
    type Output = GrassmannElement<T>;
    fn neg(self) -> GrassmannElement<T> {
        GrassmannElement::neg(&self)
    }
}

/// Collects a map of masks to coefficients; used by tests and bindings.
pub fn from_map<T: Real>(n: u32, map: BTreeMap<u64, Complex<T>>) -> Result<GrassmannElement<T>> {
    GrassmannElement::from_terms(n, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    type G = GrassmannElement<f64>;

    fn gen(n: u32, i: u32) -> G {
        G::generator(n, i).unwrap()
    }

    #[test]
    fn nilpotent_and_anticommuting() {
        let (z1, z2) = (gen(4, 0), gen(4, 2));
        assert!((&z1 * &z1).is_zero());
        assert_eq!(&z1 * &z2, (&z2 * &z1).neg());
    }

    #[test]
    fn expansion_of_product() {
        let one = G::one(4);
        let (z1, z2) = (gen(4, 0), gen(4, 2));
        let p = &(&one + &z1) * &(&one + &z2);
        let want = &(&(&one + &z1) + &z2) + &(&z1 * &z2);
        assert_eq!(p, want);
    }

    #[test]
    fn conjugation_rules() {
        let z = gen(2, 0);
        let zs = gen(2, 1);
        assert_eq!(z.conj().unwrap(), zs);
        assert_eq!(z.conj().unwrap().conj().unwrap(), z.neg());
        let c = G::scalar(2, C64::new(1.0, 2.0));
        assert_eq!(c.conj().unwrap(), G::scalar(2, C64::new(1.0, -2.0)));
        // ζζ* is real under this convention
        let q = &z * &zs;
        assert_eq!(q.conj().unwrap(), q);
    }

    #[test]
    fn unpaired_generator_is_rejected() {
        let x = gen(3, 2);
        assert!(x.conj().is_err());
    }

    #[test]
    fn berezin_basics() {
        let z = gen(2, 0);
        assert!(G::one(2).berezin(0).unwrap().is_zero());
        let v = z.berezin(0).unwrap();
        assert!((v.body() - C64::new(nu(), 0.0)).norm() < 1e-15);
        let a = G::scalar(2, C64::new(3.0, 0.0));
        let b = C64::new(0.5, 1.0);
        let x = &a + &z.scale(&b);
        assert!((x.berezin(0).unwrap().body() - b * nu()).norm() < 1e-15);
    }

    #[test]
    fn pair_integral_sign() {
        // ∫ ζζ* dζ dζ* = −ν²
        let q = &gen(2, 0) * &gen(2, 1);
        let v = q.berezin_pairs(&[0]).unwrap().body();
        assert!((v + C64::new(nu() * nu(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn exp_of_even() {
        let q = &gen(4, 0) * &gen(4, 1);
        let e = q.exp_even().unwrap();
        assert_eq!(e, &G::one(4) + &q);
        let c = C64::new(0.3, 0.0);
        let e2 = (&G::scalar(4, c) + &q).exp_even().unwrap();
        let want = (&G::one(4) + &q).scale(&c.exp());
        assert!(e2.max_deviation(&want) < 1e-15);
        assert!(gen(4, 0).exp_even().is_err());
    }

    #[test]
    fn body_soul_parity() {
        let q = &gen(4, 0) * &gen(4, 2);
        let x = &G::scalar(4, C64::new(3.0, 0.0)) + &q;
        assert_eq!(x.body(), C64::new(3.0, 0.0));
        assert_eq!(x.soul(), q);
        assert_eq!(gen(4, 0).parity(), Parity::Odd);
        assert_eq!((&gen(4, 0) + &G::one(4)).parity(), Parity::Mixed);
    }

    #[test]
    fn mismatched_counts_error() {
        assert!(gen(2, 0).try_mul(&gen(4, 0)).is_err());
    }
}
