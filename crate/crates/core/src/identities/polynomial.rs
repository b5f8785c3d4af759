//! Sparse Laurent polynomials in a few commuting variables, and the
//! Sekiguchi-type operator acting on symmetric polynomials.

use crate::error::{Error, Result};
use crate::scalar::{cint, Real};
use num_complex::Complex;
use num_traits::Zero;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Real> {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Complex<T>>,
}

/// Symmetric polynomials carry no extra structure; symmetry holds by construction.
pub type SymmetricPolynomial<T> = Poly<T>;

impl<T: Real> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Complex<T>) -> Self {
        Self::monomial(nvars, c, vec![0; nvars])
    }

    pub fn monomial(nvars: usize, c: Complex<T>, exps: Vec<i32>) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// The variable x_i.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, cint(1), e)
    }

    /// m_λ: sum of the distinct permutations of x^λ.
    pub fn monomial_symmetric(nvars: usize, partition: &[u32]) -> Result<Self> {
        if partition.len() > nvars {
            return Err(Error::Dimension(format!("partition {partition:?} has more than {nvars} parts")));
        }
        let mut base: Vec<i32> = partition.iter().map(|&k| k as i32).collect();
        base.resize(nvars, 0);
        base.sort_unstable();
        let mut p = Self::zero(nvars);
        // all distinct permutations, in lexicographic order
        loop {
            p.terms.insert(base.clone(), cint(1));
            if !next_permutation(&mut base) {
                break;
            }
        }
        Ok(p)
    }

    /// All partitions of total degree ≤ `max_degree` with at most `nvars` parts.
    pub fn monomial_symmetric_basis(nvars: usize, max_degree: u32) -> Vec<(Vec<u32>, Self)> {
        let mut out = Vec::new();
        for deg in 0..=max_degree {
            for part in partitions(deg, deg.max(1), nvars) {
                let p = Self::monomial_symmetric(nvars, &part).expect("partition fits");
                out.push((part, p));
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<i32>, c: Complex<T>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                let v = o.get().clone() + c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coefficient(&self, e: &[i32]) -> Complex<T> {
        self.terms.get(e).cloned().unwrap_or_else(Complex::zero)
    }

    /// Coefficient of x⁰, which is the value at 0 for an ordinary polynomial.
    pub fn constant_term(&self) -> Complex<T> {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&cint(-1)))
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone() * s.clone());
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut p = Self::constant(self.nvars, cint(1));
        for _ in 0..k {
            p = p.mul(self);
        }
        p
    }

    /// Multiplies by x^shift.
    pub fn shift(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        Poly { nvars: self.nvars, terms }
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c.clone() * cint(e[i] as i64));
            }
        }
        p
    }

    /// Quotient by (x_i − x_j); fails if the remainder is non-zero. For floating coefficients a
    /// remainder below 1e−9 of the largest coefficient is dropped.
    pub fn divide_by_difference(&self, i: usize, j: usize) -> Result<Self> {
        let size = |p: &Self| p.terms.values().map(|c| c.re.to_f64().hypot(c.im.to_f64())).fold(0.0, f64::max);
        let floor = if T::EXACT { 0.0 } else { 1e-9 * size(self) };
        let mut rest = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = rest.terms.iter().max_by_key(|(e, _)| (e[i], (*e).clone())).map(|(e, c)| (e.clone(), c.clone())) {
            if e[i] <= 0 {
                if !T::EXACT && size(&rest) <= floor {
                    break;
                }
                return Err(Error::Internal(format!("polynomial is not divisible by (x{i} − x{j})")));
            }
            let mut f = e.clone();
            f[i] -= 1;
            let mut g = f.clone();
            g[j] += 1;
            q.add_term(f, c.clone());
            rest.add_term(e, -c.clone());
            rest.add_term(g, c);
        }
        Ok(q)
    }

    pub fn evaluate(&self, x: &[Complex<T>]) -> Complex<T> {
        let mut s = Complex::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                t = t * cpow(xi, k);
            }
            s = s + t;
        }
        s
    }

    /// Maps coefficients to another field.
    pub fn map_coefficients<U: Real>(&self, f: impl Fn(&Complex<T>) -> Complex<U>) -> Poly<U> {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.nvars;
        (0..n.saturating_sub(1)).all(|i| {
            self.terms.iter().all(|(e, c)| {
                let mut f = e.clone();
                f.swap(i, i + 1);
                self.coefficient(&f) == *c
            })
        })
    }
}

fn cpow<T: Real>(x: &Complex<T>, k: i32) -> Complex<T> {
    let mut r = cint(1);
    for _ in 0..k.unsigned_abs() {
        r = r * x.clone();
    }
    if k < 0 {
        cint::<T>(1) / r
    } else {
        r
    }
}

fn next_permutation(v: &mut [i32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Partitions of `n` into at most `parts` parts, each ≤ `max_part`, largest first.
fn partitions(n: u32, max_part: u32, parts: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    if parts == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Δ_d(x) = ∏_{n<m} (x_n − x_m).
pub fn vandermonde<T: Real>(nvars: usize) -> Poly<T> {
    let mut p = Poly::constant(nvars, cint(1));
    for n in 0..nvars {
        for m in n + 1..nvars {
            p = p.mul(&Poly::var(nvars, n).sub(&Poly::var(nvars, m)));
        }
    }
    p
}

/// D = Δ(r)⁻¹ det[r_n^{d−m}(∂_n + (d−m)·α/r_n)], with α = 2/β for the operator labelled 4/β.
///
/// The determinant is expanded over permutations; each factor acts on its own variable.
pub fn sekiguchi_apply<T: Real>(p: &Poly<T>, alpha: &T) -> Result<Poly<T>> {
    let d = p.nvars();
    if d == 0 {
        return Ok(p.clone());
    }
    let mut total = Poly::zero(d);
    let mut perm: Vec<usize> = (0..d).collect();
    loop {
        let mut term = p.clone();
        for (n, &m) in perm.iter().enumerate() {
            // column index m (0-based) carries k = d − 1 − m
            let k = (d - 1 - m) as i32;
            let mut up = vec![0; d];
            up[n] = k;
            let dk = term.derivative(n).shift(&up);
            let mut lo = vec![0; d];
            lo[n] = k - 1;
            let extra = if k > 0 {
                term.shift(&lo).scale(&Complex::new(alpha.clone() * T::from_i64(k as i64), T::zero()))
            } else {
                Poly::zero(d)
            };
            term = dk.add(&extra);
        }
        total = if permutation_sign(&perm) > 0 { total.add(&term) } else { total.sub(&term) };
        if !next_permutation_usize(&mut perm) {
            break;
        }
    }
    for n in 0..d {
        for m in n + 1..d {
            total = total.divide_by_difference(n, m)?;
        }
    }
    Ok(total)
}

/// D applied k times.
pub fn sekiguchi_power<T: Real>(p: &Poly<T>, alpha: &T, k: usize) -> Result<Poly<T>> {
    let mut q = p.clone();
    for _ in 0..k {
        q = sekiguchi_apply(&q, alpha)?;
    }
    Ok(q)
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn next_permutation_usize(v: &mut [usize]) -> bool {
    let mut w: Vec<i32> = v.iter().map(|&x| x as i32).collect();
    let more = next_permutation(&mut w);
    for (a, b) in v.iter_mut().zip(w) {
        *a = b as usize;
    }
    more
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, QC};
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    fn q(n: i64) -> QC {
        cint(n)
    }

    #[test]
    fn d1_operator_is_derivative() {
        let p = P::monomial(1, q(1), vec![2]);
        let dp = sekiguchi_apply(&p, &rat(1, 1)).unwrap();
        assert_eq!(dp, P::monomial(1, q(2), vec![1]));
    }

    #[test]
    fn d2_operator_closed_form() {
        // D = ∂₁∂₂ + α(∂₂ − ∂₁)/(r₁ − r₂)
        let alpha = rat(1, 1);
        for part in [vec![2u32], vec![1, 1], vec![3, 1], vec![4, 2]] {
            let p = P::monomial_symmetric(2, &part).unwrap();
            let lhs = sekiguchi_apply(&p, &alpha).unwrap();
            let num = p.derivative(1).sub(&p.derivative(0));
            let rhs = p.derivative(0).derivative(1).add(&num.divide_by_difference(0, 1).unwrap());
            assert_eq!(lhs, rhs);
            assert!(lhs.is_symmetric());
        }
    }

    #[test]
    fn division_detects_remainder() {
        let p = P::var(2, 0);
        assert!(p.divide_by_difference(0, 1).is_err());
        let v = vandermonde::<BigRational>(3);
        let w = v.divide_by_difference(0, 1).unwrap().divide_by_difference(0, 2).unwrap();
        assert_eq!(w.divide_by_difference(1, 2).unwrap(), P::constant(3, q(1)));
    }

    #[test]
    fn symmetric_basis_counts() {
        // partitions with ≤ 2 parts of 0..=6: 1,1,2,2,3,3,4
        assert_eq!(P::monomial_symmetric_basis(2, 6).len(), 16);
        assert_eq!(P::monomial_symmetric_basis(1, 6).len(), 7);
        let m = P::monomial_symmetric(3, &[2, 1]).unwrap();
        assert_eq!(m.terms().count(), 6);
        assert!(m.is_symmetric());
    }
}
