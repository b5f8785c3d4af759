//! Block supermatrices over the Grassmann algebra.

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::linalg::{gm_det, gm_inverse, gm_mul, gm_sub, GMatrix};
use crate::scalar::{Real, C64};
use num_complex::Complex;
use num_traits::One;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SuperShape {
    pub boson_rows: usize,
    pub fermion_rows: usize,
    pub boson_cols: usize,
    pub fermion_cols: usize,
}

impl SuperShape {
    pub fn new(boson_rows: usize, fermion_rows: usize, boson_cols: usize, fermion_cols: usize) -> Self {
        SuperShape { boson_rows, fermion_rows, boson_cols, fermion_cols }
    }
    pub fn square(b: usize, f: usize) -> Self {
        Self::new(b, f, b, f)
    }
    pub fn rows(&self) -> usize {
        self.boson_rows + self.fermion_rows
    }
    pub fn cols(&self) -> usize {
        self.boson_cols + self.fermion_cols
    }
    pub fn is_square(&self) -> bool {
        self.boson_rows == self.boson_cols && self.fermion_rows == self.fermion_cols
    }
    pub fn transposed(&self) -> Self {
        Self::new(self.boson_cols, self.fermion_cols, self.boson_rows, self.fermion_rows)
    }
    fn row_is_boson(&self, i: usize) -> bool {
        i < self.boson_rows
    }
    fn col_is_boson(&self, j: usize) -> bool {
        j < self.boson_cols
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix<T: Real = f64> {
    shape: SuperShape,
    n: u32,
    entries: Vec<GrassmannElement<T>>,
}

/// Which of the four blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    BB,
    BF,
    FB,
    FF,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WickSide {
    /// Π^{(C)}_ψ = diag(1, e^{iψ/2})
    Column,
    /// Π^{(R)}_{−ψ} = diag(1, e^{−iψ/2})
    Row,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WickRotation {
    pub angle: f64,
    pub side: WickSide,
}

impl<T: Real> SuperMatrix<T> {
    pub fn zeros(shape: SuperShape, n: u32) -> Self {
        SuperMatrix { shape, n, entries: vec![GrassmannElement::zero(n); shape.rows() * shape.cols()] }
    }

    pub fn identity(b: usize, f: usize, n: u32) -> Self {
        let mut m = Self::zeros(SuperShape::square(b, f), n);
        for i in 0..b + f {
            m.set(i, i, GrassmannElement::one(n));
        }
        m
    }

    pub fn from_fn(shape: SuperShape, n: u32, mut f: impl FnMut(usize, usize) -> GrassmannElement<T>) -> Self {
        let mut entries = Vec::with_capacity(shape.rows() * shape.cols());
        for i in 0..shape.rows() {
            for j in 0..shape.cols() {
                entries.push(f(i, j));
            }
        }
        SuperMatrix { shape, n, entries }
    }

    /// Block-diagonal scalar matrix diag(bb | ff).
    pub fn diag(bb: &[Complex<T>], ff: &[Complex<T>], n: u32) -> Self {
        let all: Vec<_> = bb.iter().chain(ff).cloned().collect();
        Self::from_fn(SuperShape::square(bb.len(), ff.len()), n, |i, j| {
            if i == j {
                GrassmannElement::scalar(n, all[i].clone())
            } else {
                GrassmannElement::zero(n)
            }
        })
    }

    pub fn shape(&self) -> SuperShape {
        self.shape
    }

    pub fn generator_count(&self) -> u32 {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GrassmannElement<T> {
        &self.entries[i * self.shape.cols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GrassmannElement<T>) {
        let c = self.shape.cols();
        self.entries[i * c + j] = x;
    }

    pub fn block_of(&self, i: usize, j: usize) -> Block {
        match (self.shape.row_is_boson(i), self.shape.col_is_boson(j)) {
            (true, true) => Block::BB,
            (true, false) => Block::BF,
            (false, true) => Block::FB,
            (false, false) => Block::FF,
        }
    }

    /// Diagonal blocks even, off-diagonal blocks odd.
    pub fn check_parity(&self) -> bool {
        for i in 0..self.shape.rows() {
            for j in 0..self.shape.cols() {
                let x = self.get(i, j);
                let ok = match self.block_of(i, j) {
                    Block::BB | Block::FF => x.is_even(),
                    _ => x.is_odd(),
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn row_range(&self, boson: bool) -> std::ops::Range<usize> {
        if boson {
            0..self.shape.boson_rows
        } else {
            self.shape.boson_rows..self.shape.rows()
        }
    }

    fn col_range(&self, boson: bool) -> std::ops::Range<usize> {
        if boson {
            0..self.shape.boson_cols
        } else {
            self.shape.boson_cols..self.shape.cols()
        }
    }

    /// Ordinary matrix of one block.
    pub fn block(&self, b: Block) -> GMatrix<T> {
        let (rb, cb) = match b {
            Block::BB => (true, true),
            Block::BF => (true, false),
            Block::FB => (false, true),
            Block::FF => (false, false),
        };
        self.row_range(rb).map(|i| self.col_range(cb).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn from_blocks(
        shape: SuperShape,
        n: u32,
        bb: &GMatrix<T>,
        bf: &GMatrix<T>,
        fb: &GMatrix<T>,
        ff: &GMatrix<T>,
    ) -> Self {
        let (br, bc) = (shape.boson_rows, shape.boson_cols);
        Self::from_fn(shape, n, |i, j| {
            let zero = GrassmannElement::zero(n);
            let pick = |m: &GMatrix<T>, r: usize, c: usize| m.get(r).and_then(|row| row.get(c)).cloned();
            match (i < br, j < bc) {
                (true, true) => pick(bb, i, j),
                (true, false) => pick(bf, i, j - bc),
                (false, true) => pick(fb, i - br, j),
                (false, false) => pick(ff, i - br, j - bc),
            }
            .unwrap_or(zero)
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (s, o) = (self.shape, other.shape);
        if s.boson_cols != o.boson_rows || s.fermion_cols != o.fermion_rows || self.n != other.n {
            return Err(Error::Dimension(format!("cannot multiply {s:?} by {o:?}")));
        }
        let shape = SuperShape::new(s.boson_rows, s.fermion_rows, o.boson_cols, o.fermion_cols);
        let inner = s.cols();
        let n = self.n;
        let mut out = Self::zeros(shape, n);
        for i in 0..shape.rows() {
            for j in 0..shape.cols() {
                let est: usize = (0..inner).map(|k| self.get(i, k).len() * other.get(k, j).len()).sum();
                let mut acc = crate::grassmann::Acc::new(n, est);
                for k in 0..inner {
                    acc.add_product(self.get(i, k), other.get(k, j));
                }
                out.set(i, j, acc.finish());
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape || self.n != other.n {
            return Err(Error::Dimension("shape mismatch in addition".into()));
        }
        Ok(SuperMatrix {
            shape: self.shape,
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Complex::<T>::one()))
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        SuperMatrix { shape: self.shape, n: self.n, entries: self.entries.iter().map(|x| x.scale(s)).collect() }
    }

    pub fn map(&self, f: impl Fn(&GrassmannElement<T>) -> GrassmannElement<T>) -> Self {
        SuperMatrix { shape: self.shape, n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&GrassmannElement<T>) -> Result<GrassmannElement<T>>) -> Result<Self> {
        Ok(SuperMatrix {
            shape: self.shape,
            n: self.n,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Entrywise Grassmann conjugation A*.
    pub fn conj(&self) -> Result<Self> {
        self.try_map(|x| x.conj())
    }

    /// Ordinary transposition, keeping block labels attached to the new positions.
    pub fn transpose(&self) -> Self {
        let t = self.shape.transposed();
        Self::from_fn(t, self.n, |i, j| self.get(j, i).clone())
    }

    /// [[A,B],[C,D]] ↦ [[Aᵀ, Cᵀ], [−Bᵀ, Dᵀ]].
    pub fn supertranspose(&self) -> Self {
        let t = self.shape.transposed();
        let br = self.shape.boson_rows;
        let bc = self.shape.boson_cols;
        Self::from_fn(t, self.n, |i, j| {
            let x = self.get(j, i);
            // entry (i,j) of result comes from (j,i); it was in BF of the original iff j < br and i ≥ bc
            if j < br && i >= bc {
                x.neg()
            } else {
                x.clone()
            }
        })
    }

    /// A† = (A^{T_S})*.
    pub fn adjoint(&self) -> Result<Self> {
        self.supertranspose().conj()
    }

    pub fn str(&self) -> Result<GrassmannElement<T>> {
        if !self.shape.is_square() {
            return Err(Error::Dimension("supertrace of a non-square supermatrix".into()));
        }
        let mut s = GrassmannElement::zero(self.n);
        for i in 0..self.shape.rows() {
            s = if i < self.shape.boson_rows { &s + self.get(i, i) } else { &s - self.get(i, i) };
        }
        Ok(s)
    }

    /// Sdet = det(A − B D⁻¹ C) / det D.
    pub fn sdet(&self) -> Result<GrassmannElement<T>> {
        if !self.shape.is_square() {
            return Err(Error::Dimension("superdeterminant of a non-square supermatrix".into()));
        }
        let n = self.n;
        let (a, b, c, d) = (self.block(Block::BB), self.block(Block::BF), self.block(Block::FB), self.block(Block::FF));
        let dinv = gm_inverse(&d, n).map_err(|_| Error::Singular("Fermion-Fermion body is singular".into()))?;
        let schur = if a.is_empty() || d.is_empty() { a } else { gm_sub(&a, &gm_mul(&gm_mul(&b, &dinv, n), &c, n)) };
        let num = gm_det(&schur, n)?;
        let den = gm_det(&d, n)?;
        num.try_mul(&den.inverse()?)
    }

    /// Sdet = det A / det(D − C A⁻¹ B).
    pub fn sdet_bb(&self) -> Result<GrassmannElement<T>> {
        if !self.shape.is_square() {
            return Err(Error::Dimension("superdeterminant of a non-square supermatrix".into()));
        }
        let n = self.n;
        let (a, b, c, d) = (self.block(Block::BB), self.block(Block::BF), self.block(Block::FB), self.block(Block::FF));
        let ainv = gm_inverse(&a, n).map_err(|_| Error::Singular("Boson-Boson body is singular".into()))?;
        let schur = if d.is_empty() || a.is_empty() { d } else { gm_sub(&d, &gm_mul(&gm_mul(&c, &ainv, n), &b, n)) };
        let num = gm_det(&a, n)?;
        let den = gm_det(&schur, n)?;
        num.try_mul(&den.inverse()?)
    }

    /// Exact inverse via the body inverse and a finite Neumann series.
    pub fn inverse(&self) -> Result<Self> {
        if !self.shape.is_square() {
            return Err(Error::Dimension("inverse of a non-square supermatrix".into()));
        }
        let k = self.shape.rows();
        let g: GMatrix<T> = (0..k).map(|i| (0..k).map(|j| self.get(i, j).clone()).collect()).collect();
        let inv = gm_inverse(&g, self.n)?;
        Ok(Self::from_fn(self.shape, self.n, |i, j| inv[i][j].clone()))
    }

    /// 𝔖([[σ11,σ12],[σ21,σ22]]) = [[−σ22, −σ21],[σ12, σ11]].
    pub fn s_operator(&self) -> Self {
        let s = self.shape;
        let shape = SuperShape::new(s.fermion_rows, s.boson_rows, s.fermion_cols, s.boson_cols);
        let (br, bc) = (s.boson_rows, s.boson_cols);
        let (fr, fc) = (s.fermion_rows, s.fermion_cols);
        Self::from_fn(shape, self.n, |i, j| {
            let top = i < fr;
            let left = j < fc;
            let oi = if top { br + i } else { i - fr };
            let oj = if left { bc + j } else { j - fc };
            let x = self.get(oi, oj);
            if top {
                x.neg()
            } else {
                x.clone()
            }
        })
    }

    /// Ordinary body as a complex matrix.
    pub fn body(&self) -> Vec<Vec<Complex<T>>> {
        (0..self.shape.rows()).map(|i| (0..self.shape.cols()).map(|j| self.get(i, j).body()).collect()).collect()
    }

    pub fn has_soul(&self) -> bool {
        self.entries.iter().any(|x| !x.soul().is_zero())
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        if self.shape != other.shape {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.max_deviation(b)).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.max_abs()).fold(0.0, f64::max)
    }

    /// Embeds the entries in a larger algebra.
    pub fn embed(&self, n: u32) -> Result<Self> {
        self.try_map(|x| x.embed(n)).map(|mut m| {
            m.n = n;
            m
        })
    }

    /// Π A Π with Π = diag(1, p·1): off-diagonal blocks scale by p, FF by p².
    pub fn conjugate_by_phase(&self, p: &Complex<T>) -> Self {
        let p2 = p.clone() * p.clone();
        Self::from_fn(self.shape, self.n, |i, j| {
            let x = self.get(i, j);
            match self.block_of(i, j) {
                Block::BB => x.clone(),
                Block::FF => x.scale(&p2),
                _ => x.scale(p),
            }
        })
    }
}

impl SuperMatrix<f64> {
    pub fn wick_rotate(&self, w: WickRotation) -> Result<Self> {
        if !self.shape.is_square() {
            return Err(Error::Dimension("Wick rotation needs a square supermatrix".into()));
        }
        let half = match w.side {
            WickSide::Column => w.angle / 2.0,
            WickSide::Row => -w.angle / 2.0,
        };
        Ok(self.conjugate_by_phase(&C64::from_polar(1.0, half)))
    }

    pub fn body_c64(&self) -> nalgebra::DMatrix<C64> {
        let (r, c) = (self.shape.rows(), self.shape.cols());
        nalgebra::DMatrix::from_fn(r, c, |i, j| self.get(i, j).body())
    }
}

/// Sub-block indices for the structured sets.
fn sub(m: &GMatrix<f64>, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> GMatrix<f64> {
    rows.map(|i| cols.clone().map(|j| m[i][j].clone()).collect()).collect()
}

fn gm_adjoint_ord(m: &GMatrix<f64>) -> Result<GMatrix<f64>> {
    let r = m.len();
    let c = if r == 0 { 0 } else { m[0].len() };
    (0..c).map(|j| (0..r).map(|i| m[i][j].conj()).collect()).collect()
}

fn gm_conj(m: &GMatrix<f64>) -> Result<GMatrix<f64>> {
    m.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect()
}

fn gm_transpose(m: &GMatrix<f64>) -> GMatrix<f64> {
    let r = m.len();
    let c = if r == 0 { 0 } else { m[0].len() };
    (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect()
}

fn gm_close(a: &GMatrix<f64>, b: &GMatrix<f64>, tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(ra, rb)| ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| x.max_deviation(y) <= tol))
}

fn body_hermitian_pd(m: &GMatrix<f64>, tol: f64) -> bool {
    let k = m.len();
    if k == 0 {
        return true;
    }
    let b = nalgebra::DMatrix::from_fn(k, k, |i, j| m[i][j].body());
    let h = (&b + b.adjoint()) * C64::new(0.5, 0.0);
    if (&b - &h).norm() > tol * (1.0 + b.norm()) {
        return false;
    }
    let eig = nalgebra::SymmetricEigen::new(h);
    eig.eigenvalues.iter().all(|&l| l > 1e-12)
}

fn body_unitary(m: &GMatrix<f64>, tol: f64) -> bool {
    let k = m.len();
    let b = nalgebra::DMatrix::from_fn(k, k, |i, j| m[i][j].body());
    let p = &b * b.adjoint();
    (p - nalgebra::DMatrix::<C64>::identity(k, k)).norm() <= tol
}

pub fn ys_kron(q: usize) -> Vec<Vec<f64>> {
    let mut y = vec![vec![0.0; 2 * q]; 2 * q];
    for i in 0..q {
        y[i][q + i] = 1.0;
        y[q + i][i] = -1.0;
    }
    y
}

fn real_matrix_gm(r: &[Vec<f64>], n: u32) -> GMatrix<f64> {
    r.iter().map(|row| row.iter().map(|&x| GrassmannElement::real(n, x)).collect()).collect()
}

/// Membership targets of the structured supermatrix sets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SigmaSet {
    /// Σ_{β,pq}
    Plain { beta: u8 },
    /// Σ^{(†)}_{β,pq}: Σ with σ₂† = σ₂
    Dagger { beta: u8 },
    /// Σ^{(c)}_{β,pq}: Σ with σ₂ in the circular ensemble CU^{(4/β)}
    Circular { beta: u8 },
    /// Σ̃^{(†)}: self-adjoint with the Ŷ reality condition
    TildeDagger { beta: u8 },
}

/// Ŷ_{pq} for the given β, sized for a (P|Q) square supermatrix.
pub fn y_hat(beta: u8, p: usize, q: usize, n: u32) -> Result<SuperMatrix<f64>> {
    let mut m = SuperMatrix::zeros(SuperShape::square(p, q), n);
    match beta {
        1 => {
            if q % 2 != 0 {
                return Err(Error::Dimension("β=1 needs an even fermionic dimension".into()));
            }
            for i in 0..p {
                m.set(i, i, GrassmannElement::one(n));
            }
            let y = ys_kron(q / 2);
            for i in 0..q {
                for j in 0..q {
                    m.set(p + i, p + j, GrassmannElement::real(n, y[i][j]));
                }
            }
        }
        2 => return Ok(SuperMatrix::identity(p, q, n)),
        4 => {
            if p % 2 != 0 {
                return Err(Error::Dimension("β=4 needs an even bosonic dimension".into()));
            }
            let y = ys_kron(p / 2);
            for i in 0..p {
                for j in 0..p {
                    m.set(i, j, GrassmannElement::real(n, y[i][j]));
                }
            }
            for i in 0..q {
                m.set(p + i, p + i, GrassmannElement::one(n));
            }
        }
        _ => return Err(Error::Config(format!("invalid β={beta}"))),
    }
    Ok(m)
}

const MEMBER_TOL: f64 = 1e-12;

/// Predicate for the sets Σ, Σ^{(†)}, Σ^{(c)} and Σ̃^{(†)}.
pub fn sigma_membership(a: &SuperMatrix<f64>, set: SigmaSet) -> bool {
    sigma_membership_impl(a, set).unwrap_or(false)
}

fn sigma_membership_impl(a: &SuperMatrix<f64>, set: SigmaSet) -> Result<bool> {
    let s = a.shape();
    if !s.is_square() || !a.check_parity() {
        return Ok(false);
    }
    let tol = MEMBER_TOL * (1.0 + a.max_abs());
    if let SigmaSet::TildeDagger { beta } = set {
        if a.adjoint()?.max_deviation(a) > tol {
            return Ok(false);
        }
        if beta == 2 {
            return Ok(true);
        }
        let y = y_hat(beta, s.boson_rows, s.fermion_rows, a.generator_count())?;
        let rhs = y.try_mul(a)?.try_mul(&y.transpose())?;
        return Ok(a.conj()?.max_deviation(&rhs) <= tol);
    }
    let beta = match set {
        SigmaSet::Plain { beta } | SigmaSet::Dagger { beta } | SigmaSet::Circular { beta } => beta,
        SigmaSet::TildeDagger { .. } => unreachable!(),
    };
    let bb = a.block(Block::BB);
    let bf = a.block(Block::BF);
    let fb = a.block(Block::FB);
    let ff = a.block(Block::FF);
    let (p, q) = (s.boson_rows, s.fermion_rows);
    let ok = match beta {
        2 => {
            gm_close(&gm_adjoint_ord(&bb)?, &bb, tol)
                && body_hermitian_pd(&bb, tol)
                && gm_close(&fb, &gm_adjoint_ord(&bf)?.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect(), tol)
        }
        1 => {
            if q % 2 != 0 {
                return Ok(false);
            }
            let h = q / 2;
            let eta = sub(&bf, 0..p, 0..h);
            let eta_s = sub(&bf, 0..p, h..q);
            let sym = gm_close(&gm_transpose(&bb), &bb, tol) && gm_close(&gm_conj(&bb)?, &bb, tol);
            let neg_adj: GMatrix<f64> = gm_adjoint_ord(&eta)?.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect();
            let lower_ok = gm_close(&sub(&fb, 0..h, 0..p), &neg_adj, tol)
                && gm_close(&sub(&fb, h..q, 0..p), &gm_transpose(&eta), tol);
            let ff11 = sub(&ff, 0..h, 0..h);
            let ff22 = sub(&ff, h..q, h..q);
            let a1 = sub(&ff, 0..h, h..q);
            let a2 = sub(&ff, h..q, 0..h);
            let neg = |m: &GMatrix<f64>| -> GMatrix<f64> { m.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect() };
            sym && body_hermitian_pd(&bb, tol)
                && gm_close(&eta_s, &gm_conj(&eta)?, tol)
                && lower_ok
                && gm_close(&ff22, &gm_transpose(&ff11), tol)
                && gm_close(&gm_transpose(&a1), &neg(&a1), tol)
                && gm_close(&gm_transpose(&a2), &neg(&a2), tol)
        }
        4 => {
            if p % 2 != 0 {
                return Ok(false);
            }
            let h = p / 2;
            let s11 = sub(&bb, 0..h, 0..h);
            let s12 = sub(&bb, 0..h, h..p);
            let quat = gm_close(&sub(&bb, h..p, h..p), &gm_conj(&s11)?, tol)
                && gm_close(
                    &sub(&bb, h..p, 0..h),
                    &gm_conj(&s12)?.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect(),
                    tol,
                );
            let eta = sub(&bf, 0..h, 0..q);
            let off = gm_close(&sub(&bf, h..p, 0..q), &gm_conj(&eta)?, tol)
                && gm_close(
                    &sub(&fb, 0..q, 0..h),
                    &gm_adjoint_ord(&eta)?.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect(),
                    tol,
                )
                && gm_close(&sub(&fb, 0..q, h..p), &gm_transpose(&eta), tol);
            quat && off
                && gm_close(&gm_adjoint_ord(&bb)?, &bb, tol)
                && body_hermitian_pd(&bb, tol)
                && gm_close(&gm_transpose(&ff), &ff, tol)
        }
        _ => return Err(Error::Config(format!("invalid β={beta}"))),
    };
    if !ok {
        return Ok(false);
    }
    match set {
        SigmaSet::Plain { .. } => Ok(true),
        SigmaSet::Dagger { .. } => Ok(gm_close(&gm_adjoint_ord(&ff)?, &ff, tol)),
        SigmaSet::Circular { beta } => {
            if ff.iter().any(|r| r.iter().any(|x| !x.soul().is_zero())) || !body_unitary(&ff, 1e-10) {
                return Ok(false);
            }
            Ok(match beta {
                2 => true,
                4 => gm_close(&gm_transpose(&ff), &ff, tol),
                1 => {
                    let y = real_matrix_gm(&ys_kron(q / 2), a.generator_count());
                    let yt = gm_transpose(&y);
                    let n = a.generator_count();
                    let rhs = gm_mul(&gm_mul(&y, &gm_transpose(&ff), n), &yt, n);
                    gm_close(&rhs, &ff, tol)
                }
                _ => false,
            })
        }
        SigmaSet::TildeDagger { .. } => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    type G = GrassmannElement<f64>;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn supertrace_and_sdet_of_diagonal() {
        let d = SuperMatrix::<f64>::diag(&[c(2.0)], &[c(3.0)], 0);
        assert_eq!(d.str().unwrap().body(), c(-1.0));
        let d = SuperMatrix::<f64>::diag(&[c(2.0)], &[c(4.0)], 0);
        assert!((d.sdet().unwrap().body() - c(0.5)).norm() < 1e-15);
        assert!((d.s_operator().sdet().unwrap().body() - c(-2.0)).norm() < 1e-15);
        let inv = d.inverse().unwrap();
        assert!((inv.get(1, 1).body() - c(0.25)).norm() < 1e-15);
        assert!((SuperMatrix::<f64>::identity(2, 1, 0).sdet().unwrap().body() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn neumann_inverse_terminates() {
        let n = 2;
        let z = G::generator(n, 0).unwrap();
        let zs = G::generator(n, 1).unwrap();
        let mut m = SuperMatrix::<f64>::identity(1, 1, n);
        m.set(0, 1, z.clone());
        m.set(1, 0, zs.clone());
        let inv = m.inverse().unwrap();
        let id = m.try_mul(&inv).unwrap();
        assert!(id.max_deviation(&SuperMatrix::identity(1, 1, n)) < 1e-15);
    }

    #[test]
    fn circular_membership_examples() {
        let phi = 0.7;
        let a = SuperMatrix::<f64>::diag(&[c(1.0)], &[C64::from_polar(1.0, phi)], 0);
        assert!(sigma_membership(&a, SigmaSet::Circular { beta: 2 }));
        let b = SuperMatrix::<f64>::diag(&[c(-1.0)], &[C64::from_polar(1.0, phi)], 0);
        assert!(!sigma_membership(&b, SigmaSet::Circular { beta: 2 }));
        let mut f = SuperMatrix::<f64>::diag(&[c(1.0), c(1.0)], &[c(1.0), c(1.0)], 0);
        f.set(2, 3, G::real(0, 0.5));
        assert!(sigma_membership(&f.clone(), SigmaSet::Plain { beta: 2 }));
        assert!(!sigma_membership(&f, SigmaSet::Plain { beta: 4 }));
    }

    #[test]
    fn wick_rotation_composes() {
        let n = 2;
        let mut m = SuperMatrix::<f64>::diag(&[c(1.5)], &[c(0.5)], n);
        m.set(0, 1, G::generator(n, 0).unwrap());
        m.set(1, 0, G::generator(n, 1).unwrap());
        let w = |a| WickRotation { angle: a, side: WickSide::Column };
        assert_eq!(m.wick_rotate(w(0.0)).unwrap().max_deviation(&m), 0.0);
        let two = m.wick_rotate(w(0.3)).unwrap().wick_rotate(w(0.4)).unwrap();
        assert!(two.max_deviation(&m.wick_rotate(w(0.7)).unwrap()) < 1e-15);
        let r = m.wick_rotate(w(0.7)).unwrap();
        assert!((r.get(1, 1).body() - C64::from_polar(0.5, 0.7)).norm() < 1e-15);
    }
}
