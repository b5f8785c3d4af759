//! Rectangular supermatrices V, supersymmetric Wishart matrices B = VV†/γ̃ and
//! their duals K = V†V/γ̃.

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::scalar::{from_c64, Real, C64};
use num_complex::Complex;
use crate::supermatrix::{y_hat, SuperMatrix, SuperShape};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[cfg(test)]
type G = GrassmannElement<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WishartSpec {
    pub beta: u8,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaVariant {
    /// Theorems 1 and 2, b = 0.
    Thm1,
    /// General-dimension theorem.
    Thm4,
    /// d = 0.
    OrdinaryD0,
    /// c = 0.
    PureFermionic,
}

impl WishartSpec {
    pub fn new(beta: u8, a: usize, b: usize, c: usize, d: usize) -> Result<Self> {
        if !matches!(beta, 1 | 2 | 4) {
            return Err(Error::Config(format!("β must be 1, 2 or 4, got {beta}")));
        }
        let s = WishartSpec { beta, a, b, c, d };
        if 2 * (a * d + b * c) > 64 {
            return Err(Error::Config("more than 64 Grassmann generators".into()));
        }
        Ok(s)
    }

    pub fn gamma1(&self) -> usize {
        if self.beta == 1 {
            2
        } else {
            1
        }
    }

    pub fn gamma2(&self) -> usize {
        if self.beta == 4 {
            2
        } else {
            1
        }
    }

    pub fn gamma_tilde(&self) -> usize {
        self.gamma1() * self.gamma2()
    }

    /// β with the roles of bosons and fermions exchanged.
    pub fn dual_beta(&self) -> u8 {
        4 / self.beta
    }

    pub fn generator_count(&self) -> u32 {
        (2 * (self.a * self.d + self.b * self.c)) as u32
    }

    /// Number of real ordinary coordinates, βac + 4bd/β.
    pub fn real_dims(&self) -> usize {
        self.beta as usize * self.a * self.c + 4 * self.b * self.d / self.beta as usize
    }

    pub fn v_shape(&self) -> SuperShape {
        let (g1, g2) = (self.gamma1(), self.gamma2());
        SuperShape::new(g2 * self.c, g1 * self.d, g2 * self.a, g1 * self.b)
    }

    pub fn kappa(&self, variant: KappaVariant) -> Result<BigRational> {
        let r = |n: i64, m: usize| BigRational::new(BigInt::from(n), BigInt::from(m as i64));
        let (a, b, c, d) = (self.a as i64, self.b as i64, self.c as i64, self.d as i64);
        let (g1, g2) = (self.gamma1(), self.gamma2());
        Ok(match variant {
            KappaVariant::Thm1 => {
                if self.b != 0 {
                    return Err(Error::Precondition("κ of the b = 0 theorems needs b = 0".into()));
                }
                r(a - c + 1, g1) + r(d - 1, g2)
            }
            KappaVariant::Thm4 => r(a - c + 1, g1) - r(b - d + 1, g2),
            KappaVariant::OrdinaryD0 => {
                if self.d != 0 {
                    return Err(Error::Precondition("d must be 0".into()));
                }
                r(a - c + 1, g1) - r(1, g2)
            }
            KappaVariant::PureFermionic => {
                if self.c != 0 {
                    return Err(Error::Precondition("c must be 0".into()));
                }
                r(a + 1, g1) + r(d - 1, g2)
            }
        })
    }

    /// Pair index of χ_{jn}, j < a, n < d.
    pub fn chi_pair(&self, j: usize, n: usize) -> u32 {
        (j * self.d + n) as u32
    }

    /// Pair index of ζ_{jn}, j < b, n < c.
    pub fn zeta_pair(&self, j: usize, n: usize) -> u32 {
        (self.a * self.d + j * self.c + n) as u32
    }
}

/// Ordinary coordinates of V as a flat real vector.
///
/// Layout: first the a-type numbers (x, z or the quaternion pair z₁, z₂ per (j, n)),
/// then the b-type numbers (z̃ pair, z̃ or y per (j, n)); complex numbers as (re, im).
#[derive(Clone, Debug, PartialEq)]
pub struct OrdinarySample {
    pub coords: Vec<f64>,
}

impl OrdinarySample {
    pub fn new(spec: &WishartSpec, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != spec.real_dims() {
            return Err(Error::Dimension(format!(
                "expected {} real coordinates, got {}",
                spec.real_dims(),
                coords.len()
            )));
        }
        Ok(OrdinarySample { coords })
    }

    pub fn zeros(spec: &WishartSpec) -> Self {
        OrdinarySample { coords: vec![0.0; spec.real_dims()] }
    }

    pub fn random<R: Rng + ?Sized>(spec: &WishartSpec, rng: &mut R) -> Self {
        OrdinarySample { coords: (0..spec.real_dims()).map(|_| rng.sample(StandardNormal)).collect() }
    }

    fn cx(&self, i: usize) -> C64 {
        C64::new(self.coords[i], self.coords[i + 1])
    }
}

/// Accessors for the named numbers inside a sample.
struct Coords<'a> {
    s: &'a WishartSpec,
    v: &'a OrdinarySample,
}

impl Coords<'_> {
    fn a_len(&self) -> usize {
        self.s.beta as usize * self.s.a * self.s.c
    }
    /// β=1: x_{jn}
    fn x(&self, j: usize, n: usize) -> C64 {
        C64::new(self.v.coords[j * self.s.c + n], 0.0)
    }
    /// β=2: z_{jn}
    fn z(&self, j: usize, n: usize) -> C64 {
        self.v.cx(2 * (j * self.s.c + n))
    }
    /// β=4: z_{jnl}, l ∈ {0, 1}
    fn zq(&self, j: usize, n: usize, l: usize) -> C64 {
        self.v.cx(4 * (j * self.s.c + n) + 2 * l)
    }
    /// β=1: z̃_{jnl}
    fn zt_q(&self, j: usize, n: usize, l: usize) -> C64 {
        self.v.cx(self.a_len() + 4 * (j * self.s.d + n) + 2 * l)
    }
    /// β=2: z̃_{jn}
    fn zt(&self, j: usize, n: usize) -> C64 {
        self.v.cx(self.a_len() + 2 * (j * self.s.d + n))
    }
    /// β=4: y_{jn}
    fn y(&self, j: usize, n: usize) -> C64 {
        C64::new(self.v.coords[self.a_len() + j * self.s.d + n], 0.0)
    }
}

struct Gens<T> {
    n: u32,
    _t: std::marker::PhantomData<T>,
}

impl<T: Real> Gens<T> {
    fn new(n: u32) -> Self {
        Gens { n, _t: std::marker::PhantomData }
    }
    fn var(&self, pair: u32) -> GrassmannElement<T> {
        GrassmannElement::generator(self.n, 2 * pair).expect("generator in range")
    }
    fn star(&self, pair: u32) -> GrassmannElement<T> {
        GrassmannElement::generator(self.n, 2 * pair + 1).expect("generator in range")
    }
    fn num(&self, z: C64) -> GrassmannElement<T> {
        GrassmannElement::scalar(self.n, from_c64(z))
    }
}

/// One row of an adjoint supervector: (position, entry).
type Row<T> = Vec<(usize, GrassmannElement<T>)>;

/// Turns the adjoint row Ψ† into the column Ψ.
fn column_from_adjoint_row<T: Real>(
    row: &Row<T>,
    rows: SuperShape,
    bosonic_column: bool,
    n: u32,
) -> Result<Vec<GrassmannElement<T>>> {
    let mut col = vec![GrassmannElement::zero(n); rows.rows()];
    for (pos, x) in row {
        let c = x.conj()?;
        col[*pos] = if bosonic_column && *pos >= rows.boson_rows { c.neg() } else { c };
    }
    Ok(col)
}

fn assemble<T: Real>(shape: SuperShape, n: u32, columns: Vec<(usize, Vec<GrassmannElement<T>>)>) -> SuperMatrix<T> {
    let mut v = SuperMatrix::zeros(shape, n);
    for (j, col) in columns {
        for (i, x) in col.into_iter().enumerate() {
            v.set(i, j, x);
        }
    }
    v
}

/// V from its column definitions.
pub fn build_v<T: Real>(spec: &WishartSpec, sample: &OrdinarySample) -> Result<SuperMatrix<T>> {
    if sample.coords.len() != spec.real_dims() {
        return Err(Error::Dimension("sample length does not match the spec".into()));
    }
    let n = spec.generator_count();
    let g = Gens::<T>::new(n);
    let k = Coords { s: spec, v: sample };
    let shape = spec.v_shape();
    let rows = SuperShape::new(shape.boson_rows, shape.fermion_rows, 0, 0);
    let (a, b, c, d) = (spec.a, spec.b, spec.c, spec.d);
    let fb = shape.boson_rows;
    let mut cols: Vec<(usize, Vec<GrassmannElement<T>>)> = Vec::new();
    let mut push = |pos: usize, bos: bool, row: Row<T>| -> Result<()> {
        cols.push((pos, column_from_adjoint_row(&row, rows, bos, n)?));
        Ok(())
    };
    match spec.beta {
        1 => {
            for j in 0..a {
                let mut row: Row<T> = (0..c).map(|m| (m, g.num(k.x(j, m)))).collect();
                for m in 0..d {
                    let p = spec.chi_pair(j, m);
                    row.push((fb + m, g.var(p)));
                    row.push((fb + d + m, g.star(p)));
                }
                push(j, true, row)?;
            }
            for j in 0..b {
                // rows of the 2-row adjoint block
                for r in 0..2 {
                    let mut row: Row<T> = Vec::new();
                    for m in 0..c {
                        let p = spec.zeta_pair(j, m);
                        row.push((m, if r == 0 { g.var(p) } else { g.star(p) }));
                    }
                    for m in 0..d {
                        let (z1, z2) = (k.zt_q(j, m, 0), k.zt_q(j, m, 1));
                        let (e0, e1) = if r == 0 { (z1, -z2.conj()) } else { (z2, z1.conj()) };
                        row.push((fb + m, g.num(e0)));
                        row.push((fb + d + m, g.num(e1)));
                    }
                    push(a + r * b + j, false, row)?;
                }
            }
        }
        2 => {
            for j in 0..a {
                let mut row: Row<T> = (0..c).map(|m| (m, g.num(k.z(j, m)))).collect();
                for m in 0..d {
                    row.push((fb + m, g.var(spec.chi_pair(j, m))));
                }
                push(j, true, row)?;
            }
            for j in 0..b {
                let mut row: Row<T> = (0..c).map(|m| (m, g.var(spec.zeta_pair(j, m)))).collect();
                for m in 0..d {
                    row.push((fb + m, g.num(k.zt(j, m))));
                }
                push(a + j, false, row)?;
            }
        }
        4 => {
            for j in 0..a {
                for r in 0..2 {
                    let mut row: Row<T> = Vec::new();
                    for m in 0..c {
                        let (z1, z2) = (k.zq(j, m, 0), k.zq(j, m, 1));
                        let (e0, e1) = if r == 0 { (z1, -z2.conj()) } else { (z2, z1.conj()) };
                        row.push((m, g.num(e0)));
                        row.push((c + m, g.num(e1)));
                    }
                    for m in 0..d {
                        let p = spec.chi_pair(j, m);
                        row.push((fb + m, if r == 0 { g.var(p) } else { g.star(p) }));
                    }
                    push(r * a + j, true, row)?;
                }
            }
            for j in 0..b {
                let mut row: Row<T> = Vec::new();
                for m in 0..c {
                    let p = spec.zeta_pair(j, m);
                    row.push((m, g.var(p)));
                    row.push((c + m, g.star(p)));
                }
                for m in 0..d {
                    row.push((fb + m, g.num(k.y(j, m))));
                }
                push(2 * a + j, false, row)?;
            }
        }
        _ => unreachable!(),
    }
    Ok(assemble(shape, n, cols))
}

/// V from its row definitions: V = (Ψ₁₁^{(R)*}, …)^{T_S}.
pub fn build_v_from_rows<T: Real>(spec: &WishartSpec, sample: &OrdinarySample) -> Result<SuperMatrix<T>> {
    if sample.coords.len() != spec.real_dims() {
        return Err(Error::Dimension("sample length does not match the spec".into()));
    }
    let n = spec.generator_count();
    let g = Gens::<T>::new(n);
    let k = Coords { s: spec, v: sample };
    let wshape = spec.v_shape().transposed();
    let rows = SuperShape::new(wshape.boson_rows, wshape.fermion_rows, 0, 0);
    let (a, b, c, d) = (spec.a, spec.b, spec.c, spec.d);
    let fb = wshape.boson_rows;
    let mut cols: Vec<(usize, Vec<GrassmannElement<T>>)> = Vec::new();
    let mut push = |pos: usize, bos: bool, row: Row<T>| -> Result<()> {
        let col = column_from_adjoint_row(&row, rows, bos, n)?;
        cols.push((pos, col.iter().map(|x| x.conj()).collect::<Result<_>>()?));
        Ok(())
    };
    match spec.beta {
        1 => {
            for j in 0..c {
                let mut row: Row<T> = (0..a).map(|m| (m, g.num(k.x(m, j)))).collect();
                for m in 0..b {
                    let p = spec.zeta_pair(m, j);
                    row.push((fb + m, g.star(p)));
                    row.push((fb + b + m, g.var(p).neg()));
                }
                push(j, true, row)?;
            }
            for j in 0..d {
                for r in 0..2 {
                    let mut row: Row<T> = Vec::new();
                    for m in 0..a {
                        let p = spec.chi_pair(m, j);
                        row.push((m, if r == 0 { g.star(p).neg() } else { g.var(p) }));
                    }
                    for m in 0..b {
                        let (z1, z2) = (k.zt_q(m, j, 0), k.zt_q(m, j, 1));
                        let (e0, e1) = if r == 0 { (z1.conj(), z2.conj()) } else { (-z2, z1) };
                        row.push((fb + m, g.num(e0)));
                        row.push((fb + b + m, g.num(e1)));
                    }
                    push(c + r * d + j, false, row)?;
                }
            }
        }
        2 => {
            for j in 0..c {
                let mut row: Row<T> = (0..a).map(|m| (m, g.num(k.z(m, j).conj()))).collect();
                for m in 0..b {
                    row.push((fb + m, g.star(spec.zeta_pair(m, j))));
                }
                push(j, true, row)?;
            }
            for j in 0..d {
                let mut row: Row<T> = (0..a).map(|m| (m, g.star(spec.chi_pair(m, j)).neg())).collect();
                for m in 0..b {
                    row.push((fb + m, g.num(k.zt(m, j).conj())));
                }
                push(c + j, false, row)?;
            }
        }
        4 => {
            for j in 0..c {
                for r in 0..2 {
                    let mut row: Row<T> = Vec::new();
                    for m in 0..a {
                        let (z1, z2) = (k.zq(m, j, 0), k.zq(m, j, 1));
                        let (e0, e1) = if r == 0 { (z1.conj(), z2.conj()) } else { (-z2, z1) };
                        row.push((m, g.num(e0)));
                        row.push((a + m, g.num(e1)));
                    }
                    for m in 0..b {
                        let p = spec.zeta_pair(m, j);
                        row.push((fb + m, if r == 0 { g.star(p) } else { g.var(p).neg() }));
                    }
                    push(r * c + j, true, row)?;
                }
            }
            for j in 0..d {
                let mut row: Row<T> = Vec::new();
                for m in 0..a {
                    let p = spec.chi_pair(m, j);
                    row.push((m, g.star(p).neg()));
                    row.push((a + m, g.var(p)));
                }
                for m in 0..b {
                    row.push((fb + m, g.num(k.y(m, j))));
                }
                push(2 * c + j, false, row)?;
            }
        }
        _ => unreachable!(),
    }
    Ok(assemble(wshape, n, cols).supertranspose())
}

fn inv_gamma_tilde<T: Real>(spec: &WishartSpec) -> Complex<T> {
    Complex::new(T::one() / T::from_i64(spec.gamma_tilde() as i64), T::zero())
}

/// B = VV†/γ̃.
pub fn build_b<T: Real>(spec: &WishartSpec, v: &SuperMatrix<T>) -> Result<SuperMatrix<T>> {
    Ok(v.try_mul(&v.adjoint()?)?.scale(&inv_gamma_tilde(spec)))
}

/// K = V†V/γ̃.
pub fn build_k<T: Real>(spec: &WishartSpec, v: &SuperMatrix<T>) -> Result<SuperMatrix<T>> {
    Ok(v.adjoint()?.try_mul(v)?.scale(&inv_gamma_tilde(spec)))
}

/// Checks V* = Ŷ_{cd} V Ŷ_{ab}ᵀ; returns the largest coefficient deviation.
/// For β = 2 the relation carries no content (it reads V* = V*) and 0 is returned.
pub fn reality_deviation(spec: &WishartSpec, v: &SuperMatrix<f64>) -> Result<f64> {
    if spec.beta == 2 {
        return Ok(0.0);
    }
    let s = v.shape();
    let n = v.generator_count();
    let yr = y_hat(spec.beta, s.boson_rows, s.fermion_rows, n)?;
    let yc = y_hat(spec.beta, s.boson_cols, s.fermion_cols, n)?;
    let rhs = yr.try_mul(v)?.try_mul(&yc.transpose())?;
    Ok(v.conj()?.max_deviation(&rhs))
}

/// Per-power result of the duality check.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityEntry {
    pub m: u32,
    pub lhs: GrassmannElement<f64>,
    pub rhs: GrassmannElement<f64>,
    pub deviation: f64,
    pub scale: f64,
}

/// Str Aᵐ through repeated products; the last one only along the diagonal.
pub fn str_powers(a: &SuperMatrix<f64>, m_max: u32) -> Result<Vec<GrassmannElement<f64>>> {
    let mut out = Vec::with_capacity(m_max as usize);
    let mut p = a.clone();
    for m in 1..=m_max {
        if m > 1 {
            if m == m_max {
                out.push(diag_product_str(&p, a)?);
                break;
            }
            p = p.try_mul(a)?;
        }
        out.push(p.str()?);
    }
    Ok(out)
}

fn diag_product_str(p: &SuperMatrix<f64>, a: &SuperMatrix<f64>) -> Result<GrassmannElement<f64>> {
    let s = a.shape();
    let n = a.generator_count();
    let mut acc = crate::grassmann::Acc::new(n, 0);
    for i in 0..s.rows() {
        let neg = i >= s.boson_rows;
        for k in 0..s.cols() {
            let x = p.get(i, k);
            let y = a.get(k, i);
            if neg {
                acc.add_product(&x.neg(), y);
            } else {
                acc.add_product(x, y);
            }
        }
    }
    Ok(acc.finish())
}

/// Str Kᵐ against Str Bᵐ for m = 1..=m_max.
pub fn duality_check(spec: &WishartSpec, v: &SuperMatrix<f64>, m_max: u32) -> Result<Vec<DualityEntry>> {
    if m_max == 0 {
        return Err(Error::Config("m_max must be at least 1".into()));
    }
    let b = build_b(spec, v)?;
    let k = build_k(spec, v)?;
    let lhs = str_powers(&k, m_max)?;
    let rhs = str_powers(&b, m_max)?;
    Ok(lhs
        .into_iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (l, r))| {
            let scale = l.max_abs().max(r.max_abs()).max(1.0);
            DualityEntry { m: i as u32 + 1, deviation: l.max_deviation(&r), lhs: l, rhs: r, scale }
        })
        .collect())
}

fn column<T: Real>(v: &SuperMatrix<T>, j: usize) -> SuperMatrix<T> {
    let s = v.shape();
    let bos = j < s.boson_cols;
    let shape = SuperShape::new(s.boson_rows, s.fermion_rows, bos as usize, (!bos) as usize);
    SuperMatrix::from_fn(shape, v.generator_count(), |i, _| v.get(i, j).clone())
}

/// B = B₁ + 𝔖(B₂) with B₁ from the bosonic columns and B₂ from the 𝔖-images of the fermionic ones.
pub fn split_b<T: Real>(spec: &WishartSpec, v: &SuperMatrix<T>) -> Result<(SuperMatrix<T>, SuperMatrix<T>)> {
    let s = v.shape();
    let n = v.generator_count();
    let inv = inv_gamma_tilde::<T>(spec);
    let mut b1 = SuperMatrix::zeros(SuperShape::square(s.boson_rows, s.fermion_rows), n);
    let mut b2 = SuperMatrix::zeros(SuperShape::square(s.fermion_rows, s.boson_rows), n);
    for j in 0..s.cols() {
        let col = column(v, j);
        if j < s.boson_cols {
            b1 = b1.try_add(&col.try_mul(&col.adjoint()?)?)?;
        } else {
            let sc = col.s_operator();
            b2 = b2.try_add(&sc.try_mul(&sc.adjoint()?)?)?;
        }
    }
    Ok((b1.scale(&inv), b2.scale(&inv)))
}

/// Largest deviation of Str((VU†)(UV†))ᵐ from Str(VV†)ᵐ, m = 1..=m_max.
pub fn invariance_check(
    spec: &WishartSpec,
    v: &SuperMatrix<f64>,
    u: &SuperMatrix<f64>,
    m_max: u32,
) -> Result<f64> {
    let s = v.shape();
    if u.shape() != SuperShape::square(s.boson_cols, s.fermion_cols) {
        return Err(Error::Dimension("U has the wrong shape".into()));
    }
    if u.has_soul() {
        return Err(Error::Precondition("U must be an ordinary matrix".into()));
    }
    let body = u.body_c64();
    let k = body.nrows();
    if (&body * body.adjoint() - nalgebra::DMatrix::<C64>::identity(k, k)).norm() > 1e-10 {
        return Err(Error::Precondition("U is not unitary".into()));
    }
    for i in 0..k {
        for j in 0..k {
            if (i < s.boson_cols) != (j < s.boson_cols) && body[(i, j)].norm() != 0.0 {
                return Err(Error::Precondition("U must be block diagonal".into()));
            }
        }
    }
    let u = u.embed(v.generator_count())?;
    let vu = v.try_mul(&u.adjoint()?)?;
    let uv = u.try_mul(&v.adjoint()?)?;
    let g = C64::new(1.0 / spec.gamma_tilde() as f64, 0.0);
    let rotated = vu.try_mul(&uv)?.scale(&g);
    let b = build_b(spec, v)?;
    let l = str_powers(&rotated, m_max)?;
    let r = str_powers(&b, m_max)?;
    Ok(l.iter().zip(&r).map(|(x, y)| x.max_deviation(y)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn real_dims_and_shapes() {
        let s = WishartSpec::new(4, 2, 1, 1, 2).unwrap();
        assert_eq!(s.real_dims(), 4 * 2 + 2);
        assert_eq!(s.v_shape(), SuperShape::new(2, 2, 4, 1));
        assert!(WishartSpec::new(3, 1, 1, 1, 1).is_err());
    }

    #[test]
    fn kappa_examples() {
        let s = WishartSpec::new(2, 3, 0, 1, 1).unwrap();
        assert_eq!(s.kappa(KappaVariant::Thm1).unwrap(), BigRational::from_integer(3.into()));
        let s = WishartSpec::new(1, 2, 0, 2, 1).unwrap();
        assert_eq!(s.kappa(KappaVariant::Thm1).unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn column_and_row_definitions_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for beta in [1u8, 2, 4] {
            for (a, b, c, d) in [(1, 0, 1, 1), (1, 1, 1, 1), (2, 1, 1, 2), (1, 2, 2, 1)] {
                let s = WishartSpec::new(beta, a, b, c, d).unwrap();
                let x = OrdinarySample::random(&s, &mut rng);
                let v1 = build_v::<f64>(&s, &x).unwrap();
                let v2 = build_v_from_rows::<f64>(&s, &x).unwrap();
                assert!(v1.max_deviation(&v2) < 1e-14, "β={beta} {:?}", (a, b, c, d));
                assert!(v1.check_parity());
            }
        }
    }

    #[test]
    fn small_unitary_case_by_hand() {
        let s = WishartSpec::new(2, 1, 0, 1, 1).unwrap();
        let x = OrdinarySample::new(&s, vec![0.5, -1.5]).unwrap();
        let v = build_v::<f64>(&s, &x).unwrap();
        let vd = v.adjoint().unwrap();
        assert_eq!(vd.get(0, 0).body(), C64::new(0.5, -1.5));
        assert_eq!(*vd.get(0, 1), G::generator(2, 0).unwrap());
        let b = build_b(&s, &v).unwrap();
        let chi = G::generator(2, 0).unwrap();
        let chis = G::generator(2, 1).unwrap();
        let expect = &G::real(2, 2.5) - &(&chi * &chis);
        assert!(b.str().unwrap().max_deviation(&expect) < 1e-15);
    }

    #[test]
    fn reality_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for beta in [1u8, 4] {
            let s = WishartSpec::new(beta, 2, 1, 1, 2).unwrap();
            let v = build_v::<f64>(&s, &OrdinarySample::random(&s, &mut rng)).unwrap();
            assert!(reality_deviation(&s, &v).unwrap() < 1e-14, "β={beta}");
        }
    }

    #[test]
    fn zero_sample_has_trivial_duality() {
        let s = WishartSpec::new(2, 1, 1, 1, 1).unwrap();
        let v = build_v::<f64>(&s, &OrdinarySample::zeros(&s)).unwrap();
        for e in duality_check(&s, &v, 3).unwrap() {
            assert_eq!(e.deviation, 0.0);
        }
    }
}
