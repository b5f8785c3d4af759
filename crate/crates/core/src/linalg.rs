//! Dense linear algebra over the coefficient field and over even Grassmann entries.

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::scalar::{norm_f64, Real};
use num_complex::Complex;
use num_traits::{One, Zero};

pub type FieldMatrix<T> = Vec<Vec<Complex<T>>>;

fn pivot_row<T: Real>(m: &FieldMatrix<T>, col: usize) -> Option<usize> {
    let mut best = None;
    let mut best_abs = 0.0;
    for (r, row) in m.iter().enumerate().skip(col) {
        if row[col].is_zero() {
            continue;
        }
        let a = norm_f64(&row[col]);
        if best.is_none() || (!T::EXACT && a > best_abs) {
            best = Some(r);
            best_abs = a;
            if T::EXACT {
                break;
            }
        }
    }
    best
}

pub fn field_det<T: Real>(m: &FieldMatrix<T>) -> Complex<T> {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Complex::<T>::one();
    for col in 0..n {
        let Some(p) = pivot_row(&a, col) else {
            return Complex::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det = det * piv.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / piv.clone();
            for c in col..n {
                let v = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - v;
            }
        }
    }
    det
}

pub fn field_inverse<T: Real>(m: &FieldMatrix<T>) -> Result<FieldMatrix<T>> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: FieldMatrix<T> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Complex::one() } else { Complex::zero() }).collect()).collect();
    for col in 0..n {
        let p = pivot_row(&a, col).ok_or_else(|| Error::Singular("singular body matrix".into()))?;
        if !T::EXACT && norm_f64(&a[p][col]) < 1e-300 {
            return Err(Error::Singular("singular body matrix".into()));
        }
        a.swap(p, col);
        inv.swap(p, col);
        let piv = a[col][col].clone();
        for c in 0..n {
            a[col][c] = a[col][c].clone() / piv.clone();
            inv[col][c] = inv[col][c].clone() / piv.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let v = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - v;
                let w = inv[col][c].clone() * f.clone();
                inv[r][c] = inv[r][c].clone() - w;
            }
        }
    }
    Ok(inv)
}

/// Square matrix of Grassmann elements (ordinary matrix with algebra entries).
pub type GMatrix<T> = Vec<Vec<GrassmannElement<T>>>;

pub fn gm_mul<T: Real>(a: &GMatrix<T>, b: &GMatrix<T>, n: u32) -> GMatrix<T> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = Vec::with_capacity(cols);
        for j in 0..cols {
            let est: usize = (0..inner).map(|k| a[i][k].len() * b[k][j].len()).sum();
            let mut acc = crate::grassmann::Acc::new(n, est);
            for k in 0..inner {
                acc.add_product(&a[i][k], &b[k][j]);
            }
            row.push(acc.finish());
        }
        out.push(row);
    }
    out
}

pub fn gm_body<T: Real>(a: &GMatrix<T>) -> FieldMatrix<T> {
    a.iter().map(|r| r.iter().map(|x| x.body()).collect()).collect()
}

pub fn gm_from_field<T: Real>(a: &FieldMatrix<T>, n: u32) -> GMatrix<T> {
    a.iter().map(|r| r.iter().map(|x| GrassmannElement::scalar(n, x.clone())).collect()).collect()
}

pub fn gm_identity<T: Real>(k: usize, n: u32) -> GMatrix<T> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { GrassmannElement::one(n) } else { GrassmannElement::zero(n) }).collect())
        .collect()
}

pub fn gm_add<T: Real>(a: &GMatrix<T>, b: &GMatrix<T>) -> GMatrix<T> {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect()).collect()
}

pub fn gm_sub<T: Real>(a: &GMatrix<T>, b: &GMatrix<T>) -> GMatrix<T> {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect()).collect()
}

pub fn gm_neg<T: Real>(a: &GMatrix<T>) -> GMatrix<T> {
    a.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect()
}

fn gm_soul<T: Real>(a: &GMatrix<T>) -> GMatrix<T> {
    a.iter().map(|r| r.iter().map(|x| x.soul()).collect()).collect()
}

fn gm_is_zero<T: Real>(a: &GMatrix<T>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Inverse through the body inverse and a terminating Neumann series in the soul.
pub fn gm_inverse<T: Real>(a: &GMatrix<T>, n: u32) -> Result<GMatrix<T>> {
    let k = a.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let b0 = gm_from_field(&field_inverse(&gm_body(a))?, n);
    let x = gm_neg(&gm_mul(&b0, &gm_soul(a), n));
    let mut sum = gm_identity(k, n);
    let mut p = gm_identity(k, n);
    loop {
        p = gm_mul(&p, &x, n);
        if gm_is_zero(&p) {
            break;
        }
        sum = gm_add(&sum, &p);
    }
    Ok(gm_mul(&sum, &b0, n))
}

/// Determinant of a matrix with even (mutually commuting) entries:
/// det(M₀)·exp(tr log(1 + M₀⁻¹N)).
pub fn gm_det<T: Real>(a: &GMatrix<T>, n: u32) -> Result<GrassmannElement<T>> {
    let k = a.len();
    if k == 0 {
        return Ok(GrassmannElement::one(n));
    }
    let body = gm_body(a);
    let d0 = field_det(&body);
    if d0.is_zero() {
        return gm_det_expand(a, n);
    }
    let b0 = gm_from_field(&field_inverse(&body)?, n);
    let x = gm_mul(&b0, &gm_soul(a), n);
    let mut log = GrassmannElement::zero(n);
    let mut p = gm_identity(k, n);
    let mut j = 1i64;
    loop {
        p = gm_mul(&p, &x, n);
        if gm_is_zero(&p) {
            break;
        }
        let mut tr = GrassmannElement::zero(n);
        for i in 0..k {
            tr = &tr + &p[i][i];
        }
        let s = if j % 2 == 1 { T::one() } else { -T::one() } / T::from_i64(j);
        log = &log + &tr.scale_real(s);
        j += 1;
    }
    Ok(log.exp_even()?.scale(&d0))
}

/// Leibniz expansion; used only when the body is singular.
fn gm_det_expand<T: Real>(a: &GMatrix<T>, n: u32) -> Result<GrassmannElement<T>> {
    let k = a.len();
    if k == 1 {
        return Ok(a[0][0].clone());
    }
    let mut out = GrassmannElement::zero(n);
    for c in 0..k {
        let minor: GMatrix<T> =
            (1..k).map(|r| (0..k).filter(|&cc| cc != c).map(|cc| a[r][cc].clone()).collect()).collect();
        let term = a[0][c].try_mul(&gm_det_expand(&minor, n)?)?;
        out = if c % 2 == 0 { &out + &term } else { &out - &term };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, QC};
    use num_rational::BigRational;

    #[test]
    fn exact_inverse_and_det() {
        let m: FieldMatrix<BigRational> = vec![
            vec![QC::new(rat(2, 1), rat(0, 1)), QC::new(rat(1, 1), rat(1, 1))],
            vec![QC::new(rat(1, 1), rat(-1, 1)), QC::new(rat(3, 1), rat(0, 1))],
        ];
        assert_eq!(field_det(&m), QC::new(rat(4, 1), rat(0, 1)));
        let inv = field_inverse(&m).unwrap();
        assert_eq!(inv[0][0], QC::new(rat(3, 4), rat(0, 1)));
    }

    #[test]
    fn grassmann_det_matches_expansion() {
        type G = GrassmannElement<f64>;
        let n = 4;
        let q1 = &G::generator(n, 0).unwrap() * &G::generator(n, 1).unwrap();
        let q2 = &G::generator(n, 2).unwrap() * &G::generator(n, 3).unwrap();
        let two = G::real(n, 2.0);
        let a: GMatrix<f64> = vec![vec![&two + &q1, q2.clone()], vec![q1.clone(), &G::real(n, 3.0) + &q2]];
        let d = gm_det(&a, n).unwrap();
        let e = gm_det_expand(&a, n).unwrap();
        assert!(d.max_deviation(&e) < 1e-14);
        let inv = gm_inverse(&a, n).unwrap();
        let id = gm_mul(&a, &inv, n);
        assert!(id[0][0].max_deviation(&G::one(n)) < 1e-14);
        assert!(id[0][1].max_abs() < 1e-14);
    }
}
