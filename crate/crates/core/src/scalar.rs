//! Coefficient fields: double precision and exact rationals.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::Neg;

pub type C64 = Complex<f64>;
pub type QC = Complex<BigRational>;

/// Real scalar field underlying complex coefficients.
pub trait Real: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    const EXACT: bool;
    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    fn gt(&self, other: &Self) -> bool;
    /// exp of a complex number, if representable in this field.
    fn cexp(z: &Complex<Self>) -> Option<Complex<Self>>;
}

impl Real for f64 {
    const EXACT: bool = false;
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn gt(&self, other: &Self) -> bool {
        self > other
    }
    fn cexp(z: &C64) -> Option<C64> {
        Some(z.exp())
    }
}

impl Real for BigRational {
    const EXACT: bool = true;
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn gt(&self, other: &Self) -> bool {
        self > other
    }
    fn cexp(z: &QC) -> Option<QC> {
        if z.is_zero() {
            Some(QC::one())
        } else {
            None
        }
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qc(re: BigRational, im: BigRational) -> QC {
    Complex::new(re, im)
}

pub fn cre<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn cint<T: Real>(n: i64) -> Complex<T> {
    Complex::new(T::from_i64(n), T::zero())
}

pub fn to_c64<T: Real>(z: &Complex<T>) -> C64 {
    C64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<T: Real>(z: C64) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// Magnitude as f64, used for tolerance bookkeeping in both fields.
pub fn norm_f64<T: Real>(z: &Complex<T>) -> f64 {
    to_c64(z).norm()
}

/// Powers of the imaginary unit.
pub fn i_pow<T: Real>(k: i64) -> Complex<T> {
    match k.rem_euclid(4) {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

pub fn factorial_big(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from_u64(k).unwrap())
}
