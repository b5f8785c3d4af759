//! Gamma function at integer and half-integer arguments, exactly.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::f64::consts::PI;

/// q · π^{k/2}.
#[derive(Clone, Debug, PartialEq)]
pub struct PiRational {
    pub q: BigRational,
    pub half_pi_power: i64,
}

impl PiRational {
    pub fn from_rational(q: BigRational) -> Self {
        PiRational { q, half_pi_power: 0 }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn mul(&self, o: &Self) -> Self {
        PiRational { q: &self.q * &o.q, half_pi_power: self.half_pi_power + o.half_pi_power }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.q.is_zero() {
            return Err(Error::Singular("division by zero".into()));
        }
        Ok(PiRational { q: &self.q / &o.q, half_pi_power: self.half_pi_power - o.half_pi_power })
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 && self.q.is_zero() {
            return Err(Error::Singular("negative power of zero".into()));
        }
        let q = if k >= 0 {
            num_traits::pow(self.q.clone(), k as usize)
        } else {
            num_traits::pow(self.q.recip(), (-k) as usize)
        };
        Ok(PiRational { q, half_pi_power: self.half_pi_power * k })
    }

    pub fn to_f64(&self) -> f64 {
        self.q.to_f64().unwrap_or(f64::NAN) * PI.sqrt().powi(self.half_pi_power as i32)
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Γ(n/2) for integer n; poles at n ≤ 0 even.
pub fn gamma_half(n: i64) -> Result<PiRational> {
    if n <= 0 && n % 2 == 0 {
        return Err(Error::Singular(format!("Γ has a pole at {}", n / 2)));
    }
    // start at Γ(1) = 1 or Γ(1/2) = √π and walk
    let (mut x2, mut g) = if n % 2 == 0 {
        (2i64, PiRational::one())
    } else {
        (1i64, PiRational { q: BigRational::one(), half_pi_power: 1 })
    };
    while x2 < n {
        g.q *= BigRational::new(BigInt::from(x2), BigInt::from(2));
        x2 += 2;
    }
    while x2 > n {
        x2 -= 2;
        g.q /= BigRational::new(BigInt::from(x2), BigInt::from(2));
    }
    Ok(g)
}

/// Γ(x) for x a rational with denominator 1 or 2.
pub fn gamma_rational(x: &BigRational) -> Result<PiRational> {
    let two_x = x * int(2);
    if !two_x.is_integer() {
        return Err(Error::Unsupported(format!("Γ({x}) is only available at integers and half-integers")));
    }
    gamma_half(two_x.to_integer().to_i64().ok_or_else(|| Error::Unsupported("argument too large".into()))?)
}

/// 1/Γ(x); zero at the poles.
pub fn rgamma_rational(x: &BigRational) -> Result<PiRational> {
    match gamma_rational(x) {
        Ok(g) => PiRational::one().div(&g),
        Err(Error::Singular(_)) => Ok(PiRational::from_rational(BigRational::zero())),
        Err(e) => Err(e),
    }
}

/// Γ(x) in double precision for integer or half-integer x.
pub fn gamma_f64(x: f64) -> Result<f64> {
    let two = 2.0 * x;
    if (two - two.round()).abs() > 1e-12 {
        return Err(Error::Unsupported(format!("Γ({x}) is only available at integers and half-integers")));
    }
    Ok(gamma_half(two.round() as i64)?.to_f64())
}

/// Volume of U^{(β)}(n): ∏_{j=1}^{n} 2π^{βj/2}/Γ(βj/2).
pub fn vol_u(beta: u8, n: usize) -> Result<PiRational> {
    let mut v = PiRational::one();
    for j in 1..=n as i64 {
        let bj = beta as i64 * j;
        let num = PiRational { q: int(2), half_pi_power: bj };
        v = v.mul(&num.div(&gamma_half(bj)?)?);
    }
    Ok(v)
}

/// (1/n!) ∏_{j=1}^{n} π^{β(j−1)/2} Γ(β/2)/Γ(βj/2): flag-manifold volume over the permutation group.
pub fn flag_ratio_fu(beta: u8, n: usize) -> Result<PiRational> {
    let b = beta as i64;
    let mut v = PiRational::from_rational(BigRational::new(BigInt::one(), crate::scalar::factorial_big(n as u64)));
    for j in 1..=n as i64 {
        let p = PiRational { q: BigRational::one(), half_pi_power: b * (j - 1) };
        v = v.mul(&p.mul(&gamma_half(b)?).div(&gamma_half(b * j)?)?);
    }
    Ok(v)
}

/// Sign helper (−1)^k.
pub fn neg_one_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn is_nonneg(q: &BigRational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_values() {
        assert_eq!(gamma_half(2).unwrap(), PiRational::one());
        assert_eq!(gamma_half(10).unwrap().q, int(24));
        let g = gamma_half(3).unwrap();
        assert_eq!((g.q.clone(), g.half_pi_power), (BigRational::new(1.into(), 2.into()), 1));
        assert!((gamma_half(-1).unwrap().to_f64() + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!(gamma_half(0).is_err());
        assert!(gamma_half(-4).is_err());
    }

    #[test]
    fn group_volumes() {
        assert!((vol_u(2, 1).unwrap().to_f64() - 2.0 * PI).abs() < 1e-13);
        assert!((vol_u(2, 2).unwrap().to_f64() - 4.0 * PI.powi(3)).abs() < 1e-11);
        for beta in [1u8, 2, 4] {
            assert_eq!(flag_ratio_fu(beta, 1).unwrap().to_f64(), 1.0);
        }
        assert!((flag_ratio_fu(1, 2).unwrap().to_f64() - PI / 2.0).abs() < 1e-14);
        assert!((flag_ratio_fu(2, 2).unwrap().to_f64() - PI / 2.0).abs() < 1e-14);
        assert!((flag_ratio_fu(4, 2).unwrap().to_f64() - PI * PI / 12.0).abs() < 1e-14);
    }
}
