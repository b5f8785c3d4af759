//! Gaussian quadrature rules by Golub–Welsch, plus the periodic trapezoid rule.

use crate::error::{Error, Result};
use crate::special::gamma_f64;
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Rule from the three-term recurrence: diagonal `a`, off-diagonal `b` (length n−1), total mass `mu0`.
fn golub_welsch(a: &[f64], b: &[f64], mu0: f64) -> Rule {
    let n = a.len();
    let j = DMatrix::from_fn(n, n, |i, k| {
        if i == k {
            a[i]
        } else if i + 1 == k {
            b[i]
        } else if k + 1 == i {
            b[k]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Rule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("a quadrature rule needs at least one node".into()));
    }
    Ok(())
}

/// Weight e^{−x²} on ℝ.
pub fn gauss_hermite(n: usize) -> Result<Rule> {
    check_n(n)?;
    let a = vec![0.0; n];
    let b: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    Ok(golub_welsch(&a, &b, PI.sqrt()))
}

/// Weight x^α e^{−x} on (0, ∞); α an integer or half-integer > −1.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Rule> {
    check_n(n)?;
    if alpha <= -1.0 {
        return Err(Error::Config("Laguerre weight needs α > −1".into()));
    }
    let a: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let b: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    Ok(golub_welsch(&a, &b, gamma_f64(alpha + 1.0)?))
}

/// Weight (1−x)^α (1+x)^β on (−1, 1); α, β integers or half-integers > −1.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Rule> {
    check_n(n)?;
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::Config("Jacobi weight needs α, β > −1".into()));
    }
    let ab = alpha + beta;
    let a: Vec<f64> = (0..n)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + ab;
            if k == 0.0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    let b: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + ab;
            // (k + α + β)/(s − 1) is 1 at k = 1, also when α + β = −1
            let r = if k == 1.0 { 1.0 } else { (k + ab) / (s - 1.0) };
            (4.0 * k * (k + alpha) * (k + beta) * r / (s * s * (s + 1.0))).sqrt()
        })
        .collect();
    let mu0 = 2f64.powf(ab + 1.0) * gamma_f64(alpha + 1.0)? * gamma_f64(beta + 1.0)? / gamma_f64(ab + 2.0)?;
    Ok(golub_welsch(&a, &b, mu0))
}

/// Weight 1 on (−1, 1); Newton iteration on the Legendre recurrence, O(n²).
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    check_n(n)?;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(Rule { nodes, weights })
}

/// Maps a rule on (−1, 1) to (lo, hi).
pub fn affine(rule: &Rule, lo: f64, hi: f64) -> Rule {
    let h = (hi - lo) / 2.0;
    Rule {
        nodes: rule.nodes.iter().map(|x| lo + h * (x + 1.0)).collect(),
        weights: rule.weights.iter().map(|w| w * h).collect(),
    }
}

/// Nodes 2πk/n with weights 1/n, i.e. the mean over a period.
pub fn trapezoid_periodic(n: usize) -> Result<Rule> {
    check_n(n)?;
    Ok(Rule {
        nodes: (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect(),
        weights: vec![1.0 / n as f64; n],
    })
}

/// Order-independent pairwise sum.
pub fn pairwise_sum<T: Copy + std::ops::Add<Output = T> + Default>(v: &[T]) -> T {
    match v.len() {
        0 => T::default(),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        let r = gauss_hermite(10).unwrap();
        assert!((r.integrate(|_| 1.0) - PI.sqrt()).abs() < 1e-13);
        assert!((r.integrate(|x| x.powi(4)) - 0.75 * PI.sqrt()).abs() < 1e-13);
        assert!((r.integrate(|x| x.powi(18)) - 34459425.0 / 512.0 * PI.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn laguerre_and_jacobi() {
        let r = gauss_laguerre(8, 0.5).unwrap();
        // ∫ x^{1/2} x^3 e^{-x} = Γ(4.5)
        assert!((r.integrate(|x| x.powi(3)) - gamma_f64(4.5).unwrap()).abs() < 1e-12);
        let j = gauss_jacobi(6, -0.5, -0.5).unwrap();
        assert!((j.integrate(|_| 1.0) - PI).abs() < 1e-13);
        assert!((j.integrate(|x| x * x) - PI / 2.0).abs() < 1e-13);
        let l = affine(&gauss_legendre(5).unwrap(), 0.0, 2.0);
        assert!((l.integrate(|x| x.powi(9)) - 102.4).abs() < 1e-11);
        for n in [1, 2, 7, 12] {
            let a = gauss_legendre(n).unwrap();
            let b = gauss_jacobi(n, 0.0, 0.0).unwrap();
            for k in 0..n {
                assert!((a.nodes[k] - b.nodes[k]).abs() < 1e-13 && (a.weights[k] - b.weights[k]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn trapezoid_is_spectral() {
        let t = trapezoid_periodic(16).unwrap();
        assert!((t.integrate(|x| (3.0 * x).cos().powi(2)) - 0.5).abs() < 1e-15);
    }
}
