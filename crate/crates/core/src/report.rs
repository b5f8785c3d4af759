//! Verification records and their JSON/CSV serialization.

use crate::scalar::C64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpecEcho {
    pub beta: u8,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Complex64 {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex64 {
    fn from(z: C64) -> Self {
        Complex64 { re: z.re, im: z.im }
    }
}

impl From<Complex64> for C64 {
    fn from(z: Complex64) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    /// Distinguishes several checks of one identity at one spec.
    pub detail: String,
    pub spec: SpecEcho,
    pub lhs_value: Complex64,
    pub rhs_value: Complex64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: u64,
    pub seed: u64,
}

impl VerificationReport {
    /// Builds a record from both sides; errors are computed here.
    pub fn new(identity_id: &str, detail: impl Into<String>, spec: SpecEcho, lhs: C64, rhs: C64, tolerance: f64) -> Self {
        let abs_error = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_error = if scale > 0.0 { abs_error / scale } else { 0.0 };
        Self::with_errors(identity_id, detail, spec, lhs, rhs, abs_error, rel_error, tolerance)
    }

    /// For checks whose error is not the distance of the two displayed values
    /// (e.g. a maximum over many coefficients).
    #[allow(clippy::too_many_arguments)]
    pub fn with_errors(
        identity_id: &str,
        detail: impl Into<String>,
        spec: SpecEcho,
        lhs: C64,
        rhs: C64,
        abs_error: f64,
        rel_error: f64,
        tolerance: f64,
    ) -> Self {
        let finite = lhs.re.is_finite()
            && lhs.im.is_finite()
            && rhs.re.is_finite()
            && rhs.im.is_finite()
            && abs_error.is_finite()
            && rel_error.is_finite();
        VerificationReport {
            identity_id: identity_id.to_string(),
            detail: detail.into(),
            spec,
            lhs_value: lhs.into(),
            rhs_value: rhs.into(),
            abs_error,
            rel_error,
            tolerance,
            passed: finite && (abs_error <= tolerance || rel_error <= tolerance),
            runtime_ms: 0,
            seed: 0,
        }
    }

    /// Only the relative error counts (plus an absolute floor for values at zero).
    pub fn relative_only(mut self, abs_floor: f64) -> Self {
        self.passed = self.rel_error <= self.tolerance || self.abs_error <= abs_floor;
        self.passed &= self.abs_error.is_finite();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn line(&self) -> String {
        let s = &self.spec;
        format!(
            "{} {:<20} {:<28} β={} a={} b={} c={} d={} e={}  lhs={:+.12e}{:+.12e}i  rhs={:+.12e}{:+.12e}i  abs={:.3e} rel={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.identity_id,
            self.detail,
            s.beta,
            s.a,
            s.b,
            s.c,
            s.d,
            s.e,
            self.lhs_value.re,
            self.lhs_value.im,
            self.rhs_value.re,
            self.rhs_value.im,
            self.abs_error,
            self.rel_error,
            self.tolerance
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: String,
    pub seed: u64,
    pub checks: Vec<VerificationReport>,
    pub summary: Summary,
}

impl ReportFile {
    /// Sorts the checks by identity, spec and detail.
    pub fn new(seed: u64, mut checks: Vec<VerificationReport>) -> Self {
        checks.sort_by(|x, y| {
            (&x.identity_id, x.spec, &x.detail).cmp(&(&y.identity_id, y.spec, &y.detail))
        });
        let pass = checks.iter().filter(|c| c.passed).count();
        let fail = checks.len() - pass;
        ReportFile { version: env!("CARGO_PKG_VERSION").to_string(), seed, checks, summary: Summary { pass, fail } }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "identity_id,detail,beta,a,b,c,d,e,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,rel_error,tolerance,passed,runtime_ms,seed\n",
        );
        for r in &self.checks {
            let s = &r.spec;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{}\n",
                r.identity_id,
                r.detail.replace(',', ";"),
                s.beta,
                s.a,
                s.b,
                s.c,
                s.d,
                s.e,
                r.lhs_value.re,
                r.lhs_value.im,
                r.rhs_value.re,
                r.rhs_value.im,
                r.abs_error,
                r.rel_error,
                r.tolerance,
                r.passed,
                r.runtime_ms,
                r.seed
            ));
        }
        out
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_and_ordering() {
        let s = SpecEcho { beta: 2, a: 1, ..Default::default() };
        let r = VerificationReport::new("x", "", s, C64::new(1.0, 0.0), C64::new(1.0 + 1e-9, 0.0), 1e-8);
        assert!(r.passed);
        let r2 = VerificationReport::new("a", "", s, C64::new(f64::NAN, 0.0), C64::new(0.0, 0.0), 1.0);
        assert!(!r2.passed);
        let f = ReportFile::new(7, vec![r, r2]);
        assert_eq!(f.checks[0].identity_id, "a");
        assert_eq!(f.summary, Summary { pass: 1, fail: 1 });
        assert_eq!(f.to_csv().lines().count(), 3);
    }
}
