//! Mean-stability step-size limits.
//!
//! Each asymmetric rule behaves, in the mean, like an LMS recursion whose
//! effective step depends on the error branch:
//!
//! | rule     | `e > 0`              | `e ≤ 0`              |
//! |----------|----------------------|----------------------|
//! | DLLCLMS  | `2 / (a·X_v·ρ_max)`  | `2 / (b·X_v·ρ_max)`  |
//! | DQQCLMS  | `2 / (a·ρ_max)`      | `2 / (b·ρ_max)`      |
//! | DLECLMS  | `2 / (a²·b·ρ_max)`   | same                 |
//!
//! `DLMS` is DQQCLMS with `a = b = 1`. No limit is derived for `DSELMS` and
//! `DLLAD`.

use super::{AlgorithmKind, AlgorithmSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchLimits {
    /// Largest admissible `μ` while `e > 0`.
    pub positive: f64,
    /// Largest admissible `μ` while `e ≤ 0`.
    pub negative: f64,
}

impl BranchLimits {
    /// `(positive ok, negative ok)` for step `mu`.
    pub fn admits(&self, mu: f64) -> (bool, bool) {
        (mu < self.positive, mu < self.negative)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityBound {
    pub algorithm: AlgorithmKind,
    pub rho_max: f64,
    pub chi_v: Option<f64>,
    /// `None` when no limit is available for the algorithm.
    pub limits: Option<BranchLimits>,
}

pub fn step_bound(spec: &AlgorithmSpec, rho_max: f64, chi_v: Option<f64>) -> Result<StabilityBound> {
    if !(rho_max.is_finite() && rho_max > 0.0) {
        return Err(Error::invalid("rho_max", "must be positive and finite"));
    }
    let AlgorithmSpec { kind, a, b, .. } = *spec;
    let (limits, chi_used) = match kind {
        AlgorithmKind::Dllclms => {
            let chi = chi_v.ok_or(Error::MissingChiV(kind.name()))?;
            if !(chi.is_finite() && chi > 0.0) {
                return Err(Error::invalid("chi_v", "must be positive and finite"));
            }
            let limits = BranchLimits {
                positive: 2.0 / (a * chi * rho_max),
                negative: 2.0 / (b * chi * rho_max),
            };
            (Some(limits), Some(chi))
        }
        AlgorithmKind::Dqqclms => {
            let limits = BranchLimits {
                positive: 2.0 / (a * rho_max),
                negative: 2.0 / (b * rho_max),
            };
            (Some(limits), None)
        }
        AlgorithmKind::Dlms => {
            let mu_max = 2.0 / rho_max;
            let limits = BranchLimits {
                positive: mu_max,
                negative: mu_max,
            };
            (Some(limits), None)
        }
        AlgorithmKind::Dleclms => {
            let mu_max = 2.0 / (a * a * b * rho_max);
            let limits = BranchLimits {
                positive: mu_max,
                negative: mu_max,
            };
            (Some(limits), None)
        }
        AlgorithmKind::Dselms | AlgorithmKind::Dllad => (None, None),
    };
    Ok(StabilityBound {
        algorithm: kind,
        rho_max,
        chi_v: chi_used,
        limits,
    })
}

/// `(exp(ae) − 1) − ae`: how far the LEC update factor is from its
/// small-error linearisation.
pub fn lec_linearization_error(e: f64, a: f64) -> f64 {
    let x = a * e;
    x.exp_m1() - x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: AlgorithmKind, a: f64, b: f64) -> AlgorithmSpec {
        AlgorithmSpec::new(kind, 0.1, a, b).unwrap()
    }

    #[test]
    fn dqqclms_substitution() {
        let b = step_bound(&spec(AlgorithmKind::Dqqclms, 0.8, 6.0), 1.0, None).unwrap();
        let l = b.limits.unwrap();
        assert!((l.positive - 2.5).abs() < 1e-15);
        assert!((l.negative - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dleclms_substitution() {
        let b = step_bound(&spec(AlgorithmKind::Dleclms, 0.32, 6.0), 1.0, None).unwrap();
        let l = b.limits.unwrap();
        assert!((l.positive - 3.255_208_333_333_333).abs() < 1e-12);
        assert_eq!(l.positive, l.negative);
    }

    #[test]
    fn symmetric_reduces_to_lms_limit() {
        let q = step_bound(&spec(AlgorithmKind::Dqqclms, 1.0, 1.0), 2.0, None).unwrap();
        assert_eq!(q.limits.unwrap(), BranchLimits { positive: 1.0, negative: 1.0 });
        let l = step_bound(&spec(AlgorithmKind::Dlms, 1.0, 1.0), 2.0, None).unwrap();
        assert_eq!(q.limits, l.limits);
    }

    #[test]
    fn dllclms_needs_chi_v() {
        let s = spec(AlgorithmKind::Dllclms, 0.8, 4.0);
        assert!(matches!(step_bound(&s, 1.0, None), Err(Error::MissingChiV("DLLCLMS"))));
        let l = step_bound(&s, 2.0, Some(0.5)).unwrap().limits.unwrap();
        assert!((l.positive - 2.0 / (0.8 * 0.5 * 2.0)).abs() < 1e-15);
        assert!((l.negative - 2.0 / (4.0 * 0.5 * 2.0)).abs() < 1e-15);
        let sym = step_bound(&spec(AlgorithmKind::Dllclms, 2.0, 2.0), 1.0, Some(3.0)).unwrap();
        let l = sym.limits.unwrap();
        assert_eq!(l.positive, l.negative);
    }

    #[test]
    fn baselines_have_no_limit() {
        for kind in [AlgorithmKind::Dselms, AlgorithmKind::Dllad] {
            assert_eq!(step_bound(&spec(kind, 1.0, 1.0), 1.0, Some(1.0)).unwrap().limits, None);
        }
        assert!(step_bound(&spec(AlgorithmKind::Dlms, 1.0, 1.0), 0.0, None).is_err());
    }

    #[test]
    fn admits_flags_each_branch() {
        let l = BranchLimits {
            positive: 2.5,
            negative: 1.0 / 3.0,
        };
        assert_eq!(l.admits(0.4), (true, false));
        assert_eq!(l.admits(0.1), (true, true));
    }

    #[test]
    fn linearization_error_values() {
        assert_eq!(lec_linearization_error(0.0, 0.32), 0.0);
        // e^{0.032} − 1 − 0.032 at 40 digits
        assert!((lec_linearization_error(0.1, 0.32) - 5.175_053_051_184_195e-4).abs() < 1e-17);
    }

    #[test]
    fn linearization_error_obeys_remainder_bound() {
        for i in -1000..=1000 {
            let x = i as f64 / 1000.0;
            for a in [0.1, 0.32, 1.0, 3.0] {
                let e = x / a;
                let r = lec_linearization_error(e, a);
                let bound = x * x * x.abs().exp() / 2.0;
                assert!(r.abs() <= bound + 1e-16, "x={x} a={a}");
            }
        }
    }
}
