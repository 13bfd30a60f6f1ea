//! Plain-text mean-stability report for a configured experiment.

use std::fmt::Write as _;

use crate::algorithms::{step_bound, AlgorithmSpec, BranchLimits};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::signals::CovarianceProfile;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundStatus {
    /// Limits for `e > 0` and `e ≤ 0`, with whether `μ` respects each.
    Limits { limits: BranchLimits, positive_ok: bool, negative_ok: bool },
    NotProvided,
    /// The limit needs `X_v`, which this noise model does not define.
    Undefined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundLine {
    pub spec: AlgorithmSpec,
    pub status: BoundStatus,
}

impl BoundLine {
    pub fn violated(&self) -> bool {
        matches!(self.status, BoundStatus::Limits { positive_ok, negative_ok, .. } if !(positive_ok && negative_ok))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub rho_max: f64,
    pub chi_v: Option<f64>,
    pub noise_kind: &'static str,
    pub lines: Vec<BoundLine>,
}

impl BoundsReport {
    pub fn violations(&self) -> usize {
        self.lines.iter().filter(|l| l.violated()).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rho_max = {}", short(self.rho_max));
        match self.chi_v {
            Some(chi) => {
                let _ = writeln!(out, "X_v = {}", short(chi));
            }
            None => {
                let _ = writeln!(out, "X_v = undefined for {} noise", self.noise_kind);
            }
        }
        let width = self.lines.iter().map(|l| l.spec.name().len()).max().unwrap_or(0);
        for line in &self.lines {
            let s = &line.spec;
            let mut params = format!("mu={}", short(s.mu));
            if s.kind.uses_cutoffs() {
                let _ = write!(params, " a={} b={}", short(s.a), short(s.b));
            }
            let _ = write!(out, "{:<width$}  {params}  ", s.name());
            match &line.status {
                BoundStatus::NotProvided => out.push_str("bound: not provided"),
                BoundStatus::Undefined => out.push_str("bound: undefined without X_v"),
                BoundStatus::Limits {
                    limits,
                    positive_ok,
                    negative_ok,
                } => {
                    let _ = write!(
                        out,
                        "mu_max(e>0) = {}  mu_max(e<=0) = {}",
                        short(limits.positive),
                        short(limits.negative)
                    );
                    if !positive_ok {
                        let _ = write!(out, "  VIOLATION e>0 ({} > {})", short(s.mu), short(limits.positive));
                    }
                    if !negative_ok {
                        let _ = write!(out, "  VIOLATION e<=0 ({} > {})", short(s.mu), short(limits.negative));
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Up to four decimals, trailing zeros dropped.
fn short(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn bounds_report(specs: &[AlgorithmSpec], profile: &CovarianceProfile, noise: &NoiseModel) -> Result<BoundsReport> {
    let rho_max = profile.rho_max();
    let chi_v = noise.chi_v();
    let lines = specs
        .iter()
        .map(|spec| {
            let status = match step_bound(spec, rho_max, chi_v) {
                Ok(b) => match b.limits {
                    Some(limits) => {
                        let (positive_ok, negative_ok) = limits.admits(spec.mu);
                        BoundStatus::Limits {
                            limits,
                            positive_ok,
                            negative_ok,
                        }
                    }
                    None => BoundStatus::NotProvided,
                },
                Err(Error::MissingChiV(_)) => BoundStatus::Undefined,
                Err(e) => return Err(e),
            };
            Ok(BoundLine { spec: *spec, status })
        })
        .collect::<Result<_>>()?;
    Ok(BoundsReport {
        rho_max,
        chi_v,
        noise_kind: noise.kind(),
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgorithmKind;
    use crate::noise::{AlphaStableParams, GaussianNoiseParams};

    fn gaussian() -> NoiseModel {
        NoiseModel::Gaussian(GaussianNoiseParams::uniform(4, 0.5).unwrap())
    }

    #[test]
    fn dqqclms_identity_covariance() {
        let spec = AlgorithmSpec::new(AlgorithmKind::Dqqclms, 0.4, 0.8, 6.0).unwrap();
        let profile = CovarianceProfile::uniform_scalar(16, 1.0).unwrap();
        let r = bounds_report(&[spec], &profile, &gaussian()).unwrap();
        let text = r.render();
        assert!(text.contains("mu_max(e>0) = 2.5 "), "{text}");
        assert!(text.contains("mu_max(e<=0) = 0.3333"), "{text}");
        assert!(text.contains("VIOLATION e<=0 (0.4 > 0.3333)"), "{text}");
        assert!(!text.contains("VIOLATION e>0"));
        assert_eq!(r.violations(), 1);
    }

    #[test]
    fn baselines_without_limit_are_marked() {
        let spec = AlgorithmSpec::baseline(AlgorithmKind::Dselms, 0.35).unwrap();
        let profile = CovarianceProfile::uniform_scalar(2, 1.0).unwrap();
        let text = bounds_report(&[spec], &profile, &gaussian()).unwrap().render();
        assert!(text.contains("DSELMS  mu=0.35  bound: not provided"), "{text}");
    }

    #[test]
    fn sign_rule_under_stable_noise_is_undefined() {
        let spec = AlgorithmSpec::with_defaults(AlgorithmKind::Dllclms);
        let profile = CovarianceProfile::per_node_scalar(2, vec![0.5, 1.5]).unwrap();
        let noise = NoiseModel::AlphaStable(AlphaStableParams::new(1.6, 0.05, 2000.0, 0.0).unwrap());
        let r = bounds_report(&[spec], &profile, &noise).unwrap();
        assert_eq!(r.rho_max, 1.5);
        assert_eq!(r.lines[0].status, BoundStatus::Undefined);
        assert!(r.render().contains("X_v = undefined for alpha_stable noise"));
    }

    #[test]
    fn number_format() {
        assert_eq!(short(2.5), "2.5");
        assert_eq!(short(1.0 / 3.0), "0.3333");
        assert_eq!(short(3.255_208_333), "3.2552");
        assert_eq!(short(4.0), "4");
    }
}
