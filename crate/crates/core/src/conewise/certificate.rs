use serde::Serialize;

use crate::model::{ConewisePair, Mode};

use super::lambda::lambda_closed_form;
use super::regions::{sliding_consistency, visible_eigenvector_check, SlidingReport, Visibility};
use super::ConewiseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    VisibleEigenvectorS1,
    VisibleEigenvectorS2,
    ReturnMapContractive,
    NotCertified,
}

impl Verdict {
    pub fn is_stable(self) -> bool {
        !matches!(self, Verdict::NotCertified)
    }
}

/// The condition that settled the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Overdamped free motion with its steep eigenvector inside `S1`.
    FreeMotionEigenvector,
    /// Overdamped contact with a positive damping gap.
    ContactEigenvectorDampingGap,
    /// Overdamped contact with the slow eigenvector below the switching line.
    ContactEigenvectorSlope,
    /// `Λ1 Λ2 < 1`.
    ReturnMapBelowOne,
    /// `Λ1 Λ2 >= 1`.
    ReturnMapAtLeastOne,
}

/// Stability properties that follow from a positive verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Implications {
    /// Worst-case system uniformly asymptotically stable.
    pub guas_worst_case: bool,
    /// Unperturbed switched system uniformly exponentially stable.
    pub gues_unperturbed: bool,
    /// Perturbed switched system input-to-state stable w.r.t. the reference.
    pub iss_perturbed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityCertificate {
    pub pair: ConewisePair,
    pub verdict: Verdict,
    pub decided_by: Decision,
    /// Eigenvalue of the visible eigenvector, when one exists.
    pub visible_eigenvalue: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    /// `Λ1 Λ2`, the factor per half rotation.
    pub lambda_half: Option<f64>,
    /// `(Λ1 Λ2)²`, the factor per full rotation.
    pub lambda: Option<f64>,
    #[serde(skip)]
    pub sliding: SlidingReport,
    pub implications: Implications,
}

pub fn certify(pair: &ConewisePair) -> Result<StabilityCertificate, ConewiseError> {
    pair.validate()?;
    let sliding = sliding_consistency(pair);
    if !sliding.consistent {
        return Err(ConewiseError::SlidingInconsistency(sliding));
    }
    let (verdict, decided_by, visible_eigenvalue, lambdas) = match visible_eigenvector_check(pair)
    {
        Visibility::S2(l) => {
            let by = if pair.delta_b() >= 0.0 {
                Decision::ContactEigenvectorDampingGap
            } else {
                Decision::ContactEigenvectorSlope
            };
            (Verdict::VisibleEigenvectorS2, by, Some(l), None)
        }
        Visibility::S1(l) => (
            Verdict::VisibleEigenvectorS1,
            Decision::FreeMotionEigenvector,
            Some(l),
            None,
        ),
        Visibility::None => {
            let l1 = lambda_closed_form(pair, Mode::Free)?;
            let l2 = lambda_closed_form(pair, Mode::Contact)?;
            if l1 * l2 < 1.0 {
                (
                    Verdict::ReturnMapContractive,
                    Decision::ReturnMapBelowOne,
                    None,
                    Some((l1, l2)),
                )
            } else {
                (
                    Verdict::NotCertified,
                    Decision::ReturnMapAtLeastOne,
                    None,
                    Some((l1, l2)),
                )
            }
        }
    };
    let stable = verdict.is_stable();
    Ok(StabilityCertificate {
        pair: *pair,
        verdict,
        decided_by,
        visible_eigenvalue,
        lambda1: lambdas.map(|l| l.0),
        lambda2: lambdas.map(|l| l.1),
        lambda_half: lambdas.map(|(a, b)| a * b),
        lambda: lambdas.map(|(a, b)| (a * b).powi(2)),
        sliding,
        implications: Implications {
            guas_worst_case: stable,
            gues_unperturbed: stable,
            iss_perturbed: stable,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(bf: f64) -> ConewisePair {
        ConewisePair::new(4000.0, 80.0, 2e6, 20.0 + bf).unwrap()
    }

    #[test]
    fn soft_force_damping_not_certified() {
        let c = certify(&pair(5.0)).unwrap();
        assert_eq!(c.verdict, Verdict::NotCertified);
        // oracle: fine-step simulation of the worst-case system, 114.5760 per rotation
        let l = c.lambda.unwrap();
        assert!((l - 114.576).abs() < 1e-3, "{l}");
        assert_eq!(c.lambda, c.lambda_half.map(|h| h * h));
        assert!(!c.implications.iss_perturbed);
    }

    #[test]
    fn damping_9000_still_expands() {
        // independent transit oracle gives Λ ≈ 1.178, so 9000 is below the threshold
        let c = certify(&pair(9000.0)).unwrap();
        assert_eq!(c.verdict, Verdict::NotCertified);
        assert!((c.lambda.unwrap() - 1.178).abs() < 2e-3, "{:?}", c.lambda);
    }

    #[test]
    fn high_damping_contracts() {
        let c = certify(&pair(12000.0)).unwrap();
        assert_eq!(c.verdict, Verdict::ReturnMapContractive);
        assert!(c.lambda.unwrap() < 1.0);
        assert!(c.implications.gues_unperturbed);
    }

    #[test]
    fn visible_contact_eigenvector() {
        let p = ConewisePair::new(1.0, 10.0, 2.0, 3.0).unwrap();
        let c = certify(&p).unwrap();
        assert_eq!(c.verdict, Verdict::VisibleEigenvectorS2);
        assert_eq!(c.decided_by, Decision::ContactEigenvectorDampingGap);
        assert_eq!(c.visible_eigenvalue, Some(-1.0));
        assert!(c.lambda.is_none());
    }

    #[test]
    fn rejects_non_stiff_pair() {
        let p = ConewisePair {
            k1: 2.0,
            b1: 1.0,
            k2: 1.0,
            b2: 1.0,
        };
        assert!(matches!(certify(&p), Err(ConewiseError::Model(_))));
    }
}
