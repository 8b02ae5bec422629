//! Planar conewise-linear stability analysis of the switched error system.

mod certificate;
mod eigen;
mod lambda;
mod regions;

use thiserror::Error;

use crate::model::{ModelError, Mode};

pub use certificate::{certify, Decision, Implications, StabilityCertificate, Verdict};
pub use eigen::{eigenstructure, Eigenstructure, REPEATED_ROOT_TOL};
pub use lambda::{
    ccw_angle, lambda_closed_form, lambda_general, worst_case_cones, Cone, Mat2,
};
pub use regions::{
    region_of, sliding_consistency, visible_eigenvector_check, worst_case_indicator, Region,
    SlidingReport, Visibility, SLIDING_IDENTITY_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConewiseError {
    #[error("eigenstructure needs K > 0 and B > 0, got K = {k}, B = {b}")]
    Domain { k: f64, b: f64 },
    #[error("cone of {0:?} dynamics has a visible eigenvector; the exit ray is reached only asymptotically")]
    DegenerateCone(Mode),
    #[error("trajectory never leaves the cone: an eigenvector of its matrix lies inside")]
    VisibleEigenvector,
    #[error("repeated eigenvalue with two independent eigenvectors is not supported")]
    UnsupportedJordanForm,
    #[error("the flow points out of the cone at its entry ray")]
    FlowLeavesCone,
    #[error("invalid cone: {0}")]
    InvalidCone(&'static str),
    #[error("switching surfaces admit a sliding mode: {0:?}")]
    SlidingInconsistency(SlidingReport),
    #[error(transparent)]
    Model(#[from] ModelError),
}
