//! Smallest contact or wrist damping that earns a stability certificate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conewise::{certify, ConewiseError, StabilityCertificate, Verdict};
use crate::model::{
    closed_loop_matrices, reduced_env, ConewisePair, ControllerGains, Environment, ModelError,
    RigidPlant, WristParams,
};

/// Number of points in the coarse scan that precedes bisection.
pub const COARSE_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    /// Force-controller damping `b_f`.
    Bf,
    /// Wrist damping `b_t`, assessed on the reduced model.
    Bt,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Bf => "b_f",
            Parameter::Bt => "b_t",
        }
    }
}

/// Everything held fixed while one damping value varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignContext {
    pub plant: RigidPlant,
    pub env: Environment,
    pub gains: ControllerGains,
    pub wrist: Option<WristParams>,
}

impl DesignContext {
    /// Error-system pair with `parameter` set to `value`.
    pub fn pair(&self, parameter: Parameter, value: f64) -> Result<ConewisePair, DesignError> {
        match parameter {
            Parameter::Bf => {
                let gains = ControllerGains {
                    bf: value,
                    ..self.gains
                };
                Ok(closed_loop_matrices(&self.plant, &self.env, &gains)?)
            }
            Parameter::Bt => {
                let wrist = self.wrist.ok_or_else(|| {
                    DesignError::InvalidSpec("b_t search needs wrist parameters".into())
                })?;
                let wrist = WristParams {
                    damping: value,
                    ..wrist
                };
                wrist.validate()?;
                let env = reduced_env(&wrist, &self.env);
                Ok(closed_loop_matrices(&self.plant, &env, &self.gains)?)
            }
        }
    }

    pub fn certify(
        &self,
        parameter: Parameter,
        value: f64,
    ) -> Result<StabilityCertificate, DesignError> {
        Ok(certify(&self.pair(parameter, value)?)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub parameter: Parameter,
    pub lo: f64,
    pub hi: f64,
    /// Absolute width of the final bracket, in the parameter's units.
    pub tolerance: f64,
    pub context: DesignContext,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<(), DesignError> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(DesignError::InvalidSpec(format!(
                "bracket [{}, {}] must satisfy lo < hi",
                self.lo, self.hi
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(DesignError::InvalidSpec("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("invalid search: {0}")]
    InvalidSpec(String),
    #[error("no bracket: verdict {:?} at both ends", .lo.verdict)]
    NoBracket {
        lo: Box<StabilityCertificate>,
        hi: Box<StabilityCertificate>,
    },
    #[error(transparent)]
    Conewise(#[from] ConewiseError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub value: f64,
    pub certificate: StabilityCertificate,
    /// Largest value found uncertified just below `value`.
    pub below: f64,
}

fn stable(c: &StabilityCertificate) -> bool {
    c.verdict.is_stable()
}

/// Smallest certified parameter value in `[lo, hi]`: coarse scan, then bisection
/// of the first interval where the verdict turns positive.
pub fn find_threshold(spec: &SearchSpec) -> Result<Threshold, DesignError> {
    spec.validate()?;
    let ctx = &spec.context;
    let p = spec.parameter;
    let at_lo = ctx.certify(p, spec.lo)?;
    let at_hi = ctx.certify(p, spec.hi)?;
    if stable(&at_lo) == stable(&at_hi) {
        return Err(DesignError::NoBracket {
            lo: Box::new(at_lo),
            hi: Box::new(at_hi),
        });
    }
    if stable(&at_lo) {
        return Ok(Threshold {
            value: spec.lo,
            certificate: at_lo,
            below: spec.lo,
        });
    }
    let step = (spec.hi - spec.lo) / (COARSE_POINTS - 1) as f64;
    let grid = |i: usize| {
        if i == COARSE_POINTS - 1 {
            spec.hi
        } else {
            spec.lo + i as f64 * step
        }
    };
    let mut lo = spec.lo;
    let mut hi = spec.hi;
    let mut cert_hi = at_hi;
    for i in 1..COARSE_POINTS {
        let c = ctx.certify(p, grid(i))?;
        if stable(&c) {
            lo = grid(i - 1);
            hi = grid(i);
            cert_hi = c;
            break;
        }
    }
    while hi - lo > spec.tolerance {
        let mid = 0.5 * (lo + hi);
        let c = ctx.certify(p, mid)?;
        if stable(&c) {
            hi = mid;
            cert_hi = c;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold {
        value: hi,
        certificate: cert_hi,
        below: lo,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub lambda: Option<f64>,
    pub verdict: Verdict,
}

/// One certificate summary per grid value.
pub fn lambda_sweep(
    context: &DesignContext,
    parameter: Parameter,
    grid: &[f64],
) -> Result<Vec<SweepRow>, DesignError> {
    grid.iter()
        .map(|&value| {
            let c = context.certify(parameter, value)?;
            Ok(SweepRow {
                value,
                lambda1: c.lambda1,
                lambda2: c.lambda2,
                lambda: c.lambda,
                verdict: c.verdict,
            })
        })
        .collect()
}
