//! Event-driven simulation of the rigid, compliant and reduced closed loops
//! and of the switched error systems.

mod engine;
mod error_system;
mod physical;
pub mod properties;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Mode;
use crate::trajectory::TrajectoryError;

pub use error_system::{
    simulate_error, simulate_switched, simulate_worst_case, AxisCrossing, SwitchingSignal,
};
pub use physical::{
    contact_force, controller_force, simulate_compliant, simulate_reduced, simulate_rigid,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Base integration step (s).
    pub step: f64,
    /// Width of the bracket around a located switch (s).
    pub event_tol: f64,
    /// Runs stop when two switches are closer than this (s).
    pub min_event_sep: f64,
    /// End time (s).
    pub horizon: f64,
    /// Keep every n-th grid point in the output.
    #[serde(default = "one")]
    pub record_every: usize,
}

fn one() -> usize {
    1
}

impl SimConfig {
    /// `event_tol = 1e-4 step` and `min_event_sep = 10 event_tol`.
    pub fn new(step: f64, horizon: f64) -> Self {
        let event_tol = 1e-4 * step;
        Self {
            step,
            event_tol,
            min_event_sep: 10.0 * event_tol,
            horizon,
            record_every: 1,
        }
    }

    pub fn record_every(mut self, n: usize) -> Self {
        self.record_every = n.max(1);
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if !(self.step.is_finite() && self.step > 0.0) {
            return bad("step must be positive");
        }
        if !(self.event_tol > 0.0 && self.event_tol < self.step) {
            return bad("event_tol must lie in (0, step)");
        }
        if !(self.min_event_sep >= self.event_tol) {
            return bad("min_event_sep must be at least event_tol");
        }
        if !self.horizon.is_finite() {
            return bad("horizon must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    ContactMade,
    ContactBroken,
    EnterS1,
    EnterS2,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::ContactMade => "contact_made",
            EventKind::ContactBroken => "contact_broken",
            EventKind::EnterS1 => "enter_s1",
            EventKind::EnterS2 => "enter_s2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchEvent {
    pub time: f64,
    pub kind: EventKind,
    /// Integrator state right after the switch.
    pub state: Vec<f64>,
}

/// Sampled run. Error-coordinate runs without a reference report `x_d = 0`
/// and zero forces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimResult {
    pub time: Vec<f64>,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    /// End-effector position and velocity of the compliant model.
    pub tip: Option<(Vec<f64>, Vec<f64>)>,
    pub x_d: Vec<f64>,
    pub v_d: Vec<f64>,
    /// Tracking error `(x_d - x, xdot_d - xdot)`.
    pub z: Vec<[f64; 2]>,
    pub f_e: Vec<f64>,
    pub f_d: Vec<f64>,
    pub f_c: Vec<f64>,
    pub mode: Vec<Mode>,
    pub events: Vec<SwitchEvent>,
}

impl SimResult {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &SwitchEvent> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn peak_contact_force(&self) -> f64 {
        self.f_e.iter().fold(0.0, |m, f| m.max(f.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("switches at t = {time} s only {separation:e} s apart; run stopped")]
    Zeno {
        time: f64,
        separation: f64,
        partial: Box<SimResult>,
    },
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

impl SimError {
    pub fn partial(&self) -> Option<&SimResult> {
        match self {
            SimError::Zeno { partial, .. } => Some(partial),
            _ => None,
        }
    }
}

pub(crate) fn finish(result: SimResult, zeno: Option<(f64, f64)>) -> Result<SimResult, SimError> {
    match zeno {
        None => Ok(result),
        Some((time, separation)) => Err(SimError::Zeno {
            time,
            separation,
            partial: Box::new(result),
        }),
    }
}
