use crate::model::EnvEstimates;

use super::{Sample, TrajectoryError};

/// Anything that can be checked as a desired trajectory.
pub trait Reference {
    fn span(&self) -> (f64, f64);
    fn sample(&self, t: f64) -> Result<Sample, TrajectoryError>;
    /// Limit from the left at a stitch time.
    fn sample_left(&self, t: f64) -> Result<Sample, TrajectoryError>;
    fn stitch_times(&self) -> Vec<f64>;
    fn contact_intervals(&self) -> Vec<(f64, f64)>;
    fn estimates(&self) -> EnvEstimates;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationTolerances {
    /// Allowed position (m) and velocity (m/s) jump at a stitch.
    pub continuity: f64,
    /// Allowed contact-relation residual relative to the peak desired force.
    pub relation: f64,
    /// Upper bound on `|xddot_d|`.
    pub acceleration_bound: f64,
    /// Number of grid intervals over the horizon.
    pub grid: usize,
}

impl Default for ValidationTolerances {
    fn default() -> Self {
        Self {
            continuity: 1e-9,
            relation: 1e-6,
            acceleration_bound: 1e6,
            grid: 40_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StitchResidual {
    pub time: f64,
    pub position_jump: f64,
    pub velocity_jump: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub stitches: Vec<StitchResidual>,
    pub max_position_jump: f64,
    pub max_velocity_jump: f64,
    pub max_acceleration: f64,
    /// Largest `|k̂ x_d + b̂ xdot_d - F_d|` sampled inside contact intervals.
    pub max_relation_residual: f64,
    pub max_force: f64,
    /// First stitch time violating continuity.
    pub discontinuity_at: Option<f64>,
    pub passed: bool,
}

/// Checks continuity at every stitch, boundedness of the acceleration and the
/// contact relation on a uniform grid.
pub fn validate<R: Reference + ?Sized>(
    traj: &R,
    tol: &ValidationTolerances,
) -> Result<ValidationReport, TrajectoryError> {
    let mut stitches = Vec::new();
    let mut discontinuity_at = None;
    for t in traj.stitch_times() {
        let right = traj.sample(t)?;
        let left = traj.sample_left(t)?;
        let r = StitchResidual {
            time: t,
            position_jump: (right.position - left.position).abs(),
            velocity_jump: (right.velocity - left.velocity).abs(),
        };
        let ok = r.position_jump <= tol.continuity && r.velocity_jump <= tol.continuity;
        if !ok && discontinuity_at.is_none() {
            discontinuity_at = Some(t);
        }
        stitches.push(r);
    }
    let (start, end) = traj.span();
    let est = traj.estimates();
    let intervals = traj.contact_intervals();
    let n = tol.grid.max(1);
    let mut max_acceleration: f64 = 0.0;
    let mut max_relation_residual: f64 = 0.0;
    let mut max_force: f64 = 0.0;
    for i in 0..=n {
        let t = start + (end - start) * i as f64 / n as f64;
        let s = traj.sample(t)?;
        max_acceleration = max_acceleration.max(s.acceleration.abs());
        if intervals.iter().any(|&(tc, tb)| t >= tc && t < tb) {
            max_force = max_force.max(s.force);
            let r = est.stiffness * s.position + est.damping * s.velocity - s.force;
            max_relation_residual = max_relation_residual.max(r.abs());
        }
    }
    let max_position_jump = stitches.iter().map(|s| s.position_jump).fold(0.0, f64::max);
    let max_velocity_jump = stitches.iter().map(|s| s.velocity_jump).fold(0.0, f64::max);
    let passed = discontinuity_at.is_none()
        && max_acceleration.is_finite()
        && max_acceleration <= tol.acceleration_bound
        && max_relation_residual <= tol.relation * max_force.max(f64::MIN_POSITIVE);
    Ok(ValidationReport {
        stitches,
        max_position_jump,
        max_velocity_jump,
        max_acceleration,
        max_relation_residual,
        max_force,
        discontinuity_at,
        passed,
    })
}
