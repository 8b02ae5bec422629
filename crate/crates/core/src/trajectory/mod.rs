//! Desired trajectories `(x_d, xdot_d, xddot_d, F_d)` stitched from user profiles.
//!
//! Free-motion segments pass the position profile through a critically damped
//! filter. Contact segments filter the force profile the same way and recover
//! the position from `k̂ x_d + b̂ xdot_d = F_d`, integrated in differentiated form
//! so position and velocity stay continuous at every stitch.

mod profile;
mod validate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{EnvEstimates, Mode};

pub use profile::Profile;
pub use validate::{validate, Reference, StitchResidual, ValidationReport, ValidationTolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("invalid trajectory spec: {0}")]
    InvalidSpec(String),
    #[error("desired force {force} N <= 0 at t = {time} s inside contact interval [{}, {}]", .interval.0, .interval.1)]
    NegativeForceInContact {
        interval: (f64, f64),
        time: f64,
        force: f64,
    },
    #[error("t = {t} s outside the trajectory horizon [{start}, {end}]")]
    OutOfHorizon { t: f64, start: f64, end: f64 },
}

/// Intended contact intervals `[t_c, t_b)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContactSchedule(pub Vec<(f64, f64)>);

impl ContactSchedule {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self, TrajectoryError> {
        let s = Self(intervals);
        s.validate()?;
        Ok(s)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.0
    }

    pub fn validate(&self) -> Result<(), TrajectoryError> {
        let mut prev = f64::NEG_INFINITY;
        for &(tc, tb) in &self.0 {
            if !(tc.is_finite() && tb.is_finite() && tc < tb) {
                return Err(TrajectoryError::InvalidSpec(format!(
                    "contact interval [{tc}, {tb}] must satisfy t_c < t_b"
                )));
            }
            if tc <= prev {
                return Err(TrajectoryError::InvalidSpec(
                    "contact intervals must be increasing and non-overlapping".into(),
                ));
            }
            prev = tb;
        }
        Ok(())
    }

    pub fn contains(&self, t: f64) -> bool {
        self.0.iter().any(|&(tc, tb)| t >= tc && t < tb)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySpec {
    /// User free-motion position profile (m).
    pub position: Profile,
    /// User contact force profile (N).
    pub force: Profile,
    pub schedule: ContactSchedule,
    pub estimates: EnvEstimates,
    #[serde(default)]
    pub start: f64,
    pub horizon: f64,
    /// Force filter bandwidth `γ1` (1/s); defaults to ten over the shortest segment.
    #[serde(default)]
    pub gamma_force: Option<f64>,
    /// Position filter bandwidth `γ2` (1/s); same default.
    #[serde(default)]
    pub gamma_position: Option<f64>,
    /// Filter integration step; defaults to the largest stable-and-accurate step.
    #[serde(default)]
    pub filter_step: Option<f64>,
    /// `(x_d, xdot_d)` at `start`; defaults to the position profile and its slope.
    #[serde(default)]
    pub initial: Option<(f64, f64)>,
}

impl TrajectorySpec {
    pub fn validate(&self) -> Result<(), TrajectoryError> {
        self.position.validate()?;
        self.force.validate()?;
        self.schedule.validate()?;
        self.estimates
            .validate()
            .map_err(|e| TrajectoryError::InvalidSpec(e.to_string()))?;
        if !(self.start.is_finite() && self.horizon.is_finite() && self.start < self.horizon) {
            return Err(TrajectoryError::InvalidSpec(
                "horizon must exceed start".into(),
            ));
        }
        if let (Some(&(tc, _)), Some(&(_, tb))) = (self.schedule.0.first(), self.schedule.0.last())
        {
            if tc < self.start || tb > self.horizon {
                return Err(TrajectoryError::InvalidSpec(
                    "contact schedule must lie within [start, horizon]".into(),
                ));
            }
        }
        for (name, g) in [
            ("gamma_force", self.gamma_force),
            ("gamma_position", self.gamma_position),
            ("filter_step", self.filter_step),
        ] {
            if let Some(g) = g {
                if !(g.is_finite() && g > 0.0) {
                    return Err(TrajectoryError::InvalidSpec(format!("{name} must be positive")));
                }
            }
        }
        Ok(())
    }

    /// Segment boundaries `start = s_0 < s_1 < ... = horizon` with their modes.
    fn segments(&self) -> Vec<(Mode, f64, f64)> {
        let mut out = Vec::new();
        let mut t = self.start;
        for &(tc, tb) in &self.schedule.0 {
            if tc > t {
                out.push((Mode::Free, t, tc));
            }
            out.push((Mode::Contact, tc, tb));
            t = tb;
        }
        if self.horizon > t {
            out.push((Mode::Free, t, self.horizon));
        }
        out
    }

    /// Default bandwidth: ten over the shortest segment duration.
    pub fn default_gamma(&self) -> f64 {
        let shortest = self
            .segments()
            .iter()
            .map(|s| s.2 - s.1)
            .fold(f64::INFINITY, f64::min);
        10.0 / shortest
    }

    pub fn gammas(&self) -> (f64, f64) {
        let g = self.default_gamma();
        (self.gamma_force.unwrap_or(g), self.gamma_position.unwrap_or(g))
    }

    /// Largest filter step: `1/(20 γ)` for both filters and a tenth of the
    /// position-from-force time constant `b̂/k̂`.
    pub fn max_filter_step(&self) -> f64 {
        let (g1, g2) = self.gammas();
        let tau = self.estimates.damping / self.estimates.stiffness;
        let h = (1.0 / (20.0 * g1)).min(1.0 / (20.0 * g2)).min(0.1 * tau);
        self.filter_step.map_or(h, |s| s.min(h))
    }
}

/// Desired values at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub position: f64,
    pub velocity: f64,
    pub acceleration: f64,
    /// Zero in free motion.
    pub force: f64,
    pub mode: Mode,
}

type State = [f64; 4];

#[derive(Debug, Clone)]
struct Segment {
    mode: Mode,
    t0: f64,
    t1: f64,
    step: f64,
    /// Filter states at `t0 + k step`; free segments use the first two entries `(y3, ẏ3)`,
    /// contact segments `(y1, ẏ1, y2, ẏ2)`.
    nodes: Vec<State>,
}

#[derive(Debug, Clone)]
struct Filters {
    position: Profile,
    force: Profile,
    g1: f64,
    g2: f64,
    k_hat: f64,
    b_hat: f64,
}

impl Filters {
    fn rhs(&self, mode: Mode, t: f64, s: &State) -> State {
        match mode {
            Mode::Free => {
                let g = self.g2;
                [
                    s[1],
                    -2.0 * g * s[1] - g * g * (s[0] - self.position.value(t)),
                    0.0,
                    0.0,
                ]
            }
            Mode::Contact => {
                let g = self.g1;
                [
                    s[1],
                    -2.0 * g * s[1] - g * g * (s[0] - self.force.value(t)),
                    s[3],
                    (-self.k_hat * s[3] + s[1]) / self.b_hat,
                ]
            }
        }
    }

    fn rk4(&self, mode: Mode, t: f64, s: &State, h: f64) -> State {
        let add = |a: &State, k: &State, c: f64| -> State {
            [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2], a[3] + c * k[3]]
        };
        let k1 = self.rhs(mode, t, s);
        let k2 = self.rhs(mode, t + 0.5 * h, &add(s, &k1, 0.5 * h));
        let k3 = self.rhs(mode, t + 0.5 * h, &add(s, &k2, 0.5 * h));
        let k4 = self.rhs(mode, t + h, &add(s, &k3, h));
        let mut out = *s;
        for i in 0..4 {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    }

    fn sample(&self, mode: Mode, t: f64, s: &State) -> Sample {
        let d = self.rhs(mode, t, s);
        match mode {
            Mode::Free => Sample {
                time: t,
                position: s[0],
                velocity: s[1],
                acceleration: d[1],
                force: 0.0,
                mode,
            },
            Mode::Contact => Sample {
                time: t,
                position: s[2],
                velocity: s[3],
                acceleration: d[3],
                force: s[0],
                mode,
            },
        }
    }
}

/// Stitched desired trajectory, evaluable anywhere in `[start, horizon]`.
#[derive(Debug, Clone)]
pub struct DesiredTrajectory {
    filters: Filters,
    segments: Vec<Segment>,
    schedule: ContactSchedule,
}

/// Integrates the stitching filters over the whole horizon.
pub fn design(spec: &TrajectorySpec) -> Result<DesiredTrajectory, TrajectoryError> {
    spec.validate()?;
    let (g1, g2) = spec.gammas();
    let filters = Filters {
        position: spec.position.clone(),
        force: spec.force.clone(),
        g1,
        g2,
        k_hat: spec.estimates.stiffness,
        b_hat: spec.estimates.damping,
    };
    let h_max = spec.max_filter_step();
    let (x0, v0) = spec.initial.unwrap_or_else(|| {
        (
            spec.position.value(spec.start),
            spec.position.derivative(spec.start),
        )
    });
    // (x_d, xdot_d, xddot_d) just before the next segment
    let mut left = (x0, v0, 0.0);
    let mut segments: Vec<Segment> = Vec::new();
    for (mode, t0, t1) in spec.segments() {
        let n = ((t1 - t0) / h_max).ceil().max(1.0) as usize;
        let step = (t1 - t0) / n as f64;
        let (x, v, a) = left;
        let first = match mode {
            Mode::Free => [x, v, 0.0, 0.0],
            Mode::Contact => [
                filters.k_hat * x + filters.b_hat * v,
                filters.k_hat * v + filters.b_hat * a,
                x,
                v,
            ],
        };
        let mut nodes = Vec::with_capacity(n + 1);
        nodes.push(first);
        for k in 0..n {
            let t = t0 + k as f64 * step;
            let next = filters.rk4(mode, t, &nodes[k], step);
            nodes.push(next);
        }
        if mode == Mode::Contact {
            for (k, s) in nodes.iter().enumerate().take(n) {
                if !(s[0] > 0.0) {
                    return Err(TrajectoryError::NegativeForceInContact {
                        interval: (t0, t1),
                        time: t0 + k as f64 * step,
                        force: s[0],
                    });
                }
            }
        }
        let end = filters.sample(mode, t1, &nodes[n]);
        left = (end.position, end.velocity, end.acceleration);
        segments.push(Segment {
            mode,
            t0,
            t1,
            step,
            nodes,
        });
    }
    Ok(DesiredTrajectory {
        filters,
        segments,
        schedule: spec.schedule.clone(),
    })
}

impl DesiredTrajectory {
    pub fn start(&self) -> f64 {
        self.segments[0].t0
    }

    pub fn horizon(&self) -> f64 {
        self.segments[self.segments.len() - 1].t1
    }

    pub fn schedule(&self) -> &ContactSchedule {
        &self.schedule
    }

    /// Force and position filter bandwidths `(γ1, γ2)`.
    pub fn gammas(&self) -> (f64, f64) {
        (self.filters.g1, self.filters.g2)
    }

    /// Interior segment boundaries.
    pub fn stitch_times(&self) -> Vec<f64> {
        self.segments.iter().skip(1).map(|s| s.t0).collect()
    }

    fn at(&self, seg: &Segment, t: f64) -> Sample {
        let n = seg.nodes.len() - 1;
        let k = (((t - seg.t0) / seg.step).floor().max(0.0) as usize).min(n);
        let tk = seg.t0 + k as f64 * seg.step;
        let dt = t - tk;
        let state = if dt == 0.0 {
            seg.nodes[k]
        } else {
            self.filters.rk4(seg.mode, tk, &seg.nodes[k], dt)
        };
        self.filters.sample(seg.mode, t, &state)
    }

    /// Values at `t`; stitch instants belong to the segment they start.
    pub fn evaluate(&self, t: f64) -> Result<Sample, TrajectoryError> {
        let (start, end) = (self.start(), self.horizon());
        if !(t >= start && t <= end) {
            return Err(TrajectoryError::OutOfHorizon { t, start, end });
        }
        let i = self.segments.partition_point(|s| s.t0 <= t).max(1) - 1;
        Ok(self.at(&self.segments[i], t))
    }

    /// Limit from the left at `t`, taken from the segment ending at `t`.
    pub fn evaluate_left(&self, t: f64) -> Result<Sample, TrajectoryError> {
        let (start, end) = (self.start(), self.horizon());
        if !(t > start && t <= end) {
            return Err(TrajectoryError::OutOfHorizon { t, start, end });
        }
        let i = self.segments.partition_point(|s| s.t0 < t) - 1;
        Ok(self.at(&self.segments[i], t))
    }

    /// Maximum of `|k̂ x_d + b̂ xdot_d - F_d|` over the filter nodes of all contact segments.
    pub fn contact_residual(&self) -> f64 {
        let (k, b) = (self.filters.k_hat, self.filters.b_hat);
        self.segments
            .iter()
            .filter(|s| s.mode == Mode::Contact)
            .flat_map(|s| s.nodes.iter())
            .map(|s| (k * s[2] + b * s[3] - s[0]).abs())
            .fold(0.0, f64::max)
    }

    pub fn estimates(&self) -> EnvEstimates {
        EnvEstimates {
            stiffness: self.filters.k_hat,
            damping: self.filters.b_hat,
        }
    }
}

impl Reference for DesiredTrajectory {
    fn span(&self) -> (f64, f64) {
        (self.start(), self.horizon())
    }

    fn sample(&self, t: f64) -> Result<Sample, TrajectoryError> {
        self.evaluate(t)
    }

    fn sample_left(&self, t: f64) -> Result<Sample, TrajectoryError> {
        self.evaluate_left(t)
    }

    fn stitch_times(&self) -> Vec<f64> {
        DesiredTrajectory::stitch_times(self)
    }

    fn contact_intervals(&self) -> Vec<(f64, f64)> {
        self.schedule.0.clone()
    }

    fn estimates(&self) -> EnvEstimates {
        DesiredTrajectory::estimates(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(force: Profile) -> TrajectorySpec {
        TrajectorySpec {
            position: Profile::Ramp {
                start: 0.0,
                value: -0.0176,
                slope: 0.1333,
            },
            force,
            schedule: ContactSchedule::new(vec![(0.15, 0.30)]).unwrap(),
            estimates: EnvEstimates {
                stiffness: 1e3,
                damping: 10.0,
            },
            start: 0.0,
            horizon: 0.4,
            gamma_force: None,
            gamma_position: None,
            filter_step: None,
            initial: None,
        }
    }

    #[test]
    fn default_bandwidth_from_shortest_segment() {
        let s = spec(Profile::Constant { value: 7.0 });
        assert!((s.default_gamma() - 100.0).abs() < 1e-9);
        assert!((s.max_filter_step() - 5e-4).abs() < 1e-15);
    }

    #[test]
    fn constant_force_settles() {
        let mut s = spec(Profile::Constant { value: 7.0 });
        s.gamma_force = Some(400.0);
        let tr = design(&s).unwrap();
        let f = tr.evaluate(0.2999).unwrap().force;
        assert!((f - 7.0).abs() < 1e-6, "{f}");
    }

    #[test]
    fn free_motion_has_no_force() {
        let tr = design(&spec(Profile::Constant { value: 7.0 })).unwrap();
        assert_eq!(tr.evaluate(0.1).unwrap().force, 0.0);
        assert_eq!(tr.evaluate(0.35).unwrap().force, 0.0);
        assert_eq!(tr.evaluate(0.1).unwrap().mode, Mode::Free);
    }

    #[test]
    fn stitch_instant_belongs_to_contact() {
        let tr = design(&spec(Profile::Constant { value: 7.0 })).unwrap();
        let s = tr.evaluate(0.15).unwrap();
        assert_eq!(s.mode, Mode::Contact);
        let l = tr.evaluate_left(0.15).unwrap();
        assert_eq!(l.mode, Mode::Free);
        assert!((s.position - l.position).abs() <= 1e-12);
        assert!((s.velocity - l.velocity).abs() <= 1e-12);
    }

    #[test]
    fn repeated_evaluation_identical() {
        let tr = design(&spec(Profile::Constant { value: 7.0 })).unwrap();
        let a = tr.evaluate(0.2123456).unwrap();
        let b = tr.evaluate(0.2123456).unwrap();
        assert_eq!(a.position.to_bits(), b.position.to_bits());
        assert_eq!(a.acceleration.to_bits(), b.acceleration.to_bits());
    }

    #[test]
    fn out_of_horizon() {
        let tr = design(&spec(Profile::Constant { value: 7.0 })).unwrap();
        assert!(matches!(
            tr.evaluate(0.41),
            Err(TrajectoryError::OutOfHorizon { .. })
        ));
        assert!(tr.evaluate(0.4).is_ok());
        assert!(tr.evaluate(-1e-9).is_err());
    }

    #[test]
    fn negative_force_rejected() {
        let f = Profile::sampled(&[(0.15, 3.0), (0.2, 3.0), (0.21, -1.0), (0.24, -1.0), (0.25, 3.0)]);
        match design(&spec(f)) {
            Err(TrajectoryError::NegativeForceInContact { interval, time, .. }) => {
                assert_eq!(interval, (0.15, 0.30));
                assert!(time > 0.2 && time < 0.3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contact_relation_holds() {
        let f = Profile::sampled(&[(0.15, 0.0), (0.225, 7.0), (0.30, 0.0)]);
        let tr = design(&spec(f)).unwrap();
        let est = tr.estimates();
        for i in 0..=1500 {
            let t = 0.15 + i as f64 * 1e-4;
            if t >= 0.30 {
                break;
            }
            let s = tr.evaluate(t).unwrap();
            let r = est.stiffness * s.position + est.damping * s.velocity - s.force;
            assert!(r.abs() <= 1e-9, "t={t} r={r}");
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(ContactSchedule::new(vec![(0.2, 0.1)]).is_err());
        assert!(ContactSchedule::new(vec![(0.1, 0.2), (0.15, 0.3)]).is_err());
        assert!(ContactSchedule::new(vec![(0.1, 0.2), (0.2, 0.3)]).is_err());
        assert!(ContactSchedule::new(vec![(0.1, 0.2), (0.25, 0.3)]).is_ok());
    }
}
