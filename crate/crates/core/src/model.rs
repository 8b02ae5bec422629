//! Physical and controller parameters of the contact degree of freedom and the
//! closed-loop switched error system assembled from them.
//!
//! The error state is `z = (x_d - x, xdot_d - xdot)`. In free motion it evolves
//! with `A_1 = [[0, 1], [-K1, -B1]]`, in contact with `A_2 = [[0, 1], [-K2, -B2]]`,
//! both driven through `N = [0, 1]^T` by a bounded perturbation `w_i(t)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trajectory::{DesiredTrajectory, TrajectoryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parameter `{name}` = {value} is invalid: {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("contact stiffness term K2 = {k2} does not exceed free-motion stiffness K1 = {k1}; the worst-case analysis needs K2 > K1")]
    NonStiffRegime { k1: f64, k2: f64 },
    #[error("contact-mode perturbation queried at t = {t} where F_d = {force} is not positive")]
    ModeOutsideDomain { t: f64, force: f64 },
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

fn positive(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            requirement: "must be finite and > 0",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            requirement: "must be finite and >= 0",
        })
    }
}

/// Active subsystem of the switched system: free motion (`A_1`) or contact (`A_2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Free,
    Contact,
}

impl Mode {
    /// 1 for free motion, 2 for contact.
    pub fn index(self) -> u8 {
        match self {
            Mode::Free => 1,
            Mode::Contact => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Mode> {
        match i {
            1 => Some(Mode::Free),
            2 => Some(Mode::Contact),
            _ => None,
        }
    }
}

/// Rigid manipulator: `M xddot + b xdot = F_c - F_e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RigidPlant {
    /// Equivalent mass `M` (kg).
    pub mass: f64,
    /// Viscous joint friction `b` (N s/m). Zero is admitted.
    pub friction: f64,
}

impl RigidPlant {
    pub fn new(mass: f64, friction: f64) -> Result<Self, ModelError> {
        let p = Self { mass, friction };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        positive("plant.mass", self.mass)?;
        non_negative("plant.friction", self.friction)
    }
}

/// Kelvin-Voigt wall at `x = 0`, in contact for `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    /// `k_e` (N/m).
    pub stiffness: f64,
    /// `b_e` (N s/m).
    pub damping: f64,
}

impl Environment {
    pub fn new(stiffness: f64, damping: f64) -> Result<Self, ModelError> {
        let e = Self { stiffness, damping };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        positive("environment.stiffness", self.stiffness)?;
        non_negative("environment.damping", self.damping)
    }

    /// One-sided spring-damper force; zero whenever `x <= 0`.
    pub fn force(&self, x: f64, v: f64) -> f64 {
        if x > 0.0 {
            self.stiffness * x + self.damping * v
        } else {
            0.0
        }
    }
}

/// Gains of the switched motion/force controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerGains {
    /// Mass estimate `M_a` used for acceleration feedforward (kg).
    pub mass_estimate: f64,
    /// `k_p` (N/m).
    pub kp: f64,
    /// `k_d` (N s/m).
    pub kd: f64,
    /// Force feedback gain `k_f` (dimensionless).
    pub kf: f64,
    /// Contact damping `b_f` (N s/m).
    pub bf: f64,
}

impl ControllerGains {
    pub fn validate(&self) -> Result<(), ModelError> {
        positive("gains.mass_estimate", self.mass_estimate)?;
        positive("gains.kp", self.kp)?;
        positive("gains.kd", self.kd)?;
        positive("gains.kf", self.kf)?;
        positive("gains.bf", self.bf)
    }

    /// Free-motion law: `M_a xddot_d + k_d (xdot_d - xdot) + k_p (x_d - x)`.
    pub fn motion_force(&self, x: f64, v: f64, x_d: f64, v_d: f64, a_d: f64) -> f64 {
        self.mass_estimate * a_d + self.kd * (v_d - v) + self.kp * (x_d - x)
    }

    /// Contact law: `F_d + k_f (F_d - F_e) - b_f xdot`.
    pub fn force_control(&self, v: f64, f_e: f64, f_d: f64) -> f64 {
        f_d + self.kf * (f_d - f_e) - self.bf * v
    }
}

/// Estimates of the environment used to map desired force to a virtual position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvEstimates {
    pub stiffness: f64,
    pub damping: f64,
}

impl EnvEstimates {
    pub fn validate(&self) -> Result<(), ModelError> {
        positive("estimates.stiffness", self.stiffness)?;
        // divides the position filter
        positive("estimates.damping", self.damping)
    }

    /// `w_f = (k̂_e - k_e) x_d + (b̂_e - b_e) xdot_d`.
    pub fn force_mismatch(&self, env: &Environment, x_d: f64, v_d: f64) -> f64 {
        (self.stiffness - env.stiffness) * x_d + (self.damping - env.damping) * v_d
    }
}

/// Passive compliant wrist between the arm and a light end-effector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WristParams {
    /// End-effector mass `M_t` (kg).
    pub mass: f64,
    /// `k_t` (N/m).
    pub stiffness: f64,
    /// `b_t` (N s/m).
    pub damping: f64,
}

/// One violated time-scale separation assumption of the wrist design.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleWarning {
    pub assumption: &'static str,
    pub ratio: f64,
}

/// A ratio above this counts as "not much smaller".
const SCALE_SEPARATION: f64 = 0.1;

impl WristParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        positive("wrist.mass", self.mass)?;
        positive("wrist.stiffness", self.stiffness)?;
        positive("wrist.damping", self.damping)
    }

    /// Checks `M_t << M`, `k_t << k_e`, `b_t >> b_e` and `b_t / k_e << 1 s`.
    /// Violations are logged and returned; they never reject the design.
    pub fn scale_warnings(&self, plant: &RigidPlant, env: &Environment) -> Vec<ScaleWarning> {
        let mut checks = vec![
            ("M_t << M", self.mass / plant.mass),
            ("k_t << k_e", self.stiffness / env.stiffness),
            ("b_t / k_e << 1 s", self.damping / env.stiffness),
        ];
        if env.damping > 0.0 {
            checks.push(("b_t >> b_e", env.damping / self.damping));
        }
        let warnings: Vec<ScaleWarning> = checks
            .into_iter()
            .filter(|(_, r)| *r > SCALE_SEPARATION)
            .map(|(assumption, ratio)| ScaleWarning { assumption, ratio })
            .collect();
        for w in &warnings {
            log::warn!(
                "wrist scale assumption `{}` is weak (ratio {:.3})",
                w.assumption,
                w.ratio
            );
        }
        warnings
    }

    /// Internal wrist force `k_t (x - x_t) + b_t (xdot - xdot_t)`.
    pub fn force(&self, x: f64, v: f64, x_tip: f64, v_tip: f64) -> f64 {
        self.stiffness * (x - x_tip) + self.damping * (v - v_tip)
    }
}

/// The four scalars of the planar switched error system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConewisePair {
    pub k1: f64,
    pub b1: f64,
    pub k2: f64,
    pub b2: f64,
}

impl ConewisePair {
    /// Validates positivity and the stiff regime `K2 > K1`.
    pub fn new(k1: f64, b1: f64, k2: f64, b2: f64) -> Result<Self, ModelError> {
        let pair = Self { k1, b1, k2, b2 };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        positive("K1", self.k1)?;
        positive("B1", self.b1)?;
        positive("K2", self.k2)?;
        positive("B2", self.b2)?;
        if self.k2 <= self.k1 {
            return Err(ModelError::NonStiffRegime {
                k1: self.k1,
                k2: self.k2,
            });
        }
        Ok(())
    }

    /// `ΔK = K1 - K2` (negative in the stiff regime).
    pub fn delta_k(&self) -> f64 {
        self.k1 - self.k2
    }

    /// `ΔB = B1 - B2`.
    pub fn delta_b(&self) -> f64 {
        self.b1 - self.b2
    }

    /// `L = sqrt(ΔK² + ΔB²)`.
    pub fn norm(&self) -> f64 {
        self.delta_k().hypot(self.delta_b())
    }

    pub fn stiffness(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Free => self.k1,
            Mode::Contact => self.k2,
        }
    }

    pub fn damping(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Free => self.b1,
            Mode::Contact => self.b2,
        }
    }

    /// Companion matrix `[[0, 1], [-K_i, -B_i]]`.
    pub fn matrix(&self, mode: Mode) -> [[f64; 2]; 2] {
        [[0.0, 1.0], [-self.stiffness(mode), -self.damping(mode)]]
    }

    /// `A_i z + N w`.
    pub fn vector_field(&self, mode: Mode, z: [f64; 2], w: f64) -> [f64; 2] {
        [
            z[1],
            -self.stiffness(mode) * z[0] - self.damping(mode) * z[1] + w,
        ]
    }
}

/// Assembles `(K1, B1, K2, B2)` of the closed loop from the physical parameters.
pub fn closed_loop_matrices(
    plant: &RigidPlant,
    env: &Environment,
    gains: &ControllerGains,
) -> Result<ConewisePair, ModelError> {
    plant.validate()?;
    env.validate()?;
    gains.validate()?;
    let m = plant.mass;
    let b = plant.friction;
    ConewisePair::new(
        gains.kp / m,
        (gains.kd + b) / m,
        (1.0 + gains.kf) * env.stiffness / m,
        ((1.0 + gains.kf) * env.damping + gains.bf + b) / m,
    )
}

/// Environment perceived by the arm through the wrist:
/// `k̄_e = k_t k_e / (k_t + k_e)`, `b̄_e = b_t k_e / (k_t + k_e)`.
pub fn reduced_env(wrist: &WristParams, env: &Environment) -> Environment {
    let share = env.stiffness / (wrist.stiffness + env.stiffness);
    Environment {
        stiffness: wrist.stiffness * share,
        damping: wrist.damping * share,
    }
}

/// Everything needed to evaluate the perturbations `w_1`, `w_2`.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationContext<'a> {
    pub plant: &'a RigidPlant,
    pub gains: &'a ControllerGains,
    pub estimates: &'a EnvEstimates,
    pub env: &'a Environment,
}

impl PerturbationContext<'_> {
    /// `w_1 = ((M - M_a)/M) xddot_d + (b/M) xdot_d`.
    pub fn free(&self, v_d: f64, a_d: f64) -> f64 {
        let m = self.plant.mass;
        (m - self.gains.mass_estimate) / m * a_d + self.plant.friction / m * v_d
    }

    /// `w_2 = xddot_d + ((b_f + b)/M) xdot_d - w_f / M`.
    pub fn contact(&self, x_d: f64, v_d: f64, a_d: f64) -> f64 {
        let m = self.plant.mass;
        let w_f = self.estimates.force_mismatch(self.env, x_d, v_d);
        a_d + (self.gains.bf + self.plant.friction) / m * v_d - w_f / m
    }
}

/// Perturbation of the error system in `mode` at time `t` along `traj`.
pub fn perturbation_w(
    mode: Mode,
    t: f64,
    traj: &DesiredTrajectory,
    ctx: &PerturbationContext<'_>,
) -> Result<f64, ModelError> {
    let s = traj.evaluate(t)?;
    match mode {
        Mode::Free => Ok(ctx.free(s.velocity, s.acceleration)),
        Mode::Contact => {
            if s.force <= 0.0 {
                return Err(ModelError::ModeOutsideDomain { t, force: s.force });
            }
            Ok(ctx.contact(s.position, s.velocity, s.acceleration))
        }
    }
}
