use crate::model::{
    reduced_env, ControllerGains, Environment, Mode, RigidPlant, WristParams,
};
use crate::trajectory::{DesiredTrajectory, Sample, TrajectoryError};

use super::engine::{self, Hybrid, Trace};
use super::{finish, EventKind, SimConfig, SimError, SimResult, SwitchEvent};

/// Kelvin-Voigt force: zero for `x <= 0`, `k_e x + b_e xdot` otherwise.
pub fn contact_force(x: f64, v: f64, env: &Environment) -> f64 {
    env.force(x, v)
}

fn command(mode: Mode, s: &Sample, x: f64, v: f64, f_e: f64, gains: &ControllerGains) -> f64 {
    match mode {
        Mode::Free => gains.motion_force(x, v, s.position, s.velocity, s.acceleration),
        Mode::Contact => gains.force_control(v, f_e, s.force),
    }
}

/// Switched controller output at `t`, in motion mode for `x <= 0` and force mode otherwise.
pub fn controller_force(
    t: f64,
    x: f64,
    v: f64,
    f_e: f64,
    traj: &DesiredTrajectory,
    gains: &ControllerGains,
) -> Result<f64, TrajectoryError> {
    let s = traj.evaluate(t)?;
    let mode = if x > 0.0 { Mode::Contact } else { Mode::Free };
    Ok(command(mode, &s, x, v, f_e, gains))
}

/// Reference lookup clamped to the trajectory span, which the caller has checked.
fn reference(traj: &DesiredTrajectory, t: f64) -> Sample {
    let t = t.clamp(traj.start(), traj.horizon());
    traj.evaluate(t).expect("time clamped into the trajectory span")
}

fn check_span(traj: &DesiredTrajectory, cfg: &SimConfig) -> Result<(), SimError> {
    cfg.validate()?;
    if cfg.horizon > traj.horizon() + 1e-12 {
        return Err(SimError::InvalidConfig(format!(
            "simulation horizon {} exceeds the trajectory horizon {}",
            cfg.horizon,
            traj.horizon()
        )));
    }
    Ok(())
}

struct Rigid<'a> {
    plant: &'a RigidPlant,
    env: Environment,
    gains: &'a ControllerGains,
    traj: &'a DesiredTrajectory,
}

impl Rigid<'_> {
    /// Wall force with the branch fixed by `mode`, so the vector field is smooth within a step.
    fn wall(&self, mode: Mode, x: f64, v: f64) -> f64 {
        match mode {
            Mode::Free => 0.0,
            Mode::Contact => self.env.stiffness * x + self.env.damping * v,
        }
    }
}

impl Hybrid<2> for Rigid<'_> {
    fn rhs(&self, mode: Mode, t: f64, s: &[f64; 2]) -> [f64; 2] {
        let r = reference(self.traj, t);
        let f_e = self.wall(mode, s[0], s[1]);
        let f_c = command(mode, &r, s[0], s[1], f_e, self.gains);
        [
            s[1],
            (f_c - f_e - self.plant.friction * s[1]) / self.plant.mass,
        ]
    }

    fn guard(&self, _t: f64, s: &[f64; 2]) -> f64 {
        s[0]
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.traj.stitch_times()
    }
}

struct Compliant<'a> {
    plant: &'a RigidPlant,
    wrist: &'a WristParams,
    env: &'a Environment,
    gains: &'a ControllerGains,
    traj: &'a DesiredTrajectory,
}

impl Compliant<'_> {
    fn wall(&self, mode: Mode, xt: f64, vt: f64) -> f64 {
        match mode {
            Mode::Free => 0.0,
            Mode::Contact => self.env.stiffness * xt + self.env.damping * vt,
        }
    }
}

impl Hybrid<4> for Compliant<'_> {
    fn rhs(&self, mode: Mode, t: f64, s: &[f64; 4]) -> [f64; 4] {
        let r = reference(self.traj, t);
        let f_e = self.wall(mode, s[2], s[3]);
        let f_t = self.wrist.force(s[0], s[1], s[2], s[3]);
        let f_c = command(mode, &r, s[0], s[1], f_e, self.gains);
        [
            s[1],
            (f_c - f_t - self.plant.friction * s[1]) / self.plant.mass,
            s[3],
            (f_t - f_e) / self.wrist.mass,
        ]
    }

    // switching on end-effector penetration
    fn guard(&self, _t: f64, s: &[f64; 4]) -> f64 {
        s[2]
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.traj.stitch_times()
    }
}

fn contact_kind(to: Mode) -> EventKind {
    match to {
        Mode::Contact => EventKind::ContactMade,
        Mode::Free => EventKind::ContactBroken,
    }
}

fn events<const N: usize>(trace: &Trace<N>) -> Vec<SwitchEvent> {
    trace
        .events
        .iter()
        .map(|e| SwitchEvent {
            time: e.time,
            kind: contact_kind(e.to),
            state: e.state.to_vec(),
        })
        .collect()
}

fn assemble<const N: usize>(
    trace: &Trace<N>,
    traj: &DesiredTrajectory,
    gains: &ControllerGains,
    env: &Environment,
    tip: bool,
) -> SimResult {
    let n = trace.time.len();
    let mut out = SimResult {
        time: trace.time.clone(),
        x: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        tip: tip.then(|| (Vec::with_capacity(n), Vec::with_capacity(n))),
        x_d: Vec::with_capacity(n),
        v_d: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
        f_e: Vec::with_capacity(n),
        f_d: Vec::with_capacity(n),
        f_c: Vec::with_capacity(n),
        mode: trace.mode.clone(),
        events: events(trace),
    };
    for i in 0..n {
        let s = &trace.state[i];
        let (x, v) = (s[0], s[1]);
        let (cx, cv) = if tip { (s[2], s[3]) } else { (x, v) };
        if let Some((xt, vt)) = out.tip.as_mut() {
            xt.push(cx);
            vt.push(cv);
        }
        let r = reference(traj, trace.time[i]);
        let f_e = env.force(cx, cv);
        out.x.push(x);
        out.v.push(v);
        out.x_d.push(r.position);
        out.v_d.push(r.velocity);
        out.z.push([r.position - x, r.velocity - v]);
        out.f_e.push(f_e);
        out.f_d.push(r.force);
        out.f_c.push(command(trace.mode[i], &r, x, v, f_e, gains));
    }
    out
}

/// Rigid closed loop `M xddot + b xdot = F_c - F_e` from `ic = (x, xdot)`.
pub fn simulate_rigid(
    plant: &RigidPlant,
    env: &Environment,
    gains: &ControllerGains,
    traj: &DesiredTrajectory,
    ic: (f64, f64),
    cfg: &SimConfig,
) -> Result<SimResult, SimError> {
    plant.validate()?;
    env.validate()?;
    gains.validate()?;
    check_span(traj, cfg)?;
    let sys = Rigid {
        plant,
        env: *env,
        gains,
        traj,
    };
    let trace = engine::run(&sys, traj.start(), [ic.0, ic.1], cfg);
    finish(assemble(&trace, traj, gains, env, false), trace.zeno)
}

/// Arm plus compliant wrist and end-effector, from `ic = (x, xdot, x_t, xdot_t)`.
/// The wall acts on the end-effector; the controller keeps feeding back the arm state.
pub fn simulate_compliant(
    plant: &RigidPlant,
    wrist: &WristParams,
    env: &Environment,
    gains: &ControllerGains,
    traj: &DesiredTrajectory,
    ic: (f64, f64, f64, f64),
    cfg: &SimConfig,
) -> Result<SimResult, SimError> {
    plant.validate()?;
    wrist.validate()?;
    env.validate()?;
    gains.validate()?;
    check_span(traj, cfg)?;
    wrist.scale_warnings(plant, env);
    let sys = Compliant {
        plant,
        wrist,
        env,
        gains,
        traj,
    };
    let trace = engine::run(&sys, traj.start(), [ic.0, ic.1, ic.2, ic.3], cfg);
    finish(assemble(&trace, traj, gains, env, true), trace.zeno)
}

/// Rigid closed loop against the environment perceived through the wrist.
pub fn simulate_reduced(
    plant: &RigidPlant,
    wrist: &WristParams,
    env: &Environment,
    gains: &ControllerGains,
    traj: &DesiredTrajectory,
    ic: (f64, f64),
    cfg: &SimConfig,
) -> Result<SimResult, SimError> {
    wrist.validate()?;
    env.validate()?;
    simulate_rigid(plant, &reduced_env(wrist, env), gains, traj, ic, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EnvEstimates;
    use crate::trajectory::{design, ContactSchedule, Profile, TrajectorySpec};

    fn gains(bf: f64) -> ControllerGains {
        ControllerGains {
            mass_estimate: 0.8,
            kp: 4000.0,
            kd: 80.0,
            kf: 1.0,
            bf,
        }
    }

    #[test]
    fn wall_force_branches() {
        let env = Environment::new(1e6, 10.0).unwrap();
        assert_eq!(contact_force(-0.01, 5.0, &env), 0.0);
        assert!((contact_force(1e-3, 0.0, &env) - 1000.0).abs() < 1e-9);
        assert!((contact_force(1e-3, 0.1, &env) - 1001.0).abs() < 1e-9);
    }

    fn free_traj() -> DesiredTrajectory {
        free_traj_step(None)
    }

    fn free_traj_step(filter_step: Option<f64>) -> DesiredTrajectory {
        design(&TrajectorySpec {
            position: Profile::CubicEase {
                t0: 0.0,
                t1: 0.1,
                from: -0.05,
                to: -0.02,
            },
            force: Profile::Constant { value: 0.0 },
            schedule: ContactSchedule::default(),
            estimates: EnvEstimates {
                stiffness: 1e3,
                damping: 10.0,
            },
            start: 0.0,
            horizon: 0.2,
            gamma_force: Some(100.0),
            gamma_position: Some(100.0),
            filter_step,
            initial: None,
        })
        .unwrap()
    }

    #[test]
    fn controller_examples() {
        let tr = free_traj();
        let g = gains(5.0);
        let s = tr.evaluate(0.19).unwrap();
        // zero error, nonzero feedforward only
        let f = controller_force(0.19, s.position, s.velocity, 0.0, &tr, &g).unwrap();
        assert!((f - 0.8 * s.acceleration).abs() < 1e-12);
        let f = controller_force(0.19, s.position - 0.01, s.velocity, 0.0, &tr, &g).unwrap();
        assert!((f - 0.8 * s.acceleration - 40.0).abs() < 1e-9);
        // contact with matched force and no velocity
        let f = g.force_control(0.0, 3.0, 3.0);
        assert_eq!(f, 3.0);
    }

    #[test]
    fn matched_free_motion_tracks_exactly() {
        // the reference is itself an RK4 interpolant; a fine filter step keeps
        // its velocity consistent with its position to round-off
        let tr = free_traj_step(Some(1e-5));
        let plant = RigidPlant::new(1.0, 0.0).unwrap();
        let env = Environment::new(1e6, 10.0).unwrap();
        let mut g = gains(5.0);
        g.mass_estimate = 1.0;
        let s0 = tr.evaluate(0.0).unwrap();
        let r = simulate_rigid(&plant, &env, &g, &tr, (s0.position, s0.velocity), &SimConfig::new(1e-5, 0.2)).unwrap();
        let worst = r.z.iter().map(|z| z[0].hypot(z[1])).fold(0.0, f64::max);
        assert!(worst < 1e-11, "{worst}");
        assert!(r.events.is_empty());
    }

    #[test]
    fn wall_force_zero_outside_contact() {
        let tr = free_traj();
        let plant = RigidPlant::new(1.0, 0.0).unwrap();
        let env = Environment::new(1e6, 10.0).unwrap();
        // start inside the wall so the run has contact and free phases
        let r = simulate_rigid(&plant, &env, &gains(5.0), &tr, (1e-3, 0.0), &SimConfig::new(1e-6, 0.05).record_every(10)).unwrap();
        assert!(!r.events.is_empty());
        for i in 0..r.len() {
            if r.x[i] <= 0.0 {
                assert_eq!(r.f_e[i], 0.0);
            }
            assert_eq!(r.mode[i] == Mode::Contact, r.x[i] > 0.0, "t={}", r.time[i]);
        }
    }
}
