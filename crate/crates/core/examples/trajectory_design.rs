//! Stitching a free-motion position profile and a contact force profile into
//! one smooth desired trajectory, then validating it.
//!
//! `cargo run --example trajectory_design`

use hybrid_contact::model::EnvEstimates;
use hybrid_contact::trajectory::{
    design, validate, ContactSchedule, Profile, TrajectorySpec, ValidationTolerances,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = TrajectorySpec {
        position: Profile::sampled(&[(0.0, -0.0176), (0.15, 0.002395), (0.30, 0.0), (0.432033, -0.0176)]),
        force: Profile::sampled(&[(0.15, 0.0), (0.225, 7.0), (0.30, 0.0)]),
        schedule: ContactSchedule::new(vec![(0.15, 0.30)])?,
        estimates: EnvEstimates {
            stiffness: 1e3,
            damping: 10.0,
        },
        start: 0.0,
        horizon: 0.4,
        gamma_force: Some(100.0),
        gamma_position: Some(100.0),
        filter_step: None,
        initial: Some((-0.0176, 0.1333)),
    };
    let traj = design(&spec)?;
    let report = validate(&traj, &ValidationTolerances::default())?;
    println!("t        x_d          v_d         a_d        F_d");
    for i in 0..=16 {
        let s = traj.evaluate(0.025 * i as f64)?;
        println!(
            "{:.3}  {:+.6e}  {:+.5e}  {:+.4e}  {:.4}",
            s.time, s.position, s.velocity, s.acceleration, s.force
        );
    }
    println!(
        "passed={} max jump={:.1e} relation residual={:.1e} peak F_d={:.3}",
        report.passed,
        report.max_position_jump.max(report.max_velocity_jump),
        report.max_relation_residual,
        report.max_force
    );
    Ok(())
}
