//! The rigid arm bounces on the wall with little contact damping and stays in
//! contact with a lot of it.
//!
//! `cargo run --release --example rigid_bounce`

use hybrid_contact::cli::{scenarios, ScenarioConfig};
use hybrid_contact::sim::{simulate_rigid, EventKind};
use hybrid_contact::trajectory::design;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["s4_bf5", "s4_bf9000"] {
        let cfg = ScenarioConfig::parse(scenarios::builtin(name).unwrap())?;
        let sim = cfg.simulation("simulate")?;
        let ic = sim.initial.clone().unwrap();
        let traj = design(&cfg.trajectory_spec("simulate")?)?;
        let run = simulate_rigid(
            &cfg.plant("simulate")?,
            &cfg.environment("simulate")?,
            &cfg.gains("simulate")?,
            &traj,
            (ic[0], ic[1]),
            &sim.config(),
        )?;
        let made: Vec<f64> = run.events_of(EventKind::ContactMade).map(|e| e.time).collect();
        println!(
            "{name}: {} contacts, first at {:.4} s, peak wall force {:.1} N",
            made.len(),
            made[0],
            run.peak_contact_force()
        );
    }
    Ok(())
}
