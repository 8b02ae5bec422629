//! A damped wrist between arm and end-effector, against the reduced model that
//! folds the wrist into a softer wall.
//!
//! `cargo run --release --example compliant_wrist`

use hybrid_contact::conewise::certify;
use hybrid_contact::model::{closed_loop_matrices, reduced_env};
use hybrid_contact::cli::{scenarios, ScenarioConfig};
use hybrid_contact::sim::{simulate_compliant, simulate_reduced};
use hybrid_contact::trajectory::design;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::parse(scenarios::builtin("s54_bt171").unwrap())?;
    let (plant, wall, gains, wrist) = (
        cfg.plant("x")?,
        cfg.environment("x")?,
        cfg.gains("x")?,
        cfg.wrist("x")?,
    );
    let perceived = reduced_env(&wrist, &wall);
    println!("perceived wall: k={:.1} N/m, b={:.3} Ns/m", perceived.stiffness, perceived.damping);
    let cert = certify(&closed_loop_matrices(&plant, &perceived, &gains)?)?;
    println!("reduced loop: Λ={:.4} {:?}", cert.lambda.unwrap(), cert.verdict);

    let sim = cfg.simulation("x")?;
    let traj = design(&cfg.trajectory_spec("x")?)?;
    let full = simulate_compliant(&plant, &wrist, &wall, &gains, &traj, (-0.0176, 0.1333, -0.0176, 0.1333), &sim.config())?;
    let reduced = simulate_reduced(&plant, &wrist, &wall, &gains, &traj, (-0.0176, 0.1333), &sim.config())?;
    for e in &full.events {
        println!("{:.4} s  {}", e.time, e.kind.as_str());
    }
    let (pf, pr) = (full.peak_contact_force(), reduced.peak_contact_force());
    println!("peak wall force: full {pf:.2} N, reduced {pr:.2} N ({:.0}% lower)", 100.0 * (pf - pr) / pf);
    Ok(())
}
