//! One return-map factor three ways: closed form, real Jordan form of an
//! arbitrary cone, and the radii of successive axis crossings in simulation.
//!
//! `cargo run --release --example return_map`

use hybrid_contact::conewise::{lambda_closed_form, lambda_general, worst_case_cones};
use hybrid_contact::model::{ConewisePair, Mode};
use hybrid_contact::sim::{simulate_worst_case, SimConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pair = ConewisePair::new(4000.0, 80.0, 2e6, 9020.0)?;
    let closed = [lambda_closed_form(&pair, Mode::Free)?, lambda_closed_form(&pair, Mode::Contact)?];
    let cones = worst_case_cones(&pair)?;
    let general = [lambda_general(&cones[0])?, lambda_general(&cones[1])?];
    println!("closed form  Λ1={:.9} Λ2={:.6}", closed[0], closed[1]);
    println!("Jordan form  Λ1={:.9} Λ2={:.6}", general[0], general[1]);
    let full = (closed[0] * closed[1]).powi(2);
    println!("per rotation Λ={full:.6}");

    let cfg = SimConfig::new(1e-6, 0.3).record_every(1000);
    let (_, crossings) = simulate_worst_case(&pair, [1e-3, 0.0], &cfg)?;
    for w in crossings.windows(2) {
        println!(
            "crossing at t={:.6}: radius ratio {:.6}",
            w[1].time,
            w[1].radius / w[0].radius
        );
    }
    Ok(())
}
