//! Stability certificates for the stiff-wall loop at low and high contact damping.
//!
//! `cargo run --example certify_pair`

use hybrid_contact::conewise::certify;
use hybrid_contact::model::{closed_loop_matrices, ControllerGains, Environment, RigidPlant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plant = RigidPlant::new(1.0, 0.0)?;
    let wall = Environment::new(1e6, 10.0)?;
    for bf in [5.0, 9000.0, 12000.0] {
        let gains = ControllerGains {
            mass_estimate: 0.8,
            kp: 4000.0,
            kd: 80.0,
            kf: 1.0,
            bf,
        };
        let pair = closed_loop_matrices(&plant, &wall, &gains)?;
        let cert = certify(&pair)?;
        println!(
            "b_f = {bf:>7}: K1={} B1={} K2={} B2={}  Λ1={:.6} Λ2={:.3} Λ={:.4}  {:?} ({:?})",
            pair.k1,
            pair.b1,
            pair.k2,
            pair.b2,
            cert.lambda1.unwrap_or(f64::NAN),
            cert.lambda2.unwrap_or(f64::NAN),
            cert.lambda.unwrap_or(f64::NAN),
            cert.verdict,
            cert.decided_by,
        );
    }
    Ok(())
}
