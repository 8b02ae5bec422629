//! Smallest wrist damping and smallest contact damping that earn a certificate.
//!
//! `cargo run --example damping_search`

use hybrid_contact::design::{find_threshold, lambda_sweep, DesignContext, Parameter, SearchSpec};
use hybrid_contact::model::{ControllerGains, Environment, RigidPlant, WristParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let context = DesignContext {
        plant: RigidPlant::new(1.0, 0.0)?,
        env: Environment::new(1e6, 10.0)?,
        gains: ControllerGains {
            mass_estimate: 0.8,
            kp: 4000.0,
            kd: 80.0,
            kf: 1.0,
            bf: 5.0,
        },
        wrist: Some(WristParams {
            mass: 0.05,
            stiffness: 5e4,
            damping: 171.0,
        }),
    };
    for (parameter, lo, hi) in [(Parameter::Bt, 50.0, 500.0), (Parameter::Bf, 5.0, 2e4)] {
        let t = find_threshold(&SearchSpec {
            parameter,
            lo,
            hi,
            tolerance: 1e-2,
            context,
        })?;
        println!(
            "{}: certified from {:.2} (Λ={:.5}), not at {:.2}",
            parameter.name(),
            t.value,
            t.certificate.lambda.unwrap(),
            t.below
        );
    }
    let grid: Vec<f64> = (0..=8).map(|i| 100.0 + 25.0 * i as f64).collect();
    for row in lambda_sweep(&context, Parameter::Bt, &grid)? {
        println!("b_t={:>5}: Λ={:.4} {:?}", row.value, row.lambda.unwrap_or(f64::NAN), row.verdict);
    }
    Ok(())
}
