//! Tracking error of the certified wrist loop under a bounded disturbance, with the
//! decay envelope fitted from undisturbed runs.
//!
//! `cargo run --release --example disturbed_error`

use hybrid_contact::model::{closed_loop_matrices, reduced_env, ControllerGains, Environment, RigidPlant, WristParams};
use hybrid_contact::sim::properties::{fit_envelope, tail_sup};
use hybrid_contact::sim::{simulate_error, SimConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let wrist = WristParams {
        mass: 0.05,
        stiffness: 5e4,
        damping: 171.0,
    };
    let gains = ControllerGains {
        mass_estimate: 0.8,
        kp: 4000.0,
        kd: 80.0,
        kf: 1.0,
        bf: 5.0,
    };
    let env = reduced_env(&wrist, &Environment::new(1e6, 10.0)?);
    let pair = closed_loop_matrices(&RigidPlant::new(1.0, 0.0)?, &env, &gains)?;
    let cfg = SimConfig::new(1e-5, 2.0).record_every(100);
    let history = |w: f64, a: f64| -> Result<Vec<(f64, f64)>, Box<dyn std::error::Error>> {
        let r = simulate_error(&pair, move |_, t| w * (20.0 * t).sin(), |_| 0.0, 0.0, [a.cos(), a.sin()], &cfg)?;
        Ok(r.time.iter().zip(&r.z).map(|(t, z)| (*t, z[0].hypot(z[1]))).collect())
    };
    let free: Vec<_> = (0..8).map(|k| history(0.0, k as f64 * 0.785)).collect::<Result<_, _>>()?;
    let env = fit_envelope(&free).ok_or("no envelope")?;
    println!("envelope: ‖z(t)‖ <= {:.3} e^(-{:.3} t) ‖z0‖", env.c, env.lambda);
    for w in [0.1, 1.0, 10.0] {
        let limsup = tail_sup(&history(w, 0.3)?, 0.25);
        println!("sup|w|={w:>4}: lim sup ‖z‖={limsup:.3e}, bound (c/λ) sup|w| = {:.3e}", env.c / env.lambda * w);
    }
    Ok(())
}
