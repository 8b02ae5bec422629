//! The worst-case switched system next to an arbitrary switching signal from the
//! same initial error. Prints where the arbitrary signal ends up with the larger norm.
//!
//! `cargo run --release --example switching_signals`

use hybrid_contact::model::{ConewisePair, Mode};
use hybrid_contact::sim::{simulate_switched, simulate_worst_case, SimConfig, SwitchingSignal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pair = ConewisePair::new(4000.0, 80.0, 2e6, 9020.0)?;
    let cfg = SimConfig::new(2e-6, 0.05).record_every(50);
    let z0 = [1.0, 0.0];
    let signal = SwitchingSignal {
        initial: Mode::Free,
        times: (1..50).map(|k| k as f64 * 1e-3).collect(),
    };
    let (worst, _) = simulate_worst_case(&pair, z0, &cfg)?;
    let other = simulate_switched(&pair, &signal, z0, &cfg)?;
    let norm = |z: &[f64; 2]| z[0].hypot(z[1]);
    let mut above = 0;
    for (i, t) in worst.time.iter().enumerate() {
        let (nw, ns) = (norm(&worst.z[i]), norm(&other.z[i]));
        if ns > nw {
            above += 1;
        }
        if i % 25 == 0 {
            println!("t={t:.4}  worst-case {nw:.3e}  signal {ns:.3e}");
        }
    }
    println!("{above} of {} samples have the signal above the worst case", worst.len());
    Ok(())
}
