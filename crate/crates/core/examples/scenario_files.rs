//! Loading a scenario, editing it in memory, writing it back and running the
//! certify and traj commands on it.
//!
//! `cargo run --example scenario_files`

use hybrid_contact::cli::{cmd_certify, cmd_traj, scenarios, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("hybrid-contact-example");
    let mut cfg = ScenarioConfig::parse(scenarios::builtin("s4_bf5").unwrap())?;
    cfg.name = "s4_bf20000".into();
    cfg.gains.as_mut().unwrap().bf = 20000.0;
    std::fs::create_dir_all(&out)?;
    let path = out.join("s4_bf20000.toml");
    std::fs::write(&path, cfg.to_toml())?;
    let cfg = ScenarioConfig::load(&path)?;
    for outcome in [cmd_certify(&cfg, &out)?, cmd_traj(&cfg, &out)?] {
        println!("exit code {}", outcome.code);
        for f in outcome.files {
            println!("  {}", f.display());
        }
    }
    println!("available scenarios: {}", scenarios::NAMES.join(", "));
    Ok(())
}
