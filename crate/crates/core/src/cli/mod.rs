//! Command-line front end: `certify | simulate | design | traj <config> [--out DIR] [--seed N]`.
//!
//! Exit codes: 0 success, 1 input error, 2 negative outcome (not certified, no
//! bracket, invalid trajectory), 3 simulation stopped on chattering switches.

mod config;
mod output;
pub mod scenarios;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::conewise::{certify, ConewiseError, StabilityCertificate};
use crate::design::{find_threshold, lambda_sweep, DesignError, Threshold};
use crate::model::{Mode, ModelError, PerturbationContext};
use crate::sim::{
    simulate_compliant, simulate_error, simulate_reduced, simulate_rigid, simulate_worst_case,
    SimError, SimResult,
};
use crate::trajectory::{design, validate, TrajectoryError, ValidationTolerances};

pub use config::{
    ModelKind, ScenarioConfig, SearchParameter, SearchSection, SimulationSection,
    TrajectorySection,
};
pub use output::sig9;

use output::{write_atomic, KeyValue, Table};

/// Overrides the output directory when `--out` is not given.
pub const OUT_DIR_ENV: &str = "HYBRID_CONTACT_OUT";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Conewise(#[from] ConewiseError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Trajectory(TrajectoryError::NegativeForceInContact { .. }) => 2,
            CliError::Design(DesignError::NoBracket { .. }) => 2,
            CliError::Sim(SimError::Zeno { .. }) => 3,
            CliError::Sim(SimError::Trajectory(TrajectoryError::NegativeForceInContact {
                ..
            })) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hybrid-contact", version, about = "Certify, simulate and tune switched position-force control against a stiff wall")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Common {
    /// Scenario file, or the name of a shipped scenario.
    config: PathBuf,
    /// Output directory (default: $HYBRID_CONTACT_OUT, then the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomly drawn initial states.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stability certificate of the configured loop.
    Certify(Common),
    /// Time series and switch events of the configured model.
    Simulate(Common),
    /// Smallest certified damping and a Λ sweep.
    Design(Common),
    /// Sampled desired trajectory and its validation report.
    Traj(Common),
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn out_dir(arg: Option<&Path>) -> PathBuf {
    arg.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn prepare(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (name, common) = match &args.command {
        Command::Certify(c) => ("certify", c),
        Command::Simulate(c) => ("simulate", c),
        Command::Design(c) => ("design", c),
        Command::Traj(c) => ("traj", c),
    };
    let result = ScenarioConfig::load(&common.config).and_then(|cfg| {
        let dir = out_dir(common.out.as_deref());
        match name {
            "certify" => cmd_certify(&cfg, &dir),
            "simulate" => cmd_simulate(&cfg, &dir, common.seed),
            "design" => cmd_design(&cfg, &dir),
            _ => cmd_traj(&cfg, &dir),
        }
    });
    match result {
        Ok(o) => {
            println!("{}", o.summary);
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Design(DesignError::NoBracket { lo, hi }) = &e {
                eprintln!("{}", certificate_document(lo));
                eprintln!("{}", certificate_document(hi));
            }
            e.exit_code()
        }
    }
}

pub fn certificate_document(c: &StabilityCertificate) -> String {
    let mut kv = KeyValue::default();
    kv.text("verdict", &serde_name(&c.verdict));
    kv.text("decided_by", &serde_name(&c.decided_by));
    kv.opt("visible_eigenvalue", c.visible_eigenvalue);
    kv.opt("lambda1", c.lambda1);
    kv.opt("lambda2", c.lambda2);
    kv.opt("lambda_half", c.lambda_half);
    kv.opt("lambda", c.lambda);
    kv.section("pair");
    kv.num("k1", c.pair.k1);
    kv.num("b1", c.pair.b1);
    kv.num("k2", c.pair.k2);
    kv.num("b2", c.pair.b2);
    kv.section("sliding");
    kv.num("identity_residual", c.sliding.identity_residual);
    kv.num("axis_projection_free", c.sliding.axis_projections.0);
    kv.num("axis_projection_contact", c.sliding.axis_projections.1);
    kv.flag("consistent", c.sliding.consistent);
    kv.section("implications");
    kv.flag("guas_worst_case", c.implications.guas_worst_case);
    kv.flag("gues_unperturbed", c.implications.gues_unperturbed);
    kv.flag("iss_perturbed", c.implications.iss_perturbed);
    kv.into_string()
}

fn serde_name<T: serde::Serialize>(v: &T) -> String {
    toml::Value::try_from(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Certificate of the configured loop. Exit 0 when certified, 2 otherwise.
pub fn cmd_certify(cfg: &ScenarioConfig, dir: &Path) -> Result<Outcome, CliError> {
    let cert = certify(&cfg.pair("certify")?)?;
    prepare(dir)?;
    let path = dir.join(format!("{}.certificate.toml", cfg.name));
    let doc = certificate_document(&cert);
    write_atomic(&path, &doc)?;
    Ok(Outcome {
        code: if cert.verdict.is_stable() { 0 } else { 2 },
        files: vec![path],
        summary: doc,
    })
}

fn z0_from(initial: Option<&Vec<f64>>, seed: u64) -> Result<[f64; 2], CliError> {
    match initial {
        Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
        Some(v) => Err(CliError::Config(format!(
            "simulation.initial needs 2 entries for this model, got {}",
            v.len()
        ))),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            Ok([a.cos(), a.sin()])
        }
    }
}

fn physical_ic(initial: Option<&Vec<f64>>, n: usize) -> Result<Vec<f64>, CliError> {
    match initial {
        Some(v) if v.len() == n => Ok(v.clone()),
        Some(v) => Err(CliError::Config(format!(
            "simulation.initial needs {n} entries for this model, got {}",
            v.len()
        ))),
        None => Err(CliError::Config(
            "simulation.initial is required for physical models".into(),
        )),
    }
}

fn run_model(cfg: &ScenarioConfig, seed: u64) -> Result<SimResult, CliError> {
    const CMD: &str = "simulate";
    let sim = cfg.simulation(CMD)?;
    let sc = sim.config();
    let init = sim.initial.as_ref();
    let result = match sim.model {
        ModelKind::Rigid | ModelKind::Compliant | ModelKind::Reduced => {
            let plant = cfg.plant(CMD)?;
            let env = cfg.environment(CMD)?;
            let gains = cfg.gains(CMD)?;
            let traj = design(&cfg.trajectory_spec(CMD)?)?;
            match sim.model {
                ModelKind::Rigid => {
                    let ic = physical_ic(init, 2)?;
                    simulate_rigid(&plant, &env, &gains, &traj, (ic[0], ic[1]), &sc)
                }
                ModelKind::Reduced => {
                    let ic = physical_ic(init, 2)?;
                    let wrist = cfg.wrist(CMD)?;
                    simulate_reduced(&plant, &wrist, &env, &gains, &traj, (ic[0], ic[1]), &sc)
                }
                _ => {
                    let ic = physical_ic(init, 4)?;
                    let wrist = cfg.wrist(CMD)?;
                    let ic = (ic[0], ic[1], ic[2], ic[3]);
                    simulate_compliant(&plant, &wrist, &env, &gains, &traj, ic, &sc)
                }
            }
        }
        ModelKind::WorstCase => {
            simulate_worst_case(&cfg.pair(CMD)?, z0_from(init, seed)?, &sc).map(|r| r.0)
        }
        ModelKind::Error => {
            let plant = cfg.plant(CMD)?;
            let env = cfg.environment(CMD)?;
            let gains = cfg.gains(CMD)?;
            let spec = cfg.trajectory_spec(CMD)?;
            let traj = design(&spec)?;
            let pair = cfg.pair(CMD)?;
            let ctx = PerturbationContext {
                plant: &plant,
                gains: &gains,
                estimates: &spec.estimates,
                env: &env,
            };
            let at = |t: f64| traj.evaluate(t.clamp(traj.start(), traj.horizon()));
            let w = |mode: Mode, t: f64| match at(t) {
                Ok(s) => match mode {
                    Mode::Free => ctx.free(s.velocity, s.acceleration),
                    Mode::Contact => ctx.contact(s.position, s.velocity, s.acceleration),
                },
                Err(_) => 0.0,
            };
            let x_d = |t: f64| at(t).map(|s| s.position).unwrap_or(0.0);
            let z0 = z0_from(init, seed)?;
            simulate_error(&pair, w, x_d, traj.start(), z0, &sc)
        }
    };
    Ok(result?)
}

fn series(r: &SimResult, error_coords: bool) -> String {
    let mut header = vec!["t", "x", "x_d", "v", "v_d", "f_e", "f_d", "f_c", "mode"];
    if r.tip.is_some() {
        header.extend(["x_t", "v_t"]);
    }
    if error_coords {
        header.extend(["z1", "z2"]);
    }
    let mut table = Table::new(&header);
    for i in 0..r.len() {
        let mut row = vec![
            r.time[i], r.x[i], r.x_d[i], r.v[i], r.v_d[i], r.f_e[i], r.f_d[i], r.f_c[i],
            f64::from(r.mode[i].index()),
        ];
        if let Some((xt, vt)) = &r.tip {
            row.extend([xt[i], vt[i]]);
        }
        if error_coords {
            row.extend(r.z[i]);
        }
        table.numbers(&row);
    }
    table.into_string()
}

fn events(r: &SimResult) -> String {
    let mut table = Table::new(&["time", "direction", "state"]);
    for e in &r.events {
        let state: Vec<String> = e.state.iter().map(|v| sig9(*v)).collect();
        table.row(&[sig9(e.time), e.kind.as_str().to_string(), state.join(" ")]);
    }
    table.into_string()
}

/// Runs the configured model; on chattering switches the partial run is still written
/// and the exit code is 3.
pub fn cmd_simulate(cfg: &ScenarioConfig, dir: &Path, seed: u64) -> Result<Outcome, CliError> {
    let model = cfg.simulation("simulate")?.model;
    let error_coords = matches!(model, ModelKind::WorstCase | ModelKind::Error);
    let (result, failure) = match run_model(cfg, seed) {
        Ok(r) => (r, None),
        Err(CliError::Sim(SimError::Zeno {
            time,
            separation,
            partial,
        })) => {
            let msg = format!("stopped at t = {} s: switches {} s apart", sig9(time), sig9(separation));
            (*partial, Some(msg))
        }
        Err(e) => return Err(e),
    };
    prepare(dir)?;
    let csv = dir.join(format!("{}.csv", cfg.name));
    let ev = dir.join(format!("{}.events", cfg.name));
    write_atomic(&csv, &series(&result, error_coords))?;
    write_atomic(&ev, &events(&result))?;
    let made = result.events_of(crate::sim::EventKind::ContactMade).count();
    let broken = result.events_of(crate::sim::EventKind::ContactBroken).count();
    let mut summary = format!(
        "{} samples, {} events ({} contact made, {} broken), peak |F_e| = {} N",
        result.len(),
        result.events.len(),
        made,
        broken,
        sig9(result.peak_contact_force())
    );
    let code = match failure {
        Some(msg) => {
            summary.push_str(&format!("\nchattering: {msg}; partial output kept"));
            3
        }
        None => 0,
    };
    Ok(Outcome {
        code,
        files: vec![csv, ev],
        summary,
    })
}

fn design_report(t: &Threshold, parameter: &str, sweep: &Path) -> String {
    let mut kv = KeyValue::default();
    kv.text("parameter", parameter);
    kv.num("threshold", t.value);
    kv.num("uncertified_below", t.below);
    kv.text("sweep", &sweep.display().to_string());
    let cert = certificate_document(&t.certificate);
    format!("{}\n\n# certificate at the threshold\n[certificate]\n{}", kv.into_string(), cert.replace("\n[", "\n[certificate."))
}

/// Threshold search plus a Λ sweep over the bracket.
pub fn cmd_design(cfg: &ScenarioConfig, dir: &Path) -> Result<Outcome, CliError> {
    let (spec, points) = cfg.search_spec("design")?;
    let threshold = find_threshold(&spec)?;
    let grid: Vec<f64> = if points == 1 {
        vec![spec.lo]
    } else {
        (0..points)
            .map(|i| spec.lo + (spec.hi - spec.lo) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let rows = lambda_sweep(&spec.context, spec.parameter, &grid)?;
    let mut table = Table::new(&[spec.parameter.name(), "lambda1", "lambda2", "lambda", "verdict"]);
    let opt = |v: Option<f64>| v.map(sig9).unwrap_or_default();
    for r in &rows {
        table.row(&[sig9(r.value), opt(r.lambda1), opt(r.lambda2), opt(r.lambda), serde_name(&r.verdict)]);
    }
    prepare(dir)?;
    let sweep = dir.join(format!("{}.sweep.csv", cfg.name));
    let report = dir.join(format!("{}.design.toml", cfg.name));
    write_atomic(&sweep, &table.into_string())?;
    let doc = design_report(&threshold, spec.parameter.name(), &sweep);
    write_atomic(&report, &doc)?;
    Ok(Outcome {
        code: 0,
        files: vec![report, sweep],
        summary: format!(
            "{} threshold = {} (uncertified at {})",
            spec.parameter.name(),
            sig9(threshold.value),
            sig9(threshold.below)
        ),
    })
}

/// Sampled trajectory and validation report. Exit 2 when validation fails.
pub fn cmd_traj(cfg: &ScenarioConfig, dir: &Path) -> Result<Outcome, CliError> {
    let spec = cfg.trajectory_spec("traj")?;
    let traj = design(&spec)?;
    let report = validate(&traj, &ValidationTolerances::default())?;
    let dt = cfg
        .trajectory
        .as_ref()
        .and_then(|t| t.output_step)
        .unwrap_or(1e-4);
    let n = ((traj.horizon() - traj.start()) / dt).round() as usize;
    let mut table = Table::new(&["t", "x_d", "v_d", "a_d", "f_d"]);
    for i in 0..=n {
        let t = (traj.start() + i as f64 * dt).min(traj.horizon());
        let s = traj.evaluate(t)?;
        table.numbers(&[t, s.position, s.velocity, s.acceleration, s.force]);
    }
    let mut kv = KeyValue::default();
    kv.flag("passed", report.passed);
    kv.num("max_position_jump", report.max_position_jump);
    kv.num("max_velocity_jump", report.max_velocity_jump);
    kv.num("max_acceleration", report.max_acceleration);
    kv.num("max_relation_residual", report.max_relation_residual);
    kv.num("max_force", report.max_force);
    kv.num("gamma_force", traj.gammas().0);
    kv.num("gamma_position", traj.gammas().1);
    kv.opt("discontinuity_at", report.discontinuity_at);
    for s in &report.stitches {
        kv.section(&format!("stitch.\"{}\"", sig9(s.time)));
        kv.num("position_jump", s.position_jump);
        kv.num("velocity_jump", s.velocity_jump);
    }
    prepare(dir)?;
    let csv = dir.join(format!("{}.traj.csv", cfg.name));
    let rep = dir.join(format!("{}.traj-report.toml", cfg.name));
    write_atomic(&csv, &table.into_string())?;
    let doc = kv.into_string();
    write_atomic(&rep, &doc)?;
    Ok(Outcome {
        code: if report.passed { 0 } else { 2 },
        files: vec![csv, rep],
        summary: doc,
    })
}
