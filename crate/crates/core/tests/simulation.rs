//! Physical runs against step refinement and the wall model.

mod common;

use common::scenario;
use hybrid_contact::sim::{simulate_rigid, EventKind, SimConfig, SimResult};
use hybrid_contact::trajectory::design;

fn rigid(name: &str, step: f64) -> SimResult {
    let c = scenario(name);
    let traj = design(&c.trajectory_spec("t").unwrap()).unwrap();
    let mut cfg = SimConfig::new(step, 0.4);
    cfg.event_tol = 1e-10;
    cfg.min_event_sep = 1e-9;
    simulate_rigid(
        &c.plant("t").unwrap(),
        &c.environment("t").unwrap(),
        &c.gains("t").unwrap(),
        &traj,
        (-0.0176, 0.1333),
        &cfg,
    )
    .unwrap()
}

#[test]
fn halving_the_step_keeps_events() {
    let a = rigid("s4_bf5", 2e-6);
    let b = rigid("s4_bf5", 1e-6);
    assert_eq!(a.events.len(), b.events.len());
    for (x, y) in a.events.iter().zip(&b.events) {
        assert_eq!(x.kind, y.kind);
        assert!((x.time - y.time).abs() < 1e-7, "{} vs {}", x.time, y.time);
    }
    let (pa, pb) = (a.peak_contact_force(), b.peak_contact_force());
    assert!((pa / pb - 1.0).abs() < 1e-3, "{pa} vs {pb}");
}

#[test]
fn wall_force_only_in_penetration() {
    let r = rigid("s4_bf9000", 1e-6);
    for i in 0..r.len() {
        if r.x[i] <= 0.0 {
            assert_eq!(r.f_e[i], 0.0);
        }
    }
    let first = r.events_of(EventKind::ContactMade).next().unwrap();
    assert!(first.state[0].abs() < 1e-9);
}
