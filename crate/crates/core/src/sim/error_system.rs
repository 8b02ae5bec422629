use crate::conewise::worst_case_indicator;
use crate::model::{ConewisePair, Mode};

use super::engine::{self, Hybrid, Trace};
use super::{finish, EventKind, SimConfig, SimError, SimResult, SwitchEvent};

/// Perturbed error system `zdot = A_i z + N w_i(t)`, in contact while `x_d(t) - z1 > 0`.
struct Perturbed<W, X> {
    pair: ConewisePair,
    w: W,
    x_d: X,
}

impl<W, X> Hybrid<2> for Perturbed<W, X>
where
    W: Fn(Mode, f64) -> f64,
    X: Fn(f64) -> f64,
{
    fn rhs(&self, mode: Mode, t: f64, z: &[f64; 2]) -> [f64; 2] {
        self.pair.vector_field(mode, *z, (self.w)(mode, t))
    }

    fn guard(&self, t: f64, z: &[f64; 2]) -> f64 {
        (self.x_d)(t) - z[0]
    }
}

/// Piecewise-constant switching signal: `initial` up to the first time, then alternating.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingSignal {
    pub initial: Mode,
    /// Strictly increasing switching instants.
    pub times: Vec<f64>,
}

impl SwitchingSignal {
    /// Active mode at `t`; a switching instant already belongs to the new mode.
    pub fn mode_at(&self, t: f64) -> Mode {
        let flips = self.times.partition_point(|&s| s <= t);
        if flips % 2 == 0 {
            self.initial
        } else {
            match self.initial {
                Mode::Free => Mode::Contact,
                Mode::Contact => Mode::Free,
            }
        }
    }
}

struct Driven<'a> {
    pair: ConewisePair,
    signal: &'a SwitchingSignal,
}

impl Hybrid<2> for Driven<'_> {
    fn rhs(&self, mode: Mode, _t: f64, z: &[f64; 2]) -> [f64; 2] {
        self.pair.vector_field(mode, *z, 0.0)
    }

    fn guard(&self, t: f64, _z: &[f64; 2]) -> f64 {
        match self.signal.mode_at(t) {
            Mode::Contact => 1.0,
            Mode::Free => -1.0,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.signal.times.clone()
    }
}

struct WorstCase {
    pair: ConewisePair,
}

impl Hybrid<2> for WorstCase {
    fn rhs(&self, mode: Mode, _t: f64, z: &[f64; 2]) -> [f64; 2] {
        self.pair.vector_field(mode, *z, 0.0)
    }

    fn guard(&self, _t: f64, z: &[f64; 2]) -> f64 {
        worst_case_indicator(&self.pair, *z)
    }
}

fn error_result(
    trace: &Trace<2>,
    x_d: &dyn Fn(f64) -> f64,
    kind: fn(Mode) -> EventKind,
) -> SimResult {
    let n = trace.time.len();
    let mut out = SimResult {
        time: trace.time.clone(),
        mode: trace.mode.clone(),
        z: trace.state.clone(),
        f_e: vec![0.0; n],
        f_d: vec![0.0; n],
        f_c: vec![0.0; n],
        v_d: vec![0.0; n],
        ..Default::default()
    };
    for (t, z) in trace.time.iter().zip(&trace.state) {
        let xd = x_d(*t);
        out.x_d.push(xd);
        out.x.push(xd - z[0]);
        out.v.push(-z[1]);
    }
    out.events = trace
        .events
        .iter()
        .map(|e| SwitchEvent {
            time: e.time,
            kind: kind(e.to),
            state: e.state.to_vec(),
        })
        .collect();
    out
}

fn contact_kind(to: Mode) -> EventKind {
    match to {
        Mode::Contact => EventKind::ContactMade,
        Mode::Free => EventKind::ContactBroken,
    }
}

fn region_kind(to: Mode) -> EventKind {
    match to {
        Mode::Contact => EventKind::EnterS2,
        Mode::Free => EventKind::EnterS1,
    }
}

/// Perturbed switched error system from `z0` at `t0`. The reported `v_d` is zero;
/// `x` is reconstructed as `x_d - z1`.
pub fn simulate_error<W, X>(
    pair: &ConewisePair,
    w: W,
    x_d: X,
    t0: f64,
    z0: [f64; 2],
    cfg: &SimConfig,
) -> Result<SimResult, SimError>
where
    W: Fn(Mode, f64) -> f64,
    X: Fn(f64) -> f64,
{
    cfg.validate()?;
    pair.validate()?;
    let sys = Perturbed { pair: *pair, w, x_d };
    let trace = engine::run(&sys, t0, z0, cfg);
    let result = error_result(&trace, &sys.x_d, contact_kind);
    finish(result, trace.zeno)
}

/// Unperturbed error system under an externally given switching signal.
pub fn simulate_switched(
    pair: &ConewisePair,
    signal: &SwitchingSignal,
    z0: [f64; 2],
    cfg: &SimConfig,
) -> Result<SimResult, SimError> {
    cfg.validate()?;
    if signal.times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::InvalidConfig(
            "switching instants must be strictly increasing".into(),
        ));
    }
    let sys = Driven {
        pair: *pair,
        signal,
    };
    // the signal decides; closely spaced switches are not chatter here
    let cfg = SimConfig {
        min_event_sep: 0.0,
        ..*cfg
    };
    let trace = engine::run(&sys, 0.0, z0, &cfg);
    let result = error_result(&trace, &|_| 0.0, contact_kind);
    finish(result, trace.zeno)
}

/// Crossing of the positive `z1` half-axis by the worst-case flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisCrossing {
    pub time: f64,
    pub radius: f64,
}

/// Worst-case system from `z0` at `t = 0`, with its positive `z1`-axis crossings.
pub fn simulate_worst_case(
    pair: &ConewisePair,
    z0: [f64; 2],
    cfg: &SimConfig,
) -> Result<(SimResult, Vec<AxisCrossing>), SimError> {
    cfg.validate()?;
    pair.validate()?;
    let sys = WorstCase { pair: *pair };
    let trace = engine::run(&sys, 0.0, z0, cfg);
    // S1 hands over to S2 only across the z1 axis
    let crossings = trace
        .events
        .iter()
        .filter(|e| e.to == Mode::Contact && e.state[0] > 0.0)
        .map(|e| AxisCrossing {
            time: e.time,
            radius: e.state[0].hypot(e.state[1]),
        })
        .collect();
    let result = error_result(&trace, &|_| 0.0, region_kind);
    match finish(result, trace.zeno) {
        Ok(r) => Ok((r, crossings)),
        Err(e) => Err(e),
    }
}
