//! Fixed-step RK4 with the mode frozen over each step and bisection on the
//! step fraction to locate sign changes of the switching function.

use crate::model::Mode;

use super::SimConfig;

pub(crate) trait Hybrid<const N: usize> {
    fn rhs(&self, mode: Mode, t: f64, x: &[f64; N]) -> [f64; N];
    /// Switching function; positive selects [`Mode::Contact`].
    fn guard(&self, t: f64, x: &[f64; N]) -> f64;
    /// Sorted instants where `rhs` is discontinuous in time; steps are split there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

pub(crate) fn mode_of(g: f64) -> Mode {
    if g > 0.0 {
        Mode::Contact
    } else {
        Mode::Free
    }
}

pub(crate) fn rk4<const N: usize, S: Hybrid<N> + ?Sized>(
    sys: &S,
    mode: Mode,
    t: f64,
    x: &[f64; N],
    h: f64,
) -> [f64; N] {
    let stage = |base: &[f64; N], k: &[f64; N], c: f64| -> [f64; N] {
        let mut out = *base;
        for i in 0..N {
            out[i] += c * k[i];
        }
        out
    };
    let k1 = sys.rhs(mode, t, x);
    let k2 = sys.rhs(mode, t + 0.5 * h, &stage(x, &k1, 0.5 * h));
    let k3 = sys.rhs(mode, t + 0.5 * h, &stage(x, &k2, 0.5 * h));
    let k4 = sys.rhs(mode, t + h, &stage(x, &k3, h));
    let mut out = *x;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RawEvent<const N: usize> {
    pub time: f64,
    pub from: Mode,
    pub to: Mode,
    pub state: [f64; N],
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Trace<const N: usize> {
    pub time: Vec<f64>,
    pub state: Vec<[f64; N]>,
    pub mode: Vec<Mode>,
    pub events: Vec<RawEvent<N>>,
    /// `(time, separation)` when the run stopped on chattering events.
    pub zeno: Option<(f64, f64)>,
}

/// Integrates from `t0` over `n` uniform steps of `cfg.step`.
pub(crate) fn run<const N: usize, S: Hybrid<N> + ?Sized>(
    sys: &S,
    t0: f64,
    x0: [f64; N],
    cfg: &SimConfig,
) -> Trace<N> {
    let h = cfg.step;
    let n = ((cfg.horizon - t0) / h).round().max(0.0) as usize;
    let every = cfg.record_every.max(1);
    let breaks = sys.breakpoints();
    let mut trace = Trace {
        time: Vec::with_capacity(n / every + 2),
        state: Vec::with_capacity(n / every + 2),
        mode: Vec::with_capacity(n / every + 2),
        events: Vec::new(),
        zeno: None,
    };
    let mut x = x0;
    let mut mode = mode_of(sys.guard(t0, &x0));
    let mut last_event = f64::NEG_INFINITY;
    trace.time.push(t0);
    trace.state.push(x);
    trace.mode.push(mode);
    let mut bi = breaks.partition_point(|&b| b <= t0);
    for k in 0..n {
        let t_start = t0 + k as f64 * h;
        let t_end = t0 + (k + 1) as f64 * h;
        let mut t = t_start;
        while t < t_end {
            // next sub-step end: a breakpoint inside the step, or the grid point
            while bi < breaks.len() && breaks[bi] <= t {
                bi += 1;
            }
            let target = if bi < breaks.len() && breaks[bi] < t_end {
                breaks[bi]
            } else {
                t_end
            };
            let dt = target - t;
            let trial = rk4(sys, mode, t, &x, dt);
            let g = sys.guard(target, &trial);
            if mode_of(g) == mode {
                x = trial;
                t = target;
                continue;
            }
            // smallest fraction at which the mode differs, bracketed to event_tol
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            let mut x_hi = trial;
            while (hi - lo) * dt > cfg.event_tol {
                let mid = 0.5 * (lo + hi);
                let xm = rk4(sys, mode, t, &x, mid * dt);
                if mode_of(sys.guard(t + mid * dt, &xm)) == mode {
                    lo = mid;
                } else {
                    hi = mid;
                    x_hi = xm;
                }
            }
            let te = if hi == 1.0 { target } else { t + hi * dt };
            let new_mode = mode_of(sys.guard(te, &x_hi));
            let separation = te - last_event;
            trace.events.push(RawEvent {
                time: te,
                from: mode,
                to: new_mode,
                state: x_hi,
            });
            x = x_hi;
            t = te;
            mode = new_mode;
            if separation < cfg.min_event_sep {
                trace.zeno = Some((te, separation));
                trace.time.push(t);
                trace.state.push(x);
                trace.mode.push(mode);
                return trace;
            }
            last_event = te;
        }
        if (k + 1) % every == 0 || k + 1 == n {
            trace.time.push(t_end);
            trace.state.push(x);
            trace.mode.push(mode);
        }
    }
    trace
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bouncing unit mass on a stiff spring floor, no damping: `g = x`.
    struct Ball;

    impl Hybrid<2> for Ball {
        fn rhs(&self, mode: Mode, _t: f64, x: &[f64; 2]) -> [f64; 2] {
            match mode {
                Mode::Free => [x[1], -1.0],
                Mode::Contact => [x[1], -1e4 * x[0] - 1.0],
            }
        }
        fn guard(&self, _t: f64, x: &[f64; 2]) -> f64 {
            -x[0]
        }
    }

    fn cfg(horizon: f64) -> SimConfig {
        SimConfig {
            step: 1e-4,
            event_tol: 1e-12,
            min_event_sep: 1e-11,
            horizon,
            record_every: 1,
        }
    }

    #[test]
    fn first_impact_time_located() {
        // free fall from height 1: impact at sqrt(2)
        let tr = run(&Ball, 0.0, [1.0, 0.0], &cfg(1.5));
        let e = tr.events[0];
        assert_eq!(e.from, Mode::Free);
        assert_eq!(e.to, Mode::Contact);
        assert!((e.time - 2f64.sqrt()).abs() < 1e-11, "{}", e.time);
    }

    #[test]
    fn grid_stays_uniform() {
        let tr = run(&Ball, 0.0, [1.0, 0.0], &cfg(1.5));
        for (k, t) in tr.time.iter().enumerate() {
            assert!((t - k as f64 * 1e-4).abs() < 1e-12);
        }
        assert_eq!(tr.time.len(), 15001);
    }

    #[test]
    fn zeno_guard_trips() {
        let mut c = cfg(1.5);
        c.min_event_sep = 1.0;
        let tr = run(&Ball, 0.0, [1.0, 0.0], &c);
        assert!(tr.zeno.is_some());
        assert!(*tr.time.last().unwrap() < 1.5);
    }
}
