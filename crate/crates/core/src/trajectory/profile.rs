use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::TrajectoryError;

/// User-facing reference profile, either parametric or sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// `value` until `start`, then rising with `slope`.
    Ramp {
        start: f64,
        value: f64,
        slope: f64,
    },
    /// Smoothstep from `from` to `to` over `[t0, t1]`, flat outside.
    CubicEase {
        t0: f64,
        t1: f64,
        from: f64,
        to: f64,
    },
    Sinusoid {
        offset: f64,
        amplitude: f64,
        /// Hz.
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Linear interpolation between samples, held constant beyond the ends.
    Sampled {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Profile {
    /// Piecewise-linear profile through `(t, value)` knots.
    pub fn sampled(knots: &[(f64, f64)]) -> Self {
        Profile::Sampled {
            times: knots.iter().map(|k| k.0).collect(),
            values: knots.iter().map(|k| k.1).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), TrajectoryError> {
        let bad = |msg: &str| Err(TrajectoryError::InvalidSpec(msg.to_string()));
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            Profile::Constant { value } if !value.is_finite() => bad("constant profile is not finite"),
            Profile::Ramp { start, value, slope } if !finite(&[*start, *value, *slope]) => {
                bad("ramp profile is not finite")
            }
            Profile::CubicEase { t0, t1, from, to } => {
                if !finite(&[*t0, *t1, *from, *to]) || t1 <= t0 {
                    bad("cubic ease needs finite values and t0 < t1")
                } else {
                    Ok(())
                }
            }
            Profile::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            } if !finite(&[*offset, *amplitude, *frequency, *phase]) => {
                bad("sinusoid profile is not finite")
            }
            Profile::Sampled { times, values } => {
                if times.is_empty() || times.len() != values.len() {
                    bad("sampled profile needs matching, nonempty time and value columns")
                } else if !finite(times) || !finite(values) {
                    bad("sampled profile is not finite")
                } else if times.windows(2).any(|w| w[1] <= w[0]) {
                    bad("sampled profile times must be strictly increasing")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    /// Right derivative.
    pub fn derivative(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    fn eval(&self, t: f64) -> (f64, f64) {
        match self {
            Profile::Constant { value } => (*value, 0.0),
            Profile::Ramp { start, value, slope } => {
                if t < *start {
                    (*value, 0.0)
                } else {
                    (value + slope * (t - start), *slope)
                }
            }
            Profile::CubicEase { t0, t1, from, to } => {
                let span = t1 - t0;
                let s = ((t - t0) / span).clamp(0.0, 1.0);
                let inside = t >= *t0 && t < *t1;
                let ds = if inside { 6.0 * s * (1.0 - s) / span } else { 0.0 };
                (from + (to - from) * s * s * (3.0 - 2.0 * s), (to - from) * ds)
            }
            Profile::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            } => {
                let arg = TAU * frequency * t + phase;
                (
                    offset + amplitude * arg.sin(),
                    amplitude * TAU * frequency * arg.cos(),
                )
            }
            Profile::Sampled { times, values } => {
                let n = times.len();
                if t < times[0] {
                    return (values[0], 0.0);
                }
                if t >= times[n - 1] {
                    return (values[n - 1], 0.0);
                }
                // last knot at or before t
                let i = times.partition_point(|&s| s <= t) - 1;
                let slope = (values[i + 1] - values[i]) / (times[i + 1] - times[i]);
                (values[i] + slope * (t - times[i]), slope)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_interpolates_and_holds() {
        let p = Profile::sampled(&[(0.0, 0.0), (1.0, 2.0), (2.0, 0.0)]);
        assert_eq!(p.value(-1.0), 0.0);
        assert_eq!(p.value(0.5), 1.0);
        assert_eq!(p.value(1.5), 1.0);
        assert_eq!(p.derivative(1.0), -2.0);
        assert_eq!(p.value(5.0), 0.0);
        assert_eq!(p.derivative(5.0), 0.0);
    }

    #[test]
    fn cubic_ease_endpoints() {
        let p = Profile::CubicEase {
            t0: 1.0,
            t1: 3.0,
            from: 2.0,
            to: 4.0,
        };
        assert_eq!(p.value(0.0), 2.0);
        assert_eq!(p.value(2.0), 3.0);
        assert_eq!(p.value(3.0), 4.0);
        assert!((p.derivative(2.0) - 1.5).abs() < 1e-15);
        assert_eq!(p.derivative(3.0), 0.0);
    }

    #[test]
    fn ramp_and_sinusoid() {
        let r = Profile::Ramp {
            start: 1.0,
            value: -1.0,
            slope: 2.0,
        };
        assert_eq!(r.value(0.0), -1.0);
        assert_eq!(r.value(2.0), 1.0);
        let s = Profile::Sinusoid {
            offset: 1.0,
            amplitude: 2.0,
            frequency: 0.25,
            phase: 0.0,
        };
        assert!((s.value(1.0) - 3.0).abs() < 1e-12);
        assert!((s.derivative(0.0) - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn bad_samples_rejected() {
        assert!(Profile::sampled(&[(0.0, 1.0), (0.0, 2.0)]).validate().is_err());
        assert!(Profile::Sampled {
            times: vec![0.0],
            values: vec![]
        }
        .validate()
        .is_err());
        assert!(Profile::sampled(&[(0.0, 1.0)]).validate().is_ok());
    }

    #[test]
    fn toml_shape() {
        let p: Profile = toml::from_str("kind = \"ramp\"\nstart = 0.0\nvalue = 1.0\nslope = 2.0").unwrap();
        assert_eq!(
            p,
            Profile::Ramp {
                start: 0.0,
                value: 1.0,
                slope: 2.0
            }
        );
    }
}
