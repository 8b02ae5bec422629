use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::design::{DesignContext, Parameter, SearchSpec};
use crate::model::{
    closed_loop_matrices, reduced_env, ConewisePair, ControllerGains, EnvEstimates, Environment,
    RigidPlant, WristParams,
};
use crate::sim::SimConfig;
use crate::trajectory::{ContactSchedule, Profile, TrajectorySpec};

use super::scenarios;
use super::CliError;

/// Trajectory section; the environment estimates come from `[estimates]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySection {
    #[serde(default)]
    pub start: f64,
    pub horizon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_force: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_position: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<(f64, f64)>,
    /// Spacing of the dumped samples (s).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_step: Option<f64>,
    pub schedule: ContactSchedule,
    pub position: Profile,
    pub force: Profile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Rigid,
    Compliant,
    Reduced,
    WorstCase,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub model: ModelKind,
    pub step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_event_sep: Option<f64>,
    pub horizon: f64,
    #[serde(default = "one")]
    pub record_every: usize,
    /// Physical initial state, or `z0` for the error-coordinate models.
    /// Error-coordinate runs draw a random unit `z0` from the seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

impl SimulationSection {
    pub fn config(&self) -> SimConfig {
        let mut c = SimConfig::new(self.step, self.horizon).record_every(self.record_every);
        if let Some(tol) = self.event_tol {
            c.event_tol = tol;
            c.min_event_sep = 10.0 * tol;
        }
        if let Some(sep) = self.min_event_sep {
            c.min_event_sep = sep;
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub parameter: SearchParameter,
    pub lo: f64,
    pub hi: f64,
    pub tolerance: f64,
    #[serde(default = "default_sweep")]
    pub sweep_points: usize,
}

fn default_sweep() -> usize {
    64
}

/// `b_f` or `b_t` as written in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchParameter {
    #[serde(rename = "b_f")]
    Bf,
    #[serde(rename = "b_t")]
    Bt,
}

impl From<SearchParameter> for Parameter {
    fn from(p: SearchParameter) -> Self {
        match p {
            SearchParameter::Bf => Parameter::Bf,
            SearchParameter::Bt => Parameter::Bt,
        }
    }
}

/// A scenario file. Sections are optional here; each command checks for the ones it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<RigidPlant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<Environment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gains: Option<ControllerGains>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wrist: Option<WristParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimates: Option<EnvEstimates>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectorySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
}

fn need<'a, T>(section: &'a Option<T>, name: &str, command: &str) -> Result<&'a T, CliError> {
    section.as_ref().ok_or_else(|| {
        CliError::Config(format!(
            "missing section [{name}], required by `{command}`"
        ))
    })
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads a file, or a shipped scenario when `path` names one and no such file exists.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => match path.to_str().and_then(scenarios::builtin) {
                Some(t) if !path.exists() => t.to_string(),
                _ => return Err(CliError::Io(format!("{}: {e}", path.display()))),
            },
        };
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config is always representable")
    }

    pub fn plant(&self, command: &str) -> Result<RigidPlant, CliError> {
        let p = *need(&self.plant, "plant", command)?;
        p.validate()?;
        Ok(p)
    }

    pub fn environment(&self, command: &str) -> Result<Environment, CliError> {
        let e = *need(&self.environment, "environment", command)?;
        e.validate()?;
        Ok(e)
    }

    pub fn gains(&self, command: &str) -> Result<ControllerGains, CliError> {
        let g = *need(&self.gains, "gains", command)?;
        g.validate()?;
        Ok(g)
    }

    pub fn wrist(&self, command: &str) -> Result<WristParams, CliError> {
        let w = *need(&self.wrist, "wrist", command)?;
        w.validate()?;
        Ok(w)
    }

    pub fn trajectory_spec(&self, command: &str) -> Result<TrajectorySpec, CliError> {
        let t = need(&self.trajectory, "trajectory", command)?;
        let estimates = *need(&self.estimates, "estimates", command)?;
        let spec = TrajectorySpec {
            position: t.position.clone(),
            force: t.force.clone(),
            schedule: t.schedule.clone(),
            estimates,
            start: t.start,
            horizon: t.horizon,
            gamma_force: t.gamma_force,
            gamma_position: t.gamma_position,
            filter_step: t.filter_step,
            initial: t.initial,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn simulation(&self, command: &str) -> Result<&SimulationSection, CliError> {
        let s = need(&self.simulation, "simulation", command)?;
        s.config().validate()?;
        Ok(s)
    }

    /// Error-system pair of the configured loop; a wrist is folded into the environment.
    pub fn pair(&self, command: &str) -> Result<ConewisePair, CliError> {
        let plant = self.plant(command)?;
        let mut env = self.environment(command)?;
        let gains = self.gains(command)?;
        if self.wrist.is_some() {
            env = reduced_env(&self.wrist(command)?, &env);
        }
        Ok(closed_loop_matrices(&plant, &env, &gains)?)
    }

    pub fn search_spec(&self, command: &str) -> Result<(SearchSpec, usize), CliError> {
        let s = need(&self.search, "search", command)?;
        let parameter: Parameter = s.parameter.into();
        let wrist = match parameter {
            Parameter::Bt => Some(self.wrist(command)?),
            Parameter::Bf => self.wrist.map(|_| self.wrist(command)).transpose()?,
        };
        let spec = SearchSpec {
            parameter,
            lo: s.lo,
            hi: s.hi,
            tolerance: s.tolerance,
            context: DesignContext {
                plant: self.plant(command)?,
                env: self.environment(command)?,
                gains: self.gains(command)?,
                wrist,
            },
        };
        spec.validate()?;
        Ok((spec, s.sweep_points.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_scenarios_parse_and_round_trip() {
        for name in scenarios::NAMES {
            let text = scenarios::builtin(name).unwrap();
            let cfg = ScenarioConfig::parse(text).unwrap();
            assert_eq!(cfg.name, *name);
            let again = ScenarioConfig::parse(&cfg.to_toml()).unwrap();
            assert_eq!(cfg, again, "{name}");
        }
    }

    #[test]
    fn missing_section_named() {
        let text = scenarios::builtin("s4_bf5").unwrap().replace("[gains]", "[ignored_gains]");
        let err = ScenarioConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("ignored_gains"), "{err}");
        let cfg = ScenarioConfig::parse("name = \"x\"").unwrap();
        let err = cfg.gains("certify").unwrap_err().to_string();
        assert!(err.contains("[gains]"), "{err}");
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = ScenarioConfig::parse("name = \"x\"\n[plant]\nmass = \"heavy\"\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
