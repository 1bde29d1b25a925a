//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;

use spinforge_core::models::{Distance, ModelKind, ModelSpec};

use crate::CliError;

/// Every key the front end understands.
pub const KNOWN_KEYS: &[&str] = &[
    "command",
    "kind",
    "n_sites",
    "j0",
    "hz",
    "delta",
    "gamma",
    "kac",
    "distance",
    "chi",
    "t_max",
    "n_points",
    "rescaled",
    "method",
    "max_phase",
    "trotter_steps",
    "frame",
    "state",
    "t",
    "n_theta",
    "seed",
    "delta_min",
    "delta_max",
    "delta_points",
    "gamma_min",
    "gamma_max",
    "gamma_points",
    "output_path",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Dispersion,
    Chi,
    Evolve,
    Bell,
    Squeeze,
    Probe,
    Fidelity,
    PhaseDiagram,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Dispersion,
        Command::Chi,
        Command::Evolve,
        Command::Bell,
        Command::Squeeze,
        Command::Probe,
        Command::Fidelity,
        Command::PhaseDiagram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Chi => "chi",
            Command::Evolve => "evolve",
            Command::Bell => "bell",
            Command::Squeeze => "squeeze",
            Command::Probe => "probe",
            Command::Fidelity => "fidelity",
            Command::PhaseDiagram => "phase-diagram",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Time integrator for `evolve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Trotter,
}

/// Reading frame for the Bell correlator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameChoice {
    Optimize,
    Identity,
    YAligned,
}

/// State handed to `probe`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeState {
    /// Exact evolution of `|+x⟩^N` up to time `t`.
    Evolved,
    Coherent,
    Ghz,
    RandomSymmetric,
    Random,
}

/// `t_max` in physical units, or in units of `π/|χ|` when `rescaled`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: Option<f64>,
    pub n_points: usize,
    pub rescaled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.min + (self.max - self.min) * i as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub delta: Range,
    pub gamma: Range,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub model: ModelSpec,
    pub time_grid: TimeGrid,
    pub sweep: Option<Sweep>,
    pub output_path: Option<String>,
    pub seed: u64,
    pub method: Method,
    pub max_phase: f64,
    pub trotter_steps: Option<usize>,
    pub frame: FrameChoice,
    pub state: ProbeState,
    pub t: Option<f64>,
    pub n_theta: Option<usize>,
    /// Every key/value pair that was set, for the metadata echo.
    pub echo: BTreeMap<String, String>,
}

/// Ordered key/value pairs before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    /// Inserts or overrides a key, rejecting unknown names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::UnknownKey(key.to_string()));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("invalid value for {key}: {v:?}")))
            })
            .transpose()
    }

    fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.get(key)
            .map(|v| match v {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(CliError::Config(format!("invalid value for {key}: {v:?}"))),
            })
            .transpose()
    }

    fn choice<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| parse(v).ok_or_else(|| CliError::Config(format!("invalid value for {key}: {v:?}"))))
            .transpose()
    }

    /// Interprets the pairs; `command` falls back to `default_command`.
    pub fn build(&self, default_command: Option<Command>) -> Result<ExperimentConfig, CliError> {
        let command = match self.choice("command", Command::parse)? {
            Some(c) => c,
            None => default_command.ok_or_else(|| CliError::Config("missing key command".into()))?,
        };
        let default_kind = if command == Command::PhaseDiagram {
            ModelKind::LongRangeXxz
        } else {
            ModelKind::StaggeredXxx
        };
        let kind = self.choice("kind", ModelKind::parse)?.unwrap_or(default_kind);
        let model = ModelSpec {
            kind,
            n_sites: self.parsed("n_sites")?.unwrap_or(10),
            j0: self.parsed("j0")?.unwrap_or(1.0),
            hz: self.parsed("hz")?.unwrap_or(0.1),
            delta: self.parsed("delta")?.unwrap_or(0.0),
            gamma: self.parsed("gamma")?.unwrap_or(1.0),
            kac: self.bool("kac")?.unwrap_or(true),
            distance: self.choice("distance", Distance::parse)?.unwrap_or(Distance::RingMinimal),
            chi: self.parsed("chi")?.unwrap_or(0.0),
        };
        model.validate().map_err(|e| CliError::Config(e.to_string()))?;

        let time_grid = TimeGrid {
            t_max: self.parsed("t_max")?,
            n_points: self.parsed("n_points")?.unwrap_or(401),
            rescaled: self.bool("rescaled")?.unwrap_or(false),
        };
        if let Some(t) = time_grid.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config("t_max must be positive".into()));
            }
        }
        if time_grid.n_points < 2 {
            return Err(CliError::Config("n_points must be at least 2".into()));
        }

        let range = |name: &str, lo: f64, hi: f64, pts: usize| -> Result<Range, CliError> {
            let r = Range {
                min: self.parsed(&format!("{name}_min"))?.unwrap_or(lo),
                max: self.parsed(&format!("{name}_max"))?.unwrap_or(hi),
                points: self.parsed(&format!("{name}_points"))?.unwrap_or(pts),
            };
            if r.points < 1 || !r.min.is_finite() || !r.max.is_finite() {
                return Err(CliError::Config(format!("{name}_points must be at least 1")));
            }
            Ok(r)
        };
        let sweep = if command == Command::PhaseDiagram {
            Some(Sweep {
                delta: range("delta", -3.0, 3.0, 25)?,
                gamma: range("gamma", 0.0, 6.0, 25)?,
            })
        } else {
            None
        };

        let max_phase: f64 = self.parsed("max_phase")?.unwrap_or(0.05);
        if !(max_phase > 0.0) {
            return Err(CliError::Config("max_phase must be positive".into()));
        }
        let trotter_steps: Option<usize> = self.parsed("trotter_steps")?;
        if trotter_steps == Some(0) {
            return Err(CliError::Config("trotter_steps must be at least 1".into()));
        }
        let n_theta: Option<usize> = self.parsed("n_theta")?;
        let t: Option<f64> = self.parsed("t")?;
        if t.is_some_and(|t| !t.is_finite()) {
            return Err(CliError::Config("t must be finite".into()));
        }

        Ok(ExperimentConfig {
            command,
            model,
            time_grid,
            sweep,
            output_path: self.get("output_path").map(str::to_string),
            seed: self.parsed("seed")?.unwrap_or(0),
            method: self
                .choice("method", |s| match s {
                    "exact" => Some(Method::Exact),
                    "trotter" => Some(Method::Trotter),
                    _ => None,
                })?
                .unwrap_or(Method::Exact),
            max_phase,
            trotter_steps,
            frame: self
                .choice("frame", |s| match s {
                    "optimize" => Some(FrameChoice::Optimize),
                    "identity" => Some(FrameChoice::Identity),
                    "y_aligned" => Some(FrameChoice::YAligned),
                    _ => None,
                })?
                .unwrap_or(FrameChoice::Optimize),
            state: self
                .choice("state", |s| match s {
                    "evolved" => Some(ProbeState::Evolved),
                    "coherent" => Some(ProbeState::Coherent),
                    "ghz" => Some(ProbeState::Ghz),
                    "random_symmetric" => Some(ProbeState::RandomSymmetric),
                    "random" => Some(ProbeState::Random),
                    _ => None,
                })?
                .unwrap_or(ProbeState::Evolved),
            t,
            n_theta,
            echo: self.entries.clone(),
        })
    }
}
