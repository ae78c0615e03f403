//! Experiment specifications: TOML files and command-line overrides.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DUALITY_OUT_DIR";

/// Grids larger than this are rejected as probable typos.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Transition,
    Duality,
    Fringe,
    Sorkin,
    Randomness,
    Bell,
    Pearson,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Transition => "transition",
            Scenario::Duality => "duality",
            Scenario::Fringe => "fringe",
            Scenario::Sorkin => "sorkin",
            Scenario::Randomness => "randomness",
            Scenario::Bell => "bell",
            Scenario::Pearson => "pearson",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyChoice {
    Quantum,
    Classical,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// An angle or real number: `1.5`, `pi`, `-3pi/2`, `2*pi`, `π/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Spec(format!("cannot read `{s}` as a number or multiple of pi"));
        let t = s.trim().replace('π', "pi").replace(' ', "");
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1.0, rest.to_string()),
            None => (1.0, t.trim_start_matches('+').to_string()),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n.to_string(), d.parse::<f64>().map_err(|_| bad())?),
            None => (body, 1.0),
        };
        let value = match num.strip_suffix("pi") {
            Some(coef) => {
                let coef = coef.trim_end_matches('*');
                let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| bad())? };
                c * PI
            }
            None => num.parse::<f64>().map_err(|_| bad())?,
        };
        let v = sign * value / den;
        if !v.is_finite() {
            return Err(bad());
        }
        Ok(Angle(v))
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(x) => Ok(Angle(x)),
            Raw::Int(x) => Ok(Angle(x as f64)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Inclusive grid `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: Angle,
    pub stop: Angle,
    pub step: Angle,
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Self {
            start: Angle(x),
            stop: Angle(x),
            step: Angle(1.0),
        }
    }

    pub fn range(start: f64, stop: f64, step: f64) -> Self {
        Self {
            start: Angle(start),
            stop: Angle(stop),
            step: Angle(step),
        }
    }

    pub fn validate(&self, name: &str) -> Result<(), Error> {
        let (a, b, s) = (self.start.0, self.stop.0, self.step.0);
        if !(s > 0.0) {
            return Err(Error::Spec(format!("{name}: step must be positive, got {s}")));
        }
        if b < a {
            return Err(Error::Spec(format!("{name}: stop {b} is below start {a}")));
        }
        let n = self.count_unchecked();
        if n > MAX_GRID_POINTS {
            return Err(Error::Spec(format!(
                "{name}: {n} points exceed the limit of {MAX_GRID_POINTS}; increase the step"
            )));
        }
        Ok(())
    }

    fn count_unchecked(&self) -> usize {
        let span = (self.stop.0 - self.start.0) / self.step.0;
        (span + 1e-9).floor() as usize + 1
    }

    /// Points computed as `start + i·step`, never accumulated.
    pub fn points(&self) -> Vec<f64> {
        (0..self.count_unchecked())
            .map(|i| self.start.0 + i as f64 * self.step.0)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:step` or a single value.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Grid::single(x.parse::<Angle>()?.0)),
            [a, b, st] => Ok(Grid {
                start: a.parse()?,
                stop: b.parse()?,
                step: st.parse()?,
            }),
            _ => Err(Error::Spec(format!("grid `{s}` must be `start:stop:step` or a single value"))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start.0, self.stop.0, self.step.0)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Table {
            start: Angle,
            stop: Angle,
            step: Angle,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Table(Table),
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Table(t) => Ok(Grid {
                start: t.start,
                stop: t.stop,
                step: t.step,
            }),
            Raw::Num(x) => Ok(Grid::single(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One experiment. Every field has a default so files may be partial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    pub d: usize,
    /// Dimensions compared by the Pearson scenario.
    pub dims: Vec<usize>,
    pub family: FamilyChoice,
    pub alpha: Grid,
    pub delta: Grid,
    pub theta: Grid,
    /// Source-noise weights swept by the Bell scenario.
    pub noise: Grid,
    /// White-noise weight of the Werner source, 0 = ideal.
    pub source_noise: f64,
    /// Blocking leakage intensity for the Sorkin scenario.
    pub leakage: f64,
    /// Poisson mean per acquisition.
    pub mean_total: f64,
    pub seed: u64,
    /// Monte-Carlo repetitions (Sorkin and Randomness).
    pub trials: usize,
    pub formats: Vec<OutputFormat>,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            scenario: Scenario::Transition,
            d: 4,
            dims: vec![2, 4, 8, 16],
            family: FamilyChoice::Both,
            alpha: Grid::range(0.0, 2.0 * PI, PI / 32.0),
            delta: Grid::single(0.0),
            theta: Grid::range(0.0, 2.0 * PI, PI / 32.0),
            noise: Grid::range(0.0, 1.0, 0.05),
            source_noise: 0.0,
            leakage: 0.003,
            mean_total: 1e4,
            seed: 0,
            trials: 60,
            formats: vec![OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg],
            output_dir: None,
        }
    }
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Spec(format!("config file: {e}")))
    }

    pub fn to_toml(&self) -> Result<String, Error> {
        toml::to_string(self).map_err(|e| Error::Spec(format!("config serialization: {e}")))
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.d < 2 {
            return Err(Error::Spec(format!("d must be at least 2, got {}", self.d)));
        }
        if self.d > 64 {
            return Err(Error::Spec(format!("d = {} is beyond the supported range (≤ 64)", self.d)));
        }
        if self.scenario == Scenario::Sorkin && self.d != 4 {
            return Err(Error::Spec(format!("the sorkin scenario is defined for d = 4, got {}", self.d)));
        }
        if self.scenario == Scenario::Pearson {
            if self.dims.is_empty() {
                return Err(Error::Spec("pearson: `dims` must list at least one dimension".into()));
            }
            if let Some(bad) = self.dims.iter().find(|&&d| d < 2 || !d.is_power_of_two()) {
                return Err(Error::Spec(format!("pearson: dimension {bad} must be a power of two ≥ 2")));
            }
        }
        for (name, g) in [("alpha", &self.alpha), ("delta", &self.delta), ("theta", &self.theta), ("noise", &self.noise)] {
            g.validate(name)?;
        }
        if self.scenario == Scenario::Bell {
            let pts = self.noise.points();
            if pts.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::Spec("noise grid must stay within [0, 1]".into()));
            }
        }
        if !(0.0..=1.0).contains(&self.source_noise) {
            return Err(Error::Spec(format!("source_noise {} outside [0, 1]", self.source_noise)));
        }
        if !(0.0..=0.05).contains(&self.leakage) {
            return Err(Error::Spec(format!("leakage {} outside the supported range [0, 0.05]", self.leakage)));
        }
        if !(self.mean_total > 0.0) || !self.mean_total.is_finite() {
            return Err(Error::Spec(format!("mean_total must be positive, got {}", self.mean_total)));
        }
        if self.trials < 2 {
            return Err(Error::Spec(format!("trials must be at least 2, got {}", self.trials)));
        }
        if self.formats.is_empty() {
            return Err(Error::Spec("at least one output format is required".into()));
        }
        Ok(())
    }

    /// `output_dir`, else `$DUALITY_OUT_DIR`, else `./out`.
    pub fn resolved_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        for (s, v) in [("pi", PI), ("-pi/2", -PI / 2.0), ("3pi/2", 1.5 * PI), ("2*pi", 2.0 * PI), ("0.25", 0.25), ("π/4", PI / 4.0)] {
            assert!((s.parse::<Angle>().unwrap().0 - v).abs() < 1e-15, "{s}");
        }
        assert!("pie".parse::<Angle>().is_err());
        assert!("1/0".parse::<Angle>().is_err());
    }

    #[test]
    fn grids() {
        let g: Grid = "0:2pi:pi/32".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 65);
        assert!((p[64] - 2.0 * PI).abs() < 1e-12);
        assert_eq!("1.5".parse::<Grid>().unwrap().points(), vec![1.5]);
        assert!(Grid::range(0.0, 1.0, 0.0).validate("x").is_err());
        assert!(Grid::range(1.0, 0.0, 0.1).validate("x").is_err());
    }

    #[test]
    fn toml_round_trip_and_partial_files() {
        let spec = ExperimentSpec::default();
        assert_eq!(ExperimentSpec::from_toml(&spec.to_toml().unwrap()).unwrap(), spec);
        let partial = ExperimentSpec::from_toml(
            "scenario = \"fringe\"\nd = 8\nalpha = \"pi\"\ntheta = { start = 0, stop = \"2pi\", step = \"pi/8\" }\n",
        )
        .unwrap();
        assert_eq!(partial.scenario, Scenario::Fringe);
        assert_eq!(partial.alpha.points(), vec![PI]);
        assert_eq!(partial.theta.points().len(), 17);
        assert!(ExperimentSpec::from_toml("scenaro = \"bell\"").is_err());
    }

    #[test]
    fn validation_messages() {
        let spec = ExperimentSpec { d: 1, ..Default::default() };
        assert!(spec.validate().unwrap_err().to_string().contains("at least 2"));
        let spec = ExperimentSpec { scenario: Scenario::Sorkin, d: 3, ..Default::default() };
        assert!(spec.validate().is_err());
        let spec = ExperimentSpec { leakage: 0.2, ..Default::default() };
        assert!(spec.validate().is_err());
    }
}
