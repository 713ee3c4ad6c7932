use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::DensityEvolutionParams;
use crate::bandit::PolicyKind;
use crate::degree::DegreeDistribution;
use crate::error::{IrsaError, Result};
use crate::scenario::ScenarioConfig;

/// How coefficient triples off the probability simplex are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridNormalization {
    /// Keep only grid points whose coefficients sum to one.
    #[default]
    ExactSum,
    /// Rescale every non-zero grid point to sum to one (duplicates dropped).
    Normalize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ArmFamily {
    /// Fixed `Λ(x)`, `K = 1..=floor(M/L)`.
    KOnly { fixed_lambda: DegreeDistribution },
    /// `Λ(x) = Σ a_i x^{d_i}` for `a_i` on a grid of the given step, crossed
    /// with every admissible K.
    Joint {
        degrees: Vec<usize>,
        step: f64,
        #[serde(default)]
        normalization: GridNormalization,
    },
}

fn default_runs() -> usize {
    100
}

fn default_frames_per_decision() -> usize {
    1
}

fn default_mu_star_frames() -> usize {
    100_000
}

fn default_oracle_seed() -> u64 {
    0x0DDC_0FFE_E000_0001
}

/// One experiment. `scenario.rng_seed` is the base seed: run `r` uses
/// environment seed `rng_seed + r` for every policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub scenario: ScenarioConfig,
    pub arms: ArmFamily,
    pub policies: Vec<PolicyKind>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_frames_per_decision")]
    pub frames_per_decision: usize,
    /// Frames per arm for the Monte-Carlo `μ*` estimate.
    #[serde(default = "default_mu_star_frames")]
    pub mu_star_frames: usize,
    #[serde(default = "default_oracle_seed")]
    pub oracle_seed: u64,
    #[serde(default)]
    pub density_evolution: DensityEvolutionParams,
    /// Also write every episode step to `episodes.csv`.
    #[serde(default)]
    pub write_episodes: bool,
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| IrsaError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| IrsaError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            IrsaError::Config(msg) => IrsaError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| IrsaError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.density_evolution.validate()?;
        if self.runs == 0 {
            return Err(IrsaError::Config("runs must be >= 1".into()));
        }
        if self.frames_per_decision == 0 {
            return Err(IrsaError::Config("frames_per_decision must be >= 1".into()));
        }
        if self.mu_star_frames == 0 {
            return Err(IrsaError::Config("mu_star_frames must be >= 1".into()));
        }
        for policy in &self.policies {
            policy.validate()?;
        }
        if let ArmFamily::Joint { degrees, step, .. } = &self.arms {
            if degrees.is_empty() {
                return Err(IrsaError::Config("joint grid needs at least one degree".into()));
            }
            if !(*step > 0.0 && *step <= 1.0) {
                return Err(IrsaError::Config(format!("grid step {step} outside (0, 1]")));
            }
            let cells = 1.0 / step;
            if (cells - cells.round()).abs() > 1e-9 {
                return Err(IrsaError::Config(format!("grid step {step} must divide 1")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K_ONLY: &str = r#"
runs = 3

[scenario]
sources = 20
slots = 300
horizon = 50
rng_seed = 9

[arms]
family = "k_only"
fixed_lambda = [[2, 0.75], [3, 0.25]]

[[policies]]
kind = "ucb"
beta = 1.0

[[policies]]
kind = "asymptotic"
"#;

    #[test]
    fn parses_k_only_config_with_defaults() {
        let spec = ExperimentSpec::from_toml_str(K_ONLY).unwrap();
        assert_eq!(spec.runs, 3);
        assert_eq!(spec.scenario.w, 1.0);
        assert_eq!(spec.frames_per_decision, 1);
        assert_eq!(spec.mu_star_frames, 100_000);
        assert_eq!(spec.policies.len(), 2);
        let ArmFamily::KOnly { fixed_lambda } = &spec.arms else {
            panic!("expected k_only");
        };
        assert_eq!(fixed_lambda.prob(2), 0.75);
    }

    #[test]
    fn round_trips_through_toml() {
        let spec = ExperimentSpec::from_toml_str(K_ONLY).unwrap();
        let again = ExperimentSpec::from_toml_str(&spec.to_toml_string().unwrap()).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentSpec::from_toml_str(&K_ONLY.replace("runs = 3", "runs = 0")).is_err());
        assert!(ExperimentSpec::from_toml_str(&K_ONLY.replace("runs = 3", "rnus = 3")).is_err());
        assert!(ExperimentSpec::from_toml_str(&K_ONLY.replace("0.25]]", "0.35]]")).is_err());
        let joint = K_ONLY.replace(
            "family = \"k_only\"\nfixed_lambda = [[2, 0.75], [3, 0.25]]",
            "family = \"joint\"\ndegrees = [2, 3, 8]\nstep = 0.3",
        );
        assert!(ExperimentSpec::from_toml_str(&joint).is_err());
        assert!(ExperimentSpec::from_toml_str(&joint.replace("0.3", "0.25")).is_ok());
    }
}
