use serde::{Deserialize, Serialize};

use crate::degree::DegreeDistribution;
use crate::error::{IrsaError, Result};

/// How replica slots are drawn within one source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// All replicas of all K packets of a source occupy distinct slots.
    #[default]
    PerSource,
    /// Replicas of one packet are distinct; packets of one source are placed
    /// independently (the independence assumed by density evolution).
    PerPacket,
}

fn default_w() -> f64 {
    1.0
}

fn default_l_max() -> usize {
    8
}

/// The fixed environment: `sources` (L) users sharing frames of `slots` (M).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub sources: usize,
    pub slots: usize,
    /// Utility scale in `w ln(r + 1)`.
    #[serde(default = "default_w")]
    pub w: f64,
    #[serde(default = "default_l_max")]
    pub l_max: usize,
    /// Number of decision opportunities per episode.
    pub horizon: usize,
    pub rng_seed: u64,
    #[serde(default)]
    pub placement: Placement,
}

impl ScenarioConfig {
    pub fn new(sources: usize, slots: usize) -> Self {
        Self {
            sources,
            slots,
            w: default_w(),
            l_max: default_l_max(),
            horizon: 1,
            rng_seed: 0,
            placement: Placement::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sources == 0 {
            return Err(IrsaError::InvalidScenario("L must be >= 1".into()));
        }
        if self.slots == 0 {
            return Err(IrsaError::InvalidScenario("M must be >= 1".into()));
        }
        if !(self.w.is_finite() && self.w > 0.0) {
            return Err(IrsaError::InvalidScenario(format!("w must be > 0, got {}", self.w)));
        }
        if self.horizon == 0 {
            return Err(IrsaError::InvalidScenario("horizon must be >= 1".into()));
        }
        if self.l_max == 0 {
            return Err(IrsaError::InvalidScenario("l_max must be >= 1".into()));
        }
        Ok(())
    }

    /// Largest admissible K, `floor(M / L)`.
    pub fn max_packets(&self) -> usize {
        self.slots / self.sources
    }

    /// Traffic load `G = L K / M`.
    pub fn traffic(&self, packets: usize) -> f64 {
        (self.sources * packets) as f64 / self.slots as f64
    }
}

/// A candidate transmission strategy `(Λ(x), K)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionStrategy {
    pub lambda: DegreeDistribution,
    /// Packets per source per frame.
    pub packets: usize,
}

impl TransmissionStrategy {
    pub fn new(lambda: DegreeDistribution, packets: usize) -> Self {
        Self { lambda, packets }
    }

    /// Checks `K >= 1`, `L K <= M` and that `Λ` fits the scenario's `l_max`.
    pub fn check(&self, cfg: &ScenarioConfig) -> Result<()> {
        if self.packets == 0 {
            return Err(IrsaError::InvalidParameter("K must be >= 1".into()));
        }
        if cfg.sources * self.packets > cfg.slots {
            return Err(IrsaError::TrafficConstraint {
                sources: cfg.sources,
                packets: self.packets,
                slots: cfg.slots,
            });
        }
        if self.lambda.l_max() > cfg.l_max {
            return Err(IrsaError::InvalidDistribution(format!(
                "degree {} exceeds scenario l_max {}",
                self.lambda.l_max(),
                cfg.l_max
            )));
        }
        Ok(())
    }
}

/// An indexed strategy; the bandit's action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arm {
    pub id: usize,
    pub strategy: TransmissionStrategy,
}
