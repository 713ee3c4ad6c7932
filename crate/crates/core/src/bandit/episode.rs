use rand::Rng;
use serde::{Deserialize, Serialize};

use super::env::{frame_reward, EnvironmentStream, FrameWorkspace};
use super::policy::Learner;
use crate::error::{IrsaError, Result};
use crate::scenario::{Arm, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    /// Id of the arm played.
    pub arm: usize,
    pub reward: f64,
    pub cum_reward: f64,
    /// `R(t)`, accumulated as `R(t-1) + μ* - X_t`.
    pub cum_regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub mu_star: f64,
    pub steps: Vec<StepRecord>,
}

/// Knobs of one episode that are not part of the scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeSettings {
    pub horizon: usize,
    pub mu_star: f64,
    /// Frames observed per decision; the reward is their mean.
    pub frames_per_decision: usize,
}

/// Play `settings.horizon` decisions. Every arm must satisfy `L K <= M`.
pub fn run_episode<R: Rng + ?Sized>(
    learner: &mut Learner,
    arms: &[Arm],
    cfg: &ScenarioConfig,
    env: EnvironmentStream,
    policy_rng: &mut R,
    settings: EpisodeSettings,
) -> Result<EpisodeLog> {
    if arms.is_empty() {
        return Err(IrsaError::EmptyArmSet);
    }
    if settings.horizon == 0 || settings.frames_per_decision == 0 {
        return Err(IrsaError::InvalidParameter(
            "horizon and frames_per_decision must be >= 1".into(),
        ));
    }
    for arm in arms {
        arm.strategy.check(cfg)?;
    }
    let mut workspace = FrameWorkspace::new();
    let mut steps = Vec::with_capacity(settings.horizon);
    let (mut cum_reward, mut cum_regret) = (0.0, 0.0);
    for t in 1..=settings.horizon as u64 {
        let position = learner.select(t, policy_rng)?;
        let strategy = &arms[position].strategy;
        let mut rng = env.step_rng(t);
        let mut reward = 0.0;
        for _ in 0..settings.frames_per_decision {
            reward += frame_reward(strategy, cfg, &mut rng, &mut workspace)?;
        }
        reward /= settings.frames_per_decision as f64;
        learner.update(position, reward);
        cum_reward += reward;
        cum_regret += settings.mu_star - reward;
        steps.push(StepRecord {
            t,
            arm: arms[position].id,
            reward,
            cum_reward,
            cum_regret,
        });
    }
    Ok(EpisodeLog {
        mu_star: settings.mu_star,
        steps,
    })
}
