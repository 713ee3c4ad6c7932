use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::env::{frame_reward, FrameWorkspace, SimRng};
use crate::error::{IrsaError, Result};
use crate::scenario::{Arm, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmEstimate {
    pub arm_id: usize,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuStarEstimate {
    pub mu_star: f64,
    /// Id of the arm attaining `mu_star` (lowest id on ties).
    pub best_arm: usize,
    pub per_arm: Vec<ArmEstimate>,
}

/// Monte-Carlo mean reward of one arm over `n_frames` independent frames.
/// Arm `id` uses stream `id` of `seed`.
pub fn estimate_arm(arm: &Arm, cfg: &ScenarioConfig, n_frames: usize, seed: u64) -> Result<ArmEstimate> {
    if n_frames == 0 {
        return Err(IrsaError::InvalidParameter("n_frames must be >= 1".into()));
    }
    arm.strategy.check(cfg)?;
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(arm.id as u64);
    let mut workspace = FrameWorkspace::new();
    // Welford
    let (mut mean, mut m2) = (0.0_f64, 0.0_f64);
    for i in 1..=n_frames {
        let x = frame_reward(&arm.strategy, cfg, &mut rng, &mut workspace)?;
        let delta = x - mean;
        mean += delta / i as f64;
        m2 += delta * (x - mean);
    }
    let stderr = if n_frames > 1 {
        (m2 / (n_frames - 1) as f64 / n_frames as f64).sqrt()
    } else {
        0.0
    };
    Ok(ArmEstimate {
        arm_id: arm.id,
        mean,
        stderr,
    })
}

/// Monte-Carlo estimate of every arm's mean reward and of `μ*`.
pub fn estimate_mu_star(
    arms: &[Arm],
    cfg: &ScenarioConfig,
    n_frames: usize,
    seed: u64,
) -> Result<MuStarEstimate> {
    if arms.is_empty() {
        return Err(IrsaError::EmptyArmSet);
    }
    let per_arm = arms
        .par_iter()
        .map(|arm| estimate_arm(arm, cfg, n_frames, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut best = per_arm[0];
    for est in &per_arm[1..] {
        if est.mean > best.mean || (est.mean == best.mean && est.arm_id < best.arm_id) {
            best = *est;
        }
    }
    Ok(MuStarEstimate {
        mu_star: best.mean,
        best_arm: best.arm_id,
        per_arm,
    })
}
