use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::frame::{generate_frame_with, FrameSampler};
use crate::scenario::{ScenarioConfig, TransmissionStrategy};
use crate::sic::SicDecoder;
use crate::utility::utility_of_counts;

/// Random stream type used throughout the simulator.
pub type SimRng = ChaCha8Rng;

/// Channel randomness of one episode.
///
/// Step `t` draws its frames from ChaCha stream `t` of the episode seed, so
/// the frame seen at step `t` depends only on `(seed, t)` and the arm played,
/// not on the policy's earlier choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvironmentStream {
    pub seed: u64,
}

impl EnvironmentStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn step_rng(&self, t: u64) -> SimRng {
        let mut rng = SimRng::seed_from_u64(self.seed);
        rng.set_stream(t);
        rng
    }
}

/// Scratch buffers for repeated frame simulation.
#[derive(Debug, Default)]
pub struct FrameWorkspace {
    sampler: FrameSampler,
    decoder: SicDecoder,
    counts: Vec<usize>,
}

impl FrameWorkspace {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Generate and decode one frame, returning `(1/L) Σ w ln(r^(i) + 1)`.
pub fn frame_reward(
    strategy: &TransmissionStrategy,
    cfg: &ScenarioConfig,
    rng: &mut SimRng,
    workspace: &mut FrameWorkspace,
) -> Result<f64> {
    let frame = generate_frame_with(strategy, cfg, rng, &mut workspace.sampler)?;
    workspace.decoder.decode_counts(&frame, &mut workspace.counts);
    Ok(utility_of_counts(&workspace.counts, cfg.w))
}
