//! Online learning over transmission strategies.

mod arm_state;
mod env;
mod episode;
mod oracle;
mod policy;

pub use arm_state::{bayes_ucb_index, ucb_index, ArmState, VARIANCE_FLOOR};
pub use env::{frame_reward, EnvironmentStream, FrameWorkspace, SimRng};
pub use episode::{run_episode, EpisodeLog, EpisodeSettings, StepRecord};
pub use oracle::{estimate_arm, estimate_mu_star, ArmEstimate, MuStarEstimate};
pub use policy::{argmax_random_tie, select_arm, Learner, PolicyKind};
