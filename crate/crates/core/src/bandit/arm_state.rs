use crate::analysis::PriorMoments;
use crate::scenario::TransmissionStrategy;

/// Variance assigned to arms whose prior says the reward is deterministic.
pub const VARIANCE_FLOOR: f64 = 1e-6;

/// Per-arm learning state shared by UCB and Bayes-UCB.
///
/// Both learners count the prior as one pseudo-observation, so `pulls`
/// starts at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmState {
    pub arm_id: usize,
    pub strategy: TransmissionStrategy,
    pub mu_hat: f64,
    /// Posterior variance of the mean (Bayes-UCB).
    pub sigma2: f64,
    /// Observation variance of the conjugate update, fixed to the prior
    /// variance.
    pub obs_var: f64,
    pub pulls: u64,
}

impl ArmState {
    pub fn from_prior(arm_id: usize, strategy: TransmissionStrategy, prior: PriorMoments) -> Self {
        let sigma2 = prior.sigma2.max(VARIANCE_FLOOR);
        Self {
            arm_id,
            strategy,
            mu_hat: prior.mu,
            sigma2,
            obs_var: sigma2,
            pulls: 1,
        }
    }

    /// Running mean `(N μ̂ + X) / (N + 1)`.
    pub fn ucb_update(&mut self, reward: f64) {
        let n = self.pulls as f64;
        self.mu_hat = (n * self.mu_hat + reward) / (n + 1.0);
        self.pulls += 1;
    }

    /// Normal-Normal conjugate step with observation variance `obs_var`.
    pub fn bayes_update(&mut self, reward: f64) {
        let precision = 1.0 / self.sigma2 + 1.0 / self.obs_var;
        let sigma2 = 1.0 / precision;
        self.mu_hat = sigma2 * (self.mu_hat / self.sigma2 + reward / self.obs_var);
        self.sigma2 = sigma2;
        self.pulls += 1;
    }
}

/// `μ̂ + β sqrt(2 ln t / N)` for step `t >= 1`.
pub fn ucb_index(state: &ArmState, t: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        return state.mu_hat;
    }
    let t = t.max(1.0);
    state.mu_hat + beta * (2.0 * t.ln() / state.pulls as f64).sqrt()
}

/// `μ̂ + β σ`.
pub fn bayes_ucb_index(state: &ArmState, beta: f64) -> f64 {
    state.mu_hat + beta * state.sigma2.max(0.0).sqrt()
}
