use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::arm_state::{bayes_ucb_index, ucb_index, ArmState};
use crate::analysis::PriorMoments;
use crate::error::{IrsaError, Result};
use crate::scenario::Arm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicyKind {
    /// Count-based confidence bonus.
    Ucb { beta: f64 },
    /// Posterior mean plus `beta` posterior standard deviations, seeded
    /// with the asymptotic prior.
    BayesUcb { beta: f64 },
    /// Bayes-UCB with `beta = 0`.
    Greedy,
    /// Always plays the arm chosen by the asymptotic optimiser.
    Asymptotic,
}

impl PolicyKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PolicyKind::Ucb { beta } | PolicyKind::BayesUcb { beta }
                if !(beta >= 0.0 && beta.is_finite()) =>
            {
                Err(IrsaError::InvalidParameter(format!("beta must be >= 0, got {beta}")))
            }
            _ => Ok(()),
        }
    }

    /// Stable label used in output files.
    pub fn label(&self) -> String {
        match self {
            PolicyKind::Ucb { beta } => format!("ucb(beta={beta})"),
            PolicyKind::BayesUcb { beta } => format!("bayes_ucb(beta={beta})"),
            PolicyKind::Greedy => "greedy".to_string(),
            PolicyKind::Asymptotic => "asymptotic".to_string(),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Index of the arm maximising `score`, ties broken uniformly with `rng`.
/// The rng is only consulted when there is a tie.
pub fn argmax_random_tie<R: Rng + ?Sized>(scores: &[f64], rng: &mut R) -> Option<usize> {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
    match ties.len() {
        0 => None,
        1 => Some(ties[0]),
        n => Some(ties[rng.gen_range(0..n)]),
    }
}

/// Position in `states` of the arm the policy plays at step `t`.
///
/// `baseline` is the asymptotic optimiser's choice and is required for
/// [`PolicyKind::Asymptotic`].
pub fn select_arm<R: Rng + ?Sized>(
    policy: &PolicyKind,
    states: &[ArmState],
    t: u64,
    baseline: Option<usize>,
    rng: &mut R,
) -> Result<usize> {
    if states.is_empty() {
        return Err(IrsaError::EmptyArmSet);
    }
    let scores: Vec<f64> = match *policy {
        PolicyKind::Asymptotic => {
            return baseline.filter(|&b| b < states.len()).ok_or_else(|| {
                IrsaError::InvalidParameter("asymptotic policy needs a baseline arm".into())
            });
        }
        PolicyKind::Ucb { beta } => states.iter().map(|s| ucb_index(s, t as f64, beta)).collect(),
        PolicyKind::BayesUcb { beta } => states.iter().map(|s| bayes_ucb_index(s, beta)).collect(),
        PolicyKind::Greedy => states.iter().map(|s| bayes_ucb_index(s, 0.0)).collect(),
    };
    argmax_random_tie(&scores, rng).ok_or(IrsaError::EmptyArmSet)
}

/// A policy together with its per-arm state.
#[derive(Debug, Clone)]
pub struct Learner {
    pub policy: PolicyKind,
    pub states: Vec<ArmState>,
    baseline: Option<usize>,
}

impl Learner {
    /// `priors[i]` seeds `arms[i]`; `baseline` is a position into `arms`.
    pub fn new(
        policy: PolicyKind,
        arms: &[Arm],
        priors: &[PriorMoments],
        baseline: Option<usize>,
    ) -> Result<Self> {
        policy.validate()?;
        if arms.is_empty() {
            return Err(IrsaError::EmptyArmSet);
        }
        if arms.len() != priors.len() {
            return Err(IrsaError::InvalidParameter(format!(
                "{} arms but {} priors",
                arms.len(),
                priors.len()
            )));
        }
        let states = arms
            .iter()
            .zip(priors)
            .map(|(arm, prior)| ArmState::from_prior(arm.id, arm.strategy.clone(), *prior))
            .collect();
        Ok(Self {
            policy,
            states,
            baseline,
        })
    }

    pub fn select<R: Rng + ?Sized>(&self, t: u64, rng: &mut R) -> Result<usize> {
        select_arm(&self.policy, &self.states, t, self.baseline, rng)
    }

    pub fn update(&mut self, position: usize, reward: f64) {
        let state = &mut self.states[position];
        match self.policy {
            PolicyKind::Ucb { .. } => state.ucb_update(reward),
            PolicyKind::BayesUcb { .. } | PolicyKind::Greedy => state.bayes_update(reward),
            PolicyKind::Asymptotic => state.ucb_update(reward),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::DegreeDistribution;
    use crate::scenario::TransmissionStrategy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn states(mus: &[f64]) -> Vec<ArmState> {
        let strategy = TransmissionStrategy::new(DegreeDistribution::regular(2).unwrap(), 1);
        mus.iter()
            .enumerate()
            .map(|(i, &mu)| ArmState::from_prior(i, strategy.clone(), PriorMoments { mu, sigma2: 0.01 }))
            .collect()
    }

    #[test]
    fn single_and_strict_argmax() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = PolicyKind::BayesUcb { beta: 1.0 };
        assert_eq!(select_arm(&p, &states(&[0.3]), 1, None, &mut rng).unwrap(), 0);
        assert_eq!(select_arm(&p, &states(&[1.0, 2.0]), 1, None, &mut rng).unwrap(), 1);
        let p = PolicyKind::Ucb { beta: 1.0 };
        assert_eq!(select_arm(&p, &states(&[1.0, 2.0]), 5, None, &mut rng).unwrap(), 1);
    }

    #[test]
    fn ties_are_split_evenly() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = states(&[1.0, 1.0]);
        let n = 10_000;
        let ones = (0..n)
            .filter(|_| select_arm(&PolicyKind::Greedy, &s, 1, None, &mut rng).unwrap() == 1)
            .count();
        let freq = ones as f64 / n as f64;
        assert!((freq - 0.5).abs() <= 0.02, "freq {freq}");
    }

    #[test]
    fn empty_and_missing_baseline() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(
            select_arm(&PolicyKind::Greedy, &[], 1, None, &mut rng),
            Err(IrsaError::EmptyArmSet)
        ));
        assert!(select_arm(&PolicyKind::Asymptotic, &states(&[1.0]), 1, None, &mut rng).is_err());
        assert_eq!(
            select_arm(&PolicyKind::Asymptotic, &states(&[1.0, 3.0]), 1, Some(0), &mut rng).unwrap(),
            0
        );
    }

    #[test]
    fn negative_beta_rejected() {
        assert!(PolicyKind::Ucb { beta: -1.0 }.validate().is_err());
        assert!(PolicyKind::BayesUcb { beta: f64::NAN }.validate().is_err());
        assert!(PolicyKind::BayesUcb { beta: 0.0 }.validate().is_ok());
    }

    #[test]
    fn policy_kind_serde() {
        let p: PolicyKind = serde_json::from_str(r#"{"kind":"bayes_ucb","beta":1.0}"#).unwrap();
        assert_eq!(p, PolicyKind::BayesUcb { beta: 1.0 });
        let p: PolicyKind = serde_json::from_str(r#"{"kind":"asymptotic"}"#).unwrap();
        assert_eq!(p, PolicyKind::Asymptotic);
    }
}
