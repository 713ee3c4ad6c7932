use rand::SeedableRng;
use rayon::prelude::*;

use super::arms::build_arm_set;
use super::spec::ExperimentSpec;
use crate::analysis::{analyze_arm, asymptotic_optimize, ArmAnalysis, PriorMoments};
use crate::bandit::{
    estimate_mu_star, run_episode, EnvironmentStream, EpisodeLog, EpisodeSettings, Learner,
    MuStarEstimate, PolicyKind, SimRng,
};
use crate::error::Result;
use crate::scenario::Arm;

/// ChaCha stream of the run seed reserved for policy tie-breaking; the
/// environment uses streams `1..=horizon`.
pub const POLICY_STREAM: u64 = u64::MAX;

/// Mean and standard error across runs at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyResult {
    pub policy: PolicyKind,
    pub regret: Vec<CurvePoint>,
    pub reward: Vec<CurvePoint>,
    pub episodes: Vec<EpisodeLog>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub arms: Vec<Arm>,
    pub analyses: Vec<ArmAnalysis>,
    pub mu_star: MuStarEstimate,
    /// Id of the asymptotic optimiser's arm.
    pub baseline_arm: usize,
    pub policies: Vec<PolicyResult>,
    /// Set when a policy failed; `policies` then holds the ones completed.
    pub failure: Option<String>,
}

fn curve(values: impl Fn(usize, usize) -> f64, runs: usize, horizon: usize) -> Vec<CurvePoint> {
    (0..horizon)
        .map(|t| {
            // fixed summation order over runs
            let mut sum = 0.0;
            for r in 0..runs {
                sum += values(r, t);
            }
            let mean = sum / runs as f64;
            let stderr = if runs > 1 {
                let mut ss = 0.0;
                for r in 0..runs {
                    let d = values(r, t) - mean;
                    ss += d * d;
                }
                (ss / (runs - 1) as f64 / runs as f64).sqrt()
            } else {
                0.0
            };
            CurvePoint { mean, stderr }
        })
        .collect()
}

/// Aggregate per-run logs into mean regret and reward curves.
pub fn aggregate(policy: PolicyKind, episodes: Vec<EpisodeLog>) -> PolicyResult {
    let runs = episodes.len();
    let horizon = episodes.iter().map(|e| e.steps.len()).min().unwrap_or(0);
    let regret = curve(|r, t| episodes[r].steps[t].cum_regret, runs, horizon);
    let reward = curve(|r, t| episodes[r].steps[t].reward, runs, horizon);
    PolicyResult {
        policy,
        regret,
        reward,
        episodes,
    }
}

/// Shared, immutable inputs of every episode of an experiment.
pub struct Prepared {
    pub arms: Vec<Arm>,
    pub analyses: Vec<ArmAnalysis>,
    pub priors: Vec<PriorMoments>,
    pub baseline_position: usize,
    pub mu_star: MuStarEstimate,
}

pub fn prepare(spec: &ExperimentSpec) -> Result<Prepared> {
    spec.validate()?;
    let cfg = &spec.scenario;
    let arms = build_arm_set(spec)?;
    let analyses = arms
        .par_iter()
        .map(|arm| analyze_arm(arm, cfg, &spec.density_evolution))
        .collect::<Result<Vec<_>>>()?;
    let priors = analyses.iter().map(|a| a.prior).collect();
    let baseline = asymptotic_optimize(&arms, cfg, &spec.density_evolution)?;
    // ids are positions
    let baseline_position = baseline.id;
    let mu_star = estimate_mu_star(&arms, cfg, spec.mu_star_frames, spec.oracle_seed)?;
    Ok(Prepared {
        arms,
        analyses,
        priors,
        baseline_position,
        mu_star,
    })
}

/// One episode of `policy` for run index `run`.
pub fn run_single(
    spec: &ExperimentSpec,
    prepared: &Prepared,
    policy: PolicyKind,
    run: usize,
) -> Result<EpisodeLog> {
    let run_seed = spec.scenario.rng_seed.wrapping_add(run as u64);
    let mut learner = Learner::new(
        policy,
        &prepared.arms,
        &prepared.priors,
        Some(prepared.baseline_position),
    )?;
    let mut policy_rng = SimRng::seed_from_u64(run_seed);
    policy_rng.set_stream(POLICY_STREAM);
    run_episode(
        &mut learner,
        &prepared.arms,
        &spec.scenario,
        EnvironmentStream::new(run_seed),
        &mut policy_rng,
        EpisodeSettings {
            horizon: spec.scenario.horizon,
            mu_star: prepared.mu_star.mu_star,
            frames_per_decision: spec.frames_per_decision,
        },
    )
}

/// Run every policy for `spec.runs` episodes with paired environment seeds.
pub fn run_prepared(spec: &ExperimentSpec, prepared: Prepared) -> ExperimentResult {
    let mut policies = Vec::new();
    let mut failure = None;
    for &policy in &spec.policies {
        let episodes = (0..spec.runs)
            .into_par_iter()
            .map(|run| run_single(spec, &prepared, policy, run))
            .collect::<Result<Vec<_>>>();
        match episodes {
            Ok(episodes) => policies.push(aggregate(policy, episodes)),
            Err(e) => {
                failure = Some(format!("policy {policy}: {e}"));
                break;
            }
        }
    }
    ExperimentResult {
        spec: spec.clone(),
        baseline_arm: prepared.arms[prepared.baseline_position].id,
        arms: prepared.arms,
        analyses: prepared.analyses,
        mu_star: prepared.mu_star,
        policies,
        failure,
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let prepared = prepare(spec)?;
    Ok(run_prepared(spec, prepared))
}
