//! Asymptotic IRSA analysis: density evolution of the peeling decoder, the
//! waterfall threshold, the binomial decode model and the prior moments
//! used to seed the learners.

use serde::{Deserialize, Serialize};

use crate::degree::DegreeDistribution;
use crate::error::{IrsaError, Result};
use crate::scenario::{Arm, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DensityEvolutionParams {
    pub max_iterations: usize,
    pub convergence_eps: f64,
    /// Packet loss target `δ` for the threshold search.
    pub loss_threshold: f64,
}

impl Default for DensityEvolutionParams {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            convergence_eps: 1e-12,
            loss_threshold: 1e-3,
        }
    }
}

impl DensityEvolutionParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(IrsaError::InvalidParameter("max_iterations must be >= 1".into()));
        }
        if !(self.convergence_eps > 0.0 && self.convergence_eps < 1.0) {
            return Err(IrsaError::InvalidParameter(
                "convergence_eps must lie in (0, 1)".into(),
            ));
        }
        if !(self.loss_threshold > 0.0 && self.loss_threshold <= 1.0) {
            return Err(IrsaError::InvalidParameter(
                "loss_threshold must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticResult {
    /// Packet loss probability `P_e = Λ(p_∞)`.
    pub p_loss: f64,
    /// Final edge erasure probability on the slot side.
    pub p_edge: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

impl AsymptoticResult {
    pub fn p_success(&self) -> f64 {
        1.0 - self.p_loss
    }
}

/// Runs the recursion `q_i = λ(p_{i-1})`, `p_i = 1 - exp(-G Λ'(1) q_i)` from
/// `p_0 = 1`, handing each `p_i` to `observe`.
fn iterate_de(
    lambda: &DegreeDistribution,
    load: f64,
    params: &DensityEvolutionParams,
    mut observe: impl FnMut(f64),
) -> Result<AsymptoticResult> {
    if !(load > 0.0 && load.is_finite()) {
        return Err(IrsaError::InvalidParameter(format!(
            "traffic load must be > 0, got {load}"
        )));
    }
    params.validate()?;
    let scale = load * lambda.average_degree();
    let mut p = 1.0_f64;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iterations {
        let q = lambda.edge_eval(p);
        let next = -(-scale * q).exp_m1();
        iterations += 1;
        observe(next);
        let step = (next - p).abs();
        p = next;
        if step < params.convergence_eps {
            converged = true;
            break;
        }
    }
    Ok(AsymptoticResult {
        p_loss: lambda.eval(p).clamp(0.0, 1.0),
        p_edge: p,
        iterations_used: iterations,
        converged,
    })
}

/// Asymptotic packet loss after SIC at traffic load `G`.
pub fn density_evolution_pe(
    lambda: &DegreeDistribution,
    load: f64,
    params: &DensityEvolutionParams,
) -> Result<AsymptoticResult> {
    iterate_de(lambda, load, params, |_| {})
}

/// The edge erasure trajectory `p_1, p_2, ...` of [`density_evolution_pe`].
pub fn density_evolution_trajectory(
    lambda: &DegreeDistribution,
    load: f64,
    params: &DensityEvolutionParams,
) -> Result<Vec<f64>> {
    let mut path = vec![1.0];
    iterate_de(lambda, load, params, |p| path.push(p))?;
    Ok(path)
}

const THRESHOLD_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEstimate {
    /// Largest load in `(0, 1]` with `P_e <= δ`, to within 1e-4.
    pub g_star: f64,
    /// Set when the search bracket degenerates.
    pub diagnostic: Option<String>,
}

/// Bisection for the waterfall threshold `G*` over `(0, 1]`.
pub fn waterfall_threshold(
    lambda: &DegreeDistribution,
    params: &DensityEvolutionParams,
) -> Result<ThresholdEstimate> {
    let passes = |g: f64| -> Result<bool> {
        Ok(density_evolution_pe(lambda, g, params)?.p_loss <= params.loss_threshold)
    };
    if passes(1.0)? {
        return Ok(ThresholdEstimate {
            g_star: 1.0,
            diagnostic: None,
        });
    }
    if !passes(THRESHOLD_TOLERANCE)? {
        return Ok(ThresholdEstimate {
            g_star: 0.0,
            diagnostic: Some(format!(
                "P_e exceeds {} already at G = {THRESHOLD_TOLERANCE}",
                params.loss_threshold
            )),
        });
    }
    let (mut lo, mut hi) = (THRESHOLD_TOLERANCE, 1.0);
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdEstimate {
        g_star: lo,
        diagnostic: None,
    })
}

/// `P(r) = C(K, r) p^r (1 - p)^(K - r)` for `r = 0..=K`, where `p` is the
/// per-packet decode probability.
pub fn decode_pmf(p_success: f64, packets: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p_success) {
        return Err(IrsaError::InvalidParameter(format!(
            "decode probability {p_success} outside [0, 1]"
        )));
    }
    // add one Bernoulli packet at a time; every entry stays a convex
    // combination, so the pmf never leaves [0, 1]
    let q = 1.0 - p_success;
    let mut pmf = Vec::with_capacity(packets + 1);
    pmf.push(1.0);
    for k in 0..packets {
        pmf.push(p_success * pmf[k]);
        for r in (1..=k).rev() {
            pmf[r] = q * pmf[r] + p_success * pmf[r - 1];
        }
        pmf[0] *= q;
    }
    Ok(pmf)
}

/// Mean per-source utility under the binomial decode model.
pub fn expected_utility_from_success(p_success: f64, packets: usize, w: f64) -> Result<f64> {
    Ok(decode_pmf(p_success, packets)?
        .iter()
        .enumerate()
        .map(|(r, pr)| w * (r as f64).ln_1p() * pr)
        .sum())
}

fn check_load(packets: usize, cfg: &ScenarioConfig) -> Result<f64> {
    if packets == 0 || cfg.sources * packets > cfg.slots {
        return Err(IrsaError::TrafficConstraint {
            sources: cfg.sources,
            packets,
            slots: cfg.slots,
        });
    }
    Ok(cfg.traffic(packets))
}

/// Objective of the constrained optimisation over `(Λ, K)`, using density
/// evolution for the per-packet decode probability.
pub fn expected_utility(
    lambda: &DegreeDistribution,
    packets: usize,
    cfg: &ScenarioConfig,
    params: &DensityEvolutionParams,
) -> Result<f64> {
    let load = check_load(packets, cfg)?;
    let de = density_evolution_pe(lambda, load, params)?;
    expected_utility_from_success(de.p_success(), packets, cfg.w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorMoments {
    pub mu: f64,
    pub sigma2: f64,
}

/// First-order expansion of `E[w ln(r + 1)]` and its variance around
/// `x = K p` for `r ~ Binomial(K, p)`.
pub fn prior_moments_from_success(p_success: f64, packets: usize, w: f64) -> PriorMoments {
    let k = packets as f64;
    let kp = k * p_success;
    PriorMoments {
        mu: w * kp.ln_1p(),
        sigma2: (w * w * kp * (1.0 - p_success) / ((kp + 1.0) * (kp + 1.0))).max(0.0),
    }
}

pub fn prior_moments(
    lambda: &DegreeDistribution,
    packets: usize,
    cfg: &ScenarioConfig,
    params: &DensityEvolutionParams,
) -> Result<PriorMoments> {
    let load = check_load(packets, cfg)?;
    let de = density_evolution_pe(lambda, load, params)?;
    Ok(prior_moments_from_success(de.p_success(), packets, cfg.w))
}

/// Everything the asymptotic analysis says about one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmAnalysis {
    pub load: f64,
    pub p_loss: f64,
    pub g_star: f64,
    pub expected_utility: f64,
    pub prior: PriorMoments,
}

pub fn analyze_arm(
    arm: &Arm,
    cfg: &ScenarioConfig,
    params: &DensityEvolutionParams,
) -> Result<ArmAnalysis> {
    let strategy = &arm.strategy;
    let load = check_load(strategy.packets, cfg)?;
    let de = density_evolution_pe(&strategy.lambda, load, params)?;
    Ok(ArmAnalysis {
        load,
        p_loss: de.p_loss,
        g_star: waterfall_threshold(&strategy.lambda, params)?.g_star,
        expected_utility: expected_utility_from_success(de.p_success(), strategy.packets, cfg.w)?,
        prior: prior_moments_from_success(de.p_success(), strategy.packets, cfg.w),
    })
}

/// The arm maximising [`expected_utility`]; ties go to the lowest arm id.
pub fn asymptotic_optimize<'a>(
    arms: &'a [Arm],
    cfg: &ScenarioConfig,
    params: &DensityEvolutionParams,
) -> Result<&'a Arm> {
    let mut best: Option<(&Arm, f64)> = None;
    for arm in arms {
        let value = expected_utility(&arm.strategy.lambda, arm.strategy.packets, cfg, params)?;
        best = match best {
            Some((b, v)) if v > value || (v == value && b.id < arm.id) => Some((b, v)),
            _ => Some((arm, value)),
        };
    }
    best.map(|(arm, _)| arm).ok_or(IrsaError::EmptyArmSet)
}
