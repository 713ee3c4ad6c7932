#![allow(dead_code)]

use irsa::harness::{ArmFamily, ExperimentSpec, GridNormalization};
use irsa::{
    generate_frame, DegreeDistribution, DensityEvolutionParams, FrameRealization, Placement,
    ScenarioConfig, TransmissionStrategy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reference decoder: rescan the whole frame until no slot holds exactly one
/// undecoded replica. Quadratic, but obviously correct.
pub fn brute_force_decode(frame: &FrameRealization) -> Vec<bool> {
    let n = frame.num_packets();
    let mut decoded = vec![false; n];
    loop {
        let mut found = None;
        'slots: for slot in 0..frame.slots() {
            let mut occupant = None;
            for p in (0..n).filter(|&p| !decoded[p]) {
                if frame.packet_slots(p).iter().any(|&s| s as usize == slot) {
                    if occupant.is_some() {
                        continue 'slots;
                    }
                    occupant = Some(p);
                }
            }
            if let Some(p) = occupant {
                found = Some(p);
                break;
            }
        }
        match found {
            Some(p) => decoded[p] = true,
            None => return decoded,
        }
    }
}

/// Random degree distribution over degrees `1..=max_degree` with random mass.
pub fn random_lambda<R: Rng>(rng: &mut R, max_degree: usize) -> DegreeDistribution {
    let weights: Vec<f64> = (0..max_degree).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    // fix the sum exactly by giving the remainder to the last term
    let mut terms: Vec<(usize, f64)> = Vec::new();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate().take(max_degree - 1) {
        let p = w / total;
        acc += p;
        terms.push((i + 1, p));
    }
    terms.push((max_degree, (1.0 - acc).max(0.0)));
    DegreeDistribution::new(terms).unwrap()
}

/// A generated frame with `L <= 5`, `M <= 10`, `K <= 2`, random placement.
pub fn random_small_frame<R: Rng>(rng: &mut R) -> FrameRealization {
    loop {
        let sources = rng.gen_range(1..=5);
        let slots = rng.gen_range(1..=10);
        let packets = rng.gen_range(1..=2);
        if sources * packets > slots {
            continue;
        }
        let mut cfg = ScenarioConfig::new(sources, slots);
        cfg.placement = if rng.gen_bool(0.5) {
            Placement::PerSource
        } else {
            Placement::PerPacket
        };
        let max_degree = rng.gen_range(1..=4);
        let lambda = random_lambda(rng, max_degree);
        let strategy = TransmissionStrategy::new(lambda, packets);
        return generate_frame(&strategy, &cfg, rng).unwrap();
    }
}

pub fn k_only_spec(sources: usize, slots: usize, lambda: &str, horizon: usize) -> ExperimentSpec {
    let mut scenario = ScenarioConfig::new(sources, slots);
    scenario.horizon = horizon;
    ExperimentSpec {
        scenario,
        arms: ArmFamily::KOnly {
            fixed_lambda: lambda.parse().unwrap(),
        },
        policies: Vec::new(),
        runs: 1,
        frames_per_decision: 1,
        mu_star_frames: 1_000,
        oracle_seed: 7,
        density_evolution: DensityEvolutionParams::default(),
        write_episodes: false,
    }
}

pub fn joint_spec(sources: usize, slots: usize, horizon: usize) -> ExperimentSpec {
    let mut spec = k_only_spec(sources, slots, "2:1", horizon);
    spec.arms = ArmFamily::Joint {
        degrees: vec![2, 3, 8],
        step: 0.25,
        normalization: GridNormalization::ExactSum,
    };
    spec
}

/// Degree distributions used by the density-evolution checks.
pub fn study_distributions() -> Vec<DegreeDistribution> {
    ["2:1", "3:1", "2:0.75,3:0.25", "2:0.5,3:0.25,8:0.25", "2:0.5,3:0.28,8:0.22"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

/// The 20 `(K, p)` pairs used for the prior check.
pub fn prior_pairs() -> Vec<(usize, f64)> {
    let mut pairs = Vec::new();
    for k in [1, 2, 5, 10, 15] {
        for p in [0.1, 0.5, 0.9, 0.99] {
            pairs.push((k, p));
        }
    }
    pairs
}

/// Sample mean and variance of `w ln(r + 1)` with `r` a sum of `K` Bernoulli draws.
pub fn monte_carlo_moments(k: usize, p: f64, w: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mean, mut m2) = (0.0_f64, 0.0_f64);
    for i in 1..=samples {
        let r = (0..k).filter(|_| rng.gen::<f64>() < p).count();
        let x = w * (r as f64).ln_1p();
        let d = x - mean;
        mean += d / i as f64;
        m2 += d * (x - mean);
    }
    (mean, m2 / (samples - 1) as f64)
}
