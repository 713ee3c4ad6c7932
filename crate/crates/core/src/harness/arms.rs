use super::spec::{ArmFamily, ExperimentSpec, GridNormalization};
use crate::degree::DegreeDistribution;
use crate::error::{IrsaError, Result};
use crate::scenario::{Arm, ScenarioConfig, TransmissionStrategy};

/// Integer compositions `c` of length `parts` with `0 <= c_i <= cells`,
/// in lexicographic order.
fn grid_points(parts: usize, cells: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0; parts];
    loop {
        out.push(current.clone());
        let mut i = parts;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < cells {
                current[i] += 1;
                current[i + 1..].iter_mut().for_each(|c| *c = 0);
                break;
            }
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Candidate degree distributions of the joint grid, in grid order.
pub fn lambda_grid(
    degrees: &[usize],
    step: f64,
    normalization: GridNormalization,
) -> Result<Vec<DegreeDistribution>> {
    let cells = (1.0 / step).round() as usize;
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for point in grid_points(degrees.len(), cells) {
        let total: usize = point.iter().sum();
        if total == 0 {
            continue;
        }
        let denom = match normalization {
            GridNormalization::ExactSum if total != cells => continue,
            GridNormalization::ExactSum => cells,
            GridNormalization::Normalize => {
                let g = point.iter().fold(0, |acc, &c| gcd(acc, c));
                let reduced: Vec<usize> = point.iter().map(|c| c / g).collect();
                if seen.contains(&reduced) {
                    continue;
                }
                seen.push(reduced);
                total
            }
        };
        let terms = degrees
            .iter()
            .zip(&point)
            .map(|(&d, &c)| (d, c as f64 / denom as f64));
        out.push(DegreeDistribution::new(terms)?);
    }
    Ok(out)
}

fn k_range(cfg: &ScenarioConfig) -> Result<std::ops::RangeInclusive<usize>> {
    let k_max = cfg.max_packets();
    if k_max == 0 {
        return Err(IrsaError::EmptyArmSet);
    }
    Ok(1..=k_max)
}

/// Enumerate the arm set. Arm ids are positions in the returned list.
pub fn build_arm_set(spec: &ExperimentSpec) -> Result<Vec<Arm>> {
    let cfg = &spec.scenario;
    let lambdas = match &spec.arms {
        ArmFamily::KOnly { fixed_lambda } => vec![fixed_lambda.clone()],
        ArmFamily::Joint {
            degrees,
            step,
            normalization,
        } => lambda_grid(degrees, *step, *normalization)?,
    };
    let mut arms = Vec::new();
    for lambda in lambdas {
        for packets in k_range(cfg)? {
            let strategy = TransmissionStrategy::new(lambda.clone(), packets);
            strategy.check(cfg)?;
            arms.push(Arm {
                id: arms.len(),
                strategy,
            });
        }
    }
    if arms.is_empty() {
        return Err(IrsaError::EmptyArmSet);
    }
    Ok(arms)
}
