//! Replica degree distributions `Λ(x) = Σ Λ_l x^l`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{IrsaError, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Probability that a packet is sent in `l` replicas, for `1 <= l <= l_max`.
///
/// Terms are kept sorted by degree and zero-probability terms are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, f64)>", into = "Vec<(usize, f64)>")]
pub struct DegreeDistribution {
    terms: Vec<(usize, f64)>,
    l_max: usize,
}

impl DegreeDistribution {
    /// Build a distribution whose `l_max` is the largest degree with mass.
    pub fn new(terms: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        let l_max = terms
            .iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(l, _)| *l)
            .max()
            .unwrap_or(0);
        Self::with_l_max(terms, l_max)
    }

    pub fn with_l_max(terms: impl IntoIterator<Item = (usize, f64)>, l_max: usize) -> Result<Self> {
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (degree, prob) in terms {
            if !prob.is_finite() || !(0.0..=1.0).contains(&prob) {
                return Err(IrsaError::InvalidDistribution(format!(
                    "probability {prob} for degree {degree} outside [0, 1]"
                )));
            }
            if degree == 0 {
                if prob > 0.0 {
                    return Err(IrsaError::InvalidDistribution(
                        "degree 0 is not allowed".into(),
                    ));
                }
                continue;
            }
            if prob == 0.0 {
                continue;
            }
            if degree > l_max {
                return Err(IrsaError::InvalidDistribution(format!(
                    "degree {degree} exceeds l_max {l_max}"
                )));
            }
            match merged.iter_mut().find(|(l, _)| *l == degree) {
                Some(term) => term.1 += prob,
                None => merged.push((degree, prob)),
            }
        }
        if merged.is_empty() {
            return Err(IrsaError::InvalidDistribution(
                "distribution has no mass".into(),
            ));
        }
        merged.sort_by_key(|(l, _)| *l);
        let total: f64 = merged.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(IrsaError::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            terms: merged,
            l_max,
        })
    }

    /// Point mass on a single degree.
    pub fn regular(degree: usize) -> Result<Self> {
        Self::new([(degree, 1.0)])
    }

    /// Non-zero `(l, Λ_l)` terms in increasing degree.
    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn prob(&self, degree: usize) -> f64 {
        self.terms
            .iter()
            .find(|(l, _)| *l == degree)
            .map_or(0.0, |(_, p)| *p)
    }

    /// Average number of replicas per packet, `Λ'(1)`.
    pub fn average_degree(&self) -> f64 {
        self.terms.iter().map(|&(l, p)| l as f64 * p).sum()
    }

    /// Node-perspective polynomial `Λ(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(l, p)| p * x.powi(l as i32)).sum()
    }

    /// Edge-perspective polynomial `λ(x) = Λ'(x) / Λ'(1)`.
    pub fn edge_eval(&self, x: f64) -> f64 {
        let avg = self.average_degree();
        self.terms
            .iter()
            .map(|&(l, p)| l as f64 * p / avg * x.powi(l as i32 - 1))
            .sum()
    }

    /// Draw a replica count. Consumes exactly one `f64` from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for &(degree, prob) in &self.terms {
            acc += prob;
            if u < acc {
                return degree;
            }
        }
        // rounding leaves a sliver above the last cumulative sum
        self.terms[self.terms.len() - 1].0
    }
}

impl From<DegreeDistribution> for Vec<(usize, f64)> {
    fn from(dist: DegreeDistribution) -> Self {
        dist.terms
    }
}

impl TryFrom<Vec<(usize, f64)>> for DegreeDistribution {
    type Error = IrsaError;

    fn try_from(terms: Vec<(usize, f64)>) -> Result<Self> {
        Self::new(terms)
    }
}

/// Compact `degree:prob` list, e.g. `2:0.75;3:0.25`.
impl fmt::Display for DegreeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{l}:{p}")?;
        }
        Ok(())
    }
}

impl FromStr for DegreeDistribution {
    type Err = IrsaError;

    /// Accepts `2:0.75;3:0.25` or `2:0.75,3:0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for part in s.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
            let (l, p) = part.split_once(':').ok_or_else(|| {
                IrsaError::InvalidDistribution(format!("expected degree:prob, got {part:?}"))
            })?;
            let l = l.trim().parse::<usize>().map_err(|e| {
                IrsaError::InvalidDistribution(format!("bad degree {l:?}: {e}"))
            })?;
            let p = p.trim().parse::<f64>().map_err(|e| {
                IrsaError::InvalidDistribution(format!("bad probability {p:?}: {e}"))
            })?;
            terms.push((l, p));
        }
        Self::new(terms)
    }
}
