//! Irregular repetition slotted ALOHA: frame simulation with successive
//! interference cancellation, density-evolution analysis, and bandit
//! learning of the transmission strategy `(Λ(x), K)`.

pub mod analysis;
pub mod bandit;
pub mod degree;
pub mod error;
pub mod frame;
pub mod harness;
pub mod scenario;
pub mod sic;
pub mod utility;

pub use analysis::{
    asymptotic_optimize, decode_pmf, density_evolution_pe, expected_utility, prior_moments,
    waterfall_threshold, AsymptoticResult, DensityEvolutionParams, PriorMoments,
};
pub use degree::DegreeDistribution;
pub use error::{IrsaError, Result};
pub use frame::{generate_frame, FrameRealization};
pub use scenario::{Arm, Placement, ScenarioConfig, TransmissionStrategy};
pub use sic::{sic_decode, DecodeResult};
pub use utility::utility_of_counts;
