//! Experiment configuration, arm-set generation, multi-run sweeps and
//! result files.

mod arms;
mod experiment;
mod output;
mod spec;

pub use arms::{build_arm_set, lambda_grid};
pub use experiment::{
    aggregate, prepare, run_experiment, run_prepared, run_single, CurvePoint, ExperimentResult,
    PolicyResult, Prepared, POLICY_STREAM,
};
pub use output::{
    emit_results, fmt_f64, ARMS_HEADER, EPISODES_HEADER, REGRET_HEADER, REWARD_HEADER,
};
pub use spec::{ArmFamily, ExperimentSpec, GridNormalization};
