use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::experiment::ExperimentResult;
use crate::error::{IrsaError, Result};

pub const REGRET_HEADER: &str = "policy,t,mean_cum_regret,stderr";
pub const REWARD_HEADER: &str = "policy,t,mean_reward,stderr";
pub const ARMS_HEADER: &str =
    "id,K,lambda,G,p_loss,g_star,prior_mu,prior_sigma2,expected_utility,mc_mean,mc_stderr";
pub const EPISODES_HEADER: &str = "policy,run,t,arm,reward,cum_reward,cum_regret";

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| IrsaError::io(path, e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| IrsaError::io(path, e))
}

fn regret_csv(result: Option<&ExperimentResult>) -> String {
    let mut out = format!("{REGRET_HEADER}\n");
    for p in result.iter().flat_map(|r| &r.policies) {
        let label = p.policy.label();
        for (i, point) in p.regret.iter().enumerate() {
            out += &format!("{label},{},{},{}\n", i + 1, fmt_f64(point.mean), fmt_f64(point.stderr));
        }
    }
    out
}

fn reward_csv(result: Option<&ExperimentResult>) -> String {
    let mut out = format!("{REWARD_HEADER}\n");
    for p in result.iter().flat_map(|r| &r.policies) {
        let label = p.policy.label();
        for (i, point) in p.reward.iter().enumerate() {
            out += &format!("{label},{},{},{}\n", i + 1, fmt_f64(point.mean), fmt_f64(point.stderr));
        }
    }
    out
}

fn arms_csv(result: Option<&ExperimentResult>) -> String {
    let mut out = format!("{ARMS_HEADER}\n");
    let Some(result) = result else {
        return out;
    };
    for ((arm, analysis), mc) in result
        .arms
        .iter()
        .zip(&result.analyses)
        .zip(&result.mu_star.per_arm)
    {
        out += &format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            arm.id,
            arm.strategy.packets,
            arm.strategy.lambda,
            fmt_f64(analysis.load),
            fmt_f64(analysis.p_loss),
            fmt_f64(analysis.g_star),
            fmt_f64(analysis.prior.mu),
            fmt_f64(analysis.prior.sigma2),
            fmt_f64(analysis.expected_utility),
            fmt_f64(mc.mean),
            fmt_f64(mc.stderr),
        );
    }
    out
}

fn episodes_csv(result: &ExperimentResult) -> String {
    let mut out = format!("{EPISODES_HEADER}\n");
    for p in &result.policies {
        let label = p.policy.label();
        for (run, log) in p.episodes.iter().enumerate() {
            for s in &log.steps {
                out += &format!(
                    "{label},{run},{},{},{},{},{}\n",
                    s.t,
                    s.arm,
                    fmt_f64(s.reward),
                    fmt_f64(s.cum_reward),
                    fmt_f64(s.cum_regret)
                );
            }
        }
    }
    out
}

fn manifest(result: Option<&ExperimentResult>) -> serde_json::Value {
    let Some(r) = result else {
        return json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
        });
    };
    let spec = &r.spec;
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "spec": spec,
        "seeds": {
            "base_seed": spec.scenario.rng_seed,
            "environment": "run r uses seed base_seed + r, ChaCha8 stream t at step t",
            "policy": "run r uses seed base_seed + r, ChaCha8 stream u64::MAX",
            "common_random_numbers": true,
            "oracle_seed": spec.oracle_seed,
        },
        "mu_star": r.mu_star.mu_star,
        "mu_star_arm": r.mu_star.best_arm,
        "mu_star_frames": spec.mu_star_frames,
        "asymptotic_arm": r.baseline_arm,
        "num_arms": r.arms.len(),
        "policies": r.policies.iter().map(|p| p.policy.label()).collect::<Vec<_>>(),
        "failure": r.failure,
    })
}

/// Write `regret.csv`, `reward.csv`, `arms.csv`, `manifest.json` and, when
/// requested, `episodes.csv` into `out_dir`. `None` writes headers only.
pub fn emit_results(result: Option<&ExperimentResult>, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| IrsaError::io(out_dir, e))?;
    let mut files = vec![
        (out_dir.join("regret.csv"), regret_csv(result)),
        (out_dir.join("reward.csv"), reward_csv(result)),
        (out_dir.join("arms.csv"), arms_csv(result)),
    ];
    let manifest = serde_json::to_string_pretty(&manifest(result))
        .map_err(|e| IrsaError::Config(e.to_string()))?;
    files.push((out_dir.join("manifest.json"), manifest + "\n"));
    if let Some(r) = result.filter(|r| r.spec.write_episodes) {
        files.push((out_dir.join("episodes.csv"), episodes_csv(r)));
    }
    for (path, contents) in &files {
        write_file(path, contents)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}
