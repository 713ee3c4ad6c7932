use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;

use irsa::analysis::analyze_arm;
use irsa::bandit::SimRng;
use irsa::harness::{build_arm_set, emit_results, fmt_f64, run_experiment, ArmFamily, ExperimentSpec};
use irsa::sic::sic_decode_traced;
use irsa::utility::utility_of_counts;
use irsa::{generate_frame, DegreeDistribution, DensityEvolutionParams, Placement, Result, ScenarioConfig, TransmissionStrategy};

/// Environment variable overriding the output directory of `learn`/`sweep`.
const OUT_DIR_ENV: &str = "IRSA_OUT_DIR";

#[derive(Parser)]
#[command(name = "irsa", version, about = "IRSA simulation, analysis and transmission-strategy learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and decode one frame, printing the placement and SIC trace.
    Simulate {
        #[arg(long, default_value_t = 3)]
        sources: usize,
        #[arg(long, default_value_t = 5)]
        slots: usize,
        #[arg(long, short = 'k', default_value_t = 1)]
        packets: usize,
        /// Degree distribution, e.g. `2:0.75,3:0.25`.
        #[arg(long, default_value = "2:1")]
        lambda: DegreeDistribution,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "per-source")]
        placement: PlacementArg,
        #[arg(long, default_value_t = 1.0)]
        w: f64,
    },
    /// Print the asymptotic analysis of every arm as CSV.
    Analyze {
        /// Experiment config; its scenario and arm family define the arms.
        #[arg(long, conflicts_with_all = ["sources", "slots", "lambda"])]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        sources: usize,
        #[arg(long, default_value_t = 300)]
        slots: usize,
        /// K-only family over this distribution.
        #[arg(long, default_value = "2:0.75,3:0.25")]
        lambda: DegreeDistribution,
    },
    /// Run one experiment from a config file and write the result files.
    Learn {
        config: PathBuf,
        /// Output directory (default: $IRSA_OUT_DIR or `out`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several experiments, each into `<out>/<config stem>`.
    Sweep {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum PlacementArg {
    PerSource,
    PerPacket,
}

impl From<PlacementArg> for Placement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::PerSource => Placement::PerSource,
            PlacementArg::PerPacket => Placement::PerPacket,
        }
    }
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    sources: usize,
    slots: usize,
    packets: usize,
    lambda: DegreeDistribution,
    seed: u64,
    placement: Placement,
    w: f64,
) -> Result<String> {
    let mut out = String::new();
    let mut cfg = ScenarioConfig::new(sources, slots);
    cfg.placement = placement;
    cfg.w = w;
    cfg.l_max = cfg.l_max.max(lambda.l_max());
    cfg.validate()?;
    let strategy = TransmissionStrategy::new(lambda, packets);
    let mut rng = SimRng::seed_from_u64(seed);
    let frame = generate_frame(&strategy, &cfg, &mut rng)?;
    let (result, trace) = sic_decode_traced(&frame);

    _ = writeln!(out, "# L={sources} M={slots} K={packets} lambda={} seed={seed}", strategy.lambda);
    _ = writeln!(out, "# slots are 1-based");
    for source in 0..frame.sources() {
        for k in 0..frame.packets_per_source() {
            let slots: Vec<String> = frame
                .replicas(source, k)
                .iter()
                .map(|s| (s + 1).to_string())
                .collect();
            _ = writeln!(out, "packet u{}.{} -> {{{}}}", source + 1, k + 1, slots.join(","));
        }
    }
    if frame.truncated() {
        _ = writeln!(out, "# replica demand exceeded M; later packets truncated");
    }
    for step in &trace {
        _ = writeln!(
            out,
            "round {}: slot {} singleton -> decoded u{}.{}",
            step.round,
            step.slot + 1,
            step.source + 1,
            step.packet % frame.packets_per_source() + 1
        );
    }
    let counts: Vec<String> = result.per_source.iter().map(|r| r.to_string()).collect();
    _ = writeln!(
        out,
        "decoded {}/{} in {} rounds; r = [{}]; reward = {}",
        result.num_decoded(),
        frame.num_packets(),
        result.iterations,
        counts.join(","),
        fmt_f64(utility_of_counts(&result.per_source, cfg.w))
    );
    Ok(out)
}

fn analyze(spec: &ExperimentSpec) -> Result<String> {
    let mut out = String::new();
    let arms = build_arm_set(spec)?;
    _ = writeln!(out, "id,K,lambda,G,P_e,G_star,mu,sigma2");
    for arm in &arms {
        let a = analyze_arm(arm, &spec.scenario, &spec.density_evolution)?;
        _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            arm.id,
            arm.strategy.packets,
            arm.strategy.lambda,
            fmt_f64(a.load),
            fmt_f64(a.p_loss),
            fmt_f64(a.g_star),
            fmt_f64(a.prior.mu),
            fmt_f64(a.prior.sigma2)
        );
    }
    Ok(out)
}

fn k_only_spec(sources: usize, slots: usize, lambda: DegreeDistribution) -> ExperimentSpec {
    let mut scenario = ScenarioConfig::new(sources, slots);
    scenario.l_max = scenario.l_max.max(lambda.l_max());
    ExperimentSpec {
        scenario,
        arms: ArmFamily::KOnly { fixed_lambda: lambda },
        policies: Vec::new(),
        runs: 1,
        frames_per_decision: 1,
        mu_star_frames: 1,
        oracle_seed: 0,
        density_evolution: DensityEvolutionParams::default(),
        write_episodes: false,
    }
}

fn learn(config: &Path, out: &Path) -> Result<()> {
    let spec = ExperimentSpec::from_file(config)?;
    let result = run_experiment(&spec)?;
    let files = emit_results(Some(&result), out)?;
    for f in &files {
        eprintln!("wrote {}", f.display());
    }
    if let Some(failure) = &result.failure {
        return Err(irsa::IrsaError::Config(format!("experiment incomplete: {failure}")));
    }
    Ok(())
}

/// Write to stdout, treating a closed pipe as success.
fn print(text: String) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(irsa::IrsaError::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            sources,
            slots,
            packets,
            lambda,
            seed,
            placement,
            w,
        } => print(simulate(sources, slots, packets, lambda, seed, placement.into(), w)?),
        Command::Analyze {
            config,
            sources,
            slots,
            lambda,
        } => {
            let spec = match config {
                Some(path) => ExperimentSpec::from_file(path)?,
                None => k_only_spec(sources, slots, lambda),
            };
            print(analyze(&spec)?)
        }
        Command::Learn { config, out } => learn(&config, &out_dir(out)),
        Command::Sweep { configs, out } => {
            let root = out_dir(out);
            for config in &configs {
                let stem = config
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "experiment".into());
                learn(config, &root.join(stem))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
