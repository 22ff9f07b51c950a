//! Command-line front end: subcommand dispatch, seed/trial overrides,
//! and file output. Exit codes: 0 success, 1 usage error, 2 model or
//! domain error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{load_config, ModelConfig, WorkloadConfig};
use crate::core_model::{gd_step_time, per_instance_breakdown};
use crate::emit::{emit_curve_csv, emit_curve_svg};
use crate::error::{Error, Result};
use crate::graph_partition::estimate_partition;
use crate::speedup::{
    graph_inference_curve, optimal_nodes, strong_scaling_curve, weak_scaling_curve, ScalingMode,
    SpeedupCurve,
};
use crate::validation::{load_empirical_csv, mape, SeriesKind};

const SEED_ENV: &str = "SCALEMODEL_SEED";

#[derive(Parser)]
#[command(
    name = "scalemodel",
    about = "Analytical scalability estimator for distributed ML workloads",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Model configuration file (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override the swept worker range, as MIN..MAX or a single N
    #[arg(long)]
    n: Option<String>,
    /// Monte-Carlo seed (falls back to the config, then $SCALEMODEL_SEED)
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo trial count
    #[arg(long)]
    trials: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Print parameter and multiply-add counts for the declared architecture
    Arch {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the speedup curve and emit it as CSV (and optionally SVG)
    Sweep {
        #[command(flatten)]
        common: Common,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG chart output path
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the optimal worker count N = argmax s(n)
    Optimal {
        #[command(flatten)]
        common: Common,
    },
    /// Compare the model against an empirical CSV and print the MAPE
    Validate {
        #[command(flatten)]
        common: Common,
        /// Empirical measurements, CSV with header n,value
        #[arg(long)]
        empirical: PathBuf,
        /// Whether the empirical values are times or speedups
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Print the Monte-Carlo partition estimate for a graph workload
    Partition {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum KindArg {
    Time,
    Speedup,
}

fn parse_range(text: &str) -> Result<(u32, u32)> {
    let parse_bound = |s: &str| -> Result<u32> {
        s.trim()
            .parse()
            .map_err(|e| Error::Config(format!("bad worker count `{s}`: {e}")))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (parse_bound(lo)?, parse_bound(hi)?),
        None => {
            let n = parse_bound(text)?;
            (n, n)
        }
    };
    if lo < 1 || lo > hi {
        return Err(Error::Config(format!(
            "range must satisfy 1 <= min <= max, got {lo}..{hi}"
        )));
    }
    Ok((lo, hi))
}

fn env_seed() -> Option<u64> {
    std::env::var(SEED_ENV).ok().and_then(|v| v.parse().ok())
}

/// Command-line overrides applied on top of a parsed config.
#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub range: Option<(u32, u32)>,
    pub seed: Option<u64>,
    pub trials: Option<u32>,
}

impl Overrides {
    fn from_common(common: &Common) -> Result<Self> {
        Ok(Self {
            range: common.n.as_deref().map(parse_range).transpose()?,
            seed: common.seed,
            trials: common.trials,
        })
    }

    fn range(&self, cfg: &ModelConfig) -> (u32, u32) {
        self.range.unwrap_or((cfg.n_min, cfg.n_max))
    }
}

fn resolve_seed(cfg_seed: Option<u64>, over: &Overrides) -> u64 {
    over.seed.or(cfg_seed).or_else(env_seed).unwrap_or(0)
}

/// Evaluates the configured model over the swept range.
pub fn build_curve(cfg: &ModelConfig, over: &Overrides) -> Result<SpeedupCurve> {
    let (n_min, n_max) = over.range(cfg);
    match &cfg.workload {
        WorkloadConfig::GradientDescent { model, scaling, .. } => match scaling {
            ScalingMode::Strong => strong_scaling_curve(
                |n| gd_step_time(model, &cfg.hardware, &cfg.comm, n),
                n_min..=n_max,
            ),
            ScalingMode::Weak => {
                let reference_n = cfg
                    .reference_n
                    .ok_or_else(|| Error::Config("weak scaling needs reference_n".into()))?;
                weak_scaling_curve(
                    |n| per_instance_breakdown(model, &cfg.hardware, &cfg.comm, n),
                    n_min..=n_max,
                    reference_n,
                )
            }
        },
        WorkloadConfig::GraphInference(gi) => {
            let degrees = gi.source.resolve()?;
            let workload = gi.workload(&degrees)?;
            let seed = resolve_seed(gi.seed, over);
            let trials = over.trials.unwrap_or(gi.trials);
            graph_inference_curve(&workload, &degrees, &cfg.hardware, trials, seed, n_min..=n_max)
        }
    }
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Arch { config } => {
            let cfg = load_config(&config)?;
            let WorkloadConfig::GradientDescent {
                architecture: Some((layers, input)),
                ..
            } = cfg.workload
            else {
                return Err(Error::Config(
                    "arch needs a gradient_descent workload with an architecture".into(),
                ));
            };
            let totals = crate::net_arch::network_totals(&layers, input)?;
            println!("total_weights: {}", totals.total_weights);
            println!("forward_madds: {}", totals.forward_madds);
            println!("gradient_madds: {}", totals.gradient_madds);
        }
        Command::Sweep { common, out, svg } => {
            let cfg = load_config(&common.config)?;
            let over = Overrides::from_common(&common)?;
            let curve = build_curve(&cfg, &over)?;
            write_or_print(out.as_ref(), &emit_curve_csv(&curve))?;
            if let Some(svg_path) = svg {
                std::fs::write(&svg_path, emit_curve_svg(&curve)?)?;
            }
        }
        Command::Optimal { common } => {
            let cfg = load_config(&common.config)?;
            let over = Overrides::from_common(&common)?;
            let curve = build_curve(&cfg, &over)?;
            println!("{}", optimal_nodes(&curve)?);
        }
        Command::Validate {
            common,
            empirical,
            kind,
        } => {
            let cfg = load_config(&common.config)?;
            let over = Overrides::from_common(&common)?;
            let curve = build_curve(&cfg, &over)?;
            let kind = match kind {
                KindArg::Time => SeriesKind::Time,
                KindArg::Speedup => SeriesKind::Speedup,
            };
            let series = load_empirical_csv(&std::fs::read_to_string(&empirical)?, kind)?;
            let predicted: Vec<(u32, f64)> = curve
                .points
                .iter()
                .map(|p| {
                    (
                        p.n,
                        match kind {
                            SeriesKind::Time => p.t_total,
                            SeriesKind::Speedup => p.speedup,
                        },
                    )
                })
                .collect();
            let error = mape(&predicted, &series)?;
            let kind_name = match kind {
                SeriesKind::Time => "time",
                SeriesKind::Speedup => "speedup",
            };
            println!("MAPE: {error:.2}% (computed on {kind_name} values)");
        }
        Command::Partition { common } => {
            let cfg = load_config(&common.config)?;
            let over = Overrides::from_common(&common)?;
            let WorkloadConfig::GraphInference(gi) = &cfg.workload else {
                return Err(Error::Config(
                    "partition needs a graph_inference workload".into(),
                ));
            };
            let degrees = gi.source.resolve()?;
            let (_, n_max) = over.range(&cfg);
            let seed = resolve_seed(gi.seed, &over);
            let trials = over.trials.unwrap_or(gi.trials);
            let est = estimate_partition(&degrees, n_max, trials, seed)?;
            println!("n: {}", est.n);
            println!("trials: {}", est.trials);
            println!("seed: {}", est.seed);
            println!("e_dup: {}", est.e_dup);
            println!("mean_max_edges: {}", est.mean_max_edges);
            println!("min_max_edges: {}", est.min_max_edges());
            println!("max_max_edges: {}", est.max_max_edges());
        }
    }
    Ok(())
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}
