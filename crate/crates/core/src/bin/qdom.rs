use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qdom::commands::{cmd_grid, cmd_optimize, cmd_rank, cmd_threshold, ExperimentConfig, GridRequest, RankRequest};
use qdom::grid::{default_theta, GridSpec, RadialPolicy};
use qdom::io::load_samples;
use qdom::smoo::SelectionMode;
use qdom::threshold::{Formula, ThresholdInputs};
use qdom::{Error, Orientation, Result};

#[derive(Parser)]
#[command(name = "qdom", version, about = "Center-outward quantile dominance for random vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank candidates given one sample file each.
    Rank(RankArgs),
    /// Run a noisy ZDT experiment from a JSON config.
    Optimize(OptimizeArgs),
    /// Sample size above which the dominance test has the requested error level.
    Threshold(ThresholdArgs),
    /// Dump an augmented grid and, optionally, the map of a sample onto it.
    Grid(GridArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    TheoremTheta,
    RootD,
}

#[derive(Args)]
struct GridFlags {
    /// Radial count; fixes the grid together with --ns.
    #[arg(long, requires = "ns")]
    nr: Option<usize>,
    /// Directions per sphere.
    #[arg(long, requires = "nr")]
    ns: Option<usize>,
    /// Radial exponent for --policy theorem-theta.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, value_enum)]
    policy: Option<Policy>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GridFlags {
    fn policy(&self, default: Policy) -> Result<RadialPolicy> {
        match (self.nr, self.ns) {
            (Some(nr), Some(ns)) => {
                if self.policy.is_some() || self.theta.is_some() {
                    return Err(Error::Invalid("--nr/--ns cannot be combined with --policy or --theta".into()));
                }
                Ok(RadialPolicy::Fixed { nr, ns })
            }
            _ => match self.policy.unwrap_or(default) {
                Policy::TheoremTheta => Ok(RadialPolicy::TheoremTheta(self.theta)),
                Policy::RootD if self.theta.is_some() => {
                    Err(Error::Invalid("--theta only applies to --policy theorem-theta".into()))
                }
                Policy::RootD => Ok(RadialPolicy::RootD),
            },
        }
    }
}

#[derive(Args)]
struct RankArgs {
    /// One sample file per candidate (CSV or JSON).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[command(flatten)]
    grid: GridFlags,
    /// Points drawn per replication id in each repetition.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Report equal within-front scores as shared ranks.
    #[arg(long)]
    ties: bool,
    /// max or min; overrides the orientation stored in the files.
    #[arg(long)]
    orientation: Option<Orientation>,
}

#[derive(Args)]
struct OptimizeArgs {
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    mode: Option<SelectionMode>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// HV reference point, `r1,r2`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    ref_point: Option<Vec<f64>>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    d: usize,
    /// Type-I error level.
    #[arg(long)]
    delta: f64,
    /// Dominance margin between the true quantile maps.
    #[arg(long)]
    margin: f64,
    #[arg(long, default_value_t = 1.0)]
    lipschitz: f64,
    #[arg(long, default_value_t = 1.0)]
    interp_lipschitz: f64,
    #[arg(long, default_value_t = 1.0)]
    moment_constant: f64,
    #[arg(long, default_value_t = 1.0)]
    covering_constant: f64,
    /// Defaults to the middle of the admissible interval.
    #[arg(long)]
    theta: Option<f64>,
    /// Evaluate the closed form as commonly printed instead of the exact solution.
    #[arg(long)]
    as_printed: bool,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    grid: GridFlags,
    /// Total grid size; taken from --samples when given.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Sample file to map onto the grid.
    #[arg(long)]
    samples: Option<PathBuf>,
    #[arg(long)]
    orientation: Option<Orientation>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rank(a) => {
            let req = RankRequest {
                files: a.files,
                k: a.k,
                reps: a.reps,
                policy: a.grid.policy(Policy::RootD)?,
                orientation: a.orientation,
                ties: a.ties,
                seed: a.grid.seed,
            };
            print_json(&cmd_rank(&req)?)
        }
        Command::Optimize(a) => {
            let mut config = ExperimentConfig::load(&a.config)?;
            if let Some(mode) = a.mode {
                config.optimizer.mode = mode;
            }
            if let Some(sigma) = a.sigma {
                config.sigma = sigma;
            }
            if let Some(seed) = a.seed {
                config.optimizer.seed = seed;
            }
            if let Some(r) = a.ref_point {
                config.optimizer.hv.reference = [r[0], r[1]];
            }
            print_json(&cmd_optimize(&config, &a.out)?)
        }
        Command::Threshold(a) => {
            let inputs = ThresholdInputs {
                d: a.d,
                delta: a.delta,
                margin: a.margin,
                lipschitz: a.lipschitz,
                interp_lipschitz: a.interp_lipschitz,
                moment_constant: a.moment_constant,
                covering_constant: a.covering_constant,
                theta: a.theta.unwrap_or_else(|| default_theta(a.d)),
            };
            let formula = if a.as_printed { Formula::Published } else { Formula::Exact };
            print_json(&cmd_threshold(&inputs, formula)?)
        }
        Command::Grid(a) => {
            let policy = a.grid.policy(Policy::TheoremTheta)?;
            let (n, d) = match &a.samples {
                Some(path) => {
                    let set = load_samples(path, a.orientation)?;
                    (set.len(), set.dim())
                }
                None => match (a.n, policy) {
                    (Some(n), _) => (n, a.d),
                    (None, RadialPolicy::Fixed { nr, ns }) => (nr * ns, a.d),
                    (None, _) => return Err(Error::Invalid("grid needs --n, --nr/--ns or --samples".into())),
                },
            };
            std::fs::create_dir_all(&a.out)?;
            let req = GridRequest {
                spec: GridSpec::from_policy(n, d, policy, a.grid.seed)?,
                grid_csv: a.out.join("grid.csv"),
                samples: a.samples.map(|s| (s, a.out.join("map.csv"))),
                orientation: a.orientation,
            };
            print_json(&cmd_grid(&req)?)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
