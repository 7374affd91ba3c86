use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fuzzycolor::{ClusterConfig, InitMode};
use fuzzycolor_cli::{cmd_cluster, cmd_compare, cmd_seed, ClusterArgs, CompareArgs, SeedArgs};

#[derive(Parser)]
#[command(
    name = "fuzzycolor",
    version,
    about = "Reference-seeded fuzzy c-means for color sets"
)]
struct Cli {
    /// Worker threads for the data-parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the reference scan, dominant colors and initial centroids.
    Seed {
        input: PathBuf,
        #[arg(long, short = 'c')]
        clusters: usize,
        #[arg(long, default_value_t = ClusterConfig::DEFAULT_LAMBDA)]
        lambda: f64,
        /// Reference palette file with `name,L,a,b` lines.
        #[arg(long)]
        refs: Option<PathBuf>,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Run fuzzy c-means and write a JSON report.
    Cluster {
        input: PathBuf,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "reference", value_parser = parse_init)]
        init: InitMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        /// PNG with every pixel painted by its cluster centroid.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// PNG strip of the final centroid colors.
        #[arg(long)]
        palette: Option<PathBuf>,
    },
    /// Compare initialization schemes; prints CSV.
    Compare {
        input: PathBuf,
        #[command(flatten)]
        params: Params,
        /// Comma-separated init modes.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_init)]
        inits: Vec<InitMode>,
        /// Comma-separated seeds for random initialization.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
}

#[derive(Args)]
struct Params {
    #[arg(long, short = 'c')]
    clusters: usize,
    #[arg(long, default_value_t = ClusterConfig::DEFAULT_FUZZIFIER)]
    fuzzifier: f64,
    #[arg(long, default_value_t = ClusterConfig::DEFAULT_LAMBDA)]
    lambda: f64,
    #[arg(long, default_value_t = ClusterConfig::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = ClusterConfig::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Cluster at most N evenly spaced pixels of an image input.
    #[arg(long)]
    sample: Option<usize>,
}

impl Params {
    fn config(&self, init: InitMode, seed: u64) -> ClusterConfig {
        ClusterConfig {
            clusters: self.clusters,
            fuzzifier: self.fuzzifier,
            lambda: self.lambda,
            epsilon: self.epsilon,
            max_iter: self.max_iter,
            init,
            seed,
        }
    }
}

fn parse_init(s: &str) -> Result<InitMode, String> {
    s.parse().map_err(|e: fuzzycolor::Error| e.to_string())
}

fn run(command: Command) -> anyhow::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Seed {
            input,
            clusters,
            lambda,
            refs,
            sample,
        } => cmd_seed(
            &SeedArgs {
                input,
                clusters,
                lambda,
                refs,
                sample,
            },
            &mut out,
        ),
        Command::Cluster {
            input,
            params,
            init,
            seed,
            report,
            labels,
            palette,
        } => {
            let config = params.config(init, seed);
            config.validate()?;
            cmd_cluster(
                &ClusterArgs {
                    input,
                    config,
                    report,
                    labels,
                    palette,
                    sample: params.sample,
                },
                &mut out,
            )
            .map(drop)
        }
        Command::Compare {
            input,
            params,
            inits,
            seeds,
        } => {
            let config = params.config(InitMode::Reference, 0);
            config.validate()?;
            cmd_compare(
                &CompareArgs {
                    input,
                    config,
                    inits,
                    seeds,
                    sample: params.sample,
                },
                &mut out,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(threads) => fuzzycolor::parallel::with_threads(threads, move || run(cli.command))
            .map_err(anyhow::Error::from)
            .and_then(|r| r),
        None => run(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
