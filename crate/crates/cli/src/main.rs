use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nlsampling_cli::{run, CliError, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "nlsampling", about = "Seeded nonlinear sampling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML config; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    noise_level: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    Table1,
    Table2,
    Noise,
    Table3,
    Table4,
    Blind,
}

impl Command {
    fn experiment(self) -> Experiment {
        match self {
            Command::Table1 => Experiment::CompandingTable1,
            Command::Table2 => Experiment::CompandingTable2,
            Command::Noise => Experiment::CompandingNoise,
            Command::Table3 => Experiment::FriTable3,
            Command::Table4 => Experiment::FriTable4,
            Command::Blind => Experiment::BlindDemo,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let experiment = cli.command.experiment();
    let mut config = match &cli.config {
        Some(p) => match ExperimentConfig::load(p) {
            Ok(c) if c.experiment == experiment => c,
            Ok(c) => {
                eprintln!("config is for {}, not {}", c.experiment.name(), experiment.name());
                return ExitCode::from(2);
            }
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentConfig::preset(experiment),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(a) = cli.alpha {
        config.alpha = a;
    }
    if let Some(n) = cli.noise_level {
        config.noise_level = n;
    }
    if let Some(m) = cli.max_iter {
        config.max_iter = m;
    }
    if let Some(o) = &cli.out {
        config.out_dir = o.display().to_string();
    }
    let artifact = match run(&config) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                CliError::Config(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            };
        }
    };
    let dir = PathBuf::from(&config.out_dir);
    match artifact.write(&dir, experiment.name()) {
        Ok(files) => {
            for (k, v) in &artifact.summary {
                println!("{k} = {v:.6e}");
            }
            for n in &artifact.notes {
                println!("note: {n}");
            }
            for f in files {
                println!("wrote {}", f.display());
            }
            if artifact.completed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("io: {e}");
            ExitCode::FAILURE
        }
    }
}
