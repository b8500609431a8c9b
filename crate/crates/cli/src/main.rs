use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvbs_cli::pipeline::{self, describe_chernoff, describe_oracle, describe_sample, describe_verification};
use cvbs_cli::{CliError, ExitStatus, ExperimentConfig, Settings};

#[derive(Debug, Parser)]
#[command(name = "cvbs", version, about = "Characterize, verify and sample Gaussian Boson Sampling instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw dual-homodyne samples and reconstruct the covariance matrix.
    Characterize(RunArgs),
    /// Certify the reconstructed covariance against the target state.
    Verify(RunArgs),
    /// Enumerate the photon-count distribution and draw samples.
    Sample(RunArgs),
    /// Compare hafnian probabilities with the truncated-Fock oracle.
    OracleCheck(RunArgs),
    /// Run every stage in order.
    All(RunArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out_dir: PathBuf,
    #[command(flatten)]
    settings: Settings,
}

impl RunArgs {
    fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let base = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        ExperimentConfig::resolve(base.overlay(self.settings), self.seed, self.out_dir)
    }
}

fn run(command: Command) -> Result<ExitStatus, CliError> {
    let verdict = |ok: bool| if ok { ExitStatus::Success } else { ExitStatus::VerificationFailed };
    match command {
        Command::Characterize(args) => {
            let r = pipeline::run_characterize(&args.resolve()?)?;
            println!("{}", describe_chernoff(&r.report));
            Ok(ExitStatus::Success)
        }
        Command::Verify(args) => {
            let r = pipeline::run_verify(&args.resolve()?)?;
            println!("{}", describe_verification(&r.report));
            Ok(verdict(r.report.pass))
        }
        Command::Sample(args) => {
            let r = pipeline::run_sample(&args.resolve()?)?;
            println!("{}", describe_sample(&r.report));
            Ok(ExitStatus::Success)
        }
        Command::OracleCheck(args) => {
            let r = pipeline::run_oracle_check(&args.resolve()?)?;
            println!("{}", describe_oracle(&r.report));
            Ok(verdict(r.report.pass))
        }
        Command::All(args) => {
            let summary = pipeline::run_all(&args.resolve()?)?;
            for line in summary.lines {
                println!("{line}");
            }
            Ok(summary.status)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = run(cli.command).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_status()
    });
    ExitCode::from(status.code())
}
