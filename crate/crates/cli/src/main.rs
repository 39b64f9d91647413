use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toric_dt_cli::{cmd_series, cmd_verify, Check, Format, RunConfig};

#[derive(Parser)]
#[command(name = "toric-dt", version, about = "Donaldson-Thomas series of toric Calabi-Yau threefolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the (reduced) DT series as rows (n, beta, coefficient).
    Series(Common),
    /// Run verification checks and print a pass/fail report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of degree0, sign-oracle, rationality, gwdt,
        /// hodge, gwmm. Default: all.
        #[arg(long, value_delimiter = ',')]
        check: Vec<Check>,
    },
}

#[derive(Args)]
struct Common {
    /// Built-in geometry (c3, conifold, local_p2, local_p1p1) or a geometry file.
    #[arg(long, default_value = "c3")]
    geometry: String,
    /// Largest Euler characteristic kept.
    #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
    n_max: i64,
    /// Degree bound per curve class, comma-separated; one value applies to all.
    #[arg(long, value_delimiter = ',')]
    beta_max: Option<Vec<u32>>,
    /// Divide by the degree-0 series.
    #[arg(long)]
    reduced: bool,
    /// Numerator and denominator degree bounds for rational reconstruction.
    #[arg(long, value_parser = parse_pade)]
    pade: Option<(usize, usize)>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Seed for random evaluation points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_pade(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| format!("expected p,q but got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(p)?, parse(q)?))
}

impl Common {
    fn into_config(self, checks: Vec<Check>) -> RunConfig {
        RunConfig {
            geometry: self.geometry,
            n_max: self.n_max,
            beta_max: self.beta_max,
            reduced: self.reduced,
            pade: self.pade,
            checks,
            format: self.format,
            seed: self.seed,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Series(common) => cmd_series(&common.into_config(Vec::new())).map(|out| (out, true)),
        Command::Verify { common, check } => cmd_verify(&common.into_config(check)),
    };
    match result {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
