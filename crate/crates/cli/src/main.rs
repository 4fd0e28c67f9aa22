use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hh2_cli::commands::{cmd_hh, cmd_hhl, cmd_spadesuit, cmd_verify, SpadeArgs, UsageError};
use hh2_cli::report::Format;

#[derive(Parser)]
#[command(name = "hh2", version, about = "Hochschild cohomology building blocks for GL2 over prime fields")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Named classes of HH(Ω, X) and the action of HH(Ω) on them.
    Hh {
        #[arg(long)]
        p: u32,
        #[arg(long, value_parser = ["omega", "theta", "theta-sigma", "omega-dual", "omega-ep-omega"])]
        coefficient: String,
    },
    /// Basis and products of ♠ on a window.
    Spadesuit {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
        a_min: i64,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        a_max: i64,
        #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
        b_min: i64,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        b_max: i64,
        #[arg(long)]
        check_associativity: bool,
        #[arg(long)]
        verify_first_principles: bool,
    },
    /// Weight-zero basis and products of hh_l.
    Hhl {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = i64::MIN / 4, allow_negative_numbers = true)]
        k_min: i64,
        #[arg(long, default_value_t = i64::MAX / 4, allow_negative_numbers = true)]
        k_max: i64,
        #[arg(long)]
        no_products: bool,
    },
    /// Runs every invariant at one prime.
    Verify {
        #[arg(long)]
        p: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Hh { p, coefficient } => cmd_hh(p, &coefficient),
        Command::Spadesuit { p, a_min, a_max, b_min, b_max, check_associativity, verify_first_principles } => {
            cmd_spadesuit(&SpadeArgs { p, a: (a_min, a_max), b: (b_min, b_max), check_associativity, verify_first_principles })
        }
        Command::Hhl { p, l, k_min, k_max, no_products } => cmd_hhl(p, l, (k_min, k_max), !no_products),
        Command::Verify { p } => cmd_verify(p),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let mut out = io::stdout().lock();
    if let Err(e) = report.write(cli.format, &mut out).and_then(|_| Ok(out.flush()?)) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if report.failed() {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
