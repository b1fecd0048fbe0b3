use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use udisc::cli::{self, Format, RandomSpec};

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum FormatArg {
    #[default]
    Text,
    Machine,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Machine => Format::Machine,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "udisc",
    version,
    about = "Unambiguous discrimination of two mixed quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file: bounds, method, fidelity, and the POVM
    Solve {
        /// Problem file (or a report file with an embedded problem)
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Validation tolerance for the input density matrices
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Generate a seeded random problem file
    Random {
        output: PathBuf,
        #[arg(long)]
        dim: usize,
        /// Rank of the first state
        #[arg(long)]
        rank0: usize,
        /// Rank of the second state
        #[arg(long)]
        rank1: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Prior of the first state
        #[arg(long, default_value_t = 0.5)]
        p0: f64,
    },
    /// Solve a problem file and cross-check the bounds with the ascent oracle
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Decide whether two preparations are the same or different
    Compare {
        /// First state as a JSON vector, e.g. "[1, 0]" or "[[0, 1], 0]"
        #[arg(long)]
        psi1: String,
        /// Second state as a JSON vector
        #[arg(long)]
        psi2: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Tell a target state apart from a set of alternatives
    Filter {
        /// Target state as a JSON vector
        #[arg(long)]
        target: String,
        /// Alternative state as a JSON vector (repeatable)
        #[arg(long = "other")]
        others: Vec<String>,
        /// Occurrence probabilities, target first, e.g. "[0.5, 0.25, 0.25]"
        #[arg(long)]
        etas: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

fn main() {
    let args = Cli::parse();
    let code = match args.command {
        Command::Solve { input, format, tol } => cli::cmd_solve(&input, format.into(), tol),
        Command::Random { output, dim, rank0, rank1, seed, p0 } => {
            cli::cmd_random(&RandomSpec { dim, rank0, rank1, seed, p0 }, &output)
        }
        Command::Verify { input, seed, restarts, format, tol } => {
            cli::cmd_verify(&input, seed, restarts, format.into(), tol)
        }
        Command::Compare { psi1, psi2, format } => cli::cmd_compare(&psi1, &psi2, format.into()),
        Command::Filter { target, others, etas, format } => {
            cli::cmd_filter(&target, &others, &etas, format.into())
        }
    };
    std::process::exit(code);
}
