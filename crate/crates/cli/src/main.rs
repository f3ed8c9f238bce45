//! `mfk`: matrix factorization and K-theory calculator.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 usage or parse error.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "mfk", version, about = "Exact matrix factorization and K-theory computations")]
struct Cli {
    /// Print the JSON report
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Print human-readable text (default)
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the resulting factorization here instead of stdout
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Window {
    /// Cohomological window for Euler pairings
    #[arg(long, env = "MFK_EULER_WINDOW", default_value_t = mfk_core::mf::DEFAULT_WINDOW)]
    pub window: i64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a file holds a graded matrix factorization
    Verify { file: PathBuf },
    /// Tensor product over the union of the two rings
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Tensor with (u ⇄ v) or, with --pm-i, (u + iv ⇄ u - iv)
    Knorrer {
        file: PathBuf,
        /// Degree of u; |v| = d - l
        #[arg(long, default_value_t = 1)]
        l: i64,
        #[arg(long, default_value = "u")]
        u: String,
        #[arg(long, default_value = "v")]
        v: String,
        #[arg(long)]
        pm_i: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Shift F[k]
    Shift {
        file: PathBuf,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        times: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Twist F(l)
    Twist {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        by: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Dual factorization
    Dual {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Set a variable x with f = g + x^2 to zero
    Restrict {
        file: PathBuf,
        #[arg(long)]
        var: String,
        #[command(flatten)]
        out: Output,
    },
    /// Tensor with (u^(k-1) ⇄ u), |u| = m, k m = deg f
    Suspend {
        file: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value = "u")]
        u: String,
        #[command(flatten)]
        out: Output,
    },
    /// K0 class of a factorization of a sum of squares
    #[command(name = "k0-class")]
    K0Class {
        file: PathBuf,
        #[command(flatten)]
        window: Window,
    },
    /// Euler pairing and Hom cohomology
    Euler {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        window: Window,
    },
    /// Push-forward along the zero section of [C^n/μ_2]
    #[command(name = "pushforward-table")]
    PushforwardTable {
        #[arg(long)]
        n: usize,
    },
    /// K-groups of the complement, equivalently of RP^(n-1)
    #[command(name = "ku-table")]
    KuTable {
        #[arg(long)]
        n: usize,
    },
    /// Clifford module groups, restriction matrices and A_k for k = 0..=n
    #[command(name = "abs-table")]
    AbsTable {
        #[arg(long)]
        n: usize,
    },
    /// Koszul-lattice comparison for a weighted complete intersection
    #[command(name = "prop-we")]
    PropWe {
        #[arg(long, value_delimiter = ',')]
        weights: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        factors: Vec<i64>,
    },
    /// Relative equivariant K-groups of a Milnor fibre model
    Milnor {
        /// points:D | vw:A,B | quadric:N | suspend:A,B:<model>
        #[arg(long)]
        model: String,
    },
    /// Minimal free resolution and Betti table
    Resolve {
        /// Resolve the residue field over C[x1..xN]/(q_N)
        #[arg(long, conflicts_with = "mf")]
        quadric: Option<usize>,
        /// Resolve coker(s1) of this factorization over Q/(f)
        #[arg(long)]
        mf: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long)]
        degree_bound: Option<i64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli.command) {
        Ok(outcome) => {
            if let Some(text) = outcome.file_text {
                print!("{text}");
            } else if cli.json {
                print!("{}", outcome.report.to_json());
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(if outcome.report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
