//! `quatgkm`: command-line front end.
//!
//! Exit codes: 0 success (valid / classified), 1 a check failed or the
//! graph was not classified, 2 unreadable input or bad usage.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quatgkm", version, about = "Quaternionic GKM graphs: validation, faces, classification, cohomology")]
pub struct Cli {
    /// Emit a single JSON document instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Hpn,
    Gr2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the graph axioms and report the GKM level.
    Validate {
        /// Graph file, or `-` for stdin.
        file: PathBuf,
        /// Fail unless the graph is GKM_K.
        #[arg(long = "gkm-level", value_name = "K")]
        gkm_level: Option<usize>,
    },
    /// Print the compatible connection with its congruence coefficients.
    Connection { file: PathBuf },
    /// Enumerate the 2-faces and their shapes.
    Faces { file: PathBuf },
    /// Verify the quaternionic structure.
    Qcheck { file: PathBuf },
    /// Sign the labels of a complex 2-face.
    SignFace {
        file: PathBuf,
        /// Face index as listed by `faces`.
        #[arg(long, value_name = "INDEX")]
        face: usize,
    },
    /// Decide whether the graph is the graph of HP^n or Gr_2(C^n).
    Classify {
        file: PathBuf,
        /// Also run the face-lemma diagnostics.
        #[arg(long)]
        verbose: bool,
    },
    /// Write the graph of a model space.
    Generate {
        model: ModelArg,
        #[arg(long)]
        n: usize,
        /// Use the standard parameters.
        #[arg(long, conflicts_with_all = ["lambda", "alpha"])]
        standard: bool,
        /// Comma-separated coordinates of lambda.
        #[arg(long, requires = "alpha", allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Semicolon-separated alpha vectors (alpha_1..alpha_n for hpn, alpha_3..alpha_n for gr2).
        #[arg(long, requires = "lambda", allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Output file (stdout if omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Graded dimensions of graph cohomology and Betti numbers.
    Cohomology {
        file: PathBuf,
        /// Highest polynomial degree (default: the valence).
        #[arg(long = "max-degree", value_name = "D")]
        max_degree: Option<u32>,
        /// Also derive Betti numbers.
        #[arg(long)]
        betti: bool,
        /// Exact rational elimination instead of the dual-prime fast path.
        #[arg(long)]
        exact: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli.command);
    match outcome {
        Ok(report) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n"
            } else {
                report.text
            };
            let mut out = std::io::stdout().lock();
            // A closed pipe is not an error of ours.
            let _ = out.write_all(body.as_bytes()).and_then(|_| out.flush());
            ExitCode::from(report.code)
        }
        Err(e) => {
            if cli.json {
                let doc = serde_json::json!({ "error": e.message, "exitCode": e.code });
                println!("{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
            }
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
