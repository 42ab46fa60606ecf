use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wreath_cli::{exit_code, finite_cmd, verify_counterexample_cmd, FiniteArgs, FiniteCommand, Outcome};
use wreath_core::finite::group::DEFAULT_AUT_BOUND;

#[derive(Parser)]
#[command(name = "wreath", version, about = "Hopficity certificates for wreath products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that Z/m wr BS(1, m+1) is not Hopfian.
    VerifyCounterexample {
        #[arg(long)]
        m: u64,
        /// `Q` or `Zm` (integers modulo m).
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here; `-` prints it instead of the summary.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Pipelines for a finite group B acting on a finite set X.
    Finite {
        #[command(subcommand)]
        command: FiniteSub,
    },
}

#[derive(Subcommand)]
enum FiniteSub {
    /// Everything below, plus the Hopficity verdict.
    Analyze(FiniteFlags),
    /// |Aut(G)| and |Out(G)| by formula and by brute force.
    Aut(FiniteFlags),
    /// Derivations and H^1(B, AX).
    H1(FiniteFlags),
    /// Endomorphism algebras of KX and matrix-ring probes.
    Endring(FiniteFlags),
}

#[derive(Args)]
struct FiniteFlags {
    /// A group file, or the name of a bundled action.
    #[arg(long)]
    group: String,
    /// Cyclic invariants of A, `0` for Z: `0,4,3` is Z + Z/4 + Z/3.
    #[arg(long)]
    coeff: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest |G| for brute-force automorphism search.
    #[arg(long, default_value_t = DEFAULT_AUT_BOUND)]
    max_aut_order: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn say(text: &str) {
    // ignores a closed pipe
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn emit(outcome: Outcome, json: Option<PathBuf>) -> ExitCode {
    let text = outcome.report.to_json();
    match json {
        Some(p) if p.as_os_str() == "-" => say(&text),
        Some(p) => {
            if let Err(e) = std::fs::write(&p, text + "\n") {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(wreath_cli::EXIT_INPUT as u8);
            }
            say(&outcome.summary);
        }
        None => say(&outcome.summary),
    }
    ExitCode::from(outcome.exit as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, json) = match cli.command {
        Command::VerifyCounterexample { m, ring, seed, json } => (verify_counterexample_cmd(m, &ring, seed), json),
        Command::Finite { command } => {
            let (cmd, flags) = match command {
                FiniteSub::Analyze(f) => (FiniteCommand::Analyze, f),
                FiniteSub::Aut(f) => (FiniteCommand::Aut, f),
                FiniteSub::H1(f) => (FiniteCommand::H1, f),
                FiniteSub::Endring(f) => (FiniteCommand::Endring, f),
            };
            let args = FiniteArgs {
                group: &flags.group,
                coeff: &flags.coeff,
                seed: flags.seed,
                max_aut_order: flags.max_aut_order,
            };
            (finite_cmd(cmd, &args), flags.json)
        }
    };
    match result {
        Ok(outcome) => emit(outcome, json),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
