use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qreverse::demon::RecordModel;
use qreverse_cli::{run, Command, InputDocument, InputError, LogBase, ToleranceOverrides, EXIT_INPUT_ERROR};

/// Decide, construct and verify reversals of quantum operations.
#[derive(Parser, Debug)]
#[command(name = "qreverse", version)]
struct Cli {
    /// Input document, or "-" for stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Equality tolerance for all verdicts.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Eigenvalues below this are treated as zero.
    #[arg(long, global = true)]
    rank_cutoff: Option<f64>,
    /// Logarithm base for entropies.
    #[arg(long, global = true, value_enum)]
    log_base: Option<LogBase>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RecordArg {
    Ideal,
    Shannon,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Run both reversibility tests and the related diagnostics.
    Check {
        #[arg(long)]
        operation: String,
        #[arg(long)]
        code: String,
    },
    /// Construct the reversal and verify it.
    Reverse {
        #[arg(long)]
        operation: String,
        #[arg(long)]
        code: String,
        /// Also write the reversal as an input document.
        #[arg(long)]
        emit_reversal: Option<PathBuf>,
    },
    /// Entanglement fidelity, entropy exchange and entropy inequalities.
    Entropy {
        #[arg(long)]
        operation: String,
        #[arg(long)]
        state: String,
    },
    /// Entropy ledger of one error-correction cycle.
    Demon {
        /// Deterministic noise.
        #[arg(long)]
        operation: String,
        /// Code the initial state lives on.
        #[arg(long)]
        code: String,
        /// Initial state; must be supported on the code.
        #[arg(long)]
        state: String,
        /// "canonical", or the name of a scheme in the input document.
        #[arg(long, default_value = "canonical")]
        scheme: String,
        /// Record lengths: ideal -log p, or whole-bit Shannon code lengths.
        #[arg(long, value_enum, default_value = "ideal")]
        record_model: RecordArg,
    },
}

fn read_input(path: &str) -> Result<String, InputError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| InputError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| InputError::Io(format!("{path}: {e}")))
    }
}

fn execute(cli: Cli) -> Result<i32, InputError> {
    let path =
        cli.input.ok_or_else(|| InputError::Usage("--input is required (use \"-\" for stdin)".into()))?;
    let doc = InputDocument::parse(&read_input(&path)?)?;
    let overrides =
        ToleranceOverrides { eq_tol: cli.tolerance, rank_cutoff: cli.rank_cutoff, log_base: cli.log_base };
    let mut emit = None;
    let cmd = match cli.command {
        Sub::Check { operation, code } => Command::Check { operation, code },
        Sub::Reverse { operation, code, emit_reversal } => {
            emit = emit_reversal;
            Command::Reverse { operation, code }
        }
        Sub::Entropy { operation, state } => Command::Entropy { operation, state },
        Sub::Demon { operation, code, state, scheme, record_model } => Command::Demon {
            operation,
            code,
            state,
            scheme,
            record_model: match record_model {
                RecordArg::Ideal => RecordModel::Ideal,
                RecordArg::Shannon => RecordModel::ShannonCode,
            },
        },
    };
    let outcome = run(&doc, &cmd, &overrides)?;
    if let (Some(path), Some(reversal)) = (emit, &outcome.reversal_document) {
        let text = serde_json::to_string_pretty(reversal)?;
        std::fs::write(&path, text + "\n").map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
    }
    println!("{}", serde_json::to_string_pretty(&outcome.report)?);
    if let Some(reason) = &outcome.report.failure {
        eprintln!("qreverse: {reason}");
    }
    Ok(outcome.report.exit_status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT_ERROR as u8 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qreverse: {e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
