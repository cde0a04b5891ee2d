use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pcb_core::cli::{self, CombineRule, Format, Overrides, TransformMethod};
use pcb_core::{Error, ErrorKind};

#[derive(Parser)]
#[command(
    name = "pcb",
    version,
    about = "Decisions under partially consonant belief"
)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Override the attitude constant c = t(<1,1>), in (0, 1).
    #[arg(long, global = true)]
    attitude_c: Option<f64>,

    /// Override the Hurwicz pessimism weight, in [0, 1].
    #[arg(long, global = true)]
    alpha: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a problem file and report whether its belief is partially consonant.
    Validate { file: PathBuf },
    /// Mixed utility of each act and the ranking.
    Evaluate { file: PathBuf },
    /// Every act under every decision rule.
    Compare { file: PathBuf },
    /// Combine the belief functions of two files.
    Combine {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = RuleArg::Dempster)]
        rule: RuleArg,
    },
    /// Probability transform of a belief function.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Pignistic)]
        method: MethodArg,
    },
    /// Block probabilities and conditional possibilities.
    Decompose { file: PathBuf },
    /// Condition on an event, given as outcome labels.
    Condition {
        file: PathBuf,
        #[arg(required = true)]
        event: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Dempster,
    Walley,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Pignistic,
    Plausibility,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(args: Args) -> Result<(String, i32), Error> {
    let format = match args.format {
        FormatArg::Table => Format::Table,
        FormatArg::Structured => Format::Structured,
    };
    let o = Overrides {
        attitude_c: args.attitude_c,
        alpha: args.alpha,
    };
    let text = match args.command {
        Command::Validate { file } => {
            let r = cli::cmd_validate(&read(&file)?, format);
            return Ok((r.text, r.code));
        }
        Command::Evaluate { file } => cli::cmd_evaluate(&read(&file)?, o, format)?,
        Command::Compare { file } => cli::cmd_compare(&read(&file)?, o, format)?,
        Command::Combine {
            first,
            second,
            rule,
        } => {
            let rule = match rule {
                RuleArg::Dempster => CombineRule::Dempster,
                RuleArg::Walley => CombineRule::Walley,
            };
            cli::cmd_combine(&read(&first)?, &read(&second)?, rule, format)?
        }
        Command::Transform { file, method } => {
            let method = match method {
                MethodArg::Pignistic => TransformMethod::Pignistic,
                MethodArg::Plausibility => TransformMethod::Plausibility,
            };
            cli::cmd_transform(&read(&file)?, method, format)?
        }
        Command::Decompose { file } => cli::cmd_decompose(&read(&file)?, format)?,
        Command::Condition { file, event } => cli::cmd_condition(&read(&file)?, &event, format)?,
    };
    Ok((text, 0))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e.kind() {
                ErrorKind::Io => 1,
                k => k.exit_code(),
            };
            ExitCode::from(code as u8)
        }
    }
}
