//! `moral`: query scenario files from the command line.
//!
//! Exit codes: 0 when a query completes (whatever the verdict), 2 for usage
//! errors and malformed queries, 3 for invalid scenario files, 4 when an
//! internal limit such as the causation variable cap is hit.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "moral", version, about = "Causation, blame and intention over scenario files")]
struct Cli {
    /// Print one JSON document on standard output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SettingArgs {
    /// Index of the setting to use (zero-probability settings included).
    #[arg(long, default_value_t = 0)]
    pub setting: usize,
    /// Override exogenous values, e.g. `U=1, CAP=0`.
    #[arg(long)]
    pub context: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct IntentArgs {
    /// Reference set: `default`, `all` or `list:a1,a2`.
    #[arg(long = "ref")]
    pub reference: Option<String>,
    /// Largest superset examined.
    #[arg(long)]
    pub max_superset: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a scenario file and list its diagnostics.
    Validate { file: PathBuf },
    /// Evaluate a formula in one setting.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        at: SettingArgs,
        #[arg(long)]
        formula: String,
    },
    /// Decide whether a conjunction is an actual cause of an outcome.
    Cause {
        file: PathBuf,
        #[command(flatten)]
        at: SettingArgs,
        /// Candidate, e.g. `X=1, Y=0`.
        #[arg(long)]
        cand: String,
        #[arg(long)]
        outcome: String,
        /// Refuse models with more endogenous variables than this.
        #[arg(long, default_value_t = moral_core::cause::DEFAULT_VARIABLE_CAP)]
        max_endogenous: usize,
    },
    /// Degree of blameworthiness of an action for an outcome.
    Blame {
        file: PathBuf,
        #[arg(long)]
        action: String,
        #[arg(long)]
        outcome: String,
        /// Compare against this alternative only.
        #[arg(long)]
        versus: Option<String>,
        /// Cost weight, `p/q`; defaults to the scenario's.
        #[arg(long = "N")]
        n: Option<String>,
    },
    /// Whether an action was intended.
    IntendedAction {
        file: PathBuf,
        #[arg(long)]
        action: String,
        /// Check against the action actually taken in this setting.
        #[arg(long)]
        setting: Option<usize>,
        #[arg(long)]
        context: Option<String>,
    },
    /// Whether an action was meant to affect a set of variables.
    IntendsAffect {
        file: PathBuf,
        #[arg(long)]
        action: String,
        /// Comma-separated variable names.
        #[arg(long)]
        vars: String,
        #[command(flatten)]
        intent: IntentArgs,
    },
    /// Whether an action was meant to bring about `X=x, Y=y`.
    Intends {
        file: PathBuf,
        #[arg(long)]
        action: String,
        #[arg(long)]
        outcome: String,
        #[command(flatten)]
        intent: IntentArgs,
    },
    /// Degree of praiseworthiness of an action for `X=x, Y=y`.
    Praise {
        file: PathBuf,
        #[arg(long)]
        action: String,
        #[arg(long)]
        outcome: String,
        /// Cost weight, `p/q`; defaults to the scenario's.
        #[arg(long = "M")]
        m: Option<String>,
        #[command(flatten)]
        intent: IntentArgs,
    },
    /// Expected utilities, blame, intention and praise for one action.
    Report {
        file: PathBuf,
        #[arg(long)]
        action: String,
        #[command(flatten)]
        intent: IntentArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Eval { .. } => "eval",
            Command::Cause { .. } => "cause",
            Command::Blame { .. } => "blame",
            Command::IntendedAction { .. } => "intended-action",
            Command::IntendsAffect { .. } => "intends-affect",
            Command::Intends { .. } => "intends",
            Command::Praise { .. } => "praise",
            Command::Report { .. } => "report",
        }
    }
}

fn usage(subcommand: &str) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    match cmd.find_subcommand_mut(subcommand) {
        Some(sub) => sub.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = cli.command.name();
    match commands::run(&cli.command) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            if cli.json {
                let doc = serde_json::to_string_pretty(&out.json).expect("values serialize");
                println!("{doc}");
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            for d in &f.diagnostics {
                eprintln!("{d}");
            }
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            if f.code == 2 {
                eprintln!("{}", usage(name));
            }
            ExitCode::from(f.code)
        }
    }
}
