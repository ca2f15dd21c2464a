use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use povtrack::trace::{render_trace, sc_failures};
use povtrack::{
    evaluate, load_document, render_interpretations, track_document, validate_gold, Document, Registry,
    SignificancePolicy,
};

/// Track the psychological point of view of annotated third-person narrative.
///
/// Exit status: 0 on success, 1 when a document or registry cannot be read
/// or fails validation (or, for `eval`, lacks gold labels), 2 on bad usage.
#[derive(Parser)]
#[command(name = "povtrack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interpret every sentence.
    ///
    /// Prints one line per sentence: `<id> TAB SUBJECTIVE|OBJECTIVE TAB <names>`,
    /// names comma-joined. With --trace, each line is preceded by an
    /// explanation whose lines never contain a tab.
    Track {
        #[command(flatten)]
        common: Common,
        /// Explain each decision.
        #[arg(long)]
        trace: bool,
        /// Write to this file instead of standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Score the tracker against the document's gold labels.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Print the report as JSON instead of tables.
        #[arg(long)]
        json: bool,
    },
    /// Check a document, printing errors and warnings.
    Validate {
        document: PathBuf,
        #[arg(long, value_name = "FILE", env = "POVTRACK_REGISTRY")]
        registry: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    document: PathBuf,
    /// Category registry (JSON) merged over the built-in defaults.
    #[arg(long, value_name = "FILE", env = "POVTRACK_REGISTRY")]
    registry: Option<PathBuf>,
    /// When a private-state action counts as a private state.
    #[arg(long, default_value = "any-previous-sc", value_parser = parse_policy)]
    policy: SignificancePolicy,
}

fn parse_policy(s: &str) -> Result<SignificancePolicy, String> {
    s.parse()
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(document: &Path, registry: Option<&Path>) -> Result<Document, String> {
    let registry = match registry {
        Some(path) => Registry::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?,
        None => Registry::default(),
    };
    load_document(&read(document)?, &registry).map_err(|e| format!("{}: {e}", document.display()))
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Track { common, trace, out } => {
            let doc = load(&common.document, common.registry.as_deref())?;
            let steps = track_document(&doc, common.policy);
            for id in sc_failures(&steps) {
                eprintln!("warning: sentence `{id}`: subjective, but no subjective character could be identified");
            }
            let text = if trace {
                render_trace(&doc, &steps)
            } else {
                render_interpretations(&steps)
            };
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            }
        }
        Command::Eval { common, json } => {
            let doc = load(&common.document, common.registry.as_deref())?;
            let report = evaluate(&doc, common.policy).map_err(|e| format!("{}: {e}", common.document.display()))?;
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{report}");
            }
            Ok(())
        }
        Command::Validate { document, registry } => {
            let doc = load(&document, registry.as_deref())?;
            for w in validate_gold(&doc) {
                println!("warning: {w}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
