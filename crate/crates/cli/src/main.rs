use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hermsig::signature::DEFAULT_POOL_BUDGET;
use hermsig_cli::commands::{run_command, Command, Flags};
use hermsig_cli::document::parse_document;
use hermsig_cli::error::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Hsig,
    Msig,
    Invsig,
    Nil,
    Ktf,
    Findref,
    Traceform,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Hsig => Command::Hsig,
            Cmd::Msig => Command::Msig,
            Cmd::Invsig => Command::Invsig,
            Cmd::Nil => Command::Nil,
            Cmd::Ktf => Command::Ktf,
            Cmd::Findref => Command::Findref,
            Cmd::Traceform => Command::Traceform,
        }
    }
}

/// Signatures of hermitian forms over algebras with involution.
#[derive(Debug, Parser)]
#[command(name = "hermsig", version)]
struct Args {
    /// Command to run.
    #[arg(value_enum)]
    cmd: Cmd,
    /// Input document.
    doc: PathBuf,
    /// Form to evaluate.
    #[arg(long)]
    form: Option<String>,
    /// Reference block to use instead of searching for one.
    #[arg(long = "ref")]
    reference: Option<String>,
    /// Work over the algebra extended by the document's extension block.
    #[arg(long)]
    ext: bool,
    /// Emit one JSON object per line.
    #[arg(long)]
    json: bool,
    /// Candidate budget for the reference search.
    #[arg(long, default_value_t = DEFAULT_POOL_BUDGET)]
    pool_budget: usize,
    /// Fail instead of searching when no reference block is named.
    #[arg(long)]
    no_findref: bool,
}

fn run(args: &Args) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.doc).map_err(|e| CliError::Io {
        path: args.doc.display().to_string(),
        message: e.to_string(),
    })?;
    let doc = parse_document(&text)?;
    let flags = Flags {
        form: args.form.clone(),
        reference: args.reference.clone(),
        ext: args.ext,
        json: args.json,
        pool_budget: args.pool_budget,
        no_findref: args.no_findref,
    };
    let report = run_command(args.cmd.into(), &doc, &flags)?;
    for line in &report.lines {
        println!("{line}");
    }
    Ok(report.code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
