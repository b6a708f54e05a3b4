use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qlie::run::threads_from_env;
use qlie::{run, Command, Format, RunConfig};

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Validate,
    Tables,
    Sigma,
    Brackets,
    Jacobi,
    Leibniz,
    Relations,
    All,
    /// Write σ and the structure constants as JSON.
    Emit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Json,
}

/// Checks quantum Lie algebra identities of an inhomogeneous quantum group.
#[derive(Parser)]
#[command(name = "qlie", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Builtin (classical:N, graded:N:+-.., scalar1:LAMBDA:R:Z:T) or JSON file.
    #[arg(long, default_value = "classical:2")]
    instance: String,
    #[arg(long, default_value_t = 2)]
    max_len: usize,
    #[arg(long, default_value_t = 2)]
    pairing_order: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Fmt,
    /// Tolerance for float instances.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    strict_extended: bool,
    /// Output file for `emit`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Tables => Command::Tables,
        Cmd::Sigma => Command::Sigma,
        Cmd::Brackets => Command::Brackets,
        Cmd::Jacobi => Command::Jacobi,
        Cmd::Leibniz => Command::Leibniz,
        Cmd::Relations => Command::Relations,
        Cmd::All => Command::All,
        Cmd::Emit => Command::Emit,
    };
    let cfg = RunConfig {
        command,
        instance: cli.instance,
        max_len: cli.max_len,
        pairing_order: cli.pairing_order,
        tolerance: cli.tol,
        format: match cli.format {
            Fmt::Text => Format::Text,
            Fmt::Json => Format::Json,
        },
        strict_extended: cli.strict_extended,
        out: cli.out,
        threads: threads_from_env(),
    };
    if cfg.strict_extended {
        eprintln!("warning: {}", qlie::run::STRICT_EXTENDED_WARNING);
    }
    let out = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    // emit without --out prints the structure file itself
    match (&out.emitted, &cfg.out) {
        (Some(file), None) => println!("{}", file.to_json()),
        _ => match cfg.format {
            Format::Text => print!("{}", out.report.to_text()),
            Format::Json => println!("{}", out.report.to_json()),
        },
    }
    ExitCode::from(out.report.exit_code())
}
