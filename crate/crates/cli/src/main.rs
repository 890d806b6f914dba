use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use geraghty_cli::{exit, run, CliError, RunConfig};

/// Verify contraction hypotheses, run Picard iteration, or solve
/// `-x'' = f(t, x)` with zero boundary values.
#[derive(Parser, Debug)]
#[command(name = "geraghty", version)]
struct Args {
    /// Run configuration file.
    #[arg(long, value_name = "PATH", required_unless_present = "list_builtins")]
    config: Option<PathBuf>,

    /// Output directory (overrides `out` in the config; default `out`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Random seed (overrides `seed` in the config).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Print the builtin catalog and exit.
    #[arg(long)]
    list_builtins: bool,
}

fn execute(args: Args) -> Result<u8, CliError> {
    if args.list_builtins {
        print!("{}", geraghty_core::builtins::list_builtins());
        return Ok(exit::OK);
    }
    let path = args.config.expect("clap enforces --config");
    let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
        context: format!("cannot read {}", path.display()),
        source,
    })?;
    let mut cfg: RunConfig = text.parse()?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let out = args.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let outcome = run(&cfg, &out)?;
    println!("{}", outcome.summary);
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match execute(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
