use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pm_cli::commands::{cmd_graph, cmd_run, cmd_sweep, cmd_verify, verify_ok, CmdError};
use pm_cli::config::{Flags, RunConfig};
use pm_cli::records::{to_line, write_lines};

#[derive(Parser)]
#[command(name = "pm", version, about = "Simulate and verify passively mobile protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded random executions, one record per seed.
    Run(Common),
    /// Exhaustive stable-computation check; `--n` checks every input of those sizes.
    Verify(Common),
    /// Agent configuration graphs with r values; `--dot` writes Graphviz.
    Graph(Common),
    /// Space used across population sizes, with a fitted bound.
    Sweep(Common),
}

fn config(c: Common) -> Result<RunConfig, CmdError> {
    let flags = match &c.config {
        Some(path) => c.flags.or(Flags::load(path)?),
        None => c.flags,
    };
    Ok(RunConfig::from_flags(flags)?)
}

fn sink(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: Cli) -> Result<bool, CmdError> {
    match cli.command {
        Command::Run(c) => {
            let cfg = config(c)?;
            let out = cmd_run(&cfg)?;
            let mut w = sink(&cfg)?;
            write_lines(&mut w, &out.records)?;
            w.flush()?;
            if let (Some(path), Some(trace)) = (&cfg.trace, &out.trace) {
                let mut t = BufWriter::new(File::create(path)?);
                write_lines(&mut t, trace)?;
                t.flush()?;
            }
            Ok(out.ok())
        }
        Command::Verify(c) => {
            let cfg = config(c)?;
            let recs = cmd_verify(&cfg)?;
            let mut w = sink(&cfg)?;
            write_lines(&mut w, &recs)?;
            w.flush()?;
            Ok(verify_ok(&recs))
        }
        Command::Graph(c) => {
            let cfg = config(c)?;
            let out = cmd_graph(&cfg)?;
            let mut w = sink(&cfg)?;
            write_lines(&mut w, &out.records)?;
            write_lines(&mut w, &out.nodes)?;
            w.flush()?;
            if let Some(path) = &cfg.dot {
                std::fs::write(path, &out.dot)?;
            }
            Ok(out.ok())
        }
        Command::Sweep(c) => {
            let cfg = config(c)?;
            let out = cmd_sweep(&cfg)?;
            let mut w = sink(&cfg)?;
            write_lines(&mut w, &out.runs)?;
            write_lines(&mut w, &out.rows)?;
            writeln!(w, "{}", to_line(&out.fit))?;
            w.flush()?;
            Ok(out.ok())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
