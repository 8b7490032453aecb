//! Command line interface: parse a config file plus overrides, dispatch the
//! run/sweep/diagnostics subcommands and emit CSV.
//!
//! Exit codes: 0 on success, 1 for validation problems (bad config, bad
//! override, bad usage), 2 for integration or output failures.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::adiabaticity_report;
use crate::config::{apply_override, config_from_map, parse_config_str, SimulationConfig};
use crate::output::{write_diagnostics_csv, write_sweep_csv, write_trajectory_csv};
use crate::propagator::simulate;
use crate::sweeps::{sweep_area, sweep_delay, sweep_momentum, SweepSpec};
use crate::{Error, Result};

/// A parsed invocation: one subcommand with its config, output path and
/// overrides.
#[derive(Parser, Debug)]
#[command(
    name = "stirap-recoil",
    about = "Three-level lambda-system population transfer with photon recoil and Doppler shifts",
    version
)]
pub struct CommandSpec {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Propagate one configuration and write the sampled trajectory.
    Run(CommonArgs),
    /// Scan the pulse delay over the default grid (tau/T in [-2, 2], 81
    /// points).
    SweepDelay(CommonArgs),
    /// Scan the pulse area over the default grid (omega0*T in [0, 200], 51
    /// points).
    SweepArea(CommonArgs),
    /// Scan the momentum over the default grid (q in [0.1, 10], 100 points).
    SweepMomentum(CommonArgs),
    /// Evaluate the adiabaticity and decoupling conditions.
    Diagnostics(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Run(a)
            | Command::SweepDelay(a)
            | Command::SweepArea(a)
            | Command::SweepMomentum(a)
            | Command::Diagnostics(a) => a,
        }
    }
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Flat key/value config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override a config key, e.g. `--set q=10`. Repeatable; applied after
    /// the file is parsed.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

/// Parse an argument vector. Unknown subcommands or missing arguments yield
/// a usage error (clap renders the message; the exit is nonzero).
pub fn parse_args<I, S>(argv: I) -> std::result::Result<CommandSpec, clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    CommandSpec::try_parse_from(argv)
}

fn load_config(args: &CommonArgs) -> Result<SimulationConfig<f64>> {
    let text = fs::read_to_string(&args.config).map_err(|e| {
        Error::Config(format!("cannot read {}: {e}", args.config.display()))
    })?;
    let mut map = parse_config_str(&text)?;
    for setting in &args.set {
        apply_override(&mut map, setting)?;
    }
    config_from_map(&map)
}

fn with_output<F>(out: &Option<PathBuf>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let file = fs::File::create(path)?;
            let mut writer = BufWriter::new(file);
            write(&mut writer)?;
            writer.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn dispatch(spec: &CommandSpec) -> Result<()> {
    let args = spec.command.args();
    let cfg = load_config(args)?;
    match &spec.command {
        Command::Run(_) => {
            let (_, traj) = simulate(&cfg)?;
            with_output(&args.out, |w| write_trajectory_csv(w, &cfg, &traj))
        }
        Command::SweepDelay(_) => {
            let result = sweep_delay(&SweepSpec::default_delay(cfg))?;
            with_output(&args.out, |w| write_sweep_csv(w, &result))
        }
        Command::SweepArea(_) => {
            let result = sweep_area(&SweepSpec::default_area(cfg))?;
            with_output(&args.out, |w| write_sweep_csv(w, &result))
        }
        Command::SweepMomentum(_) => {
            let result = sweep_momentum(&SweepSpec::default_momentum(cfg))?;
            with_output(&args.out, |w| write_sweep_csv(w, &result))
        }
        Command::Diagnostics(_) => {
            let report = adiabaticity_report(&cfg)?;
            with_output(&args.out, |w| write_diagnostics_csv(w, &cfg, &report))
        }
    }
}

/// Execute a parsed invocation, reporting failures on stderr.
pub fn execute(spec: &CommandSpec) -> i32 {
    match dispatch(spec) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            err.exit_code()
        }
    }
}

/// Entry point used by the binary: parse, execute, exit code.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(spec) => execute(&spec),
        Err(err) => {
            // clap prints its own usage text; --help and --version are
            // successful exits
            let code = err.exit_code();
            let _ = err.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_run_with_config_and_output() {
        let spec = parse_args(["stirap-recoil", "run", "--config", "c.txt", "--out", "t.csv"])
            .unwrap();
        match spec.command {
            Command::Run(args) => {
                assert_eq!(args.config, PathBuf::from("c.txt"));
                assert_eq!(args.out, Some(PathBuf::from("t.csv")));
                assert!(args.set.is_empty());
            }
            other => panic!("unexpected command {other:?}"),
        }
    }

    #[test]
    fn parses_repeatable_overrides() {
        let spec = parse_args([
            "stirap-recoil",
            "sweep-delay",
            "--config",
            "c.txt",
            "--set",
            "q=10",
            "--set",
            "detuning=0.5",
        ])
        .unwrap();
        match spec.command {
            Command::SweepDelay(args) => {
                assert_eq!(args.set, vec!["q=10".to_string(), "detuning=0.5".to_string()]);
            }
            other => panic!("unexpected command {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_subcommands_and_missing_config() {
        assert!(parse_args(["stirap-recoil", "frobnicate"]).is_err());
        assert!(parse_args(["stirap-recoil", "run"]).is_err());
    }
}
