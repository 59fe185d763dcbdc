//! Argument parsing, `--config` expansion, thread pool setup and the exit-code
//! contract: 0 when every declared check passes, 1 on failed checks or
//! numerical errors (with a JSON error report), 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::commands::{self, *};
use crate::parse::UsageError;

/// Environment variable holding the default thread cap.
pub const THREADS_ENV: &str = "HERGLOTZ_THREADS";

#[derive(Parser, Debug)]
#[command(name = "herglotz", version, about = "Jacobi operators, Herglotz functions and potential theory")]
pub struct Cli {
    /// Cap on parallel grid fan-out; defaults to HERGLOTZ_THREADS, then to the
    /// available parallelism. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON file mirroring the flags, with the command under "command".
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalue counting measure dk_N of the N×N truncation.
    Dos(DosArgs),
    /// Table of γ_N(x + iy) = (1/N) ln|f_-(N+1)|.
    Lyapunov(LyapunovArgs),
    /// Finite-N Thouless identity on a complex grid.
    ThoulessCheck(ThoulessArgs),
    /// w_+ + w_- = iπ, g_N = w_+' and the moment identity.
    Identities(IdentitiesArgs),
    /// The averages w_+ and w_- at one point.
    WPair(WPairArgs),
    /// Equilibrium measure and Robin constant of an interval union.
    Equilibrium(EquilibriumArgs),
    /// Logarithmic capacity of an interval union.
    Capacity(CapacityArgs),
    /// Grid test of Re F = 0 on a set.
    Reflectionless(ReflectionlessArgs),
    /// Herglotz functions from Krein functions and back.
    #[command(subcommand)]
    Krein(KreinCommand),
    /// Whether a reflectionless measure on a set can carry an atom at x.
    Pointmass(PointmassArgs),
    /// Approximate derivative of γ against -Re g.
    DapCheck(DapArgs),
    /// cap(Z) ≤ A ≤ cap(K) and |Z| ≤ 4A, optionally dk_N against ω_K.
    Inequalities(InequalitiesArgs),
}

fn run_command(cmd: &Command) -> Result<bool> {
    match cmd {
        Command::Dos(a) => commands::dos(a),
        Command::Lyapunov(a) => lyapunov_table(a),
        Command::ThoulessCheck(a) => thouless_check(a),
        Command::Identities(a) => identities(a),
        Command::WPair(a) => w_pair_cmd(a),
        Command::Equilibrium(a) => equilibrium_cmd(a),
        Command::Capacity(a) => capacity_cmd(a),
        Command::Reflectionless(a) => reflectionless(a),
        Command::Krein(k) => krein(k),
        Command::Pointmass(a) => pointmass(a),
        Command::DapCheck(a) => dap_check(a),
        Command::Inequalities(a) => inequalities(a),
    }
}

fn scalar(key: &str, v: &Value) -> Result<String> {
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Array(items) => items.iter().map(|i| scalar(key, i)).collect::<Result<Vec<_>>>()?.join(","),
        Value::Object(_) if key == "model" => v.to_string(),
        _ => bail!(UsageError(format!("config key {key:?} has an unsupported value"))),
    })
}

/// Expands a config document into the equivalent argument vector.
pub fn config_args(doc: &Value) -> Result<Vec<String>> {
    let obj: &Map<String, Value> = doc
        .as_object()
        .ok_or_else(|| UsageError("config must be a JSON object".into()))?;
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| UsageError("config needs a string \"command\"".into()))?;
    let mut args = vec!["herglotz".to_string()];
    args.extend(command.split_whitespace().map(str::to_string));
    for (key, v) in obj {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => args.push(flag),
            Value::Bool(false) | Value::Null => {}
            _ => args.push(format!("{flag}={}", scalar(key, v)?)),
        }
    }
    Ok(args)
}

fn thread_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        if n == 0 {
            bail!(UsageError("--threads must be positive".into()));
        }
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => bail!(UsageError(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn parse(args: Vec<OsString>) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(args).map_err(|e| {
        let _ = e.print();
        ExitCode::from(if e.use_stderr() { 2 } else { 0 })
    })
}

fn execute(cli: &Cli) -> Result<bool> {
    let command = cli.command.as_ref().context("missing command")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cli.threads)?)
        .build()?;
    pool.install(|| run_command(command))
}

/// Runs the command line and maps the outcome to the exit-code contract.
pub fn main_with(args: impl IntoIterator<Item = OsString>) -> ExitCode {
    let mut cli = match parse(args.into_iter().collect()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if let Some(path) = cli.config.take() {
        if cli.command.is_some() {
            eprintln!("error: --config replaces the command and its flags; give one or the other");
            return ExitCode::from(2);
        }
        let expanded = std::fs::read_to_string(&path)
            .with_context(|| format!("cannot read {}", path.display()))
            .and_then(|t| serde_json::from_str::<Value>(&t).context("config is not valid JSON"))
            .map_err(|e| anyhow::Error::new(UsageError(format!("{e:#}"))))
            .and_then(|doc| config_args(&doc));
        let mut args = match expanded {
            Ok(a) => a,
            Err(e) => return report(&e),
        };
        if let Some(t) = cli.threads {
            args.push(format!("--threads={t}"));
        }
        cli = match parse(args.into_iter().map(OsString::from).collect()) {
            Ok(c) => c,
            Err(code) => return code,
        };
    }
    if cli.command.is_none() {
        eprintln!("error: a command or --config is required; see --help");
        return ExitCode::from(2);
    }
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => report(&e),
    }
}

fn report(e: &anyhow::Error) -> ExitCode {
    if let Some(u) = e.downcast_ref::<UsageError>() {
        eprintln!("usage error: {u}");
        return ExitCode::from(2);
    }
    let broken_pipe = e
        .chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe);
    if !broken_pipe {
        let doc = json!({ "error": format!("{e:#}") });
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&doc).unwrap_or_default());
    }
    ExitCode::from(1)
}
