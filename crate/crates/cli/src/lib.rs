//! Command-line front end: fixtures, configuration and the subcommands
//! `build`, `verify`, `scan`, `chern` and `restrict`.

pub mod commands;
pub mod config;
pub mod fixtures;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{Context, Outcome};
use crate::config::Config;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{0}")]
    Core(detres_core::Error),
}

impl CliError {
    fn json(e: serde_json::Error) -> Self {
        CliError::Io(format!("serialization: {e}"))
    }
}

impl From<detres_core::Error> for CliError {
    fn from(e: detres_core::Error) -> Self {
        use detres_core::Error as E;
        match e {
            E::InvalidInput(_)
            | E::InvalidField(_)
            | E::DegreeMismatch(_)
            | E::Inhomogeneous(_)
            | E::OutOfRange(_) => CliError::Usage(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "detres",
    version,
    about = "Resolutions and invariants of standard determinantal schemes"
)]
pub struct Cli {
    /// Characteristic of the coefficient field.
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    /// Seed for generic matrices and random sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Degree bound or window width (meaning depends on the command).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub bound: Option<i32>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory of additional `*.fixture` files.
    #[arg(long, global = true)]
    pub fixtures_dir: Option<PathBuf>,
    /// Output path: a directory for `build`, a JSON-lines file otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Extra `key=value` settings, applied last.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Print JSON records instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SchemeArgs {
    /// A built-in or file fixture name.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Generic linear matrix `t,c,n`.
    #[arg(long)]
    pub linear: Option<String>,
    /// Generic entries with a degree grid, rows separated by `;`.
    #[arg(long)]
    pub degrees: Option<String>,
    /// Explicit entries, rows separated by `;`, entries by `,`.
    #[arg(long)]
    pub entries: Option<String>,
    /// Projective dimension for `--degrees` and `--entries`.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minors, Betti tables of the D_i complexes and Hilbert data.
    Build(SchemeArgs),
    /// Identities, mapping cones, Ulrich certificate, simplicity and vanishing.
    Verify(SchemeArgs),
    /// Resumable scan of Ext modules over a grid of generic schemes.
    Scan,
    /// Chern classes of the normal sequence and the excluded extensions.
    Chern,
    /// Restriction to a general hyperplane.
    Restrict(SchemeArgs),
    /// List the available fixtures.
    Fixtures,
}

impl Cli {
    /// Defaults, then the config file, then flags and `--set`.
    pub fn config(&self) -> Result<Config, CliError> {
        let mut cfg = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let mut flags = Config::default();
        let mut put = |k: &str, v: Option<String>| -> Result<(), CliError> {
            match v {
                Some(v) => flags.set(k, &v),
                None => Ok(()),
            }
        };
        put("prime", self.prime.map(|x| x.to_string()))?;
        put("seed", self.seed.map(|x| x.to_string()))?;
        put("bound", self.bound.map(|x| x.to_string()))?;
        put("jobs", self.jobs.map(|x| x.to_string()))?;
        put(
            "fixtures_dir",
            self.fixtures_dir.as_ref().map(|p| p.display().to_string()),
        )?;
        put("out", self.out.as_ref().map(|p| p.display().to_string()))?;
        if let Command::Build(a) | Command::Verify(a) | Command::Restrict(a) = &self.command {
            put("fixture", a.fixture.clone())?;
            put("linear", a.linear.clone())?;
            put("degrees", a.degrees.clone())?;
            put("entries", a.entries.clone())?;
            put("n", a.n.map(|x| x.to_string()))?;
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            flags.set(k.trim(), v.trim())?;
        }
        cfg.merge(&flags);
        Ok(cfg)
    }
}

fn write_build_artifacts(dir: &std::path::Path, outcome: &Outcome) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let name = outcome
        .records
        .first()
        .and_then(|r| r["result"]["fixture"].as_str())
        .unwrap_or("scheme")
        .to_string();
    std::fs::write(dir.join(format!("{name}.txt")), &outcome.text).map_err(io)?;
    let json = outcome
        .records
        .iter()
        .map(|r| r.to_string() + "\n")
        .collect::<String>();
    std::fs::write(dir.join(format!("{name}.json")), json).map_err(io)
}

fn append_records(path: &std::path::Path, outcome: &Outcome) -> Result<(), CliError> {
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    for r in &outcome.records {
        writeln!(f, "{r}").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Runs a parsed command line, writing the report to `stdout`; returns the
/// exit status.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = cli.config()?;
    if let Some(jobs) = cfg.parsed::<usize>("jobs")? {
        // The global pool can be set once per process; later calls keep it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    let ctx = Context::new(cfg)?;
    let outcome = match &cli.command {
        Command::Build(_) => commands::build(&ctx)?,
        Command::Verify(_) => commands::verify(&ctx)?,
        Command::Scan => commands::scan(&ctx)?,
        Command::Chern => commands::chern(&ctx)?,
        Command::Restrict(_) => commands::restrict(&ctx)?,
        Command::Fixtures => {
            let dir = ctx.cfg.get("fixtures_dir").map(std::path::Path::new);
            let mut out = Outcome::default();
            for f in fixtures::catalog(dir)? {
                out.text
                    .push_str(&format!("{:<16} {}\n", f.name, f.description));
                out.records
                    .push(serde_json::to_value(&f).map_err(CliError::json)?);
            }
            out
        }
    };
    match (&cli.command, &ctx.out) {
        (Command::Build(_), Some(dir)) => write_build_artifacts(dir, &outcome)?,
        (Command::Scan, _) | (_, None) => {}
        (_, Some(path)) => append_records(path, &outcome)?,
    }
    let io = |e: std::io::Error| CliError::Io(format!("stdout: {e}"));
    if cli.json {
        for r in &outcome.records {
            writeln!(stdout, "{r}").map_err(io)?;
        }
    } else {
        write!(stdout, "{}", outcome.text).map_err(io)?;
    }
    Ok(if outcome.failed {
        EXIT_ASSERTION
    } else {
        EXIT_OK
    })
}

/// Exit status for an error.
pub fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Usage(_) => EXIT_USAGE,
        _ => EXIT_ASSERTION,
    }
}
