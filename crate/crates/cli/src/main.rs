//! Command-line interface.  Exit codes: 0 when every assertion passed,
//! 1 when a mathematical assertion failed, 2 on budget or IO errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use repzeta_cli::cache;
use repzeta_cli::runs::{self, ModeChoice, RunConfig, RunOutput};
use repzeta_core::{Budgets, Error};

#[derive(Parser)]
#[command(name = "repzeta", version, about = "degree multisets of matrix groups over truncated rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct BudgetArgs {
    /// Cap on enumerated group elements
    #[arg(long)]
    max_elements: Option<u64>,
    /// Cap on group operations per phase
    #[arg(long)]
    max_ops: Option<u64>,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        let mut b = Budgets::default();
        if let Some(v) = self.max_elements {
            b.max_elements = v;
        }
        if let Some(v) = self.max_ops {
            b.max_group_ops = v;
        }
        b
    }

    fn config(&self) -> RunConfig {
        RunConfig { budgets: self.budgets(), cache_dir: cache::env_cache_dir() }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compare degree multisets over the two ring families at level k
    Verify {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long)]
        k: u32,
        /// direct, prop21, or both
        #[arg(long, default_value = "both")]
        mode: String,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Tabulate distinct-degree counts over F_{p^f} across primes
    Ntable {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        f: usize,
        /// Comma-separated list of primes
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the CSV table here
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Compare orders and commuting-pair counts over the two families
    Pointcount {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Record the characteristic-2 comparison at SL_2, p = 2, k = 4
    ProbeQ2 {
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Run fast internal consistency checks
    Selftest {
        #[command(flatten)]
        budgets: BudgetArgs,
    },
}

enum Failure {
    Math(Error),
    Resource(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Math(e) | Failure::Resource(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_budget() {
            Failure::Resource(e)
        } else {
            Failure::Math(e)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e)
    }
}

fn emit(out: RunOutput, path: Option<PathBuf>, csv: Option<PathBuf>) -> Result<bool, Failure> {
    print!("{}", out.text);
    if let Some(path) = path {
        let mut body = serde_json::to_string_pretty(&out.report.to_json()).expect("serializable");
        body.push('\n');
        fs::write(&path, body)?;
    }
    if let Some(path) = csv {
        match &out.csv {
            Some(body) => fs::write(&path, body)?,
            None => eprintln!("warning: this command produces no CSV"),
        }
    }
    Ok(out.report.ok)
}

fn dispatch(cmd: Cmd) -> Result<bool, Failure> {
    match cmd {
        Cmd::Verify { scheme, n, p, f, k, mode, out, budgets } => {
            let scheme = runs::parse_scheme(&scheme)?;
            let mode = ModeChoice::parse(&mode)?;
            let run = runs::run_verify(scheme, n, p, f, k, mode, &budgets.config())?;
            emit(run, out, None)
        }
        Cmd::Ntable { scheme, n, f, primes, out, csv, budgets } => {
            let scheme = runs::parse_scheme(&scheme)?;
            let run = runs::run_ntable(scheme, n, f, &primes, &budgets.config())?;
            emit(run, out, csv)
        }
        Cmd::Pointcount { scheme, n, p, f, k, out, budgets } => {
            let scheme = runs::parse_scheme(&scheme)?;
            let run = runs::run_pointcount(scheme, n, p, f, k, &budgets.config())?;
            emit(run, out, None)
        }
        Cmd::ProbeQ2 { out, budgets } => {
            let run = runs::run_probe_q2(&budgets.config())?;
            emit(run, out, None)
        }
        Cmd::Selftest { budgets } => {
            let run = runs::run_selftest(&budgets.config())?;
            emit(run, None, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
