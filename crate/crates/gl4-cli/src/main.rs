use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gl4_cli::{
    emit_table, parse_config, read_report, report_json, run, CliError, Format, RunConfig, Suite, TableKind,
    EXIT_FAIL, EXIT_USAGE,
};

/// Verification suites for GL(4) Hecke, Kloosterman, Mellin-Barnes and Voronoi machinery.
///
/// Every flag can also be set through an environment variable with the GL4_ prefix.
#[derive(Parser)]
#[command(name = "gl4", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite and write its JSON report.
    Run {
        #[arg(long, env = "GL4_SUITE", value_enum)]
        suite: Option<Suite>,
        #[arg(long, env = "GL4_SEED")]
        seed: Option<u64>,
        /// Tolerance override NAME=VALUE for one check; repeatable.
        #[arg(long, env = "GL4_TOL", value_delimiter = ',')]
        tol: Vec<String>,
        /// Report path; stdout when absent.
        #[arg(long, env = "GL4_OUT")]
        out: Option<PathBuf>,
        /// JSON config; flags override its fields.
        #[arg(long, env = "GL4_CONFIG")]
        config: Option<PathBuf>,
    },
    /// Extract one table from a saved report.
    EmitTable {
        #[arg(long, env = "GL4_REPORT")]
        report: PathBuf,
        #[arg(long, value_enum, default_value = "checks")]
        table: TableKind,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, env = "GL4_OUT")]
        out: Option<PathBuf>,
    },
}

fn write_out(path: Option<&PathBuf>, f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut file = fs::File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            f(&mut file)
        }
        None => f(&mut std::io::stdout().lock()),
    }
}

fn execute(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Run { suite, seed, tol, out, config } => {
            let mut cfg = match &config {
                Some(p) => parse_config(p)?,
                None => RunConfig::default(),
            };
            if let Some(s) = suite {
                cfg.suite = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            for item in tol {
                let (name, value) = item
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--tol expects NAME=VALUE, got {item}")))?;
                let v: f64 = value.parse().map_err(|_| CliError::Usage(format!("bad tolerance {value}")))?;
                cfg.tolerances.insert(name.to_string(), v);
            }
            if out.is_some() {
                cfg.out = out;
            }
            let start = Instant::now();
            let report = run(&cfg)?;
            // Timings go to stderr so reports stay byte-identical across runs.
            eprintln!("{}: {:.2?}", cfg.suite.name(), start.elapsed());
            for (suite, c) in &report.summary {
                eprintln!(
                    "  {suite}: {} pass, {} fail, {} inconclusive, {} reported",
                    c.pass, c.fail, c.inconclusive, c.reported
                );
            }
            let text = report_json(&report);
            write_out(cfg.out.as_ref(), |w| w.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())))?;
            Ok(report.exit_code())
        }
        Command::EmitTable { report, table, format, out } => {
            let r = read_report(&report)?;
            write_out(out.as_ref(), |w| emit_table(&r, table, format, w))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                CliError::Parse { .. } | CliError::Usage(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            };
            ExitCode::from(code as u8)
        }
    }
}
