use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use floerpot::config::{parse_document, Document};
use floerpot::fixtures;
use floerpot::pipeline::{self, AppError, Report};
use floerpot::polytope::FiberPoint;
use floerpot::rational::{parse_rational, Rational};
use floerpot::verify::{checklist_json, run_checklist};

/// Exact Floer-theoretic potentials, critical points and quantum cohomology
/// for toric and semitoric moment polytopes.
#[derive(Parser)]
#[command(name = "floerpot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Document path, or the name of a bundled fixture
    config: String,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Facets, functionals and the balanced fiber
    CheckPolytope(Common),
    /// The potential and its partial derivatives
    Potential {
        #[command(flatten)]
        common: Common,
        /// Fiber point, e.g. 2/3,2/3
        #[arg(long)]
        at: Option<String>,
    },
    /// Critical points at a fiber
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        at: Option<String>,
    },
    /// Class lattices, gluing and index arithmetic
    Classes(Common),
    /// Quantum cohomology: semisimplicity and idempotents
    Qh {
        #[command(flatten)]
        common: Common,
        /// Truncation order for non-monomial inverses
        #[arg(long)]
        precision: Option<String>,
    },
    /// Everything, ending in the verdict
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        precision: Option<String>,
    },
    /// Run the reproduction checklist on the bundled semitoric CP^2 document
    #[command(name = "verify-paper")]
    Checklist {
        /// Check a different document instead
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn read_source(config: &str) -> Result<String, AppError> {
    let path = PathBuf::from(config);
    if !path.exists() {
        if let Some(text) = fixtures::fixture(config) {
            return Ok(text.to_string());
        }
    }
    std::fs::read_to_string(&path)
        .map_err(|source| AppError::Config(floerpot::config::ConfigError::Io { path: config.to_string(), source }))
}

fn load(config: &str) -> Result<Document, AppError> {
    Ok(parse_document(&read_source(config)?)?)
}

fn fiber(at: &Option<String>) -> Result<Option<FiberPoint>, AppError> {
    at.as_deref()
        .map(|s| FiberPoint::parse(s).ok_or_else(|| AppError::Usage(format!("--at `{s}` is not a list of rationals"))))
        .transpose()
}

fn precision(p: &Option<String>) -> Result<Option<Rational>, AppError> {
    p.as_deref()
        .map(|s| parse_rational(s).ok_or_else(|| AppError::Usage(format!("--precision `{s}` is not a rational"))))
        .transpose()
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("cannot write to stdout: {e}");
    }
}

fn emit(report: &Report, json: bool) {
    if json {
        out(&format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable")));
    } else {
        out(&report.text);
    }
}

fn run(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::CheckPolytope(c) => emit(&pipeline::polytope_report(&load(&c.config)?)?, c.json),
        Command::Potential { common, at } => {
            let doc = load(&common.config)?;
            emit(&pipeline::potential_report(&doc, fiber(&at)?.as_ref())?, common.json)
        }
        Command::Solve { common, at } => {
            let doc = load(&common.config)?;
            let out = pipeline::solve_at(&doc, fiber(&at)?.as_ref())?;
            emit(&pipeline::solve_report_render(&out), common.json)
        }
        Command::Classes(c) => emit(&pipeline::classes_report(&load(&c.config)?)?, c.json),
        Command::Qh { common, precision: p } => {
            let doc = load(&common.config)?;
            emit(&pipeline::qh_report(&doc, precision(&p)?.as_ref())?, common.json)
        }
        Command::Report { common, at, precision: p } => {
            let doc = load(&common.config)?;
            let (report, _) = pipeline::full_report(&doc, fiber(&at)?.as_ref(), precision(&p)?.as_ref())?;
            emit(&report, common.json)
        }
        Command::Checklist { config, json } => {
            let text = match &config {
                Some(p) => read_source(&p.to_string_lossy())?,
                None => fixtures::CP2_SEMITORIC.to_string(),
            };
            let items = run_checklist(&text)?;
            let all = items.iter().all(|i| i.passed);
            if json {
                let v = serde_json::json!({ "passed": all, "items": checklist_json(&items) });
                out(&format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")));
            } else {
                for i in &items {
                    let mark = if i.passed { "PASS" } else { "FAIL" };
                    out(&format!("[{mark}] {:>2}. {}: {}\n", i.id, i.name, i.detail));
                }
                let failed = items.iter().filter(|i| !i.passed).count();
                if failed == 0 {
                    out(&format!("all {} checks passed\n", items.len()));
                } else {
                    out(&format!("{failed} of {} checks failed\n", items.len()));
                }
            }
            return Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
