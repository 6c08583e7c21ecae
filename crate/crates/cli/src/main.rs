//! `oac`: validate, convert and mint annotations, work with fragment URIs
//! and temporal marks, and run the annotation server.
//!
//! Exit status: 0 on success, 1 when a report contains errors, 2 on usage,
//! input or parse failures. Data goes to stdout, diagnostics to stderr.

mod frag;
mod new;
mod temporal;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::{Parser, Subcommand, ValueEnum};
use oac_core::rdf::{
    default_prefixes, parse_ntriples, serialize_ntriples_canonical, serialize_turtle, Graph,
};
use oac_core::validation::{validate, Severity, ValidationReport};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "oac", version, about = "Open Annotation toolkit")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every oac:Annotation in an N-Triples file.
    Validate {
        /// Input file, or `-` for stdin.
        path: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Re-serialize an N-Triples file.
    Convert {
        path: String,
        #[arg(long, value_enum, default_value_t = RdfFormat::Ntriples)]
        to: RdfFormat,
    },
    /// Fragment URI tooling.
    Frag {
        #[command(subcommand)]
        command: frag::FragCommand,
    },
    /// Build an annotation from flags and print its graph.
    New(new::NewArgs),
    /// Temporal classification and memento selection.
    Temporal {
        #[command(subcommand)]
        command: temporal::TemporalCommand,
    },
    /// Run the HTTP server until interrupted.
    Serve {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum RdfFormat {
    Ntriples,
    Turtle,
}

/// A failure that ends the command with exit status 2.
#[derive(Debug)]
pub(crate) struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

pub(crate) type CmdResult = Result<ExitCode, Failure>;

pub(crate) fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
}

pub(crate) fn read_graph(path: &str) -> Result<Graph, Failure> {
    let text = read_input(path)?;
    parse_ntriples(&text).map_err(|e| Failure(format!("{path}: {e}")))
}

pub(crate) fn render(graph: &Graph, to: RdfFormat) -> Result<String, Failure> {
    Ok(match to {
        RdfFormat::Ntriples => serialize_ntriples_canonical(graph)?,
        RdfFormat::Turtle => serialize_turtle(graph, &default_prefixes()),
    })
}

/// RFC 3339 (`2011-03-12T11:45:00Z`) or RFC 1123 (`Sat, 12 Mar 2011 11:45:00 GMT`).
pub(crate) fn parse_when(text: &str) -> Result<DateTime<Utc>, Failure> {
    oac_core::model::parse_datetime(text)
        .or_else(|| {
            DateTime::parse_from_rfc3339(text)
                .ok()
                .map(|d| d.with_timezone(&Utc))
        })
        .or_else(|| {
            DateTime::parse_from_rfc2822(text)
                .ok()
                .map(|d| d.with_timezone(&Utc))
        })
        .ok_or_else(|| Failure(format!("unparsable datetime {text:?}")))
}

pub(crate) fn report_json(report: &ValidationReport) -> serde_json::Value {
    let count = |s: Severity| report.findings.iter().filter(|f| f.severity == s).count();
    json!({
        "checked_annotations": report.checked_annotations,
        "errors": count(Severity::Error),
        "warnings": count(Severity::Warning),
        "findings": report.findings,
    })
}

fn status(report: &ValidationReport) -> ExitCode {
    if report.has_errors() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_validate(path: &str, json: bool) -> CmdResult {
    let report = validate(&read_graph(path)?);
    if json {
        println!("{:#}", report_json(&report));
    } else {
        print!("{}", report.to_text());
        let errors = report.errors().count();
        println!(
            "checked {} annotation(s): {} error(s), {} warning(s)",
            report.checked_annotations,
            errors,
            report.findings.len() - errors
        );
    }
    Ok(status(&report))
}

fn cmd_convert(path: &str, to: RdfFormat, json: bool) -> CmdResult {
    let graph = read_graph(path)?;
    let text = render(&graph, to)?;
    if json {
        let format = match to {
            RdfFormat::Ntriples => "application/n-triples",
            RdfFormat::Turtle => "text/turtle",
        };
        println!(
            "{:#}",
            json!({ "format": format, "triples": graph.len(), "document": text })
        );
    } else {
        print!("{text}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_serve(config: &std::path::Path) -> CmdResult {
    let config = oac_server::Config::load(config)?;
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .init();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(oac_server::serve(config))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { path, format } => cmd_validate(path, cli.json || *format == ReportFormat::Json),
        Command::Convert { path, to } => cmd_convert(path, *to, cli.json),
        Command::Frag { command } => frag::run(command, cli.json),
        Command::New(args) => new::run(args, cli.json),
        Command::Temporal { command } => temporal::run(command, cli.json),
        Command::Serve { config } => cmd_serve(config),
    };
    match result {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
