//! Command-line front end. Every run is determined by its [`RunConfig`],
//! which is echoed at the top of each output.

mod commands;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactlaws::DEFAULT_TAIL_EPS;

pub use commands::execute;

#[derive(Parser, Debug)]
#[command(name = "uipq", version, about = "Exact laws and Monte Carlo checks for the UIPQ skeleton decomposition")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Exact tables: offspring law, extinction probabilities, hull perimeter,
    /// phi and the number of maximal trees.
    Laws(Params),
    /// Sampler versus exact law comparison.
    Mc(Params),
    /// Scaled Monte Carlo mean of the hull volume.
    Volume(Params),
    /// Tail of the separating-cycle length proxy 2N.
    Cycles(Params),
    /// Bridge event probability estimate.
    Bridge(Params),
    /// Exhaustive list of truncated quadrangulations.
    Enumerate(Params),
    /// Runs every acceptance criterion.
    Selftest(Params),
}

impl Command {
    pub fn params(&self) -> &Params {
        match self {
            Command::Laws(p)
            | Command::Mc(p)
            | Command::Volume(p)
            | Command::Cycles(p)
            | Command::Bridge(p)
            | Command::Enumerate(p)
            | Command::Selftest(p) => p,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Laws(_) => "laws",
            Command::Mc(_) => "mc",
            Command::Volume(_) => "volume",
            Command::Cycles(_) => "cycles",
            Command::Bridge(_) => "bridge",
            Command::Enumerate(_) => "enumerate",
            Command::Selftest(_) => "selftest",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Parameters shared by all subcommands; each reads the ones it needs.
#[derive(Args, Debug, Clone, Serialize, Default)]
pub struct Params {
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub inner: Option<usize>,
    #[arg(long)]
    pub outer: Option<usize>,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub big_r: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub big_k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub pmax: Option<usize>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "tail-eps", default_value_t = DEFAULT_TAIL_EPS)]
    pub tail_eps: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// The serialized form of a run.
#[derive(Serialize)]
pub struct RunConfig<'a> {
    #[serde(flatten)]
    pub command: &'a Command,
}

/// Tabular result of a command.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub notes: Vec<String>,
    /// Extra structured payload, emitted in JSON output only.
    pub extra: Option<Value>,
    /// Set when a checked criterion failed.
    pub failed: bool,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report { columns: columns.to_vec(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Renders a report with the config and version in front.
pub fn render(command: &Command, report: &Report) -> Result<Vec<u8>> {
    let config = serde_json::to_value(RunConfig { command })?;
    let mut out = Vec::new();
    match command.params().format {
        Format::Csv => {
            writeln!(out, "# uipq {}", crate::VERSION)?;
            writeln!(out, "# config {config}")?;
            for n in &report.notes {
                writeln!(out, "# {n}")?;
            }
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.columns)?;
            for row in &report.rows {
                w.write_record(row.iter().map(cell))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Map<String, Value>> = report
                .rows
                .iter()
                .map(|r| report.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect())
                .collect();
            let doc = serde_json::json!({
                "version": crate::VERSION,
                "config": config,
                "notes": report.notes,
                "rows": rows,
                "extra": report.extra,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.push(b'\n');
        }
    }
    Ok(out)
}

/// Exit status: 0 success, 1 criterion or runtime failure, 2 usage error.
pub fn run(command: &Command) -> i32 {
    let report = match execute(command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("uipq {}: {e}", command.name());
            return match e {
                Error::Invalid(_) | Error::Domain(_) => 2,
                _ => 1,
            };
        }
    };
    let bytes = match render(command, &report) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("uipq: {e}");
            return 1;
        }
    };
    let written = match &command.params().out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("uipq: {e}");
        return 1;
    }
    i32::from(report.failed)
}

/// Parses `args` (program name first) and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}
