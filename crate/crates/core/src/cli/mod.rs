//! Command-line front end. Every command prints one JSON document (or CSV /
//! SVG where noted) and the output depends only on the inputs and the crate
//! version.

pub mod reproduce;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::carpet::{predicted_exponent, CarpetError, DigitSet};
use crate::connectivity::{
    count_components, find_csc_certificate, infer_component_cardinality, ConnectivityError, Domain, DEFAULT_CSC_KMAX,
};
use crate::corpus;
use crate::gaps::{
    collect_samples, component_gap_sequence, fit_h_exponent, h_bracket, samples_csv, GapError, Rational, SampleSchedule,
};
use crate::grid::{
    cells_csv, render_svg, Caps, GridError, DEFAULT_MAX_CELLS, DEFAULT_MAX_COMPONENTS, RENDER_MAX_CELLS,
};
use crate::theory::lipschitz_report;

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "carpet", version, about = "Bedford-McMullen carpet connectivity and gap sequences")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Largest number of occupied cells any single level may have.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CELLS, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_cells: u64,
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A digit-set file, or `corpus:NAME` for a shipped one.
#[derive(Debug, Args, Clone)]
pub struct Input {
    #[arg(long)]
    pub digitset: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Counts, rows and linearity flags.
    Classify(Input),
    /// Connected components of `Q_k` or its 3x3 tiling.
    Components {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long)]
        tilde: bool,
    },
    /// Search levels 1..=kmax for a separated component.
    Csc {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_CSC_KMAX)]
        kmax: u32,
    },
    /// Finitely or infinitely many components, with evidence.
    Cardinality {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_CSC_KMAX)]
        kmax: u32,
    },
    /// Gap sequence of `Q_k`.
    Gaps {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_COMPONENTS, value_parser = positive_usize)]
        max_components: usize,
    },
    /// Bounds on the number of δ-classes from level L.
    Hbracket {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        level: u32,
        /// `p/q` or an integer.
        #[arg(long)]
        delta: Rational,
    },
    /// Fit `h(δ) ~ δ^-γ` over `δ = base^-k`, sampled at `L = scale*k + offset`.
    Exponent {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        kmin: u32,
        #[arg(long, default_value_t = 5)]
        kmax: u32,
        #[arg(long)]
        base: Option<u64>,
        #[arg(long, default_value_t = 1)]
        level_scale: u32,
        #[arg(long, default_value_t = 2)]
        level_offset: u32,
        #[arg(long, default_value_t = 3)]
        cardinality_kmax: u32,
    },
    /// Dimensions, exponents and the comparability verdict for two carpets.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = DEFAULT_CSC_KMAX)]
        kmax: u32,
    },
    /// SVG of `Q_k` (or an `X,Y` cell list with `--format csv`).
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Reproduce {
        /// Only these criteria (repeatable).
        #[arg(long)]
        criterion: Vec<u32>,
        /// Include wall times, which makes the output non-reproducible.
        #[arg(long)]
        timings: bool,
    },
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Cap(String),
    Io(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_FAILED,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(s) | CliError::Cap(s) | CliError::Io(s) | CliError::Failed(s) => s,
        }
    }
}

impl From<CarpetError> for CliError {
    fn from(e: CarpetError) -> Self {
        match e {
            CarpetError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::CapExceeded { .. } | GridError::Overflow(_) => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ConnectivityError> for CliError {
    fn from(e: ConnectivityError) -> Self {
        match e {
            ConnectivityError::Grid(g) => g.into(),
            ConnectivityError::SearchCap { .. } => CliError::Cap(e.to_string()),
        }
    }
}

impl From<GapError> for CliError {
    fn from(e: GapError) -> Self {
        match e {
            GapError::Grid(g) => g.into(),
            GapError::ComponentCap { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub fn read_digit_set(arg: &str) -> Result<DigitSet, CliError> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        return corpus::load(name).ok_or_else(|| {
            CliError::Usage(format!("unknown corpus entry {name}; known: {}", corpus::NAMES.join(", ")))
        });
    }
    Ok(DigitSet::from_path(Path::new(arg))?)
}

fn envelope(command: &str, result: impl Serialize) -> Value {
    json!({
        "schema": format!("bmcarpet.{command}.v1"),
        "version": env!("CARGO_PKG_VERSION"),
        "result": result,
    })
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON value serializes");
    s.push('\n');
    s
}

/// Output text and whether every check passed (only `reproduce` can fail).
pub fn execute(config: &RunConfig) -> Result<(String, bool), CliError> {
    let caps = Caps { max_cells: config.common.max_cells, max_components: DEFAULT_MAX_COMPONENTS };
    let csv = config.common.format == Format::Csv;
    let text = match &config.command {
        Command::Classify(input) => {
            let ds = read_digit_set(&input.digitset)?;
            pretty(&envelope(
                "classify",
                json!({
                    "n": ds.n(),
                    "m": ds.m(),
                    "classification": ds.classify(),
                    "box_dimension": ds.box_dimension(),
                    "hausdorff_dimension": ds.hausdorff_dimension(),
                }),
            ))
        }
        Command::Components { input, k, tilde } => {
            let ds = read_digit_set(&input.digitset)?;
            let domain = if *tilde { Domain::Tilde } else { Domain::Plain };
            pretty(&envelope("components", count_components(&ds, *k, domain, &caps)?))
        }
        Command::Csc { input, kmax } => {
            let ds = read_digit_set(&input.digitset)?;
            let cert = find_csc_certificate(&ds, *kmax, &caps)?;
            pretty(&envelope("csc", json!({ "k_max": kmax, "certificate": cert })))
        }
        Command::Cardinality { input, kmax } => {
            let ds = read_digit_set(&input.digitset)?;
            pretty(&envelope("cardinality", infer_component_cardinality(&ds, &ds.classify(), *kmax, &caps)))
        }
        Command::Gaps { input, k, max_components } => {
            let ds = read_digit_set(&input.digitset)?;
            let caps = Caps { max_components: *max_components, ..caps };
            let gaps = component_gap_sequence(&ds, *k, &caps)?;
            if csv {
                let mut out = String::from("gap_num,gap_den,multiplicity\n");
                for e in &gaps.entries {
                    out.push_str(&format!("{},{},{}\n", e.value.numer(), e.value.denom(), e.multiplicity));
                }
                out
            } else {
                pretty(&envelope("gaps", gaps))
            }
        }
        Command::Hbracket { input, level, delta } => {
            let ds = read_digit_set(&input.digitset)?;
            let b = h_bracket(&ds, *level, delta, &caps)?;
            if csv {
                samples_csv(&[b])
            } else {
                pretty(&envelope("hbracket", b))
            }
        }
        Command::Exponent { input, kmin, kmax, base, level_scale, level_offset, cardinality_kmax } => {
            let ds = read_digit_set(&input.digitset)?;
            if kmin > kmax || *kmin == 0 {
                return Err(CliError::Usage(format!("need 1 <= kmin <= kmax, got {kmin}..{kmax}")));
            }
            let base = base.unwrap_or(ds.n() as u64);
            if base < 2 {
                return Err(CliError::Usage("base must be at least 2".into()));
            }
            let schedule = SampleSchedule {
                base,
                k_min: *kmin,
                k_max: *kmax,
                level_scale: *level_scale,
                level_offset: *level_offset,
            };
            let samples = collect_samples(&ds, &schedule, &caps)?;
            if csv {
                samples_csv(&samples)
            } else {
                let cls = ds.classify();
                let verdict = infer_component_cardinality(&ds, &cls, *cardinality_kmax, &caps).verdict;
                let predicted = predicted_exponent(&cls, &ds, verdict);
                let fit = fit_h_exponent(&samples, Some(predicted));
                let result = match fit {
                    Ok(report) => json!({ "schedule": schedule, "report": report }),
                    Err(e) => {
                        json!({ "schedule": schedule, "samples": samples, "predicted": predicted, "error": e.to_string() })
                    }
                };
                pretty(&envelope("exponent", result))
            }
        }
        Command::Compare { a, b, kmax } => {
            let (da, db) = (read_digit_set(a)?, read_digit_set(b)?);
            pretty(&envelope("compare", lipschitz_report(&da, &db, *kmax, &caps)))
        }
        Command::Render { input, k } => {
            let ds = read_digit_set(&input.digitset)?;
            if csv {
                cells_csv(&ds, *k, &Caps { max_cells: caps.max_cells.min(RENDER_MAX_CELLS), ..caps })?
            } else {
                render_svg(&ds, *k, caps.max_cells.min(RENDER_MAX_CELLS))?
            }
        }
        Command::Reproduce { criterion, timings } => {
            let selected: Vec<u32> =
                if criterion.is_empty() { reproduce::CRITERIA.to_vec() } else { criterion.clone() };
            if let Some(bad) = selected.iter().find(|c| !reproduce::CRITERIA.contains(c)) {
                return Err(CliError::Usage(format!("no criterion {bad}")));
            }
            let mut rows: Vec<_> = selected.iter().flat_map(|&c| reproduce::run_criterion(c)).collect();
            if *timings {
                for r in &mut rows {
                    r.elapsed_ms = Some(r.elapsed.as_millis());
                }
            }
            let all_pass = rows.iter().all(|r| r.pass);
            let text = if csv {
                let mut out = String::from("criterion,label,pass,measured,expected,tolerance\n");
                for r in &rows {
                    let q = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        r.criterion,
                        q(&r.label),
                        r.pass,
                        q(&r.measured),
                        q(&r.expected),
                        q(&r.tolerance)
                    ));
                }
                out
            } else {
                pretty(&envelope("reproduce", json!({ "all_pass": all_pass, "rows": rows })))
            };
            return Ok((text, all_pass));
        }
    };
    Ok((text, true))
}

/// Writes via a temporary file and rename so a reader never sees a partial file.
fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp-write");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

/// Parses arguments, runs, writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (text, ok) = match execute(&config) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };
    let written = match &config.common.output {
        Some(path) => write_atomically(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_IO;
    }
    if ok {
        0
    } else {
        EXIT_FAILED
    }
}
