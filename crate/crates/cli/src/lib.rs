//! The `nodesum` command-line tool.

pub mod input;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nodesum_core::fiber::fiber_polygon;
use nodesum_core::nodecount::{analyze, check_assumptions, FormulaOutcome};
use nodesum_core::polytope::normalized_mixed_volume;
use nodesum_core::singular::fps_invariants;
use nodesum_core::{AnalysisReport, Int, PolytopeTuple};
use rayon::prelude::*;
use thiserror::Error;

pub use report::Formula;

/// Process exit status; larger codes are worse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Success = 0,
    InputError = 1,
    AssumptionViolation = 2,
    ConsistencyFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error("assumption violated under --strict: {0}")]
    Strict(String),
    #[error(transparent)]
    Core(#[from] nodesum_core::Error),
    #[error("output failed: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            Self::Strict(_) => ExitStatus::AssumptionViolation,
            Self::Core(e) if e.is_consistency() => ExitStatus::ConsistencyFailure,
            Self::Core(e) if e.is_assumption() => ExitStatus::AssumptionViolation,
            _ => ExitStatus::InputError,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nodesum", version, about = "Node counts of projected complete-intersection curves from their support")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report: volumes, fiber polygon, per-facet data and D.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Formula::All)]
        formula: Formula,
        #[arg(long)]
        json: bool,
        /// Exit with status 2 when a selected formula's assumptions fail.
        #[arg(long)]
        strict: bool,
        /// Also draw the fiber polygon to this SVG file.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Assumption flags of the input as given.
    Check { file: PathBuf },
    /// The fiber polygon of the input.
    Fiber { file: PathBuf },
    /// Invariants of the singularity with a given index sequence.
    Chi {
        #[arg(long, value_delimiter = ',', required = true)]
        sequence: Vec<String>,
    },
    /// Normalized mixed volume of the lists in {"polytopes": [...]}.
    Mixedvol { file: PathBuf },
    /// Analyze every *.json file of a directory.
    Batch {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                ExitStatus::InputError
            } else {
                let _ = write!(out, "{text}");
                ExitStatus::Success
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<ExitStatus, CliError> {
    match command {
        Command::Analyze {
            file,
            formula,
            json,
            strict,
            svg,
        } => {
            let analysis = analyze_file(&file)?;
            if let Some(path) = svg {
                svg::render_svg(&analysis.report.fiber, &path)?;
            }
            out.write_all(analysis.render(formula, json).as_bytes())?;
            if strict {
                strict_check(&analysis.report, formula)?;
            }
            Ok(ExitStatus::Success)
        }
        Command::Check { file } => {
            let doc = input::read_document(&file)?;
            let a = doc.support_set()?;
            let r = check_assumptions(&a)?;
            writeln!(out, "assumptions (input as given):")?;
            out.write_all(report::assumptions_text(&r).as_bytes())?;
            Ok(ExitStatus::Success)
        }
        Command::Fiber { file } => {
            let doc = input::read_document(&file)?;
            let p = fiber_polygon(&doc.support_set()?)?;
            out.write_all(report::polygon_text(&p).as_bytes())?;
            Ok(ExitStatus::Success)
        }
        Command::Chi { sequence } => {
            let values = sequence
                .iter()
                .map(|s| s.trim().parse::<Int>().map_err(|_| CliError::Input(format!("not a natural number: {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let (n, chi, delta) = fps_invariants(&values)?;
            writeln!(out, "N={n} chi={chi} delta={delta}")?;
            Ok(ExitStatus::Success)
        }
        Command::Mixedvol { file } => {
            let sets = input::read_polytopes(&file)?;
            let v = normalized_mixed_volume(&PolytopeTuple::new(sets)?)?;
            writeln!(out, "normalized mixed volume = {v}")?;
            Ok(ExitStatus::Success)
        }
        Command::Batch { dir, json } => batch(&dir, json, out),
    }
}

struct Analysis {
    name: String,
    report: AnalysisReport,
}

impl Analysis {
    fn render(&self, formula: Formula, json: bool) -> String {
        if json {
            let value = report::json_report(&self.name, &self.report, formula);
            let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
            text.push('\n');
            text
        } else {
            report::text_report(&self.name, &self.report, formula)
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn analyze_file(path: &Path) -> Result<Analysis, CliError> {
    let doc = input::read_document(path)?;
    let report = analyze(&doc.support_set()?)?;
    Ok(Analysis {
        name: doc.name.unwrap_or_else(|| stem(path)),
        report,
    })
}

/// Under `--strict` the input must satisfy `ind_v = 1` as given and every
/// selected formula must be evaluable.
fn strict_check(r: &AnalysisReport, formula: Formula) -> Result<(), CliError> {
    let mut problems = Vec::new();
    if !r.assumptions.ind_v_is_one {
        problems.push("ind_v (input needed vertical normalization)".to_string());
    }
    let optional = [
        ("D_punctured", formula.punctured(), &r.d_punctured),
        ("D_conjecture", formula.conjecture(), &r.d_conjecture),
    ];
    for (label, selected, outcome) in optional {
        if let (true, FormulaOutcome::Blocked(failures)) = (selected, outcome) {
            let reasons: Vec<String> = failures.iter().map(ToString::to_string).collect();
            problems.push(format!("{label} blocked by {}", reasons.join(", ")));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Strict(problems.join("; ")))
    }
}

fn batch(dir: &Path, json: bool, out: &mut dyn Write) -> Result<ExitStatus, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|source| CliError::Read {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    let results: Vec<(PathBuf, Result<Analysis, CliError>)> =
        files.into_par_iter().map(|p| { let r = analyze_file(&p); (p, r) }).collect();

    let worst = results
        .iter()
        .map(|(_, r)| r.as_ref().map_or_else(CliError::status, |_| ExitStatus::Success))
        .max()
        .unwrap_or(ExitStatus::Success);
    if json {
        let reports: Vec<serde_json::Value> = results
            .iter()
            .map(|(path, r)| match r {
                Ok(a) => report::json_report(&a.name, &a.report, Formula::All),
                Err(e) => serde_json::json!({
                    "file": path.file_name().map(|s| s.to_string_lossy().into_owned()),
                    "error": e.to_string(),
                    "exit_code": e.status().code(),
                }),
            })
            .collect();
        let doc = serde_json::json!({"schema_version": report::SCHEMA_VERSION, "reports": reports});
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("reports serialize"))?;
    } else {
        for (i, (path, r)) in results.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            let file = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            writeln!(out, "== {file} ==")?;
            match r {
                Ok(a) => out.write_all(a.render(Formula::All, false).as_bytes())?,
                Err(e) => writeln!(out, "error: {e}")?,
            }
        }
    }
    Ok(worst)
}
