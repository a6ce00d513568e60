//! On-disk formats.
//!
//! POVM file (JSON):
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "dim": 2,
//!   "outcomes": ["+", "-"],
//!   "elements": {
//!     "+": [[0.5, 0.0], [0.5, 0.0], [0.5, 0.0], [0.5, 0.0]],
//!     "-": [[0.5, 0.0], [-0.5, 0.0], [-0.5, 0.0], [0.5, 0.0]]
//!   }
//! }
//! ```
//!
//! Each matrix is row-major, one `[re, im]` pair per entry. State files use
//! the same layout with a single `"density"` matrix. Outcome-map files are
//! plain text, one `source target` pair per line; `#` starts a comment.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Map;

use povm_tradeoff::povm::{validate_povm, Tolerance, ValidationReport};
use povm_tradeoff::{CMatrix, OutcomeMap, Povm, State};

use crate::CliError;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PovmFile {
    format_version: String,
    dim: usize,
    outcomes: Vec<String>,
    elements: Map<String, serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    format_version: String,
    dim: usize,
    density: Vec<[f64; 2]>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_err(origin: &str, e: serde_json::Error) -> CliError {
    CliError::Parse(format!("{origin}:{}:{}: {e}", e.line(), e.column()))
}

fn matrix_from_pairs(origin: &str, what: &str, dim: usize, pairs: &[[f64; 2]]) -> Result<CMatrix, CliError> {
    if pairs.len() != dim * dim {
        return Err(CliError::Parse(format!(
            "{origin}: {what}: expected {} entries for dim {dim}, found {}",
            dim * dim,
            pairs.len()
        )));
    }
    let data = pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    CMatrix::from_vec(dim, data).map_err(|e| CliError::Parse(format!("{origin}: {what}: {e}")))
}

fn matrix_to_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

fn check_version(origin: &str, v: &str) -> Result<(), CliError> {
    if v != FORMAT_VERSION {
        return Err(CliError::Parse(format!(
            "{origin}: unsupported format_version {v:?} (expected {FORMAT_VERSION:?})"
        )));
    }
    Ok(())
}

/// Parses a POVM document. `origin` prefixes error messages.
pub fn parse_povm(text: &str, origin: &str) -> Result<Povm, CliError> {
    let file: PovmFile = serde_json::from_str(text).map_err(|e| parse_err(origin, e))?;
    check_version(origin, &file.format_version)?;
    if file.dim == 0 {
        return Err(CliError::Parse(format!("{origin}: dim must be positive")));
    }
    if file.outcomes.len() != file.elements.len() {
        return Err(CliError::Parse(format!(
            "{origin}: {} outcomes listed but {} elements given",
            file.outcomes.len(),
            file.elements.len()
        )));
    }
    let mut elements = Vec::with_capacity(file.outcomes.len());
    for label in &file.outcomes {
        let raw = file
            .elements
            .get(label)
            .ok_or_else(|| CliError::Parse(format!("{origin}: no element for outcome {label:?}")))?;
        let pairs: Vec<[f64; 2]> = serde_json::from_value(raw.clone())
            .map_err(|e| CliError::Parse(format!("{origin}: element {label:?}: {e}")))?;
        elements.push(matrix_from_pairs(origin, &format!("element {label:?}"), file.dim, &pairs)?);
    }
    Povm::new(file.outcomes, elements).map_err(|e| CliError::Parse(format!("{origin}: {e}")))
}

pub fn serialize_povm(p: &Povm) -> String {
    let mut elements = Map::new();
    for (label, m) in p.iter() {
        elements.insert(label.to_string(), serde_json::to_value(matrix_to_pairs(m)).expect("finite"));
    }
    let file = PovmFile {
        format_version: FORMAT_VERSION.into(),
        dim: p.dim(),
        outcomes: p.outcomes().to_vec(),
        elements,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

/// A POVM loaded from disk together with its validation report.
pub struct Loaded {
    pub povm: Povm,
    pub report: ValidationReport,
}

/// Reads and validates a POVM file. In strict mode an invalid POVM is an
/// error; otherwise the report is printed to stderr as a warning.
pub fn load_povm(path: &Path, tol: Tolerance, strict: bool) -> Result<Loaded, CliError> {
    let origin = path.display().to_string();
    let povm = parse_povm(&read(path)?, &origin)?;
    let report = validate_povm(&povm, tol);
    if !report.is_valid() {
        if strict {
            return Err(CliError::Invalid(format!("{origin}: not a valid POVM\n{report}")));
        }
        eprintln!("warning: {origin}: not a valid POVM\n{report}");
    }
    Ok(Loaded { povm, report })
}

pub fn save_povm(path: &Path, p: &Povm) -> Result<(), CliError> {
    write(path, &serialize_povm(p))
}

pub fn parse_state(text: &str, origin: &str) -> Result<State, CliError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| parse_err(origin, e))?;
    check_version(origin, &file.format_version)?;
    let m = matrix_from_pairs(origin, "density", file.dim, &file.density)?;
    State::from_density(m).map_err(|e| CliError::Invalid(format!("{origin}: {e}")))
}

pub fn serialize_state(s: &State) -> String {
    let file = StateFile {
        format_version: FORMAT_VERSION.into(),
        dim: s.dim(),
        density: matrix_to_pairs(s.matrix()),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("serializable");
    out.push('\n');
    out
}

pub fn save_state(path: &Path, s: &State) -> Result<(), CliError> {
    write(path, &serialize_state(s))
}

/// Parses `source target` lines into a map between the given outcome sets.
pub fn parse_outcome_map(text: &str, origin: &str, source: &[String], target: &[String]) -> Result<OutcomeMap, CliError> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            let col = line.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
            return Err(CliError::Parse(format!(
                "{origin}:{}:{col}: expected `source target`, found {} fields",
                n + 1,
                fields.len()
            )));
        }
        pairs.push((fields[0].to_string(), fields[1].to_string()));
    }
    OutcomeMap::from_pairs(source, target, &pairs).map_err(|e| CliError::Parse(format!("{origin}: {e}")))
}

pub fn load_outcome_map(path: &Path, source: &[String], target: &[String]) -> Result<OutcomeMap, CliError> {
    parse_outcome_map(&read(path)?, &path.display().to_string(), source, target)
}

/// `x` with 12 significant digits in fixed notation.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let decimals = |v: f64| (DIGITS - 1 - v.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{:.*}", decimals(x), x);
    // rounding can carry into a new leading digit
    let rounded: f64 = s.parse().expect("formatted float");
    if decimals(rounded) < decimals(x) {
        format!("{:.*}", decimals(rounded), x)
    } else {
        s
    }
}

/// CSV with a header row; every cell formatted by [`fmt_sig`].
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_sig).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
