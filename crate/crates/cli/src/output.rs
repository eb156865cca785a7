use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// One CSV file per experiment family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Car,
    Norms,
    Bennett,
    Multiplier,
    Similarity,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Car,
        Family::Norms,
        Family::Bennett,
        Family::Multiplier,
        Family::Similarity,
    ];

    pub fn stem(self) -> &'static str {
        match self {
            Family::Car => "car",
            Family::Norms => "norms",
            Family::Bennett => "bennett",
            Family::Multiplier => "multiplier",
            Family::Similarity => "similarity",
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            Family::Car => &["modes", "dev_anti", "dev_mixed"],
            Family::Norms => &[
                "target",
                "N",
                "param",
                "method",
                "value",
                "iters",
                "converged",
            ],
            Family::Bennett => &[
                "sequence",
                "epsilon",
                "terms",
                "sum_a",
                "sum_b",
                "sum_c",
                "second_diff_partial",
                "verdict",
            ],
            Family::Multiplier => &["kind", "epsilon", "N", "witnesses", "lower_bound", "seed"],
            Family::Similarity => &[
                "N",
                "rho",
                "n_terms",
                "window",
                "residual_interior",
                "residual_full",
                "cond_L",
            ],
        }
    }
}

/// Reals with 17 significant digits, enough to round-trip any `f64`.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

/// CSV text (LF line endings, header first).
pub fn csv_text(family: Family, rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Internal(format!("csv encoding failed: {e}"));
    w.write_record(family.header()).map_err(fail)?;
    for r in rows {
        debug_assert_eq!(r.len(), family.header().len());
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Internal(format!("csv flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn json_text(report: &Value) -> CliResult<String> {
    let mut s =
        serde_json::to_string_pretty(report).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
