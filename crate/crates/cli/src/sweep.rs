//! Batch execution of a JSON job list.
//!
//! ```json
//! { "seed": 7, "jobs": [ { "id": 1, "command": "norm", "params": { "N": 32 } } ] }
//! ```
//!
//! Each job runs with seed `global ^ id`. Jobs run in parallel but every output
//! is ordered by job id, so the files are byte-identical across runs.

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult, Exit};
use crate::jobs::{run_job, JobCommand};
use crate::output::{csv_text, json_text, write_file, Family, SCHEMA_VERSION};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub seed: Option<u64>,
    pub jobs: Vec<SweepJob>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepJob {
    pub id: u64,
    pub command: String,
    #[serde(default)]
    pub params: Value,
}

pub fn load_spec(path: &Path) -> CliResult<SweepSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let spec: SweepSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let mut seen = BTreeSet::new();
    for job in &spec.jobs {
        if !seen.insert(job.id) {
            return Err(CliError::Invalid(format!("duplicate job id {}", job.id)));
        }
    }
    Ok(spec)
}

/// Runs every job, writes one CSV per family plus `sweep.json`, and returns
/// the worst job status.
pub fn run_sweep(spec: &SweepSpec, global_seed: u64, out_dir: &Path) -> CliResult<Exit> {
    let mut jobs: Vec<&SweepJob> = spec.jobs.iter().collect();
    jobs.sort_by_key(|j| j.id);

    let results: Vec<_> = jobs
        .par_iter()
        .map(|job| {
            let seed = global_seed ^ job.id;
            match JobCommand::from_json(&job.command, job.params.clone()) {
                Ok(cmd) => {
                    let out = run_job(&cmd, seed);
                    (job, seed, cmd.params_json(), Some(out), None)
                }
                Err(e) => (job, seed, job.params.clone(), None, Some(e)),
            }
        })
        .collect();

    let mut worst = Exit::Success;
    let mut entries = Vec::new();
    let mut rows: Vec<(Family, Vec<String>)> = Vec::new();
    for (job, seed, params, out, err) in results {
        let (exit, message, result) = match (out, err) {
            (Some(o), _) => {
                rows.extend(o.rows.into_iter().map(|r| (o.family, r)));
                (o.exit, o.message, o.result)
            }
            (None, Some(e)) => (e.exit(), Some(e.to_string()), Value::Null),
            (None, None) => unreachable!(),
        };
        if let Some(m) = &message {
            eprintln!("job {}: {m}", job.id);
        }
        worst = worst.max(exit);
        entries.push(json!({
            "id": job.id,
            "command": job.command,
            "seed": seed,
            "params": params,
            "exit_code": exit.code(),
            "message": message,
            "result": result,
        }));
    }

    for family in Family::ALL {
        let family_rows: Vec<Vec<String>> = rows
            .iter()
            .filter(|(f, _)| *f == family)
            .map(|(_, r)| r.clone())
            .collect();
        write_file(
            out_dir,
            &format!("{}.csv", family.stem()),
            &csv_text(family, &family_rows)?,
        )?;
    }
    let report = json!({
        "schema": SCHEMA_VERSION,
        "seed": global_seed,
        "exit_code": worst.code(),
        "jobs": entries,
    });
    write_file(out_dir, "sweep.json", &json_text(&report)?)?;
    Ok(worst)
}
