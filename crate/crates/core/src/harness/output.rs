//! Report files. Each file is written to a temporary sibling and renamed
//! into place, so readers never see a partial report.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::OutputFormat;
use super::fixtures::FixtureReport;
use super::HarnessError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let file_name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{file_name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Writes `<dir>/<name>/report.json`; with [`OutputFormat::Csv`] also one
/// `trace_<k>.csv` per run. Returns the written paths.
pub fn write_report(
    report: &FixtureReport,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, HarnessError> {
    let base = dir.join(&report.name);
    let mut written = Vec::new();
    let report_path = base.join("report.json");
    write_json(&report_path, report)?;
    written.push(report_path);
    if format == OutputFormat::Csv {
        if let Some(exp) = &report.experiment {
            for (k, run) in exp.runs.iter().enumerate() {
                if let Some(result) = &run.result {
                    let path = base.join(format!("trace_{k}.csv"));
                    write_atomic(&path, result.trace.to_csv_string()?.as_bytes())?;
                    written.push(path);
                }
            }
        }
    }
    Ok(written)
}

/// Pretty JSON with a trailing newline, written atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let mut json = serde_json::to_vec_pretty(value)?;
    json.push(b'\n');
    write_atomic(path, &json)
}
